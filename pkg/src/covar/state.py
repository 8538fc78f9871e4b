"""Program states and exact extended-rational arithmetic.

States are total maps from program variables (plus the reserved run-time
variable tau) to exact rationals.  All arithmetic is exact; the paper's
golden values must be matched by equality, never by tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .ast import (AAdd, ALit, AMod, AMul, ANeg, APow, ASub, AVar, ArithExpr,
                  BAnd, BLit, BNot, BOr, BoolExpr, Cmp, Parity, TAU)
from .errors import EvalError


def format_fraction(q: Fraction) -> str:
    """Render a rational as "num/den" ("num" when the denominator is 1)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class ExtReal:
    """A non-negative rational extended with infinity.

    The algebra follows the paper's conventions: 0 * inf = 0 and
    x + inf = inf.  Division never lives here; the bound computations
    handle quotients (and the 0/0 = 0 convention) at top level.
    """

    __slots__ = ("_value",)

    def __init__(self, value: Fraction | int | None = 0):
        if value is not None:
            value = Fraction(value)
            if value < 0:
                raise EvalError(f"extended reals are non-negative, got {value}")
        self._value = value

    @property
    def is_infinite(self) -> bool:
        return self._value is None

    @property
    def value(self) -> Fraction:
        if self._value is None:
            raise EvalError("infinite value has no finite magnitude")
        return self._value

    def __add__(self, other: "ExtReal") -> "ExtReal":
        if self.is_infinite or other.is_infinite:
            return INFINITY
        return ExtReal(self._value + other._value)

    def __mul__(self, other: "ExtReal") -> "ExtReal":
        # 0 * inf = 0, per Definition 2's conventions
        if (self._value == 0) or (other._value == 0):
            return ZERO
        if self.is_infinite or other.is_infinite:
            return INFINITY
        return ExtReal(self._value * other._value)

    def _key(self):
        return (1,) if self.is_infinite else (0, self._value)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtReal) and self._key() == other._key()

    def __lt__(self, other: "ExtReal") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "ExtReal") -> bool:
        return self._key() <= other._key()

    def __hash__(self):
        return hash(self._key())

    def __bool__(self) -> bool:
        return self.is_infinite or self._value != 0

    def __str__(self) -> str:
        return "inf" if self.is_infinite else format_fraction(self._value)

    def __repr__(self) -> str:
        return f"ExtReal({self})"


ZERO = ExtReal(0)
ONE = ExtReal(1)
INFINITY = ExtReal(None)


class State(Mapping[str, Fraction]):
    """Immutable total map from variable names to exact rationals.

    tau is always present (defaulting to 0) and keys are kept sorted so
    that equal states hash equally and exports are deterministic.
    """

    __slots__ = ("_items", "_lookup")

    def __init__(self, values: Mapping[str, Fraction] | Iterable[tuple[str, Fraction]] = ()):
        lookup = {name: Fraction(v) for name, v in
                  (values.items() if isinstance(values, Mapping) else values)}
        lookup.setdefault(TAU, Fraction(0))
        items = tuple(sorted(lookup.items()))
        object.__setattr__(self, "_items", items)
        object.__setattr__(self, "_lookup", lookup)

    def __getitem__(self, name: str) -> Fraction:
        try:
            return self._lookup[name]
        except KeyError:
            raise EvalError(f"variable {name!r} not present in state") from None

    def __iter__(self) -> Iterator[str]:
        return iter(name for name, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other) -> bool:
        return isinstance(other, State) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def set(self, name: str, value: Fraction) -> "State":
        return State(dict(self._lookup, **{name: Fraction(value)}))

    @property
    def tau(self) -> Fraction:
        return self._lookup[TAU]

    def bump_tau(self) -> "State":
        return self.set(TAU, self.tau + 1)

    def to_json_dict(self) -> dict[str, str]:
        return {name: format_fraction(v) for name, v in self._items}

    @classmethod
    def from_json_dict(cls, data: Mapping[str, str]) -> "State":
        return cls({name: Fraction(str(v)) for name, v in data.items()})

    @classmethod
    def initial(cls, variables: Iterable[str],
                overrides: Mapping[str, Fraction] | None = None) -> "State":
        """Total state over the given variables, zero unless overridden."""
        values = {name: Fraction(0) for name in variables}
        if overrides:
            values.update({name: Fraction(v) for name, v in overrides.items()})
        return cls(values)

    def __str__(self) -> str:
        return ", ".join(f"{name}={format_fraction(v)}" for name, v in self._items)

    def __repr__(self) -> str:
        return f"State({{{self}}})"


def _as_integer(value: Fraction, context: str) -> int:
    if value.denominator != 1:
        raise EvalError(f"{context} requires an integer-valued operand, got {value}")
    return value.numerator


def eval_arith(e: ArithExpr, sigma: State) -> Fraction:
    if isinstance(e, ALit):
        return e.value
    if isinstance(e, AVar):
        return sigma[e.name]
    if isinstance(e, ANeg):
        return -eval_arith(e.operand, sigma)
    if isinstance(e, AAdd):
        return eval_arith(e.left, sigma) + eval_arith(e.right, sigma)
    if isinstance(e, ASub):
        return eval_arith(e.left, sigma) - eval_arith(e.right, sigma)
    if isinstance(e, AMul):
        return eval_arith(e.left, sigma) * eval_arith(e.right, sigma)
    if isinstance(e, AMod):
        left = _as_integer(eval_arith(e.left, sigma), "mod")
        right = _as_integer(eval_arith(e.right, sigma), "mod")
        if right == 0:
            raise EvalError("mod by zero")
        return Fraction(left % right)
    if isinstance(e, APow):
        base = _as_integer(eval_arith(e.base, sigma), "power")
        exponent = _as_integer(eval_arith(e.exponent, sigma), "power")
        if exponent < 0:
            raise EvalError(f"power requires a natural exponent, got {exponent}")
        return Fraction(base ** exponent)
    raise TypeError(f"not an arithmetic expression: {e!r}")


def eval_bool(b: BoolExpr, sigma: State) -> bool:
    if isinstance(b, BLit):
        return b.value
    if isinstance(b, Cmp):
        left = eval_arith(b.left, sigma)
        right = eval_arith(b.right, sigma)
        if b.op == "=":
            return left == right
        if b.op == "!=":
            return left != right
        if b.op == "<":
            return left < right
        if b.op == "<=":
            return left <= right
        if b.op == ">":
            return left > right
        return left >= right
    if isinstance(b, BNot):
        return not eval_bool(b.operand, sigma)
    if isinstance(b, BAnd):
        return eval_bool(b.left, sigma) and eval_bool(b.right, sigma)
    if isinstance(b, BOr):
        return eval_bool(b.left, sigma) or eval_bool(b.right, sigma)
    if isinstance(b, Parity):
        value = _as_integer(eval_arith(b.operand, sigma), "odd/even")
        return (value % 2 == 1) if b.odd else (value % 2 == 0)
    raise TypeError(f"not a Boolean expression: {b!r}")
