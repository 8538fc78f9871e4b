"""The expectation language: random variables over program states.

Expectations are built from non-negative rational constants, infinity,
variables (including tau), Iverson brackets of Boolean expressions, sums
and products.  Substitution may embed arbitrary program arithmetic (an
assignment can subtract), so a dedicated embedded-arithmetic leaf keeps
the language closed under the transformer rules; it has no surface
syntax and evaluation rejects negative values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .ast import (AAdd, ALit, AMul, ArithExpr, AVar, BoolExpr, bool_vars,
                  arith_vars, subst_arith, subst_bool)
from .errors import EvalError
from .state import INFINITY, ExtReal, State, ZERO as _EXT_ZERO, eval_arith, eval_bool


class Expectation:
    __slots__ = ()


@dataclass(frozen=True)
class EConst(Expectation):
    value: ExtReal


@dataclass(frozen=True)
class EVar(Expectation):
    name: str


@dataclass(frozen=True)
class Iverson(Expectation):
    cond: BoolExpr


@dataclass(frozen=True)
class EAdd(Expectation):
    left: Expectation
    right: Expectation


@dataclass(frozen=True)
class EMul(Expectation):
    left: Expectation
    right: Expectation


@dataclass(frozen=True)
class EArith(Expectation):
    """Embedded program arithmetic; internal result of substitution."""

    expr: ArithExpr


ZERO = EConst(_EXT_ZERO)
ONE = EConst(ExtReal(1))


def const(q: Fraction | int) -> EConst:
    return EConst(ExtReal(Fraction(q)))


def evaluate(f: Expectation, sigma: State) -> ExtReal:
    """Exact extended-rational value of f at sigma; 0 * inf = 0 applies."""
    if isinstance(f, EConst):
        return f.value
    if isinstance(f, EVar):
        v = sigma[f.name]
        if v < 0:
            raise EvalError(f"expectation evaluated negative: {f.name} = {v}")
        return ExtReal(v)
    if isinstance(f, Iverson):
        return ExtReal(1 if eval_bool(f.cond, sigma) else 0)
    if isinstance(f, EAdd):
        return evaluate(f.left, sigma) + evaluate(f.right, sigma)
    if isinstance(f, EMul):
        return evaluate(f.left, sigma) * evaluate(f.right, sigma)
    if isinstance(f, EArith):
        v = eval_arith(f.expr, sigma)
        if v < 0:
            raise EvalError(f"expectation evaluated negative: {v}")
        return ExtReal(v)
    raise TypeError(f"not an expectation: {f!r}")


def expectation_from_arith(e: ArithExpr) -> Expectation:
    """Convert program arithmetic to expectation form where the grammar
    allows (+, *, variables, non-negative literals), embedding the rest."""
    if isinstance(e, ALit) and e.value >= 0:
        return EConst(ExtReal(e.value))
    if isinstance(e, AVar):
        return EVar(e.name)
    if isinstance(e, AAdd):
        return EAdd(expectation_from_arith(e.left), expectation_from_arith(e.right))
    if isinstance(e, AMul):
        return EMul(expectation_from_arith(e.left), expectation_from_arith(e.right))
    return EArith(e)


def substitute(f: Expectation, name: str, repl: ArithExpr) -> Expectation:
    """Syntactic replacement f[name/repl], including inside Iverson brackets.

    Satisfies evaluate(substitute(f, x, e), s) = evaluate(f, s[x -> eval(e, s)]).
    """
    if isinstance(f, EConst):
        return f
    if isinstance(f, EVar):
        return expectation_from_arith(repl) if f.name == name else f
    if isinstance(f, Iverson):
        return Iverson(subst_bool(f.cond, name, repl))
    if isinstance(f, EAdd):
        return EAdd(substitute(f.left, name, repl), substitute(f.right, name, repl))
    if isinstance(f, EMul):
        return EMul(substitute(f.left, name, repl), substitute(f.right, name, repl))
    if isinstance(f, EArith):
        return EArith(subst_arith(f.expr, name, repl))
    raise TypeError(f"not an expectation: {f!r}")


def expectation_vars(f: Expectation) -> frozenset[str]:
    if isinstance(f, EConst):
        return frozenset()
    if isinstance(f, EVar):
        return frozenset((f.name,))
    if isinstance(f, Iverson):
        return bool_vars(f.cond)
    if isinstance(f, (EAdd, EMul)):
        return expectation_vars(f.left) | expectation_vars(f.right)
    if isinstance(f, EArith):
        return arith_vars(f.expr)
    raise TypeError(f"not an expectation: {f!r}")


ValueFn = Callable[[State], ExtReal]


def as_value_fn(f: "Expectation | ValueFn") -> ValueFn:
    if isinstance(f, Expectation):
        return lambda sigma: evaluate(f, sigma)
    return f


@dataclass(frozen=True)
class LeqCounterexample:
    state: State
    left: ExtReal
    right: ExtReal


@dataclass(frozen=True)
class LeqReport:
    """Outcome of a pointwise f <= g sweep over a finite state set.

    `holds` only ever means "holds on the tested states"; the relation is
    not decidable over all states and no claim of proof is made.
    """

    holds: bool
    states_tested: int
    counterexamples: tuple[LeqCounterexample, ...]
    errors: tuple[tuple[State, str], ...]


def pointwise_leq(f: "Expectation | ValueFn", g: "Expectation | ValueFn",
                  states: Iterable[State]) -> LeqReport:
    """Check f <= g at each supplied state; evaluation errors are recorded
    per state without aborting the sweep."""
    fv = as_value_fn(f)
    gv = as_value_fn(g)
    counterexamples: list[LeqCounterexample] = []
    errors: list[tuple[State, str]] = []
    tested = 0
    for sigma in states:
        tested += 1
        try:
            left = fv(sigma)
            right = gv(sigma)
        except EvalError as exc:
            errors.append((sigma, str(exc)))
            continue
        if not left <= right:
            counterexamples.append(LeqCounterexample(sigma, left, right))
    if tested == 0:
        raise ValueError("pointwise_leq needs a non-empty state set")
    return LeqReport(not counterexamples, tested, tuple(counterexamples), tuple(errors))
