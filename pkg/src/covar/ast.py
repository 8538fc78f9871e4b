"""Abstract syntax for cpGCL programs and their expression sublanguages.

All nodes are immutable and compare structurally, so they can serve as
dictionary keys (the operational module deduplicates Markov-chain states
by structural equality).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

TAU = "tau"  # reserved run-time variable; programs may never touch it


# ---------------------------------------------------------------------------
# arithmetic expressions

class ArithExpr:
    __slots__ = ()


@dataclass(frozen=True)
class ALit(ArithExpr):
    value: Fraction


@dataclass(frozen=True)
class AVar(ArithExpr):
    name: str


@dataclass(frozen=True)
class ANeg(ArithExpr):
    operand: ArithExpr


@dataclass(frozen=True)
class AAdd(ArithExpr):
    left: ArithExpr
    right: ArithExpr


@dataclass(frozen=True)
class ASub(ArithExpr):
    left: ArithExpr
    right: ArithExpr


@dataclass(frozen=True)
class AMul(ArithExpr):
    left: ArithExpr
    right: ArithExpr


@dataclass(frozen=True)
class AMod(ArithExpr):
    left: ArithExpr
    right: ArithExpr


@dataclass(frozen=True)
class APow(ArithExpr):
    base: ArithExpr
    exponent: ArithExpr


# ---------------------------------------------------------------------------
# Boolean expressions

CMP_OPS = ("=", "!=", "<", "<=", ">", ">=")


class BoolExpr:
    __slots__ = ()


@dataclass(frozen=True)
class BLit(BoolExpr):
    value: bool


@dataclass(frozen=True)
class Cmp(BoolExpr):
    op: str
    left: ArithExpr
    right: ArithExpr

    def __post_init__(self):
        if self.op not in CMP_OPS:
            raise ValueError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class BNot(BoolExpr):
    operand: BoolExpr


@dataclass(frozen=True)
class BAnd(BoolExpr):
    left: BoolExpr
    right: BoolExpr


@dataclass(frozen=True)
class BOr(BoolExpr):
    left: BoolExpr
    right: BoolExpr


@dataclass(frozen=True)
class Parity(BoolExpr):
    odd: bool
    operand: ArithExpr


# ---------------------------------------------------------------------------
# programs

class Program:
    __slots__ = ()


@dataclass(frozen=True)
class Skip(Program):
    pass


@dataclass(frozen=True)
class Empty(Program):
    pass


@dataclass(frozen=True)
class Diverge(Program):
    pass


@dataclass(frozen=True)
class Halt(Program):
    pass


@dataclass(frozen=True)
class Assign(Program):
    name: str
    expr: ArithExpr

    def __post_init__(self):
        if self.name == TAU:
            raise ValueError(f"{TAU!r} is reserved and cannot be assigned")


@dataclass(frozen=True)
class Seq(Program):
    first: Program
    second: Program


@dataclass(frozen=True)
class If(Program):
    cond: BoolExpr
    then_body: Program
    else_body: Program


@dataclass(frozen=True)
class PChoice(Program):
    left: Program
    prob: Fraction
    right: Program

    def __post_init__(self):
        if not (0 <= self.prob <= 1):
            raise ValueError(f"probability {self.prob} outside [0, 1]")


@dataclass(frozen=True)
class While(Program):
    cond: BoolExpr
    body: Program


@dataclass(frozen=True)
class Observe(Program):
    cond: BoolExpr


@dataclass(frozen=True)
class BoundedWhile(Program):
    """while^{<k}: at most k guard evaluations, then halt.

    Internal derived form used by the unrolling machinery; it has no
    surface syntax and is never produced by the parser.
    """

    bound: int
    cond: BoolExpr
    body: Program

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("unrolling bound must be a natural number")


# ---------------------------------------------------------------------------
# traversals

def arith_vars(e: ArithExpr) -> frozenset[str]:
    if isinstance(e, ALit):
        return frozenset()
    if isinstance(e, AVar):
        return frozenset((e.name,))
    if isinstance(e, ANeg):
        return arith_vars(e.operand)
    if isinstance(e, (AAdd, ASub, AMul, AMod)):
        return arith_vars(e.left) | arith_vars(e.right)
    if isinstance(e, APow):
        return arith_vars(e.base) | arith_vars(e.exponent)
    raise TypeError(f"not an arithmetic expression: {e!r}")


def bool_vars(b: BoolExpr) -> frozenset[str]:
    if isinstance(b, BLit):
        return frozenset()
    if isinstance(b, Cmp):
        return arith_vars(b.left) | arith_vars(b.right)
    if isinstance(b, BNot):
        return bool_vars(b.operand)
    if isinstance(b, (BAnd, BOr)):
        return bool_vars(b.left) | bool_vars(b.right)
    if isinstance(b, Parity):
        return arith_vars(b.operand)
    raise TypeError(f"not a Boolean expression: {b!r}")


def program_vars(p: Program) -> frozenset[str]:
    """All variables assigned or read anywhere in the program."""
    if isinstance(p, (Skip, Empty, Diverge, Halt)):
        return frozenset()
    if isinstance(p, Assign):
        return frozenset((p.name,)) | arith_vars(p.expr)
    if isinstance(p, Seq):
        return program_vars(p.first) | program_vars(p.second)
    if isinstance(p, If):
        return bool_vars(p.cond) | program_vars(p.then_body) | program_vars(p.else_body)
    if isinstance(p, PChoice):
        return program_vars(p.left) | program_vars(p.right)
    if isinstance(p, (While, BoundedWhile)):
        return bool_vars(p.cond) | program_vars(p.body)
    if isinstance(p, Observe):
        return bool_vars(p.cond)
    raise TypeError(f"not a program: {p!r}")


def is_loop_free(p: Program) -> bool:
    if isinstance(p, (While, BoundedWhile)):
        return False
    if isinstance(p, Seq):
        return is_loop_free(p.first) and is_loop_free(p.second)
    if isinstance(p, If):
        return is_loop_free(p.then_body) and is_loop_free(p.else_body)
    if isinstance(p, PChoice):
        return is_loop_free(p.left) and is_loop_free(p.right)
    return True


# ---------------------------------------------------------------------------
# syntactic substitution

def subst_arith(e: ArithExpr, name: str, repl: ArithExpr) -> ArithExpr:
    if isinstance(e, ALit):
        return e
    if isinstance(e, AVar):
        return repl if e.name == name else e
    if isinstance(e, ANeg):
        return ANeg(subst_arith(e.operand, name, repl))
    if isinstance(e, AAdd):
        return AAdd(subst_arith(e.left, name, repl), subst_arith(e.right, name, repl))
    if isinstance(e, ASub):
        return ASub(subst_arith(e.left, name, repl), subst_arith(e.right, name, repl))
    if isinstance(e, AMul):
        return AMul(subst_arith(e.left, name, repl), subst_arith(e.right, name, repl))
    if isinstance(e, AMod):
        return AMod(subst_arith(e.left, name, repl), subst_arith(e.right, name, repl))
    if isinstance(e, APow):
        return APow(subst_arith(e.base, name, repl), subst_arith(e.exponent, name, repl))
    raise TypeError(f"not an arithmetic expression: {e!r}")


def subst_bool(b: BoolExpr, name: str, repl: ArithExpr) -> BoolExpr:
    if isinstance(b, BLit):
        return b
    if isinstance(b, Cmp):
        return Cmp(b.op, subst_arith(b.left, name, repl), subst_arith(b.right, name, repl))
    if isinstance(b, BNot):
        return BNot(subst_bool(b.operand, name, repl))
    if isinstance(b, BAnd):
        return BAnd(subst_bool(b.left, name, repl), subst_bool(b.right, name, repl))
    if isinstance(b, BOr):
        return BOr(subst_bool(b.left, name, repl), subst_bool(b.right, name, repl))
    if isinstance(b, Parity):
        return Parity(b.odd, subst_arith(b.operand, name, repl))
    raise TypeError(f"not a Boolean expression: {b!r}")
