"""Concrete syntax: lexer, parsers, and pretty-printers.

Surface syntax mirrors the usual cpGCL listings: `:=` assignment,
`{A} [p] {B}` probabilistic choice, `observe(B)`, `&&`/`||`/`!`,
`odd(e)`/`even(e)` parity primitives, `#` line comments.  Probabilities
and constants may be written as decimals or fractions; both parse to
exact rationals (0.5 and 1/2 are the same literal).

The pretty-printer emits a canonical form that parses back to a
structurally equal tree.  Sequencing is printed flat, so the law holds
on right-associated trees (which is all the parser ever produces).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .ast import (AAdd, ALit, AMod, AMul, ANeg, APow, ASub, AVar, ArithExpr,
                  Assign, BAnd, BLit, BNot, BOr, BoolExpr, BoundedWhile, Cmp,
                  Diverge, Empty, Halt, If, Observe, Parity, PChoice, Program,
                  Seq, Skip, TAU, While)
from .errors import ParseError
from .expectation import (EAdd, EArith, EConst, EMul, EVar, Expectation,
                          Iverson)
from .state import INFINITY, ExtReal, format_fraction

KEYWORDS = frozenset({
    "skip", "empty", "diverge", "halt", "if", "else", "while", "observe",
    "odd", "even", "true", "false", "mod", "inf",
})

_SYMBOLS = (":=", "!=", "==", "<=", ">=", "&&", "||",
            ";", "{", "}", "[", "]", "(", ")", "+", "-", "*", "^", "<", ">", "=", "!")

_NUMBER = re.compile(r"\d+\.\d+|\d+/\d+|\d+")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class Token:
    kind: str  # "number" | "ident" | "keyword" | "symbol" | "eof"
    text: str
    line: int
    column: int
    value: Fraction | None = None


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    col = 1
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch == "\n":
            pos += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            pos += 1
            col += 1
            continue
        if ch == "#":
            while pos < n and text[pos] != "\n":
                pos += 1
            continue
        m = _NUMBER.match(text, pos)
        if m:
            tokens.append(Token("number", m.group(), line, col, Fraction(m.group())))
            col += len(m.group())
            pos = m.end()
            continue
        m = _IDENT.match(text, pos)
        if m:
            word = m.group()
            kind = "keyword" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, line, col))
            col += len(word)
            pos = m.end()
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, pos):
                tokens.append(Token("symbol", sym, line, col))
                col += len(sym)
                pos += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_tau: bool):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.allow_tau = allow_tau

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_symbol(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "symbol" and tok.text == text

    def at_keyword(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "keyword" and tok.text == text

    def accept_symbol(self, text: str) -> bool:
        if self.at_symbol(text):
            self.pos += 1
            return True
        return False

    def expect_symbol(self, text: str) -> Token:
        if not self.at_symbol(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def expect_keyword(self, text: str) -> Token:
        if not self.at_keyword(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def error(self, message: str):
        tok = self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.column)

    def expect_eof(self):
        if self.peek().kind != "eof":
            self.error("expected end of input")

    def ident(self) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            self.error("expected an identifier")
        if tok.text == TAU and not self.allow_tau:
            raise ParseError(
                f"{TAU!r} is the reserved run-time variable and not accessible "
                "by programs", tok.line, tok.column)
        self.advance()
        return tok.text

    # -- programs ----------------------------------------------------------

    def program(self) -> Program:
        stmts = [self.statement()]
        while self.accept_symbol(";"):
            stmts.append(self.statement())
        prog = stmts[-1]
        for stmt in reversed(stmts[:-1]):
            prog = Seq(stmt, prog)
        return prog

    def statement(self) -> Program:
        tok = self.peek()
        if tok.kind == "keyword":
            if tok.text == "skip":
                self.advance()
                return Skip()
            if tok.text == "empty":
                self.advance()
                return Empty()
            if tok.text == "diverge":
                self.advance()
                return Diverge()
            if tok.text == "halt":
                self.advance()
                return Halt()
            if tok.text == "if":
                self.advance()
                self.expect_symbol("(")
                cond = self.bool_expr()
                self.expect_symbol(")")
                self.expect_symbol("{")
                then_body = self.program()
                self.expect_symbol("}")
                self.expect_keyword("else")
                self.expect_symbol("{")
                else_body = self.program()
                self.expect_symbol("}")
                return If(cond, then_body, else_body)
            if tok.text == "while":
                self.advance()
                self.expect_symbol("(")
                cond = self.bool_expr()
                self.expect_symbol(")")
                self.expect_symbol("{")
                body = self.program()
                self.expect_symbol("}")
                return While(cond, body)
            if tok.text == "observe":
                self.advance()
                self.expect_symbol("(")
                cond = self.bool_expr()
                self.expect_symbol(")")
                return Observe(cond)
            self.error("expected a statement")
        if tok.kind == "symbol" and tok.text == "{":
            self.advance()
            left = self.program()
            self.expect_symbol("}")
            self.expect_symbol("[")
            prob = self.probability()
            self.expect_symbol("]")
            self.expect_symbol("{")
            right = self.program()
            self.expect_symbol("}")
            return PChoice(left, prob, right)
        if tok.kind == "ident":
            name = self.ident()
            self.expect_symbol(":=")
            return Assign(name, self.arith())
        self.error("expected a statement")

    def probability(self) -> Fraction:
        tok = self.peek()
        if tok.kind != "number":
            self.error("expected a probability literal")
        if not (0 <= tok.value <= 1):
            raise ParseError(f"probability literal {tok.text} outside [0, 1]",
                             tok.line, tok.column)
        self.advance()
        return tok.value

    # -- Boolean expressions -----------------------------------------------

    def bool_expr(self) -> BoolExpr:
        expr = self.bool_term()
        while self.accept_symbol("||"):
            expr = BOr(expr, self.bool_term())
        return expr

    def bool_term(self) -> BoolExpr:
        expr = self.bool_factor()
        while self.accept_symbol("&&"):
            expr = BAnd(expr, self.bool_factor())
        return expr

    def bool_factor(self) -> BoolExpr:
        tok = self.peek()
        if self.accept_symbol("!"):
            return BNot(self.bool_factor())
        if tok.kind == "keyword" and tok.text in ("true", "false"):
            self.advance()
            return BLit(tok.text == "true")
        if tok.kind == "keyword" and tok.text in ("odd", "even"):
            self.advance()
            self.expect_symbol("(")
            operand = self.arith()
            self.expect_symbol(")")
            return Parity(tok.text == "odd", operand)
        # Either a comparison or a parenthesised Boolean expression; the
        # two can only be told apart after the fact, so try the comparison
        # and fall back on '(' bexp ')'.
        saved = self.pos
        try:
            return self.comparison()
        except ParseError:
            self.pos = saved
            if not self.at_symbol("("):
                raise
        self.advance()
        expr = self.bool_expr()
        self.expect_symbol(")")
        return expr

    def comparison(self) -> BoolExpr:
        left = self.arith()
        tok = self.peek()
        if tok.kind == "symbol" and tok.text in ("=", "==", "!=", "<", "<=", ">", ">="):
            self.advance()
            op = "=" if tok.text == "==" else tok.text
            return Cmp(op, left, self.arith())
        self.error("expected a comparison operator")

    # -- arithmetic expressions ---------------------------------------------

    def arith(self) -> ArithExpr:
        expr = self.term()
        while True:
            if self.accept_symbol("+"):
                expr = AAdd(expr, self.term())
            elif self.accept_symbol("-"):
                expr = ASub(expr, self.term())
            else:
                return expr

    def term(self) -> ArithExpr:
        expr = self.factor()
        while True:
            if self.accept_symbol("*"):
                expr = AMul(expr, self.factor())
            elif self.at_keyword("mod"):
                self.advance()
                expr = AMod(expr, self.factor())
            else:
                return expr

    def factor(self) -> ArithExpr:
        if self.accept_symbol("-"):
            return ANeg(self.factor())
        base = self.atom()
        if self.accept_symbol("^"):
            return APow(base, self.factor())
        return base

    def atom(self) -> ArithExpr:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return ALit(tok.value)
        if tok.kind == "ident":
            return AVar(self.ident())
        if self.accept_symbol("("):
            expr = self.arith()
            self.expect_symbol(")")
            return expr
        self.error("expected a number, variable, or '('")

    # -- expectations --------------------------------------------------------

    def expectation(self) -> Expectation:
        expr = self.e_term()
        while self.accept_symbol("+"):
            expr = EAdd(expr, self.e_term())
        return expr

    def e_term(self) -> Expectation:
        expr = self.e_factor()
        while self.accept_symbol("*"):
            expr = EMul(expr, self.e_factor())
        return expr

    def e_factor(self) -> Expectation:
        tok = self.peek()
        if tok.kind == "symbol" and tok.text == "-":
            raise ParseError("expectations are non-negative; negative constants "
                             "and subtraction are not allowed", tok.line, tok.column)
        if tok.kind == "number":
            self.advance()
            return EConst(ExtReal(tok.value))
        if self.at_keyword("inf"):
            self.advance()
            return EConst(INFINITY)
        if tok.kind == "ident":
            self.advance()
            return EVar(tok.text)
        if self.accept_symbol("["):
            cond = self.bool_expr()
            self.expect_symbol("]")
            return Iverson(cond)
        if self.accept_symbol("("):
            expr = self.expectation()
            self.expect_symbol(")")
            return expr
        self.error("expected a constant, variable, '[', or '('")


def parse_program(text: str) -> Program:
    parser = _Parser(text, allow_tau=False)
    prog = parser.program()
    parser.expect_eof()
    return prog


def parse_expectation(text: str) -> Expectation:
    parser = _Parser(text, allow_tau=True)
    expr = parser.expectation()
    parser.expect_eof()
    return expr


def parse_bool(text: str) -> BoolExpr:
    parser = _Parser(text, allow_tau=True)
    expr = parser.bool_expr()
    parser.expect_eof()
    return expr


# ---------------------------------------------------------------------------
# pretty-printing

_ARITH_PREC = {ALit: 5, AVar: 5, APow: 4, ANeg: 3, AMul: 2, AMod: 2, AAdd: 1, ASub: 1}


def _arith(e: ArithExpr, ctx: int) -> str:
    if isinstance(e, ALit):
        text = format_fraction(e.value)
    elif isinstance(e, AVar):
        text = e.name
    elif isinstance(e, ANeg):
        text = "-" + _arith(e.operand, 3)
    elif isinstance(e, AAdd):
        text = f"{_arith(e.left, 1)} + {_arith(e.right, 2)}"
    elif isinstance(e, ASub):
        text = f"{_arith(e.left, 1)} - {_arith(e.right, 2)}"
    elif isinstance(e, AMul):
        text = f"{_arith(e.left, 2)} * {_arith(e.right, 3)}"
    elif isinstance(e, AMod):
        text = f"{_arith(e.left, 2)} mod {_arith(e.right, 3)}"
    elif isinstance(e, APow):
        text = f"{_arith(e.base, 5)} ^ {_arith(e.exponent, 3)}"
    else:
        raise TypeError(f"not an arithmetic expression: {e!r}")
    if _ARITH_PREC[type(e)] < ctx:
        return f"({text})"
    return text


def arith_to_text(e: ArithExpr) -> str:
    return _arith(e, 0)


_BOOL_PREC = {BLit: 4, Cmp: 4, Parity: 4, BNot: 3, BAnd: 2, BOr: 1}


def _bool(b: BoolExpr, ctx: int) -> str:
    if isinstance(b, BLit):
        text = "true" if b.value else "false"
    elif isinstance(b, Cmp):
        text = f"{_arith(b.left, 0)} {b.op} {_arith(b.right, 0)}"
    elif isinstance(b, Parity):
        text = f"{'odd' if b.odd else 'even'}({arith_to_text(b.operand)})"
    elif isinstance(b, BNot):
        inner = f"({_bool(b.operand, 0)})" if isinstance(b.operand, Cmp) \
            else _bool(b.operand, 3)
        text = "!" + inner
    elif isinstance(b, BAnd):
        text = f"{_bool(b.left, 2)} && {_bool(b.right, 3)}"
    elif isinstance(b, BOr):
        text = f"{_bool(b.left, 1)} || {_bool(b.right, 2)}"
    else:
        raise TypeError(f"not a Boolean expression: {b!r}")
    if _BOOL_PREC[type(b)] < ctx:
        return f"({text})"
    return text


def bool_to_text(b: BoolExpr) -> str:
    return _bool(b, 0)


def _statements(p: Program) -> list[Program]:
    if isinstance(p, Seq):
        return _statements(p.first) + _statements(p.second)
    return [p]


def _statement_text(p: Program, display: bool) -> str:
    if isinstance(p, Skip):
        return "skip"
    if isinstance(p, Empty):
        return "empty"
    if isinstance(p, Diverge):
        return "diverge"
    if isinstance(p, Halt):
        return "halt"
    if isinstance(p, Assign):
        return f"{p.name} := {arith_to_text(p.expr)}"
    if isinstance(p, PChoice):
        return (f"{{{_program_text(p.left, display)}}} [{format_fraction(p.prob)}] "
                f"{{{_program_text(p.right, display)}}}")
    if isinstance(p, If):
        return (f"if ({bool_to_text(p.cond)}) {{{_program_text(p.then_body, display)}}} "
                f"else {{{_program_text(p.else_body, display)}}}")
    if isinstance(p, While):
        return f"while ({bool_to_text(p.cond)}) {{{_program_text(p.body, display)}}}"
    if isinstance(p, Observe):
        return f"observe({bool_to_text(p.cond)})"
    if isinstance(p, BoundedWhile):
        if not display:
            raise ValueError("bounded while loops have no surface syntax")
        return f"while^<{p.bound}> ({bool_to_text(p.cond)}) {{{_program_text(p.body, True)}}}"
    raise TypeError(f"not a program: {p!r}")


def _program_text(p: Program, display: bool) -> str:
    return "; ".join(_statement_text(s, display) for s in _statements(p))


def program_to_text(p: Program) -> str:
    """Canonical surface form; parse_program(program_to_text(p)) == p for
    right-associated trees.  Rejects the internal bounded-while form."""
    return _program_text(p, display=False)


def program_label(p: Program) -> str:
    """Display-only rendering that also covers bounded while loops."""
    return _program_text(p, display=True)


_EXP_PREC = {EConst: 3, EVar: 3, Iverson: 3, EArith: 3, EMul: 2, EAdd: 1}


def _exp(f: Expectation, ctx: int) -> str:
    if isinstance(f, EConst):
        text = str(f.value)
    elif isinstance(f, EVar):
        text = f.name
    elif isinstance(f, Iverson):
        text = f"[{bool_to_text(f.cond)}]"
    elif isinstance(f, EArith):
        # display only: embedded arithmetic has no expectation surface syntax
        text = f"({arith_to_text(f.expr)})"
    elif isinstance(f, EAdd):
        text = f"{_exp(f.left, 1)} + {_exp(f.right, 2)}"
    elif isinstance(f, EMul):
        text = f"{_exp(f.left, 2)} * {_exp(f.right, 3)}"
    else:
        raise TypeError(f"not an expectation: {f!r}")
    if _EXP_PREC[type(f)] < ctx:
        return f"({text})"
    return text


def expectation_to_text(f: Expectation) -> str:
    return _exp(f, 0)
