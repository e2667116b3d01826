"""Recursive-descent parser for the formula grammar.

::

    formula := quant | implication
    quant   := ("A" | "E") var "." formula
    implication := disjunction [ "->" formula ]          (right associative)
    disjunction := conjunction { "|" conjunction }
    conjunction := unary { "&" unary }
    unary   := "!" unary | "(" formula ")" | quant | term "=" term
    term    := factor { "*" factor }
    factor  := primary { "^" ["-"] digits }
    primary := var | "1" | "(" term ")" | "[" term "," term "]"

``#`` starts a comment running to the end of the line. ``A`` and ``E`` are
reserved. Offsets in error messages are 0-based character positions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import FormulaSyntaxError
from .syntax import (And, Eq, Exists, Forall, Formula, Implies, Inv, Mul, Not, One, Or,
                     Pow, Term, Var, commutator)

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<arrow>->)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[()\[\],.=*^!&|-])
""", re.VERBOSE)

RESERVED = {"A", "E"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "arrow", "ident") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def error(self, msg: str) -> FormulaSyntaxError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return FormulaSyntaxError(f"{msg}, found {found}", t.pos)

    # formulas

    def formula(self) -> Formula:
        if self.at("A") or self.at("E"):
            return self.quant()
        return self.implication()

    def quant(self) -> Formula:
        q = self.tok.text
        self.i += 1
        name = self.variable()
        self.expect(".")
        body = self.formula()
        return Exists(name, body) if q == "E" else Forall(name, body)

    def variable(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in RESERVED:
            raise self.error("expected variable")
        self.i += 1
        return t.text

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.at("|"):
            self.i += 1
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.at("&"):
            self.i += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        if self.at("!"):
            self.i += 1
            return Not(self.unary())
        if self.at("A") or self.at("E"):
            return self.quant()
        if self.at("("):
            # either a parenthesized formula or an equation whose left term starts with "("
            start = self.i
            try:
                return self.equation()
            except FormulaSyntaxError as term_err:
                self.i = start
                try:
                    self.expect("(")
                    f = self.formula()
                    self.expect(")")
                    return f
                except FormulaSyntaxError as form_err:
                    raise term_err if term_err.position > form_err.position else form_err
        return self.equation()

    def equation(self) -> Formula:
        left = self.term()
        self.expect("=")
        return Eq(left, self.term())

    # terms

    def term(self) -> Term:
        t = self.factor()
        while self.at("*"):
            self.i += 1
            t = Mul(t, self.factor())
        return t

    def factor(self) -> Term:
        t = self.primary()
        while self.at("^"):
            self.i += 1
            neg = False
            if self.at("-"):
                self.i += 1
                neg = True
            if self.tok.kind != "int":
                raise self.error("expected integer exponent")
            k = int(self.tok.text)
            self.i += 1
            k = -k if neg else k
            t = Inv(t) if k == -1 else Pow(t, k)
        return t

    def primary(self) -> Term:
        t = self.tok
        if t.kind == "int":
            if t.text != "1":
                raise self.error("only the constant 1 is a term")
            self.i += 1
            return One()
        if t.kind == "ident" and t.text not in RESERVED:
            self.i += 1
            return Var(t.text)
        if self.at("("):
            self.i += 1
            inner = self.term()
            self.expect(")")
            return inner
        if self.at("["):
            self.i += 1
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect("]")
            return commutator(a, b)
        raise self.error("expected term")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    if p.tok.kind == "eof":
        raise p.error("empty formula")
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return t
