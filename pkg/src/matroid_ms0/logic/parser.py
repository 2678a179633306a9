"""Recursive-descent parser for the formula DSL.

Grammar (lowest precedence first)::

    formula := quant | iff
    quant   := ("exists" | "forall") IDENT "." formula
    iff     := imp ("<->" imp)*
    imp     := or ("->" imp)?            right associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | "(" formula ")" | quant | atom
    atom    := "Ind(" IDENT ")" | "Sing(" IDENT ")" | IDENT "<=" IDENT
             | "Union(" IDENT ("," IDENT)* ";" IDENT ")" | "Max(" IDENT ")"

A quantifier in operand position scopes as far right as possible.
"""

from __future__ import annotations

import re

from ..errors import FormationError, ParseError
from .formula import (
    And, Exists, Forall, Formula, Fresh, Iff, Imp, Ind, Max, Not, Or, Sing, Subseteq, Union, conj,
)

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|<=|[()!&|.,;])|(?P<word>[A-Za-z_][A-Za-z0-9_]*))"
)
KEYWORDS = {"exists", "forall", "Ind", "Sing", "Union", "Max"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        start = m.start("op") if m.group("op") else m.start("word")
        if m.group("op"):
            out.append(("op", m.group("op"), start))
        else:
            word = m.group("word")
            if word.startswith("_"):
                raise ParseError(f"names starting with '_' are reserved ({word})", start)
            out.append(("kw" if word in KEYWORDS else "id", word, start))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, strict: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.strict = strict
        names = {t[1] for t in self.toks if t[0] == "id"}
        self.fresh = Fresh(names)

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str):
        t = self.take()
        if t[1] != value or t[0] == "eof":
            raise ParseError(f"expected {value!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def ident(self):
        t = self.take()
        if t[0] != "id":
            raise ParseError(f"expected a variable name, found {t[1] or 'end of input'!r}", t[2])
        return t[1], t[2]

    def at(self, value: str) -> bool:
        t = self.peek()
        return t[0] != "eof" and t[1] == value

    def formal(self, pos: int, build):
        try:
            return build()
        except FormationError as e:
            raise FormationError(f"{e} (at position {pos})", e.variable) from None

    # grammar
    def formula(self) -> Formula:
        if self.peek()[1] in ("exists", "forall") and self.peek()[0] == "kw":
            return self.quant()
        return self.iff()

    def quant(self) -> Formula:
        _, q, pos = self.take()
        name, _ = self.ident()
        self.expect(".")
        body = self.formula()
        cls = Exists if q == "exists" else Forall
        return self.formal(pos, lambda: cls(name, body))

    def binary(self, sub, op, build):
        left = sub()
        while self.at(op):
            pos = self.take()[2]
            right = sub()
            left = self.formal(pos, lambda l=left, r=right: build(l, r))
        return left

    def iff(self):
        return self.binary(self.imp, "<->", lambda a, b: Iff(a, b, self.fresh, self.strict))

    def imp(self):
        left = self.or_()
        if self.at("->"):
            pos = self.take()[2]
            right = self.imp()
            return self.formal(pos, lambda: Imp(left, right, self.fresh, self.strict))
        return left

    def or_(self):
        return self.binary(self.and_, "|", lambda a, b: Or(a, b, self.fresh, self.strict))

    def and_(self):
        return self.binary(self.unary, "&", lambda a, b: conj(a, b, self.fresh, self.strict))

    def unary(self):
        t = self.peek()
        if t[1] == "!" and t[0] == "op":
            self.take()
            return Not(self.unary())
        if t[1] == "(" and t[0] == "op":
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        if t[0] == "kw" and t[1] in ("exists", "forall"):
            return self.quant()
        return self.atom()

    def atom(self):
        kind, word, pos = self.take()
        if kind == "kw" and word in ("Ind", "Sing", "Max"):
            self.expect("(")
            name, _ = self.ident()
            self.expect(")")
            if word == "Ind":
                return Ind(name)
            if word == "Sing":
                return Sing(name)
            return Max(name, self.fresh)
        if kind == "kw" and word == "Union":
            self.expect("(")
            parts = [self.ident()[0]]
            while self.at(","):
                self.take()
                parts.append(self.ident()[0])
            self.expect(";")
            target, _ = self.ident()
            self.expect(")")
            return Union(parts, target, self.fresh)
        if kind == "id":
            self.expect("<=")
            right, _ = self.ident()
            return Subseteq(word, right)
        raise ParseError(f"expected a formula, found {word or 'end of input'!r}", pos)


def parse(text: str, strict: bool = False) -> Formula:
    """Parse DSL text into a core formula.

    Derived connectives are expanded immediately; fresh bound variables are
    named _U1, _U2, ... .  With ``strict`` a conjunction whose sides clash
    on free/bound variables is rejected instead of repaired by renaming.
    """
    p = _Parser(text, strict)
    f = p.formula()
    t = p.peek()
    if t[0] != "eof":
        raise ParseError(f"unexpected {t[1]!r}", t[2])
    return f
