"""MS0 abstract syntax with variable bookkeeping and the derived connectives.

Only seven node types exist.  Disjunction, implication, equivalence, Union
and Max are functions that build core nodes, so every consumer sees the core
language.  Constructors enforce the formation rules: a conjunction may not
have a variable free on one side and bound on the other, and a quantifier
must bind a variable that is free in its body.
"""

from __future__ import annotations

import re
import weakref
from dataclasses import dataclass, field
from typing import Iterable

from ..errors import FormationError, InputError

IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*|_U[0-9]+")


def _check_name(v: str) -> str:
    if not isinstance(v, str) or not IDENT.fullmatch(v):
        raise InputError(f"invalid variable name {v!r}")
    return v


class Formula:
    """Base class; subclasses are frozen dataclasses."""

    var: frozenset
    fr: frozenset

    @property
    def bound(self) -> frozenset:
        return self.var - self.fr

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Subseteq(Formula):
    left: str
    right: str
    var: frozenset = field(init=False, repr=False, compare=False)
    fr: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        s = frozenset((_check_name(self.left), _check_name(self.right)))
        object.__setattr__(self, "var", s)
        object.__setattr__(self, "fr", s)


@dataclass(frozen=True)
class Sing(Formula):
    name: str
    var: frozenset = field(init=False, repr=False, compare=False)
    fr: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        s = frozenset((_check_name(self.name),))
        object.__setattr__(self, "var", s)
        object.__setattr__(self, "fr", s)


@dataclass(frozen=True)
class Ind(Formula):
    name: str
    var: frozenset = field(init=False, repr=False, compare=False)
    fr: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        s = frozenset((_check_name(self.name),))
        object.__setattr__(self, "var", s)
        object.__setattr__(self, "fr", s)


@dataclass(frozen=True)
class Not(Formula):
    body: Formula
    var: frozenset = field(init=False, repr=False, compare=False)
    fr: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "var", self.body.var)
        object.__setattr__(self, "fr", self.body.fr)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    var: frozenset = field(init=False, repr=False, compare=False)
    fr: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        clash = (self.left.fr & self.right.bound) | (self.right.fr & self.left.bound)
        if clash:
            v = min(clash)
            raise FormationError(f"variable {v} is free on one side of a conjunction and bound on the other", v)
        object.__setattr__(self, "var", self.left.var | self.right.var)
        object.__setattr__(self, "fr", self.left.fr | self.right.fr)


@dataclass(frozen=True)
class _Quant(Formula):
    name: str
    body: Formula
    var: frozenset = field(init=False, repr=False, compare=False)
    fr: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_name(self.name)
        if self.name not in self.body.fr:
            raise FormationError(f"quantified variable {self.name} is not free in its scope", self.name)
        object.__setattr__(self, "var", self.body.var)
        object.__setattr__(self, "fr", self.body.fr - {self.name})


@dataclass(frozen=True)
class Exists(_Quant):
    pass


@dataclass(frozen=True)
class Forall(_Quant):
    pass


ATOMS = (Subseteq, Sing, Ind)
QUANTIFIERS = (Exists, Forall)


# fresh names and relabelling


class Fresh:
    """Supply of reserved names _U1, _U2, ... avoiding a given set."""

    def __init__(self, avoid: Iterable[str] = ()):
        self.avoid = set(avoid)
        self.i = 0

    def __call__(self) -> str:
        while True:
            self.i += 1
            name = f"_U{self.i}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def relabel(f: Formula, mapping: dict[str, str]) -> Formula:
    """Rename variables throughout ``f``; the map must stay injective on var(f)."""
    full = {v: mapping.get(v, v) for v in f.var}
    if len(set(full.values())) != len(full):
        raise InputError("relabelling must be injective on the variables of the formula")
    for v in full.values():
        _check_name(v)
    return _rename(f, full)


def _rename(f: Formula, m: dict[str, str]) -> Formula:
    if isinstance(f, Subseteq):
        return Subseteq(m.get(f.left, f.left), m.get(f.right, f.right))
    if isinstance(f, Sing):
        return Sing(m.get(f.name, f.name))
    if isinstance(f, Ind):
        return Ind(m.get(f.name, f.name))
    if isinstance(f, Not):
        return Not(_rename(f.body, m))
    if isinstance(f, And):
        return And(_rename(f.left, m), _rename(f.right, m))
    return type(f)(m.get(f.name, f.name), _rename(f.body, m))


def conj(left: Formula, right: Formula, fresh: Fresh | None = None, strict: bool = False) -> Formula:
    """Conjunction that renames clashing bound variables unless ``strict``."""
    clash_r = left.fr & right.bound
    clash_l = right.fr & left.bound
    if (clash_r or clash_l) and not strict:
        fresh = fresh or Fresh(left.var | right.var)
        fresh.avoid |= left.var | right.var
        if clash_r:
            right = _rename(right, {v: fresh() for v in sorted(clash_r)})
        if clash_l:
            left = _rename(left, {v: fresh() for v in sorted(clash_l)})
    return And(left, right)


def conj_all(parts: list[Formula], fresh: Fresh | None = None, strict: bool = False) -> Formula:
    if not parts:
        raise InputError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = conj(out, p, fresh, strict)
    return out


# derived connectives


def Or(a: Formula, b: Formula, fresh: Fresh | None = None, strict: bool = False) -> Formula:
    return Not(conj(Not(a), Not(b), fresh, strict))


def Imp(a: Formula, b: Formula, fresh: Fresh | None = None, strict: bool = False) -> Formula:
    return Or(Not(a), b, fresh, strict)


def Iff(a: Formula, b: Formula, fresh: Fresh | None = None, strict: bool = False) -> Formula:
    return conj(Imp(a, b, fresh, strict), Imp(b, a, fresh, strict), fresh, strict)


# Union expansions seen so far, so evaluators can decide them directly.
_UNION_DEFS: "weakref.WeakKeyDictionary[Formula, tuple]" = weakref.WeakKeyDictionary()


def union_definition(f: Formula) -> tuple[tuple[str, ...], str] | None:
    """(parts, target) when ``f`` is a Union expansion, else None."""
    try:
        return _UNION_DEFS.get(f)
    except TypeError:
        return None


def Union(parts: list[str], target: str, fresh: Fresh) -> Formula:
    """target equals the union of ``parts`` (one or more names)."""
    if not parts:
        raise InputError("Union needs at least one set")
    X = fresh()
    inside = Subseteq(X, parts[0])
    for p in parts[1:]:
        inside = Or(inside, Subseteq(X, p))
    out = Forall(X, Imp(Sing(X), Iff(Subseteq(X, target), inside)))
    _UNION_DEFS[out] = (tuple(parts), target)
    return out


def Max(name: str, fresh: Fresh) -> Formula:
    """``name`` is a maximal independent set."""
    X = fresh()
    Y = fresh()
    grow = Forall(Y, Imp(Union([name, X], Y, fresh), Not(Ind(Y))))
    return And(Ind(name), Forall(X, Imp(And(Sing(X), Not(Subseteq(X, name))), grow)))


# inspection


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, ATOMS):
        return True
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, And):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return False


def prefix_and_matrix(f: Formula) -> tuple[list[tuple[str, str]], Formula]:
    """Split leading quantifiers: ([("E"|"A", name), ...], rest)."""
    prefix = []
    while isinstance(f, QUANTIFIERS):
        prefix.append(("E" if isinstance(f, Exists) else "A", f.name))
        f = f.body
    return prefix, f


def is_prenex(f: Formula) -> bool:
    return is_quantifier_free(prefix_and_matrix(f)[1])


def size(f: Formula) -> int:
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, Not):
        return 1 + size(f.body)
    if isinstance(f, And):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.body)


def to_text(f: Formula) -> str:
    """Core-syntax rendering that the parser reads back to the same tree."""
    if isinstance(f, Subseteq):
        return f"{f.left} <= {f.right}"
    if isinstance(f, Sing):
        return f"Sing({f.name})"
    if isinstance(f, Ind):
        return f"Ind({f.name})"
    if isinstance(f, Not):
        return f"!{_wrap(f.body)}"
    if isinstance(f, And):
        return f"{_wrap(f.left)} & {_wrap(f.right)}"
    q = "exists" if isinstance(f, Exists) else "forall"
    return f"{q} {f.name}. {to_text(f.body)}"


def _wrap(f: Formula) -> str:
    if isinstance(f, (Sing, Ind)):
        return to_text(f)
    return f"({to_text(f)})"
