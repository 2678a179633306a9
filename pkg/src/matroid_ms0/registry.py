"""Registries, depth-i trees and the compatibility calculus.

A k-stacked matroid (M, Y1..Yk) is summarised by a registry: one Ind row,
one Sing row and k subset rows, each with a column per variable.  Deeper
trees collect the registries (or trees) reachable by choosing the next set
in every possible way.  Two trees are compatible relative to a prenex
sentence when their sums can be driven to 'T' following the quantifier
prefix; for direct sums (variant 1) and hoop/loop amalgams (variant 2) this
matches truth in the combined matroid.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Union as TUnion

import numpy as np

from .errors import InputError
from .logic.formula import ATOMS, And, Exists, Formula, Ind, Not, Sing, Subseteq, prefix_and_matrix
from .logic.formula import is_quantifier_free
from .logic.sentences import StackedMatroid
from .matroid import Matroid, bits, popcount

LINE = ("a", "b", "x", "y", "z")
SECOND = ("ell",) + LINE + ("empty", "skew")

IndEntryV2 = TUnion[str, tuple]  # "F" or (bool, token)


def _sing_symbol(Y: int) -> str:
    c = popcount(Y)
    return "<" if c == 0 else "=" if c == 1 else ">"


@dataclass(frozen=True)
class RegistryV1:
    ind: tuple[bool, ...]
    sing: tuple[str, ...]
    sub: tuple[tuple[bool, ...], ...]

    @property
    def k(self) -> int:
        return len(self.ind)

    def grid(self) -> list[list]:
        return [["T" if v else "F" for v in self.ind], list(self.sing)] + [
            ["T" if v else "F" for v in row] for row in self.sub
        ]


@dataclass(frozen=True)
class RegistryV2:
    ind: tuple  # entries "F" or (bool, token)
    sing: tuple[str, ...]
    sub: tuple[tuple[bool, ...], ...]
    role: str | None = None  # "hoop", "loop" or unknown

    @property
    def k(self) -> int:
        return len(self.ind)

    def grid(self) -> list[list]:
        ind = [e if e == "F" else ["T" if e[0] else "F", e[1]] for e in self.ind]
        return [ind, list(self.sing)] + [["T" if v else "F" for v in row] for row in self.sub]


@dataclass(frozen=True)
class BMatrix:
    """(k+2) x k truth grid: Ind row, Sing row, subset rows."""

    ind: tuple[bool, ...]
    sing: tuple[bool, ...]
    sub: tuple[tuple[bool, ...], ...]


def _sub_rows(stack) -> tuple[tuple[bool, ...], ...]:
    return tuple(tuple(not (Yi & ~Yj) for Yj in stack) for Yi in stack)


def registry_v1(sm: StackedMatroid) -> RegistryV1:
    M, st = sm.matroid, sm.stack
    return RegistryV1(tuple(bool(M.indep_mask(Y)) for Y in st), tuple(_sing_symbol(Y) for Y in st), _sub_rows(st))


# variant 2: hoop and loop matroids


def side_role(M: Matroid) -> str | None:
    """'hoop' or 'loop' judged by the element labels of the two constructions."""
    g = set(M.ground)
    if {"x1", "y1"} <= g:
        return "hoop"
    if {"e1", "f1", "g"} <= g:
        return "loop"
    return None


class LineData:
    """Closure information about the line {a,b,x,y,z} inside a matroid."""

    def __init__(self, M: Matroid):
        missing = [e for e in LINE if e not in M.ground]
        if missing:
            raise InputError(f"matroid lacks the line elements {missing}")
        self.M = M
        self.role = side_role(M)
        self.pos = [M.ground.index(e) for e in LINE]
        self.ell = sum(1 << i for i in self.pos)
        if M.rank_mask(self.ell) != 2 or any(
            M.rank_mask((1 << p) | (1 << q)) != 2 for p, q in itertools.combinations(self.pos, 2)
        ):
            raise InputError("the elements a,b,x,y,z must form a rank-2 line with no parallel pairs")
        self._per_b: dict[int, tuple] = {}

    def per_b(self, B: int) -> tuple[bool, int, int]:
        """(B independent, mask of line elements in cl(B) over LINE order, r(B+line) - r(B))."""
        v = self._per_b.get(B)
        if v is None:
            M = self.M
            r = M.rank_mask(B)
            c = 0
            for k, p in enumerate(self.pos):
                if M.rank_mask(B | (1 << p)) == r:
                    c |= 1 << k
            v = self._per_b[B] = (r == popcount(B), c, M.rank_mask(B | self.ell) - r)
        return v


def _second(c: int, low: bool) -> str:
    if c == 0b11111:
        return "ell"
    if c:
        if c & (c - 1):
            raise InputError("closure meets the line in two points without containing it")
        return LINE[c.bit_length() - 1]
    return "empty" if low else "skew"


def ind_entry_v2(M: Matroid, Y: int, line: LineData | None = None, skew_test: str = "printed") -> IndEntryV2:
    """The Ind entry for a single set, straight from the definition.

    ``skew_test`` picks r(Y + line) ("printed") or r((Y - line) + line)
    ("jackal") in the empty/skew split; the two sets coincide.
    """
    line = line or LineData(M)
    if not M.indep_mask(Y):
        return "F"
    first = M.rank_mask(Y | line.ell) == M.rank_mask(Y)
    B = Y & ~line.ell
    rB = M.rank_mask(B)
    c = 0
    for k, p in enumerate(line.pos):
        if M.rank_mask(B | (1 << p)) == rB:
            c |= 1 << k
    U = Y | line.ell if skew_test == "printed" else B | line.ell
    return (first, _second(c, M.rank_mask(U) < rB + 2))


def ind_entry_v2_fast(line: LineData, Y: int) -> IndEntryV2:
    """Same value as :func:`ind_entry_v2`, computed from cached data on Y - line.

    With B = Y - line independent, the line restricted to M/B is a rank-d
    matroid whose loops are the line points in cl(B): d=2 gives U(2,5),
    d=1 a rank-1 line with those loops, d=0 only loops.
    """
    B = Y & ~line.ell
    indB, c, d = line.per_b(B)
    if not indB:
        return "F"
    L = 0
    for k, p in enumerate(line.pos):
        if Y >> p & 1:
            L |= 1 << k
    size = popcount(L)
    if d == 2:
        ok = size <= 2
    elif d == 1:
        ok = size <= 1 and not (L & c)
    else:
        ok = size == 0
    if not ok:
        return "F"
    return (size == d, _second(c, d < 2))


def registry_v2(sm: StackedMatroid, line: LineData | None = None, skew_test: str = "printed") -> RegistryV2:
    M, st = sm.matroid, sm.stack
    line = line or LineData(M)
    return RegistryV2(
        tuple(ind_entry_v2(M, Y, line, skew_test) for Y in st),
        tuple(_sing_symbol(Y) for Y in st),
        _sub_rows(st),
        line.role,
    )


# sums


def _sing_sum(s1: str, s2: str) -> bool:
    return (s1, s2) in (("<", "="), ("=", "<"))


def _rows_sum(r1, r2):
    if r1.k != r2.k:
        raise InputError("registries have different k")
    sing = tuple(_sing_sum(a, b) for a, b in zip(r1.sing, r2.sing))
    sub = tuple(tuple(a and b for a, b in zip(x, y)) for x, y in zip(r1.sub, r2.sub))
    return sing, sub


def sum_v1(r1: RegistryV1, r2: RegistryV1) -> BMatrix:
    sing, sub = _rows_sum(r1, r2)
    return BMatrix(tuple(a and b for a, b in zip(r1.ind, r2.ind)), sing, sub)


def ind_sum_v2(w1: IndEntryV2, w2: IndEntryV2) -> bool:
    if w1 == "F" or w2 == "F":
        return False
    if w1[0] and w2[1] != "skew":
        return False
    if w2[0] and w1[1] != "skew":
        return False
    if not w1[0] and not w2[0]:
        return not (w1[1] == w2[1] and w1[1] in LINE)
    return True


def sum_v2(r1: RegistryV2, r2: RegistryV2) -> BMatrix:
    """Sum of a hoop registry ``r1`` and a loop registry ``r2``."""
    if r1.role == "loop" or r2.role == "hoop":
        raise InputError("sum_v2 takes the hoop registry first and the loop registry second")
    sing, sub = _rows_sum(r1, r2)
    return BMatrix(tuple(ind_sum_v2(a, b) for a, b in zip(r1.ind, r2.ind)), sing, sub)


# quantifier-free formulas as functions on B-matrices


def _var_index(name: str) -> int:
    if name[:1] == "X" and name[1:].isdigit() and int(name[1:]) >= 1:
        return int(name[1:]) - 1
    raise InputError(f"variable {name} is not of the form X<i>")


def qf_to_bfunction(psi: Formula) -> Callable[[BMatrix], bool]:
    """Read a quantifier-free formula over X1..Xk as a function on B-matrices."""
    if not is_quantifier_free(psi):
        raise InputError("formula has quantifiers")

    def build(f):
        if isinstance(f, Ind):
            i = _var_index(f.name)
            return lambda B: B.ind[i]
        if isinstance(f, Sing):
            i = _var_index(f.name)
            return lambda B: B.sing[i]
        if isinstance(f, Subseteq):
            i, j = _var_index(f.left), _var_index(f.right)
            return lambda B: B.sub[i][j]
        if isinstance(f, Not):
            g = build(f.body)
            return lambda B: not g(B)
        g, h = build(f.left), build(f.right)
        return lambda B: g(B) and h(B)

    return build(psi)


# trees


class Tree:
    """Hash-consed tree node; compare with ``is`` or by ``id``."""

    __slots__ = ("id", "depth", "registry", "children", "__weakref__")

    def __init__(self, id_: int, depth: int, registry, children: frozenset):
        self.id = id_
        self.depth = depth
        self.registry = registry
        self.children = children

    def __repr__(self) -> str:
        return f"<Tree #{self.id} depth {self.depth} ({len(self.children)} children)>"

    def leaves(self) -> set:
        if self.depth == 0:
            return {self.registry}
        out = set()
        for c in self.children:
            out |= c.leaves()
        return out


class TreeStore:
    """Interning table: equal trees get the same object."""

    def __init__(self):
        self._table: dict = {}

    def __len__(self) -> int:
        return len(self._table)

    def leaf(self, registry) -> Tree:
        key = ("R", registry)
        t = self._table.get(key)
        if t is None:
            t = self._table.setdefault(key, Tree(len(self._table), 0, registry, frozenset()))
        return t

    def node(self, children) -> Tree:
        children = frozenset(children)
        if not children:
            raise InputError("a tree node needs at least one child")
        depths = {c.depth for c in children}
        if len(depths) != 1:
            raise InputError("children of a tree must share one depth")
        key = ("S", frozenset(c.id for c in children))
        t = self._table.get(key)
        if t is None:
            t = self._table.setdefault(key, Tree(len(self._table), depths.pop() + 1, None, children))
        return t


DEFAULT_STORE = TreeStore()


class _AtomTable:
    """Per-set Ind entries and Sing symbols for every subset of E(M)."""

    def __init__(self, M: Matroid, variant: int, skew_test: str = "printed"):
        if M.n > 22:
            raise InputError("tree construction is limited to 22 elements")
        size = 1 << M.n
        if variant == 1:
            self.ind = [bool(M.indep_mask(Y)) for Y in range(size)]
        elif variant == 2:
            line = LineData(M)
            if skew_test == "printed":
                self.ind = [ind_entry_v2_fast(line, Y) for Y in range(size)]
            else:
                self.ind = [ind_entry_v2(M, Y, line, skew_test) for Y in range(size)]
        else:
            raise InputError("variant must be 1 or 2")
        self.sing = [_sing_symbol(Y) for Y in range(size)]
        self.variant = variant
        self.role = line.role if variant == 2 else None


def tree_of(
    sm: StackedMatroid,
    k: int,
    variant: int = 1,
    store: TreeStore | None = None,
    budget: int | None = 1 << 26,
    skew_test: str = "printed",
) -> Tree:
    """Depth-(k - l) tree of an l-stacked matroid."""
    store = DEFAULT_STORE if store is None else store
    M = sm.matroid
    l = len(sm.stack)
    if l > k:
        raise InputError(f"stack of length {l} exceeds k={k}")
    if budget is not None and (1 << (M.n * (k - l))) > budget:
        raise InputError(f"tree needs 2^{M.n * (k - l)} leaves, over the budget {budget}")
    atoms = _AtomTable(M, variant, skew_test)
    return _build(atoms, list(sm.stack), k, 1 << M.n, store)


def _build(atoms: _AtomTable, stack: list[int], k: int, size: int, store: TreeStore) -> Tree:
    if len(stack) == k:
        ind = tuple(atoms.ind[Y] for Y in stack)
        sing = tuple(atoms.sing[Y] for Y in stack)
        if atoms.variant == 1:
            reg = RegistryV1(ind, sing, _sub_rows(stack))
        else:
            reg = RegistryV2(ind, sing, _sub_rows(stack), atoms.role)
        return store.leaf(reg)
    children = set()
    for Y in range(size):
        stack.append(Y)
        children.add(_build(atoms, stack, k, size, store))
        stack.pop()
    return store.node(children)


def tree_dump(t: Tree):
    """Canonical nested lists: registry grids at depth 0, sorted child lists above."""
    if t.depth == 0:
        return t.registry.grid()
    kids = [tree_dump(c) for c in t.children]
    return sorted(kids, key=lambda d: json.dumps(d, sort_keys=True))


def tree_dump_json(t: Tree) -> str:
    return json.dumps(tree_dump(t), sort_keys=True, separators=(",", ":"))


# compatibility


def _split_prenex(psi: Formula, depth: int):
    prefix, matrix = prefix_and_matrix(psi)
    if not is_quantifier_free(matrix):
        raise InputError("formula is not in prenex form")
    if len(prefix) != depth:
        raise InputError(f"tree depth {depth} does not match {len(prefix)} leading quantifiers")
    names = sorted(psi.var, key=_var_index)
    k = len(names)
    if [_var_index(v) for v in names] != list(range(k)):
        raise InputError("variables must be X1..Xk")
    l = k - len(prefix)
    if [_var_index(v) for _, v in prefix] != list(range(l, k)):
        raise InputError("quantifiers must bind X(l+1)..Xk in order")
    return prefix, matrix


def compatible(t1: Tree, t2: Tree, psi: Formula, variant: int | None = None, memo: dict | None = None) -> bool:
    """Compatibility of two trees relative to the prenex formula ``psi``.

    ``psi`` uses variables X1..Xk, the free ones first; the trees must have
    depth equal to the number of quantifiers.  ``variant`` defaults to the
    registry type found at the leaves.
    """
    if t1.depth != t2.depth:
        raise InputError("trees have different depths")
    prefix, matrix = _split_prenex(psi, t1.depth)
    f = qf_to_bfunction(matrix)
    memo = {} if memo is None else memo

    def leaf_sum(r1, r2):
        v = variant or (1 if isinstance(r1, RegistryV1) else 2)
        return sum_v1(r1, r2) if v == 1 else sum_v2(r1, r2)

    def go(a: Tree, b: Tree, i: int) -> bool:
        key = (a.id, b.id, i)
        v = memo.get(key)
        if v is not None:
            return v
        if i == len(prefix):
            v = bool(f(leaf_sum(a.registry, b.registry)))
        elif prefix[i][0] == "E":
            v = any(go(c, d, i + 1) for c in a.children for d in b.children)
        else:
            v = all(go(c, d, i + 1) for c in a.children for d in b.children)
        memo[key] = v
        return v

    return go(t1, t2, 0)


class CompatibilityTables:
    """All-pairs compatibility for a fixed collection of same-depth trees.

    Leaves are indexed once; each sentence is then decided for every pair
    of trees with boolean matrix products, level by level.
    """

    def __init__(self, trees: list[Tree], variant: int):
        self.variant = variant
        depth = {t.depth for t in trees}
        if len(depth) != 1:
            raise InputError("trees must share one depth")
        self.depth = depth.pop()
        levels: list[list[Tree]] = [list(dict.fromkeys(trees))]
        for _ in range(self.depth):
            nxt = {}
            for t in levels[-1]:
                for c in t.children:
                    nxt.setdefault(c.id, c)
            levels.append(sorted(nxt.values(), key=lambda t: t.id))
        self.levels = levels
        self.index = [{t.id: i for i, t in enumerate(lv)} for lv in levels]
        self.incidence = []
        for lv, lower in zip(levels, self.index[1:]):
            C = np.zeros((len(lv), len(lower)), dtype=np.float64)
            for i, t in enumerate(lv):
                for c in t.children:
                    C[i, lower[c.id]] = 1.0
            self.incidence.append(C)
        regs = [t.registry for t in levels[-1]]
        k = regs[0].k if regs else 0
        self.k = k
        self.ind_sum = np.zeros((k, len(regs), len(regs)), dtype=bool)
        for j in range(k):
            if variant == 1:
                col = np.array([r.ind[j] for r in regs], dtype=bool)
                self.ind_sum[j] = col[:, None] & col[None, :]
            else:
                entries = [r.ind[j] for r in regs]
                cache = {}
                for a, wa in enumerate(entries):
                    for b, wb in enumerate(entries):
                        key = (wa, wb)
                        v = cache.get(key)
                        if v is None:
                            v = cache[key] = ind_sum_v2(wa, wb)
                        self.ind_sum[j, a, b] = v
        sym = np.array([[r.sing[j] for j in range(k)] for r in regs]).reshape(len(regs), k)
        lt, eq = sym == "<", sym == "="
        self.sing_sum = (lt.T[:, :, None] & eq.T[:, None, :]) | (eq.T[:, :, None] & lt.T[:, None, :])
        sub = np.array([[r.sub[i][j] for i in range(k) for j in range(k)] for r in regs], dtype=bool)
        sub = sub.reshape(len(regs), k, k)
        self.sub_sum = sub.transpose(1, 2, 0)[:, :, :, None] & sub.transpose(1, 2, 0)[:, :, None, :]

    def matrix(self, psi: Formula) -> np.ndarray:
        """Boolean matrix over pairs of the input trees."""
        prefix, mat = _split_prenex(psi, self.depth)

        def qf(f) -> np.ndarray:
            if isinstance(f, Ind):
                return self.ind_sum[_var_index(f.name)]
            if isinstance(f, Sing):
                return self.sing_sum[_var_index(f.name)]
            if isinstance(f, Subseteq):
                return self.sub_sum[_var_index(f.left), _var_index(f.right)]
            if isinstance(f, Not):
                return ~qf(f.body)
            return qf(f.left) & qf(f.right)

        V = qf(mat)
        for (q, _), C in zip(reversed(prefix), reversed(self.incidence)):
            if q == "E":
                V = (C @ V.astype(np.float64) @ C.T) > 0
            else:
                V = ~((C @ (~V).astype(np.float64) @ C.T) > 0)
        return V

    def lookup(self, V: np.ndarray, t1: Tree, t2: Tree) -> bool:
        return bool(V[self.index[0][t1.id], self.index[0][t2.id]])


def partition(family: list[Matroid], k: int, variant: int = 1, store: TreeStore | None = None) -> dict:
    """Group matroids by their depth-k tree."""
    store = TreeStore() if store is None else store
    trees = [tree_of(StackedMatroid(M, ()), k, variant, store) for M in family]
    blocks: dict[int, list[int]] = {}
    for i, t in enumerate(trees):
        blocks.setdefault(t.id, []).append(i)
    b = bounds(k)
    bound = b["f1"] if variant == 1 else b["f2"]
    return {
        "blocks": list(blocks.values()),
        "block_count": len(blocks),
        "bound": bound,
        "within_bound": tower_le(len(blocks), bound),
        "trees": trees,
    }


# counting bounds


@dataclass(frozen=True)
class PowerTower:
    """2^2^...^2^top with ``height`` twos: too large to write out."""

    top: int
    height: int

    def __str__(self) -> str:
        return "2^(" * self.height + str(self.top) + ")" * self.height


def tower_le(n: int, bound: TUnion[int, PowerTower]) -> bool:
    """n <= bound, for an integer n and an exact or symbolic bound."""
    if isinstance(bound, int):
        return n <= bound
    if n <= 1:
        return True
    if bound.height == 0:
        return n <= bound.top
    # n <= 2^V  iff  (n - 1).bit_length() <= V
    return tower_le((n - 1).bit_length(), PowerTower(bound.top, bound.height - 1))


def _iterate(g0: int, k: int, max_bits: int) -> list:
    out: list = [g0]
    for _ in range(k):
        prev = out[-1]
        if isinstance(prev, int) and prev <= max_bits:
            out.append(1 << prev)
        elif isinstance(prev, int):
            out.append(PowerTower(prev, 1))
        else:
            out.append(PowerTower(prev.top, prev.height + 1))
    return out


def g1_0(k: int) -> int:
    return 3 ** k * 2 ** (k * (k + 1))


def g2_0(k: int) -> int:
    return 2 ** (k * k) * 3 ** k * 17 ** k


def bounds(k: int, max_bits: int = 1 << 16) -> dict:
    """g1(k, 0..k), f1(k), g2(k, 0..k), f2(k); exact while under ``max_bits`` bits."""
    if k < 1:
        raise InputError("k must be at least 1")
    g1 = _iterate(g1_0(k), k, max_bits)
    g2 = _iterate(g2_0(k), k, max_bits)
    return {"g1": g1, "f1": g1[k], "g2": g2, "f2": g2[k]}
