"""Finite matroids over labelled ground sets.

Subsets are int bit masks over the ground-set order.  Every backing kind
implements :meth:`Matroid.indep_mask`; rank, closure and circuits derive from
it unless a backing has a faster route.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Iterator, Sequence

from .errors import InputError
from .field import FFMatrix, is_prime, rank_of_vectors


def bits(mask: int) -> Iterator[int]:
    """Positions of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, from ``mask`` down to 0."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


class GroundSet:
    """Ordered tuple of distinct string labels."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[str]):
        elements = tuple(str(e) for e in elements)
        if len(set(elements)) != len(elements):
            dup = sorted({e for e in elements if elements.count(e) > 1})
            raise InputError(f"duplicate ground-set labels: {dup}")
        self.elements = elements
        self._index = {e: i for i, e in enumerate(elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, GroundSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"GroundSet({list(self.elements)})"

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"label {label!r} is not in the ground set") from None

    def mask(self, X) -> int:
        """Bit mask of ``X``, given as a mask or an iterable of labels."""
        if isinstance(X, int):
            if X < 0 or X > self.full:
                raise InputError(f"mask {X} out of range for {len(self)} elements")
            return X
        if isinstance(X, str):
            X = (X,)
        m = 0
        for e in X:
            m |= 1 << self.index(e)
        return m

    def labels(self, mask: int) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in bits(mask))


class SetSystem:
    """A ground set with an arbitrary family of subsets, read as ``Ind``.

    Not necessarily a matroid; used to evaluate the axiom sentences.
    """

    def __init__(self, ground, family: Iterable):
        self.ground = ground if isinstance(ground, GroundSet) else GroundSet(ground)
        self.family = frozenset(self.ground.mask(F) for F in family)

    @property
    def n(self) -> int:
        return len(self.ground)

    def indep_mask(self, mask: int) -> bool:
        return mask in self.family


class Matroid:
    kind = "oracle"

    def __init__(self, ground):
        self.ground = ground if isinstance(ground, GroundSet) else GroundSet(ground)
        self._rank_memo: dict[int, int] | None = {} if len(self.ground) <= 20 else None
        self._circuits: list[int] | None = None

    def __repr__(self) -> str:
        return f"<{type(self).__name__} on {len(self.ground)} elements>"

    @property
    def n(self) -> int:
        return len(self.ground)

    # mask-level interface

    def indep_mask(self, mask: int) -> bool:
        raise NotImplementedError

    def _rank_uncached(self, mask: int) -> int:
        acc = 0
        r = 0
        for i in bits(mask):
            if self.indep_mask(acc | (1 << i)):
                acc |= 1 << i
                r += 1
        return r

    def rank_mask(self, mask: int) -> int:
        memo = self._rank_memo
        if memo is None:
            return self._rank_uncached(mask)
        r = memo.get(mask)
        if r is None:
            r = memo[mask] = self._rank_uncached(mask)
        return r

    def closure_mask(self, mask: int) -> int:
        r = self.rank_mask(mask)
        cl = mask
        for i in range(self.n):
            b = 1 << i
            if not mask & b and self.rank_mask(mask | b) == r:
                cl |= b
        return cl

    def basis_mask(self, mask: int | None = None) -> int:
        """A maximal independent subset of ``mask``, chosen greedily."""
        if mask is None:
            mask = self.ground.full
        acc = 0
        for i in bits(mask):
            if self.indep_mask(acc | (1 << i)):
                acc |= 1 << i
        return acc

    def circuit_masks(self) -> list[int]:
        """All circuits, by increasing size and then lexicographically.

        Exponential in general; fine for structured families up to ~20
        elements.
        """
        if self._circuits is None:
            found: list[int] = []
            n = self.n
            for size in range(1, n + 1):
                for combo in itertools.combinations(range(n), size):
                    m = 0
                    for i in combo:
                        m |= 1 << i
                    if any(c & m == c for c in found):
                        continue
                    if not self.indep_mask(m):
                        found.append(m)
            self._circuits = found
        return list(self._circuits)

    # label-level interface

    def is_independent(self, X) -> bool:
        return self.indep_mask(self.ground.mask(X))

    def rank(self, X=None) -> int:
        return self.rank_mask(self.ground.full if X is None else self.ground.mask(X))

    def closure(self, X) -> tuple[str, ...]:
        return self.ground.labels(self.closure_mask(self.ground.mask(X)))

    def circuits(self) -> list[tuple[str, ...]]:
        return [self.ground.labels(c) for c in self.circuit_masks()]

    def independent_masks(self) -> list[int]:
        return [m for m in range(1 << self.n) if self.indep_mask(m)]

    def is_simple(self) -> bool:
        n = self.n
        if any(not self.indep_mask(1 << i) for i in range(n)):
            return False
        return all(self.indep_mask((1 << i) | (1 << j)) for i in range(n) for j in range(i + 1, n))

    def delete(self, X) -> "Minor":
        return minor(self, delete=X)

    def contract(self, X) -> "Minor":
        return minor(self, contract=X)

    def restrict(self, X) -> "Minor":
        keep = self.ground.mask(X)
        return minor(self, delete=self.ground.full & ~keep)

    def to_json(self) -> dict:
        if self.n > 16:
            raise InputError(f"refusing to materialise independent sets of a {self.n}-element oracle")
        sets = [list(self.ground.labels(m)) for m in self.independent_masks()]
        return {"elements": list(self.ground), "def": {"kind": "independent_sets", "sets": sets}}


class IndependentSetsMatroid(Matroid):
    kind = "independent_sets"

    def __init__(self, ground, sets: Iterable):
        super().__init__(ground)
        self.family = frozenset(self.ground.mask(F) for F in sets)

    def indep_mask(self, mask: int) -> bool:
        return mask in self.family

    def to_json(self) -> dict:
        sets = [list(self.ground.labels(m)) for m in sorted(self.family, key=_canon_key)]
        return {"elements": list(self.ground), "def": {"kind": self.kind, "sets": sets}}


class CircuitsMatroid(Matroid):
    kind = "circuits"

    def __init__(self, ground, circuits: Iterable):
        super().__init__(ground)
        self._given = sorted({self.ground.mask(C) for C in circuits}, key=_canon_key)
        if any(c == 0 for c in self._given):
            raise InputError("the empty set cannot be a circuit")

    def indep_mask(self, mask: int) -> bool:
        for c in self._given:
            if c & mask == c:
                return False
        return True

    def to_json(self) -> dict:
        circs = [list(self.ground.labels(c)) for c in self._given]
        return {"elements": list(self.ground), "def": {"kind": self.kind, "circuits": circs}}


class MatrixMatroid(Matroid):
    """Column matroid of a matrix over a prime field."""

    kind = "matrix"

    def __init__(self, A: FFMatrix):
        super().__init__(A.col_labels)
        self.matrix = A
        self._cols = A.columns()

    def rank_mask(self, mask: int) -> int:
        memo = self._rank_memo
        if memo is not None and mask in memo:
            return memo[mask]
        r = rank_of_vectors(self.matrix.p, [self._cols[i] for i in bits(mask)])
        if memo is not None:
            memo[mask] = r
        return r

    def indep_mask(self, mask: int) -> bool:
        return self.rank_mask(mask) == popcount(mask)

    def to_json(self) -> dict:
        return {
            "elements": list(self.ground),
            "def": {"kind": self.kind, "p": self.matrix.p, "rows": [list(r) for r in self.matrix.rows]},
        }


def column_matroid(A: FFMatrix) -> MatrixMatroid:
    return MatrixMatroid(A)


class DirectSum(Matroid):
    kind = "direct_sum"

    def __init__(self, m1: Matroid, m2: Matroid):
        clash = set(m1.ground) & set(m2.ground)
        if clash:
            raise InputError(f"direct sum needs disjoint ground sets; shared labels {sorted(clash)}")
        super().__init__(tuple(m1.ground) + tuple(m2.ground))
        self.m1, self.m2 = m1, m2
        self._n1 = m1.n
        self._low = (1 << m1.n) - 1

    def indep_mask(self, mask: int) -> bool:
        return self.m1.indep_mask(mask & self._low) and self.m2.indep_mask(mask >> self._n1)

    def _rank_uncached(self, mask: int) -> int:
        return self.m1.rank_mask(mask & self._low) + self.m2.rank_mask(mask >> self._n1)


def direct_sum(m1: Matroid, m2: Matroid) -> DirectSum:
    return DirectSum(m1, m2)


class Relabeled(Matroid):
    kind = "relabeled"

    def __init__(self, base: Matroid, labels: Sequence[str]):
        if len(labels) != base.n:
            raise InputError("relabelling must supply one label per element")
        super().__init__(labels)
        self.base = base

    def indep_mask(self, mask: int) -> bool:
        return self.base.indep_mask(mask)

    def rank_mask(self, mask: int) -> int:
        return self.base.rank_mask(mask)


def relabel(M: Matroid, labels: Sequence[str] | Callable[[str], str]) -> Relabeled:
    """Same matroid, new labels (a sequence, or a function of the old label)."""
    if callable(labels):
        labels = [labels(e) for e in M.ground]
    return Relabeled(M, list(labels))


class Minor(Matroid):
    """``M / contract \\ delete`` on the remaining labels."""

    kind = "minor"

    def __init__(self, parent: Matroid, delete_mask: int, contract_mask: int):
        if delete_mask & contract_mask:
            raise InputError("deleted and contracted sets must be disjoint")
        keep = parent.ground.full & ~delete_mask & ~contract_mask
        super().__init__(parent.ground.labels(keep))
        self.parent = parent
        self._pos = list(bits(keep))
        self._base = parent.basis_mask(contract_mask)
        self._base_rank = popcount(self._base)

    def _lift(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self._pos[i]
        return out

    def indep_mask(self, mask: int) -> bool:
        return self.parent.indep_mask(self._lift(mask) | self._base)

    def _rank_uncached(self, mask: int) -> int:
        return self.parent.rank_mask(self._lift(mask) | self._base) - self._base_rank


def minor(M: Matroid, delete=(), contract=()) -> Minor:
    return Minor(M, M.ground.mask(delete), M.ground.mask(contract))


def _canon_key(mask: int) -> tuple:
    return (popcount(mask), tuple(bits(mask)))


def matroids_equal(M: Matroid, N: Matroid) -> bool:
    """Same labels in the same order and the same independence verdicts."""
    if tuple(M.ground) != tuple(N.ground):
        return False
    return all(M.indep_mask(m) == N.indep_mask(m) for m in range(1 << M.n))


def is_matroid(ground, family: Iterable) -> bool:
    """Direct check of the axioms I1-I3, with I3 phrased through maximal sets.

    I3 reads: whenever X1 is maximal and X2 is independent but not maximal,
    some e in X1 - X2 has X2 + e independent.
    """
    if isinstance(ground, int):
        n = ground
        fam = {F if isinstance(F, int) else _mask_from_positions(F) for F in family}
    else:
        gs = ground if isinstance(ground, GroundSet) else GroundSet(ground)
        n = len(gs)
        fam = {gs.mask(F) for F in family}
    if not fam:
        return False
    for F in fam:
        for i in bits(F):
            if F & ~(1 << i) not in fam:
                return False
    full = (1 << n) - 1
    maximal = {F for F in fam if all((F | (1 << e)) not in fam for e in bits(full & ~F))}
    for X1 in maximal:
        for X2 in fam:
            if X2 in maximal:
                continue
            if not any((X2 | (1 << e)) in fam for e in bits(X1 & ~X2)):
                return False
    return True


def _mask_from_positions(positions) -> int:
    m = 0
    for i in positions:
        m |= 1 << i
    return m


def has_minor(M: Matroid, N: Matroid) -> bool:
    """Minor test by the distinct-elements characterisation.

    Searches for distinct x_1..x_n and an independent X disjoint from them
    such that {x_i : i in S} + X is independent exactly when S is independent
    in N.  Labelled search over all injections; practical for |E(N)| <= 6.
    """
    n, E = N.n, M.n
    if n > E:
        return False
    target = [N.indep_mask(S) for S in range(1 << n)]
    full = M.ground.full
    for xs in itertools.permutations(range(E), n):
        lift = [0] * (1 << n)
        for S in range(1, 1 << n):
            low = S & -S
            lift[S] = lift[S ^ low] | (1 << xs[low.bit_length() - 1])
        xmask = lift[(1 << n) - 1]
        for X in submasks(full & ~xmask):
            if not M.indep_mask(X):
                continue
            if all(M.indep_mask(X | lift[S]) == target[S] for S in range(1 << n)):
                return True
    return False


def is_isomorphic_small(M: Matroid, N: Matroid) -> bool:
    """Isomorphism by trying every bijection; only for tiny ground sets."""
    if M.n != N.n:
        return False
    n = M.n
    mfam = {m for m in range(1 << n) if M.indep_mask(m)}
    nfam = [m for m in range(1 << n) if N.indep_mask(m)]
    if len(mfam) != len(nfam):
        return False
    for perm in itertools.permutations(range(n)):
        if all(_permute(S, perm) in mfam for S in nfam):
            return True
    return False


def _permute(mask: int, perm) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << perm[i]
    return out


def has_minor_enumerative(M: Matroid, N: Matroid) -> bool:
    """Minor test by enumerating every delete/contract split of E(M) - kept set."""
    n, E = N.n, M.n
    if n > E:
        return False
    for keep in itertools.combinations(range(E), n):
        keep_mask = _mask_from_positions(keep)
        rest = M.ground.full & ~keep_mask
        for C in submasks(rest):
            if is_isomorphic_small(Minor(M, rest & ~C, C), N):
                return True
    return False


# generators


def gen_uniform(r: int, n: int) -> CircuitsMatroid:
    if not 0 <= r <= n:
        raise InputError(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
    labels = [f"e{i}" for i in range(1, n + 1)]
    circuits = [[labels[i] for i in c] for c in itertools.combinations(range(n), r + 1)] if r < n else []
    return CircuitsMatroid(labels, circuits)


def projective_points(q: int) -> list[tuple[int, int, int]]:
    """One representative per point of PG(2, q): first nonzero coordinate 1."""
    pts = [(1, a, b) for a in range(q) for b in range(q)]
    pts += [(0, 1, b) for b in range(q)]
    pts.append((0, 0, 1))
    return pts


def gen_pg2(q: int) -> MatrixMatroid:
    if not is_prime(q):
        raise InputError(f"PG(2,{q}) needs a prime order; extension fields are not supported")
    pts = projective_points(q)
    rows = tuple(tuple(p[i] for p in pts) for i in range(3))
    labels = tuple(f"p{j}" for j in range(1, len(pts) + 1))
    return MatrixMatroid(FFMatrix(q, rows, ("r1", "r2", "r3"), labels))


def block_diagonal(A: FFMatrix, B: FFMatrix) -> FFMatrix:
    if A.p != B.p:
        raise InputError("block diagonal needs matrices over the same field")
    (ma, na), (mb, nb) = A.shape, B.shape
    rows = [tuple(r) + (0,) * nb for r in A.rows] + [(0,) * na + tuple(r) for r in B.rows]
    return FFMatrix(A.p, tuple(rows), A.row_labels + B.row_labels, A.col_labels + B.col_labels)


def free_matroid(labels: Sequence[str]) -> CircuitsMatroid:
    return CircuitsMatroid(labels, [])


__all__ = [
    "GroundSet", "SetSystem", "Matroid", "IndependentSetsMatroid", "CircuitsMatroid",
    "MatrixMatroid", "DirectSum", "Minor", "Relabeled", "column_matroid", "direct_sum",
    "minor", "relabel", "matroids_equal", "is_matroid", "has_minor", "has_minor_enumerative",
    "is_isomorphic_small", "gen_uniform", "gen_pg2", "projective_points", "block_diagonal",
    "free_matroid", "all_matroids", "bits", "popcount", "submasks",
]


def all_matroids(n: int, labels: Sequence[str] | None = None) -> list[IndependentSetsMatroid]:
    """Every labelled matroid on n elements (practical for n <= 4)."""
    labels = list(labels or [f"e{i}" for i in range(1, n + 1)])
    if len(labels) != n:
        raise InputError("need exactly n labels")
    out = []
    nonempty = list(range(1, 1 << n))
    for choice in range(1 << len(nonempty)):
        fam = [0] + [m for j, m in enumerate(nonempty) if choice >> j & 1]
        if is_matroid(n, fam):
            out.append(IndependentSetsMatroid(labels, [[labels[i] for i in bits(m)] for m in fam]))
    return out
