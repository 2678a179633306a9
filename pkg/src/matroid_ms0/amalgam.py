"""Proper amalgams of two simple matroids along a shared rank-2 line.

Two independence routes: :func:`rank_superset_min` takes the minimum over all
supersets directly, while :func:`jackal_is_dependent` decides dependence from
closures in the two sides.  The big hoop/loop amalgams use the latter.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .field import FFMatrix
from .matroid import Matroid, MatrixMatroid, bits


class _MaskMap:
    """Translate bit masks between two orderings, eight bits at a time."""

    def __init__(self, targets: list[int | None]):
        self.tables = []
        for start in range(0, len(targets), 8):
            chunk = targets[start:start + 8]
            table = [0] * (1 << len(chunk))
            for m in range(1, 1 << len(chunk)):
                low = m & -m
                j = chunk[low.bit_length() - 1]
                table[m] = table[m ^ low] | (0 if j is None else 1 << j)
            self.tables.append(table)

    def __call__(self, mask: int) -> int:
        out = 0
        for table in self.tables:
            if mask:
                out |= table[mask & 0xFF]
                mask >>= 8
        return out


class _Side:
    """Memoised closure data for one side of an amalgam."""

    def __init__(self, M: Matroid, ell_positions: list[int]):
        self.M = M
        self.ell = _mask_of(ell_positions)
        self._ell_bits = list(ell_positions)
        self._span: dict[int, bool] = {}
        self._low: dict[int, bool] = {}
        self._cl: dict[int, int] = {}

    def indep(self, mask: int) -> bool:
        return self.M.indep_mask(mask)

    def spans_ell(self, mask: int) -> bool:
        """Is the line contained in cl(mask)?"""
        v = self._span.get(mask)
        if v is None:
            v = self._span[mask] = self.M.rank_mask(mask | self.ell) == self.M.rank_mask(mask)
        return v

    def low_on_ell(self, mask: int) -> bool:
        """r(mask + line) < r(mask) + 2."""
        v = self._low.get(mask)
        if v is None:
            v = self._low[mask] = self.M.rank_mask(mask | self.ell) < self.M.rank_mask(mask) + 2
        return v

    def closure_on_ell(self, mask: int) -> int:
        """cl(mask) intersected with the line, as a mask over line positions."""
        v = self._cl.get(mask)
        if v is None:
            r = self.M.rank_mask(mask)
            v = 0
            for k, i in enumerate(self._ell_bits):
                if mask >> i & 1 or self.M.rank_mask(mask | (1 << i)) == r:
                    v |= 1 << k
            self._cl[mask] = v
        return v


class AmalgamSpec:
    """Two simple matroids whose common labels form a rank-2 line.

    The amalgam ground set is E1 in M1's order followed by E2 - line in M2's
    order.
    """

    def __init__(self, m1: Matroid, m2: Matroid, check: bool = True):
        self.m1, self.m2 = m1, m2
        common = [e for e in m1.ground if e in m2.ground]
        self.ell = tuple(common)
        self.elements = tuple(m1.ground) + tuple(e for e in m2.ground if e not in set(common))
        n1 = m1.n
        self.n = len(self.elements)
        pos2 = {e: i for i, e in enumerate(m2.ground)}
        self.e1_mask = (1 << n1) - 1
        self.ell1 = m1.ground.mask(common)
        self.e2_mask = self.ell1 | (((1 << self.n) - 1) & ~self.e1_mask)
        self._to2 = _MaskMap([pos2.get(e) for e in self.elements])
        # both sides list the line in m1's order so closure masks line up
        self._ell_order2 = [m2.ground.index(e) for e in common]
        self.side1 = _Side(m1, [m1.ground.index(e) for e in common])
        self.side2 = _Side(m2, self._ell_order2)
        if check:
            self.validate()

    def validate(self):
        if len(self.ell) < 2:
            raise InputError("the shared line needs at least two elements")
        if not self.m1.is_simple() or not self.m2.is_simple():
            raise InputError("amalgam sides must be simple matroids")
        if self.m1.rank_mask(self.ell1) != 2:
            raise InputError("the shared set must have rank 2")
        ell2 = self._ell_order2
        for sub in range(1 << len(self.ell)):
            a = _mask_of(i for k, i in enumerate(bits(self.ell1)) if sub >> k & 1)
            b = _mask_of(ell2[k] for k in range(len(ell2)) if sub >> k & 1)
            if self.m1.indep_mask(a) != self.m2.indep_mask(b):
                raise InputError("the two sides disagree on the shared line")

    def split(self, X: int) -> tuple[int, int]:
        """(X & E1 as an m1 mask, X & E2 as an m2 mask)."""
        return X & self.e1_mask, self._to2(X & self.e2_mask)

    def mask(self, X) -> int:
        if isinstance(X, int):
            return X
        if isinstance(X, str):
            X = (X,)
        m = 0
        for e in X:
            try:
                m |= 1 << self.elements.index(e)
            except ValueError:
                raise InputError(f"label {e!r} is not in the amalgam ground set") from None
        return m


def _mask_of(positions) -> int:
    m = 0
    for i in positions:
        m |= 1 << i
    return m


def rank_superset_min(spec: AmalgamSpec, X) -> int:
    """min over Y containing X of r1(Y & E1) + r2(Y & E2) - r1(Y & line).

    Every superset is tried; exponential in the size of the complement.
    """
    X = spec.mask(X)
    full = (1 << spec.n) - 1
    rest = full & ~X
    r1, r2 = spec.m1.rank_mask, spec.m2.rank_mask
    best = None
    S = rest
    while True:
        Y = X | S
        y1, y2 = spec.split(Y)
        v = r1(y1) + r2(y2) - r1(y1 & spec.ell1)
        if best is None or v < best:
            best = v
        if S == 0:
            break
        S = (S - 1) & rest
    return best


def rank_superset_min_table(spec: AmalgamSpec) -> np.ndarray:
    """rank_superset_min for every subset at once, via a superset-minimum transform."""
    n = spec.n
    size = 1 << n
    r1 = np.array([spec.m1.rank_mask(m) for m in range(1 << spec.m1.n)], dtype=np.int64)
    r2 = np.array([spec.m2.rank_mask(m) for m in range(1 << spec.m2.n)], dtype=np.int64)
    if n > 20:
        raise InputError("rank_superset_min_table is limited to 20 elements")
    Y = np.arange(size, dtype=np.int64)
    y1 = Y & spec.e1_mask
    y2 = np.array([spec._to2(m & spec.e2_mask) for m in range(size)], dtype=np.int64)
    g = r1[y1] + r2[y2] - r1[y1 & spec.ell1]
    for i in range(n):
        b = 1 << i
        g = g.reshape(-1, 2, b)
        np.minimum(g[:, 0, :], g[:, 1, :], out=g[:, 0, :])
        g = g.reshape(size)
    return g


def jackal_is_dependent(spec: AmalgamSpec, X) -> bool:
    """Dependence in the proper amalgam from closures in the two sides."""
    X = spec.mask(X)
    a1, a2 = spec.split(X)
    s1, s2 = spec.side1, spec.side2
    if not s1.indep(a1) or not s2.indep(a2):
        return True
    b1 = a1 & ~s1.ell          # X - E2
    b2 = a2 & ~s2.ell          # X - E1
    if s1.spans_ell(a1) and s2.low_on_ell(b2):
        return True
    if s2.spans_ell(a2) and s1.low_on_ell(b1):
        return True
    return bool(s1.closure_on_ell(b1) & s2.closure_on_ell(b2))


class AmalgamMatroid(Matroid):
    kind = "amalgam"

    def __init__(self, spec: AmalgamSpec):
        super().__init__(spec.elements)
        self.spec = spec

    def indep_mask(self, mask: int) -> bool:
        return not jackal_is_dependent(self.spec, mask)

    def to_json(self) -> dict:
        return {
            "elements": list(self.ground),
            "def": {"kind": self.kind, "m1": self.spec.m1.to_json(), "m2": self.spec.m2.to_json()},
        }


def amalgam_matroid(m1: Matroid, m2: Matroid) -> AmalgamMatroid:
    return AmalgamMatroid(AmalgamSpec(m1, m2))


def _projectively_distinct(p: int, cols) -> bool:
    seen = set()
    for c in cols:
        lead = next((v for v in c if v), 0)
        if not lead:
            return False
        inv = pow(lead, -1, p)
        key = tuple(v * inv % p for v in c)
        if key in seen:
            return False
        seen.add(key)
    return True


def random_spec(rng, p: int = 7, max_elements: int = 12) -> AmalgamSpec:
    """Two random GF(p) column matroids glued along a shared line.

    The line points are (1, c) for distinct c in the first two coordinates on
    both sides, so the shared restrictions agree by construction.
    """
    k = rng.randint(2, 4)
    budget = max_elements - k
    n1 = rng.randint(1, budget - 1)
    n2 = rng.randint(1, budget - n1)
    cs = rng.sample(range(p + 1), k)
    line = [(1, c) if c < p else (0, 1) for c in cs]
    ell = [f"l{i + 1}" for i in range(k)]

    def side(tag: str, m: int) -> MatrixMatroid:
        # PG(1, p) has only p + 1 points, so wide sides need rank 3 or more
        r = rng.randint(2 if k + m <= p + 1 else 3, 4)
        while True:
            cols = [v + (0,) * (r - 2) for v in line]
            cols += [tuple(rng.randrange(p) for _ in range(r)) for _ in range(m)]
            if _projectively_distinct(p, cols):
                break
        rows = tuple(tuple(c[i] for c in cols) for i in range(r))
        labels = tuple(ell) + tuple(f"{tag}{j + 1}" for j in range(m))
        return MatrixMatroid(FFMatrix(p, rows, col_labels=labels))

    return AmalgamSpec(side("c", n1), side("d", n2))
