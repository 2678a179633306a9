"""Exact arithmetic over prime fields: element orders, generators, matrix rank."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime; only prime fields are supported")

    def reduce(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise InputError("0 has no inverse")
        return pow(a, -1, self.p)

    def neg(self, a: int) -> int:
        return (-a) % self.p


def element_order(F: PrimeField, a: int) -> int:
    """Multiplicative order of ``a`` in ``F``."""
    a %= F.p
    if a == 0:
        raise InputError("0 has no multiplicative order")
    o, x = 1, a
    while x != 1:
        x = x * a % F.p
        o += 1
    return o


def find_generator(F: PrimeField) -> int:
    """Smallest residue generating the multiplicative group."""
    for a in range(1, F.p):
        if element_order(F, a) == F.p - 1:
            return a
    raise AssertionError("unreachable: every prime field has a generator")


@dataclass(frozen=True)
class FFMatrix:
    """Matrix over GF(p) with labelled rows and columns."""

    p: int
    rows: tuple[tuple[int, ...], ...]
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    def __post_init__(self):
        PrimeField(self.p)
        rows = tuple(tuple(int(v) % self.p for v in r) for r in self.rows)
        width = len(rows[0]) if rows else len(self.col_labels)
        if any(len(r) != width for r in rows):
            raise InputError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)
        if not self.row_labels:
            object.__setattr__(self, "row_labels", tuple(f"r{i}" for i in range(len(rows))))
        if not self.col_labels:
            object.__setattr__(self, "col_labels", tuple(f"c{j}" for j in range(width)))
        if len(self.row_labels) != len(rows) or len(self.col_labels) != width:
            raise InputError("label count does not match matrix shape")
        if len(set(self.col_labels)) != len(self.col_labels):
            raise InputError("column labels must be distinct")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.col_labels)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.shape[1])]

    @classmethod
    def identity(cls, p: int, n: int) -> "FFMatrix":
        return cls(p, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, p: int, m: int, n: int) -> "FFMatrix":
        return cls(p, tuple((0,) * n for _ in range(m)), col_labels=tuple(f"c{j}" for j in range(n)))


def rank_of_vectors(p: int, vectors: Sequence[Sequence[int]]) -> int:
    """Rank of a list of equal-length vectors over GF(p).

    Row reduction with the pivot taken as the first nonzero entry in column
    order; the input is not modified.
    """
    rows = [list(v) for v in vectors if any(v)]
    if not rows:
        return 0
    width = len(rows[0])
    rank = 0
    for col in range(width):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col] % p:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        inv = pow(prow[col] % p, -1, p)
        for i in range(rank + 1, len(rows)):
            f = rows[i][col] % p
            if f:
                f = f * inv % p
                r = rows[i]
                for c in range(col, width):
                    r[c] = (r[c] - f * prow[c]) % p
        rank += 1
        if rank == len(rows):
            break
    return rank


def matrix_rank(A: FFMatrix) -> int:
    return rank_of_vectors(A.p, A.rows)
