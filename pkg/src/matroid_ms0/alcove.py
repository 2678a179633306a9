"""Linear-congruence model of re-representing a hoop/loop amalgam.

After normalising a hypothetical representation, the gains that remain
unknown are alpha_i (on y_i), beta_i (on f_i), gamma, delta, epsilon, zeta
(on x, y, z, g); x_i and e_i carry the identity.  Every balanced cycle of the
amalgam gives an equation (signed sum of exponents is 0) and every cycle that
is not a circuit gives a disequation.  Feasibility is decided over Z/n or Z
with a Smith normal form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

from .errors import BudgetExceeded, InputError
from .gain import trace_cycle


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[int, ...]
    cycle: tuple[str, ...]

    def value(self, x, n: int | None) -> int:
        v = sum(c * xi for c, xi in zip(self.coeffs, x))
        return v % n if n else v


@dataclass(frozen=True)
class GainConstraintSystem:
    variables: tuple[str, ...]
    equations: tuple[Constraint, ...]
    disequations: tuple[Constraint, ...]
    edge_variable: dict = field(default_factory=dict, compare=False)

    def verify(self, x, n: int | None) -> bool:
        return all(c.value(x, n) == 0 for c in self.equations) and all(
            c.value(x, n) != 0 for c in self.disequations
        )

    def without_disequations(self) -> "GainConstraintSystem":
        return GainConstraintSystem(self.variables, self.equations, (), self.edge_variable)


def _normalised_graph(s: int, t: int):
    """Endpoints and edge variables of the glued hoop/loop skeleton."""
    u = [f"u{i}" for i in range(1, s + 2)]
    v = [u[0]] + [f"v{i}" for i in range(2, 2 * t)] + [u[-1]]
    ends: dict[str, tuple[str, str]] = {}
    var: dict[str, str | None] = {}
    for i in range(1, s + 1):
        ends[f"x{i}"] = (u[i - 1], u[i])
        ends[f"y{i}"] = (u[i - 1], u[i])
        var[f"x{i}"], var[f"y{i}"] = None, f"alpha{i}"
    for i in range(1, 2 * t):
        ends[f"e{i}"] = (v[i - 1], v[i])
        ends[f"f{i}"] = (v[i - 1], v[i])
        var[f"e{i}"], var[f"f{i}"] = None, f"beta{i}"
    for eid, name in (("x", "gamma"), ("y", "delta"), ("z", "epsilon"), ("g", "zeta")):
        ends[eid] = (u[0], u[-1])
        var[eid] = name
    return ends, var


def alcove_constraints(s: int, t: int) -> GainConstraintSystem:
    if s < 3 or t < 3:
        raise InputError("s and t must both be at least 3")
    ends, var = _normalised_graph(s, t)
    names = (
        tuple(f"alpha{i}" for i in range(1, s + 1))
        + tuple(f"beta{i}" for i in range(1, 2 * t))
        + ("gamma", "delta", "epsilon", "zeta")
    )
    pos = {nm: i for i, nm in enumerate(names)}

    def constraint(cycle: list[str]) -> Constraint:
        _, walk = trace_cycle(ends, cycle)
        coeffs = [0] * len(names)
        for eid, forward in walk:
            if var[eid] is not None:
                coeffs[pos[var[eid]]] += 1 if forward else -1
        return Constraint(tuple(coeffs), tuple(cycle))

    xs = [f"x{i}" for i in range(1, s + 1)]
    ys = [f"y{i}" for i in range(1, s + 1)]
    es = [f"e{i}" for i in range(1, 2 * t)]
    fs = [f"f{i}" for i in range(1, 2 * t)]

    eq = [constraint(xs + ["x"])]
    for i in range(s):
        eq.append(constraint(ys[:i] + ys[i + 1:] + [xs[i], "y"]))
    eq.append(constraint(ys + ["z"]))
    for i in range(2 * t - 1):
        eq.append(constraint(es[:i] + es[i + 1:] + [fs[i], "y" if i < t else "z"]))
    eq.append(constraint(fs[:t] + es[t:] + ["g"]))
    eq.append(constraint(es[:t] + fs[t:] + ["g"]))

    dis = [constraint(ys[:j] + xs[j:] + ["x"]) for j in range(1, s)]
    dis += [constraint(fs[:j] + es[j:] + ["x"]) for j in range(1, t)]
    return GainConstraintSystem(names, tuple(eq), tuple(dis), var)


# integer Smith normal form


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: list[list[int]]):
    """Return (U, D, V) with U A V = D diagonal and U, V unimodular.

    The diagonal entries are non-negative and each divides the next.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(r) for r in A]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        for M in (D, U):
            M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]

    def add_col(src, dst, k):
        for M in (D, V):
            for r in M:
                r[dst] += k * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                q = D[i][t] // D[t][t]
                add_row(t, i, -q)
                if D[i][t]:
                    swap_rows(t, i)
                    done = False
            for j in range(t + 1, n):
                q = D[t][j] // D[t][t]
                add_col(t, j, -q)
                if D[t][j]:
                    swap_cols(t, j)
                    done = False
            if done:
                # enforce divisibility of the rest of the block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
        if D[t][t] < 0:
            for M in (D, U):
                M[t] = [-a for a in M[t]]
        t += 1
    return U, D, V


def _matrix(sys: GainConstraintSystem) -> list[list[int]]:
    return [list(c.coeffs) for c in sys.equations] or [[0] * len(sys.variables)]


@dataclass(frozen=True)
class SolveResult:
    sat: bool
    assignment: dict | None = None
    modulus: int | None = None
    searched: int = 0


def alcove_solve(sys: GainConstraintSystem, n: int | None, cap: int = 1 << 22) -> SolveResult:
    """Decide the system modulo ``n`` or, with ``n=None``, over the integers."""
    if n is not None and n < 1:
        raise InputError("modulus must be at least 1")
    A = _matrix(sys)
    _, D, V = smith_normal_form(A)
    nv = len(sys.variables)
    diag = [D[i][i] if i < len(D) else 0 for i in range(nv)]
    cols = [[V[r][c] for r in range(nv)] for c in range(nv)]
    return _solve_mod(sys, n, diag, cols, cap) if n is not None else _solve_int(sys, diag, cols)


def _combine(cols, y, n, nv):
    x = [0] * nv
    for c, k in zip(cols, y):
        if k:
            for r, v in enumerate(c):
                x[r] += k * v
    return [v % n for v in x] if n else x


def _solve_mod(sys, n, diag, cols, cap):
    # the solution group is generated by (n / gcd(d_i, n)) * column_i
    steps, sizes = [], []
    for d in diag:
        g = gcd(d, n)
        steps.append(n // g)
        sizes.append(g)
    total = 1
    for g in sizes:
        total *= g
    if total > cap:
        raise BudgetExceeded(total, cap)
    searched = 0
    for ks in itertools.product(*(range(g) for g in sizes)):
        searched += 1
        x = _combine(cols, [k * st for k, st in zip(ks, steps)], n, len(sys.variables))
        if all(c.value(x, n) != 0 for c in sys.disequations):
            return SolveResult(True, dict(zip(sys.variables, x)), n, searched)
    return SolveResult(False, None, n, searched)


def _solve_int(sys, diag, cols):
    kernel = [c for d, c in zip(diag, cols) if d == 0]
    forms = [[sum(a * b for a, b in zip(c.coeffs, k)) for k in kernel] for c in sys.disequations]
    if any(not any(f) for f in forms):
        return SolveResult(False, None, None, 0)
    # moment-curve points (1, c, c^2, ...) avoid every proper hyperplane for large c
    for c in itertools.count():
        y = [c ** i for i in range(len(kernel))]
        if all(sum(a * b for a, b in zip(f, y)) for f in forms):
            x = _combine(kernel, y, None, len(sys.variables))
            return SolveResult(True, dict(zip(sys.variables, x)), None, c + 1)


def implied_multiple(sys: GainConstraintSystem, variable: str) -> int:
    """Least m > 0 with m * variable = 0 forced by the equations, or 0 if none.

    Computed from an integer echelon form with ``variable`` as the last column:
    the lattice of consequences meets that axis in the multiples of the last
    pivot.
    """
    j = sys.variables.index(variable)
    order = [i for i in range(len(sys.variables)) if i != j] + [j]
    rows = [[r[i] for i in order] for r in _matrix(sys)]
    ncols = len(order)
    r0 = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(r0, len(rows)) if rows[i][col]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r0], rows[p] = rows[p], rows[r0]
            clean = True
            for i in range(r0 + 1, len(rows)):
                q = rows[i][col] // rows[r0][col]
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r0])]
                if rows[i][col]:
                    clean = False
            if clean:
                break
        if any(rows[i][col] for i in range(r0, len(rows))):
            if col == ncols - 1:
                return abs(rows[r0][col])
            r0 += 1
    return 0


def order_bound(s: int, t: int) -> int:
    """Implied bound on the order of alpha1; it divides |s - t| when s != t."""
    m = implied_multiple(alcove_constraints(s, t), "alpha1")
    if s != t and (m == 0 or abs(s - t) % m):
        raise AssertionError(f"expected the forced multiple {m} to divide {abs(s - t)}")
    return m
