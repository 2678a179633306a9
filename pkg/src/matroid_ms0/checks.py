"""Standalone verification runs.

Each ``check_*`` function performs one end-to-end property check with a
fixed seed and returns a :class:`CheckResult`.  The CLI's ``verify``
command and the acceptance tests both call these.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .alcove import alcove_constraints, alcove_solve, order_bound
from .amalgam import AmalgamMatroid, AmalgamSpec, jackal_is_dependent, random_spec, rank_superset_min_table
from .errors import InputError
from .field import FFMatrix
from .gain import Edge, GainGraph, GainGroup, build_delta, build_gamma, glue_hoop_loop, incidence_matrix
from .logic import (
    Exists, Forall, Ind, Not, Sing, StackedMatroid, Subseteq, Tables, axioms_conjunction, evaluate,
    evaluate_vectorized, minor_sentence, random_prenex_sentence,
)
from .logic.formula import And, prefix_and_matrix
from .matroid import (
    DirectSum, MatrixMatroid, SetSystem, all_matroids, block_diagonal, gen_pg2, gen_uniform, has_minor,
    has_minor_enumerative, is_matroid, matroids_equal, popcount,
)
from .registry import (
    CompatibilityTables, LineData, TreeStore, bounds, compatible, ind_entry_v2_fast, ind_sum_v2, partition,
    tower_le, tree_of,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    seconds: float = 0.0
    counters: dict = field(default_factory=dict)
    counterexample: object = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "counters": self.counters,
            "counterexample": self.counterexample,
            "notes": self.notes,
        }


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# shared fixtures


def hoop_loop(p: int = 17, generator: int = 3, s: int = 3, t: int = 3, exponent: int = 1):
    """Hoop graph, loop graph and their glued graph over the units of GF(p).

    The gain exponent ``exponent`` refers to ``generator``; with the
    defaults alpha = beta = 3 in GF(17), of order 16.
    """
    group = GainGroup.field_units(p, generator)
    G = build_gamma(s, group, exponent)
    D = build_delta(t, group, exponent)
    return G, D, glue_hoop_loop(G, D)


def _sample_masks(rng: random.Random, n: int, count: int) -> list[int]:
    return [rng.getrandbits(n) for _ in range(count)]


def _small_masks(n: int, max_size: int):
    for k in range(max_size + 1):
        for c in itertools.combinations(range(n), k):
            yield sum(1 << i for i in c)


def _translate(positions: list[int]):
    def tr(mask: int) -> int:
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= 1 << positions[i]
            mask >>= 1
            i += 1
        return out

    return tr


# 1


@_timed
def check_jackal(seed: int = 0, specs: int = 200, p: int = 7, max_elements: int = 12) -> CheckResult:
    """Closure-based amalgam dependence against the rank formula, all subsets."""
    rng = random.Random(seed)
    subsets = 0
    for i in range(specs):
        spec = random_spec(rng, p, max_elements)
        table = rank_superset_min_table(spec)
        for X in range(1 << spec.n):
            subsets += 1
            if jackal_is_dependent(spec, X) != (table[X] < popcount(X)):
                return CheckResult("jackal", False, counters={"specs": i, "subsets": subsets},
                                   counterexample={"spec": i, "X": list(spec.elements[j] for j in range(spec.n) if X >> j & 1)})
    return CheckResult("jackal", True, counters={"specs": specs, "subsets": subsets})


# 2


def small_matroid_pairs(max_n: int = 3):
    left = [M for n in range(max_n + 1) for M in all_matroids(n, [f"p{i}" for i in range(n)])]
    right = [M for n in range(max_n + 1) for M in all_matroids(n, [f"q{i}" for i in range(n)])]
    return left, right


@_timed
def check_yogurt(seed: int = 0, sentences: int = 1000, max_n: int = 3, max_k: int = 2,
                 reference_pairs: int | None = None) -> CheckResult:
    """Tree compatibility against truth in the direct sum.

    Every pair is decided both by the memoised recursion and by the
    all-pairs tables; ``reference_pairs`` limits the recursion to a seeded
    sample of pairs per sentence.
    """
    left, right = small_matroid_pairs(max_n)
    store = TreeStore()
    trees = {}
    tables = {}
    for k in range(1, max_k + 1):
        tl = [tree_of(StackedMatroid(M, ()), k, 1, store) for M in left]
        tr = [tree_of(StackedMatroid(M, ()), k, 1, store) for M in right]
        trees[k] = (tl, tr)
        tables[k] = CompatibilityTables(tl + tr, 1)
    sums = {(i, j): Tables(DirectSum(a, b)) for i, a in enumerate(left) for j, b in enumerate(right)}
    rng = random.Random(seed)
    pairs = list(sums)
    checked = recursive = true_count = 0
    for s in range(sentences):
        k = rng.randint(1, max_k)
        psi = random_prenex_sentence(rng, k)
        tl, tr = trees[k]
        V = tables[k].matrix(psi)
        ct = tables[k]
        ref = set(pairs) if reference_pairs is None else set(rng.sample(pairs, min(reference_pairs, len(pairs))))
        memo: dict = {}
        for (i, j), T in sums.items():
            truth = evaluate_vectorized(None, psi, tables=T)
            comp = ct.lookup(V, tl[i], tr[j])
            if (i, j) in ref:
                recursive += 1
                if compatible(tl[i], tr[j], psi, memo=memo) != comp:
                    return CheckResult("yogurt", False, counterexample={"sentence": str(psi), "pair": [i, j], "engine": "recursive"})
            checked += 1
            true_count += truth
            if truth != comp:
                return CheckResult("yogurt", False, counters={"checked": checked},
                                   counterexample={"sentence": str(psi), "left": left[i].to_json(),
                                                   "right": right[j].to_json(), "direct_sum": truth})
    return CheckResult("yogurt", True, counters={
        "matroids": len(left), "pairs": len(pairs), "sentences": sentences, "checked": checked,
        "recursive_checked": recursive, "true": true_count, "trees": len(store)})


# 3


def random_gain_graph(rng: random.Random, p: int, max_edges: int) -> GainGraph:
    group = GainGroup.field_units(p)
    nv = rng.randint(1, 5)
    vs = [f"w{i}" for i in range(nv)]
    m = rng.randint(1, max_edges)
    edges = []
    for j in range(m):
        u, v = rng.choice(vs), rng.choice(vs)
        edges.append(Edge(f"h{j}", u, v, rng.randrange(group.order)))
    return GainGraph(vs, edges, group)


def gain_graph_corpus(seed: int = 0, max_edges: int = 12, random_graphs: int = 25) -> list[tuple[str, GainGraph]]:
    """Seeded random gain graphs plus restrictions of the hoop and loop graphs."""
    rng = random.Random(seed)
    out = []
    for i in range(random_graphs):
        out.append((f"random{i}", random_gain_graph(rng, rng.choice([5, 7, 11, 13, 17]), max_edges)))
    G, D, _ = hoop_loop()
    for g, name in ((G, "gamma"), (D, "delta")):
        ids = list(g.edge_ids)
        if len(ids) <= max_edges:
            out.append((name, g))
            continue
        for r in range(4):
            keep = sorted(rng.sample(range(len(ids)), max_edges))
            out.append((f"{name}-restriction{r}", g.subgraph([ids[i] for i in keep])))
    return out


@_timed
def check_noodle(seed: int = 0, max_edges: int = 12, samples: int = 100_000, small: int = 4) -> CheckResult:
    """Column matroid of the incidence-style matrix against the frame oracle."""
    corpus = gain_graph_corpus(seed, max_edges)
    compared = 0
    for name, G in corpus:
        A = MatrixMatroid(incidence_matrix(G))
        F = G.frame_matroid()
        for X in range(1 << len(G.edges)):
            compared += 1
            if A.indep_mask(X) != F.indep_mask(X):
                return CheckResult("noodle", False, counterexample={"graph": name, "edges": list(F.ground.labels(X))})
    _, _, H = hoop_loop()
    A = MatrixMatroid(incidence_matrix(H))
    F = H.frame_matroid()
    rng = random.Random(seed)
    n = len(H.edges)
    glued = 0
    for X in itertools.chain(_small_masks(n, small), _sample_masks(rng, n, samples)):
        glued += 1
        if A.indep_mask(X) != F.indep_mask(X):
            return CheckResult("noodle", False, counterexample={"graph": "glued", "edges": list(F.ground.labels(X))})
    return CheckResult("noodle", True, counters={"graphs": len(corpus), "subsets": compared, "glued_subsets": glued})


# 4


@_timed
def check_velvet(seed: int = 0, p: int = 17, generator: int = 3, s: int = 3, t: int = 3,
                 samples: int = 100_000, small: int = 4) -> CheckResult:
    """Glued-graph representation against the amalgam of hoop and loop matroids."""
    G, D, H = hoop_loop(p, generator, s, t)
    spec = AmalgamSpec(G.frame_matroid(), D.frame_matroid())
    amal = AmalgamMatroid(spec)
    rep = MatrixMatroid(incidence_matrix(H))
    tr = _translate([H.edge_ids.index(e) for e in spec.elements])
    rng = random.Random(seed)
    n = spec.n
    count = 0
    for X in itertools.chain(_small_masks(n, small), _sample_masks(rng, n, samples)):
        count += 1
        if amal.rank_mask(X) != rep.rank_mask(tr(X)):
            return CheckResult("velvet", False, counterexample={"X": list(spec.elements[i] for i in range(n) if X >> i & 1)})
    return CheckResult("velvet", True, counters={"elements": n, "subsets": count, "rank": amal.rank_mask((1 << n) - 1)})


# 5


@_timed
def check_alcove(s: int = 3, t: int = 4, orders: range = range(1, 201), sat_s: int = 3, sat_n: int = 16) -> CheckResult:
    """The alcove system is unsatisfiable for s != t and solvable for s = t at a large modulus."""
    system = alcove_constraints(s, t)
    m = order_bound(s, t)
    counters = {"forced_multiple": m, "orders": len(orders)}
    if alcove_solve(system, None).sat:
        return CheckResult("alcove", False, counters=counters, counterexample={"modulus": "Z"})
    for n in orders:
        r = alcove_solve(system, n)
        if r.sat:
            return CheckResult("alcove", False, counters=counters, counterexample={"modulus": n, "assignment": r.assignment})
    eq = alcove_constraints(sat_s, sat_s)
    r = alcove_solve(eq, sat_n)
    ok = r.sat and eq.verify([r.assignment[v] for v in eq.variables], sat_n)
    counters.update({"sat_modulus": sat_n, "witness": r.assignment})
    return CheckResult("alcove", bool(ok), counters=counters, counterexample=None if ok else {"modulus": sat_n})


# 6


@_timed
def check_window(seed: int = 0, pairs: int = 10_000, s: int = 3, t: int = 3) -> CheckResult:
    """Ind cell of the summed registries against independence of the union.

    Y and Y' are independent uniform subsets of the hoop and loop ground
    sets.  The same count is also reported for pairs cut from one amalgam
    subset (so Y and Y' agree on the shared line).
    """
    G, D, _ = hoop_loop(s=s, t=t)
    MG, MD = G.frame_matroid(), D.frame_matroid()
    spec = AmalgamSpec(MG, MD)
    amal = AmalgamMatroid(spec)
    lg, ld = LineData(MG), LineData(MD)
    to1 = _translate([spec.elements.index(e) for e in MG.ground])
    to2 = _translate([spec.elements.index(e) for e in MD.ground])
    rng = random.Random(seed)
    mismatches = []
    for _ in range(pairs):
        Y, Yp = rng.getrandbits(MG.n), rng.getrandbits(MD.n)
        cell = ind_sum_v2(ind_entry_v2_fast(lg, Y), ind_entry_v2_fast(ld, Yp))
        if cell != amal.indep_mask(to1(Y) | to2(Yp)):
            mismatches.append((Y, Yp, cell))
    consistent_bad = 0
    verdicts: dict = {}
    for _ in range(pairs):
        X = sum(1 << i for i in rng.sample(range(spec.n), rng.randint(0, 10)))
        a, b = spec.split(X)
        key = (ind_entry_v2_fast(lg, a), ind_entry_v2_fast(ld, b))
        indep = amal.indep_mask(X)
        verdicts.setdefault(key, indep)
        if ind_sum_v2(*key) != indep:
            consistent_bad += 1
    # a mismatch whose entries also occur on a line-consistent pair with the
    # opposite verdict cannot be fixed by any rule on these entries
    twins = sum(
        1 for Y, Yp, cell in mismatches
        if verdicts.get((ind_entry_v2_fast(lg, Y), ind_entry_v2_fast(ld, Yp))) == cell
    )
    counters = {"pairs": pairs, "mismatches": len(mismatches), "line_consistent_pairs": pairs,
                "line_consistent_mismatches": consistent_bad, "mismatches_with_opposite_twin": twins}
    cex = None
    if mismatches:
        Y, Yp, cell = mismatches[0]
        cex = {"Y": list(MG.ground.labels(Y)), "Y_prime": list(MD.ground.labels(Yp)), "sum_cell": cell}
    return CheckResult("window", not mismatches and not consistent_bad, counters=counters, counterexample=cex)


# 7


def one_variable_pool(seed: int = 0, size: int = 10, depth: int = 3):
    """Seeded one-variable sentences, both quantifiers represented."""
    rng = random.Random(seed)
    pool = []
    while len(pool) < size:
        f = random_prenex_sentence(rng, 1, depth)
        want = Exists if len(pool) % 2 == 0 else Forall
        if isinstance(f, want):
            pool.append(f)
    return pool


def _qf_vector(f, ind: np.ndarray, sing: np.ndarray) -> np.ndarray:
    if isinstance(f, Ind):
        return ind
    if isinstance(f, Sing):
        return sing
    if isinstance(f, Subseteq):
        return np.ones_like(ind)
    if isinstance(f, Not):
        return ~_qf_vector(f.body, ind, sing)
    return _qf_vector(f.left, ind, sing) & _qf_vector(f.right, ind, sing)


def amalgam_sweep(sentences, s: int = 3, t: int = 3, progress=None) -> tuple[list[bool], int]:
    """Truth of one-variable sentences in the hoop/loop amalgam by a full sweep.

    Every subset X of the amalgam is decided by the closure conditions,
    using per-side tables; hoop parts are looped over and the remaining
    loop elements are handled as one numpy vector.
    """
    G, D, _ = hoop_loop(s=s, t=t)
    spec = AmalgamSpec(G.frame_matroid(), D.frame_matroid())
    s1, s2 = spec.side1, spec.side2
    n1 = spec.m1.n
    n2 = spec.m2.n
    rest_labels = spec.elements[n1:]
    rest_pos = [spec.m2.ground.index(e) for e in rest_labels]
    nr = len(rest_labels)
    rest = np.arange(1 << nr, dtype=np.int64)
    emb = np.zeros(1 << nr, dtype=np.int64)
    for i, p in enumerate(rest_pos):
        emb |= ((rest >> i) & 1) << p
    # loop side over all subsets
    ind2 = np.fromiter((s2.indep(m) for m in range(1 << n2)), dtype=bool, count=1 << n2)
    span2 = np.zeros(1 << n2, dtype=bool)
    for m in np.flatnonzero(ind2):
        span2[m] = s2.spans_ell(int(m))
    low2 = np.fromiter((s2.low_on_ell(int(b)) for b in emb), dtype=bool, count=len(emb))
    cl2 = np.fromiter((s2.closure_on_ell(int(b)) for b in emb), dtype=np.int64, count=len(emb))
    pc_rest = np.array([popcount(int(r)) for r in rest], dtype=np.int64)
    ell1_to_2 = {}
    for e in spec.ell:
        ell1_to_2[spec.m1.ground.index(e)] = spec.m2.ground.index(e)
    specs = []
    for f in sentences:
        (q, name), = prefix_and_matrix(f)[0]
        specs.append((q, prefix_and_matrix(f)[1]))
    acc = [q == "A" for q, _ in specs]
    swept = 0
    for a in range(1 << n1):
        if progress and a % 1024 == 0:
            progress(a)
        size = popcount(a) + pc_rest
        sing = size == 1
        if not s1.indep(a):
            ind = np.zeros(len(rest), dtype=bool)
        else:
            lm = 0
            for p1, p2 in ell1_to_2.items():
                if a >> p1 & 1:
                    lm |= 1 << p2
            idx = emb | lm
            b1 = a & ~s1.ell
            dep = ~ind2[idx]
            if s1.spans_ell(a):
                dep |= low2
            if s1.low_on_ell(b1):
                dep |= span2[idx]
            c1 = s1.closure_on_ell(b1)
            if c1:
                dep |= (cl2 & c1) != 0
            ind = ~dep
        swept += len(rest)
        for i, (q, mat) in enumerate(specs):
            v = _qf_vector(mat, ind, sing)
            if q == "E":
                acc[i] = acc[i] or bool(v.any())
            else:
                acc[i] = acc[i] and bool(v.all())
    return acc, swept


@_timed
def check_needle(seed: int = 0, size: int = 10, s: int = 3, t: int = 3) -> CheckResult:
    """Compatibility of the hoop and loop trees against a full amalgam sweep."""
    pool = one_variable_pool(seed, size)
    G, D, _ = hoop_loop(s=s, t=t)
    store = TreeStore()
    th = tree_of(StackedMatroid(G.frame_matroid(), ()), 1, 2, store)
    tl = tree_of(StackedMatroid(D.frame_matroid(), ()), 1, 2, store)
    comp = [compatible(th, tl, f) for f in pool]
    truth, swept = amalgam_sweep(pool, s, t)
    bad = [str(f) for f, c, v in zip(pool, comp, truth) if c != v]
    return CheckResult("needle", not bad, counters={
        "sentences": len(pool), "subsets_swept": swept, "true": sum(truth),
        "hoop_registries": len(th.children), "loop_registries": len(tl.children)},
        counterexample=bad or None)


# 8


@_timed
def check_axioms(n: int = 3) -> CheckResult:
    """The axiom sentences against the direct matroid test on every family."""
    labels = [f"e{i}" for i in range(n)]
    A = axioms_conjunction()
    matroids = 0
    for fam in range(1 << (1 << n)):
        sets = [m for m in range(1 << n) if fam >> m & 1]
        S = SetSystem(labels, [[labels[i] for i in range(n) if m >> i & 1] for m in sets])
        got = evaluate(S, A)
        if got != is_matroid(n, sets):
            return CheckResult("axioms", False, counterexample={"family": [list(S.ground.labels(m)) for m in sets]})
        matroids += got
    return CheckResult("axioms", True, counters={"families": 1 << (1 << n), "matroids": matroids})


# 9


@_timed
def check_minor(max_n: int = 4, enum_n: int = 6, seed: int = 0, enum_samples: int = 300) -> CheckResult:
    """Minor sentence for U(1,2) against has_minor, and has_minor against enumeration."""
    N = gen_uniform(1, 2)
    f = minor_sentence(N)
    count = hits = 0
    for n in range(max_n + 1):
        for M in all_matroids(n):
            count += 1
            got = evaluate(M, f)
            hits += got
            if got != has_minor(M, N):
                return CheckResult("minor", False, counterexample={"matroid": M.to_json()})
    rng = random.Random(seed)
    pairs = 0
    pool = [gen_uniform(r, m) for m in range(0, enum_n + 1) for r in range(0, m + 1)]
    pool += [gen_pg2(2).restrict(list(gen_pg2(2).ground)[:k]) for k in range(3, 7)]
    for M in all_matroids(4):
        pool.append(M)
    smalls = [gen_uniform(r, m) for m in range(0, 4) for r in range(0, m + 1)] + list(all_matroids(3))
    for _ in range(enum_samples):
        M = rng.choice(pool)
        Nn = rng.choice(smalls)
        if Nn.n > M.n:
            continue
        pairs += 1
        if has_minor(M, Nn) != has_minor_enumerative(M, Nn):
            return CheckResult("minor", False, counterexample={"M": M.to_json(), "N": Nn.to_json()})
    return CheckResult("minor", True, counters={"matroids": count, "with_minor": hits, "enumeration_pairs": pairs})


# 10


def _depth_counts(trees) -> dict[int, int]:
    seen: dict[int, set] = {}
    stack = list(trees)
    while stack:
        t = stack.pop()
        ids = seen.setdefault(t.depth, set())
        if t.id in ids:
            continue
        ids.add(t.id)
        stack.extend(t.children)
    return {d: len(v) for d, v in sorted(seen.items())}


@_timed
def check_bounds(max_k: int = 3, max_n: int = 3) -> CheckResult:
    """Observed registry and tree counts against the counting bounds."""
    b1 = bounds(1)
    exact = b1["g1"][0] == 12 and b1["f1"] == 4096 and b1["g2"][0] == 102
    counters: dict = {"g1(1,0)": b1["g1"][0], "f1(1)": b1["f1"], "g2(1,0)": b1["g2"][0]}
    ok = exact
    corpus = [M for n in range(max_n + 1) for M in all_matroids(n)]
    corpus += [gen_pg2(2)]
    for k in range(1, max_k + 1):
        store = TreeStore()
        fam = [M for M in corpus if M.n * k <= 12]
        trees = [tree_of(StackedMatroid(M, ()), k, 1, store) for M in fam]
        depth = _depth_counts(trees)
        bk = bounds(k)
        counters[f"k{k}_distinct_by_depth"] = depth
        counters[f"k{k}_g1(k,0)"] = bk["g1"][0]
        for d, c in depth.items():
            if not tower_le(c, bk["g1"][d]):
                ok = False
    G, D, _ = hoop_loop()
    store = TreeStore()
    t2 = [tree_of(StackedMatroid(g.frame_matroid(), ()), 1, 2, store) for g in (G, D)]
    regs = _depth_counts(t2)[0]
    counters["variant2_k1_registries"] = regs
    ok = ok and regs <= b1["g2"][0]
    return CheckResult("bounds", ok, counters=counters)


# 11


@_timed
def check_jungle(k: int = 1) -> CheckResult:
    """Finite run of the machinery on PG(2,2) + PG(2,2) and PG(2,2) vs PG(2,3)."""
    P2 = gen_pg2(2)
    P2b = MatrixMatroid(FFMatrix(2, P2.matrix.rows, col_labels=tuple(f"{e}'" for e in P2.ground)))
    S = DirectSum(P2, P2b)
    axioms = evaluate(S, axioms_conjunction(), budget=None)
    rep = MatrixMatroid(block_diagonal(P2.matrix, P2b.matrix))
    same = matroids_equal(S, rep)
    part = partition([P2, gen_pg2(3)], k, 1)
    shared = part["block_count"] == 1
    ok = axioms and same and tower_le(part["block_count"], part["bound"])
    notes = [f"PG(2,2) and PG(2,3) {'share a block' if shared else 'lie in different blocks'} at k={k}"]
    return CheckResult("jungle", bool(ok), counters={
        "axioms_hold": axioms, "matrix_representation_equal": same,
        "blocks": part["block_count"], "bound": str(part["bound"])}, notes=notes)


CHECKS = {
    "jackal": check_jackal,
    "yogurt": check_yogurt,
    "noodle": check_noodle,
    "velvet": check_velvet,
    "alcove": check_alcove,
    "window": check_window,
    "needle": check_needle,
    "axioms": check_axioms,
    "minor": check_minor,
    "bounds": check_bounds,
    "jungle": check_jungle,
}
