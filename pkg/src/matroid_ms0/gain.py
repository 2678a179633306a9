"""Gain graphs over cyclic groups and their frame matroids.

Gains are stored as exponents of a distinguished generator, so the group
operation is addition modulo the group order and a cycle is balanced when its
exponents sum to zero.  Reversing a non-loop edge negates its exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .errors import InputError
from .field import FFMatrix, PrimeField, element_order, find_generator
from .matroid import Matroid, bits, popcount


@dataclass(frozen=True)
class GainGroup:
    kind: str
    order: int
    p: int | None = None
    generator: int | None = None

    @classmethod
    def cyclic(cls, n: int) -> "GainGroup":
        if n < 1:
            raise InputError("cyclic group order must be at least 1")
        return cls("cyclic", n)

    @classmethod
    def field_units(cls, p: int, generator: int | None = None) -> "GainGroup":
        F = PrimeField(p)
        g = find_generator(F) if generator is None else generator % p
        if g == 0 or element_order(F, g) != p - 1:
            raise InputError(f"{generator} does not generate the unit group of GF({p})")
        return cls("field_units", p - 1, p, g)

    def reduce(self, e: int) -> int:
        return e % self.order

    def element_order(self, e: int) -> int:
        """Order of generator**e."""
        return self.order // gcd(e % self.order, self.order)

    def field_value(self, e: int) -> int:
        if self.kind != "field_units":
            raise InputError("a cyclic group without a field embedding has no matrix entries")
        return pow(self.generator, e % self.order, self.p)

    def to_json(self) -> dict:
        if self.kind == "cyclic":
            return {"kind": "cyclic", "order": self.order}
        return {"kind": "field_units", "p": self.p, "generator": self.generator}


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    gain: int

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


class GainGraph:
    def __init__(self, vertices: Iterable[str], edges: Iterable, group: GainGroup):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex labels")
        self.group = group
        vidx = {v: i for i, v in enumerate(self.vertices)}
        es = []
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            if e.u not in vidx or e.v not in vidx:
                raise InputError(f"edge {e.id!r} has an endpoint outside the vertex set")
            es.append(Edge(str(e.id), e.u, e.v, group.reduce(e.gain)))
        self.edges = tuple(es)
        self._eidx = {e.id: i for i, e in enumerate(self.edges)}
        if len(self._eidx) != len(self.edges):
            raise InputError("duplicate edge ids")
        self._vidx = vidx
        self._eu = [vidx[e.u] for e in self.edges]
        self._ev = [vidx[e.v] for e in self.edges]
        self._eg = [e.gain for e in self.edges]

    def __repr__(self) -> str:
        return f"<GainGraph |V|={len(self.vertices)} |E|={len(self.edges)} {self.group.kind}({self.group.order})>"

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def edge(self, eid: str) -> Edge:
        try:
            return self.edges[self._eidx[eid]]
        except KeyError:
            raise InputError(f"no edge {eid!r}") from None

    def edge_mask(self, X) -> int:
        if isinstance(X, int):
            return X
        if isinstance(X, str):
            X = (X,)
        m = 0
        for eid in X:
            if eid not in self._eidx:
                raise InputError(f"no edge {eid!r}")
            m |= 1 << self._eidx[eid]
        return m

    def gain(self, eid: str, u: str, v: str) -> int:
        """sigma(e, u, v) as an exponent."""
        e = self.edge(eid)
        if (u, v) == (e.u, e.v):
            return e.gain
        if (u, v) == (e.v, e.u):
            return self.group.reduce(-e.gain)
        raise InputError(f"({eid}, {u}, {v}) is not an incidence of the graph")

    def incidences(self) -> set[tuple[str, str, str]]:
        """The set A(G) of edge/end-vertex triples."""
        out = set()
        for e in self.edges:
            out.add((e.id, e.u, e.v))
            if not e.is_loop:
                out.add((e.id, e.v, e.u))
        return out

    def subgraph(self, edge_ids: Iterable[str]) -> "GainGraph":
        keep = [self.edge(eid) for eid in edge_ids]
        return GainGraph(self.vertices, keep, self.group)

    def frame_matroid(self) -> "GainGraphMatroid":
        return GainGraphMatroid(self)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "u": e.u, "v": e.v, "gain": e.gain} for e in self.edges],
        }

    # frame matroid oracle

    def frame_rank_mask(self, mask: int) -> int:
        """|V(X)| minus the number of balanced components of G[X]."""
        n = self.group.order
        eu, ev, eg = self._eu, self._ev, self._eg
        nv = len(self.vertices)
        parent = list(range(nv))
        pot = [0] * nv
        unbal = [False] * nv
        touched = 0
        balanced = 0
        while mask:
            low = mask & -mask
            i = low.bit_length() - 1
            mask ^= low
            u, v, g = eu[i], ev[i], eg[i]
            for w in (u, v):
                if not touched >> w & 1:
                    touched |= 1 << w
                    balanced += 1
            ru, pu = u, 0
            while parent[ru] != ru:
                pu += pot[ru]
                ru = parent[ru]
            if u == v:
                if g % n and not unbal[ru]:
                    unbal[ru] = True
                    balanced -= 1
                continue
            rv, pv = v, 0
            while parent[rv] != rv:
                pv += pot[rv]
                rv = parent[rv]
            if ru != rv:
                parent[rv] = ru
                pot[rv] = (pu + g - pv) % n
                if not (unbal[ru] and unbal[rv]):
                    balanced -= 1
                unbal[ru] = unbal[ru] or unbal[rv]
            elif (pu + g - pv) % n and not unbal[ru]:
                unbal[ru] = True
                balanced -= 1
        return popcount(touched) - balanced


def frame_is_independent(G: GainGraph, X) -> bool:
    """Every component of G[X] has at most one cycle, and that cycle is unbalanced."""
    mask = G.edge_mask(X)
    return G.frame_rank_mask(mask) == popcount(mask)


class GainGraphMatroid(Matroid):
    kind = "gain_graph"

    def __init__(self, graph: GainGraph):
        super().__init__(graph.edge_ids)
        self.graph = graph

    def indep_mask(self, mask: int) -> bool:
        return self.graph.frame_rank_mask(mask) == popcount(mask)

    def rank_mask(self, mask: int) -> int:
        memo = self._rank_memo
        if memo is None:
            return self.graph.frame_rank_mask(mask)
        r = memo.get(mask)
        if r is None:
            r = memo[mask] = self.graph.frame_rank_mask(mask)
        return r

    def to_json(self) -> dict:
        return {"elements": list(self.ground), "def": {"kind": self.kind, "graph": self.graph.to_json()}}


# cycles


def trace_cycle(endpoints: dict[str, tuple[str, str]], edge_set: Iterable[str]) -> tuple[str, list[tuple[str, bool]]]:
    """Order the edges of a cycle into a closed walk.

    ``endpoints`` maps edge id to its stored (u, v).  Returns the start vertex
    and the edges in traversal order, each flagged True when traversed u -> v.
    """
    ids = list(dict.fromkeys(edge_set))
    if not ids:
        raise InputError("a cycle needs at least one edge")
    if len(ids) == 1:
        u, v = endpoints[ids[0]]
        if u != v:
            raise InputError(f"edge {ids[0]!r} alone is not a cycle")
        return u, [(ids[0], True)]
    incident: dict[str, list[str]] = {}
    for eid in ids:
        u, v = endpoints[eid]
        if u == v:
            raise InputError(f"loop {eid!r} cannot lie on a longer cycle")
        incident.setdefault(u, []).append(eid)
        incident.setdefault(v, []).append(eid)
    if any(len(es) != 2 for es in incident.values()) or len(incident) != len(ids):
        raise InputError("edge set is not a cycle")
    start = endpoints[ids[0]][0]
    walk = []
    cur, prev = start, None
    for _ in range(len(ids)):
        a, b = incident[cur]
        eid = a if a != prev else b
        u, v = endpoints[eid]
        forward = cur == u
        walk.append((eid, forward))
        cur, prev = (v if forward else u), eid
    if cur != start or len({e for e, _ in walk}) != len(ids):
        raise InputError("edge set is not a single cycle")
    return start, walk


def cycle_gain(G: GainGraph, C, start: str | None = None) -> int:
    """Exponent of sigma(C) for a cycle given as a walk or as an edge set.

    A walk is a sequence of edge ids in traversal order, starting at
    ``start`` (default: the tail of the first edge).  A set or frozenset is
    traced into a walk first.
    """
    if isinstance(C, (set, frozenset)):
        start, walk = trace_cycle({e.id: (e.u, e.v) for e in G.edges}, C)
        return G.group.reduce(sum(G.edge(eid).gain * (1 if fwd else -1) for eid, fwd in walk))
    C = list(C)
    if not C:
        raise InputError("empty walk")
    first = G.edge(C[0])
    cur = first.u if start is None else start
    origin = cur
    seen = [cur]
    total = 0
    for eid in C:
        e = G.edge(eid)
        if e.is_loop:
            if e.u != cur or len(C) > 1:
                raise InputError(f"loop {eid!r} does not close a cycle at {cur!r}")
            total += e.gain
            continue
        if cur == e.u:
            total += e.gain
            cur = e.v
        elif cur == e.v:
            total -= e.gain
            cur = e.u
        else:
            raise InputError(f"edge {eid!r} is not incident with {cur!r}")
        seen.append(cur)
    if cur != origin:
        raise InputError("walk is not closed")
    if len(C) > 1 and len(set(seen[:-1])) != len(seen) - 1:
        raise InputError("walk repeats a vertex")
    return G.group.reduce(total)


def is_balanced(G: GainGraph, C, start: str | None = None) -> bool:
    return cycle_gain(G, C, start) == 0


def all_cycles(G: GainGraph) -> list[int]:
    """Edge masks of every cycle of the multigraph (loops included)."""
    found: set[int] = set()
    adj: dict[int, list[tuple[int, int]]] = {}
    for i, (u, v) in enumerate(zip(G._eu, G._ev)):
        if u == v:
            found.add(1 << i)
            continue
        adj.setdefault(u, []).append((v, i))
        adj.setdefault(v, []).append((u, i))
    for s in sorted(adj):
        stack = [(s, 0, 1 << s, None)]
        while stack:
            cur, emask, vmask, last = stack.pop()
            for w, i in adj.get(cur, ()):
                if i == last or emask >> i & 1:
                    continue
                if w == s and emask:
                    found.add(emask | (1 << i))
                elif w > s and not vmask >> w & 1:
                    stack.append((w, emask | (1 << i), vmask | (1 << w), i))
    return sorted(found, key=lambda m: (popcount(m), tuple(bits(m))))


def _mask_vertices(G: GainGraph, mask: int) -> int:
    vm = 0
    for i in bits(mask):
        vm |= (1 << G._eu[i]) | (1 << G._ev[i])
    return vm


def frame_circuits(G: GainGraph) -> list[tuple[str, ...]]:
    """Balanced cycles plus theta graphs and handcuffs with no balanced cycle.

    Built from the cycle list rather than from the rank oracle, so the two can
    be checked against each other.
    """
    ids = G.edge_ids
    cycles = all_cycles(G)
    balanced, unbalanced = [], []
    for c in cycles:
        gain = cycle_gain(G, frozenset(ids[i] for i in bits(c)))
        (balanced if gain == 0 else unbalanced).append(c)
    circuits = set(balanced)
    vsets = [_mask_vertices(G, c) for c in unbalanced]
    adj: dict[int, list[tuple[int, int]]] = {}
    for i, (u, v) in enumerate(zip(G._eu, G._ev)):
        if u != v:
            adj.setdefault(u, []).append((v, i))
            adj.setdefault(v, []).append((u, i))

    def bicycle_ok(U: int) -> bool:
        if any(b & U == b for b in balanced):
            return False
        return popcount(U) - popcount(_mask_vertices(G, U)) + 1 == 2

    for a in range(len(unbalanced)):
        for b in range(a + 1, len(unbalanced)):
            C1, C2 = unbalanced[a], unbalanced[b]
            V1, V2 = vsets[a], vsets[b]
            if V1 & V2:
                U = C1 | C2
                if bicycle_ok(U):
                    circuits.add(U)
                continue
            for path in _connecting_paths(adj, V1, V2):
                U = C1 | C2 | path
                if bicycle_ok(U):
                    circuits.add(U)
    ordered = sorted(circuits, key=lambda m: (popcount(m), tuple(bits(m))))
    return [tuple(ids[i] for i in bits(m)) for m in ordered]


def _connecting_paths(adj, V1: int, V2: int):
    """Edge masks of paths from V1 to V2 whose interior avoids both."""
    for s in bits(V1):
        stack = [(s, 0, 1 << s)]
        while stack:
            cur, emask, vmask = stack.pop()
            for w, i in adj.get(cur, ()):
                if emask >> i & 1 or vmask >> w & 1:
                    continue
                if V2 >> w & 1:
                    yield emask | (1 << i)
                elif not V1 >> w & 1:
                    stack.append((w, emask | (1 << i), vmask | (1 << w)))


# the two families and their gluing


def _check_order(group: GainGroup, exponent: int, bound: int, what: str):
    o = group.element_order(exponent)
    if o <= bound:
        raise InputError(f"{what} has order {o}; the construction needs order greater than {bound}")


def build_gamma(s: int, group: GainGroup, alpha: int = 1) -> GainGraph:
    """The hoop gain graph on u1..u_{s+1}."""
    if s < 3:
        raise InputError("s must be at least 3")
    _check_order(group, alpha, s, "alpha")
    u = [f"u{i}" for i in range(1, s + 2)]
    edges = [("a", u[0], u[0], alpha)]
    edges += [(f"a{i}", u[i - 1], u[i - 1], alpha) for i in range(2, s + 1)]
    edges.append(("b", u[s], u[s], alpha))
    for i in range(1, s + 1):
        edges.append((f"x{i}", u[i - 1], u[i], 0))
        edges.append((f"y{i}", u[i - 1], u[i], alpha))
    edges += [("x", u[0], u[s], 0), ("y", u[0], u[s], (s - 1) * alpha), ("z", u[0], u[s], s * alpha)]
    return GainGraph(u, edges, group)


def build_delta(t: int, group: GainGroup, beta: int = 1) -> GainGraph:
    """The loop gain graph on v1..v_{2t}."""
    if t < 3:
        raise InputError("t must be at least 3")
    _check_order(group, beta, 2 * t * (t - 1), "beta")
    v = [f"v{i}" for i in range(1, 2 * t + 1)]
    edges = [("a", v[0], v[0], beta)]
    edges += [(f"b{i}", v[i - 1], v[i - 1], beta) for i in range(2, 2 * t)]
    edges.append(("b", v[-1], v[-1], beta))
    for i in range(1, 2 * t):
        edges.append((f"e{i}", v[i - 1], v[i], 0))
        edges.append((f"f{i}", v[i - 1], v[i], (t - 1) * beta if i <= t else t * beta))
    edges += [
        ("x", v[0], v[-1], 0),
        ("y", v[0], v[-1], (t - 1) * beta),
        ("z", v[0], v[-1], t * beta),
        ("g", v[0], v[-1], t * (t - 1) * beta),
    ]
    return GainGraph(v, edges, group)


SHARED = ("a", "b", "x", "y", "z")


def glue_hoop_loop(G: GainGraph, D: GainGraph) -> GainGraph:
    """Identify the ends of x in both graphs; shared edges must agree."""
    if G.group != D.group:
        raise InputError("glued graphs must use the same gain group")
    shared = set(G.edge_ids) & set(D.edge_ids)
    if shared != set(SHARED):
        raise InputError(f"graphs must share exactly {set(SHARED)}, found {sorted(shared)}")
    gx, dx = G.edge("x"), D.edge("x")
    vmap = {dx.u: gx.u, dx.v: gx.v}
    for eid in SHARED:
        ge, de = G.edge(eid), D.edge(eid)
        if de.u not in vmap or de.v not in vmap:
            raise InputError(f"shared edge {eid!r} is not incident only with the glued vertices")
        if (vmap[de.u], vmap[de.v]) != (ge.u, ge.v) or de.gain != ge.gain:
            raise InputError(f"gain mismatch on shared edge {eid!r}")
    vertices = list(G.vertices) + [w for w in D.vertices if w not in vmap]
    edges = list(G.edges)
    for e in D.edges:
        if e.id in shared:
            continue
        edges.append(Edge(e.id, vmap.get(e.u, e.u), vmap.get(e.v, e.v), e.gain))
    return GainGraph(vertices, edges, G.group)


def incidence_matrix(G: GainGraph) -> FFMatrix:
    """The representation matrix D(G, sigma) over GF(p)."""
    if G.group.kind != "field_units":
        raise InputError("incidence_matrix needs gains in the unit group of a prime field")
    p = G.group.p
    m, n = len(G.vertices), len(G.edges)
    cols = []
    for e in G.edges:
        col = [0] * m
        j, k = G._vidx[e.u], G._vidx[e.v]
        if j == k:
            if e.gain % G.group.order:
                col[j] = 1
        else:
            gain = e.gain if j < k else -e.gain
            lo, hi = min(j, k), max(j, k)
            col[lo] = 1
            col[hi] = (-G.group.field_value(gain)) % p
        cols.append(col)
    rows = tuple(tuple(cols[c][r] for c in range(n)) for r in range(m))
    return FFMatrix(p, rows, G.vertices, G.edge_ids)
