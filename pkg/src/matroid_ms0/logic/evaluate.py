"""Model checking MS0 formulas over independence structures.

An independence structure is anything with ``n``, ``ground`` and
``indep_mask``: a :class:`~matroid_ms0.matroid.SetSystem` (arbitrary
family) or any matroid.  Set variables range over all subsets of the ground
set, encoded as bit masks.

Two engines:

* :func:`evaluate` compiles the formula to nested closures with early exit.
  Conjuncts not mentioning a quantified variable are hoisted out of its
  loop, and a guard conjunct (Sing, a subset bound, Ind, or a Union
  definition) restricts the values tried; this keeps the ``Union`` and
  ``Max`` expansions linear in the ground set.
* :func:`truth_table` evaluates with numpy arrays indexed by the free
  variables; it suits many small structures and prenex sentences.
"""

from __future__ import annotations

import numpy as np

from ..errors import BudgetExceeded, InputError
from .formula import ATOMS, And, Exists, Forall, Formula, Ind, Not, Sing, Subseteq, union_definition

DEFAULT_BUDGET = 1 << 30


def _implies_sing(f: Formula, v: str) -> bool:
    while isinstance(f, Not) and isinstance(f.body, Not):
        f = f.body.body
    return isinstance(f, Sing) and f.name == v


def _conjuncts(f: Formula) -> list[Formula]:
    while isinstance(f, Not) and isinstance(f.body, Not):
        f = f.body.body
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


class _Plan:
    """How a quantifier is evaluated.

    ``exists v. (I & D)`` is ``I & exists v. D`` and ``forall v. !(I & D)``
    is ``!I | forall v. !D`` when v is not free in I, so the conjuncts I run
    once.  Only values of v satisfying D matter, so a conjunct of D can
    narrow the domain: a Union definition fixes v, Sing(v) gives singletons,
    v <= w gives the subsets of w and Ind(v) the independent sets.
    """

    __slots__ = ("invariant", "dependent", "guard", "arg", "shaped")

    def __init__(self, q: Formula):
        v = q.name
        if isinstance(q, Exists):
            parts = _conjuncts(q.body)
        elif isinstance(q.body, Not):
            parts = _conjuncts(q.body.body)
        else:
            parts = None
        self.shaped = parts is not None
        self.guard, self.arg = "all", None
        if parts is None:
            self.invariant, self.dependent = [], [q.body]
            return
        self.invariant = [c for c in parts if v not in c.fr]
        self.dependent = [c for c in parts if v in c.fr]
        rank = {"union": 0, "sing": 1, "subset": 2, "ind": 3, "all": 4}
        for c in self.dependent:
            d = union_definition(c)
            if d is not None and d[1] == v and v not in d[0]:
                cand = ("union", d[0])
            elif _implies_sing(c, v):
                cand = ("sing", None)
            elif isinstance(c, Subseteq) and c.left == v and c.right != v:
                cand = ("subset", c.right)
            elif isinstance(c, Ind) and c.name == v:
                cand = ("ind", None)
            else:
                continue
            if rank[cand[0]] < rank[self.guard]:
                self.guard, self.arg = cand


def singleton_guarded(q: Formula) -> bool:
    """Whether only singleton values of the bound variable can decide ``q``."""
    return _Plan(q).guard == "sing"


def _domain_size(plan: _Plan, n: int) -> int:
    return {"union": 1, "sing": n}.get(plan.guard, 1 << n)


def estimate_cost(f: Formula, n: int) -> int:
    """Worst-case number of atomic evaluations, ignoring early exits."""
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, Not):
        return estimate_cost(f.body, n)
    if isinstance(f, And):
        return estimate_cost(f.left, n) + estimate_cost(f.right, n)
    if union_definition(f) is not None:
        return 1
    plan = _Plan(f)
    inv = sum(estimate_cost(c, n) for c in plan.invariant)
    dep = sum(estimate_cost(c, n) for c in plan.dependent)
    return inv + max(_domain_size(plan, n), 1) * dep


def _assignment_masks(S, f: Formula, assignment) -> dict[str, int]:
    assignment = dict(assignment or {})
    missing = f.fr - set(assignment)
    if missing:
        raise InputError(f"no value given for free variable(s) {sorted(missing)}")
    out = {}
    for k, val in assignment.items():
        if isinstance(val, int):
            if val >> S.n:
                raise InputError(f"mask for {k} exceeds the ground set")
            out[k] = val
        else:
            out[k] = S.ground.mask(val)
    return out


class _IndCache:
    def __init__(self, S):
        self.S = S
        self.memo: dict[int, bool] = {}
        self.calls = 0
        self._indep: list[int] | None = None

    def __call__(self, m: int) -> bool:
        v = self.memo.get(m)
        if v is None:
            self.calls += 1
            v = self.memo[m] = bool(self.S.indep_mask(m))
        return v

    def independent(self, n: int) -> list[int]:
        if self._indep is None:
            self._indep = [m for m in range(1 << n) if self(m)]
        return self._indep


def _all(fns):
    if len(fns) == 1:
        return fns[0]

    def conj(env):
        for g in fns:
            if not g(env):
                return False
        return True

    return conj


def _compile(f: Formula, slot: dict[str, int], ind: "_IndCache", n: int, fast: bool = True):
    if isinstance(f, Subseteq):
        a, b = slot[f.left], slot[f.right]
        return lambda env: not (env[a] & ~env[b])
    if isinstance(f, Sing):
        a = slot[f.name]
        return lambda env: env[a] != 0 and not (env[a] & (env[a] - 1))
    if isinstance(f, Ind):
        a = slot[f.name]
        return lambda env: ind(env[a])
    if isinstance(f, Not):
        g = _compile(f.body, slot, ind, n, fast)
        return lambda env: not g(env)
    if isinstance(f, And):
        g = _compile(f.left, slot, ind, n, fast)
        h = _compile(f.right, slot, ind, n, fast)
        return lambda env: g(env) and h(env)
    i = slot[f.name]
    want = isinstance(f, Exists)
    if not fast:
        body = _compile(f.body, slot, ind, n, fast)
        return _loop(i, lambda env: range(1 << n), body, want)
    d = union_definition(f)
    if d is not None:
        ps, t = [slot[p] for p in d[0]], slot[d[1]]

        def union(env):
            u = 0
            for p in ps:
                u |= env[p]
            return env[t] == u

        return union
    plan = _Plan(f)
    dep = _all([_compile(c, slot, ind, n, fast) for c in plan.dependent])
    if plan.guard == "union":
        ps = [slot[p] for p in plan.arg]

        def domain(env):
            u = 0
            for p in ps:
                u |= env[p]
            return (u,)
    elif plan.guard == "sing":
        singles = [1 << j for j in range(n)]
        domain = lambda env: singles
    elif plan.guard == "subset":
        w = slot[plan.arg]
        domain = lambda env: _submasks(env[w])
    elif plan.guard == "ind":
        domain = lambda env: ind.independent(n)
    else:
        full = range(1 << n)
        domain = lambda env: full
    if plan.shaped:
        # exists: the dependent part must hold; forall: it must fail
        body = dep if want else (lambda env: not dep(env))
    else:
        body = dep
    loop = _loop(i, domain, body, want)
    if not plan.invariant:
        return loop
    inv = _all([_compile(c, slot, ind, n, fast) for c in plan.invariant])
    if want:
        return lambda env: inv(env) and loop(env)
    return lambda env: not inv(env) or loop(env)


def _submasks(m: int):
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


def _loop(i: int, domain, body, want: bool):
    def quant(env):
        old = env[i]
        try:
            for m in domain(env):
                env[i] = m
                if body(env) == want:
                    return want
            return not want
        finally:
            env[i] = old

    return quant


def evaluate(S, f: Formula, assignment=None, budget: int | None = DEFAULT_BUDGET, fast: bool = True) -> bool:
    """Truth of ``f`` in ``S`` under ``assignment`` (name -> labels or mask).

    Raises :class:`BudgetExceeded` before evaluating when the worst-case cost
    estimate is above ``budget``.  ``fast=False`` turns off the quantifier
    planning and sweeps every subset at every quantifier.
    """
    masks = _assignment_masks(S, f, assignment)
    if budget is not None:
        est = estimate_cost(f, S.n) if fast else _naive_cost(f, S.n)
        if est > budget:
            raise BudgetExceeded(est, budget)
    names = sorted(f.var | set(masks))
    slot = {v: i for i, v in enumerate(names)}
    env = [masks.get(v, 0) for v in names]
    return bool(_compile(f, slot, _IndCache(S), S.n, fast)(env))


def _naive_cost(f: Formula, n: int) -> int:
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, Not):
        return _naive_cost(f.body, n)
    if isinstance(f, And):
        return _naive_cost(f.left, n) + _naive_cost(f.right, n)
    return (1 << n) * _naive_cost(f.body, n)


# vectorised engine


class Tables:
    """Per-structure arrays: independence and singleton flags over all masks."""

    def __init__(self, S):
        n = S.n
        if n > 20:
            raise InputError("truth tables are limited to 20 elements")
        self.n = n
        self.size = 1 << n
        self.ind = np.fromiter((S.indep_mask(m) for m in range(self.size)), dtype=bool, count=self.size)
        self.masks = np.arange(self.size)
        self.sing = (self.masks != 0) & ((self.masks & (self.masks - 1)) == 0)


def truth_table(S, f: Formula, order: list[str] | None = None, tables: Tables | None = None) -> np.ndarray:
    """Boolean array over the free variables of ``f``.

    Axis i ranges over all subsets for variable ``order[i]`` (default: the
    sorted variables of ``f``); axes of non-free variables have length one.
    A sentence yields a 0-d array.
    """
    T = tables or Tables(S)
    order = list(order or sorted(f.var))
    axis = {v: i for i, v in enumerate(order)}
    d = len(order)

    def shape_for(*vs):
        s = [1] * d
        for v in vs:
            s[axis[v]] = T.size
        return s

    def go(g: Formula) -> np.ndarray:
        if isinstance(g, Ind):
            return T.ind.reshape(shape_for(g.name))
        if isinstance(g, Sing):
            return T.sing.reshape(shape_for(g.name))
        if isinstance(g, Subseteq):
            if g.left == g.right:
                return np.ones([1] * d, dtype=bool)
            a = T.masks.reshape(shape_for(g.left))
            b = T.masks.reshape(shape_for(g.right))
            return (a & ~b) == 0
        if isinstance(g, Not):
            return ~go(g.body)
        if isinstance(g, And):
            return go(g.left) & go(g.right)
        body = go(g.body)
        red = np.any if isinstance(g, Exists) else np.all
        return red(body, axis=axis[g.name], keepdims=True)

    out = go(f)
    keep = tuple(i for i, v in enumerate(order) if v in f.fr)
    squeeze = tuple(i for i in range(d) if i not in keep)
    return np.broadcast_to(out, [T.size if i in keep else 1 for i in range(d)]).squeeze(axis=squeeze) if d else out


def evaluate_vectorized(S, f: Formula, tables: Tables | None = None) -> bool:
    """Truth of a sentence via :func:`truth_table`."""
    if f.fr:
        raise InputError("evaluate_vectorized needs a sentence")
    return bool(truth_table(S, f, tables=tables))
