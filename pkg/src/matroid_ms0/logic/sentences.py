"""Ready-made sentences: matroid axioms, minor containment, random prenex."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from ..errors import InputError
from .evaluate import evaluate
from .formula import (
    And, Exists, Forall, Formula, Fresh, Imp, Ind, Not, Sing, Subseteq, Union, conj_all,
)
from .parser import parse

AXIOM_TEXT = (
    "exists X1. Ind(X1)",
    "forall X1. forall X2. Ind(X1) & X2 <= X1 -> Ind(X2)",
    "forall X1. forall X2. Max(X1) & Ind(X2) & !Max(X2) -> "
    "exists X3. Sing(X3) & X3 <= X1 & !(X3 <= X2) & forall X4. Union(X2, X3; X4) -> Ind(X4)",
)


def axiom_sentences() -> tuple[Formula, Formula, Formula]:
    """I1 (non-empty), I2 (downward closed) and I3 (augmentation via Max)."""
    return tuple(parse(t) for t in AXIOM_TEXT)


def axioms_conjunction() -> Formula:
    i1, i2, i3 = axiom_sentences()
    return conj_all([i1, i2, i3])


def minor_sentence(N) -> Formula:
    """Sentence true in M exactly when M has a minor isomorphic to N.

    X1..Xn are the distinct elements x_i, X(n+1) is the independent set to
    contract, and X(n+2) is the union variable bound in each pattern
    conjunct.
    """
    n = N.n
    xs = [f"X{i}" for i in range(1, n + 1)]
    C = f"X{n + 1}"
    U = f"X{n + 2}"
    parts: list[Formula] = []
    for x in xs:
        parts += [Sing(x), Not(Subseteq(x, C))]
    parts.append(Ind(C))
    for i, j in itertools.combinations(range(n), 2):
        parts.append(Not(Subseteq(xs[i], xs[j])))
    for S in range(1 << n):
        members = [xs[i] for i in range(n) if S >> i & 1]
        fresh = Fresh(xs + [C, U])
        ind = Ind(U) if N.indep_mask(S) else Not(Ind(U))
        parts.append(Forall(U, Imp(Union(members + [C], U, fresh), ind)))
    body = conj_all(parts)
    for v in reversed(xs + [C]):
        body = Exists(v, body)
    return body


@dataclass(frozen=True)
class StackedMatroid:
    """A matroid together with a stack of subsets Y1..Yl (as masks)."""

    matroid: object
    stack: tuple[int, ...]
    k: int | None = None

    def __post_init__(self):
        M = self.matroid
        stack = tuple(Y if isinstance(Y, int) else M.ground.mask(Y) for Y in self.stack)
        for Y in stack:
            if Y >> M.n:
                raise InputError("stack entry is not a subset of the ground set")
        if self.k is not None and len(stack) > self.k:
            raise InputError(f"stack of length {len(stack)} exceeds k={self.k}")
        object.__setattr__(self, "stack", stack)

    def push(self, Y: int) -> "StackedMatroid":
        return StackedMatroid(self.matroid, self.stack + (Y,), self.k)


def _var_index(name: str) -> int:
    if name[:1] == "X" and name[1:].isdigit():
        return int(name[1:])
    raise InputError(f"free variable {name} is not of the form X<i>")


def satisfies_stacked(sm: StackedMatroid, f: Formula, budget: int | None = None) -> bool:
    """Evaluate ``f`` with free variable X_i read as the i-th stack entry."""
    free = sorted(f.fr, key=_var_index)
    if len(free) != len(sm.stack):
        raise InputError(f"formula has {len(free)} free variables but the stack has {len(sm.stack)} entries")
    if [_var_index(v) for v in free] != list(range(1, len(free) + 1)):
        raise InputError("free variables must be exactly X1..Xl")
    kwargs = {} if budget is None else {"budget": budget}
    return evaluate(sm.matroid, f, dict(zip(free, sm.stack)), **kwargs)


# random sentences


def random_qf(rng: random.Random, names: list[str], depth: int) -> Formula:
    """Random quantifier-free formula over Ind, Sing and subset atoms."""
    if depth == 0 or rng.random() < 0.25:
        kind = rng.randrange(3)
        if kind == 0:
            return Ind(rng.choice(names))
        if kind == 1:
            return Sing(rng.choice(names))
        return Subseteq(rng.choice(names), rng.choice(names))
    if rng.random() < 0.3:
        return Not(random_qf(rng, names, depth - 1))
    return And(random_qf(rng, names, depth - 1), random_qf(rng, names, depth - 1))


def random_prenex_sentence(rng: random.Random, k: int, depth: int = 3) -> Formula:
    """Random prenex sentence Q1 X1 ... Qk Xk psi with every Xi used in psi."""
    names = [f"X{i}" for i in range(1, k + 1)]
    psi = random_qf(rng, names, depth)
    for v in names:
        if v not in psi.fr:
            atom = random_qf(rng, [v], 0)
            psi = And(psi, atom) if rng.random() < 0.5 else And(psi, Not(Not(atom)))
    for v in reversed(names):
        psi = (Exists if rng.random() < 0.5 else Forall)(v, psi)
    return psi
