"""Prenex conversion and canonical variable naming."""

from __future__ import annotations

from .formula import (
    ATOMS, And, Exists, Forall, Formula, Fresh, Not, _rename, is_quantifier_free, prefix_and_matrix, relabel,
)


def rename_apart(f: Formula) -> Formula:
    """Give every binder its own name, distinct from all free variables.

    The first binder of each name keeps it; later ones get fresh names.
    """
    taken = set(f.fr)
    fresh = Fresh(f.var)

    def go(g: Formula, env: dict[str, str]) -> Formula:
        if isinstance(g, ATOMS):
            return _rename(g, env)
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, And):
            return And(go(g.left, env), go(g.right, env))
        new = g.name if g.name not in taken else fresh()
        taken.add(new)
        return type(g)(new, go(g.body, {**env, g.name: new}))

    return go(f, {})


def _dual(q):
    return Forall if q is Exists else Exists


def _pull(f: Formula):
    """(list of (class, name), quantifier-free matrix) for a renamed-apart f."""
    if isinstance(f, ATOMS):
        return [], f
    if isinstance(f, Not):
        pre, m = _pull(f.body)
        return [(_dual(q), v) for q, v in pre], Not(m)
    if isinstance(f, And):
        pl, ml = _pull(f.left)
        pr, mr = _pull(f.right)
        return pl + pr, And(ml, mr)
    pre, m = _pull(f.body)
    return [(type(f), f.name)] + pre, m


def to_prenex(f: Formula) -> Formula:
    """Equivalent formula with every quantifier at the front.

    Already-prenex input comes back unchanged.  Otherwise binders are first
    renamed apart, which adds variables only when one name was bound in more
    than one place.
    """
    if _is_prenex(f):
        return f
    pre, m = _pull(rename_apart(f))
    for q, v in reversed(pre):
        m = q(v, m)
    return m


def _is_prenex(f: Formula) -> bool:
    return is_quantifier_free(prefix_and_matrix(f)[1])


def normalize_prenex(f: Formula, prefix: str = "X") -> Formula:
    """Prenex form with variables renamed X1..Xk: free ones (sorted) first,
    then bound ones in quantifier order."""
    p = to_prenex(f)
    quants, _ = prefix_and_matrix(p)
    order = sorted(p.fr, key=_natural) + [v for _, v in quants]
    mapping = {v: f"{prefix}{i + 1}" for i, v in enumerate(order)}
    # route through temporaries so overlapping old and new names cannot collide
    fresh = Fresh(p.var | set(mapping.values()))
    tmp = {v: fresh() for v in order}
    back = {tmp[v]: mapping[v] for v in order}
    return _rename(_rename(p, tmp), back)


def _natural(name: str):
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return (head, int(tail) if tail else -1, name)


def public_names(f: Formula, prefix: str = "X") -> Formula:
    """Rename generated variables (leading '_') to unused X<i> names.

    The result prints as text the parser accepts.
    """
    hidden = sorted((v for v in f.var if v.startswith("_")), key=_natural)
    taken = {int(v[len(prefix):]) for v in f.var if v.startswith(prefix) and v[len(prefix):].isdigit()}
    mapping, i = {}, 0
    for v in hidden:
        i += 1
        while i in taken:
            i += 1
        mapping[v] = f"{prefix}{i}"
    return relabel(f, mapping)
