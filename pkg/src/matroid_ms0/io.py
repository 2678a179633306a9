"""JSON readers and writers for matroids and gain graphs."""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

from .amalgam import AmalgamMatroid, AmalgamSpec
from .errors import InputError
from .field import FFMatrix
from .gain import Edge, GainGraph, GainGroup
from .matroid import CircuitsMatroid, IndependentSetsMatroid, Matroid, MatrixMatroid, SetSystem, is_matroid

INDEP_LIMIT = 16


def _need(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise InputError(f"{where}: missing field {key!r}")
    return d[key]


def gain_graph_from_json(obj: dict) -> GainGraph:
    g = _need(obj, "group", "gain graph")
    kind = _need(g, "kind", "group")
    try:
        if kind == "cyclic":
            group = GainGroup.cyclic(int(_need(g, "order", "group")))
        elif kind == "field_units":
            group = GainGroup.field_units(int(_need(g, "p", "group")), g.get("generator"))
        else:
            raise InputError(f"unknown group kind {kind!r}")
        edges = [
            Edge(str(_need(e, "id", "edge")), str(_need(e, "u", "edge")), str(_need(e, "v", "edge")), int(e.get("gain", 0)))
            for e in _need(obj, "edges", "gain graph")
        ]
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed gain graph: {exc}") from None
    return GainGraph([str(v) for v in _need(obj, "vertices", "gain graph")], edges, group)


def matroid_from_json(obj: dict, allow_non_matroid: bool = False):
    """Build a matroid from its JSON description.

    An ``independent_sets`` family is checked against the axioms when it
    has at most 16 elements; with ``allow_non_matroid`` a failing family is
    returned as a plain :class:`SetSystem` instead of being rejected.
    """
    elements = [str(e) for e in _need(obj, "elements", "matroid")]
    d = _need(obj, "def", "matroid")
    kind = _need(d, "kind", "def")
    if kind == "independent_sets":
        sets = [list(map(str, s)) for s in _need(d, "sets", "def")]
        unknown = {e for s in sets for e in s} - set(elements)
        if unknown:
            raise InputError(f"sets mention unknown elements {sorted(unknown)}")
        if len(elements) <= INDEP_LIMIT and not is_matroid(elements, sets):
            if allow_non_matroid:
                return SetSystem(elements, sets)
            raise InputError("the independent sets violate the matroid axioms")
        return IndependentSetsMatroid(elements, sets)
    if kind == "circuits":
        M = CircuitsMatroid(elements, [list(map(str, c)) for c in _need(d, "circuits", "def")])
        if M.n <= INDEP_LIMIT and (
            not is_matroid(M.n, M.independent_masks()) or set(M.circuit_masks()) != set(M._given)
        ):
            raise InputError("the circuits violate the circuit axioms")
        return M
    if kind == "matrix":
        try:
            A = FFMatrix(int(_need(d, "p", "def")), tuple(tuple(int(v) for v in r) for r in _need(d, "rows", "def")),
                         col_labels=tuple(elements))
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed matrix: {exc}") from None
        return MatrixMatroid(A)
    if kind == "gain_graph":
        G = gain_graph_from_json(_need(d, "graph", "def"))
        if list(G.edge_ids) != elements:
            raise InputError("gain-graph edge ids must equal the element list, in order")
        return G.frame_matroid()
    if kind == "amalgam":
        spec = AmalgamSpec(matroid_from_json(_need(d, "m1", "def")), matroid_from_json(_need(d, "m2", "def")))
        if list(spec.elements) != elements:
            raise InputError(f"amalgam elements must be {list(spec.elements)}")
        return AmalgamMatroid(spec)
    raise InputError(f"unknown matroid kind {kind!r}")


def matroid_to_json(M: Matroid) -> dict:
    return M.to_json()


def read_json(path) -> tuple[object, str]:
    """Parsed JSON and the sha256 of the raw bytes."""
    try:
        raw = Path(path).read_bytes() if str(path) != "-" else sys.stdin.buffer.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(raw), hashlib.sha256(raw).hexdigest()
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None


def load_matroid(path, allow_non_matroid: bool = False):
    obj, digest = read_json(path)
    return matroid_from_json(obj, allow_non_matroid), digest


def load_gain_graph(path) -> tuple[GainGraph, str]:
    obj, digest = read_json(path)
    if isinstance(obj, dict) and "def" in obj:
        obj = _need(obj["def"], "graph", "def")
    return gain_graph_from_json(obj), digest


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
