"""Acceptance suite: every criterion at full size with its time limit.

Each test prints one ``PASS``/``FAIL`` line with its wall time, then asserts
both the verdict and the limit.  Run with ``pytest -s`` to see the lines
interleaved, or read them from the captured output of failing tests.
"""

from __future__ import annotations

import time

import pytest

from matroid_ms0.checks import CHECKS

pytestmark = pytest.mark.slow

CRITERIA = [
    # (id, check name, keyword arguments, limit in seconds)
    ("01-jackal-rank", "jackal", dict(seed=0, specs=200), 120),
    ("02-yogurt-compatibility", "yogurt", dict(seed=0, sentences=1000, max_n=3, max_k=2), 300),
    ("03-noodle-representation", "noodle", dict(seed=0, max_edges=12, samples=100_000, small=4), 300),
    ("04-velvet-glued-rank", "velvet", dict(seed=0, p=17, generator=3, s=3, t=3, samples=100_000, small=4), 300),
    ("05-alcove-unsat", "alcove", dict(s=3, t=4, orders=range(1, 201), sat_s=3, sat_n=16), 60),
    ("06-window-ind-cell", "window", dict(seed=0, pairs=10_000, s=3, t=3), 60),
    ("07-needle-end-to-end", "needle", dict(seed=0, size=10, s=3, t=3), 900),
    ("08-axiom-sentences", "axioms", dict(n=3), 60),
    ("09-minor-sentence", "minor", dict(max_n=4, enum_n=6), 300),
    ("10-counting-bounds", "bounds", dict(max_k=3, max_n=3), 60),
    ("11-jungle-demo", "jungle", dict(k=1), 600),
]


@pytest.mark.parametrize("label,name,kwargs,limit", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(label, name, kwargs, limit):
    start = time.perf_counter()
    result = CHECKS[name](**kwargs)
    elapsed = time.perf_counter() - start
    ok = result.passed and elapsed < limit
    print(f"{'PASS' if ok else 'FAIL'} {label} {elapsed:.1f}s (limit {limit}s) {result.counters}")
    if result.counterexample is not None:
        print(f"  counterexample: {result.counterexample}")
    assert result.passed, f"{label}: {result.counterexample} {result.notes}"
    assert elapsed < limit, f"{label}: took {elapsed:.1f}s, limit {limit}s"
