"""One block per acceptance criterion; the terminal summary prints PASS/FAIL per criterion."""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from genrest.groups import GL2, GSP4, PARAMODULAR_LEVI, SP4, build_group, order_formula
from genrest.tables import dixon_table, gl2_table
from genrest.verify import (counterexample_check, definition_equivalence_suite,
                            multiplicity_one_suite, rodier_suite, transfer_suite)

ALL_FAMILIES = [GL2, SP4, GSP4, PARAMODULAR_LEVI]


# 1 --------------------------------------------------------------------------------

@pytest.mark.criterion(1)
@pytest.mark.parametrize("q", [2, 3])
def test_counterexample_reproduction(q):
    t0 = time.perf_counter()
    rep = counterexample_check(q)
    elapsed = time.perf_counter() - t0
    assert rep.passed
    assert rep.params["degree"] == 2 * q > 0
    assert rep.cells and all(c["lhs"] == 0 for c in rep.cells)
    assert elapsed < 10


# 2 --------------------------------------------------------------------------------

_rodier_seconds = []


@pytest.mark.criterion(2)
@pytest.mark.parametrize("family,q", [(GL2, 2), (GL2, 3), (GSP4, 2), (GSP4, 3)])
def test_rodier_finite_analogue(family, q):
    t0 = time.perf_counter()
    rep = rodier_suite(family, q)
    _rodier_seconds.append(time.perf_counter() - t0)
    assert rep.passed
    assert rep.cells and all(c["lhs"] == c["rhs"] for c in rep.cells)
    G = build_group(family, q)
    levis = {r.tag for r in G.subgroup_data.parabolics if r.proper}
    assert {c["levi"] for c in rep.cells} == levis
    assert sum(_rodier_seconds) < 300


# 3 --------------------------------------------------------------------------------

_mult_one_seconds = []


@pytest.mark.criterion(3)
@pytest.mark.parametrize("family,q", [(GL2, 2), (GL2, 3), (GSP4, 2), (GSP4, 3)])
def test_multiplicity_one(family, q):
    t0 = time.perf_counter()
    rep = multiplicity_one_suite(family, q)
    _mult_one_seconds.append(time.perf_counter() - t0)
    assert rep.passed
    r = len(build_group(family, q).root_positions)
    n_chi = (q - 1) ** (2 if family == GL2 else 3)
    assert len(rep.cells) == n_chi * (q - 1) ** r
    assert all(c["lhs"] == 1 for c in rep.cells)
    assert sum(_mult_one_seconds) < 120


# 4 --------------------------------------------------------------------------------

@pytest.mark.criterion(4)
def test_genericity_transfer():
    t0 = time.perf_counter()
    rep = transfer_suite(GSP4, 2)
    elapsed = time.perf_counter() - t0
    assert rep.passed
    assert rep.cells
    for cell in rep.cells:
        assert len(cell["generic_constituents"]) == 1
        (gen,) = [c for c in cell["constituents"] if c["label"] == cell["generic_constituents"][0]]
        assert gen["mult"] == 1 and gen["whittaker"] == 1
    assert elapsed < 180


# 5 --------------------------------------------------------------------------------

@pytest.mark.criterion(5)
@pytest.mark.parametrize("q", [2, 3, 5])
def test_table_correctness(q):
    G = build_group(GL2, q)
    closed, dixon = gl2_table(G), dixon_table(G)
    perm, dist = closed.match(dixon)
    assert perm is not None and dist < 1e-6
    for tab in (closed, dixon):
        assert tab.orthogonality_error() < 1e-8
        assert sum(d * d for d in tab.degrees) == G.order


# 6 --------------------------------------------------------------------------------

@pytest.mark.criterion(6)
@pytest.mark.parametrize("family,q", [(f, q) for q in (2, 3) for f in ALL_FAMILIES])
def test_definition_equivalence(family, q):
    rep = definition_equivalence_suite(family, q)
    disagree = [tuple(c["psi"]) for c in rep.cells if not c["criteria_agree"]]
    assert not disagree, f"criteria disagree on {disagree}"
    assert rep.passed


# 7 --------------------------------------------------------------------------------

@pytest.mark.criterion(7)
@pytest.mark.parametrize("family,q", [(GL2, 2), (GL2, 3), (GSP4, 2), (GSP4, 3)])
def test_structural_oracles(family, q):
    G = build_group(family, q)
    if family == GL2:
        assert G.order == (q * q - 1) * (q * q - q)
    else:
        assert G.order == q ** 4 * (q * q - 1) * (q ** 4 - 1) * (q - 1)
    assert G.order == order_formula(family, q)
    assert int(G.class_sizes.sum()) == G.order
    assert np.array_equal(np.bincount(G.class_of), G.class_sizes)
    sd = G.subgroup_data
    w = G.mats[sd.w_o]
    assert np.array_equal(np.intersect1d(sd.B, G.conjugate(w, sd.B)), sd.T)


# 8 --------------------------------------------------------------------------------

_REPORT_SCRIPT = r"""
import sys
from pathlib import Path
from genrest.cli import main
out = Path(sys.argv[1])
cache = sys.argv[2]
jobs = {
    "counterexample-2": ["verify", "counterexample", "--q", "2"],
    "counterexample-3": ["verify", "counterexample", "--q", "3"],
    "rodier-gl2-3": ["verify", "rodier", "--family", "gl2", "--q", "3"],
    "rodier-gsp4-2": ["verify", "rodier", "--family", "gsp4", "--q", "2"],
    "mult-one-gsp4-3": ["verify", "mult-one", "--family", "gsp4", "--q", "3"],
    "transfer-gsp4-2": ["verify", "transfer", "--family", "gsp4", "--q", "2"],
    "table-gl2-5-closed": ["table", "--family", "gl2", "--q", "5", "--method", "closed"],
    "table-gsp4-2-dixon": ["table", "--family", "gsp4", "--q", "2", "--method", "dixon"],
    "table-param-3-dixon": ["table", "--family", "paramodular-levi", "--q", "3", "--method", "dixon"],
    "info-gsp4-3": ["group-info", "--family", "gsp4", "--q", "3"],
}
for name, args in jobs.items():
    main(args + ["--cache-dir", cache, "--out", str(out / f"{name}.json")])
"""


def _run_reports(out, cache_dir):
    out.mkdir()
    subprocess.run([sys.executable, "-c", _REPORT_SCRIPT, str(out), str(cache_dir)],
                   check=True, timeout=600)
    return {p.name: p.read_bytes() for p in sorted(out.glob("*.json"))}


@pytest.mark.criterion(8)
@pytest.mark.slow
def test_determinism(tmp_path):
    cache_dir = tmp_path / "cache"
    # first run builds the cache, second run reads it
    first = _run_reports(tmp_path / "run1", cache_dir)
    second = _run_reports(tmp_path / "run2", cache_dir)
    assert len(first) == 10
    assert first == second
    for blob in first.values():
        json.loads(blob)
