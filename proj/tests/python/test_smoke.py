import json
import math

import pytest

pyigacore = pytest.importorskip("pyigacore")


def test_quarter_circle_point_on_circle():
    arc = pyigacore.quarter_circle_arc()
    x, y = arc.eval_point([0.5])
    assert abs(math.hypot(x, y) - 1.0) < 1e-12
    assert abs(x - math.sqrt(0.5)) < 1e-10


def test_partition_of_unity():
    patch = pyigacore.quarter_annulus(0.3, 0.5)
    vals = patch.basis([0.37, 0.61])
    assert abs(sum(vals) - 1.0) < 1e-12
    assert all(v >= -1e-14 for v in vals)
    assert len(vals) == (patch.degree(0) + 1) * (patch.degree(1) + 1)


def test_knot_vector_and_extraction():
    kv = pyigacore.KnotVector(2, [0, 0, 0, 0.5, 1, 1, 1])
    assert kv.find_span(0.3) == 2
    assert kv.num_spans() == 2
    ops = pyigacore.bezier_extraction(kv)
    assert len(ops) == 2
    # columns sum to one (partition of unity through the operator)
    for C in ops:
        for j in range(3):
            assert abs(sum(C[i][j] for i in range(3)) - 1.0) < 1e-12


def test_refinement_preserves_geometry():
    arc = pyigacore.quarter_circle_arc()
    fine = pyigacore.refine_uniform(pyigacore.elevate_degree(arc, 0, 1), 2)
    for i in range(11):
        a = arc.eval_point([i / 10.0])
        b = fine.eval_point([i / 10.0])
        assert max(abs(a[0] - b[0]), abs(a[1] - b[1])) < 1e-12
    assert pyigacore.element_count(fine) == 4


def test_gauss_points():
    pts, wts = pyigacore.gauss_points(2)
    assert abs(pts[1] - 1 / math.sqrt(3)) < 1e-15
    assert abs(sum(wts) - 2.0) < 1e-14


def test_run_case_end_to_end(tmp_path):
    cfg = json.loads(pyigacore.builtin_config("poisson-1d"))
    cfg["degree"] = 3
    rows = pyigacore.run_case(json.dumps(cfg), str(tmp_path))
    metrics = {r["metric"]: r["value"] for r in rows}
    assert metrics["nodal_max_error"] < 1e-12
    assert (tmp_path / "metrics.csv").exists()
    assert (tmp_path / "poisson1d.vtk").exists()


def test_case_catalog():
    names = pyigacore.case_catalog()
    assert "edge-crack" in names and "clamped-plate" in names
    for n in names:
        json.loads(pyigacore.builtin_config(n))
