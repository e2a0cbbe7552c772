import json

import pytest

from discrete_racah.report import Report, merge_reports
from discrete_racah.suites import SUITES, applicable, default_suites, run_suite, run_suites

from conftest import params


def test_default_suites_depend_on_n():
    assert "classical" in default_suites(params(3, 2))
    assert "shift-covariance" not in default_suites(params(3, 2))
    assert "classical" not in default_suites(params(4, 2))
    five = default_suites(params(5, 2))
    assert "spectrum" not in five and "shift-covariance" in five


def test_applicable_reasons():
    assert applicable("nope", params(3, 2)) == "unknown suite 'nope'"
    assert applicable("classical", params(4, 2)) is not None
    with pytest.raises(ValueError):
        run_suite("classical", params(4, 2))


@pytest.mark.parametrize("suite", SUITES)
def test_every_suite_passes_small_rank_two(suite):
    P = params(3, 3) if suite == "classical" else params(4, 2)
    rep = run_suite(suite, P, mode="both")
    assert rep.passed, rep.to_dict()
    assert rep.relations


def test_float_mode_orthogonality_only_checks_connection_matrix():
    rep = run_suite("orthogonality", params(3, 3), mode="float")
    assert [r.name for r in rep.relations] == ["connection-orthonormal"]


def test_run_suites_parallel_matches_serial():
    P = params(4, 2)
    serial = run_suites(P, ["lind", "sigma"], threads=1)
    parallel = run_suites(P, ["lind", "sigma"], threads=2)
    assert [r.to_dict() for r in serial] == [r.to_dict() for r in parallel]


def test_merge_reports_sorted_and_counted():
    a, b = Report("b"), Report("a")
    a.add("x", ["2"], True)
    b.add("y", ["1"], False, {"why": "forced"})
    b.add("x", ["1"], True)
    doc = merge_reports({"n": 3}, [a, b])
    assert [(r["suite"], r["name"]) for r in doc["relations"]] == [("a", "x"), ("a", "y"), ("b", "x")]
    assert doc["summary"] == {"total": 3, "passed": 2, "failed": 1}
    json.dumps(doc)
