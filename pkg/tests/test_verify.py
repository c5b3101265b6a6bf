import json

import pytest

from dwpf import BracketParams, CheckSpec, run_degree_check, run_equivalence, \
    run_homogeneous_suite, run_recursion_suite
from dwpf.errors import GenericityExhausted
from dwpf.verify import _draw_generic, _method_value
import random


def _strip_elapsed(report):
    d = report.to_dict()
    d.pop("elapsed_ms")
    return d


def test_reports_are_deterministic():
    spec = CheckSpec("det", ks=1, Ls=2, draws=3, seed=11, tolerance=1e-10)
    a = run_equivalence(spec, "ik", "brute_force")
    b = run_equivalence(spec, "ik", "brute_force")
    assert json.dumps(_strip_elapsed(a)) == json.dumps(_strip_elapsed(b))


def test_equivalence_ik_vs_brute():
    spec = CheckSpec("ik", ks=1, Ls=2, draws=5, seed=3, tolerance=1e-10)
    report = run_equivalence(spec, "ik", "brute_force")
    assert report.verdict
    assert len(report.cases) == 5


def test_equivalence_fused_vs_c_plus_at_l1():
    spec = CheckSpec("cplus", ks=2, Ls=1, draws=1, seed=0, tolerance=1e-12)
    assert run_equivalence(spec, "fused", "c_plus").verdict


def test_equivalence_fused_vs_spin1():
    spec = CheckSpec("cross", ks=2, Ls=2, draws=5, seed=5, tolerance=1e-10)
    assert run_equivalence(spec, "fused", "spin1").verdict


def test_equivalence_failure_serializes_inputs():
    # deliberately wrong pairing: fused at L = 2 is not the constant [2]_2
    spec = CheckSpec("bad", ks=2, Ls=2, draws=2, seed=1, tolerance=1e-10)
    report = run_equivalence(spec, "fused", "c_plus")
    assert not report.verdict
    payload = report.to_dict()
    assert payload["verdict"] == "fail"
    for case in payload["cases"]:
        assert {"k", "L", "lambda", "xs", "ys"} <= set(case["inputs"])
    json.dumps(payload)  # must be serializable as-is


def test_method_registry_guards():
    p = BracketParams(lam=1.0)
    with pytest.raises(ValueError):
        _method_value("ik", p, 2, [0.1, 0.2], [0.5, 0.9])
    with pytest.raises(ValueError):
        _method_value("spin1", p, 1, [0.1], [0.5])
    with pytest.raises(ValueError):
        _method_value("nope", p, 1, [0.1], [0.5])


def test_recursion_suite_passes():
    spec = CheckSpec("rec", ks=2, Ls=2, draws=2, seed=7, tolerance=1e-9)
    report = run_recursion_suite(spec)
    assert report.verdict
    kinds = {c.inputs["kind"] for c in report.cases}
    assert kinds == {"opposed", "aligned"}


def test_recursion_suite_rejects_bad_spec():
    with pytest.raises(ValueError):
        run_recursion_suite(CheckSpec("rec", ks=1, Ls=2))
    with pytest.raises(ValueError):
        run_recursion_suite(CheckSpec("rec", ks=2, Ls=1))


def test_degree_check_trivial_and_l2():
    trivial = run_degree_check(CheckSpec("deg1", ks=2, Ls=1, draws=1, seed=2,
                                         tolerance=1e-8))
    assert trivial.verdict
    report = run_degree_check(CheckSpec("deg2", ks=2, Ls=2, draws=2, seed=2,
                                        tolerance=1e-8))
    assert report.verdict
    kinds = [c.inputs["kind"] for c in report.cases]
    assert kinds.count("held_out") == kinds.count("top_coefficients")


def test_homogeneous_suite():
    spec = CheckSpec("hom", ks=(1, 2), Ls=2, draws=1, seed=4, tolerance=1e-6)
    report = run_homogeneous_suite(spec)
    assert report.verdict
    kinds = {c.inputs["kind"] for c in report.cases}
    assert kinds == {"hom_vs_brute", "semi_vs_extrapolated", "hom_vs_extrapolated"}
    with pytest.raises(ValueError):
        run_homogeneous_suite(CheckSpec("hom", ks=4, Ls=2))


def test_spec_validation():
    with pytest.raises(ValueError):
        CheckSpec("s", draws=0)
    with pytest.raises(ValueError):
        CheckSpec("s", tolerance=0.0)
    spec = CheckSpec("s", ks=2, Ls=(2, 3))
    assert spec.ks == (2,) and spec.Ls == (2, 3)


def test_draw_rejection_exhaustion():
    # an absurd tolerance rejects every draw
    p = BracketParams(lam=1.0, genericity_tol=50.0)
    with pytest.raises(GenericityExhausted):
        _draw_generic(random.Random(0), p, 1, 2)
