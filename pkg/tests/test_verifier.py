import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpsphere.eigencalc import lambda_exact
from sharpsphere.specialfn import sphere_area, harmonic_dim
from sharpsphere.spherequad import TrialFunction
from sharpsphere.verifier import (
    Report, antipodal_check, chain_report, decide, geometric_identity, geometric_identity_terms, hd_monte_carlo,
    hd_spectral, overall, verify_cor3, verify_lem11, verify_thm1, weighted_rhs_cor3,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
nonneg = st.floats(min_value=0, max_value=1e3, allow_nan=False)
relations = st.sampled_from(["le", "lt", "eq"])


@given(relations, finite, finite, nonneg, nonneg)
def test_verdict_is_pure_function_of_fields(rel, lhs, rhs, err, tol):
    r1 = Report("x", lhs, rhs, err, tol, rel)
    r2 = Report("y", lhs, rhs, err, tol, rel, details={"other": 1})
    assert r1.verdict == r2.verdict == decide(rel, lhs, rhs, err, tol)
    # round trip through the serialised form reproduces the verdict
    assert Report(**r1.to_dict()).verdict == r1.verdict


@given(finite, finite, nonneg, nonneg)
def test_verdict_semantics(lhs, rhs, err, tol):
    slack = max(tol, 3 * err)
    le = decide("le", lhs, rhs, err, tol)
    assert (le == "pass") == (lhs <= rhs + slack)
    assert le in ("pass", "fail")
    lt = decide("lt", lhs, rhs, err, tol)
    if lhs > rhs + slack:
        assert lt == "fail"
    elif lhs < rhs - slack:
        assert lt == "pass"
    else:
        assert lt == "inconclusive"


def test_report_rejects_inconsistent_verdict():
    with pytest.raises(ValueError):
        Report("x", 2.0, 1.0, 0.0, 0.0, "le", verdict="pass")
    with pytest.raises(ValueError):
        Report("x", 1.0, 1.0, -1.0, 0.0)
    with pytest.raises(ValueError):
        decide("gt", 1.0, 1.0, 0.0, 0.0)


def test_nonfinite_fails():
    assert decide("le", math.nan, 1.0, 0.0, 0.0) == "fail"
    assert decide("eq", math.inf, math.inf, 0.0, 0.0) == "fail"


def test_overall():
    assert overall(["pass", "pass"]) == "pass"
    assert overall(["pass", "inconclusive"]) == "inconclusive"
    assert overall(["inconclusive", "fail"]) == "fail"


def test_identity_terms_on_regular_tetrahedron_style_quadruple():
    z = np.eye(3)
    quad = [z[0], -z[0], z[1], -z[1]]
    assert geometric_identity_terms(*quad) == pytest.approx(4.0)


def test_geometric_identity_report():
    rep = geometric_identity(4, 20_000, seed=3)
    assert rep.verdict == "pass"
    assert rep.lhs <= 1e-12
    assert rep.details["max_closure_error"] < 1e-13


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7])
def test_hd_of_constant(d):
    mu = 1.7
    assert hd_spectral(d, [(0, mu)]) == pytest.approx(mu**2 * float(lambda_exact(d, 0)[0]) * sphere_area(d - 1))


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7])
def test_hd_degree_two_negative(d):
    val = hd_spectral(d, [(2, 1.0)])
    ref = float(lambda_exact(d, 2)[2]) * sphere_area(d - 1) / harmonic_dim(d, 2)
    assert val == pytest.approx(ref)
    assert val < 0


def test_hd_rejects_odd():
    with pytest.raises(ValueError):
        hd_spectral(4, [(1, 1.0)])


def test_hd_monte_carlo_agrees():
    d = 5
    g = TrialFunction.tabulated([1.0, 0.0, 0.4])
    val, err = hd_monte_carlo(d, g, 200_000, seed=0)
    spec = hd_spectral(d, g.coefficients(d))
    assert abs(val - spec) <= 4 * err


def test_thm1_reports():
    reps = verify_thm1(4, 2, 4, trials=2, seed=0)
    assert overall(r.verdict for r in reps) == "pass"
    assert {r.relation for r in reps} == {"eq", "le"}


def test_thm1_deterministic():
    a = [r.to_dict() for r in verify_thm1(3, 3, "inf", trials=2, seed=4)]
    b = [r.to_dict() for r in verify_thm1(3, 3, "inf", trials=2, seed=4)]
    assert a == b


def test_thm1_domain():
    with pytest.raises(ValueError):
        verify_thm1(4, 2, 1.5)


def test_cor3_small_run():
    reps = verify_cor3(3, pairs=3, n=20_000, seed=1)
    assert all(r.verdict != "fail" for r in reps)


def test_cor3_methods_agree():
    d = 4
    f = TrialFunction.exponential(0.6)
    g = TrialFunction.exponential(0.6, 0.5)
    a, ea = weighted_rhs_cor3(d, f, g, 200_000, seed=0)
    b, eb = weighted_rhs_cor3(d, f, g, 200_000, seed=0, method="uniform")
    assert abs(a - b) <= 4 * math.hypot(ea, eb)


def test_lem11_reports():
    reps = verify_lem11(4, trials=3, seed=0, mc_samples=50_000)
    assert all(r.verdict != "fail" for r in reps)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_chain_equal_for_constant(d):
    cr = chain_report(d)
    values = [s[1] for s in cr.stages]
    assert max(values) / min(values) - 1 < 1e-8
    assert cr.verdict == "pass"


@pytest.mark.parametrize("d", [3, 4, 6])
def test_chain_monotone_for_perturbation(d):
    cr = chain_report(d, TrialFunction.harmonic_perturbation(0.3, 2))
    values = [s[1] for s in cr.stages]
    assert all(a <= b * (1 + 1e-10) for a, b in zip(values, values[1:]))
    assert values[0] < values[-1] * (1 - 1e-4)
    assert cr.verdict == "pass"


def test_antipodal_strict_for_odd_part():
    reps = antipodal_check(TrialFunction.tabulated([1.0, 1.0]), 3)
    assert overall(r.verdict for r in reps) == "pass"


def test_antipodal_requires_nonnegative():
    with pytest.raises(ValueError):
        antipodal_check(TrialFunction.plane_wave([1.0, 0.0, 0.0]), 3)
