import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sharpsphere.measures import (
    INF, conv2, conv_profile, parse_q, radial_power_integral, sharp_constant, sharp_constant_d4_closed,
    sigma_hat, sigma_hat_norm, sigma_hat_norm_detail, range_clause,
)
from sharpsphere.specialfn import sphere_area

# C(d,4,2) from 25-digit quadrature between Bessel zeros plus the averaged tail, frozen.
C4_REF = {3: 2 * math.pi, 4: 10.56701600236425, 5: 17.241309790279145}


def sigma3_closed(r):
    # sigma*sigma*sigma on S^2 by elementary integration of 2 pi / s against the shell measure
    r = np.asarray(r, dtype=float)
    safe = np.maximum(r, 1.0)
    return np.where(r <= 1, 8 * math.pi**2, 4 * math.pi**2 * (3 - safe) / safe) * (r <= 3)


def test_parse_q():
    assert parse_q("inf") is INF
    assert parse_q(float("inf")) is INF
    assert parse_q("4") == 4.0
    assert str(INF) == "inf"
    for bad in ("0", -1, "nan"):
        with pytest.raises(ValueError):
            parse_q(bad)


@given(st.floats(min_value=1e-6, max_value=500))
@settings(max_examples=50)
def test_sigma_hat_d3_closed_form(r):
    assert sigma_hat(3, r) == pytest.approx(4 * math.pi * math.sin(r) / r, rel=1e-9, abs=1e-12)


def test_sigma_hat_at_zero_is_area():
    for d in range(2, 8):
        assert sigma_hat(d, 0.0) == pytest.approx(sphere_area(d - 1))


def test_conv2_values():
    r = np.array([0.5, 1.0, 1.9, 2.5])
    np.testing.assert_allclose(conv2(3, r), [4 * math.pi, 2 * math.pi, 2 * math.pi / 1.9, 0.0])
    assert conv2(5, 1.0) == pytest.approx(0.25 * sphere_area(3) * 3.0)
    assert math.isinf(conv2(4, 0.0))


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_profile_mass_is_area_power(d):
    for fold in (2, 3, 4, 5):
        prof = conv_profile(d, fold)
        assert prof.total_mass() == pytest.approx(sphere_area(d - 1) ** fold, rel=1e-9)


def test_profile_support():
    prof = conv_profile(4, 3, 256)
    assert prof(3.0001) == 0.0
    assert prof(-0.5) == 0.0
    assert np.all(prof(np.linspace(0, 3, 50)) >= 0)


@given(st.integers(min_value=3, max_value=6), st.integers(min_value=3, max_value=5),
       st.floats(min_value=0.0, max_value=12.0))
@settings(max_examples=30, deadline=None)
def test_profile_support_property(d, fold, r):
    prof = conv_profile(d, fold, 256)
    val = prof(r)
    assert val >= 0
    if r > fold:
        assert val == 0.0


def test_sigma3_in_dim3_matches_elementary_form():
    prof = conv_profile(3, 3)
    r = np.linspace(0.0, 3.2, 321)
    np.testing.assert_allclose(prof(r), sigma3_closed(r), rtol=1e-7, atol=1e-8 * 8 * math.pi**2)


def test_sigma4_at_origin():
    assert conv_profile(3, 4, 1024)(0.0) == pytest.approx(32 * math.pi**3, rel=1e-8)


def test_profile_rows_and_readonly():
    prof = conv_profile(3, 3, 128)
    rows = prof.to_rows()
    assert rows[0][0] == 0.0 and rows[-1][0] == 3.0
    with pytest.raises(ValueError):
        prof.values[0] = 1.0


@pytest.mark.parametrize("d", sorted(C4_REF))
def test_sharp_constant_reference(d):
    assert sharp_constant(d, 2, 2).value == pytest.approx(C4_REF[d], rel=1e-10)
    assert sharp_constant_d4_closed(d, 2) == pytest.approx(C4_REF[d], rel=1e-10)


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7])
@pytest.mark.parametrize("q", [2, 4, 7.5, "inf"])
def test_bessel_route_matches_closed_form(d, q):
    assert sharp_constant(d, 2, q).value == pytest.approx(sharp_constant(d, 2, q, method="closed-form-d4").value, rel=1e-12)


@pytest.mark.parametrize("d,k", [(3, 2), (4, 2), (5, 2), (3, 3)])
def test_plancherel(d, k):
    lhs = (2 * math.pi) ** d * conv_profile(d, 2 * k)(0.0)
    assert lhs == pytest.approx(sigma_hat_norm(d, k) ** (2 * k), rel=1e-9)


def test_norm_error_estimate_is_small():
    norm, err = sigma_hat_norm_detail(4, 3)
    assert err < 1e-10
    a, _ = radial_power_integral(4, 3)
    b, _ = radial_power_integral(4, 3, radius=200.0)
    assert a == pytest.approx(b, rel=1e-11)


def test_radius_below_tail_radius_rejected():
    with pytest.raises(ValueError):
        sigma_hat_norm_detail(4, 2, radius=5.0)


def test_clauses():
    assert range_clause(5, 2, 2) == "a"
    assert range_clause(9, 2, "inf") == "b"
    assert range_clause(2, 3, 6) == "c"
    for args in [(5, 2, 1.5), (9, 2, 3), (4, 3, 5), (2, 2, 4), (4, 1, 4)]:
        with pytest.raises(ValueError):
            range_clause(*args)


def test_unknown_method():
    with pytest.raises(ValueError):
        sharp_constant(3, 2, 2, method="nope")
    with pytest.raises(ValueError):
        sharp_constant(3, 3, 6, method="closed-form-d4")
