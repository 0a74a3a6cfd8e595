import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sharpsphere.specialfn import (
    bessel_j, bessel_j_orders, beta_fn, gamma_exact, gamma_fn, harmonic_dim, sphere_area, sphere_area_exact,
)

# 20-digit references computed once with mpmath and frozen here.
BESSEL_REF = [
    (0, 1, 0.76519768655796655145),
    (0.5, 3, 0.065008182877375778114),
    (1.5, 25, -0.15901789538603657984),
    (2, 15.5, 0.13080654513898528374),
    (12.5, 14, 0.27695679878129617961),
    (33.5, 40, -0.018372954183933615798),
    (0, 500, -0.034100556880731998265),
    (3, 1000, -0.0048274208252039478996),
]

OMEGA_REF = [
    6.2831853071795864769, 12.566370614359172954, 19.739208802178717238, 26.318945069571622984,
    31.006276680299820175, 33.073361792319808187, 32.469697011334145745, 29.686580124648361824,
]


@pytest.mark.parametrize("v,x,ref", BESSEL_REF)
def test_bessel_reference_values(v, x, ref):
    assert bessel_j(v, x) == pytest.approx(ref, rel=1e-11, abs=1e-14)


@pytest.mark.parametrize("n,ref", list(enumerate(OMEGA_REF, start=1)))
def test_sphere_area_reference(n, ref):
    assert sphere_area(n) == pytest.approx(ref, rel=1e-14)


def test_sphere_area_exact_forms():
    assert sphere_area_exact(1) == (Fraction(2), 1)
    assert sphere_area_exact(2) == (Fraction(4), 1)
    assert sphere_area_exact(3) == (Fraction(2), 2)
    assert sphere_area_exact(4) == (Fraction(8, 3), 2)


@given(st.integers(min_value=3, max_value=60))
def test_sphere_area_recursion(n):
    assert sphere_area(n) == pytest.approx(2 * math.pi / (n - 1) * sphere_area(n - 2), rel=1e-13)


@given(st.integers(min_value=1, max_value=200))
def test_gamma_recursion_half_integers(m):
    x = m / 2
    assert gamma_fn(x + 1) == pytest.approx(x * gamma_fn(x), rel=1e-13)


def test_gamma_exact_half():
    assert gamma_exact(0.5) == (Fraction(1), 1)
    assert gamma_exact(3.5) == (Fraction(15, 8), 1)
    assert gamma_exact(5) == (Fraction(24), 0)


def test_gamma_rejects_poles():
    with pytest.raises(ValueError):
        gamma_fn(0)
    with pytest.raises(ValueError):
        gamma_fn(-2)


def test_beta_matches_gamma_ratio():
    assert beta_fn(1.5, 2.5) == pytest.approx(gamma_fn(1.5) * gamma_fn(2.5) / gamma_fn(4.0), rel=1e-14)
    assert beta_fn(0.3, 0.7) == pytest.approx(math.pi / math.sin(0.3 * math.pi), rel=1e-12)


@given(st.floats(min_value=1e-3, max_value=400.0))
@settings(max_examples=60)
def test_half_order_reduction(x):
    ref = math.sqrt(2 / (math.pi * x)) * math.sin(x)
    assert bessel_j(0.5, x) == pytest.approx(ref, rel=1e-10, abs=1e-13)


@given(st.floats(min_value=0.0, max_value=30.0), st.floats(min_value=0.05, max_value=300.0))
@settings(max_examples=80)
def test_bessel_three_term_recurrence(v, x):
    lhs = bessel_j(v, x) + bessel_j(v + 2, x)
    rhs = 2 * (v + 1) / x * bessel_j(v + 1, x)
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-11)


def test_bessel_array_and_zero():
    x = np.array([0.0, 1.0, 50.0])
    out = bessel_j(0, x)
    assert out.shape == (3,)
    assert out[0] == 1.0
    assert bessel_j(1.5, 0.0) == 0.0


def test_bessel_orders_table_against_pointwise():
    x = np.linspace(0.1, 90, 37)
    tab = bessel_j_orders(1.0, 12, x)
    assert tab.shape == (13, x.size)
    for n in (0, 5, 12):
        np.testing.assert_allclose(tab[n], bessel_j(1.0 + n, x), rtol=1e-10, atol=1e-13)


@given(st.integers(min_value=2, max_value=12), st.integers(min_value=0, max_value=40))
def test_harmonic_dim(d, k):
    # homogeneous polynomials of degree k minus those of degree k-2
    ref = math.comb(k + d - 1, d - 1) - (math.comb(k + d - 3, d - 1) if k >= 2 else 0)
    assert harmonic_dim(d, k) == ref
