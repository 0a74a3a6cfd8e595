import math

import numpy as np
import pytest
from scipy.special import jv

from sharpsphere.asymptotics import (
    abs2_wave, hankel_poly, phase_offset, poly_mul, power_exp_tail, tail_radius, wave_product,
)

# R^{1-s} E_s(-i omega R) from mpmath, frozen.
TAIL_REF = [
    (2, 1, 40, -0.0004846589814186586 - 0.0003921788842250473j),
    (1.5, 2, 40, 0.001959111610162338 - 0.0002548257298770291j),
    (3, 0.5, 60, 9.17008594575116e-06 + 5.144145060697651e-07j),
    (0.5, 1, 100, 0.05106376768861155 + 0.08597233745625356j),
]


@pytest.mark.parametrize("s,w,R,ref", TAIL_REF)
def test_power_exp_tail(s, w, R, ref):
    val, err = power_exp_tail(s, w, R)
    assert abs(val - ref) <= max(2 * err, 1e-14 * abs(ref))


def test_power_tail_nonoscillatory():
    assert power_exp_tail(3.0, 0.0, 10.0)[0] == pytest.approx(0.005)
    with pytest.raises(ValueError):
        power_exp_tail(1.0, 0.0, 10.0)


@pytest.mark.parametrize("mu", [0.0, 0.5, 2.5, 7.0])
def test_hankel_expansion_reproduces_bessel(mu):
    for r in (tail_radius(mu), 80.0, 300.0):
        z = np.polyval(hankel_poly(mu)[::-1], 1 / r)
        chi = r - phase_offset(mu)
        approx = math.sqrt(2 / (math.pi * r)) * (z * np.exp(1j * chi)).real
        assert approx == pytest.approx(jv(mu, r), abs=1e-14)


def test_half_integer_expansion_terminates():
    p = hankel_poly(1.5)
    assert np.count_nonzero(p) == 2


def test_poly_mul_truncates():
    p = np.array([1.0, 1.0], dtype=complex)
    assert np.allclose(poly_mul(p, p, degree=1), [1, 2])
    assert np.allclose(poly_mul(p, p, degree=4), [1, 2, 1, 0, 0])


def test_abs2_wave_is_modulus_squared():
    # |(A e^{i chi} + B e^{-i chi}) / 2|^2 at x = 0 with constant A, B
    a = np.array([1.0 + 2.0j])
    b = np.array([0.5 - 1.0j])
    w = abs2_wave(a, b, degree=0)
    chi = 0.7
    val = sum(w[m][0] * np.exp(2j * m * chi) for m in w)
    ref = abs((a[0] * np.exp(1j * chi) + b[0] * np.exp(-1j * chi)) / 2) ** 2
    assert val.real == pytest.approx(ref)
    assert abs(val.imag) < 1e-15


def test_wave_product_frequencies():
    w = abs2_wave(np.array([1.0 + 0j]), np.array([1.0 + 0j]), degree=0)
    prod = wave_product([w, w], degree=0)
    assert sorted(prod) == [-2, -1, 0, 1, 2]
