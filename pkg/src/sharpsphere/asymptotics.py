"""Large-r tails of radial integrals of products of Bessel-type functions.

For r >= R each factor is written through the large-argument expansion

    J_mu(r) = sqrt(2/(pi r)) Re[Z_mu(1/r) exp(i chi_mu)],
    chi_mu  = r - mu pi/2 - pi/4,

so a product of squared moduli becomes a finite sum of terms
poly(1/r) * r^{-s} * exp(2 i m r).  Each term is integrated on [R, inf)
in closed form (m = 0) or by its integration-by-parts series (m != 0).

Polynomials in x = 1/r are stored as complex arrays whose last axis is
the power of x; leading axes are carried along (e.g. one per u node).
"""
from __future__ import annotations

import math

import numpy as np

DEGREE = 60


def hankel_poly(mu: float, degree: int = DEGREE) -> np.ndarray:
    """Coefficients of Z_mu(x) = sum_n i^n a_n(mu) x^n."""
    four_mu2 = 4.0 * mu * mu
    out = np.zeros(degree + 1, dtype=complex)
    a = 1.0
    for n in range(degree + 1):
        out[n] = (1j) ** n * a
        a *= (four_mu2 - (2 * n + 1) ** 2) / ((n + 1) * 8.0)
        if a == 0.0:
            break
    return out


def poly_mul(p: np.ndarray, q: np.ndarray, degree: int = DEGREE) -> np.ndarray:
    shape = np.broadcast_shapes(p.shape[:-1], q.shape[:-1])
    out = np.zeros(shape + (degree + 1,), dtype=complex)
    for i in range(min(p.shape[-1], degree + 1)):
        pi = p[..., i : i + 1]
        if not np.any(pi):
            continue
        top = min(q.shape[-1], degree + 1 - i)
        out[..., i : i + top] += pi * q[..., :top]
    return out


def abs2_wave(a: np.ndarray, b: np.ndarray, degree: int = DEGREE) -> dict[int, np.ndarray]:
    """|(A e^{i chi} + B e^{-i chi}) / 2|^2 as {m: poly} with phases e^{2 i m chi}."""
    ac, bc = np.conj(a), np.conj(b)
    return {
        0: 0.25 * (poly_mul(a, ac, degree) + poly_mul(b, bc, degree)),
        1: 0.25 * poly_mul(a, bc, degree),
        -1: 0.25 * poly_mul(b, ac, degree),
    }


def wave_product(waves: list[dict[int, np.ndarray]], degree: int = DEGREE) -> dict[int, np.ndarray]:
    out = waves[0]
    for w in waves[1:]:
        nxt: dict[int, np.ndarray] = {}
        for m1, p1 in out.items():
            for m2, p2 in w.items():
                term = poly_mul(p1, p2, degree)
                m = m1 + m2
                nxt[m] = nxt[m] + term if m in nxt else term
        out = nxt
    return out


def power_exp_tail(s: float, omega: float, big_r: float, tol: float = 1e-18) -> tuple[complex, float]:
    """int_R^inf r^{-s} exp(i omega r) dr and an error estimate."""
    if omega == 0.0:
        if s <= 1.0:
            raise ValueError(f"non-oscillatory tail r^-{s} is not integrable")
        return big_r ** (1.0 - s) / (s - 1.0), 0.0
    iw = 1j * omega
    term = -(big_r ** (-s)) / iw
    total = term
    last = abs(term)
    for j in range(1, 200):
        term = term * (s + j - 1) / (big_r * iw)
        mag = abs(term)
        if mag > last:
            break
        total += term
        last = mag
        if mag < tol * abs(total):
            break
    return np.exp(iw * big_r) * total, last


def integrate_tail(
    wave: dict[int, np.ndarray], s0: float, big_r: float, phase0: float
) -> tuple[np.ndarray, np.ndarray]:
    """sum_m int_R^inf poly_m(1/r) r^{-s0} exp(2 i m (r - phase0)) dr.

    Returns the (complex) value per leading index and an error bound.
    """
    value = None
    err = None
    for m, poly in wave.items():
        omega = 2.0 * m
        rot = np.exp(-1j * omega * phase0)
        for n in range(poly.shape[-1]):
            c = poly[..., n]
            if not np.any(c):
                continue
            t, e = power_exp_tail(s0 + n, omega, big_r)
            contrib = c * (t * rot)
            value = contrib if value is None else value + contrib
            bound = np.abs(c) * e
            err = bound if err is None else err + bound
        # truncation of the x-series: bound by the last kept coefficient
        last = np.abs(poly[..., -1]) * big_r ** (1.0 - s0 - poly.shape[-1]) / max(s0 + poly.shape[-1] - 1.0, 1.0)
        err = last if err is None else err + last
    return value, err


def tail_radius(mu_max: float, floor: float = 40.0) -> float:
    """Radius beyond which the degree-60 expansion of every order <= mu_max
    is accurate: its terms behave like (mu^2 / 2R)^m / m!, so mu^2 / 8R <= 1/2
    keeps the truncation far below double precision."""
    return max(floor, 0.125 * mu_max * mu_max, 2.0 * mu_max)


def phase_offset(v: float) -> float:
    return 0.5 * math.pi * v + 0.25 * math.pi
