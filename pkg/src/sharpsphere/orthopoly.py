"""Gegenbauer/Legendre evaluation and Gauss-Jacobi quadrature."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "JacobiRule",
    "gegenbauer_eval",
    "gegenbauer_table",
    "gegenbauer_exact",
    "gegenbauer_one",
    "zonal_table",
    "legendre_derivative_endpoint",
    "gauss_jacobi",
]


def gegenbauer_eval(alpha, k: int, t):
    """C^alpha_k(t) by forward three-term recurrence (scalar or array t)."""
    a = float(alpha)
    arr = np.asarray(t, dtype=float)
    prev = np.zeros_like(arr)
    cur = np.ones_like(arr)
    for n in range(k):
        prev, cur = cur, ((2 * n + 2 * a) * arr * cur - (n + 2 * a - 1) * prev) / (n + 1)
    return float(cur) if arr.ndim == 0 else cur


def gegenbauer_table(alpha, kmax: int, t) -> np.ndarray:
    """Rows C^alpha_0..C^alpha_kmax evaluated at the points ``t``."""
    a = float(alpha)
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((kmax + 1, arr.size))
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2 * a * arr
    for n in range(1, kmax):
        out[n + 1] = ((2 * n + 2 * a) * arr * out[n] - (n + 2 * a - 1) * out[n - 1]) / (n + 1)
    return out


def gegenbauer_exact(alpha, k: int, t) -> Fraction:
    """Exact C^alpha_k(t) for rational alpha and t."""
    a, x = Fraction(alpha), Fraction(t)
    prev, cur = Fraction(0), Fraction(1)
    for n in range(k):
        prev, cur = cur, ((2 * n + 2 * a) * x * cur - (n + 2 * a - 1) * prev) / (n + 1)
    return cur


def gegenbauer_one(alpha, k: int) -> Fraction:
    """C^alpha_k(1) = binom(k + 2 alpha - 1, k), exactly."""
    two_a = Fraction(alpha) * 2
    val = Fraction(1)
    for j in range(k):
        val = val * (two_a + j) / (j + 1)
    return val


def zonal_table(alpha, kmax: int, t) -> np.ndarray:
    """Normalised zonal harmonics C^alpha_n(t) / C^alpha_n(1), n = 0..kmax."""
    tab = gegenbauer_table(alpha, kmax, t)
    ones = np.array([float(gegenbauer_one(Fraction(alpha).limit_denominator(10**6), n)) for n in range(kmax + 1)])
    return tab / ones[:, None]


def legendre_derivative_endpoint(k: int) -> int:
    """P_k'(-1) = (-1)^{k+1} binom(k+1, 2)."""
    return (-1) ** (k + 1) * math.comb(k + 1, 2)


@dataclass(frozen=True)
class JacobiRule:
    """Gauss rule for the weight (1 - t)^a (1 + t)^b on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    a: float
    b: float

    def integrate(self, values) -> float | complex:
        return np.dot(self.weights, values)


def _jacobi_value(n: int, a: float, b: float, x: np.ndarray) -> np.ndarray:
    """P_n^{(a,b)}(x) by the standard three-term recurrence."""
    p0 = np.ones_like(x)
    if n == 0:
        return p0
    p1 = 0.5 * (a - b + (a + b + 2) * x)
    for j in range(2, n + 1):
        c = 2 * j + a + b
        a1 = 2 * j * (j + a + b) * (c - 2)
        a2 = (c - 1) * (a * a - b * b)
        a3 = (c - 2) * (c - 1) * c
        a4 = 2 * (j + a - 1) * (j + b - 1) * c
        p0, p1 = p1, ((a2 + a3 * x) * p1 - a4 * p0) / a1
    return p1


def _jacobi_with_derivative(n: int, a: float, b: float, x: np.ndarray):
    p = _jacobi_value(n, a, b, x)
    dp = 0.5 * (n + a + b + 1) * _jacobi_value(n - 1, a + 1, b + 1, x)
    return p, dp


class QuadratureError(RuntimeError):
    pass


@lru_cache(maxsize=256)
def _gauss_jacobi_cached(n: int, a: float, b: float) -> JacobiRule:
    k = np.arange(1, n + 1)
    # Chebyshev-type starting angles shifted for the Jacobi exponents
    theta = (k + 0.5 * a - 0.25) * np.pi / (n + 0.5 * (a + b + 1))
    x = np.sort(np.cos(theta))
    if n == 1:
        x = np.array([(b - a) / (a + b + 2)])
    step = np.inf
    for it in range(200):
        p, dp = _jacobi_with_derivative(n, a, b, x)
        ratio = p / dp
        if n > 1:
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, np.inf)
            deflate = np.sum(1.0 / diff, axis=1)
            dx = ratio / (1.0 - ratio * deflate)
        else:
            dx = ratio
        new = x - dx
        # keep iterates inside the interval; halve steps that escape
        bad = np.abs(new) >= 1
        while bad.any():
            dx = np.where(bad, 0.5 * dx, dx)
            new = x - dx
            bad = np.abs(new) >= 1
        x = new
        step = float(np.max(np.abs(dx)))
        if step < 1e-15:
            break
    else:
        raise QuadratureError(f"Gauss-Jacobi nodes did not converge (n={n}, a={a}, b={b}, last step {step:.3e})")
    x = np.sort(x)
    p, dp = _jacobi_with_derivative(n, a, b, x)
    x = x - p / dp
    _, dp = _jacobi_with_derivative(n, a, b, x)
    if np.any(np.abs(x) >= 1) or np.any(np.diff(x) <= 0):
        raise QuadratureError(f"Gauss-Jacobi produced invalid nodes (n={n}, a={a}, b={b})")
    logc = (
        (a + b + 1) * math.log(2)
        + math.lgamma(n + a + 1)
        + math.lgamma(n + b + 1)
        - math.lgamma(n + a + b + 1)
        - math.lgamma(n + 1)
    )
    w = math.exp(logc) / ((1 - x) * (1 + x) * dp * dp)
    x.setflags(write=False)
    w.setflags(write=False)
    return JacobiRule(x, w, a, b)


def gauss_jacobi(n: int, a: float, b: float) -> JacobiRule:
    """n-point Gauss-Jacobi rule, exact for degree <= 2n - 1.

    Nodes come from simultaneous Newton iteration with deflation against
    the other nodes (Aberth-Ehrlich), started at Chebyshev points.
    """
    if n < 1:
        raise ValueError("need at least one node")
    if a <= -1 or b <= -1:
        raise ValueError("Jacobi exponents must exceed -1")
    return _gauss_jacobi_cached(int(n), float(a), float(b))
