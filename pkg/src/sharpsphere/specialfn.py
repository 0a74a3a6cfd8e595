"""Scalar special functions: Gamma, Beta, sphere areas, Bessel J and
harmonic-space dimensions.

Integer and half-integer Gamma arguments go through an exact rational
path so that sphere areas and Beta brackets are bit-stable.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "gamma_fn",
    "gamma_exact",
    "sphere_area",
    "sphere_area_exact",
    "beta_fn",
    "bessel_j",
    "bessel_j_orders",
    "harmonic_dim",
    "SERIES_CROSSOVER",
]

SERIES_CROSSOVER = 12.0
_SQRT_PI = math.sqrt(math.pi)


def _twice(x) -> int | None:
    """Return 2x when x is a positive integer or half-integer, else None."""
    if isinstance(x, Rational):
        t = 2 * Fraction(x)
        return int(t) if t.denominator == 1 else None
    xf = float(x)
    t = 2.0 * xf
    if math.isfinite(t) and t == math.floor(t) and abs(t) < 2**52:
        return int(t)
    return None


def gamma_exact(x) -> tuple[Fraction, int]:
    """Gamma at a positive integer or half-integer as ``(q, h)``.

    The value is ``q * sqrt(pi)**h`` with ``h`` in {0, 1}.
    """
    tw = _twice(x)
    if tw is None or tw <= 0:
        raise ValueError(f"gamma_exact needs a positive (half-)integer, got {x!r}")
    if tw % 2 == 0:
        return Fraction(math.factorial(tw // 2 - 1)), 0
    n = (tw - 1) // 2  # x = n + 1/2
    return Fraction(math.factorial(2 * n), 4**n * math.factorial(n)), 1


def gamma_fn(x) -> float:
    """Gamma function for positive real ``x``.

    (Half-)integers use :func:`gamma_exact`; everything else falls back
    to :func:`math.gamma`.
    """
    if float(x) <= 0.0 or math.isnan(float(x)):
        raise ValueError(f"gamma_fn domain is x > 0, got {x!r}")
    tw = _twice(x)
    if tw is not None and tw < 343:
        q, h = gamma_exact(x)
        return float(q) * (_SQRT_PI if h else 1.0)
    return math.gamma(float(x))


def sphere_area_exact(n: int) -> tuple[Fraction, int]:
    """Surface measure of S^n as ``(q, m)`` meaning ``q * pi**m``."""
    if n < 0:
        raise ValueError(f"sphere dimension must be >= 0, got {n}")
    if n % 2 == 1:
        big_n = (n + 1) // 2
        return Fraction(2, math.factorial(big_n - 1)), big_n
    big_n = n // 2
    return Fraction(2 * 4**big_n * math.factorial(big_n), math.factorial(2 * big_n)), big_n


def sphere_area(n: int) -> float:
    """omega_n = 2 pi^{(n+1)/2} / Gamma((n+1)/2), the area of S^n in R^{n+1}."""
    q, m = sphere_area_exact(n)
    return float(q) * math.pi**m


def beta_fn(w, z) -> float:
    """Beta(w, z) = Gamma(w) Gamma(z) / Gamma(w + z) for w, z > 0."""
    if float(w) <= 0 or float(z) <= 0:
        raise ValueError(f"beta_fn needs positive arguments, got ({w!r}, {z!r})")
    tw, tz = _twice(w), _twice(z)
    if tw is not None and tz is not None and tw + tz < 343:
        qw, hw = gamma_exact(Fraction(tw, 2))
        qz, hz = gamma_exact(Fraction(tz, 2))
        qs, hs = gamma_exact(Fraction(tw + tz, 2))
        h = hw + hz - hs  # in {-1, 0, 1, 2}
        return float(qw * qz / qs) * math.pi ** (h / 2)
    return math.exp(math.lgamma(float(w)) + math.lgamma(float(z)) - math.lgamma(float(w) + float(z)))


# ---------------------------------------------------------------- Bessel J


def _series(v: float, x: np.ndarray) -> np.ndarray:
    """Power series sum_n (-1)^n (x/2)^{2n+v} / (n! Gamma(v+n+1))."""
    out = np.zeros_like(x)
    pos = x > 0
    xp = x[pos]
    term = np.exp(v * np.log(xp / 2.0) - math.lgamma(v + 1.0))
    q = -(xp / 2.0) ** 2
    s = term.copy()
    for n in range(400):
        term = term * q / ((n + 1) * (n + 1 + v))
        s += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(s)) and n > 2:
            break
    out[pos] = s
    if v == 0:
        out[~pos] = 1.0
    return out


def _hankel_terms(v: float, nterms: int) -> list[float]:
    mu = 4.0 * v * v
    a = [1.0]
    for n in range(1, nterms):
        a.append(a[-1] * (mu - (2 * n - 1) ** 2) / (n * 8.0))
    return a


def _hankel(v: float, x: np.ndarray) -> np.ndarray:
    """Large-argument expansion, truncated at its smallest term."""
    a = _hankel_terms(v, 80)
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    prev = np.full_like(x, np.inf)
    live = np.ones(x.shape, dtype=bool)
    xinv = 1.0 / x
    xpow = np.ones_like(x)
    for n, an in enumerate(a):
        t = an * xpow
        mag = np.abs(t)
        if an == 0.0:
            break  # half-integer order: expansion terminates
        live &= ~((mag > prev) & (n > v))
        sign = 1.0 if n % 4 in (0, 1) else -1.0
        if n % 2 == 0:
            p += np.where(live, sign * t, 0.0)
        else:
            q += np.where(live, sign * t, 0.0)
        prev = np.where(live, mag, prev)
        if not live.any():
            break
        xpow = xpow * xinv
    chi = x - (0.5 * v + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def _direct_small_order(v: float, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    small = x <= max(SERIES_CROSSOVER, 2.0 * v)
    out[small] = _series(v, x[small])
    out[~small] = _hankel(v, x[~small])
    return out


def _miller(v0: float, nmax: int, x: np.ndarray) -> np.ndarray:
    """J_{v0+j}(x), j = 0..nmax (nmax >= 1), by backward recurrence
    normalised against the two lowest orders.
    """
    xmax = float(np.max(x))
    start = int(math.ceil(max(xmax, nmax + v0))) + 30 + int(math.ceil(6.0 * xmax ** (1.0 / 3.0)))
    top = start - 1
    table = np.empty((nmax + 1, x.size))
    f_next = np.zeros_like(x)
    f_cur = np.full_like(x, 1e-280)
    for j in range(top, -1, -1):
        if j <= nmax:
            table[j] = f_cur
        if j == 0:
            break
        order = v0 + j
        f_prev = (2.0 * order / x) * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        big = np.abs(f_cur) > 1e250
        if big.any():
            scale = np.where(big, 1e-250, 1.0)
            f_cur = f_cur * scale
            f_next = f_next * scale
            table *= scale
    # table rows above the current j were filled before later rescalings;
    # rescaling multiplies the whole table so ratios stay consistent.
    j0 = _direct_small_order(v0, x)
    j1 = _direct_small_order(v0 + 1.0, x)
    use0 = np.abs(j0) >= np.abs(j1)
    norm = np.where(use0, j0 / table[0], j1 / np.where(use0, 1.0, table[1]))
    return table * norm


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def bessel_j(v, x):
    """Bessel function of the first kind J_v(x) for v > -1 and x >= 0.

    Series below ``max(12, 2|v|)``, large-argument expansion above, and
    Miller backward recurrence for high orders when 12 < x < 2v (where
    neither expansion is accurate in double precision).
    """
    v = float(v)
    if v <= -1.0:
        raise ValueError(f"order must satisfy v > -1, got {v}")
    arr, scalar = _as_array(x)
    if np.any(arr < 0):
        raise ValueError("bessel_j is defined here for x >= 0 only")
    flat = arr.ravel()
    out = np.empty_like(flat)
    series_mask = (flat <= SERIES_CROSSOVER) | (flat <= 0.5 * v)
    hankel_mask = flat >= max(SERIES_CROSSOVER, 2.0 * v)
    band = ~series_mask & ~hankel_mask
    out[series_mask] = _series(v, flat[series_mask])
    out[hankel_mask] = _hankel(v, flat[hankel_mask])
    if band.any():
        v0 = v - math.floor(v)
        nmax = int(math.floor(v))
        out[band] = _miller(v0, max(nmax, 1), flat[band])[nmax]
    out = out.reshape(arr.shape)
    return float(out) if scalar else out


def bessel_j_orders(v0: float, nmax: int, x) -> np.ndarray:
    """Table ``T[j, i] = J_{v0 + j}(x_i)`` for ``j = 0..nmax``.

    Vectorised companion to :func:`bessel_j` for spectral sums.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    table = np.empty((nmax + 1, arr.size))
    small = arr <= SERIES_CROSSOVER
    for j in range(nmax + 1):
        table[j, small] = _series(v0 + j, arr[small])
    if (~small).any():
        table[:, ~small] = _miller(v0, max(nmax, 1), arr[~small])[: nmax + 1]
    return table


def harmonic_dim(d: int, k: int) -> int:
    """Dimension of the degree-k spherical harmonics on S^{d-1}."""

    def comb(n, r):
        return math.comb(n, r) if n >= r >= 0 else 0

    return comb(d + k - 1, d - 1) - comb(d + k - 3, d - 1)
