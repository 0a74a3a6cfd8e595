"""Radial measures: sigma-hat, convolution powers of surface measure,
L^{2k} norms of sigma-hat and sharp extension constants C(d, 2k, q)."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import asymptotics as asy
from .orthopoly import gauss_jacobi
from .specialfn import bessel_j, gamma_fn, sphere_area

__all__ = [
    "INF",
    "QInf",
    "parse_q",
    "RadialProfile",
    "SharpConstant",
    "sigma_hat",
    "conv2",
    "conv_profile",
    "sigma_hat_norm",
    "sigma_hat_norm_detail",
    "radial_power_integral",
    "range_clause",
    "sharp_constant",
    "sharp_constant_d4_closed",
]


class QInf(enum.Enum):
    INF = "inf"

    def __str__(self) -> str:
        return "inf"


INF = QInf.INF


def parse_q(q):
    """Accept a positive number, ``INF``, ``float('inf')`` or the string "inf"."""
    if q is INF or (isinstance(q, str) and q.strip().lower() in ("inf", "infinity")):
        return INF
    qf = float(q)
    if math.isinf(qf) and qf > 0:
        return INF
    if not qf > 0:
        raise ValueError(f"q must be positive or inf, got {q!r}")
    return qf


def inv_q(q) -> float:
    q = parse_q(q)
    return 0.0 if q is INF else 1.0 / q


# ---------------------------------------------------------------- pointwise


def sigma_hat(d: int, r):
    """Fourier transform of surface measure on S^{d-1} at radius r."""
    v = (d - 2) / 2
    arr = np.asarray(r, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)
    zero = flat == 0
    out[zero] = sphere_area(d - 1)
    rp = flat[~zero]
    if rp.size:
        out[~zero] = (2 * math.pi) ** (d / 2) * rp ** (-v) * bessel_j(v, rp)
    out = out.reshape(arr.shape)
    return float(out) if arr.ndim == 0 else out


def conv2(d: int, r):
    """Density of sigma * sigma: 2^{3-d} omega_{d-2} r^{-1} (4 - r^2)_+^{(d-3)/2}."""
    arr = np.asarray(r, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    out = np.zeros_like(flat)
    c = 2.0 ** (3 - d) * sphere_area(d - 2)
    inside = (flat > 0) & (flat < 2)
    rr = flat[inside]
    out[inside] = c / rr * (4 - rr * rr) ** ((d - 3) / 2)
    out[flat == 0] = math.inf
    if d == 2:
        out[flat == 2] = math.inf
    elif d == 3:
        out[flat == 2] = c / 2
    out = out.reshape(arr.shape)
    return float(out) if arr.ndim == 0 else out


# ---------------------------------------------------------------- profiles


def _unit_map(x):
    """Position in [0, 1] -> angle in [0, pi] (cosine clustering at both ends)."""
    return np.arccos(np.clip(1.0 - 2.0 * x, -1.0, 1.0))


@dataclass(frozen=True)
class RadialProfile:
    """Radial density of sigma^{(fold)} on S^{dim-1}.

    ``radii`` holds Chebyshev-Lobatto points on each unit interval [m, m+1],
    so the grid clusters at every integer radius (where the density loses
    smoothness).  Between nodes the density is interpolated by a monotone
    cubic in the angle variable of that interval.  For ``fold == 2`` the
    closed form is evaluated directly.
    """

    dim: int
    fold: int
    radii: np.ndarray
    values: np.ndarray
    per_interval: int
    _interp: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.fold > 2 and not self._interp:
            n = self.per_interval
            theta = np.linspace(0.0, math.pi, n + 1)
            parts = tuple(
                PchipInterpolator(theta, self.values[m * n : (m + 1) * n + 1]) for m in range(self.fold)
            )
            object.__setattr__(self, "_interp", parts)
        self.radii.setflags(write=False)
        self.values.setflags(write=False)

    def __call__(self, r):
        arr = np.asarray(r, dtype=float)
        flat = np.atleast_1d(arr).ravel()
        if self.fold == 2:
            out = np.atleast_1d(conv2(self.dim, flat)).astype(float)
        else:
            out = np.zeros_like(flat)
            inside = (flat >= 0) & (flat <= self.fold)
            x = flat[inside]
            m = np.minimum(np.floor(x), self.fold - 1).astype(int)
            vals = np.empty_like(x)
            for j in np.unique(m):
                sel = m == j
                vals[sel] = self._interp[j](_unit_map(x[sel] - j))
            out[inside] = np.maximum(vals, 0.0)
        out = out.reshape(arr.shape)
        return float(out) if arr.ndim == 0 else out

    def total_mass(self, nodes: int = 64) -> float:
        """omega_{d-1} int_0^fold density(r) r^{d-1} dr."""
        rule = gauss_jacobi(nodes, 0.0, 0.0)
        phi = 0.5 * math.pi * (rule.nodes + 1.0)
        s = 0.5 * (1.0 - np.cos(phi))
        jac = 0.25 * math.pi * np.sin(phi)
        total = 0.0
        for m in range(self.fold):
            r = m + s
            total += float(np.dot(rule.weights * jac, self(r) * r ** (self.dim - 1)))
        return sphere_area(self.dim - 1) * total

    def to_rows(self):
        return list(zip(self.radii.tolist(), self.values.tolist()))


_PANEL_NODES = 40


def _lobatto_radii(fold: int, per: int) -> np.ndarray:
    theta = np.linspace(0.0, math.pi, per + 1)
    local = 0.5 * (1.0 - np.cos(theta))
    local[0], local[-1] = 0.0, 1.0
    pieces = [m + local[:-1] for m in range(fold)]
    return np.concatenate(pieces + [np.array([float(fold)])])


def _convolve_once(d: int, s_density, top: int, radii: np.ndarray) -> np.ndarray:
    """density_next(r) for each r, from s*density on [0, top].

    density_next(r) = (omega_{d-2} / r) int s P(s) W(r, s) ds over
    |r-1| <= s <= min(r+1, top), with
    W = [(s^2-(r-1)^2)((r+1)^2-s^2)]^{(d-3)/2} (2r)^{-(d-3)}.
    Each integer-split panel uses s = a + (b-a)(1-cos phi)/2.
    """
    rule = gauss_jacobi(_PANEL_NODES, 0.0, 0.0)
    phi = 0.5 * math.pi * (rule.nodes + 1.0)
    c = 0.5 * (1.0 - np.cos(phi))
    dc = 0.25 * math.pi * np.sin(phi) * rule.weights
    om = sphere_area(d - 2)
    out = np.zeros_like(radii)
    pa, pb, pr, owner = [], [], [], []
    for i, r in enumerate(radii):
        if r == 0.0:
            continue
        lo, hi = abs(r - 1.0), min(r + 1.0, float(top))
        if hi <= lo:
            continue
        cuts = [lo] + [float(m) for m in range(int(math.floor(lo)) + 1, int(math.ceil(hi)))] + [hi]
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b > a:
                pa.append(a)
                pb.append(b)
                pr.append(r)
                owner.append(i)
    if pa:
        a = np.array(pa)[:, None]
        b = np.array(pb)[:, None]
        r = np.array(pr)[:, None]
        s = a + (b - a) * c[None, :]
        w = (b - a) * dc[None, :]
        if d == 3:
            weight = np.ones_like(s)
        else:
            prod = (s * s - (r - 1.0) ** 2) * ((r + 1.0) ** 2 - s * s)
            weight = np.maximum(prod, 0.0) ** ((d - 3) / 2) / (2.0 * r) ** (d - 3)
        vals = np.sum(w * s_density(s) * weight, axis=1) * om / r[:, 0]
        np.add.at(out, np.array(owner), vals)
    zero = radii == 0.0
    if zero.any():
        out[zero] = sphere_area(d - 1) * float(s_density(np.array([1.0]))[0])
    return out


def conv_profile(d: int, fold: int, grid_size: int = 2048) -> RadialProfile:
    """Density of the fold-times convolution of surface measure on S^{d-1}."""
    if d < 3:
        raise ValueError("convolution profiles need d >= 3 (d=2 is unsupported beyond sigma*sigma)")
    if fold < 2:
        raise ValueError("fold must be >= 2")
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    cache = {}

    def build(k: int) -> RadialProfile:
        per = max(16, (grid_size - 1) // k)
        radii = _lobatto_radii(k, per)
        if k == 2:
            return RadialProfile(d, 2, radii, np.atleast_1d(conv2(d, radii)).astype(float), per)
        prev = cache[k - 1]
        if k - 1 == 2:
            c = 2.0 ** (3 - d) * sphere_area(d - 2)

            def s_density(s):
                # s * conv2(s), finite at s = 0
                return c * np.maximum(4 - s * s, 0.0) ** ((d - 3) / 2) * (s < 2)

        else:

            def s_density(s):
                return s * prev(s)

        vals = _convolve_once(d, s_density, k - 1, radii)
        return RadialProfile(d, k, radii, np.maximum(vals, 0.0), per)

    for k in range(2, fold + 1):
        cache[k] = build(k)
    return cache[fold]


# ---------------------------------------------------------------- norms


def _panel_rule(nodes: int):
    rule = gauss_jacobi(nodes, 0.0, 0.0)
    return 0.5 * (rule.nodes + 1.0), 0.5 * rule.weights


def radial_power_integral(d: int, k: int, nodes: int = 24, radius: float | None = None) -> tuple[float, float]:
    """int_0^inf sigma_hat(r)^{2k} r^{d-1} dr with an error estimate.

    Gauss-Legendre on unit panels up to R, expansion tail beyond R.
    """
    v = (d - 2) / 2
    s0 = k * (2 * v + 1) - (d - 1)
    if s0 <= 1.0:
        raise ValueError(f"sigma-hat is not in L^{2 * k}(R^{d}): the radial integral diverges")
    big_r = radius if radius is not None else asy.tail_radius(v)
    n_panels = int(math.ceil(big_r))
    big_r = float(n_panels)
    starts = np.arange(n_panels, dtype=float)

    def main(n):
        x, w = _panel_rule(n)
        r = (starts[:, None] + x[None, :]).ravel()
        ww = np.tile(w, n_panels)
        return float(np.dot(ww, sigma_hat(d, r) ** (2 * k) * r ** (d - 1)))

    m1 = main(nodes)
    m2 = main(nodes - 8)
    z = asy.hankel_poly(v)
    wave = asy.wave_product([asy.abs2_wave(z, np.conj(z))] * k)
    amp = ((2 * math.pi) ** (d / 2) * math.sqrt(2 / math.pi)) ** (2 * k)
    tail, terr = asy.integrate_tail(wave, s0, big_r, asy.phase_offset(v))
    total = m1 + amp * float(np.real(tail))
    return total, abs(m1 - m2) + amp * float(terr) + 1e-16 * abs(total)


def sigma_hat_norm_detail(d: int, k: int, radius: float | None = None) -> tuple[float, float]:
    """(norm, relative error estimate) of sigma-hat in L^{2k}(R^d)."""
    if d < 2 or k < 1:
        raise ValueError("need d >= 2 and k >= 1")
    if (d, k) == (2, 2):
        raise ValueError("sigma-hat is not in L^4(R^2): the integral diverges logarithmically")
    if radius is not None and radius < asy.tail_radius((d - 2) / 2):
        raise ValueError("radius is too small for the tail expansion")
    integral, err = radial_power_integral(d, k, radius=radius)
    power = sphere_area(d - 1) * integral
    return power ** (1.0 / (2 * k)), err / integral / (2 * k)


def sigma_hat_norm(d: int, k: int) -> float:
    """||sigma_hat||_{L^{2k}(R^d)}."""
    return sigma_hat_norm_detail(d, k)[0]


# ---------------------------------------------------------------- constants


@dataclass(frozen=True)
class SharpConstant:
    d: int
    k: int
    q: object
    value: float
    method: str


def range_clause(d: int, k: int, q) -> str:
    """Which range clause (a, b or c) covers (d, 2k, q); ValueError if none."""
    q = parse_q(q)
    qv = math.inf if q is INF else q
    if k == 2:
        if 3 <= d <= 7:
            if qv >= 2:
                return "a"
            raise ValueError(f"clause (a) (k=2, 3<=d<=7) requires q >= 2, got q={q}")
        if d >= 8:
            if qv >= 4:
                return "b"
            raise ValueError(f"clause (b) (k=2, d>=8) requires q >= 4, got q={q}")
        raise ValueError(f"k=2 is covered only for d >= 3 (clauses (a), (b)); got d={d}")
    if k >= 3:
        if d < 2:
            raise ValueError(f"clause (c) (k>=3) requires d >= 2, got d={d}")
        if qv >= 2 * k:
            return "c"
        raise ValueError(f"clause (c) (k>=3) requires q >= 2k = {2 * k}, got q={q}")
    raise ValueError(f"the exponent p = 2k must have k >= 2, got k={k}")


METHODS = ("plancherel-bessel", "closed-form-d4", "convolution")


def sharp_constant(d: int, k: int, q, method: str = "plancherel-bessel", grid_size: int = 2048) -> SharpConstant:
    """C(d, 2k, q) = omega_{d-1}^{-1/q} ||sigma_hat||_{2k}."""
    q = parse_q(q)
    range_clause(d, k, q)
    if method == "plancherel-bessel":
        value = sphere_area(d - 1) ** (-inv_q(q)) * sigma_hat_norm(d, k)
    elif method == "closed-form-d4":
        if k != 2:
            raise ValueError("the closed form applies to k=2 only")
        value = sharp_constant_d4_closed(d, q)
    elif method == "convolution":
        if d < 3:
            raise ValueError("the convolution route needs d >= 3")
        at0 = conv_profile(d, 2 * k, grid_size)(0.0)
        norm = ((2 * math.pi) ** d * at0) ** (1.0 / (2 * k))
        value = sphere_area(d - 1) ** (-inv_q(q)) * norm
    else:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    return SharpConstant(d, k, q, value, method)


def sharp_constant_d4_closed(d: int, q) -> float:
    """Closed form of C(d, 4, q) through Gamma functions."""
    if d < 3:
        raise ValueError("closed form needs d >= 3")
    iq = inv_q(q)
    bracket = gamma_fn(d - 2) * gamma_fn((d - 2) / 2) / gamma_fn(3 * (d - 2) / 2)
    return (
        sphere_area(d - 1) ** (0.25 - iq)
        * sphere_area(d - 2) ** 0.5
        * (2 * math.pi) ** (d / 4)
        * 2.0 ** ((d - 3) / 4)
        * bracket**0.25
    )
