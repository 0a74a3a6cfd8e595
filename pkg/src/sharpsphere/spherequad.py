"""Integration on S^{d-1}: sampling, zonal reduction, the extension
transform of zonal densities and the quadruple sampler."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from numpy.polynomial import legendre

from . import asymptotics as asy
from .orthopoly import gauss_jacobi, gegenbauer_one, gegenbauer_table, zonal_table
from .specialfn import bessel_j_orders, sphere_area

__all__ = [
    "TrialFunction",
    "QuadrupleBatch",
    "make_rng_streams",
    "sample_sphere",
    "zonal_integral",
    "extension_transform",
    "extension_norm",
    "extension_norm_detail",
    "product_integral",
    "quadruple_sampler",
    "random_trial",
]


# ---------------------------------------------------------------- randomness


def make_rng_streams(seed: int, workers: int) -> list[np.random.Generator]:
    """One independent PCG64 stream per worker, derived from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(workers)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def _split(n: int, workers: int) -> list[int]:
    return [n // workers + (1 if i < n % workers else 0) for i in range(workers)]


def run_partitioned(fn, n: int, seed: int, workers: int = 1) -> list:
    """Call ``fn(rng, count)`` on each worker's share, in worker order."""
    workers = max(1, int(workers))
    rngs = make_rng_streams(seed, workers)
    sizes = _split(n, workers)
    if workers == 1:
        return [fn(rngs[0], sizes[0])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, rngs, sizes))


def _unit_rows(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    g = rng.standard_normal((n, d))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0):  # measure zero, but keep it exact
        bad = norms == 0
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1)
    return g / norms[:, None]


def sample_sphere(d: int, n: int, seed: int, workers: int = 1) -> np.ndarray:
    """n uniform points on S^{d-1} (rows), normalised Gaussian vectors."""
    if d < 1:
        raise ValueError("d must be >= 1")
    parts = run_partitioned(lambda rng, m: _unit_rows(rng, m, d), n, seed, workers)
    return np.concatenate(parts, axis=0) if parts else np.empty((0, d))


# ---------------------------------------------------------------- zonal 1-D


def zonal_rule(d: int, nodes: int):
    """Gauss-Jacobi rule for omega_{d-2} (1 - u^2)^{(d-3)/2} du."""
    a = (d - 3) / 2
    rule = gauss_jacobi(nodes, a, a)
    return rule.nodes, sphere_area(d - 2) * rule.weights


def zonal_integral(d: int, g: Callable, nodes: int = 64):
    """int_{S^{d-1}} g(zeta . e) d sigma for a profile g on [-1, 1].

    Exact for polynomial g of degree <= 2 nodes - 1.  At d=2 the weight
    (1 - u^2)^{-1/2} is singular but still handled by Gauss-Jacobi.
    """
    if d < 2:
        raise ValueError("zonal_integral needs d >= 2")
    u, w = zonal_rule(d, nodes)
    return np.dot(w, g(u))


# ---------------------------------------------------------------- trial functions


def _alpha(d: int) -> Fraction:
    return Fraction(d - 2, 2)


@dataclass(frozen=True, eq=False)
class TrialFunction:
    """A zonal density f(zeta) = profile(zeta . e) on S^{d-1}.

    Kinds: ``constant``, ``plane_wave`` (e^{i xi . zeta}, axis along xi),
    ``exponential`` (e^{nu zeta . e} with complex nu),
    ``harmonic_perturbation`` (1 + eps Z_deg), ``tabulated`` (Legendre
    coefficients of the profile) and ``derived`` (built from another
    trial function, e.g. its antipodal symmetrisation).
    """

    kind: str
    params: tuple
    degree: int | None = None  # polynomial degree if known
    fn: Callable | None = field(default=None, repr=False)
    axis: tuple | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    # constructors
    @classmethod
    def constant(cls, c: complex = 1.0) -> "TrialFunction":
        return cls("constant", (complex(c),), degree=0)

    @classmethod
    def plane_wave(cls, xi, c: complex = 1.0) -> "TrialFunction":
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        rho = float(np.linalg.norm(xi))
        axis = tuple((xi / rho).tolist()) if rho > 0 else None
        return cls("plane_wave", (complex(c), rho), degree=0 if rho == 0 else None, axis=axis)

    @classmethod
    def exponential(cls, nu: complex, c: complex = 1.0) -> "TrialFunction":
        nu = complex(nu)
        return cls("exponential", (complex(c), nu), degree=0 if nu == 0 else None)

    @classmethod
    def harmonic_perturbation(cls, eps: float, degree: int) -> "TrialFunction":
        return cls("harmonic_perturbation", (float(eps), int(degree)), degree=int(degree))

    @classmethod
    def tabulated(cls, legendre_coeffs) -> "TrialFunction":
        coeffs = tuple(float(c) for c in legendre_coeffs)
        return cls("tabulated", coeffs, degree=len(coeffs) - 1)

    @classmethod
    def derived(cls, name: str, fn: Callable, degree: int | None = None, real_nonneg: bool = False) -> "TrialFunction":
        return cls("derived", (name, real_nonneg), degree=degree, fn=fn)

    # evaluation
    def profile(self, u, d: int):
        u = np.asarray(u, dtype=float)
        kind = self.kind
        if kind == "constant":
            c = self.params[0]
            return np.full(u.shape, c if c.imag else c.real)
        if kind == "plane_wave":
            c, rho = self.params
            return c * np.exp(1j * rho * u)
        if kind == "exponential":
            c, nu = self.params
            out = c * np.exp(nu * u)
            return out.real if (c * nu).imag == 0 and c.imag == 0 else out
        if kind == "harmonic_perturbation":
            eps, deg = self.params
            return 1.0 + eps * zonal_table(_alpha(d), deg, u.ravel())[deg].reshape(u.shape)
        if kind == "tabulated":
            return legendre.legval(u, self.params)
        return self.fn(u, d)

    def __call__(self, u, d: int):
        return self.profile(u, d)

    @property
    def is_real_nonneg(self) -> bool:
        if self.kind == "constant":
            c = self.params[0]
            return c.imag == 0 and c.real >= 0
        if self.kind == "exponential":
            c, nu = self.params
            return c.imag == 0 and c.real >= 0 and nu.imag == 0
        if self.kind == "plane_wave":
            c, rho = self.params
            return rho == 0 and c.imag == 0 and c.real >= 0
        if self.kind == "derived":
            return bool(self.params[1])
        return bool(np.min(self.profile(np.linspace(-1, 1, 2001), 3)) >= 0)

    # derived functions
    def star(self) -> "TrialFunction":
        """f_star(zeta) = f(-zeta)."""
        return TrialFunction.derived(
            "star", lambda u, d, f=self: f.profile(-np.asarray(u), d), self.degree, self.is_real_nonneg
        )

    def modulus(self) -> "TrialFunction":
        """|f|; keeps polynomial structure when f is already nonnegative."""
        if self.is_real_nonneg:
            return self
        if self.kind == "plane_wave":
            return TrialFunction.constant(abs(self.params[0]))
        return TrialFunction.derived("abs", lambda u, d, f=self: np.abs(f.profile(u, d)), None, True)

    def sharp(self) -> "TrialFunction":
        """Antipodal symmetrisation sqrt((f(u)^2 + f(-u)^2) / 2) of a real f."""

        def fn(u, d, f=self):
            u = np.asarray(u, dtype=float)
            a = np.real(f.profile(u, d))
            b = np.real(f.profile(-u, d))
            return np.sqrt(0.5 * (a * a + b * b))

        return TrialFunction.derived("sharp", fn, None, True)

    def scaled(self, s: complex) -> "TrialFunction":
        return TrialFunction.derived("scaled", lambda u, d, f=self: s * f.profile(u, d), self.degree, False)

    # spectral data
    def coefficients(self, d: int, tol: float = 1e-15, max_degree: int = 256) -> np.ndarray:
        """Coefficients c_n of f(u) = sum_n c_n C_n(u) / C_n(1) (alpha = (d-2)/2)."""
        key = ("coeffs", d)
        if key in self._cache:
            return self._cache[key]
        if self.degree is not None:
            out = _project(self, d, self.degree)
        else:
            # judge decay on the L^2 size |c_n| ||Z_n||, which has a flat noise floor
            n = 16
            while True:
                out = _project(self, d, n)
                size = np.abs(out) * np.sqrt([zonal_norm2(d, j) for j in range(n + 1)])
                if np.max(size[-4:]) <= tol * np.max(size) or n >= max_degree:
                    break
                n *= 2
            keep = np.nonzero(size > tol * np.max(size))[0]
            out = out[: keep[-1] + 1] if keep.size else out[:1]
        if np.all(np.imag(out) == 0):
            out = np.real(out)
        self._cache[key] = out
        return out

    def norm(self, d: int, q, nodes: int = 256) -> float:
        """||f||_{L^q(S^{d-1})}; q may be inf (or the INF sentinel)."""
        from .measures import INF, parse_q

        q = parse_q(q)
        if q is INF:
            return sup_abs(self, d)
        if self.degree is not None and q == 2:
            nodes = max(self.degree + 2, 8)
        u, w = zonal_rule(d, nodes)
        return float(np.dot(w, np.abs(self.profile(u, d)) ** q)) ** (1.0 / q)

    def mean(self, d: int, nodes: int = 256) -> complex:
        u, w = zonal_rule(d, nodes)
        return np.dot(w, self.profile(u, d)) / sphere_area(d - 1)


def sup_abs(f: TrialFunction, d: int) -> float:
    from scipy.optimize import minimize_scalar

    u = np.linspace(-1.0, 1.0, 4001)
    vals = np.abs(f.profile(u, d))
    i = int(np.argmax(vals))
    lo, hi = u[max(i - 1, 0)], u[min(i + 1, u.size - 1)]
    if hi > lo:
        res = minimize_scalar(lambda x: -abs(f.profile(np.array([x]), d)[0]), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        return float(max(vals[i], -res.fun))
    return float(vals[i])


def _project(f: TrialFunction, d: int, nmax: int) -> np.ndarray:
    alpha = _alpha(d)
    nodes = nmax + 24
    u, w = zonal_rule(d, nodes)
    z = zonal_table(alpha, nmax, u)
    vals = f.profile(u, d)
    num = z @ (w * vals)
    den = (z * z) @ w
    return num / den


def zonal_norm2(d: int, n: int) -> float:
    """||C_n(. e) / C_n(1)||^2_{L^2(S^{d-1})} = omega_{d-1} / dim H_n."""
    from .specialfn import harmonic_dim

    return sphere_area(d - 1) / harmonic_dim(d, n)


def random_trial(rng: np.random.Generator, n_coeffs: int = 6) -> TrialFunction:
    """Positive zonal profile from smoothed uniform Legendre coefficients."""
    a = rng.uniform(-1.0, 1.0, n_coeffs) / (1.0 + np.arange(n_coeffs))
    grid = np.linspace(-1.0, 1.0, 2001)
    shift = float(np.max(np.abs(legendre.legval(grid, a)))) + 0.1
    a[0] += shift
    return TrialFunction.tabulated(a)


# ---------------------------------------------------------------- transforms


def _transform_matrix(coeffs: np.ndarray, d: int, r: np.ndarray, u: np.ndarray) -> np.ndarray:
    """F(r_i, u_j) = (2 pi)^{d/2} r^{-v} sum_n c_n (-i)^n J_{n+v}(r) Z_n(u)."""
    v = (d - 2) / 2
    nmax = coeffs.size - 1
    jt = bessel_j_orders(v, nmax, r)  # (nmax+1, nr)
    phase = (-1j) ** np.arange(nmax + 1)
    z = zonal_table(_alpha(d), nmax, u)  # (nmax+1, nu)
    rad = (jt * (coeffs * phase)[:, None]).T  # (nr, nmax+1)
    with np.errstate(divide="ignore", invalid="ignore"):
        pref = (2 * math.pi) ** (d / 2) * r ** (-v)
    return pref[:, None] * (rad @ z)


def extension_transform(f: TrialFunction, d: int, r: float, theta: float, method: str = "spectral") -> complex:
    """Fourier extension of a zonal density at xi = r (cos theta e + sin theta e_perp)."""
    if d < 3:
        raise ValueError("extension_transform needs d >= 3")
    if r == 0:
        return complex(zonal_integral(d, lambda u: f.profile(u, d), 128))
    if method == "spectral":
        c = f.coefficients(d)
        return complex(_transform_matrix(np.asarray(c, dtype=complex), d, np.array([float(r)]),
                                         np.array([math.cos(theta)]))[0, 0])
    if method == "direct":
        return _extension_direct(f, d, float(r), float(theta))
    raise ValueError(f"unknown method {method!r}")


def _extension_direct(f: TrialFunction, d: int, r: float, theta: float, tol: float = 1e-11) -> complex:
    from .measures import sigma_hat

    a = (d - 3) / 2
    ct, st = math.cos(theta), math.sin(theta)
    prev = None
    n = int(r) + 32
    while True:
        rule = gauss_jacobi(n, a, a)
        u = rule.nodes
        vals = f.profile(u, d) * np.exp(-1j * r * u * ct) * sigma_hat(d - 1, r * st * np.sqrt(1 - u * u))
        cur = complex(np.dot(rule.weights, vals))
        if prev is not None and abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        if n > 4000:
            return cur
        prev = cur
        n = int(n * 1.5)


def product_integral(coeff_list: list[np.ndarray], d: int, nodes: int = 24) -> tuple[float, float]:
    """int_{R^d} prod_j |F_j(xi)|^2 d xi for zonal densities with coefficients c^{(j)}.

    All densities share one axis.  The angular variable is integrated by
    a Gauss-Jacobi rule that is exact for the polynomial dependence on u;
    r in [0, R] uses unit Gauss-Legendre panels and [R, inf) the
    large-argument expansion.  Returns (value, error estimate).
    """
    if d < 3:
        raise ValueError("product_integral needs d >= 3")
    k = len(coeff_list)
    v = (d - 2) / 2
    coeffs = [np.asarray(c, dtype=complex) for c in coeff_list]
    nmax = max(c.size for c in coeffs) - 1
    coeffs = [np.pad(c, (0, nmax + 1 - c.size)) for c in coeffs]
    biggest = max(float(np.max(np.abs(c))) for c in coeffs)
    live = [int(np.nonzero(np.abs(c) > 1e-17 * biggest)[0].max()) if np.any(c) else 0 for c in coeffs]
    n_eff = max(live)
    big_r = float(math.ceil(asy.tail_radius(v + n_eff)))
    u, wu = zonal_rule(d, k * nmax + 2)

    n_panels = int(big_r)
    starts = np.arange(n_panels, dtype=float)

    def main(n):
        rule = gauss_jacobi(n, 0.0, 0.0)
        x, w = 0.5 * (rule.nodes + 1.0), 0.5 * rule.weights
        r_all = (starts[:, None] + x[None, :]).ravel()
        w_all = np.tile(w, n_panels) * r_all ** (d - 1)
        acc = 0.0
        step = max(1, 2_000_000 // (u.size * (nmax + 1)))
        for lo in range(0, r_all.size, step):
            r = r_all[lo : lo + step]
            total = np.ones((r.size, u.size))
            for c in coeffs:
                f = _transform_matrix(c, d, r, u)
                total = total * (f.real**2 + f.imag**2)
            acc += float(w_all[lo : lo + step] @ total @ wu)
        return acc

    m1 = main(nodes)
    m2 = main(nodes - 8)

    # tail: A = sum c_n (-1)^n Z_{v+n}(x) Z_n(u),  B = sum c_n conj(Z_{v+n})(x) Z_n(u)
    z = zonal_table(_alpha(d), nmax, u)  # (nmax+1, nu)
    hp = np.array([asy.hankel_poly(v + n) for n in range(n_eff + 1)])  # (n_eff+1, M+1)
    waves = []
    for c in coeffs:
        cc = c[: n_eff + 1]
        sign = (-1.0) ** np.arange(n_eff + 1)
        a = np.einsum("n,nm,nu->um", cc * sign, hp, z[: n_eff + 1])
        b = np.einsum("n,nm,nu->um", cc, np.conj(hp), z[: n_eff + 1])
        waves.append(asy.abs2_wave(a, b))
    wave = asy.wave_product(waves)
    amp = ((2 * math.pi) ** (d / 2) * math.sqrt(2 / math.pi)) ** (2 * k)
    s0 = k * (2 * v + 1) - (d - 1)
    tail, terr = asy.integrate_tail(wave, s0, big_r, asy.phase_offset(v))
    total = m1 + amp * float(np.real(np.dot(wu, tail)))
    err = abs(m1 - m2) + amp * float(np.dot(np.abs(wu), terr)) + 1e-15 * abs(total)
    return total, err


def extension_norm_detail(f: TrialFunction, d: int, p: int) -> tuple[float, float]:
    """(||f sigma-hat||_{L^p(R^d)}, relative error estimate) for even p >= 4."""
    if p % 2 or p < 4:
        raise ValueError(f"extension_norm supports even p >= 4, got p={p}")
    if d < 3:
        raise ValueError("extension_norm needs d >= 3")
    c = f.coefficients(d)
    val, err = product_integral([c] * (p // 2), d)
    rel = err / abs(val) / p
    if f.degree is None:
        rel += 1e-13  # truncation of the zonal expansion
    return val ** (1.0 / p), rel


def extension_norm(f: TrialFunction, d: int, p: int) -> float:
    return extension_norm_detail(f, d, p)[0]


# ---------------------------------------------------------------- quadruples


@dataclass(frozen=True)
class QuadrupleBatch:
    z1: np.ndarray
    z2: np.ndarray
    z3: np.ndarray
    z4: np.ndarray

    def __len__(self) -> int:
        return self.z1.shape[0]

    def closure_error(self) -> float:
        if len(self) == 0:
            return 0.0
        return float(np.max(np.abs(self.z1 + self.z2 + self.z3 + self.z4)))


def complete_quadruple(z1: np.ndarray, z2: np.ndarray, w_raw: np.ndarray):
    """Given z1, z2 (rows) and raw Gaussian directions, build z3, z4 on the
    sphere with z1 + z2 + z3 + z4 = 0.  Returns (mask_ok, z3, z4)."""
    v = -(z1 + z2)
    nv = np.linalg.norm(v, axis=1)
    ok = (nv > 1e-12) & (nv < 2.0 - 1e-12)
    vhat = v / np.where(nv > 0, nv, 1.0)[:, None]
    w = w_raw - np.sum(w_raw * vhat, axis=1)[:, None] * vhat
    wn = np.linalg.norm(w, axis=1)
    ok &= wn > 1e-8
    w = w / np.where(wn > 0, wn, 1.0)[:, None]
    h = np.sqrt(np.maximum(1.0 - 0.25 * nv * nv, 0.0))
    z3 = 0.5 * v + h[:, None] * w
    z4 = v - z3
    return ok, z3, z4


def _quadruples(rng: np.random.Generator, n: int, d: int):
    out = [np.empty((0, d))] * 4
    need = n
    chunks = [[], [], [], []]
    while need > 0:
        m = need + need // 8 + 8
        z1 = _unit_rows(rng, m, d)
        z2 = _unit_rows(rng, m, d)
        raw = rng.standard_normal((m, d))
        ok, z3, z4 = complete_quadruple(z1, z2, raw)
        idx = np.nonzero(ok)[0][:need]
        for lst, arr in zip(chunks, (z1, z2, z3, z4)):
            lst.append(arr[idx])
        need -= idx.size
    if n:
        out = [np.concatenate(c, axis=0) for c in chunks]
    return out


def quadruple_sampler(d: int, n: int, seed: int, workers: int = 1) -> QuadrupleBatch:
    """n quadruples on S^{d-1} summing to zero (support of the measure Sigma)."""
    if d < 2:
        raise ValueError("quadruple_sampler needs d >= 2")
    parts = run_partitioned(lambda rng, m: _quadruples(rng, m, d), n, seed, workers)
    cols = [np.concatenate([p[i] for p in parts], axis=0) for i in range(4)]
    return QuadrupleBatch(*cols)
