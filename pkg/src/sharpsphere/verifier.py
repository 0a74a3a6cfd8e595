"""Numerical checks of the sharp extension inequality, the weighted
bilinear inequality, the quadruple identity, antipodal symmetrisation and
the spectral bound for the quadratic form H_d."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .eigencalc import lambda_exact, lambda_numeric_all
from .measures import INF, parse_q, sharp_constant, range_clause
from .spherequad import (
    TrialFunction,
    _quadruples,
    _unit_rows,
    product_integral,
    random_trial,
    run_partitioned,
    zonal_norm2,
    zonal_rule,
)
from .specialfn import beta_fn, sphere_area

__all__ = [
    "Report",
    "ChainReport",
    "decide",
    "verify_thm1",
    "weighted_rhs_cor3",
    "verify_cor3",
    "geometric_identity",
    "geometric_identity_terms",
    "antipodal_check",
    "hd_spectral",
    "hd_monte_carlo",
    "verify_lem11",
    "chain_report",
]

RELATIONS = ("le", "lt", "eq")


def decide(relation: str, lhs: float, rhs: float, stat_error: float, tolerance: float) -> str:
    """Verdict from the report fields alone.

    slack = max(tolerance, 3 stat_error).
    le: pass iff lhs <= rhs + slack, else fail.
    eq: pass iff |lhs - rhs| <= slack, else fail.
    lt: pass iff lhs < rhs - slack; fail iff lhs > rhs + slack; otherwise
        the gap is within noise and the verdict is inconclusive.
    """
    slack = max(tolerance, 3.0 * stat_error)
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        return "fail"
    if relation == "le":
        return "pass" if lhs <= rhs + slack else "fail"
    if relation == "eq":
        return "pass" if abs(lhs - rhs) <= slack else "fail"
    if relation == "lt":
        if lhs < rhs - slack:
            return "pass"
        if lhs > rhs + slack:
            return "fail"
        return "inconclusive"
    raise ValueError(f"unknown relation {relation!r}")


@dataclass(frozen=True)
class Report:
    name: str
    lhs: float
    rhs: float
    stat_error: float
    tolerance: float
    relation: str = "le"
    verdict: str = ""
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.stat_error < 0:
            raise ValueError("stat_error must be >= 0")
        v = decide(self.relation, self.lhs, self.rhs, self.stat_error, self.tolerance)
        if self.verdict and self.verdict != v:
            raise ValueError(f"stored verdict {self.verdict!r} disagrees with fields ({v!r})")
        object.__setattr__(self, "verdict", v)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ChainReport:
    d: int
    stages: tuple  # (label, value, error) per stage, left to right
    reports: tuple

    @property
    def verdict(self) -> str:
        return overall([r.verdict for r in self.reports])

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "stages": [{"name": n, "value": v, "error": e} for n, v, e in self.stages],
            "reports": [r.to_dict() for r in self.reports],
            "verdict": self.verdict,
        }


def overall(verdicts) -> str:
    verdicts = list(verdicts)
    if "fail" in verdicts:
        return "fail"
    if "inconclusive" in verdicts:
        return "inconclusive"
    return "pass"


def _child_seed(seed: int, *tags: int) -> list[int]:
    return [int(seed), *map(int, tags)]


# ---------------------------------------------------------------- sharp constant and extremizers


def _ratio(f: TrialFunction, d: int, k: int, q) -> tuple[float, float]:
    from .spherequad import extension_norm_detail

    num, rel = extension_norm_detail(f, d, 2 * k)
    den = f.norm(d, q)
    return num / den, rel


def verify_thm1(d: int, k: int, q, trials: int = 4, seed: int = 0, plane_wave: bool = True,
                eq_rtol: float = 1e-5, bound_rtol: float = 1e-6) -> list[Report]:
    """Equality at f = 1 (and at a plane wave) and ratio <= C on random trials."""
    q = parse_q(q)
    range_clause(d, k, q)
    if d < 3:
        raise ValueError("zonal extension norms need d >= 3")
    c = sharp_constant(d, k, q).value
    reports = []
    r, rel = _ratio(TrialFunction.constant(1.0), d, k, q)
    reports.append(Report(f"thm1/d={d},k={k},q={q}/constant", r, c, 0.0, eq_rtol * c, "eq", details={"rel_error": rel}))
    if plane_wave:
        xi = [1.0] + [0.0] * (d - 1)
        r, rel = _ratio(TrialFunction.plane_wave(xi), d, k, q)
        reports.append(Report(f"thm1/d={d},k={k},q={q}/plane_wave", r, c, 0.0, eq_rtol * c, "eq", details={"rel_error": rel}))
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(_child_seed(seed, d, k))))
    for i in range(trials):
        if i % 2 == 0:
            f = random_trial(rng)
            label = "random"
        else:
            f = TrialFunction.harmonic_perturbation(float(rng.uniform(0.1, 0.5)), int(rng.integers(1, 5)))
            label = f"perturbation(eps={f.params[0]:.4g},deg={f.params[1]})"
        r, rel = _ratio(f, d, k, q)
        reports.append(Report(f"thm1/d={d},k={k},q={q}/trial{i}:{label}", r, c, 0.0, bound_rtol * c, "le",
                              details={"rel_error": rel}))
    return reports


# ---------------------------------------------------------------- weighted four-fold inequality


def _cor3_prefactor(d: int) -> float:
    return (2 * math.pi) ** d * 2.0 ** ((2 - d) / 2) * sphere_area(d - 2)


def _abs2_profile(f: TrialFunction, d: int, u: np.ndarray) -> np.ndarray:
    v = f.profile(u, d)
    return np.real(v * np.conj(v))


def weighted_rhs_cor3(d: int, f1: TrialFunction, f2: TrialFunction, n: int, seed: int, workers: int = 1,
                      method: str = "importance") -> tuple[float, float]:
    """Monte Carlo value of the weighted bilinear bound and its standard error.

    ``importance`` draws zeta_1 uniformly and u = zeta_1 . zeta_2 from the
    normalised density (1-u)^{d-3} (1+u)^{(d-4)/2}, which absorbs the
    singular weight (finite variance for every d >= 3).  ``uniform`` draws
    both points uniformly (infinite variance at d = 3).
    """
    if d < 3:
        raise ValueError("the weighted bound is checked for d >= 3")
    if n < 2:
        raise ValueError("need at least two samples")

    def importance(rng, m):
        z1 = _unit_rows(rng, m, d)
        x = rng.beta((d - 2) / 2, d - 2, m)
        u = 2.0 * x - 1.0
        eta = rng.standard_normal((m, d))
        eta -= np.sum(eta * z1, axis=1)[:, None] * z1
        eta /= np.linalg.norm(eta, axis=1)[:, None]
        z2 = u[:, None] * z1 + np.sqrt(np.maximum(1 - u * u, 0.0))[:, None] * eta
        vals = _abs2_profile(f1, d, z1[:, 0]) * _abs2_profile(f2, d, z2[:, 0])
        return vals.sum(), (vals * vals).sum(), m

    def uniform(rng, m):
        z1 = _unit_rows(rng, m, d)
        z2 = _unit_rows(rng, m, d)
        u = np.clip(np.sum(z1 * z2, axis=1), -1.0, 1.0)
        with np.errstate(divide="ignore"):
            w = np.sqrt((1 - u) ** (d - 3) / (1 + u))
        w[~np.isfinite(w)] = 0.0
        vals = w * _abs2_profile(f1, d, z1[:, 0]) * _abs2_profile(f2, d, z2[:, 0])
        return vals.sum(), (vals * vals).sum(), m

    if method == "importance":
        sampler = importance
        mass = sphere_area(d - 1) * sphere_area(d - 2) * 2.0 ** (d - 3 + (d - 4) / 2 + 1) * beta_fn(d - 2, (d - 2) / 2)
    elif method == "uniform":
        sampler = uniform
        mass = sphere_area(d - 1) ** 2
    else:
        raise ValueError(f"unknown method {method!r}")
    parts = run_partitioned(sampler, n, seed, workers)
    s = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = s / n
    var = max(s2 / n - mean * mean, 0.0) * n / (n - 1)
    scale = _cor3_prefactor(d) * mass
    return scale * mean, scale * math.sqrt(var / n)


def _cor3_report(name, d, f1, f2, n, seed, workers, relation, method="importance"):
    lhs, lerr = product_integral([f1.coefficients(d), f2.coefficients(d)], d)
    rhs, se = weighted_rhs_cor3(d, f1, f2, n, seed, workers, method)
    return Report(name, lhs, rhs, se, 1e-9 * abs(rhs) + lerr, relation, details={"method": method, "samples": n})


def verify_cor3(d: int, pairs: int = 20, n: int = 100_000, seed: int = 0, workers: int = 1) -> list[Report]:
    """Equality for exponential pairs and strict inequality for random pairs."""
    if d < 3:
        raise ValueError("the weighted bound is checked for d >= 3")
    axis = [1.0] + [0.0] * (d - 1)
    reports = [
        _cor3_report(f"cor3/d={d}/constant", d, TrialFunction.constant(1.0), TrialFunction.constant(1.0), n,
                     _child_seed(seed, 0), workers, "eq"),
        _cor3_report(f"cor3/d={d}/plane_wave", d, TrialFunction.plane_wave(axis),
                     TrialFunction.plane_wave(axis, 2.0), n, _child_seed(seed, 1), workers, "eq"),
        _cor3_report(f"cor3/d={d}/exponential", d, TrialFunction.exponential(0.6),
                     TrialFunction.exponential(0.6, 0.5), n, _child_seed(seed, 2), workers, "eq"),
    ]
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(_child_seed(seed, d, 99))))
    for i in range(pairs):
        f1, f2 = random_trial(rng), random_trial(rng)
        reports.append(_cor3_report(f"cor3/d={d}/random{i}", d, f1, f2, n, _child_seed(seed, 10 + i), workers, "lt"))
    return reports


# ---------------------------------------------------------------- identity


def geometric_identity_terms(z1, z2, z3, z4) -> np.ndarray:
    """|z1+z2||z3+z4| + |z1+z3||z2+z4| + |z1+z4||z2+z3| per row."""
    nrm = lambda a: np.linalg.norm(a, axis=-1)  # noqa: E731
    return nrm(z1 + z2) * nrm(z3 + z4) + nrm(z1 + z3) * nrm(z2 + z4) + nrm(z1 + z4) * nrm(z2 + z3)


def geometric_identity(d: int, n: int = 1_000_000, seed: int = 0, workers: int = 1, chunk: int = 100_000,
                       threshold: float = 1e-12) -> Report:
    """Max deviation from 4 over n sampled quadruples with zero sum."""
    if d < 2:
        raise ValueError("need d >= 2")

    def worker(rng, m):
        worst, closure = 0.0, 0.0
        done = 0
        while done < m:
            c = min(chunk, m - done)
            z1, z2, z3, z4 = _quadruples(rng, c, d)
            if c:
                worst = max(worst, float(np.max(np.abs(geometric_identity_terms(z1, z2, z3, z4) - 4.0))))
                closure = max(closure, float(np.max(np.abs(z1 + z2 + z3 + z4))))
            done += c
        return worst, closure

    parts = run_partitioned(worker, n, seed, workers)
    worst = max(p[0] for p in parts)
    closure = max(p[1] for p in parts)
    return Report(f"identity/d={d}", worst, threshold, 0.0, 0.0, "le", details={"samples": n, "max_closure_error": closure})


# ---------------------------------------------------------------- H_d


def _lambdas(d: int, kmax: int) -> np.ndarray:
    if 3 <= d <= 7:
        return np.array([float(x) for x in lambda_exact(d, kmax)])
    return lambda_numeric_all(d, kmax)


def hd_spectral(d: int, coeffs, require_even: bool = True) -> float:
    """H_d(g) = sum_k Lambda_k(phi_d) ||Y_k||^2 for zonal g = sum_k c_k C_k(u)/C_k(1).

    ``coeffs`` is a list of (degree, coefficient) pairs or a dense array.
    """
    if d < 3:
        raise ValueError("H_d is defined here for d >= 3")
    if isinstance(coeffs, np.ndarray) or (len(coeffs) and not isinstance(coeffs[0], (tuple, list))):
        pairs = [(k, c) for k, c in enumerate(np.asarray(coeffs))]
    else:
        pairs = [(int(k), c) for k, c in coeffs]
    if not pairs:
        return 0.0
    if require_even:
        big = max(abs(c) for _, c in pairs)
        if any(k % 2 and abs(c) > 1e-12 * big for k, c in pairs):
            raise ValueError("hd_spectral expects an even function (even degrees only)")
        pairs = [(k, c) for k, c in pairs if k % 2 == 0]
    kmax = max(k for k, _ in pairs)
    lam = _lambdas(d, kmax)
    return float(sum(lam[k] * abs(c) ** 2 * zonal_norm2(d, k) for k, c in pairs))


def hd_monte_carlo(d: int, g: TrialFunction, n: int, seed: int, workers: int = 1) -> tuple[float, float]:
    """Direct Monte Carlo of the double integral defining H_d(g)."""

    def worker(rng, m):
        z1 = _unit_rows(rng, m, d)
        z2 = _unit_rows(rng, m, d)
        dist2 = np.sum((z1 - z2) ** 2, axis=1)
        kern = np.sqrt(dist2) * np.maximum(4.0 - dist2, 0.0) ** ((d - 3) / 2)
        vals = np.real(np.conj(g.profile(z1[:, 0], d)) * g.profile(z2[:, 0], d)) * kern
        return vals.sum(), (vals * vals).sum()

    parts = run_partitioned(worker, n, seed, workers)
    s = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = s / n
    var = max(s2 / n - mean * mean, 0.0) * n / (n - 1)
    area2 = sphere_area(d - 1) ** 2
    return area2 * mean, area2 * math.sqrt(var / n)


def _l1(g: TrialFunction, d: int) -> float:
    return g.norm(d, 1.0, nodes=256)


def random_even(rng: np.random.Generator, terms: int = 4) -> TrialFunction:
    a = np.zeros(2 * terms - 1)
    a[::2] = rng.uniform(-1.0, 1.0, terms) / (1.0 + np.arange(terms))
    a[0] += 1.0
    return TrialFunction.tabulated(a)


def verify_lem11(d: int, trials: int = 10, seed: int = 0, mc_samples: int = 200_000, workers: int = 1) -> list[Report]:
    """H_d(g) <= |mu|^2 H_d(1) for even g, strict unless g is constant."""
    if not 3 <= d <= 7:
        raise ValueError("the spectral bound is verified for 3 <= d <= 7")
    h1 = hd_spectral(d, [(0, 1.0)])
    area = sphere_area(d - 1)
    tol = 1e-12 * abs(h1)
    reports = [Report(f"lem11/d={d}/constant", hd_spectral(d, [(0, 2.5)]), 2.5**2 * h1, 0.0, tol, "eq")]
    g = TrialFunction.harmonic_perturbation(0.3, 2)
    c = g.coefficients(d)
    reports.append(Report(f"lem11/d={d}/perturbation", hd_spectral(d, c), abs(c[0]) ** 2 * h1, 0.0, tol, "lt"))
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(_child_seed(seed, d, 11))))
    gs = []
    for i in range(trials):
        g = random_even(rng)
        gs.append(g)
        c = g.coefficients(d)
        mu = g.mean(d)
        reports.append(Report(f"lem11/d={d}/random{i}", hd_spectral(d, c), abs(mu) ** 2 * h1, 0.0, tol, "lt"))
    for i in range(0, len(gs) - 1, 2):
        g1, g2 = gs[i], gs[i + 1]
        diff = TrialFunction.derived("diff", lambda u, dd, a=g1, b=g2: a.profile(u, dd) - b.profile(u, dd), 6)
        lhs = abs(hd_spectral(d, g1.coefficients(d)) - hd_spectral(d, g2.coefficients(d)))
        rhs = 2 ** (d - 2) * (_l1(g1, d) + _l1(g2, d)) * _l1(diff, d)
        reports.append(Report(f"lem11/d={d}/continuity{i // 2}", lhs, rhs, 0.0, 1e-9 * rhs, "le"))
    if mc_samples:
        g = gs[0] if gs else TrialFunction.harmonic_perturbation(0.3, 2)
        est, se = hd_monte_carlo(d, g, mc_samples, _child_seed(seed, d, 12), workers)
        reports.append(Report(f"lem11/d={d}/spectral_vs_mc", hd_spectral(d, g.coefficients(d)), est, se,
                              1e-9 * abs(est), "eq", details={"samples": mc_samples}))
    del area
    return reports


# ---------------------------------------------------------------- symmetrisation


def _is_even(f: TrialFunction, d: int) -> bool:
    u = np.linspace(-1, 1, 401)
    a, b = f.profile(u, d), f.profile(-u, d)
    return bool(np.max(np.abs(a - b)) <= 1e-14 * max(1.0, float(np.max(np.abs(a)))))


def _star_coeffs(c: np.ndarray) -> np.ndarray:
    return np.asarray(c) * (-1.0) ** np.arange(len(c))


def antipodal_check(f: TrialFunction, d: int) -> list[Report]:
    """L^2 preservation of f_sharp and Q(f, f*, f, f*) <= Q(f#, f#, f#, f#)."""
    if d < 3:
        raise ValueError("need d >= 3")
    if not f.is_real_nonneg:
        raise ValueError("antipodal symmetrisation is checked for real nonnegative f only")
    fs = f.sharp()
    n1, n2 = f.norm(d, 2), fs.norm(d, 2, nodes=256)
    reports = [Report(f"antipodal/d={d}/l2", n2, n1, 0.0, 1e-10 * n1, "eq")]
    c = f.coefficients(d)
    cs = fs.coefficients(d)
    scale = (2 * math.pi) ** (-d)
    qf, ef = product_integral([c, _star_coeffs(c)], d)
    qs, es = product_integral([cs, cs], d)
    qf, ef, qs, es = qf * scale, ef * scale, qs * scale, es * scale
    err = ef + es + 1e-13 * abs(qs)
    if _is_even(f, d):
        reports.append(Report(f"antipodal/d={d}/Q_even", qf, qs, 0.0, 10 * err, "eq"))
    else:
        reports.append(Report(f"antipodal/d={d}/Q_strict", qf, qs, 0.0, 10 * err, "lt"))
    return reports


# ---------------------------------------------------------------- chain


def chain_report(d: int, f: TrialFunction | None = None) -> ChainReport:
    """The four-step chain bounding ||f sigma-hat||_4^4 by C^4 ||f||_2^4."""
    if not 3 <= d <= 7:
        raise ValueError("the chain is verified for 3 <= d <= 7")
    f = f or TrialFunction.constant(1.0)
    big_f = f.modulus()
    fs = big_f.sharp()
    tp = (2 * math.pi) ** d
    cf = f.coefficients(d)
    cF = big_f.coefficients(d)
    s1, e1 = product_integral([cf, cf], d)
    s2, e2 = product_integral([cF, _star_coeffs(cF)], d)
    s3, e3 = product_integral([fs.coefficients(d)] * 2, d)
    deg = None if big_f.degree is None else 2 * big_f.degree
    fs2 = TrialFunction.derived(
        "sharp_squared",
        lambda u, dd, g=big_f: 0.5 * (np.real(g.profile(u, dd)) ** 2 + np.real(g.profile(-np.asarray(u), dd)) ** 2),
        deg,
        True,
    )
    c2 = fs2.coefficients(d)
    c2 = np.where(np.arange(len(c2)) % 2 == 0, c2, 0.0)  # even by construction
    s4 = tp * 2.0 ** (3 - d) * sphere_area(d - 2) * 0.75 * hd_spectral(d, c2)
    e4 = 1e-13 * abs(s4) + (0.0 if deg is not None else 1e-12 * abs(s4))
    s5 = sharp_constant(d, 2, 2).value ** 4 * f.norm(d, 2) ** 4
    e5 = 1e-13 * abs(s5)
    stages = (
        ("extension_L4", s1, e1),
        ("modulus_pair", s2, e2),
        ("symmetrised", s3, e3),
        ("quadratic_form", s4, e4),
        ("constant_bound", s5, e5),
    )
    reports = []
    for (na, va, ea), (nb, vb, eb) in zip(stages[:-1], stages[1:]):
        tol = 10 * (ea + eb) + 1e-12 * abs(vb)
        reports.append(Report(f"chain/d={d}/{na}<={nb}", va, vb, 0.0, tol, "le"))
    return ChainReport(d, stages, tuple(reports))
