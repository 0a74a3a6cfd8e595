"""Funk-Hecke eigenvalues Lambda_k(phi_d) of the kernel

    phi_d(t) = 2^{(d-2)/2} (1 - t)^{1/2} (1 + t)^{(d-3)/2},

in exact rational arithmetic (3 <= d <= 7) and by Gauss-Jacobi quadrature
(any d >= 3).  Exact values are rational multiples of omega_{d-2}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .orthopoly import gauss_jacobi, gegenbauer_one, gegenbauer_table
from .specialfn import sphere_area, sphere_area_exact

__all__ = [
    "ExactScaled",
    "LambdaRow",
    "MomentTable",
    "gamma_seq",
    "delta_seq",
    "tau_seq",
    "epsilon_seq",
    "moment_lift",
    "lambda_exact",
    "lambda_closed",
    "lambda_numeric",
    "lambda_numeric_all",
    "sign_report",
]


@dataclass(frozen=True)
class ExactScaled:
    """The number ``coeff * omega_{omega_index}``."""

    coeff: Fraction
    omega_index: int = 0

    def __float__(self) -> float:
        return float(self.coeff) * sphere_area(self.omega_index) if self.coeff else 0.0

    @property
    def sign(self) -> int:
        return (self.coeff > 0) - (self.coeff < 0)

    def pi_form(self) -> tuple[Fraction, int]:
        """Rewrite as ``(q, m)`` meaning ``q * pi**m``."""
        q, m = sphere_area_exact(self.omega_index)
        return self.coeff * q, m


@dataclass(frozen=True)
class LambdaRow:
    d: int
    k: int
    exact: ExactScaled | None
    closed_form: ExactScaled | None
    numeric: float
    sign: str

    @property
    def closed_form_match(self) -> bool | None:
        if self.exact is None or self.closed_form is None:
            return None
        return self.exact == self.closed_form


# ------------------------------------------------------------ base sequences


def gamma_seq(kmax: int) -> list[Fraction]:
    """gamma_k = int (2 - 2t)^{1/2} P_k'(t) dt = 2(-1)^{k+1} + 2/(2k+1)."""
    return [2 * (-1) ** (k + 1) + Fraction(2, 2 * k + 1) for k in range(kmax + 1)]


def delta_seq(kmax: int) -> list[Fraction]:
    """delta_k = int (2 - 2t)^{3/2} P_k''(t) dt = 8(-1)^k binom(k+1, 2) + 3 gamma_k."""
    g = gamma_seq(kmax)
    return [8 * (-1) ** k * math.comb(k + 1, 2) + 3 * g[k] for k in range(kmax + 1)]


def tau_seq(kmax: int) -> list[Fraction]:
    """tau_k = int C^1_k(t) dt, used for d = 4: tau_{2j} = 2/(2j+1), tau_{2j+1} = 0."""
    return [Fraction(2, k + 1) if k % 2 == 0 else Fraction(0) for k in range(kmax + 1)]


def epsilon_seq(kmax: int) -> list[Fraction]:
    """epsilon_k = int C^2_k(t) dt: 2(l+1) at k = 2l, zero at odd k."""
    return [Fraction(k + 2) if k % 2 == 0 else Fraction(0) for k in range(kmax + 1)]


@dataclass(frozen=True)
class MomentTable:
    """values[j][K] = int w(t) C^alpha_{K-offset}(t) t^j dt, up to a fixed
    normalisation shared by all entries (K indexes the base sequence)."""

    alpha: Fraction
    offset: int
    values: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, jk):
        j, k = jk
        return self.values[j][k]


def moment_lift(base: Sequence[Fraction], alpha, offset: int, jmax: int) -> MomentTable:
    """Raise the power of t by one per row using the Gegenbauer recurrence

        m^{(j+1)}_k = ((k+1) m^{(j)}_{k+1} + (k+2a-1) m^{(j)}_{k-1}) / (2k+2a),

    where m_k is stored at position k + offset and m_{-1} = 0.  Each lift
    loses the top entry.
    """
    alpha = Fraction(alpha)
    need = jmax + offset + 1
    if len(base) < need:
        raise IndexError(f"moment_lift needs a base of length >= {need} for jmax={jmax}, offset={offset}; got {len(base)}")
    rows = [tuple(Fraction(v) for v in base)]
    for _ in range(jmax):
        prev = rows[-1]
        row = [Fraction(0)] * offset
        for pos in range(offset, len(prev) - 1):
            k = pos - offset
            below = prev[pos - 1] if k >= 1 else Fraction(0)
            row.append(((k + 1) * prev[pos + 1] + (k + 2 * alpha - 1) * below) / (2 * k + 2 * alpha))
        rows.append(tuple(row))
    return MomentTable(alpha, offset, tuple(rows))


# ------------------------------------------------------------ exact values

_EXACT_DIMS = (3, 4, 5, 6, 7)


def lambda_exact(d: int, kmax: int) -> list[ExactScaled]:
    """Exact Lambda_k(phi_d), k = 0..kmax, for 3 <= d <= 7."""
    if d not in _EXACT_DIMS:
        raise ValueError(f"exact eigenvalues are available for 3 <= d <= 7 only (got d={d}); use lambda_numeric")
    if kmax < 0:
        return []
    n = d - 2
    out: list[Fraction] = []
    if d == 3:
        # (2k+1) P_k = P'_{k+1} - P'_{k-1}
        g = gamma_seq(kmax + 1)
        for k in range(kmax + 1):
            lower = g[k - 1] if k >= 1 else Fraction(0)
            out.append((g[k + 1] - lower) / (2 * k + 1))
    elif d == 4:
        t = tau_seq(kmax + 2)
        for k in range(kmax + 1):
            if k == 0:
                out.append(Fraction(8, 3))  # direct polynomial integration
            elif k == 1:
                out.append(Fraction(0))  # odd integrand
            else:
                out.append((2 * t[k] - t[k - 2] - t[k + 2]) / (2 * (k + 1)))
    elif d == 5:
        tab = moment_lift(gamma_seq(kmax + 5), Fraction(3, 2), 1, 3)
        for k in range(kmax + 1):
            m = [tab[j, k + 1] for j in range(4)]
            out.append(2 * (m[0] + m[1] - m[2] - m[3]) / math.comb(k + 2, 2))
    elif d == 6:
        tab = moment_lift(epsilon_seq(kmax + 6), 2, 0, 5)
        c = (1, 1, -2, -2, 1, 1)
        for k in range(kmax + 1):
            s = sum(cj * tab[j, k] for j, cj in enumerate(c))
            out.append(4 * s / math.comb(k + 3, 3))
    else:
        tab = moment_lift(delta_seq(kmax + 8), Fraction(5, 2), 2, 5)
        c = (1, 3, 2, -2, -3, -1)
        for k in range(kmax + 1):
            s = sum(cj * tab[j, k + 2] for j, cj in enumerate(c))
            out.append(Fraction(2, 3) * s / math.comb(k + 4, 4))
    return [ExactScaled(v, n) for v in out]


def _prod(values) -> int:
    p = 1
    for v in values:
        p *= v
    return p


def lambda_closed(d: int, k: int) -> ExactScaled:
    """Printed rational closed forms of Lambda_k(phi_d) for 4 <= d <= 7."""
    if d == 3:
        raise ValueError("no closed form is available for d=3; use lambda_exact")
    if d not in (4, 5, 6, 7):
        raise ValueError(f"closed forms exist for 4 <= d <= 7 only (got d={d})")
    if k < 0:
        raise ValueError("k must be >= 0")
    n = d - 2
    if d == 4:
        if k == 0:
            return ExactScaled(Fraction(8, 3), n)
        if k % 2:
            return ExactScaled(Fraction(0), n)
        j = k // 2
        v = Fraction(1, 2 * (2 * j + 1)) * (Fraction(4, 2 * j + 1) - Fraction(2, 2 * j - 1) - Fraction(2, 2 * j + 3))
        return ExactScaled(v, n)
    if d == 5:
        num = 768 * (k + 1) * (k + 2) * (3 - 3 * k - k * k)
        den = _prod(2 * k + o for o in range(-3, 10, 2))
        return ExactScaled(2 * Fraction(num, den) / math.comb(k + 2, 2), n)
    if d == 6:
        if k % 2 == 0:
            v = Fraction(-8 * (k + 2), (k - 1) * (k + 1) * (k + 3) * (k + 5))
        else:
            v = Fraction(-8 * (k + 1) * (k + 3), k * (k - 2) * (k + 2) * (k + 4) * (k + 6))
        return ExactScaled(4 * v / math.comb(k + 3, 3), n)
    num = 245760 * (k + 1) * (k + 2) * (k + 3) * (k + 4) * (15 - 5 * k - k * k) * (-3 + 5 * k + k * k)
    den = _prod(2 * k + o for o in range(-5, 16, 2))
    return ExactScaled(Fraction(2, 3) * Fraction(num, den) / math.comb(k + 4, 4), n)


# ------------------------------------------------------------ quadrature


def lambda_numeric(d: int, k: int, nodes: int | None = None) -> float:
    """Lambda_k(phi_d) by Gauss-Jacobi with weight (1-t)^{(d-2)/2} (1+t)^{d-3}.

    The remaining factor is the degree-k polynomial C_k(t) / C_k(1), so any
    rule with at least ceil(k/2) + 2 nodes is exact up to rounding.
    """
    if d < 3:
        raise ValueError(f"Lambda_k(phi_d) needs d >= 3, got d={d}")
    if k < 0:
        raise ValueError("k must be >= 0")
    n = max(nodes or 0, (k + 1) // 2 + 2)
    rule = gauss_jacobi(n, (d - 2) / 2, d - 3)
    alpha = Fraction(d - 2, 2)
    ck = gegenbauer_table(alpha, k, rule.nodes)[k] / float(gegenbauer_one(alpha, k))
    return sphere_area(d - 2) * 2.0 ** ((d - 2) / 2) * float(np.dot(rule.weights, ck))


def lambda_numeric_all(d: int, kmax: int, nodes: int | None = None) -> np.ndarray:
    """Vector of lambda_numeric(d, k) for k = 0..kmax from one rule."""
    if d < 3:
        raise ValueError(f"Lambda_k(phi_d) needs d >= 3, got d={d}")
    n = max(nodes or 0, (kmax + 1) // 2 + 2)
    rule = gauss_jacobi(n, (d - 2) / 2, d - 3)
    alpha = Fraction(d - 2, 2)
    tab = gegenbauer_table(alpha, kmax, rule.nodes)
    ones = np.array([float(gegenbauer_one(alpha, k)) for k in range(kmax + 1)])
    return sphere_area(d - 2) * 2.0 ** ((d - 2) / 2) * (tab @ rule.weights) / ones


def _sign_char(s: int) -> str:
    return "+" if s > 0 else "-" if s < 0 else "0"


def sign_report(d: int, kmax: int) -> list[LambdaRow]:
    """One LambdaRow per k <= kmax; exact columns filled when 3 <= d <= 7."""
    if d < 3:
        raise ValueError(f"sign_report needs d >= 3, got d={d}")
    numeric = lambda_numeric_all(d, kmax)
    exact = lambda_exact(d, kmax) if d in _EXACT_DIMS else None
    band = 1e-12 * sphere_area(d - 2)
    rows = []
    for k in range(kmax + 1):
        ex = exact[k] if exact else None
        closed = lambda_closed(d, k) if d in (4, 5, 6, 7) else None
        if ex is not None:
            s = ex.sign
        else:
            s = 0 if abs(numeric[k]) <= band else (1 if numeric[k] > 0 else -1)
        rows.append(LambdaRow(d, k, ex, closed, float(numeric[k]), _sign_char(s)))
    return rows
