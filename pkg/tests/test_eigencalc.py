import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sharpsphere.eigencalc import (
    ExactScaled, delta_seq, epsilon_seq, gamma_seq, lambda_closed, lambda_exact, lambda_numeric,
    lambda_numeric_all, moment_lift, sign_report, tau_seq,
)
from sharpsphere.specialfn import sphere_area

# Lambda_k(phi_d) from adaptive 30-digit quadrature of the defining integral, frozen.
NUMERIC_REF = {
    (3, 0): 16.755160819145563938,
    (3, 2): -0.47871888054701611253,
    (5, 0): 64.168094645812718893,
    (5, 1): 5.8334631496193380812,
    (6, 2): -3.2084047322906359447,
    (7, 3): -1.6759524055058493746,
    (8, 2): 0.69814723717451007181,
    (9, 2): 5.2092015451797083917,
}


def test_lambda0_phi4_value():
    ex = lambda_exact(4, 0)[0]
    assert ex == ExactScaled(Fraction(8, 3), 2)
    assert ex.pi_form() == (Fraction(32, 3), 1)
    assert lambda_closed(4, 0) == ex


@pytest.mark.parametrize("dk,ref", sorted(NUMERIC_REF.items()))
def test_lambda_against_quadrature_oracle(dk, ref):
    d, k = dk
    assert lambda_numeric(d, k) == pytest.approx(ref, rel=1e-12)
    if d <= 7:
        assert float(lambda_exact(d, k)[k]) == pytest.approx(ref, rel=1e-14)


def test_small_exact_values():
    assert lambda_exact(5, 0)[0] == ExactScaled(Fraction(1024, 315), 3)
    assert lambda_exact(6, 2)[2] == ExactScaled(Fraction(-64, 525), 4)


@pytest.mark.parametrize("d", [4, 5, 6, 7])
def test_exact_equals_closed_form(d):
    exact = lambda_exact(d, 60)
    for k, ex in enumerate(exact):
        assert lambda_closed(d, k) == ex


@given(st.integers(min_value=3, max_value=7), st.integers(min_value=0, max_value=80))
@settings(max_examples=40, deadline=None)
def test_exact_matches_numeric(d, k):
    ex = float(lambda_exact(d, k)[k])
    assert lambda_numeric(d, k) == pytest.approx(ex, rel=1e-9, abs=1e-12 * sphere_area(d - 2))


def test_numeric_all_matches_single():
    vec = lambda_numeric_all(6, 12)
    for k in (0, 5, 12):
        assert vec[k] == pytest.approx(lambda_numeric(6, k), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("d,expected", [
    (3, "+-----"),
    (4, "+0-0-0"),
    (5, "++----"),
    (6, "++----"),
    (7, "++----"),
])
def test_sign_prefix(d, expected):
    assert "".join(r.sign for r in sign_report(d, 5)) == expected


def test_sign_report_rows_consistent():
    for row in sign_report(5, 20):
        assert row.closed_form_match is True
        assert abs(row.numeric - float(row.exact)) <= 1e-9 * max(1.0, abs(float(row.exact)))


def test_beyond_seven_is_numeric_only():
    rows = sign_report(8, 3)
    assert all(r.exact is None and r.closed_form_match is None for r in rows)
    assert rows[2].sign == "+"


def test_domain_errors():
    with pytest.raises(ValueError):
        lambda_exact(8, 3)
    with pytest.raises(ValueError):
        lambda_numeric(2, 0)
    with pytest.raises(ValueError):
        sign_report(2, 3)


def test_base_sequences_start():
    assert len(gamma_seq(10)) >= 11
    for seq in (gamma_seq(6), delta_seq(6), tau_seq(6), epsilon_seq(6)):
        assert all(isinstance(x, Fraction) for x in seq)


def test_moment_lift_is_gegenbauer_recurrence():
    # lifting the moments of C_k against a weight equals integrating t * C_k
    alpha = Fraction(3, 2)
    base = [Fraction(1, k + 1) for k in range(8)]
    table = moment_lift(base, alpha, 0, 2)
    k = 2
    assert table[1, k] == ((k + 1) * base[k + 1] + (k + 2 * alpha - 1) * base[k - 1]) / (2 * k + 2 * alpha)
    assert len(table.values[2]) == len(base) - 2


def test_moment_lift_short_base():
    with pytest.raises(IndexError, match="length >= 6"):
        moment_lift([Fraction(1)] * 3, Fraction(2), 2, 3)


def test_exact_scaled_float_and_sign():
    x = ExactScaled(Fraction(-3, 4), 2)
    assert float(x) == pytest.approx(-3 * math.pi)
    assert x.sign == -1


def _gj(n, a, b):
    from scipy.special import roots_jacobi
    return roots_jacobi(n, a, b)


def test_base_sequences_against_quadrature():
    from scipy.special import eval_gegenbauer

    x, w = _gj(40, 0.5, 0.0)
    x3, w3 = _gj(40, 1.5, 0.0)
    x0, w0 = _gj(40, 0.0, 0.0)
    g, dl, ta, ep = gamma_seq(30), delta_seq(30), tau_seq(30), epsilon_seq(30)
    for k in range(31):
        # P_k' = C^{3/2}_{k-1}, P_k'' = 3 C^{5/2}_{k-2}
        dp = eval_gegenbauer(k - 1, 1.5, x) if k >= 1 else 0 * x
        ddp = 3 * eval_gegenbauer(k - 2, 2.5, x3) if k >= 2 else 0 * x3
        assert float(g[k]) == pytest.approx(math.sqrt(2) * np.dot(w, dp), abs=1e-10)
        assert float(dl[k]) == pytest.approx(2 ** 1.5 * np.dot(w3, ddp), abs=1e-10 * max(1, abs(float(dl[k]))))
        assert float(ep[k]) == pytest.approx(np.dot(w0, eval_gegenbauer(k, 2.0, x0)), abs=1e-10)
        assert float(ta[k]) == pytest.approx(np.dot(w0, eval_gegenbauer(k, 1.0, x0)), abs=1e-10)
    assert dl[0] == 0 and dl[1] == 0
