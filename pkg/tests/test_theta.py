import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lucaszeta.complexmath import EULER_GAMMA, gamma
from lucaszeta.errors import DomainError
from lucaszeta.lucas_core import EvalConfig, classify_ratio, l_Q_k, validate_params
from lucaszeta.lucas_zeta import lattice_point, zeta_at_negative_integer, zeta_residue
from lucaszeta.theta import (
    alpha_values,
    build_expansion,
    eval_expansion,
    expansion_error_order,
    theta_direct,
    theta_values,
)

LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


def _hand_theta(P, Q, t, terms=80):
    total, prev, cur = 1.0, 0.0, 1.0
    for _ in range(terms):
        total += math.exp(-cur * t)
        prev, cur = cur, P * cur - Q * prev
    return total


def test_theta_direct_values(fib, geo2):
    # hand summation; 80 terms is far past the point where e^{-U_n} vanishes
    assert theta_direct(fib, 1.0) == pytest.approx(_hand_theta(1, -1, 1.0), abs=1e-15)
    assert theta_direct(fib, 1.0) == pytest.approx(1.9279569047, abs=1e-10)
    assert theta_direct(fib, 50.0) == pytest.approx(1 + 2 * math.exp(-50), rel=1e-15)
    assert theta_direct(geo2, 10.0) == pytest.approx(1 + math.exp(-10) + math.exp(-30), rel=1e-15)


def test_theta_direct_domain(fib):
    with pytest.raises(DomainError):
        theta_direct(fib, 0.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-3, 30))
def test_theta_float_matches_mp(t):
    p = validate_params(1, -1)
    assert theta_direct(p, t) == pytest.approx(float(theta_direct(p, t, dps=30)), rel=1e-14)


def test_theta_values_vectorised(fib):
    ts = np.geomspace(1e-3, 5, 17)
    got = theta_values(fib, ts)
    assert np.allclose(got, [theta_direct(fib, t) for t in ts], rtol=1e-14, atol=0)


def test_theta_u0_one_adds_expm1(fib):
    t = 0.37
    shifted = theta_direct(fib, t, EvalConfig(u0_one=True))
    assert shifted == pytest.approx(theta_direct(fib, t) + math.exp(-t) - 1, rel=1e-15)


def test_expansion_fibonacci_m1(fib):
    e = build_expansion(fib, classify_ratio(fib), 1)
    assert e.M == 1
    assert e.B_set == ()
    e_vals = dict(e.e_list)
    assert e_vals[1] == pytest.approx(1.0, rel=1e-14)  # -zeta_F(-1)
    assert abs(e_vals[2]) < 1e-30  # zeta_F(-2) / 2 = 0


def test_expansion_fibonacci_m2(fib):
    e = build_expansion(fib, classify_ratio(fib), 2)
    assert e.B_set == ((4, 2),)
    assert dict(e.dtilde_list)[4] == pytest.approx(1 / (100 * LOG_PHI), rel=1e-14)
    # for l in B the coefficient e(l) is d(l); elsewhere (-1)^l zeta(-l)/l!
    assert dict(e.e_list)[4] == dict(e.d_list)[4]
    assert dict(e.e_list)[3] == pytest.approx(-float(zeta_at_negative_integer(fib, 3)) / 6, rel=1e-13)


def test_expansion_constant_term(geo2, fib):
    e = build_expansion(geo2, classify_ratio(geo2), 1)
    assert e.const_term == pytest.approx((math.log(2) - 2 * EULER_GAMMA) / (2 * math.log(2)), rel=1e-14)
    assert e.const_term == pytest.approx(-0.3327461772769, abs=1e-12)
    assert e.B_set == ((1, 1), (2, 2))
    e = build_expansion(fib, classify_ratio(fib), 1)
    assert e.const_term == pytest.approx((math.log(5) + LOG_PHI - 2 * EULER_GAMMA) / (2 * LOG_PHI), rel=1e-14)
    assert e.log_coeff == pytest.approx(1 / LOG_PHI)


def test_dtilde_formula(geo2, jac):
    for p in (geo2, jac):
        e = build_expansion(p, classify_ratio(p), 3)
        for (ell, k), (_, dt) in zip(e.B_set, e.dtilde_list):
            ref = (-1) ** (ell + k) * p.D ** (-ell / 2) * math.comb(ell, k) / (math.factorial(ell) * p.log_a)
            assert dt == pytest.approx(ref, rel=1e-14)


def test_amplitudes_are_gamma_times_residue(fib, geo2):
    # amplitude of the (k, n) term equals Gamma(s_{k,n}) Res zeta at s_{k,n}
    for p in (fib, geo2):
        r = classify_ratio(p)
        e = build_expansion(p, r, 2)
        for k, table in enumerate(e.c_tables):
            for n, amp in table[:6]:
                s = lattice_point(p, r, k, n)
                ref = gamma(s) * zeta_residue(p, r, k, n)
                assert abs(ref - amp) <= 1e-12 * max(abs(amp), 1e-300) + 1e-300


def test_amplitudes_decay(fib):
    e = build_expansion(fib, classify_ratio(fib), 2)
    for k, table in enumerate(e.c_tables):
        lq = l_Q_k(fib, k)
        rows = [(abs(2 * n + lq), abs(a)) for n, a in table if 2 * n + lq != 0 and abs(a) > 0]
        bound = [
            mag / (math.exp(-(math.pi**2 / (2 * fib.log_a)) * j) * j ** (fib.rho * k - 0.5)) for j, mag in rows
        ]
        # the envelope constant A stays bounded across the table
        assert max(bound) <= 10 * min(bound) * 1e3


def test_alpha_is_real(geo2, fib):
    for p, m in ((geo2, 1), (fib, 2)):
        e = build_expansion(p, classify_ratio(p), m)
        for t in (1e-3, 0.05, 0.5, 1.0):
            vals = alpha_values(e, np.array([t]))
            assert abs(vals[0].imag) <= 1e-10 * (1 + abs(vals[0].real))
            assert math.isfinite(eval_expansion(e, p, t))


def test_eval_expansion_domain(fib):
    e = build_expansion(fib, classify_ratio(fib), 1)
    for t in (0.0, 1.5):
        with pytest.raises(DomainError):
            eval_expansion(e, fib, t)


def test_expansion_accuracy_examples(fib):
    e2 = build_expansion(fib, classify_ratio(fib), 2)
    assert abs(theta_direct(fib, 0.01) - eval_expansion(e2, fib, 0.01)) <= 10 * 0.01**4.5
    e1 = build_expansion(fib, classify_ratio(fib), 1)
    assert abs(theta_direct(fib, 1e-3) - eval_expansion(e1, fib, 1e-3)) <= 1e-6


def test_error_order_examples(fib, geo2):
    assert expansion_error_order(fib, 1, np.geomspace(1e-3, 1e-1, 8)) >= 2.3
    assert expansion_error_order(fib, 2, np.geomspace(1e-2, 1e-1, 8)) >= 4.3
    assert expansion_error_order(geo2, 1, np.geomspace(1e-3, 1e-1, 8)) >= 2.3


def test_error_order_rejects_bad_grid(fib):
    with pytest.raises(DomainError):
        expansion_error_order(fib, 1, [0.01, 0.02, 0.03])
    with pytest.raises(DomainError):
        expansion_error_order(fib, 1, np.geomspace(1e-2, 0.5, 6))


def test_u0_one_breaks_order(fib):
    slope = expansion_error_order(fib, 1, np.geomspace(1e-3, 1e-1, 8), EvalConfig(u0_one=True))
    assert slope == pytest.approx(1.0, abs=0.1)


@pytest.mark.parametrize("PQ", [(1, -1), (3, 2), (1, -2), (2, -1)])
@pytest.mark.parametrize("m", [1, 2])
def test_remainder_envelope(PQ, m):
    # |theta - alpha_m| / t^{2m} does not grow as t decreases
    p = validate_params(*PQ)
    e = build_expansion(p, classify_ratio(p), m)
    from lucaszeta.theta import alpha_mp

    ratios = []
    for t in np.geomspace(1e-3, 1e-1, 7):
        with mpmath.workdps(40):
            diff = abs(theta_direct(p, t, dps=40) - alpha_mp(e, t))
        ratios.append(float(diff) / t ** (2 * m))
    assert ratios[0] <= ratios[-1] * 1.01


def test_amplitude_series_converges(fib):
    e = build_expansion(fib, classify_ratio(fib), 2)
    for table in e.c_tables:
        mags = sorted((abs(a) for _, a in table), reverse=True)
        partial = np.cumsum(mags)
        assert partial[-1] - partial[len(partial) // 2] <= 1e-10 * partial[-1]
