"""The theta series theta_U(t) = sum_{n>=0} exp(-U_n t) and its small-t expansion.

The expansion alpha_m(t) collects every term of theta_U up to order t^{2m}:

    alpha_m(t) = const - log t / log a
                 + sum_{k<=M} sum_n amp(k, n) t^{k(1-rho) - (2n+l) pi i / log a}
                 + sum_l e(l) t^l - sum_{l in B} dtilde(l) t^l log t

Coefficient tables are built once at mpmath precision and kept in two forms:
mpmath numbers for high-precision order checks and complex128 arrays for the
vectorised evaluation that the Hurwitz integrals need.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .errors import ConvergenceError, DomainError
from .lucas_core import (
    DEFAULT_CONFIG,
    EvalConfig,
    LucasParams,
    RatioClass,
    classify_ratio,
    l_Q_k,
    lattice_term_admissible,
    set_B,
)
from .lucas_zeta import zeta_at_negative_integer

_MP_DPS = 40
_TAIL_EXP = 40.0  # e^{-40} ~ 4e-18, below double rounding of theta >= 1


def _tail_cutoff(params: LucasParams, t_min: float) -> int:
    """Number of sequence terms after which exp(-U_n t) is negligible for all t >= t_min."""
    U = params.sequence
    with np.errstate(over="ignore"):
        idx = np.nonzero(U[1:] * t_min > _TAIL_EXP)[0]
    if idx.size == 0:
        raise ConvergenceError(f"t={t_min!r} too small: U_n overflows before exp(-U_n t) decays")
    return int(idx[0]) + 1


def _tail_bound(params: LucasParams, N: int, t: float) -> float:
    """Bound on sum_{n>N} exp(-U_n t) from U_{j+1} >= r U_j for j > N."""
    U = params.sequence
    if N + 2 >= len(U):
        return math.inf
    r = float(np.min(U[N + 2 :] / U[N + 1 : -1])) if N + 2 < len(U) - 1 else float(U[-1] / U[-2])
    x = U[N + 1] * t
    if r <= 1:
        return math.inf
    return math.exp(-x) / -math.expm1(-x * (r - 1))


def theta_direct(
    params: LucasParams, t: float, cfg: EvalConfig = DEFAULT_CONFIG, dps: int | None = None
):
    """theta_U(t) by direct summation.

    With ``dps`` the sum is carried out in mpmath at that precision and an
    ``mpf`` is returned; otherwise a float.
    """
    if not t > 0:
        raise DomainError("theta needs t > 0")
    if dps is not None:
        return _theta_mp(params, t, cfg, dps)
    t = float(t)
    N = _tail_cutoff(params, t)
    while _tail_bound(params, N, t) > cfg.eps_series:
        N += 1
        if N >= params.n_overflow:
            raise ConvergenceError("theta tail bound not met before overflow")
    U = params.sequence[1 : N + 1]
    val = 1.0 + math.fsum(np.exp(-U * t))
    if cfg.u0_one:
        val += math.expm1(-t)
    return val


def theta_values(params: LucasParams, t: np.ndarray, cfg: EvalConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Vectorised theta_U on an array of positive t (float precision)."""
    t = np.asarray(t, dtype=float)
    N = _tail_cutoff(params, float(t.min()))
    U = params.sequence[1 : N + 1]
    val = 1.0 + np.exp(-np.outer(t, U)).sum(axis=1)
    if cfg.u0_one:
        val += np.expm1(-t)
    return val


def _theta_mp(params: LucasParams, t, cfg: EvalConfig, dps: int):
    with mpmath.workdps(dps):
        t = mpmath.mpf(t)
        P, Q = mpmath.mpf(params.P), mpmath.mpf(params.Q)
        tiny = mpmath.mpf(10) ** (-dps - 5)
        prev, cur = mpmath.mpf(0), mpmath.mpf(1)
        total = mpmath.mpf(1)
        while True:
            term = mpmath.exp(-cur * t)
            total += term
            if term < tiny and cur > prev:
                break
            prev, cur = cur, P * cur - Q * prev
        if cfg.u0_one:
            total += mpmath.expm1(-t)
        return total


@dataclass(frozen=True, eq=False)
class ThetaExpansion:
    """Coefficient tables of alpha_m for one (P, Q) and order m."""

    m: int
    M: int
    c0: float
    decay_order: float
    const_term: float
    log_coeff: float
    c_tables: tuple
    d_list: tuple
    dtilde_list: tuple
    e_list: tuple
    B_set: tuple
    ratio: RatioClass
    dps: int
    u0_one: bool
    amps: np.ndarray = field(repr=False)
    exps: np.ndarray = field(repr=False)
    mp_tables: dict = field(repr=False)


def _amplitude_table(params: LucasParams, hp, ratio: RatioClass, k: int, cfg: EvalConfig, tol):
    """(n, amp) for the c-series at index k, n ordered by distance from the real axis."""
    l = l_Q_k(params, k)
    L = hp.log_a
    with mpmath.workdps(hp.dps):
        pi_i_L = mpmath.pi * 1j / L
        C = hp.D ** (mpmath.mpf(k) / 2 * (hp.rho - 1) + l * pi_i_L / 2) / (mpmath.factorial(k) * L)
        n0 = -(l // 2)
        rows = []
        for direction in (1, -1):
            n = n0 if direction == 1 else n0 - 1
            small = 0
            while abs(n - n0) <= cfg.n_max and small < 2:
                if lattice_term_admissible(params, k, n, ratio):
                    y = (2 * n + l) * pi_i_L
                    amp = C * hp.D ** (n * pi_i_L) * mpmath.gamma(hp.rho * k + y)
                    rows.append((n, amp))
                    small = small + 1 if abs(amp) < tol else 0
                n += direction
        rows.sort(key=lambda r: abs(2 * r[0] + l))
        return rows


def _dtilde(hp, ell: int, k: int):
    return (
        (-1) ** (ell + k)
        * hp.D ** (-mpmath.mpf(ell) / 2)
        * mpmath.binomial(ell, k)
        / (mpmath.factorial(ell) * hp.log_a)
    )


def _d_coeff(hp, ell: int, k: int):
    L = hp.log_a
    rest = mpmath.mpf(0)
    for j in range(ell + 1):
        if j == k:
            continue
        x = hp.a ** (ell - j) * hp.b**j
        if abs(1 - x) < mpmath.mpf(10) ** (-hp.dps // 2):
            raise DomainError(f"a^{ell-j} b^{j} = 1 collides with the pole at -{ell}")
        rest += mpmath.binomial(ell, j) * (-1) ** j * x / (1 - x)
    main = (
        (-1) ** k
        / (2 * L)
        * mpmath.binomial(ell, k)
        * (mpmath.log(hp.D) - L + 2 * (mpmath.harmonic(ell - k) - mpmath.euler))
    )
    return (-1) ** ell / (mpmath.factorial(ell) * hp.D ** (mpmath.mpf(ell) / 2)) * (main + rest)


def _choose_c0(params: LucasParams, ratio: RatioClass, m: int, gap: float, cfg: EvalConfig) -> float:
    """cfg.c0, capped at half the gap to the first omitted exponent, kept off pole real parts."""
    c0 = min(cfg.c0, 0.5 * gap)
    step = 1.0 - params.rho
    reals = {float(l + k * step) for l in range(2 * m + 2) for k in range(int((2 * m + 2) / step) + 2)}
    for _ in range(10):
        if all(abs(2 * m + c0 - r) > cfg.delta_pole for r in reals):
            break
        c0 = c0 - 0.1 if c0 > 0.15 else c0 + 0.1
    return c0


def build_expansion(
    params: LucasParams,
    ratio: RatioClass | None = None,
    m: int | None = None,
    cfg: EvalConfig = DEFAULT_CONFIG,
    dps: int = _MP_DPS,
) -> ThetaExpansion:
    """Precompute every coefficient of alpha_m."""
    ratio = ratio or classify_ratio(params, cfg)
    m = cfg.m_default if m is None else int(m)
    if m < 1:
        raise DomainError("expansion order m must be >= 1")
    hp = params.mp(dps)
    step = 1.0 - params.rho
    M = math.floor(2 * m / step + 1e-12)
    tol = mpmath.mpf(10) ** (-dps + 5)

    mp_c, c_tables, amps, exps = [], [], [], []
    with mpmath.workdps(dps):
        L = hp.log_a
        for k in range(M + 1):
            rows = _amplitude_table(params, hp, ratio, k, cfg, tol)
            shift = ratio.lattice_shift(k)
            l = l_Q_k(params, k)
            mp_rows = []
            for n, amp in rows:
                if isinstance(shift, Fraction):
                    e = mpmath.mpf(shift.numerator) / shift.denominator
                else:
                    e = k * (1 - hp.rho)
                e = e - (2 * n + l) * mpmath.pi * 1j / L
                mp_rows.append((n, amp, e))
                amps.append(complex(amp))
                exps.append(complex(e))
            mp_c.append(mp_rows)
            c_tables.append(tuple((n, complex(amp)) for n, amp, _ in mp_rows))

        B = set_B(params, m, ratio)
        Bmap = dict(B)
        d_mp, dt_mp, e_mp = {}, {}, {}
        for ell, k in B:
            d_mp[ell] = _d_coeff(hp, ell, k)
            dt_mp[ell] = _dtilde(hp, ell, k)
        for ell in range(1, 2 * m + 1):
            if ell in Bmap:
                e_mp[ell] = d_mp[ell]
            else:
                e_mp[ell] = (-1) ** ell * zeta_at_negative_integer(params, ell, dps) / mpmath.factorial(ell)
        const = (mpmath.log(hp.D) + L - 2 * mpmath.euler) / (2 * L)

    decay = min((M + 1) * step, 2 * m + 1.0)
    c0 = _choose_c0(params, ratio, m, decay - 2 * m, cfg)
    return ThetaExpansion(
        m=m,
        M=M,
        c0=c0,
        decay_order=decay,
        const_term=float(const),
        log_coeff=1.0 / params.log_a,
        c_tables=tuple(c_tables),
        d_list=tuple((l, float(d_mp[l])) for l, _ in B),
        dtilde_list=tuple((l, float(dt_mp[l])) for l, _ in B),
        e_list=tuple((l, float(e_mp[l])) for l in range(1, 2 * m + 1)),
        B_set=tuple(B),
        ratio=ratio,
        dps=dps,
        u0_one=cfg.u0_one,
        amps=np.array(amps, dtype=complex),
        exps=np.array(exps, dtype=complex),
        mp_tables={"hp": hp, "c": mp_c, "e": e_mp, "dtilde": dt_mp, "const": const},
    )


def alpha_values(exp: ThetaExpansion, t: np.ndarray) -> np.ndarray:
    """alpha_m on an array of t > 0 (complex, no domain restriction)."""
    t = np.asarray(t, dtype=float)
    logt = np.log(t)
    val = exp.const_term - exp.log_coeff * logt + 0j
    val = val + np.exp(np.outer(logt, exp.exps)) @ exp.amps
    for ell, e in exp.e_list:
        val = val + e * t**ell
    for ell, dt in exp.dtilde_list:
        val = val - dt * t**ell * logt
    return val


def alpha_mp(exp: ThetaExpansion, t):
    """alpha_m(t) at the table precision (mpmath complex)."""
    tabs = exp.mp_tables
    with mpmath.workdps(exp.dps):
        t = mpmath.mpf(t)
        logt = mpmath.log(t)
        val = tabs["const"] - logt / tabs["hp"].log_a
        for rows in tabs["c"]:
            for _, amp, e in rows:
                val += amp * mpmath.exp(e * logt)
        for ell, e in tabs["e"].items():
            val += e * t**ell
        for ell, dt in tabs["dtilde"].items():
            val -= dt * t**ell * logt
        return mpmath.mpc(val)


def eval_expansion(exp: ThetaExpansion, params: LucasParams, t: float) -> float:
    """alpha_m(t) for 0 < t <= 1; the imaginary part must cancel."""
    if not 0 < t <= 1:
        raise DomainError("the expansion is evaluated on 0 < t <= 1")
    val = complex(alpha_values(exp, np.array([t]))[0])
    if abs(val.imag) > 1e-10 * (1 + abs(val.real)):
        raise ConvergenceError(f"alpha has imaginary part {val.imag:.3e}; conjugate terms did not pair")
    return val.real


def expansion_error_order(
    params: LucasParams,
    m: int,
    t_grid,
    cfg: EvalConfig = DEFAULT_CONFIG,
    dps: int = _MP_DPS,
) -> float:
    """Least-squares slope of log|theta - alpha_m| against log t (mpmath precision)."""
    t_grid = [float(t) for t in t_grid]
    if len(t_grid) < 5:
        raise DomainError("need at least 5 grid points")
    if not all(0 < t <= 0.1 for t in t_grid):
        raise DomainError("grid must lie in (0, 0.1]")
    exp = build_expansion(params, classify_ratio(params, cfg), m, cfg, dps)
    logs, errs = [], []
    for t in t_grid:
        with mpmath.workdps(dps):
            diff = abs(theta_direct(params, t, cfg, dps=dps) - alpha_mp(exp, t))
        if diff == 0 or not mpmath.isfinite(diff) or diff < mpmath.mpf(10) ** (-dps + 8):
            raise ConvergenceError(f"theta - alpha underflows at t={t!r}; fit is degenerate")
        logs.append(math.log(t))
        errs.append(float(mpmath.log(diff)))
    slope, _ = np.polyfit(logs, errs, 1)
    return float(slope)
