"""The Hurwitz-type zeta function zeta_U(s, z) = sum_{n>=0} (z + U_n)^{-s}.

The continuation splits the Laplace-Mellin integral of theta_U at t = 1 and
subtracts the small-t expansion alpha_m:

    zeta_U(s, z) = (1/Gamma(s)) int_0^inf (theta_U - alpha_m)(t) e^{-zt} t^{s-1} dt
                   + I1 - I2 + I3 + I4 - I5,

where I1..I5 are the Laplace-Mellin transforms of the pieces of alpha_m on
(0, inf), all in closed form.  The remaining integral converges for
Re(s) > -2m - c0 and is done numerically on (0, 1] and [1, inf).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

import numpy as np

from .complexmath import digamma, gamma, multinomial, pochhammer, principal_power, rgamma
from .errors import ConvergenceError, DomainError, NearPoleError, QuadratureError
from .lucas_core import (
    DEFAULT_CONFIG,
    EvalConfig,
    LucasParams,
    RatioClass,
    classify_ratio,
    l_Q_k,
    lattice_term_admissible,
    set_B,
    validate_params,
)
from .lucas_zeta import Origin, PoleSpec, Region, _group
from .quadrature import integrate_tail, integrate_unit
from .theta import ThetaExpansion, alpha_values, build_expansion, theta_values

# relative rounding noise of theta - alpha at small t, about u / log a times eps
_NOISE_LOG = math.log(1e-14)
_M_LIMIT = 12


@dataclass(frozen=True)
class HurwitzEvalReport:
    value: complex
    m_used: int
    quad_error_estimate: float
    warnings: list = field(default_factory=list)


def _check_z(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0 and z.real <= 0:
        raise DomainError(f"z={z!r} lies on the cut (-inf, 0]")
    return z


def hurwitz_direct(
    params: LucasParams, s: complex, z: complex, cfg: EvalConfig = DEFAULT_CONFIG
) -> complex:
    """z^{-s} + sum_{n>=1} (z + U_n)^{-s} with a certified geometric tail."""
    s, z = complex(s), _check_z(z)
    if s.real < cfg.sigma_min:
        raise DomainError(f"direct series needs Re(s) >= {cfg.sigma_min}")
    U = params.sequence[1:]
    w = z + U
    terms = np.exp(-s * np.log(w))
    # tail beyond N: |z + U_n| >= U_n - |z| grows at least by the ratio r,
    # and |arg(z + U_n)| decreases once U_n > |z|
    base = U - abs(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = base[1:] / base[:-1]
        r_tail = np.minimum.accumulate(ratios[::-1])[::-1]
        phase = np.exp(abs(s.imag) * np.abs(np.angle(w)))
        mags = np.where(base > 0, base ** (-s.real), np.inf) * phase
        bound = np.where(
            (r_tail > 1) & (base[:-1] > 0), mags[1:] / (1 - r_tail ** (-s.real)), np.inf
        )
    head = principal_power(z + 1 if cfg.u0_one else z, -s)
    acc = np.abs(head + np.cumsum(terms))
    ok = np.nonzero(bound <= cfg.eps_series * np.maximum(acc[:-1], 1e-300))[0]
    if ok.size == 0:
        raise ConvergenceError("direct series did not converge before U_n overflowed")
    N = int(ok[0])
    body = terms[: N + 1]
    return head + complex(math.fsum(body.real), math.fsum(body.imag))


def _decay_order(params: LucasParams, m: int) -> float:
    step = 1.0 - params.rho
    M = math.floor(2 * m / step + 1e-12)
    return min((M + 1) * step, 2 * m + 1.0)


def _predicted_error(params: LucasParams, m: int, s: complex) -> float:
    """Rough size of the order-m error in zeta_U(s, z), before any quadrature.

    Two effects compete on the u = -log t axis: the remainder of alpha_m cut
    off at u_cut, and rounding noise of theta - alpha amplified by
    e^{-Re(s) u}; both are then scaled by 1/|Gamma(s)|.
    """
    sigma = s.real
    delta = _decay_order(params, m)
    u_cut = -_NOISE_LOG / delta + 1.0
    rate = delta + sigma
    if rate <= 0:
        return math.inf
    trunc = math.exp(-rate * u_cut) / rate
    noise = 2e-16 * (2.0 + u_cut / params.log_a) * math.exp(max(0.0, -sigma) * u_cut) * u_cut
    return abs(rgamma(s)) * (trunc + noise)


def _min_order(s: complex, cfg: EvalConfig) -> int:
    m = 1
    while 2 * m + cfg.c0 - 0.5 <= -s.real:
        m += 1
    return m


def choose_m(params: LucasParams, s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> int:
    """Order m for hurwitz_continued at s, from the truncation model alone.

    Start from the smallest m with 2m + c0 - 0.5 > -Re(s) and raise it until
    the predicted error drops below eps_quad / 100 (or stops improving).
    """
    s = complex(s)
    m = _min_order(s, cfg)
    best_m, best = m, _predicted_error(params, m, s)
    for cand in range(m, max(m, _M_LIMIT) + 1):
        err = _predicted_error(params, cand, s)
        if err < best:
            best_m, best = cand, err
        if err <= cfg.eps_quad / 100:
            return cand
    return best_m


# closed terms cancel against the integral; measured loss is ~100 ulp of |closed|
_CLOSED_ROUNDING = 2e-14


def m_candidates(params: LucasParams, s: complex, z: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> list[int]:
    """Orders m to try at (s, z), best first.

    The score adds the truncation model to the rounding lost when rg * integral
    and the closed terms cancel, which grows with m when |1/Gamma(s)| is large
    or Re(z) is small.
    """
    s, z = complex(s), complex(z)
    lo = _min_order(s, cfg)
    hi = max(lo, choose_m(params, s, cfg)) + 1
    scored = []
    for m in range(lo, min(hi, max(lo, _M_LIMIT)) + 1):
        exp = cached_expansion(params, m, cfg)
        try:
            closed = abs(_closed_terms(exp, params, s, z))
        except (ZeroDivisionError, OverflowError, ValueError):
            continue
        scored.append((_predicted_error(params, m, s) + _CLOSED_ROUNDING * closed, m))
    if not scored:
        return [lo]
    return [m for _, m in sorted(scored)]


@lru_cache(maxsize=64)
def _expansion(P: float, Q: float, m: int, cfg: EvalConfig) -> ThetaExpansion:
    params = validate_params(P, Q)
    return build_expansion(params, classify_ratio(params, cfg), m, cfg)


def cached_expansion(params: LucasParams, m: int, cfg: EvalConfig = DEFAULT_CONFIG) -> ThetaExpansion:
    """Build-once expansion tables shared across evaluations (read-only afterwards)."""
    return _expansion(params.P, params.Q, m, _base_config(cfg))


def _base_config(cfg: EvalConfig) -> EvalConfig:
    # the expansion always uses U_0 = 0; u0_one is applied to the final value
    if not cfg.u0_one:
        return cfg
    return replace(cfg, u0_one=False)


def _guard_poles(exp: ThetaExpansion, s: complex, delta: float) -> None:
    def near_nonpos_int(w: complex) -> bool:
        j = min(0, round(w.real))
        return abs(w - j) < delta

    if near_nonpos_int(s):
        raise NearPoleError(f"s={s!r} is within {delta} of a pole at a non-positive integer")
    for ell, _ in exp.dtilde_list:
        if near_nonpos_int(s + ell):
            raise NearPoleError(f"s={s!r} is within {delta} of a pole at {-ell - round((s + ell).real)}")
    for e in exp.exps:
        if near_nonpos_int(s + e):
            raise NearPoleError(f"s={s!r} is within {delta} of a lattice pole {-e + round((s + e).real)!r}")


def _closed_terms(exp: ThetaExpansion, params: LucasParams, s: complex, z: complex) -> complex:
    """I1 - I2 + I3 + I4 - I5."""
    L = params.log_a
    log_z = cmath.log(z)
    z_s = principal_power(z, -s)
    i1 = exp.const_term * z_s
    i2 = (digamma(s) - log_z) * z_s / L
    rg = rgamma(s)
    i3 = 0j
    if rg != 0:
        for amp, e in zip(exp.amps, exp.exps):
            w = complex(e) + s
            i3 += complex(amp) * gamma(w) * cmath.exp(-w * log_z)
        i3 *= rg
    i4 = sum(e * pochhammer(s, ell) * cmath.exp(-(s + ell) * log_z) for ell, e in exp.e_list)
    i5 = sum(
        dt * pochhammer(s, ell) * (digamma(s + ell) - log_z) * cmath.exp(-(s + ell) * log_z)
        for ell, dt in exp.dtilde_list
    )
    return i1 - i2 + i3 + i4 - i5


def hurwitz_continued(
    params: LucasParams,
    s: complex,
    z: complex,
    m: int | None = None,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> HurwitzEvalReport:
    """zeta_U(s, z) for Re(z) > 0 and Re(s) > -2m - c0 + 1/2."""
    s, z = complex(s), complex(z)
    if not z.real > 0:
        raise DomainError("the continuation is implemented for Re(z) > 0")
    notes = []
    ratio = classify_ratio(params, cfg)
    if ratio.certainty == "heuristic":
        notes.append(f"rho classified {ratio.kind} heuristically")
    if m is not None:
        value, err = _evaluate(params, s, z, int(m), cfg)
        if err > cfg.eps_quad * max(1.0, abs(value)):
            raise QuadratureError(
                f"quadrature error {err:.2e} exceeds eps_quad={cfg.eps_quad:.1e}", complex(value), err
            )
        m_used = int(m)
    else:
        # try the best-ranked orders; the quadrature estimate decides
        best = None
        for cand in m_candidates(params, s, z, cfg)[:_AUTO_TRIES]:
            value, err = _evaluate(params, s, z, cand, cfg)
            if best is None or err < best[1]:
                best = (value, err, cand)
            if err <= cfg.eps_quad * max(1.0, abs(value)):
                break
        value, err, m_used = best
        if err > cfg.eps_quad * max(1.0, abs(value)):
            raise QuadratureError(
                f"quadrature error {err:.2e} exceeds eps_quad={cfg.eps_quad:.1e}", complex(value), err
            )
        if m_used != m_candidates(params, s, z, cfg)[0]:
            notes.append(f"fell back to m={m_used}")
    if cfg.u0_one:
        value += principal_power(z + 1, -s) - principal_power(z, -s)
    return HurwitzEvalReport(complex(value), m_used, float(err), notes)


_AUTO_TRIES = 4


def _attempt(integrator, *args, **kwargs) -> tuple[complex, float]:
    """(value, error estimate), keeping the best estimate when the budget runs out."""
    try:
        res = integrator(*args, **kwargs)
    except QuadratureError as exc:
        return exc.value, exc.error_estimate
    return res.value, res.error_estimate


def _evaluate(params: LucasParams, s: complex, z: complex, m_used: int, cfg: EvalConfig) -> tuple[complex, float]:
    """rg * (near + far integral) + closed terms at order m, with its error estimate."""
    exp = cached_expansion(params, m_used, cfg)
    if not s.real > -2 * m_used - exp.c0 + 0.5:
        raise DomainError(f"Re(s)={s.real} is outside the range of the order-{m_used} representation")
    _guard_poles(exp, s, cfg.delta_pole)

    base = _base_config(cfg)
    rg = rgamma(s)
    closed = _closed_terms(exp, params, s, z)
    # target the error of rg * integral relative to the size of the result
    tol = cfg.eps_quad * max(1.0, abs(closed)) / max(abs(rg), cfg.eps_quad)
    amp_sum = float(np.abs(exp.amps).sum())

    def near(t):
        return (theta_values(params, t, base) - alpha_values(exp, t)) * np.exp(-z * t)

    def near_noise(t):
        # theta and alpha each carry ~eps relative error; theta ~ -log t / log a
        size = 2.0 + np.abs(np.log(t)) / params.log_a + amp_sum
        return 2e-16 * size * np.exp(-z.real * t)

    def far(t):
        return near(t) * np.exp((s - 1) * np.log(t))

    def far_noise(t):
        size = 2.0 + np.abs(alpha_values(exp, t))
        return 2e-16 * size * np.exp(-z.real * t) * t ** (s.real - 1)

    # theta - alpha ~ t^delta drops to the rounding noise of theta near u = 33/delta
    u_cut = -_NOISE_LOG / exp.decay_order + 1.0
    lower = _attempt(
        integrate_unit, near, s, tol, u_max=u_cut, decay_rate=exp.decay_order + s.real, noise=near_noise
    )
    degree = max(2 * m_used, exp.M * (1.0 - params.rho)) + 1.0 + max(0.0, s.real - 1.0)
    upper = _attempt(integrate_tail, far, tol, decay_rate=z.real, noise=far_noise, degree=degree)
    integral = lower[0] + upper[0]
    err = (lower[1] + upper[1]) * abs(rg) + _CLOSED_ROUNDING * abs(closed)
    return complex(rg * integral + closed), float(err)


def dtilde_value(params: LucasParams, ell: int, k: int) -> float:
    """(-1)^{l+k} D^{-l/2} C(l, k) / (l! log a)."""
    return (-1) ** (ell + k) * params.D ** (-ell / 2) * math.comb(ell, k) / (
        math.factorial(ell) * params.log_a
    )


def hurwitz_residue_neg_int(
    params: LucasParams, ratio: RatioClass, l: int, z: complex
) -> complex:
    """Residue at s = -l: z^l / log a + sum_{j in B, j <= l} dtilde(j) (-l)_j z^{l-j}."""
    z = _check_z(z)
    out = z**l / params.log_a
    for j, k in set_B(params, max(1, (l + 1) // 2), ratio):
        if j <= l:
            out += dtilde_value(params, j, k) * pochhammer(-l, j) * z ** (l - j)
    return complex(out)


def lattice_amplitude(params: LucasParams, ratio: RatioClass, k: int, n: int) -> tuple[complex, complex]:
    """C(k) D^{n pi i / log a} and rho k + (2n + l) pi i / log a."""
    L = params.log_a
    l = l_Q_k(params, k)
    rk = ratio.rho_times(k)
    rk = float(rk) if rk is not None else params.rho * k
    C = cmath.exp(((k / 2) * (params.rho - 1) + l * math.pi * 1j / (2 * L)) * math.log(params.D)) / (
        math.factorial(k) * L
    )
    return C * cmath.exp(n * math.pi * 1j / L * math.log(params.D)), complex(rk, (2 * n + l) * math.pi / L)


def hurwitz_residue_lattice(
    params: LucasParams,
    l: int,
    k: int,
    n: int,
    z: complex,
    ratio: RatioClass | None = None,
) -> complex:
    """Residue carried by the lattice point s_{l,k,n} = -l - k(1-rho) + (2n+l_Q) pi i / log a."""
    z = _check_z(z)
    ratio = ratio or classify_ratio(params)
    if not lattice_term_admissible(params, k, n, ratio):
        raise DomainError(f"n={n} is not admissible for k={k}")
    pref, w = lattice_amplitude(params, ratio, k, n)
    prod = 1 + 0j
    for j in range(1, l + k + 1):
        prod *= w - j
    return complex(pref * (-z) ** l / math.factorial(l) * prod)


def lattice_location(params: LucasParams, ratio: RatioClass, l: int, k: int, n: int) -> complex:
    shift = ratio.lattice_shift(k)
    return complex(0.0 - l - float(shift), (2 * n + l_Q_k(params, k)) * math.pi / params.log_a)


def hurwitz_pole_map(
    params: LucasParams,
    ratio: RatioClass,
    region: Region,
    z: complex,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> list[PoleSpec]:
    """Poles of zeta_U(s, z) in the region with residues summed over coincident origins."""
    z = _check_z(z)
    L = params.log_a
    step = 1.0 - params.rho
    cands = []
    for ell in range(0, max(0, math.floor(-region.re_min + cfg.delta_pole)) + 1):
        loc = complex(-ell + 0.0, 0.0)
        if region.contains(loc):
            cands.append((loc, Origin(ell, None, None), hurwitz_residue_neg_int(params, ratio, ell, z)))
    k_hi = max(0, math.ceil(-region.re_min / step) + 1)
    for k in range(k_hi + 1):
        l_q = l_Q_k(params, k)
        n_lo = math.floor((region.im_min * L / math.pi - l_q) / 2) - 1
        n_hi = math.ceil((region.im_max * L / math.pi - l_q) / 2) + 1
        for ell in range(0, max(0, math.floor(-region.re_min - k * step + cfg.delta_pole)) + 1):
            for n in range(n_lo, n_hi + 1):
                loc = lattice_location(params, ratio, ell, k, n)
                if not region.contains(loc) or not lattice_term_admissible(params, k, n, ratio):
                    continue
                res = hurwitz_residue_lattice(params, ell, k, n, z, ratio)
                cands.append((loc, Origin(ell, k, n), res))
    out = []
    for loc, origins, res in _group(cands, cfg.delta_pole):
        scale = max(abs(c[2]) for c in cands if c[1] in origins)
        if abs(res) <= 1e-12 * scale:
            continue
        out.append(PoleSpec(loc, tuple(origins), res, ratio.certainty))
    return out


def geomsum_residue_closed(a_param: float, l: int, z: complex) -> complex:
    """(z + 1/(1-a))^l / log a for U_n = 1 + a + ... + a^{n-1}."""
    if not a_param > 1:
        raise DomainError("geometric partial sums need a > 1")
    z = _check_z(z)
    return complex((z + 1 / (1 - a_param)) ** l / math.log(a_param))


def geomsum_lattice_residue_closed(a_param: float, m: int, n: int, z: complex) -> complex:
    """Residue at -m + 2 n pi i / log a, summed over every lattice origin there."""
    if not a_param > 1:
        raise DomainError("geometric partial sums need a > 1")
    z = _check_z(z)
    L = math.log(a_param)
    w = 2j * n * math.pi / L
    prod = 1 + 0j
    for j in range(1, m + 1):
        prod *= j - w
    return complex(
        cmath.exp(w * math.log(a_param - 1)) / L * (z + 1 / (1 - a_param)) ** m * prod / math.factorial(m)
    )


def fibonacci_residue_closed(l: int, z: complex) -> complex:
    """(1/log phi) sum_j l!/((2j)!^2 (l-4j)!) 5^{-2j} z^{l-4j}."""
    z = _check_z(z)
    log_phi = math.log((1 + math.sqrt(5)) / 2)
    return complex(sum(multinomial(l, j) * 5.0 ** (-2 * j) * z ** (l - 4 * j) for j in range(l // 4 + 1)) / log_phi)


@dataclass(frozen=True)
class GeometricSuite:
    """Closed forms for U_n = a^{n-1} (the Q = 0 degenerate case)."""

    a: float
    zeta: Callable[[complex], complex]
    residue_neg_int: Callable[[int, complex], complex]
    residue_lattice: Callable[[int, int, complex], complex]

    def pole_map(self, region: Region, z: complex, delta_pole: float = 1e-6) -> list[PoleSpec]:
        L = math.log(self.a)
        cands = []
        for ell in range(0, max(0, math.floor(-region.re_min)) + 1):
            k_lo = math.floor(region.im_min * L / (2 * math.pi)) - 1
            k_hi = math.ceil(region.im_max * L / (2 * math.pi)) + 1
            for k in range(k_lo, k_hi + 1):
                loc = complex(-ell + 0.0, 2 * k * math.pi / L)
                if region.contains(loc):
                    res = self.residue_neg_int(ell, z) if k == 0 else self.residue_lattice(ell, k, z)
                    cands.append((loc, Origin(ell, 0, k), res))
        return [PoleSpec(loc, tuple(o), r) for loc, o, r in _group(cands, delta_pole) if r != 0]


def geometric_q0_suite(a_param: float) -> GeometricSuite:
    if not a_param > 1:
        raise DomainError("the geometric suite needs a > 1")
    a = float(a_param)
    L = math.log(a)

    def zeta(s):
        s = complex(s)
        x = cmath.exp(-s * L)
        if abs(1 - x) < 1e-12:
            raise NearPoleError(f"s={s!r} is a pole of 1/(1 - a^-s)")
        return 1 / (1 - x)

    def residue_neg_int(l, z):
        return complex(_check_z(z) ** l / L)

    def residue_lattice(l, k, z):
        z = _check_z(z)
        prod = 1 + 0j
        for j in range(1, l + 1):
            prod *= 2j * k * math.pi / L - j
        return complex((-z) ** l / (math.factorial(l) * L) * prod)

    return GeometricSuite(a, zeta, residue_neg_int, residue_lattice)
