"""The Lucas zeta function zeta_U(s) = sum_{n>=1} U_n^{-s}.

Two evaluation routes: the Dirichlet series itself (Re s >= sigma_min) and the
binomial continuation

    zeta_U(s) = D^{s/2} sum_k C(-s,k) (-1)^k x_k / (1 - x_k),  x_k = a^{-s-k} b^k,

valid on the whole plane away from the lattice s_{k,n}.  Pole enumeration,
residues and the Laurent data at s = 0 and at negative-integer poles live here
as well.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import mpmath
import numpy as np

from .complexmath import binom_general, harmonic
from .errors import (
    ConvergenceError,
    DomainError,
    HeuristicRatioWarning,
    NearPoleError,
)
from .lucas_core import DEFAULT_CONFIG, EvalConfig, LucasParams, RatioClass, classify_ratio, l_Q_k


class Origin(NamedTuple):
    """Index triple a pole comes from; unused slots are None."""

    l: int | None
    k: int | None
    n: int | None

    def label(self) -> str:
        return ",".join("-" if v is None else str(v) for v in self)


@dataclass(frozen=True)
class PoleSpec:
    location: complex
    origins: tuple[Origin, ...]
    residue: complex
    certainty: str = "exact"


@dataclass(frozen=True)
class Region:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min <= self.re_max and self.im_min <= self.im_max):
            raise DomainError("empty or inverted region")
        if not all(map(math.isfinite, (self.re_min, self.re_max, self.im_min, self.im_max))):
            raise DomainError("region must be bounded")

    def contains(self, s: complex) -> bool:
        return self.re_min <= s.real <= self.re_max and self.im_min <= s.imag <= self.im_max


def zeta_direct(params: LucasParams, s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Partial sums of the Dirichlet series with a geometric tail bound."""
    s = complex(s)
    if s.real < cfg.sigma_min:
        raise DomainError(f"direct series needs Re(s) >= {cfg.sigma_min}")
    U = params.sequence[1:]
    terms = np.exp(-s * np.log(U))
    # for n >= N: sum_{j>N} U_j^{-sigma} <= U_{N+1}^{-sigma} / (1 - r^{-sigma}),
    # r = min_{j>N} U_{j+1}/U_j
    ratios = U[1:] / U[:-1]
    r_tail = np.minimum.accumulate(ratios[::-1])[::-1]
    mags = U ** (-s.real)
    acc = np.abs(np.cumsum(terms))
    with np.errstate(divide="ignore"):
        bound = np.where(r_tail > 1, mags[1:] / (1 - r_tail ** (-s.real)), np.inf)
    ok = np.nonzero(bound <= cfg.eps_series * np.maximum(acc[:-1], 1e-300))[0]
    if ok.size == 0:
        raise ConvergenceError("direct series did not converge before U_n overflowed")
    N = int(ok[0])
    return complex(math.fsum(terms[: N + 1].real) + 1j * math.fsum(terms[: N + 1].imag))


def _log_x(params: LucasParams, s: complex, k: int) -> complex:
    """log of a^{-s-k} b^k with the imaginary part reduced to (-pi, pi]."""
    w = -(s + k) * params.log_a + k * params.log_abs_b
    if params.b < 0 and k % 2:
        w += 1j * math.pi
    n = round(w.imag / (2 * math.pi))
    return complex(w.real, w.imag - 2 * math.pi * n)


def _removable_at(s_star: complex, k: int) -> bool:
    """-s_star in {0, ..., k-1}: the binomial kills the lattice point."""
    if abs(s_star.imag) > 1e-9:
        return False
    top = -s_star.real
    j = round(top)
    return abs(top - j) <= 1e-9 and 0 <= j <= k - 1


def zeta_continued(params: LucasParams, s: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Meromorphic continuation of zeta_U by the binomial expansion."""
    s = complex(s)
    L = params.log_a
    ratio = abs(params.b) / params.a
    acc = 0j
    coef = 1 + 0j  # C(-s, k) (-1)^k = (s)_k / k!
    small_factor_at = None
    for k in range(cfg.k_max + 1):
        if k > 0:
            f = s + (k - 1)
            if f == 0:
                small_factor_at = k - 1
            else:
                coef *= f
            coef /= k
        w = _log_x(params, s, k)
        s_star = s + w / L
        structural_zero = small_factor_at is not None
        if abs(w) < cfg.delta_pole * L and not _removable_at(s_star, k):
            raise NearPoleError(f"s={s!r} is within {cfg.delta_pole} of the pole {s_star!r}")
        x = cmath.exp(w)
        if structural_zero:
            # s is exactly a non-positive integer -j with j < k
            if abs(w) < cfg.delta_pole * L:
                term = coef * x / L
            else:
                term = 0j
        else:
            term = coef * x / (-math.expm1(w.real) if w.imag == 0 else -cmath_expm1(w))
        acc += term
        if k >= 1 and not structural_zero:
            r = abs(s + k) / (k + 1) * ratio
            # r == 0 means s = -k; later terms are structural zeros except a
            # possible lattice limit, so leave that case to the branch below
            if 0 < r < 1 and abs(term) * r / (1 - r) <= cfg.eps_series * max(abs(acc), 1e-300):
                break
        if structural_zero and k >= small_factor_at + 1 and k * (1 - params.rho) > -s.real + 2:
            break
    else:
        raise ConvergenceError(f"binomial continuation did not converge within k_max={cfg.k_max}")
    return cmath.exp(0.5 * s * math.log(params.D)) * acc


def cmath_expm1(w: complex) -> complex:
    """exp(w) - 1 without cancellation for small |w|."""
    if abs(w) > 0.5:
        return cmath.exp(w) - 1
    # expm1(x+iy) = expm1(x) cos y + i e^x sin y + (cos y - 1)
    x, y = w.real, w.imag
    return complex(math.expm1(x) * math.cos(y) - 2 * math.sin(y / 2) ** 2, math.exp(x) * math.sin(y))


def lattice_point(params: LucasParams, ratio: RatioClass, k: int, n: int) -> complex:
    """s_{k,n} = -k(1 - rho) + (2n + l_{Q,k}) pi i / log a."""
    re = ratio.lattice_shift(k)
    return complex(0.0 - float(re), (2 * n + l_Q_k(params, k)) * math.pi / params.log_a)


def _binom_top(params: LucasParams, ratio: RatioClass, k: int, n: int):
    """-s_{k,n}, as an exact integer whenever the point is a real integer."""
    shift = ratio.lattice_shift(k)
    if 2 * n + l_Q_k(params, k) == 0 and isinstance(shift, Fraction) and shift.denominator == 1:
        return int(shift)
    return -lattice_point(params, ratio, k, n)


def zeta_residue(params: LucasParams, ratio: RatioClass, k: int, n: int) -> complex:
    """D^{s/2} C(-s, k) (-1)^k / log a at s = s_{k,n} (zero when filtered)."""
    s = lattice_point(params, ratio, k, n)
    b = binom_general(_binom_top(params, ratio, k, n), k)
    if b == 0:
        return 0j
    return complex(cmath.exp(0.5 * s * math.log(params.D)) * complex(b) * (-1) ** k / params.log_a)


def _group(candidates, tol):
    """Merge (location, origin, residue) triples closer than tol."""
    groups: list[list] = []
    for loc, origin, res in sorted(candidates, key=lambda c: (c[0].real, c[0].imag)):
        for g in groups:
            if abs(g[0] - loc) <= tol:
                g[1].append(origin)
                g[2] += res
                break
        else:
            groups.append([loc, [origin], res])
    return groups


def zeta_poles(
    params: LucasParams,
    region: Region,
    cfg: EvalConfig = DEFAULT_CONFIG,
    ratio: RatioClass | None = None,
) -> list[PoleSpec]:
    """All poles of zeta_U in the region, with residues."""
    ratio = ratio or classify_ratio(params, cfg)
    L = params.log_a
    step = 1.0 - params.rho
    k_hi = max(0, math.ceil(-region.re_min / step) + 1)
    cands = []
    for k in range(k_hi + 1):
        re = -float(ratio.lattice_shift(k))
        if not region.re_min - cfg.delta_pole <= re <= region.re_max + cfg.delta_pole:
            continue
        l = l_Q_k(params, k)
        n_lo = math.floor((region.im_min * L / math.pi - l) / 2) - 1
        n_hi = math.ceil((region.im_max * L / math.pi - l) / 2) + 1
        for n in range(n_lo, n_hi + 1):
            loc = lattice_point(params, ratio, k, n)
            if not region.contains(loc):
                continue
            res = zeta_residue(params, ratio, k, n)
            if res != 0:
                cands.append((loc, Origin(None, k, n), res))
    out = []
    for loc, origins, res in _group(cands, cfg.delta_pole):
        if res != 0:
            out.append(PoleSpec(loc, tuple(origins), res, _certainty(ratio, origins)))
    return out


def _certainty(ratio: RatioClass, origins) -> str:
    # the location and residue of a non-real lattice point never depend on
    # rationality; only integer coincidences do
    return ratio.certainty


def laurent_at_zero(params: LucasParams) -> tuple[float, float]:
    """(residue, constant term) of zeta_U at s = 0."""
    L = params.log_a
    return 1.0 / L, 0.5 * (math.log(params.D) / L - 1.0)


_CASE_LABELS = {1.0: "i", -1.0: "ii"}


def classify_neg_int_poles(
    params: LucasParams, ratio: RatioClass, l_max: int
) -> list[tuple[int, int, str]]:
    """Negative-integer poles -l (l <= l_max) with their lattice index k and case label."""
    if ratio.certainty == "heuristic":
        warnings.warn(
            f"classification of rho={params.rho!r} is heuristic ({ratio.kind})",
            HeuristicRatioWarning,
            stacklevel=2,
        )
    if not ratio.is_rational or ratio.p < 0:
        return []
    case = _CASE_LABELS.get(params.Q, "iii" if params.Q > 0 else "iv")
    # rho*k integer needs q | k; Q < 0 additionally needs k even
    step = ratio.q if params.Q > 0 else ratio.q * 2 // math.gcd(2, ratio.q)
    out = []
    k = step
    while True:
        ell = ratio.lattice_shift(k)
        if ell > l_max:
            break
        out.append((int(ell), k, case))
        k += step
    return out


def constant_term_at_neg_pole(
    params: LucasParams, l: int, k: int, cfg: EvalConfig = DEFAULT_CONFIG
) -> float:
    """Constant Laurent coefficient of zeta_U at the double-counted pole s = -l."""
    a, b, L = params.a, params.b, params.log_a
    scale = params.D ** (-l / 2)
    main = math.comb(l, k) * (-1) ** k * (
        (math.log(params.D) - L) / (2 * L) + (harmonic(l - k) - harmonic(l)) / L
    )
    rest = []
    for j in range(l + 1):
        if j == k:
            continue
        x = a ** (l - j) * b**j
        if abs(1 - x) < cfg.delta_pole:
            raise DomainError(f"a^{l-j} b^{j} = 1 makes the constant term singular at (l={l}, k={k})")
        rest.append(math.comb(l, j) * (-1) ** j * x / (1 - x))
    return scale * (main + math.fsum(rest))


def zeta_at_negative_integer(params: LucasParams, l: int, dps: int = 30) -> mpmath.mpf:
    """zeta_U(-l) at a non-pole negative integer, to ``dps`` digits.

    The binomial sum terminates at k = l, except for one possible removable
    term k > l where a^{l-k} b^k = 1; that term contributes its limit
    D^{-l/2} prod_{j<k, j != l}(j - l) / (k! log a).
    """
    hp = params.mp(dps)
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for k in range(l + 1):
            x = hp.a ** (l - k) * hp.b**k
            if abs(1 - x) < mpmath.mpf(10) ** (-dps // 2):
                raise NearPoleError(f"-{l} is a pole of zeta_U")
            total += mpmath.binomial(l, k) * (-1) ** k * x / (1 - x)
        # removable point: k (1 - rho) = l with k > l only if rho > 0
        if hp.rho > 0:
            k = int(mpmath.nint(l / (1 - hp.rho)))
            if k > l and abs(hp.a ** (l - k) * hp.b**k - 1) < mpmath.mpf(10) ** (-dps // 2):
                prod = mpmath.mpf(1)
                for j in range(k):
                    if j != l:
                        prod *= j - l
                total += prod / (mpmath.factorial(k) * hp.log_a)
        return hp.D ** (-mpmath.mpf(l) / 2) * total
