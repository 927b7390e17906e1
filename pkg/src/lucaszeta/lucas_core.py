"""Admissible (P, Q), the Lucas sequences, and the index sets that control poles.

Throughout, ``a > |b| > 0`` are the roots of x^2 - P x + Q, ``D = (a - b)^2``
and ``rho = log|b| / log a``.  Rationality of rho cannot be decided in floating
point, so :class:`RatioClass` records whether a rational value was derived
exactly (|Q| = 1 or |b| = 1) or guessed from continued-fraction convergents.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath
import numpy as np

from .errors import ParameterError, SequenceOverflowError

_FLOAT_MAX = np.finfo(float).max


@dataclass(frozen=True)
class EvalConfig:
    """Tolerances, truncation bounds and quadrature knobs."""

    eps_series: float = 1e-14
    eps_quad: float = 1e-10
    eps_rat: float = 1e-10
    q_max: int = 64
    k_max: int = 200
    n_max: int = 200
    delta_pole: float = 1e-6
    m_default: int = 2
    c0: float = 0.5
    sigma_min: float = 0.05
    u0_one: bool = False

    def __post_init__(self):
        for name in ("eps_series", "eps_quad", "eps_rat", "delta_pole", "sigma_min"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("q_max", "k_max", "n_max", "m_default"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if not 0.0 < self.c0 < 1.0:
            raise ValueError("c0 must lie in (0, 1)")


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class LucasParams:
    P: float
    Q: float
    a: float
    b: float
    D: float
    log_a: float
    log_abs_b: float
    rho: float

    @property
    def sqrt_D(self) -> float:
        return self.a - self.b

    @cached_property
    def sequence(self) -> np.ndarray:
        """U_0, U_1, ... up to the last finite value (n_overflow)."""
        return _run_recurrence(self.P, self.Q, 0.0, 1.0)

    @cached_property
    def companion(self) -> np.ndarray:
        return _run_recurrence(self.P, self.Q, 2.0, self.P)

    @property
    def n_overflow(self) -> int:
        return len(self.sequence) - 1

    def mp(self, dps: int) -> "HighPrecisionRoots":
        """a, b, D, log a, log|b| and rho recomputed at ``dps`` digits."""
        return _high_precision_roots(self.P, self.Q, dps)


@dataclass(frozen=True)
class HighPrecisionRoots:
    dps: int
    a: mpmath.mpf
    b: mpmath.mpf
    D: mpmath.mpf
    log_a: mpmath.mpf
    log_abs_b: mpmath.mpf
    rho: mpmath.mpf


def _high_precision_roots(P: float, Q: float, dps: int) -> HighPrecisionRoots:
    with mpmath.workdps(dps):
        P_, Q_ = mpmath.mpf(P), mpmath.mpf(Q)
        D = P_ * P_ - 4 * Q_
        a = (P_ + mpmath.sqrt(D)) / 2
        b = Q_ / a
        log_a = mpmath.log(a)
        log_abs_b = mpmath.log(abs(b))
        return HighPrecisionRoots(dps, a, b, D, log_a, log_abs_b, log_abs_b / log_a)


def _run_recurrence(P: float, Q: float, x0: float, x1: float) -> np.ndarray:
    values = [x0, x1]
    with np.errstate(over="ignore", invalid="ignore"):
        while True:
            nxt = P * values[-1] - Q * values[-2]
            if not math.isfinite(nxt) or abs(nxt) > _FLOAT_MAX:
                break
            values.append(nxt)
    return np.array(values)


@dataclass(frozen=True)
class RatioClass:
    """Classification of rho = log|b| / log a.

    For ``kind == "rational"``, rho = -p/q with q > 0 and gcd(p, q) = 1
    (p = 0 when |b| = 1).  p is negative when rho > 0.
    """

    kind: str
    p: int = 0
    q: int = 1
    certainty: str = "heuristic"
    rho: float = field(default=0.0, compare=False)

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    @property
    def value(self) -> Fraction | None:
        return Fraction(-self.p, self.q) if self.is_rational else None

    def rho_times(self, k: int) -> Fraction | None:
        """rho*k as an exact fraction, or None when rho is taken irrational."""
        if k == 0:
            return Fraction(0)
        if not self.is_rational:
            return None
        return Fraction(-self.p * k, self.q)

    def rho_k_nonpos_int(self, k: int) -> bool:
        """Whether rho*k is a non-positive integer."""
        v = self.rho_times(k)
        return v is not None and v.denominator == 1 and v <= 0

    def lattice_shift(self, k: int) -> Fraction | float:
        """k (1 - rho), exact when rho is rational."""
        v = self.rho_times(k)
        if v is None:
            return k * (1.0 - self.rho)
        return k - v


def validate_params(P: float, Q: float) -> LucasParams:
    """Check P > 0, Q != 0 and the Q-versus-(P - 1) clause; derive the roots."""
    P, Q = float(P), float(Q)
    if not (math.isfinite(P) and math.isfinite(Q)):
        raise ParameterError("finite", "P and Q must be finite")
    if not P > 0:
        raise ParameterError("P > 0", f"P > 0 is required (got P={P})")
    if Q == 0:
        raise ParameterError("Q != 0", "Q != 0 is required (Q = 0 is the geometric case)")
    if P > 2 and not Q <= P - 1:
        raise ParameterError("Q <= P-1", f"for P > 2 the condition Q <= P-1 is required (P={P}, Q={Q})")
    if P <= 2 and not Q < P - 1:
        raise ParameterError("Q < P-1", f"for 0 < P <= 2 the condition Q < P-1 is required (P={P}, Q={Q})")
    D = P * P - 4 * Q
    a = (P + math.sqrt(D)) / 2
    b = Q / a
    log_a = math.log(a)
    log_abs_b = math.log(abs(b))
    return LucasParams(P, Q, a, b, D, log_a, log_abs_b, log_abs_b / log_a)


def u_n(params: LucasParams, n: int) -> float:
    """U_n by the recurrence, with U_0 = 0 and U_1 = 1."""
    if n < 0:
        raise ValueError("n must be non-negative")
    seq = params.sequence
    if n >= len(seq):
        raise SequenceOverflowError(f"U_{n} exceeds the float range (n_overflow = {len(seq) - 1})")
    return float(seq[n])


def v_n(params: LucasParams, n: int) -> float:
    """V_n by the recurrence, with V_0 = 2 and V_1 = P."""
    if n < 0:
        raise ValueError("n must be non-negative")
    seq = params.companion
    if n >= len(seq):
        raise SequenceOverflowError(f"V_{n} exceeds the float range")
    return float(seq[n])


def classify_ratio(params: LucasParams, cfg: EvalConfig = DEFAULT_CONFIG) -> RatioClass:
    if abs(params.Q) == 1.0:
        return RatioClass("rational", 1, 1, "exact", params.rho)
    if abs(abs(params.b) - 1.0) <= 1e-14:
        return RatioClass("rational", 0, 1, "exact", params.rho)
    guess = Fraction(params.rho).limit_denominator(cfg.q_max)
    if abs(params.rho - float(guess)) <= cfg.eps_rat:
        return RatioClass("rational", -guess.numerator, guess.denominator, "heuristic", params.rho)
    return RatioClass("presumed_irrational", certainty="heuristic", rho=params.rho)


def l_Q_k(params: LucasParams, k: int) -> int:
    return k if params.Q < 0 else 0


def in_set_A(params: LucasParams, k: int, n: int, ratio: RatioClass) -> bool:
    """Membership of n in A_{a,b}(k)."""
    if not ratio.rho_k_nonpos_int(k):
        return True
    if params.Q < 0 and k % 2 == 1:
        return True
    if params.Q > 0:
        return n != 0
    return 2 * n != -k


def lattice_term_admissible(params: LucasParams, k: int, n: int, ratio: RatioClass) -> bool:
    """n in A_{a,b}(k), and s_{k,n} is not a negative integer with a vanishing binomial.

    The second condition only bites when rho*k is a positive integer: then
    s_{k,n} = -k(1 - rho) is a removable point of zeta_U and the residue of
    Gamma there is already carried by the zeta_U(-l) coefficient.
    """
    if not in_set_A(params, k, n, ratio):
        return False
    rk = ratio.rho_times(k)
    if rk is not None and rk.denominator == 1 and rk > 0:
        return 2 * n + l_Q_k(params, k) != 0
    return True


def set_B(params: LucasParams, m: int, ratio: RatioClass) -> list[tuple[int, int]]:
    """B(m,a,b) as sorted (l, j) pairs: l = j (1 - rho) <= 2m with rho*j in Z<=0."""
    out = []
    for j in range(1, 2 * m + 1):
        if not ratio.rho_k_nonpos_int(j):
            continue
        if params.Q < 0 and j % 2:
            continue
        ell = ratio.lattice_shift(j)
        if ell.denominator == 1 and 1 <= ell <= 2 * m:
            out.append((int(ell), j))
    return sorted(out)


PRESETS = {
    "fibonacci": (1.0, -1.0),
    "pell": (2.0, -1.0),
    "jacobsthal": (1.0, -2.0),
}


def geomsum_params(a: float) -> LucasParams:
    """Partial sums 1 + a + ... + a^{n-1}: the Lucas sequence with (P, Q) = (a + 1, a)."""
    return validate_params(a + 1.0, a)
