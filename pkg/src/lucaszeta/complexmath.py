"""Complex special functions and combinatorial helpers.

Gamma uses the g=7, n=9 Lanczos approximation in log form for |s| < 10 and
the Stirling series (phase accumulated with fsum) beyond, with the
reflection formula for Re(s) < 1/2.  Digamma raises the argument with
psi(s) = psi(s + 1) - 1/s until Re(s) >= 10 and then uses the asymptotic
series.  All functions are pure and operate on Python ``complex``.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .errors import DomainError, PoleError

EULER_GAMMA = 0.57721566490153286060651209
EPS_POLE = 1e-8

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

_STIRLING_RADIUS = 10.0
# B_{2k} / (2k (2k - 1)) for the log-gamma Stirling series
_STIRLING_COEF = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

# B_{2k} / (2k) for the digamma asymptotic series
_DIGAMMA_ASYMP = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def _check_finite(value: complex, what: str) -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ArithmeticError(f"{what} produced a non-finite value: {value!r}")
    return value


def _pole_distance(s: complex) -> float:
    """Distance from s to the nearest non-positive integer."""
    n = min(0.0, float(round(s.real)))
    return abs(s - n)


def principal_power(base: complex, exponent: complex) -> complex:
    """base**exponent on the principal branch of the logarithm.

    Raises DomainError on the closed negative real axis (including 0).
    """
    base = complex(base)
    exponent = complex(exponent)
    if base.imag == 0.0 and base.real <= 0.0:
        raise DomainError(f"principal power undefined for base {base!r} on (-inf, 0]")
    if base == 1:
        return 1 + 0j
    return _check_finite(cmath.exp(exponent * cmath.log(base)), "principal_power")


def _log_sin_pi(s: complex) -> complex:
    """A logarithm of sin(pi s), stable for large |Im s| (branch unspecified)."""
    y = s.imag
    if abs(y) < 5.0:
        return cmath.log(cmath.sin(math.pi * s))
    if y > 0:
        # sin(pi s) = e^{-i pi s} (e^{2 i pi s} - 1) / (2i)
        return -1j * math.pi * s + cmath.log((cmath.exp(2j * math.pi * s) - 1) / 2j)
    return 1j * math.pi * s + cmath.log((1 - cmath.exp(-2j * math.pi * s)) / 2j)


def _log_gamma_right(s: complex) -> complex:
    # valid for Re(s) >= 1/2
    z = s - 1
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _log_gamma_stirling(s: complex) -> complex:
    # |s| >= _STIRLING_RADIUS, Re(s) >= 1/2; real and imaginary parts summed
    # with fsum to keep the large leading terms from losing the phase
    x, y = s.real, s.imag
    log_abs = math.log(abs(s))
    arg = math.atan2(y, x)
    inv = 1.0 / s
    inv2 = inv * inv
    corr = 0j
    power = inv
    for c in _STIRLING_COEF:
        corr += c * power
        power *= inv2
    re = math.fsum(((x - 0.5) * log_abs, -y * arg, -x, _HALF_LOG_2PI, corr.real))
    im = math.fsum(((x - 0.5) * arg, y * log_abs, -y, corr.imag))
    return complex(re, im)


def _log_gamma_half_plane(s: complex) -> complex:
    if abs(s) >= _STIRLING_RADIUS:
        return _log_gamma_stirling(s)
    return _log_gamma_right(s)


def _log_gamma_any(s: complex) -> complex:
    """Some logarithm of Gamma(s); exp() of it is Gamma(s)."""
    if s.real >= 0.5:
        return _log_gamma_half_plane(s)
    return _LOG_PI - _log_sin_pi(s) - _log_gamma_half_plane(1 - s)


def gamma(s: complex, eps_pole: float = EPS_POLE) -> complex:
    """Gamma(s) for complex s, relative accuracy about 1e-14 for |s| <= 50."""
    s = complex(s)
    if s.real <= 0.5 and _pole_distance(s) < eps_pole:
        raise PoleError(f"gamma has a pole near {s!r}")
    if s.imag == 0.0 and s.real > 0 and s.real <= 171.0:
        return complex(math.gamma(s.real))
    return _check_finite(cmath.exp(_log_gamma_any(s)), "gamma")


def rgamma(s: complex) -> complex:
    """1/Gamma(s); entire, exactly zero at the non-positive integers."""
    s = complex(s)
    if s.imag == 0.0 and s.real <= 0 and s.real == round(s.real):
        return 0j
    if s.real >= 0.5:
        return cmath.exp(-_log_gamma_half_plane(s))
    # 1/Gamma(s) = sin(pi s) Gamma(1 - s) / pi
    return cmath.exp(_log_sin_pi(s) + _log_gamma_half_plane(1 - s) - _LOG_PI)


def digamma(s: complex, eps_pole: float = EPS_POLE) -> complex:
    """psi(s) = Gamma'(s)/Gamma(s)."""
    s = complex(s)
    if s.real <= 0.5 and _pole_distance(s) < eps_pole:
        raise PoleError(f"digamma has a pole near {s!r}")
    shift = 0j
    while s.real < 10.0:
        shift -= 1.0 / s
        s += 1
    inv2 = 1.0 / (s * s)
    series = 0j
    power = inv2
    for c in _DIGAMMA_ASYMP:
        series += c * power
        power *= inv2
    return _check_finite(cmath.log(s) - 0.5 / s - series + shift, "digamma")


def pochhammer(s: complex, k: int) -> complex:
    """Rising factorial (s)_k = s (s+1) ... (s+k-1), as an explicit product."""
    if k < 0:
        raise DomainError("pochhammer needs k >= 0")
    out = 1 + 0j
    for j in range(k):
        out *= s + j
    return out


def binom_general(top, k: int):
    """Binomial coefficient C(top, k) for complex (or integer) top.

    Integer tops are handled exactly, so C(n, k) vanishes identically when
    0 <= n < k.  That exactness is what filters spurious poles.
    """
    if k < 0:
        raise DomainError("binomial needs k >= 0")
    if isinstance(top, (int, Fraction)) and not isinstance(top, bool):
        acc = Fraction(1)
        for j in range(k):
            acc *= Fraction(top) - j
        acc /= math.factorial(k)
        return acc
    out = 1 + 0j
    for j in range(k):
        out *= (top - j) / (j + 1)
    return out


def harmonic(n: int) -> float:
    """H_n = 1 + 1/2 + ... + 1/n, H_0 = 0."""
    if n < 0:
        raise DomainError("harmonic number needs n >= 0")
    return math.fsum(1.0 / j for j in range(1, n + 1))


def multinomial(l: int, j: int) -> int:
    """l! / ((2j)! (2j)! (l - 4j)!)."""
    if j < 0 or 4 * j > l:
        raise DomainError(f"multinomial({l}; {2*j},{2*j}) needs 0 <= 4j <= l")
    return math.factorial(l) // (
        math.factorial(2 * j) ** 2 * math.factorial(l - 4 * j)
    )
