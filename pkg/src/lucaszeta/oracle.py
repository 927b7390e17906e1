"""Independent reference evaluations for tests and verification.

Nothing here reuses the summation loops, power functions or coefficient
tables of the library proper: sequences are regenerated by their own loops,
high-precision values go through mpmath, and plain sums use Python's ``**``.
"""
from __future__ import annotations

import cmath
import math
from typing import Callable

import mpmath

from .lucas_core import LucasParams
from .quadrature import cauchy_coefficient


def _lucas_terms(P: float, Q: float, count: int) -> list[float]:
    """U_1 .. U_count by a fresh recurrence loop."""
    out, prev, cur = [], 0.0, 1.0
    for _ in range(count):
        out.append(cur)
        prev, cur = cur, P * cur - Q * prev
    return out


def brute_zeta(params: LucasParams, s: complex, terms: int) -> complex:
    """Exactly ``terms`` summands of sum U_n^{-s}, no tail estimate."""
    s = complex(s)
    return sum(u ** (-s) for u in _lucas_terms(params.P, params.Q, terms))


def brute_hurwitz(params: LucasParams, s: complex, z: complex, terms: int, u0_one: bool = False) -> complex:
    """z^{-s} + sum_{n=1}^{terms} (z + U_n)^{-s} by straight summation."""
    s, z = complex(s), complex(z)
    head = (z + 1) ** (-s) if u0_one else z ** (-s)
    return head + sum((z + u) ** (-s) for u in _lucas_terms(params.P, params.Q, terms))


def residue_via_contour(evaluator: Callable[[complex], complex], pole: complex, radius: float = 0.3, tol: float = 1e-9) -> complex:
    """Residue at ``pole`` from the trapezoid rule on a circle."""
    return cauchy_coefficient(evaluator, pole, radius, -1, tol=tol).value


def laurent_constant_via_contour(
    evaluator: Callable[[complex], complex], pole: complex, radius: float = 0.3, tol: float = 1e-9
) -> complex:
    """Constant Laurent coefficient at ``pole``."""
    return cauchy_coefficient(evaluator, pole, radius, 0, tol=tol).value


def _mp_roots(params: LucasParams):
    P, Q = mpmath.mpf(params.P), mpmath.mpf(params.Q)
    D = P * P - 4 * Q
    a = (P + mpmath.sqrt(D)) / 2
    b = (P - mpmath.sqrt(D)) / 2
    return a, b, D


def mp_zeta(params: LucasParams, s, dps: int = 30):
    """zeta_U(s) at ``dps`` digits from the binomial continuation, summed until negligible."""
    with mpmath.workdps(dps + 10):
        s = mpmath.mpmathify(s)
        a, b, D = _mp_roots(params)
        total = mpmath.mpf(0)
        coef = mpmath.mpf(1)
        tiny = mpmath.mpf(10) ** (-dps - 5)
        k = 0
        while True:
            x = a ** (-s - k) * b**k
            term = coef * x / (1 - x)
            total += term
            if k > 5 and abs(term) < tiny * max(1, abs(total)):
                break
            coef *= (s + k) / (k + 1)
            k += 1
            if k > 5000:
                raise ArithmeticError("oracle zeta did not converge")
        return +(D ** (s / 2) * total)


def mp_hurwitz(params: LucasParams, s, z, dps: int = 30, u0_one: bool = False):
    """zeta_U(s, z) on the whole s-plane (away from poles), any z off the cut.

    Sums the first N terms directly with N chosen so that U_{N+1} > 4|z|, and
    expands the rest binomially:
        sum_{n>N} (z + U_n)^{-s} = sum_j C(-s, j) z^j (zeta_U(s + j) - sum_{n<=N} U_n^{-s-j}).
    The subtraction cancels about j log10(U_{N+1}) digits, hence the doubled
    working precision.
    """
    work = 2 * dps + 20
    with mpmath.workdps(work):
        s, z = mpmath.mpmathify(s), mpmath.mpmathify(z)
        P, Q = mpmath.mpf(params.P), mpmath.mpf(params.Q)
        U = []
        prev, cur = mpmath.mpf(0), mpmath.mpf(1)
        while not U or U[-1] <= 4 * abs(z) or len(U) < 2:
            U.append(cur)
            prev, cur = cur, P * cur - Q * prev
        head_terms, N = U[:-1], len(U) - 1
        total = (z + 1) ** (-s) if u0_one else z ** (-s)
        total += mpmath.fsum((z + u) ** (-s) for u in head_terms)
        tiny = mpmath.mpf(10) ** (-dps - 5)
        coef = mpmath.mpf(1)
        j = 0
        while True:
            tail = mp_zeta(params, s + j, work) - mpmath.fsum(u ** (-s - j) for u in head_terms)
            term = coef * z**j * tail
            total += term
            if j > 3 and abs(term) < tiny * max(1, abs(total)):
                break
            coef *= -(s + j) / (j + 1)
            j += 1
            if j > 2000:
                raise ArithmeticError("oracle Hurwitz expansion did not converge")
        return +total


def q0_hurwitz(a: float, s, z, dps: int = 30):
    """sum_{n>=0} (z + a^n)^{-s} continued by the binomial expansion (U_n = a^{n-1}, Q = 0).

    With n0 such that a^{n0} > 2|z|:
        sum_{n<n0} (z + a^n)^{-s} + sum_j C(-s, j) z^j a^{-n0 (s+j)} / (1 - a^{-(s+j)}).
    """
    with mpmath.workdps(dps + 10):
        a, s, z = mpmath.mpf(a), mpmath.mpmathify(s), mpmath.mpmathify(z)
        n0 = 0
        while a**n0 <= 2 * abs(z):
            n0 += 1
        total = mpmath.fsum((z + a**n) ** (-s) for n in range(n0))
        tiny = mpmath.mpf(10) ** (-dps - 5)
        coef = mpmath.mpf(1)
        j = 0
        while True:
            w = s + j
            term = coef * z**j * a ** (-n0 * w) / (1 - a ** (-w))
            total += term
            if j > 3 and abs(term) < tiny * max(1, abs(total)):
                break
            coef *= -(s + j) / (j + 1)
            j += 1
        return +total


def geometric_direct(a: float, s: complex, terms: int = 4000) -> complex:
    """sum_{n=0}^{terms-1} a^{-n s} by plain summation (stops early once terms vanish)."""
    s = complex(s)
    total, n = 0j, 0
    ratio = cmath.exp(-s * math.log(a))
    term = 1 + 0j
    while n < terms:
        total += term
        term *= ratio
        if abs(term) < 1e-18 * abs(total):
            break
        n += 1
    return total
