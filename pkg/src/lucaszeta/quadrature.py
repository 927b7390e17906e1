"""Quadrature for the Mellin-split integrals and circle contours.

Integrands are plain callables taking a float ndarray and returning a complex
ndarray of the same shape (contour integrands take one complex scalar).  The
interval rule is 20-point Gauss-Legendre, with the error of a panel estimated
by comparing it against the same rule on its two halves.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import QuadratureError

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(20)
_MAX_PANELS = 4000


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error_estimate: float
    evaluations: int


def _rule(g, lo: np.ndarray, hi: np.ndarray, noise=None):
    """Gauss-Legendre on each [lo_i, hi_i] with one vectorised call to g.

    Also returns the rounding floor of each panel, from the caller's noise
    envelope when given.
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    flat = x.ravel()
    vals = np.asarray(g(flat), dtype=complex).reshape(x.shape)
    if noise is None:
        env = 64 * np.finfo(float).eps * np.abs(vals)
    else:
        env = np.asarray(noise(flat), dtype=float).reshape(x.shape)
    return half * (vals @ _WEIGHTS), np.abs(half) * (env @ _WEIGHTS), x.size


def adaptive(g: Callable, a: float, b: float, tol: float, noise: Callable | None = None) -> QuadResult:
    """Integrate g over [a, b] to absolute tolerance tol by bisection.

    A panel is also accepted once its refinement change is within a few times
    its rounding floor; that floor is then counted in the error estimate.
    """
    lo = np.array([a], dtype=float)
    hi = np.array([b], dtype=float)
    whole, _, evals = _rule(g, lo, hi, noise)
    total, err_total = 0j, 0.0
    width = b - a
    while lo.size:
        mid = 0.5 * (lo + hi)
        left, fl_l, n1 = _rule(g, lo, mid, noise)
        right, fl_r, n2 = _rule(g, mid, hi, noise)
        evals += n1 + n2
        refined = left + right
        floor = fl_l + fl_r
        err = np.abs(refined - whole)
        ok = (err <= tol * (hi - lo) / width) | (err <= 4 * floor)
        total += refined[ok].sum()
        err_total += float(np.maximum(err[ok], floor[ok]).sum())
        keep = ~ok
        if 2 * np.count_nonzero(keep) + lo.size > _MAX_PANELS:
            best = total + refined[keep].sum()
            raise QuadratureError(
                "panel budget exhausted", complex(best), err_total + float(err[keep].sum())
            )
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        whole = np.concatenate([left[keep], right[keep]])
    return QuadResult(complex(total), err_total, evals)


def integrate_unit(
    f: Callable,
    s_shift: complex,
    tol: float,
    u_max: float | None = None,
    decay_rate: float | None = None,
    noise: Callable | None = None,
) -> QuadResult:
    """int_0^1 f(t) t^{s_shift - 1} dt, computed as int_0^inf f(e^-u) e^{-s_shift u} du.

    ``decay_rate`` is the exponent p + Re(s_shift) of the integrand decay in u
    (defaults to Re(s_shift)).  With ``u_max`` the integral is cut there;
    callers use this when f is only known to rounding beyond that point.
    ``noise`` maps t to an absolute rounding bound on f(t).
    """
    s_shift = complex(s_shift)
    rate = s_shift.real if decay_rate is None else decay_rate
    if rate <= 0:
        raise QuadratureError("integrand does not decay at t -> 0", complex("nan"), math.inf)

    def g(u):
        return f(np.exp(-u)) * np.exp(-s_shift * u)

    g_noise = None
    if noise is not None:

        def g_noise(u):
            return noise(np.exp(-u)) * np.exp(-s_shift.real * u)

    return _panels(g, 0.0, tol, rate, u_max, g_noise)


def integrate_tail(
    f: Callable,
    tol: float,
    decay_rate: float | None = None,
    noise: Callable | None = None,
    degree: float = 0.0,
) -> QuadResult:
    """int_1^inf f(t) dt for |f(t)| <= A t^degree e^{-c t}, c = decay_rate."""
    return _panels(f, 1.0, tol, decay_rate, None, noise, degree)


def _panels(
    g, start: float, tol: float, rate: float | None, stop: float | None, noise=None, degree: float = 0.0
) -> QuadResult:
    total, err, evals = 0j, 0.0, 0
    lo, width = start, 1.0
    quiet = 0
    while True:
        hi = lo + width
        if stop is not None and hi >= stop:
            hi = stop
        part = adaptive(g, lo, hi, tol / 4, noise)
        total += part.value
        err += part.error_estimate
        evals += part.evaluations
        edge = abs(complex(np.asarray(g(np.array([hi])))[0]))
        evals += 1
        if stop is not None and hi >= stop:
            # what is cut off beyond the stop, if g keeps decaying at ``rate``
            cut = edge / rate if rate else 0.0
            return QuadResult(total, err + cut, evals)
        if rate is not None and rate > 0:
            # past x = 2 degree / rate, x^degree e^{-rate x} decays at least like
            # e^{-rate x / 2}, so the remainder is at most 2 |g(hi)| / rate
            tail = 2 * edge / rate
            if hi >= 2 * degree / rate and tail <= tol / 2:
                return QuadResult(total, err + tail, evals)
        else:
            quiet = quiet + 1 if abs(part.value) <= tol / 8 and edge * width <= tol / 8 else 0
            if quiet >= 2:
                return QuadResult(total, err + abs(part.value), evals)
        if hi - start > 1e4:
            raise QuadratureError("tail did not decay within 1e4 units", total, math.inf)
        lo, width = hi, 2 * width


def cauchy_coefficient(
    f: Callable[[complex], complex],
    center: complex,
    radius: float,
    order: int,
    points: int = 64,
    tol: float = 1e-10,
    max_points: int = 4096,
) -> QuadResult:
    """(1/2 pi i) contour integral of f(s) (s - center)^{-order-1} over |s - center| = radius.

    Trapezoid rule on the circle; the node count doubles (old nodes reused)
    until two successive values agree to tol * max(1, |value|).
    """
    center = complex(center)
    if radius <= 0:
        raise ValueError("radius must be positive")

    def sample(theta: np.ndarray) -> np.ndarray:
        out = np.empty(theta.size, dtype=complex)
        for i, th in enumerate(theta):
            w = radius * cmath.exp(1j * th)
            out[i] = f(center + w) * w ** (-order)
        return out

    n = points
    vals = sample(2 * math.pi * np.arange(n) / n)
    current = complex(vals.mean())
    while True:
        if 2 * n > max_points:
            raise QuadratureError("contour integral did not stabilise", current, math.inf)
        extra = sample(2 * math.pi * (np.arange(n) + 0.5) / n)
        vals = np.concatenate([vals, extra])
        n *= 2
        refined = complex(vals.mean())
        change = abs(refined - current)
        current = refined
        if change <= tol * max(1.0, abs(refined)):
            return QuadResult(refined, change, n)
