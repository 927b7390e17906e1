"""Reduced-scale verification suites behind ``lucaszeta verify``.

Each suite yields Check records; a check passes when its measured error is
within its tolerance.  The oracles are the independent ones in ``oracle``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import HeuristicRatioWarning
from .hurwitz import (
    fibonacci_residue_closed,
    geomsum_lattice_residue_closed,
    geomsum_residue_closed,
    hurwitz_continued,
    hurwitz_direct,
    hurwitz_pole_map,
    hurwitz_residue_neg_int,
)
from .lucas_core import PRESETS, EvalConfig, classify_ratio, geomsum_params, validate_params
from .lucas_zeta import Region, constant_term_at_neg_pole, laurent_at_zero, zeta_continued, zeta_direct, zeta_poles
from .oracle import laurent_constant_via_contour, residue_via_contour
from .theta import expansion_error_order


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)

    def as_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


def _sequences():
    out = {name: validate_params(*pq) for name, pq in PRESETS.items()}
    out["geomsum:2"] = geomsum_params(2.0)
    return out


def overlap() -> Iterator[Check]:
    grid = [complex(re, im) for re in (0.5, 1.0, 2.0) for im in (0.0, 5.0, -5.0)]
    for name, params in _sequences().items():
        worst = 0.0
        for s in grid:
            d = zeta_direct(params, s)
            worst = max(worst, abs(d - zeta_continued(params, s)) / (1 + abs(d)))
        yield Check("overlap", f"zeta {name}", worst, 1e-8)
        worst = 0.0
        for s in (1.0, 2.0 + 1j):
            for z in (1.0, 2 + 1j):
                d = hurwitz_direct(params, s, z)
                worst = max(worst, abs(d - hurwitz_continued(params, s, z).value) / (1 + abs(d)))
        yield Check("overlap", f"hurwitz {name}", worst, 1e-6)


def residues() -> Iterator[Check]:
    seqs = _sequences()
    fib = seqs["fibonacci"]
    res0, const0 = laurent_at_zero(fib)
    yield Check("residues", "zeta fibonacci s=0", abs(residue_via_contour(lambda s: zeta_continued(fib, s), 0) - res0), 1e-6)
    yield Check(
        "residues",
        "zeta fibonacci constant at 0",
        abs(laurent_constant_via_contour(lambda s: zeta_continued(fib, s), 0) - const0),
        1e-6,
    )
    for name in ("fibonacci", "jacobsthal"):
        params = seqs[name]
        for pole in zeta_poles(params, Region(-4.5, -0.5, -0.1, 0.1)):
            got = residue_via_contour(lambda s: zeta_continued(params, s), pole.location)
            yield Check("residues", f"zeta {name} s={pole.location.real:g}", abs(got - pole.residue), 1e-6)
    ct_cases = (("fibonacci", 4, 2), ("jacobsthal", 2, 2), ("geomsum:2", 1, 1))
    for name, ell, k in ct_cases:
        params = seqs[name]
        got = laurent_constant_via_contour(lambda s: zeta_continued(params, s), -ell)
        yield Check("residues", f"constant term {name} s=-{ell}", abs(got - constant_term_at_neg_pole(params, ell, k)), 1e-6)
    ratio = classify_ratio(fib)
    for pole in hurwitz_pole_map(fib, ratio, Region(-2.5, 0.5, -0.1, 0.1), 1.0):
        got = residue_via_contour(lambda s: hurwitz_continued(fib, s, 1.0).value, pole.location)
        yield Check("residues", f"hurwitz fibonacci z=1 s={pole.location.real:g}", abs(got - pole.residue), 1e-6)


def theta_order() -> Iterator[Check]:
    grid = np.geomspace(1e-3, 1e-1, 8)
    for name, params in (("fibonacci", validate_params(1, -1)), ("geomsum:2", geomsum_params(2.0))):
        for m in (1, 2):
            slope = expansion_error_order(params, m, grid)
            # pass when slope >= 2m + 0.3; report the shortfall as the error
            yield Check("theta-order", f"{name} m={m} slope={slope:.3f}", max(0.0, 2 * m + 0.3 - slope), 0.0)


def examples() -> Iterator[Check]:
    fib = validate_params(1, -1)
    yield Check("examples", "zeta fibonacci(-1) = -1", abs(zeta_continued(fib, -1) + 1), 1e-10)
    z = 0.7 + 0.4j
    for a in (2.0, 3.0):
        params = geomsum_params(a)
        ratio = classify_ratio(params)
        worst = max(
            abs(hurwitz_residue_neg_int(params, ratio, ell, z) - geomsum_residue_closed(a, ell, z))
            / max(1.0, abs(geomsum_residue_closed(a, ell, z)))
            for ell in range(9)
        )
        yield Check("examples", f"geomsum:{a:g} residues at -l", worst, 1e-12)
        L = math.log(a)
        worst = 0.0
        for m in (0, 1, 2):
            for n in (-1, 1):
                loc = complex(-m, 2 * n * math.pi / L)
                (pole,) = hurwitz_pole_map(params, ratio, Region(-m - 0.1, -m + 0.1, loc.imag - 0.1, loc.imag + 0.1), z)
                ref = geomsum_lattice_residue_closed(a, m, n, z)
                worst = max(worst, abs(pole.residue - ref) / max(1.0, abs(ref)))
        yield Check("examples", f"geomsum:{a:g} aggregated lattice residues", worst, 1e-10)
    ratio = classify_ratio(fib)
    worst = max(
        abs(hurwitz_residue_neg_int(fib, ratio, ell, z) - fibonacci_residue_closed(ell, z))
        / max(1.0, abs(fibonacci_residue_closed(ell, z)))
        for ell in range(9)
    )
    yield Check("examples", "fibonacci residues at -l", worst, 1e-12)


SUITES: dict[str, Callable[[], Iterator[Check]]] = {
    "overlap": overlap,
    "residues": residues,
    "theta-order": theta_order,
    "examples": examples,
}


def run(suite: str) -> Iterator[Check]:
    names = list(SUITES) if suite == "all" else [suite]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HeuristicRatioWarning)
        for name in names:
            yield from SUITES[name]()
