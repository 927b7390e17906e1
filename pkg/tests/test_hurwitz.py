import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lucaszeta.errors import DomainError, NearPoleError
from lucaszeta.hurwitz import (
    choose_m,
    fibonacci_residue_closed,
    geometric_q0_suite,
    geomsum_lattice_residue_closed,
    geomsum_residue_closed,
    hurwitz_continued,
    hurwitz_direct,
    hurwitz_pole_map,
    hurwitz_residue_lattice,
    hurwitz_residue_neg_int,
    lattice_amplitude,
)
from lucaszeta.lucas_core import EvalConfig, classify_ratio, geomsum_params, validate_params
from lucaszeta.lucas_zeta import Region
from lucaszeta.oracle import brute_hurwitz, geometric_direct, mp_hurwitz, q0_hurwitz, residue_via_contour

LOG_PHI = math.log((1 + math.sqrt(5)) / 2)
LOOSE = EvalConfig(eps_quad=1e-8)


def test_direct_value(fib):
    assert hurwitz_direct(fib, 2, 1) == pytest.approx(1.7222385461186, abs=1e-12)


def test_direct_matches_brute(four_sequences):
    for p in four_sequences.values():
        n = int(300 * math.log(10) / p.log_a) - 2
        for s, z in ((0.4, 1.0), (1 + 3j, 2 + 1j), (2.5, 0.3 - 0.7j)):
            ref = brute_hurwitz(p, s, z, n)
            assert abs(hurwitz_direct(p, s, z) - ref) <= 1e-12 * max(1, abs(ref))


def test_direct_domain(fib):
    with pytest.raises(DomainError):
        hurwitz_direct(fib, 0.0, 1)
    with pytest.raises(DomainError):
        hurwitz_direct(fib, 2, -1.0)
    with pytest.raises(DomainError):
        hurwitz_direct(fib, 2, 0)


def test_direct_u0_one(fib):
    s, z = 1.7, 0.6
    diff = hurwitz_direct(fib, s, z, EvalConfig(u0_one=True)) - hurwitz_direct(fib, s, z)
    assert diff == pytest.approx((z + 1) ** -s - z**-s, rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 4), st.floats(0.1, 50), st.floats(0.01, 5))
def test_direct_monotone_in_real_z(s, z, dz):
    p = validate_params(1, -1)
    assert hurwitz_direct(p, s, z + dz).real < hurwitz_direct(p, s, z).real


def test_direct_reflection(geo2):
    v = hurwitz_direct(geo2, 1.5, 2 + 1j)
    w = hurwitz_direct(geo2, 1.5, 2 - 1j)
    assert abs(v - w.conjugate()) <= 1e-14 * abs(v)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 0.5 + 5j, 2 - 5j])
@pytest.mark.parametrize("z", [1.0, 2 + 1j, 0.5])
def test_overlap(four_sequences, s, z):
    for p in four_sequences.values():
        d = hurwitz_direct(p, s, z)
        c = hurwitz_continued(p, s, z).value
        assert abs(d - c) <= 1e-6 * (1 + abs(d))


def test_overlap_example(fib):
    rep = hurwitz_continued(fib, 2, 1, m=2)
    assert rep.m_used == 2
    assert abs(rep.value - hurwitz_direct(fib, 2, 1)) <= 1e-6
    assert rep.quad_error_estimate <= 1e-10


def test_m_independence(fib, geo2):
    for p in (fib, geo2):
        a = hurwitz_continued(p, -0.5, 1, m=1).value
        b = hurwitz_continued(p, -0.5, 1, m=2).value
        c = hurwitz_continued(p, -0.5, 1, m=3).value
        assert abs(a - b) <= 1e-6 and abs(b - c) <= 1e-6


def test_conjugate_symmetry(geo2):
    v = hurwitz_continued(geo2, -1.3 + 2j, 1.5).value
    w = hurwitz_continued(geo2, -1.3 - 2j, 1.5).value
    assert math.isfinite(abs(v))
    assert abs(v - w.conjugate()) <= 1e-8 * max(1, abs(v))


@pytest.mark.parametrize(
    "PQ,s,z",
    [
        ((1, -1), -0.5, 1),
        ((1, -1), -3.3 + 1j, 0.7 + 0.2j),
        ((3, 2), -1.3 + 2j, 1.5),
        ((3, 2), -4.6 - 0.5j, 2.0),
        ((1, -2), -2.5 + 0.5j, 1 + 1j),
        ((2, -1), -1.5 + 0.3j, 1 + 1j),
        ((4, 2), -0.7 + 3j, 1.2),
    ],
)
def test_continued_against_mp(PQ, s, z):
    p = validate_params(*PQ)
    ref = complex(mp_hurwitz(p, s, z, dps=20))
    got = hurwitz_continued(p, s, z).value
    assert abs(got - ref) <= 1e-9 * max(1, abs(ref))


def test_continued_u0_one(fib):
    s, z = -1.2 + 0.5j, 1.1
    a = hurwitz_continued(fib, s, z).value
    b = hurwitz_continued(fib, s, z, cfg=EvalConfig(u0_one=True)).value
    assert abs(b - a - ((z + 1) ** -s - z**-s)) <= 1e-12 * max(1, abs(a))


def test_continued_preconditions(fib):
    with pytest.raises(DomainError):
        hurwitz_continued(fib, -0.5, -0.5 + 1j)
    with pytest.raises(DomainError):
        hurwitz_continued(fib, -2.5, 1, m=1)
    with pytest.raises(NearPoleError):
        hurwitz_continued(fib, -1, 1)
    with pytest.raises(NearPoleError):
        hurwitz_continued(fib, complex(-2, math.pi / LOG_PHI) + 1e-9, 1)


def test_choose_m_respects_range(fib):
    for x in (0.5, -1.0, -2.5, -4.2, -7.3):
        m = choose_m(fib, complex(x, 0.3))
        assert 2 * m + 0.5 - 0.5 > -x


def test_residue_neg_int_examples(fib, geo2):
    rf, rg = classify_ratio(fib), classify_ratio(geo2)
    assert hurwitz_residue_neg_int(fib, rf, 0, 2 + 1j) == pytest.approx(1 / LOG_PHI, rel=1e-14)
    z = 0.8 - 0.3j
    assert hurwitz_residue_neg_int(fib, rf, 4, z) == pytest.approx((z**4 + 6 / 25) / LOG_PHI, rel=1e-13)
    assert hurwitz_residue_neg_int(geo2, rg, 2, z) == pytest.approx((z - 1) ** 2 / math.log(2), rel=1e-13)


def test_lattice_residue_examples(geo2, fib):
    assert hurwitz_residue_lattice(geo2, 0, 0, 1, 1.7) == pytest.approx(1 / math.log(2), rel=1e-14)
    r = classify_ratio(fib)
    amp, w = lattice_amplitude(fib, r, 1, 0)
    assert hurwitz_residue_lattice(fib, 0, 1, 0, 1.0) == pytest.approx(amp * (w - 1) * 1, rel=1e-14)
    with pytest.raises(DomainError):
        hurwitz_residue_lattice(geo2, 0, 1, 0, 1.0)


def test_pole_map_aggregates_example(geo2):
    z = 2.0
    loc = complex(-1, 2 * math.pi / math.log(2))
    (pole,) = hurwitz_pole_map(geo2, classify_ratio(geo2), Region(-1.2, -0.8, loc.imag - 0.2, loc.imag + 0.2), z)
    assert pole.location == pytest.approx(loc, abs=1e-12)
    assert {o.label() for o in pole.origins} == {"1,0,1", "0,1,1"}
    ref = (z - 1) * (1 - 2j * math.pi / math.log(2)) / math.log(2)
    assert pole.residue == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("a", [2.0, 3.0, 5.0])
def test_aggregated_lattice_matches_closed_form(a):
    p = geomsum_params(a)
    r = classify_ratio(p)
    L = math.log(a)
    z = 0.9 + 0.6j
    for m in (0, 1, 2, 3):
        for n in (-1, 1, 2):
            im = 2 * n * math.pi / L
            (pole,) = hurwitz_pole_map(p, r, Region(-m - 0.1, -m + 0.1, im - 0.1, im + 0.1), z)
            ref = geomsum_lattice_residue_closed(a, m, n, z)
            assert abs(pole.residue - ref) <= 1e-10 * max(1, abs(ref))


def test_pole_map_fibonacci_minus_four(fib):
    (pole,) = hurwitz_pole_map(fib, classify_ratio(fib), Region(-4.1, -3.9, -0.1, 0.1), 1.0)
    assert pole.residue == pytest.approx(31 / 25 / LOG_PHI, rel=1e-13)
    assert pole.residue == pytest.approx(2.5768277823, abs=1e-9)


def test_pole_map_empty(fib):
    assert hurwitz_pole_map(fib, classify_ratio(fib), Region(0.2, 0.3, 0.2, 0.3), 1.0) == []


def test_pole_map_conjugate_pairs(fib, jac):
    for p in (fib, jac):
        poles = hurwitz_pole_map(p, classify_ratio(p), Region(-4.5, 0.5, -10, 10), 1.3)
        index = {(round(q.location.real, 9), round(q.location.imag, 9)): q for q in poles}
        for q in poles:
            mate = index[(round(q.location.real, 9), round(-q.location.imag, 9) + 0.0)]
            assert abs(mate.residue - q.residue.conjugate()) <= 1e-12 * abs(q.residue)


@pytest.mark.parametrize("a", [1.5, 2.0, 3.0])
def test_geomsum_specialisation(a):
    p = geomsum_params(a)
    r = classify_ratio(p)
    for z in (1.0, 0.3 + 2j, -2 + 0.5j):
        for ell in range(9):
            ref = geomsum_residue_closed(a, ell, z)
            assert abs(hurwitz_residue_neg_int(p, r, ell, z) - ref) <= 1e-12 * max(1, abs(ref))


def test_fibonacci_specialisation(fib):
    r = classify_ratio(fib)
    for z in (1.0, 0.3 + 2j, -2 + 0.5j):
        for ell in range(9):
            ref = fibonacci_residue_closed(ell, z)
            assert abs(hurwitz_residue_neg_int(fib, r, ell, z) - ref) <= 1e-12 * max(1, abs(ref))


def test_closed_form_examples():
    z = 0.4 + 0.1j
    assert geomsum_residue_closed(2, 2, z) == pytest.approx((z - 1) ** 2 / math.log(2))
    assert geomsum_residue_closed(2, 0, z) == pytest.approx(1 / math.log(2))
    assert geomsum_residue_closed(3, 1, 1) == pytest.approx(0.4551196133, abs=1e-10)
    assert fibonacci_residue_closed(3, z) == pytest.approx(z**3 / LOG_PHI)
    assert fibonacci_residue_closed(8, z) == pytest.approx((z**8 + 420 / 25 * z**4 + 70 / 625) / LOG_PHI)
    with pytest.raises(DomainError):
        geomsum_residue_closed(1.0, 1, 1)


def test_fibonacci_lattice_residue_by_contour(fib):
    r = classify_ratio(fib)
    res = hurwitz_residue_lattice(fib, 0, 1, 0, 1.0, r)
    amp, w = lattice_amplitude(fib, r, 1, 0)
    assert w == pytest.approx(complex(-1, math.pi / LOG_PHI))
    loc = complex(-2, math.pi / LOG_PHI)
    got = residue_via_contour(lambda s: hurwitz_continued(fib, s, 1.0, cfg=LOOSE).value, loc, 0.3)
    assert abs(got - res) <= 1e-6


@pytest.mark.parametrize(
    "PQ,z,region",
    [
        ((3, 2), 2.0, Region(-2.5, 0.5, -10, 10)),
        ((1, -2), 1 + 0.5j, Region(-2.5, 0.5, -5, 5)),
    ],
)
@pytest.mark.slow
def test_pole_map_matches_contour(PQ, z, region):
    p = validate_params(*PQ)
    poles = hurwitz_pole_map(p, classify_ratio(p), region, z)
    assert len(poles) >= 5
    for q in poles:
        got = residue_via_contour(lambda s: hurwitz_continued(p, s, z, cfg=LOOSE).value, q.location, 0.3)
        assert abs(got - q.residue) <= 1e-6 * max(1, abs(q.residue))


def test_convention_invariance_of_residues(fib):
    # the two U_0 conventions differ by an entire function, so residues match
    loc = complex(-2, 0)
    plain = residue_via_contour(lambda s: hurwitz_continued(fib, s, 1.4).value, loc, 0.3)
    shifted = residue_via_contour(
        lambda s: hurwitz_continued(fib, s, 1.4, cfg=EvalConfig(u0_one=True)).value, loc, 0.3
    )
    assert abs(plain - shifted) <= 1e-10


def test_q0_suite_examples():
    g = geometric_q0_suite(2.0)
    assert g.zeta(1) == pytest.approx(2, rel=1e-15)
    z = 0.6 + 0.2j
    assert g.residue_neg_int(3, z) == pytest.approx(z**3 / math.log(2))
    e = geometric_q0_suite(math.e)
    assert e.residue_lattice(1, 1, z) == pytest.approx(-z * (2j * math.pi - 1), rel=1e-14)
    with pytest.raises(DomainError):
        geometric_q0_suite(1.0)
    with pytest.raises(NearPoleError):
        g.zeta(2j * math.pi / math.log(2))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.5, 3), st.floats(-20, 20), st.sampled_from([1.5, 2.0, 3.0, 10.0]))
def test_q0_zeta_matches_geometric_sum(x, y, a):
    s = complex(x, y)
    assert abs(geometric_q0_suite(a).zeta(s) - geometric_direct(a, s)) <= 1e-10 * max(1, abs(geometric_direct(a, s)))


def test_q0_residues_by_contour():
    a = 2.0
    g = geometric_q0_suite(a)
    z = 1.5
    L = math.log(a)
    cases = [(-2, g.residue_neg_int(2, z)), (complex(-1, 2 * math.pi / L), g.residue_lattice(1, 1, z)), (complex(-2, -2 * math.pi / L), g.residue_lattice(2, -1, z))]
    for loc, ref in cases:
        got = residue_via_contour(lambda s: complex(q0_hurwitz(a, s, z, 20)), loc, 0.3)
        assert abs(got - ref) <= 1e-6
    poles = g.pole_map(Region(-2.5, 0.5, -10, 10), z)
    assert len(poles) == 3 * 3
