"""Angle arithmetic: exactness, rotation cycles, sector queries."""

import pytest
from fractions import Fraction

from hypothesis import given, strategies as st

from unicrit.angles import (
    BoundaryAngleError,
    ExternalAngle,
    arcs_preimage,
    exact_period,
    multiply_by_d,
    preimage_angles,
    rotation_cycles,
    sector_of,
)


def A(num, den=1):
    return ExternalAngle(num, den)


def test_multiply_examples():
    assert multiply_by_d(A(1, 3), 2) == A(2, 3)
    assert multiply_by_d(A(2, 3), 2) == A(1, 3)
    assert multiply_by_d(A(1, 7), 2) == A(2, 7)


def test_preimage_examples():
    assert preimage_angles(A(1, 3), 2) == [A(1, 6), A(2, 3)]
    assert preimage_angles(A(0), 2) == [A(0), A(1, 2)]
    assert preimage_angles(A(1, 7), 3) == [A(1, 21), A(8, 21), A(5, 7)]


@given(
    num=st.integers(min_value=0, max_value=10**9),
    den=st.integers(min_value=1, max_value=10**9),
    d=st.integers(min_value=2, max_value=6),
)
def test_preimage_roundtrip(num, den, d):
    a = ExternalAngle(num, den)
    for pre in preimage_angles(a, d):
        assert multiply_by_d(pre, d) == a


def brute_force_cycles(d, p, q):
    """Independent oracle: walk every angle with denominator d^q - 1, build
    its orbit, and keep orbits of exact length q whose sorted order is shifted
    by p under the angle map."""
    den = d**q - 1
    found = set()
    for num in range(den):
        orb = []
        cur = Fraction(num, den)
        while cur not in orb:
            orb.append(cur)
            cur = (cur * d) % 1
        if cur != orb[0] or len(orb) != q:
            continue
        cyc = tuple(sorted(orb))
        pos = {a: i for i, a in enumerate(cyc)}
        shifts = {(pos[(a * d) % 1] - i) % q for i, a in enumerate(cyc)}
        if shifts == {p % q}:
            found.add(cyc)
    return sorted(found)


def test_rotation_cycle_examples():
    assert [c.angles for c in rotation_cycles(2, 1, 2)] == [(A(1, 3), A(2, 3))]
    assert [c.angles for c in rotation_cycles(2, 1, 3)] == [
        (A(1, 7), A(2, 7), A(4, 7))
    ]
    assert [c.angles for c in rotation_cycles(2, 2, 3)] == [
        (A(3, 7), A(5, 7), A(6, 7))
    ]


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("q", [2, 3, 4, 5, 6])
def test_rotation_cycles_match_enumeration(d, q):
    for p in range(1, q):
        if Fraction(p, q).denominator != q:
            continue
        got = [
            tuple(a.as_fraction() for a in c.angles) for c in rotation_cycles(d, p, q)
        ]
        assert got == brute_force_cycles(d, p, q)


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("q", [2, 3, 4, 5, 6])
def test_cycle_rotation_property(d, q):
    """Applying the angle map to the sorted cycle and re-sorting shifts it by
    exactly p positions."""
    for p in range(1, q):
        if Fraction(p, q).denominator != q:
            continue
        for cyc in rotation_cycles(d, p, q):
            mapped = [multiply_by_d(a, d) for a in cyc.angles]
            assert sorted(mapped) == sorted(cyc.angles)
            pos = {a: i for i, a in enumerate(cyc.angles)}
            for i, a in enumerate(cyc.angles):
                assert pos[mapped[i]] == (i + p) % q


def test_cycle_denominators_divide():
    for cyc in rotation_cycles(3, 1, 4):
        for a in cyc.angles:
            assert (3**4 - 1) % a.den == 0


def test_sector_of_examples():
    cyc = rotation_cycles(2, 1, 2)[0]
    assert sector_of(A(1, 2), cyc) == 1
    assert sector_of(A(0), cyc) == 0
    with pytest.raises(BoundaryAngleError):
        sector_of(A(1, 3), cyc)


def test_exact_period():
    assert exact_period(A(1, 3), 2) == 2
    assert exact_period(A(1, 7), 2) == 3
    assert exact_period(A(1, 6), 2) is None  # preperiodic


def test_parse_rejects_unreduced():
    assert ExternalAngle.parse("1/3") == A(1, 3)
    assert ExternalAngle.parse("0/1") == A(0)
    with pytest.raises(ValueError):
        ExternalAngle.parse("2/6")
    with pytest.raises(ValueError):
        ExternalAngle.parse("4/3")
    with pytest.raises(ValueError):
        ExternalAngle.parse("1/3/4")


def test_normalization_mod_one():
    assert A(7, 3) == A(1, 3)
    assert A(-1, 3) == A(2, 3)
    assert str(A(0)) == "0/1"


def test_arcs_preimage():
    arcs = arcs_preimage([(A(1, 3), A(2, 3))], 2)
    assert arcs == [
        (A(1, 6), A(1, 3)),
        (A(2, 3), A(5, 6)),
    ]
    # widths shrink by d and map back onto the source arc
    for lo, hi in arcs:
        assert multiply_by_d(lo, 2) == A(1, 3)
        assert multiply_by_d(hi, 2) == A(2, 3)
