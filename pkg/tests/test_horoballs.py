import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypgrowth.boundary import INFINITY
from hypgrowth.errors import K1Uncertified, SeparationViolation
from hypgrowth.geometry import H2Point, distance
from hypgrowth.horoballs import (
    busemann,
    compute_k1,
    ford_system,
    horoball_gap,
    horofunction,
    invariance_check,
    truncated_contains,
)
from hypgrowth.isometry import element
from hypgrowth.presets import get_preset

MOD = get_preset("modular")
S_MAT = (0, 1, -1, 0)
T_MAT = (1, 1, 0, 1)


@pytest.mark.parametrize("pt,val", [((0, math.e ** 2), -2.0), ((0, 1), 0.0), ((7, 1), 0.0)])
def test_busemann_at_infinity(pt, val):
    assert busemann(INFINITY, H2Point(*pt)) == pytest.approx(val, abs=1e-12)


def test_busemann_at_zero_matches_inverted_picture():
    # S sends 0 to infinity, so the Busemann function about 0 at z is the one about inf at S z
    z = H2Point(0.3, 0.2)
    w = 1 / complex(0.3, 0.2)
    assert busemann(Fraction(0), z) == pytest.approx(busemann(INFINITY, H2Point(-w.real, -w.imag)))


def test_unit_ford_balls_are_tangent():
    sysm = ford_system(1, 1)
    ok, dist = horoball_gap(sysm.ball(INFINITY), sysm.ball(Fraction(0)))
    assert ok and dist == 0.0
    assert sysm.to_json()["all_interiors_disjoint"]


def test_scaled_separation():
    sysm = ford_system(2, 4)
    _, dist = horoball_gap(sysm.ball(INFINITY), sysm.ball(Fraction(3)))
    assert dist == pytest.approx(math.log(16))
    assert sysm.separation == pytest.approx(math.log(16))


def test_S_swaps_zero_and_infinity():
    sysm = ford_system(3, 2)
    assert sysm.ball(Fraction(0)).image(S_MAT) == sysm.ball(INFINITY)
    assert sysm.ball(INFINITY).image(S_MAT) == sysm.ball(Fraction(0))


def test_T_shifts_balls():
    sysm = ford_system(3, 2)
    assert sysm.ball(Fraction(1, 3)).image(T_MAT) == sysm.ball(Fraction(4, 3))


def test_invariance_under_generators():
    sysm = ford_system(3, 2)
    rep = invariance_check(sysm, [element(MOD, "S"), element(MOD, "T")])
    assert rep.passed and len(rep.checked) > 0


def test_too_small_h0():
    with pytest.raises(SeparationViolation):
        ford_system(2, Fraction(1, 2))


def test_truncated_space_membership():
    sysm = ford_system(1, 2)
    assert truncated_contains(sysm, H2Point(0.5, 1))
    assert not truncated_contains(sysm, H2Point(0, 3))
    assert truncated_contains(None, H2Point(0, 3))


def test_k1_tree_threshold_zero():
    res = compute_k1(get_preset("free2"), None, threshold=0)
    assert res.certified and res.k1 == 2


def test_k1_negative_threshold():
    res = compute_k1(get_preset("free2"), None, threshold=-1)
    assert res.k1 == 2


def test_k1_zero_cap_is_uncertified():
    with pytest.raises(K1Uncertified):
        compute_k1(get_preset("free2"), None, cap=0)
    res = compute_k1(get_preset("free2"), None, cap=0, raise_uncertified=False)
    assert not res.certified


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5), st.floats(0.1, 10), st.floats(0.1, 30))
def test_horofunction_grows_like_arclength_toward_center(x, y, t):
    # moving up by distance t from (x, y) is a geodesic ray toward infinity
    h = horofunction(INFINITY)
    a = H2Point(x, y * math.exp(t))
    p = H2Point(x, y)
    assert h(a) - h(p) == pytest.approx(distance(p, a), abs=1e-9)
    assert h.slack(p, a) <= h.c1 + 1e-9
