import math

import pytest

from hypgrowth.errors import K1TooSmall, N0Uncertified, NotFound
from hypgrowth.geometry import H2Point
from hypgrowth.isometry import classify, element
from hypgrowth.presets import get_preset
from hypgrowth.search import (
    ball_generating_set,
    boost_displacement,
    compute_n0,
    find_hyperbolic_in_ball,
    generating_set,
    koubi_find,
    lambda_,
    virtually_cyclic_detect,
)

MOD = get_preset("modular")


def test_lambda_is_max_displacement():
    S = [element(MOD, "T"), element(MOD, "S")]
    # T moves i by arccosh(3/2); S fixes i
    assert lambda_(H2Point(0, 1), S) == pytest.approx(math.acosh(1.5))


def test_ball_generating_set_sizes():
    S = generating_set(get_preset("free2"))
    assert len(ball_generating_set(S, 2).elements) == 16  # 17 minus the identity
    assert len(ball_generating_set(S, 1).elements) == 4


def test_modular_witness_has_length_four():
    w = find_hyperbolic_in_ball(generating_set(MOD), 6)
    assert w.radius == 4
    assert abs(int(classify(w.element).to_json()["trace"])) == 3
    # nothing hyperbolic in radius <= 3
    assert w.to_json()["sphere_sizes_checked"][:4] == [1, 3, 6, 10]


def test_finite_group_has_no_witness():
    with pytest.raises(NotFound):
        find_hyperbolic_in_ball(generating_set(get_preset("finite-cyclic(5)")), 4)


def test_koubi_found_at_small_delta():
    res = koubi_find(generating_set(get_preset("sanov", 0.001)))
    assert res.status == "found" and res.word == "ab"


def test_koubi_hypothesis_fails_for_modular():
    assert koubi_find(generating_set(MOD)).status == "hypothesis-failed"


def test_boost_power():
    g = element(MOD, "TTST")
    res = boost_displacement(g, 1969)
    L = classify(g).translation_length
    assert res.k == math.ceil(200 / L)
    assert res.displacement >= 200
    with pytest.raises(K1TooSmall):
        boost_displacement(g, 2)


def test_virtually_cyclic_detection():
    cyc = get_preset("cyclic")
    assert virtually_cyclic_detect(generating_set(cyc), element(cyc, "t"))
    f2 = get_preset("free2")
    assert not virtually_cyclic_detect(generating_set(f2), element(f2, "a"))


def test_n0_uncertified_at_tiny_cap():
    with pytest.raises(N0Uncertified):
        compute_n0(MOD, cap=1)
