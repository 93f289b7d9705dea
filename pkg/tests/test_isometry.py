import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypgrowth.boundary import ideal_float
from hypgrowth.errors import ClassificationError, HypothesisNotSatisfied, WordParseError
from hypgrowth.geometry import H2Point, TreePoint
from hypgrowth.isometry import (
    apply,
    classify,
    displacement,
    element,
    endpoint_relation,
    translation_variation,
)
from hypgrowth.presets import get_preset

MOD = get_preset("modular")
F2 = get_preset("free2")
CAT = get_preset("custom", matrices="2,1,1,1")
GOLDEN = (1 + math.sqrt(5)) / 2


def test_T_translates_i():
    p = apply(element(MOD, "T"), H2Point(0, 1))
    assert (p.x, p.y) == pytest.approx((1.0, 1.0))


def test_S_fixes_i():
    p = apply(element(MOD, "S"), H2Point(0, 1))
    assert (p.x, p.y) == pytest.approx((0.0, 1.0), abs=1e-12)
    assert classify(element(MOD, "S")).kind == "elliptic"


def test_cat_map_is_hyperbolic():
    cl = classify(element(CAT, "a"))
    assert cl.kind == "hyperbolic"
    assert cl.translation_length == pytest.approx(2 * math.acosh(1.5), abs=1e-12)
    assert cl.translation_length == pytest.approx(1.9248473, abs=1e-6)
    ends = sorted(ideal_float(z) for z in cl.fixed_points)
    assert ends == pytest.approx([1 - GOLDEN, GOLDEN])


def test_T_is_parabolic_at_infinity():
    cl = classify(element(MOD, "T"))
    assert cl.kind == "parabolic"
    assert cl.to_json()["fixed_points"] == ["inf"]


def test_identity_word():
    assert classify(element(MOD, "SS")).kind == "identity"


def test_tree_classification():
    cl = classify(element(F2, "abA"))
    assert cl.kind == "hyperbolic" and cl.translation_length == 1
    assert classify(element(F2, "aA")).kind == "identity"


def test_tree_action():
    assert apply(element(F2, "a"), TreePoint("Ab")).word == "b"


def test_bad_word():
    with pytest.raises(WordParseError):
        element(F2, "axz")


def test_endpoint_relation():
    a = element(F2, "a")
    assert endpoint_relation(a, element(F2, "aaa")) == "same"
    assert endpoint_relation(a, element(F2, "b")) == "disjoint"


def test_translation_variation_tree_is_zero():
    assert translation_variation(element(F2, "ab")) == 0.0


def test_translation_variation_h2_power():
    g = element(MOD, "(TTST)^104")
    assert translation_variation(g) <= 40.0


def test_translation_variation_needs_long_translation():
    with pytest.raises(HypothesisNotSatisfied):
        translation_variation(element(MOD, "TTST"))
    with pytest.raises(ClassificationError):
        translation_variation(element(MOD, "T"))


words = st.text("STt", min_size=1, max_size=8)


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_conjugation_preserves_classification(w, h):
    g, c = element(MOD, w), element(MOD, h)
    a, b = classify(g), classify(g.conjugate_by(c))
    assert a.kind == b.kind
    assert a.translation_length == pytest.approx(b.translation_length, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(words)
def test_hyperbolic_displacement_at_least_translation(w):
    g = element(MOD, w)
    cl = classify(g)
    if cl.kind == "hyperbolic":
        for p in (H2Point(0, 1), H2Point(0.3, 2.0), H2Point(-1, 0.5)):
            assert displacement(g, p) >= cl.translation_length - 1e-9
