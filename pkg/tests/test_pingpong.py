import math

import pytest

from hypgrowth.errors import NestingFailure, RelationFound, VirtuallyCyclic
from hypgrowth.geometry import line
from hypgrowth.isometry import axis, element
from hypgrowth.pingpong import (
    algebraic_free_oracle,
    build_table,
    certify_free,
    check_disjoint,
    check_nesting,
    fixed_point_dichotomy,
    overlap_segment,
)
from hypgrowth.presets import get_preset

F2 = get_preset("free2")
MOD = get_preset("modular")
CAT = get_preset("custom", matrices="2,1,1,1;1,1,0,1")
BOOSTED = "(TTST)^104"


def test_dichotomy_same_for_powers():
    assert fixed_point_dichotomy(element(F2, "a"), element(F2, "aa")) == "same"


def test_dichotomy_disjoint():
    assert fixed_point_dichotomy(element(F2, "a"), element(F2, "b")) == "disjoint"
    assert fixed_point_dichotomy(element(CAT, "a"), element(CAT, "b")) == "disjoint"


def test_tree_axes_without_overlap():
    assert overlap_segment(axis(element(F2, "a")), axis(element(F2, "baB"))) is None


def test_crossing_lines_overlap_near_the_crossing():
    ov = overlap_segment(line(0.0, math.inf), line(-1.0, 1.0))
    assert ov is not None
    assert ov.min_distance == pytest.approx(0.0, abs=1e-12)
    assert ov.a < 0 < ov.b


def test_tree_table_margins_grow_linearly():
    table = build_table(element(F2, "a"), element(F2, "b"), 1)
    rep = check_nesting(table)
    assert rep.passed
    assert [rep.margins[n] for n in (1, 2, 3)] == [10.0, 20.0, 30.0]


def test_modular_table_nests():
    table = build_table(element(MOD, BOOSTED), element(MOD, "T"), 2)
    assert table.case == "overlap"
    rep = check_nesting(table)
    assert rep.passed
    m = [rep.margins[n] for n in (1, 2, 3, 4)]
    steps = [b - a for a, b in zip(m, m[1:])]
    assert all(s == pytest.approx(steps[0], rel=1e-6) for s in steps)
    assert check_disjoint(table).passed


def test_corrupted_table_gives_witness():
    table = build_table(element(MOD, BOOSTED), element(MOD, "T"), 2)
    c1, c2 = sum(table.B1) / 2, sum(table.B2) / 2
    bad = table.with_B((c1, c1), (c2, c2))
    rep = check_nesting(bad)
    assert not rep.passed and rep.witness is not None
    with pytest.raises(NestingFailure):
        check_nesting(bad, strict=True)


def test_virtually_cyclic_table_rejected():
    with pytest.raises(VirtuallyCyclic):
        build_table(element(F2, "a"), element(F2, "aaa"), 1)


def test_oracle_free2():
    rep = algebraic_free_oracle(element(F2, "a"), element(F2, "b"), 8)
    assert rep.passed and rep.mode == "exact"


def test_oracle_sanov():
    sanov = get_preset("sanov")
    assert algebraic_free_oracle(element(sanov, "a"), element(sanov, "b"), 8).passed


def test_oracle_finds_relation():
    rep = algebraic_free_oracle(element(MOD, "T"), element(MOD, "TT"), 4)
    assert not rep.passed
    assert rep.witness is not None


def test_certify_tree_pair():
    cert = certify_free(element(F2, "a"), element(F2, "b"), 1)
    doc = cert.to_json()
    assert doc["g1"]["word"] == "a^10"
    assert doc["caveats"] == []


def test_certify_modular_pair():
    cert = certify_free(element(MOD, BOOSTED), element(MOD, "T"), 1969)
    assert cert.oracle.passed
    assert "sampled-window" in cert.caveats


def test_certify_rejects_relation():
    # both elements are powers of one hyperbolic map
    with pytest.raises((RelationFound, VirtuallyCyclic)):
        certify_free(element(F2, "a"), element(F2, "a"), 1)
