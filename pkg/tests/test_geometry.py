import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypgrowth.boundary import TreeEnd, reduce_word
from hypgrowth.errors import InvalidPointError, ModelMismatchError
from hypgrowth.geometry import (
    H2Point,
    TreePoint,
    distance,
    geodesic,
    hausdorff_same_endpoints,
    line,
    project,
    thin_triangle_defect,
    tree_median,
)

coord = st.floats(-20, 20)
height = st.floats(0.05, 20)
h2pts = st.builds(H2Point, coord, height)
tree_words = st.text("abAB", max_size=8).map(lambda w: TreePoint(reduce_word(w)))


def test_vertical_distance_is_log_ratio():
    assert distance(H2Point(0, 1), H2Point(0, math.e)) == pytest.approx(1.0, abs=1e-12)


def test_horizontal_distance():
    assert distance(H2Point(0, 1), H2Point(1, 1)) == pytest.approx(math.acosh(1.5), abs=1e-12)


def test_tree_distance_counts_edges():
    assert distance(TreePoint("ab"), TreePoint("a")) == 1
    assert distance(TreePoint("aB"), TreePoint("ab")) == 2


def test_mixed_models_rejected():
    with pytest.raises(ModelMismatchError):
        distance(TreePoint("a"), H2Point(0, 1))


def test_invalid_point():
    with pytest.raises(InvalidPointError):
        distance(H2Point(0, -1), H2Point(0, 1))


def test_geodesic_lies_on_circle():
    c = geodesic(H2Point(-1, 1), H2Point(1, 1))
    for t in np.linspace(c.lo, c.hi, 7):
        p = c.point(t)
        assert p.x ** 2 + p.y ** 2 == pytest.approx(2.0, abs=1e-9)


def test_projection_to_imaginary_axis():
    p = project(line(0.0, math.inf), H2Point(3, 1))
    assert p.x == pytest.approx(0.0, abs=1e-12)
    assert p.y == pytest.approx(math.sqrt(10), abs=1e-9)


def test_tree_projection():
    a_line = line(TreeEnd("", "A"), TreeEnd("", "a"))
    assert project(a_line, TreePoint("ab")).word == "a"


def test_hausdorff_same_line_is_zero():
    assert hausdorff_same_endpoints(line(-1.0, 2.0), line(-1.0, 2.0)) == pytest.approx(0.0, abs=1e-9)


def test_thin_triangle_small_example():
    assert thin_triangle_defect(H2Point(0, 1), H2Point(0, 10), H2Point(5, 1)) <= 1.0


def test_tree_median():
    assert tree_median("ab", "b", "B") == ""
    assert tree_median("ab", "aB", "b") == "a"
    assert tree_median("ab", "aB", "aa") == "a"


@settings(max_examples=200, deadline=None)
@given(h2pts, h2pts, h2pts)
def test_h2_metric_axioms(p, q, r):
    d = distance(p, q)
    assert d >= 0
    assert d == pytest.approx(distance(q, p), abs=1e-9)
    assert d <= distance(p, r) + distance(r, q) + 1e-9


@settings(max_examples=200, deadline=None)
@given(tree_words, tree_words, tree_words)
def test_tree_metric_axioms(p, q, r):
    d = distance(p, q)
    assert d == distance(q, p)
    assert d <= distance(p, r) + distance(r, q)
    assert (d == 0) == (p.word == q.word)


@settings(max_examples=100, deadline=None)
@given(h2pts, h2pts)
def test_projection_is_nearest(p, q):
    c = line(-1.0, 1.0)
    proj = project(c, p)
    assert distance(p, proj) <= distance(p, c.point(0.0)) + 1e-9
    assert c.distance_to(p) == pytest.approx(distance(p, proj), abs=1e-7)


@settings(max_examples=100, deadline=None)
@given(h2pts, h2pts, h2pts)
def test_h2_triangles_are_thin(p, q, r):
    assert thin_triangle_defect(p, q, r) <= 1.0 + 1e-6
