import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypgrowth.errors import CapExceeded, PreconditionError
from hypgrowth.growth import (
    beta,
    free_pair_lower_bound,
    free_pair_sphere_count,
    omega_bounds,
    uniform_growth_certificate,
)
from hypgrowth.isometry import element
from hypgrowth.presets import get_preset
from hypgrowth.search import generating_set

F2 = get_preset("free2")


def test_free_counts():
    assert beta(generating_set(F2), 3).counts == [1, 5, 17, 53]


def test_integers_grow_linearly():
    table = beta(generating_set(get_preset("cyclic")), 8)
    assert table.counts == [2 * k + 1 for k in range(9)]


def test_finite_group_ball_saturates():
    table = beta(generating_set(get_preset("finite-cyclic(5)")), 6)
    assert table.counts[-1] == 5 and table.complete


def test_cap_returns_partial_table():
    with pytest.raises(CapExceeded) as info:
        beta(generating_set(F2), 10, cap=100)
    partial = info.value.partial
    assert not partial.complete
    assert partial.counts == [1, 5, 17, 53][: len(partial.counts)]


def test_bounds_for_free_group():
    upper, lower = omega_bounds(beta(generating_set(F2), 8))
    assert lower == 3.0
    assert 3.0 <= upper <= 5.0


def test_bounds_need_radius_one():
    with pytest.raises(PreconditionError):
        omega_bounds(beta(generating_set(F2), 0))


def test_free_pair_sphere_counts():
    a, b = element(F2, "a"), element(F2, "b")
    for n in range(1, 6):
        assert free_pair_sphere_count(a, b, n) == 4 * 3 ** (n - 1)


def test_lower_bound_formula():
    assert free_pair_lower_bound(1) == 3.0
    assert free_pair_lower_bound(22) == pytest.approx(3 ** (1 / 22))


def test_csv_layout():
    lines = beta(generating_set(F2), 2).to_csv().splitlines()
    assert lines[0] == "k,beta,upper_bound"
    assert lines[1] == "0,1,"
    assert lines[2] == "1,5,5.0"


def test_modular_table_is_deterministic():
    S = generating_set(get_preset("modular"))
    assert beta(S, 8).to_json() == beta(S, 8).to_json()


def test_certificate_for_free_group():
    cert = uniform_growth_certificate(F2, with_n0=False)
    doc = cert.to_json()
    assert doc["kind"] == "uniform-growth-certificate"
    assert doc["lower_bound"] == 3.0
    assert doc["pipeline_lower_bound"] == pytest.approx(3 ** (1 / cert.ell))


def test_cyclic_is_virtually_cyclic():
    doc = uniform_growth_certificate(get_preset("cyclic")).to_json()
    assert doc["kind"] == "virtually-cyclic"
    assert set(doc["dichotomy"].values()) == {"same"}


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "A", "B", "ab", "aB", "ba"]), min_size=1, max_size=3,
                unique=True))
def test_counts_submultiplicative(words):
    table = beta(generating_set(F2, [F2.parse(w) for w in words]), 5)
    assert table.submultiplicative()
    upper, _ = omega_bounds(table)
    assert upper >= 1.0
