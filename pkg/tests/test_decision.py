from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from shadowable.action import PseudoOrbit, SemigroupSystem, certify_shadowing, validate_pseudo_orbit
from shadowable.catalog import prepend_system
from shadowable.decision import (
    config_bound,
    oracle_shadowable_bounded,
    point_shadowable,
    point_shadowable_near,
    potp,
    potp_through,
    threshold_map,
    witness_is_valid,
)
from shadowable.metric import build_space, critical_distances
from shadowable.symbolic import BudgetExceeded

from conftest import brute_certify, systems

F = Fraction


def test_exact_orbits_shadow(sys3):
    assert point_shadowable(sys3, 0, 0, 0).shadowable


def test_identity_escape(sys3_id):
    dec = point_shadowable(sys3_id, 0, 1, F(1, 2))
    assert not dec.shadowable
    assert witness_is_valid(sys3_id, dec)
    assert dec.witness.prefix[0] == 0 and dec.witness_len >= 1
    # The longer hand-derived escape 0, 1, 2 refutes as well.
    assert certify_shadowing(sys3_id, PseudoOrbit((0, 1, 2)), 1, F(1, 2)) is None
    assert not brute_certify(sys3_id, (0, 1, 2), 1, F(1, 2))


def test_diameter_eps(sys3):
    assert point_shadowable(sys3, 0, 1, 2).shadowable
    assert point_shadowable_near(sys3, 0, 1, 2).shadowable


def test_near_start(sys3, sys3_id):
    for x in range(3):
        assert point_shadowable_near(sys3, x, 0, 0).shadowable == point_shadowable(sys3, x, 0, 0).shadowable
    dec = point_shadowable_near(sys3_id, 0, 1, F(1, 2))
    assert not dec.shadowable and witness_is_valid(sys3_id, dec, near=True)


def test_threshold_examples(sys3_id, sys3):
    assert threshold_map(sys3_id, F(1, 2)) == {0: 0, 1: 0, 2: 0}
    top = max(critical_distances(sys3.space, sys3.generators))
    assert set(threshold_map(sys3, 2).values()) == {top}
    one = SemigroupSystem(build_space(coords=[0]), ((0,),))
    assert threshold_map(one, 0) == {0: 0}


def test_potp_examples(sys3_id, sys3):
    assert potp(prepend_system(2, 4), F(1, 8), F(1, 4))
    assert not potp(sys3_id, 1, F(1, 2))
    assert potp(sys3, 0, 0) and potp(sys3_id, 0, 0)


def test_potp_through(sys3_id):
    assert potp_through(sys3_id, range(3), 1, F(1, 2)) == potp(sys3_id, 1, F(1, 2))
    assert potp_through(sys3_id, [], 1, F(1, 2))
    assert not potp_through(sys3_id, [0], 1, F(1, 2))


def test_oracle_examples(sys3_id):
    assert oracle_shadowable_bounded(sys3_id, 0, 1, F(1, 2), 0)
    assert not oracle_shadowable_bounded(sys3_id, 0, 1, F(1, 2), 2)
    with pytest.raises(BudgetExceeded):
        oracle_shadowable_bounded(prepend_system(2, 4), 0, 1, 1, 50, budget=10)


def test_open_mode_zero_delta_is_vacuous(sys3_id):
    assert point_shadowable(sys3_id, 0, 0, 0, mode="open").shadowable


def test_budget_exceeded(sys3_id):
    with pytest.raises(BudgetExceeded):
        point_shadowable(prepend_system(2, 5), 0, 1, 1, budget=1)


def non_monotone_system():
    """Points at 0, 1, 5 on a line; f0 swaps 0 and 1, f1 sends 2 to 1."""
    space = build_space(table=[[0, 1, 5], [1, 0, 4], [5, 4, 0]])
    return SemigroupSystem(space, ((1, 0, 2), (0, 1, 1)), "non-monotone")


def test_shared_selector_not_downward_closed_in_delta():
    s = non_monotone_system()
    small = point_shadowable(s, 0, 4, 4)
    big = point_shadowable(s, 0, 5, 4)
    assert not small.shadowable and big.shadowable
    assert witness_is_valid(s, small)
    assert small.witness.prefix == (0, 2, 0, 2)
    # The independent oracle agrees on both verdicts.
    T = config_bound(s)
    assert not oracle_shadowable_bounded(s, 0, 4, 4, T)
    assert oracle_shadowable_bounded(s, 0, 5, 4, T)
    # At the larger delta the same points admit more generators, so more shadows qualify.
    po = PseudoOrbit(small.witness.prefix)
    assert certify_shadowing(s, po, 5, 4) is not None
    assert certify_shadowing(s, po, 4, 4) is None


@pytest.mark.parametrize("selector", ["fixed", "free"])
def test_fixed_and_free_monotone_on_counterexample(selector):
    s = non_monotone_system()
    g = critical_distances(s.space, s.generators)
    for x in range(s.n):
        for e in g:
            verdicts = [point_shadowable(s, x, d, e, selector=selector).shadowable for d in g]
            assert verdicts == sorted(verdicts, reverse=True)


@settings(max_examples=40)
@given(systems(max_n=4), st.sampled_from(["shared", "fixed", "free"]), st.sampled_from(["closed", "open"]))
def test_engine_matches_oracle(sys, selector, mode):
    g = critical_distances(sys.space, sys.generators)
    T = config_bound(sys)
    for x in range(sys.n):
        for d in g:
            for e in g:
                dec = point_shadowable(sys, x, d, e, mode, selector)
                assert dec.shadowable == oracle_shadowable_bounded(sys, x, d, e, T, mode, selector)
                if not dec.shadowable:
                    assert witness_is_valid(sys, dec, selector)


@given(systems(max_n=4), st.sampled_from(["fixed", "free"]))
def test_monotone_in_parameters(sys, selector):
    g = critical_distances(sys.space, sys.generators)
    for x in range(sys.n):
        table = [[point_shadowable(sys, x, d, e, selector=selector).shadowable for e in g] for d in g]
        for i in range(len(g)):
            for j in range(len(g)):
                if table[i][j]:
                    assert all(table[k][j] for k in range(i))
                    assert all(table[i][k] for k in range(j, len(g)))


@given(systems(max_n=4))
def test_shared_monotone_in_eps(sys):
    g = critical_distances(sys.space, sys.generators)
    for x in range(sys.n):
        for d in g:
            row = [point_shadowable(sys, x, d, e).shadowable for e in g]
            assert row == sorted(row)


@given(systems(max_n=4), st.sampled_from(["shared", "fixed", "free"]))
def test_eps_at_diameter_always_shadowable(sys, selector):
    diam = sys.space.diameter()
    for x in range(sys.n):
        for d in critical_distances(sys.space, sys.generators):
            assert point_shadowable(sys, x, d, diam, selector=selector).shadowable


@given(systems(max_n=4))
def test_potp_iff_every_point(sys):
    g = critical_distances(sys.space, sys.generators)
    for d in g:
        for e in g:
            assert potp(sys, d, e) == all(point_shadowable(sys, x, d, e).shadowable for x in range(sys.n))


@given(systems(max_n=4))
def test_below_least_positive_distance_everything_shadowable(sys):
    # delta = 0 in closed mode admits only exact orbits.
    assert potp(sys, 0, 0)


@given(systems(max_n=4))
def test_threshold_is_shadowable(sys):
    g = critical_distances(sys.space, sys.generators)
    for e in g:
        for x, d in threshold_map(sys, e).items():
            assert d is not None and point_shadowable(sys, x, d, e).shadowable
            assert not any(point_shadowable(sys, x, d2, e).shadowable for d2 in g if d2 > d)


@given(systems(max_n=3), st.data())
def test_shadowable_means_every_short_prefix_certified(sys, data):
    # Pure enumeration on short prefixes, independent of the feasible-set machinery.
    from conftest import pseudo_orbits

    g = critical_distances(sys.space, sys.generators)
    d, e = data.draw(st.sampled_from(g)), data.draw(st.sampled_from(g))
    for x in range(sys.n):
        dec = point_shadowable(sys, x, d, e)
        if dec.shadowable:
            for pts in pseudo_orbits(sys, d, 4):
                if pts[0] == x:
                    assert brute_certify(sys, pts, d, e)
        else:
            pts = dec.witness.prefix
            assert validate_pseudo_orbit(sys, PseudoOrbit(pts), d).valid
            assert not brute_certify(sys, pts, d, e)


def near_start_system():
    table = [
        [0, F(1, 12), F(5, 12), F(1, 4)],
        [F(1, 12), 0, F(1, 2), F(1, 3)],
        [F(5, 12), F(1, 2), 0, F(1, 6)],
        [F(1, 4), F(1, 3), F(1, 6), 0],
    ]
    return SemigroupSystem(build_space(table=table), ((2, 3, 1, 2), (1, 1, 3, 0)), "near-start")


def test_shared_selector_breaks_near_start_construction():
    from shadowable.checks import near_start_delta

    s = near_start_system()
    d1, e = F(1, 2), F(1, 3)
    d = near_start_delta(s, d1, e)
    assert d == F(1, 12)
    assert point_shadowable(s, 0, d1, e / 2).shadowable
    dec = point_shadowable_near(s, 0, d, e)
    assert not dec.shadowable and witness_is_valid(s, dec, near=True)
    # Not even the point itself survives the smaller delta.
    assert not oracle_shadowable_bounded(s, 0, d, e, config_bound(s))
    for sel in ("fixed", "free"):
        if point_shadowable(s, 0, d1, e / 2, selector=sel).shadowable:
            assert point_shadowable_near(s, 0, d, e, selector=sel).shadowable


@given(systems(max_n=4), st.sampled_from(["fixed", "free"]))
def test_near_start_under_fixed_and_free(sys, selector):
    from shadowable.checks import check_near_start

    assert check_near_start(sys, selector=selector).ok
