import operator
from fractions import Fraction

from hypothesis import given

from shadowable.action import modulus
from shadowable.catalog import prepend_system
from shadowable.checks import check_cr_sh_in_omega, check_inclusions
from shadowable.metric import critical_distances
from shadowable.recurrence import (
    chain_graph,
    cr_eps,
    intersect_over_grid,
    omega_eps,
    recurrent_set,
    to_dot,
)

from conftest import systems

F = Fraction


def test_chain_graph_exact(sys3):
    g = chain_graph(sys3, 0)
    assert g.edges == {(x, x, 0) for x in range(3)} | {(x, 0, 1) for x in range(3)}


def test_chain_graph_eps1(sys3):
    g = chain_graph(sys3, 1)
    expected = {(p, q, 0) for p in range(3) for q in range(3) if abs(p - q) <= 1}
    expected |= {(p, q, 1) for p in range(3) for q in (0, 1)}
    assert g.edges == expected


def test_chain_graph_complete(sys3):
    assert len(chain_graph(sys3, 2).edges) == 2 * 9


def test_dot_export(sys3):
    text = to_dot(sys3, chain_graph(sys3, 1))
    assert 'n2 -> n1 [label="0", distance="1"];' in text
    assert text.startswith('digraph "sys3-full"')


def test_cr_examples(sys3, sys3_const):
    assert cr_eps(sys3, 0) == {0, 1, 2}
    assert cr_eps(sys3_const, 0) == {0}
    assert cr_eps(sys3_const, 1) == {0, 1}


def test_omega_examples(sys3, sys3_const):
    assert omega_eps(sys3_const, F(1, 2)) == {0}
    assert omega_eps(sys3_const, 2) == {0, 1, 2}
    assert omega_eps(sys3, F(1, 2)) == {0, 1, 2}


def test_recurrent_examples(sys3, sys3_const):
    assert recurrent_set(sys3) == {0, 1, 2}
    assert recurrent_set(sys3_const) == {0}
    assert recurrent_set(prepend_system(2, 2)) == {0, 1, 2, 3}


def test_intersect_over_grid(sys3_const):
    res = intersect_over_grid(lambda e: {1}, [0, 1], 3)
    assert res.result == {1} and not res.empty_grid
    res = intersect_over_grid(lambda e: cr_eps(sys3_const, e), critical_distances(sys3_const.space), 3)
    assert res.result == {0}
    assert [e for e, _ in res.trace] == [0, 1, 2]
    res = intersect_over_grid(lambda e: set(), [], 3)
    assert res.result == {0, 1, 2} and res.empty_grid
    # Open mode drops the zero resolution.
    res = intersect_over_grid(lambda e: {0}, [0], 3, "open")
    assert res.empty_grid


@given(systems(max_n=5))
def test_recurrent_inside_omega(sys):
    R = recurrent_set(sys)
    for e in critical_distances(sys.space, sys.generators):
        if e > 0:
            assert R <= omega_eps(sys, e)


@given(systems(max_n=5))
def test_omega_inside_cr_at_eps_plus_modulus(sys):
    for e in critical_distances(sys.space, sys.generators):
        if e > 0:
            assert omega_eps(sys, e) <= cr_eps(sys, e + modulus(sys, e))
    assert check_inclusions(sys, bound=operator.add).ok


@given(systems(max_n=5))
def test_sets_monotone_in_eps(sys):
    g = critical_distances(sys.space, sys.generators)
    for a, b in zip(g, g[1:]):
        assert cr_eps(sys, a) <= cr_eps(sys, b)
        assert omega_eps(sys, a) <= omega_eps(sys, b)


@given(systems(max_n=5))
def test_zero_resolution_collapses_to_recurrent(sys):
    R = recurrent_set(sys)
    assert cr_eps(sys, 0) == R
    assert omega_eps(sys, 0) == R
    assert omega_eps(sys, 0, "open") == frozenset()


@given(systems(max_n=4))
def test_cr_and_shadowable_in_omega(sys):
    assert check_cr_sh_in_omega(sys).ok


def test_one_step_return_needs_eps_plus_modulus():
    from shadowable.action import SemigroupSystem
    from shadowable.metric import build_space

    space = build_space(coords=[F(p, 15) for p in (0, 3, 4, 8, 9)])
    s = SemigroupSystem(space, ((1, 0, 1, 0, 2),), "one-step-return")
    e = F(4, 15)
    mod = modulus(s, e)
    assert mod == F(4, 15)
    # y = 4 sits in the ball around 3 and maps into it in one step.
    assert 3 in omega_eps(s, e)
    assert 3 not in cr_eps(s, max(e, mod))
    assert 3 in cr_eps(s, e + mod)
    assert not check_inclusions(s).ok and check_inclusions(s, bound=operator.add).ok
