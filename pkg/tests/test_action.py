import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shadowable.action import (
    InvalidPseudoOrbit,
    PseudoOrbit,
    SemigroupSystem,
    ShadowCertificate,
    apply_selector_prefix,
    apply_word,
    certify_shadowing,
    check_certificate,
    modulus,
    validate_pseudo_orbit,
)
from shadowable.metric import critical_distances
from shadowable.symbolic import Selector, Word, reverse

from conftest import brute_certify, pseudo_orbits, systems

F = Fraction


def test_system_validation(sys3):
    with pytest.raises(ValueError):
        SemigroupSystem(sys3.space, ())
    with pytest.raises(ValueError):
        SemigroupSystem(sys3.space, ((0, 1),))
    with pytest.raises(ValueError):
        SemigroupSystem(sys3.space, ((0, 1, 3),))


def test_apply_word(sys3):
    assert apply_word(sys3, Word.parse("1", 2), 2) == 0
    assert apply_word(sys3, Word.parse("01", 2), 2) == 0
    assert apply_word(sys3, Word.parse("", 2), 1) == 1


def test_apply_selector_prefix(sys3):
    assert apply_selector_prefix(sys3, Selector.parse("1", "0", 2), 2, 2) == 0
    assert apply_selector_prefix(sys3, Selector.parse("", "01", 2), 0, 2) == 2
    assert apply_selector_prefix(sys3, Selector.parse("", "0", 2), 5, 1) == 1


def test_validate_examples(sys3):
    adm = validate_pseudo_orbit(sys3, PseudoOrbit((2, 0, 0)), 0)
    assert adm.valid and adm.steps == (frozenset({1}), frozenset({0, 1}))
    adm = validate_pseudo_orbit(sys3, PseudoOrbit((2, 1)), F(1, 2))
    assert not adm.valid and adm.rejected_at == 0
    adm = validate_pseudo_orbit(sys3, PseudoOrbit((2, 1)), 1)
    assert adm.valid and adm.steps[0] == {0, 1}


def test_validate_reports_own_selector(sys3):
    po = PseudoOrbit((2, 0, 0), selector=Selector.parse("1", "0", 2))
    assert validate_pseudo_orbit(sys3, po, 0).selector_ok
    po = PseudoOrbit((2, 0, 0), selector=Selector.parse("0", "0", 2))
    assert validate_pseudo_orbit(sys3, po, 0).selector_ok is False


def test_certificate_eventually_periodic(sys3):
    po = PseudoOrbit((2, 1, 0), cycle=(0,))
    cert = certify_shadowing(sys3, po, 1, 1)
    assert cert is not None and check_certificate(sys3, po, cert, 1)
    # The hand-derived pair is also a certificate.
    hand = ShadowCertificate(2, Selector.parse("", "1", 2), F(1), F(1))
    assert check_certificate(sys3, po, hand, 1)
    trace = [apply_selector_prefix(sys3, hand.selector, n, 2) for n in range(4)]
    assert trace == [2, 0, 0, 0]
    assert [sys3.space.dist[t][x] for t, x in zip(trace, [2, 1, 0, 0])] == [0, 1, 0, 0]


def test_exact_orbit_shadows_itself(sys3):
    po = PseudoOrbit((2,), cycle=(2,))
    cert = certify_shadowing(sys3, po, 0, 0)
    assert cert.z == 2 and cert.selector[0] == 0 and cert.selector[7] == 0


def test_identity_trace_cannot_move(sys3_id):
    po = PseudoOrbit((0, 1, 2), cycle=(2,))
    assert certify_shadowing(sys3_id, po, 1, 0) is None


def test_invalid_pseudo_orbit_raises(sys3):
    with pytest.raises(InvalidPseudoOrbit) as e:
        certify_shadowing(sys3, PseudoOrbit((2, 1)), F(1, 2), 1)
    assert e.value.step == 0


def test_modulus(sys3, sys3_const):
    assert modulus(sys3, 1) == 1
    assert modulus(sys3_const, 2) == 0
    assert modulus(sys3, 0) == 0


def test_fixed_selector_needs_own_selector(sys3):
    with pytest.raises(ValueError):
        certify_shadowing(sys3, PseudoOrbit((2, 0)), 0, 0, selector="fixed")


@given(systems(max_n=4), st.integers(1, 4), st.sampled_from(["shared", "free"]), st.sampled_from(["closed", "open"]))
def test_certify_complete_on_finite_horizons(sys, length, selector, mode):
    g = critical_distances(sys.space, sys.generators)
    for delta in g[:: max(1, len(g) // 3)]:
        for eps in g[:: max(1, len(g) // 3)]:
            for pts in itertools.islice(pseudo_orbits(sys, delta, length, mode), 40):
                po = PseudoOrbit(pts)
                cert = certify_shadowing(sys, po, delta, eps, mode, selector)
                assert (cert is not None) == brute_certify(sys, pts, delta, eps, mode, selector)
                if cert is not None:
                    assert check_certificate(sys, po, cert, delta, selector)


@given(systems(max_n=4), st.data())
def test_certify_sound_on_eventually_periodic(sys, data):
    g = critical_distances(sys.space, sys.generators)
    delta = data.draw(st.sampled_from(g))
    eps = data.draw(st.sampled_from(g))
    pre = data.draw(st.lists(st.integers(0, sys.n - 1), min_size=1, max_size=3))
    cyc = data.draw(st.lists(st.integers(0, sys.n - 1), min_size=1, max_size=3))
    po = PseudoOrbit(pre, cyc)
    if not validate_pseudo_orbit(sys, po, delta).valid:
        return
    cert = certify_shadowing(sys, po, delta, eps)
    if cert is not None:
        assert check_certificate(sys, po, cert, delta)
        # Monotone in eps.
        for e2 in g:
            if e2 >= eps:
                assert check_certificate(sys, po, ShadowCertificate(cert.z, cert.selector, e2, cert.delta), delta)
    else:
        # Some finite prefix is already uncertifiable.
        horizon = len(pre) + len(cyc) * (2**sys.n + 1)
        assert certify_shadowing(sys, PseudoOrbit(po.points(horizon + 1)), delta, eps) is None


@given(systems(max_n=4), st.data())
def test_selector_convention_bridge(sys, data):
    pre = data.draw(st.lists(st.integers(0, sys.m - 1), max_size=3))
    per = data.draw(st.lists(st.integers(0, sys.m - 1), min_size=1, max_size=3))
    sel = Selector.parse(pre, per, sys.m)
    for x in range(sys.n):
        for n in range(6):
            assert apply_selector_prefix(sys, sel, n, x) == apply_word(sys, reverse(sel.prefix(n)), x)
