import itertools
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from shadowable.action import SemigroupSystem
from shadowable.catalog import sys3_constant, sys3_full, sys3_identity
from shadowable.metric import build_space, within

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def sys3():
    return sys3_full()


@pytest.fixture
def sys3_id():
    return sys3_identity()


@pytest.fixture
def sys3_const():
    return sys3_constant()


@st.composite
def systems(draw, max_n=4, max_m=2, min_n=1):
    """Points on a line at distinct integer positions, divided by a random scale."""
    n = draw(st.integers(min_n, max_n))
    pos = draw(st.lists(st.integers(0, 12), min_size=n, max_size=n, unique=True))
    scale = draw(st.sampled_from([1, 2, 3, 4]))
    space = build_space(coords=[Fraction(p, scale) for p in pos])
    m = draw(st.integers(1, max_m))
    gens = tuple(tuple(draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))) for _ in range(m))
    return SemigroupSystem(space, gens, "hyp")


def brute_certify(sys, points, delta, eps, mode="closed", selector="shared"):
    """Try every start and every admissible symbol sequence."""
    d = sys.space.dist
    steps = []
    for p, q in zip(points, points[1:]):
        J = [j for j in range(sys.m) if within(d[sys.generators[j][p]][q], delta, mode)]
        steps.append(J if selector == "shared" else list(range(sys.m)))
    for z in range(sys.n):
        for w in itertools.product(*steps):
            t, ok = z, within(d[z][points[0]], eps, mode)
            for j, x in zip(w, points[1:]):
                t = sys.generators[j][t]
                ok = ok and within(d[t][x], eps, mode)
            if ok:
                return True
    return False


def pseudo_orbits(sys, delta, length, mode="closed"):
    d = sys.space.dist

    def extend(path):
        if len(path) == length:
            yield tuple(path)
            return
        p = path[-1]
        for q in range(sys.n):
            if any(within(d[g[p]][q], delta, mode) for g in sys.generators):
                yield from extend(path + [q])

    for x in range(sys.n):
        yield from extend([x])
