"""Builtin systems and seeded random systems."""

from __future__ import annotations

import random
from fractions import Fraction

from .action import SemigroupSystem
from .metric import FiniteMetricSpace, build_space
from .symbolic import DEFAULT_POINT_BUDGET, cylinder_space, prepend_generators


def line3() -> FiniteMetricSpace:
    """Points 0, 1, 2 on the integer line."""
    return build_space(coords=[0, 1, 2])


def sys3_full() -> SemigroupSystem:
    """``f_0`` = identity, ``f_1`` = constant map to point 0, on :func:`line3`."""
    return SemigroupSystem(line3(), ((0, 1, 2), (0, 0, 0)), "sys3-full")


def sys3_identity() -> SemigroupSystem:
    return sys3_full().restrict([0], "sys3-identity")


def sys3_constant() -> SemigroupSystem:
    return sys3_full().restrict([1], "sys3-constant")


def prepend_system(m: int = 2, K: int = 4, budget: int = DEFAULT_POINT_BUDGET) -> SemigroupSystem:
    """Prepend maps ``s -> j s`` on depth-``K`` words over ``m`` symbols."""
    cyl = cylinder_space(m, K, budget)
    return SemigroupSystem(cyl.space, tuple(prepend_generators(m, K)), f"prepend-m{m}-K{K}")


DISTANCE_MODELS = ("line", "circle")


def random_system(seed: int, n_points: int, m: int = 2, model: str = "line") -> SemigroupSystem:
    """Reproducible random system.

    Points sit at distinct integer positions ``0 <= p < L = 3 * n_points`` on
    a line, or on the cycle ``Z_L`` with the arc metric; distances are divided
    by ``L`` so the diameter stays below 1. The triangle inequality holds by
    construction. Generators are uniform random index maps.
    """
    if n_points < 1 or m < 1:
        raise ValueError("need n_points >= 1 and m >= 1")
    if model not in DISTANCE_MODELS:
        raise ValueError(f"distance model must be one of {DISTANCE_MODELS}")
    rng = random.Random(seed)
    span = 3 * n_points
    pos = sorted(rng.sample(range(span), n_points))
    if model == "line":
        table = [[Fraction(abs(a - b), span) for b in pos] for a in pos]
    else:
        table = [[Fraction(min(abs(a - b), span - abs(a - b)), span) for b in pos] for a in pos]
    space = build_space(table=table)
    gens = tuple(tuple(rng.randrange(n_points) for _ in range(n_points)) for _ in range(m))
    return SemigroupSystem(space, gens, f"random-{model}-s{seed}-n{n_points}-m{m}")


def random_corpus(count: int, seed: int, max_points: int, max_m: int = 2) -> list[SemigroupSystem]:
    """``count`` random systems with sizes and models drawn from ``seed``."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, max_points)
        m = rng.randint(1, max_m)
        model = rng.choice(DISTANCE_MODELS)
        out.append(random_system(rng.randrange(2**31), n, m, model))
    return out


def builtin_systems() -> list[SemigroupSystem]:
    return [sys3_full(), sys3_identity(), sys3_constant(), prepend_system(2, 2), prepend_system(2, 3)]
