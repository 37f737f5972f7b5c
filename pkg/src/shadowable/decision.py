"""Infinite-horizon shadowability decisions by subset construction.

The adversary builds a δ-pseudo-orbit one point at a time; the engine tracks
the feasible set ``U`` of trace values ``f_ω^n(z)`` that some shadowing pair
``(z, ω)`` consistent with the prefix can occupy. A configuration is the pair
``(current point, U)``. The point is not shadowable iff a configuration with
``U = ∅`` is reachable: branching is finite, so an infinite unshadowable
pseudo-orbit has a finite prefix that already kills every candidate (König),
and any finite δ-prefix extends to an infinite one via exact steps.

Because the step operator is monotone in ``U``, configurations dominated by
an already explored one at the same point (smaller ``U``) are skipped; the
explored sets per point form an antichain of minimal masks.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .action import (
    PseudoOrbit,
    SemigroupSystem,
    _dp_step,
    admissible,
    certify_shadowing,
    check_selector,
    step_generators,
    validate_pseudo_orbit,
)
from .metric import Number, as_fraction, check_mode, critical_distances, members, set_of, within
from .symbolic import BudgetExceeded, Selector, Word

Config = tuple[int, int]  # (point, feasible bitmask)


@dataclass(frozen=True)
class ShadowDecision:
    shadowable: bool
    point: int
    delta: Fraction
    eps: Fraction
    mode: str = "closed"
    witness: PseudoOrbit | None = None
    witness_steps: tuple[frozenset[int], ...] = ()
    safe_configs: tuple[tuple[int, frozenset[int]], ...] = field(default=(), repr=False)
    explored: int = 0

    @property
    def verdict(self) -> str:
        return "shadowable" if self.shadowable else "not-shadowable"

    @property
    def witness_len(self) -> int:
        """Number of steps in the failing prefix (0 when shadowable)."""
        return len(self.witness.prefix) - 1 if self.witness is not None else 0

    def __bool__(self) -> bool:
        return self.shadowable


class _Engine:
    def __init__(self, sys: SemigroupSystem, delta: Fraction, eps: Fraction, mode: str, selector: str):
        self.sys = sys
        self.delta, self.eps, self.mode, self.selector = delta, eps, mode, selector
        self.balls = sys.space.ball_masks(eps, mode)
        n = sys.n
        self.moves: list[list[tuple[int, tuple[int, ...]]]] = []
        for p in range(n):
            row = []
            for q in range(n):
                J = step_generators(sys, p, q, delta, mode, selector)
                if selector == "fixed":
                    # The adversary commits to a symbol; the shadow must follow it.
                    row.extend((q, (j,)) for j in J)
                elif J:
                    row.append((q, J))
            self.moves.append(row)
        self._img: dict[tuple[tuple[int, ...], int], int] = {}

    def image(self, J: tuple[int, ...], U: int) -> int:
        key = (J, U)
        out = self._img.get(key)
        if out is None:
            out = 0
            gens = self.sys.generators
            for u in members(U):
                for j in J:
                    out |= 1 << gens[j][u]
            self._img[key] = out
        return out

    def run(self, starts: Iterable[int], budget: int) -> tuple[bool, list | None, dict, int]:
        """BFS from ``(x0, ball(x0, eps))``; returns (safe, witness path, antichain, explored)."""
        anti: dict[int, list[int]] = {}
        parent: dict[Config, tuple[Config, tuple[int, ...]] | None] = {}
        queue: deque[Config] = deque()

        def admit(cfg: Config) -> bool:
            p, U = cfg
            lst = anti.setdefault(p, [])
            for M in lst:
                if M & U == M:
                    return False
            lst[:] = [M for M in lst if U & M != U]
            lst.append(U)
            return True

        def path_to(cfg: Config) -> list:
            steps = []
            while parent[cfg] is not None:
                prev, J = parent[cfg]
                steps.append((cfg[0], J))
                cfg = prev
            steps.append((cfg[0], None))
            return steps[::-1]

        for x0 in starts:
            cfg = (x0, self.balls[x0])
            if cfg in parent:
                continue
            parent[cfg] = None
            if cfg[1] == 0:
                return False, path_to(cfg), anti, 0
            if admit(cfg):
                queue.append(cfg)
        explored = 0
        while queue:
            cfg = queue.popleft()
            explored += 1
            if explored > budget:
                raise BudgetExceeded(f"decision explored more than {budget} configurations")
            p, U = cfg
            for q, J in self.moves[p]:
                V = self.image(J, U) & self.balls[q]
                nxt = (q, V)
                if nxt in parent:
                    continue
                parent[nxt] = (cfg, J)
                if V == 0:
                    return False, path_to(nxt), anti, explored
                if admit(nxt):
                    queue.append(nxt)
        return True, None, anti, explored


DEFAULT_CONFIG_BUDGET = 2_000_000


def _no_pseudo_orbits(delta: Fraction, mode: str) -> bool:
    # Open comparison at δ = 0 admits no step at all.
    return mode == "open" and delta == 0


def _decide(sys, starts, x, delta, eps, mode, selector, budget) -> ShadowDecision:
    check_mode(mode)
    check_selector(selector)
    delta, eps = as_fraction(delta), as_fraction(eps)
    if delta < 0 or eps < 0:
        raise ValueError("delta and eps must be nonnegative")
    if _no_pseudo_orbits(delta, mode):
        return ShadowDecision(True, x, delta, eps, mode)
    eng = _Engine(sys, delta, eps, mode, selector)
    safe, path, anti, explored = eng.run(starts, budget)
    if safe:
        configs = tuple((p, set_of(U)) for p in sorted(anti) for U in sorted(anti[p]))
        return ShadowDecision(True, x, delta, eps, mode, safe_configs=configs, explored=explored)
    points = tuple(p for p, _ in path)
    used = tuple(J for _, J in path[1:])
    # Witness selector: the committed symbols in fixed mode, else any admissible choice.
    sel = Selector(Word(tuple(min(J) for J in used), sys.m), Word((0,), sys.m))
    steps = tuple(admissible(sys, a, b, delta, mode) for a, b in zip(points, points[1:]))
    witness = PseudoOrbit(points, selector=sel)
    return ShadowDecision(False, x, delta, eps, mode, witness=witness, witness_steps=steps, explored=explored)


def point_shadowable(
    sys: SemigroupSystem,
    x: int,
    delta: Number,
    eps: Number,
    mode: str = "closed",
    selector: str = "shared",
    budget: int = DEFAULT_CONFIG_BUDGET,
) -> ShadowDecision:
    """Is every infinite δ-pseudo-orbit starting at ``x`` ε-shadowed?"""
    return _decide(sys, [x], x, delta, eps, mode, selector, budget)


def point_shadowable_near(
    sys: SemigroupSystem,
    x: int,
    delta: Number,
    eps: Number,
    mode: str = "closed",
    selector: str = "shared",
    budget: int = DEFAULT_CONFIG_BUDGET,
) -> ShadowDecision:
    """Like :func:`point_shadowable`, but the pseudo-orbit may start anywhere δ-close to ``x``."""
    check_mode(mode)
    delta = as_fraction(delta)
    row = sys.space.dist[x]
    starts = [x0 for x0 in range(sys.n) if within(row[x0], delta, mode)]
    return _decide(sys, starts, x, delta, eps, mode, selector, budget)


def potp(sys: SemigroupSystem, delta: Number, eps: Number, mode: str = "closed", selector: str = "shared") -> bool:
    """Every δ-pseudo-orbit, wherever it starts, is ε-shadowed."""
    return potp_through(sys, range(sys.n), delta, eps, mode, selector)


def potp_through(
    sys: SemigroupSystem,
    K: Iterable[int],
    delta: Number,
    eps: Number,
    mode: str = "closed",
    selector: str = "shared",
) -> bool:
    K = sorted(set(K))
    if not K:
        return True
    if _no_pseudo_orbits(as_fraction(delta), mode):
        return True
    # One joint search from every start in K; failure anywhere refutes the whole set.
    return _decide(sys, K, K[0], delta, eps, mode, selector, DEFAULT_CONFIG_BUDGET).shadowable


def threshold_map(
    sys: SemigroupSystem,
    eps: Number,
    mode: str = "closed",
    selector: str = "shared",
    grid: Sequence[Fraction] | None = None,
) -> dict[int, Fraction | None]:
    """Largest grid δ at which each point is shadowable at ``eps``.

    Scans the grid from the top, so no monotonicity in δ is assumed. ``None``
    only if no grid value works (impossible in closed mode, where exact
    orbits shadow themselves at δ = 0).
    """
    if grid is None:
        grid = critical_distances(sys.space, sys.generators)
    out: dict[int, Fraction | None] = {}
    for x in range(sys.n):
        out[x] = None
        for d in sorted(grid, reverse=True):
            if point_shadowable(sys, x, d, eps, mode, selector):
                out[x] = d
                break
    return out


def oracle_shadowable_bounded(
    sys: SemigroupSystem,
    x: int,
    delta: Number,
    eps: Number,
    T: int,
    mode: str = "closed",
    selector: str = "shared",
    budget: int = 1_000_000,
) -> bool:
    """Brute-force check over every δ-pseudo-orbit prefix of 1..T steps from ``x``.

    Prefixes are extended level by level with the feasible-set step used by
    :func:`certify_shadowing`. Prefixes ending in the same point with the same
    feasible set have identical futures, so only one representative of each
    such pair is kept; nothing else is pruned. Raises
    :class:`BudgetExceeded` instead of guessing when ``budget`` prefixes have
    been examined.
    """
    check_mode(mode)
    check_selector(selector)
    delta, eps = as_fraction(delta), as_fraction(eps)
    if T <= 0:
        return True
    row = sys.space.dist
    U0 = frozenset(b for b in range(sys.n) if within(row[x][b], eps, mode))
    level = {(x, U0)}
    seen = set(level)
    examined = 0
    for _ in range(T):
        nxt = set()
        for p, U in level:
            for q in range(sys.n):
                J = step_generators(sys, p, q, delta, mode, selector)
                if not J:
                    continue
                for Js in ([(j,) for j in J] if selector == "fixed" else [J]):
                    examined += 1
                    if examined > budget:
                        raise BudgetExceeded(f"oracle examined more than {budget} prefixes")
                    V = frozenset(_dp_step(sys, U, Js, q, eps, mode))
                    if not V:
                        return False
                    if (q, V) not in seen:
                        seen.add((q, V))
                        nxt.add((q, V))
        if not nxt:
            break
        level = nxt
    return True


def config_bound(sys: SemigroupSystem) -> int:
    """``N * 2**N``: no shortest failing prefix is longer than this."""
    return sys.n * 2**sys.n


def witness_is_valid(sys: SemigroupSystem, dec: ShadowDecision, selector: str = "shared", near: bool = False) -> bool:
    """Independent re-check of a not-shadowable verdict's witness.

    The witness must start at the decided point (within δ of it when
    ``near``), be a δ-pseudo-orbit, and admit no certificate at ε.
    """
    if dec.shadowable or dec.witness is None:
        return False
    po = dec.witness if selector == "fixed" else PseudoOrbit(dec.witness.prefix)
    start = po.prefix[0]
    if near:
        if not within(sys.space.dist[dec.point][start], dec.delta, dec.mode):
            return False
    elif start != dec.point:
        return False
    adm = validate_pseudo_orbit(sys, po, dec.delta, dec.mode)
    if not adm.valid or (selector == "fixed" and not adm.selector_ok):
        return False
    return certify_shadowing(sys, po, dec.delta, dec.eps, dec.mode, selector) is None
