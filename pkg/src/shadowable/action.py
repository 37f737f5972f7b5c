"""Free semigroup systems on finite metric spaces: orbits, pseudo-orbits, shadowing.

A system is a :class:`FiniteMetricSpace` plus generators ``f_0..f_{m-1}``
tabulated as index arrays. ``apply_word`` composes right to left
(``f_{w_1 w_2} = f_{w_1} ∘ f_{w_2}``); ``apply_selector_prefix`` runs a
selector forward in time (``f_{w_0}`` first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .metric import FiniteMetricSpace, Number, as_fraction, check_mode, within
from .symbolic import Selector, Word


class InvalidPseudoOrbit(ValueError):
    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


@dataclass(frozen=True)
class SemigroupSystem:
    space: FiniteMetricSpace
    generators: tuple[tuple[int, ...], ...]
    name: str = "system"

    def __post_init__(self):
        gens = tuple(tuple(int(v) for v in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        n = len(self.space)
        if not gens:
            raise ValueError("a system needs at least one generator")
        for j, g in enumerate(gens):
            if len(g) != n:
                raise ValueError(f"generator {j} has {len(g)} entries for {n} points")
            for a, b in enumerate(g):
                if not 0 <= b < n:
                    raise ValueError(f"generator {j} maps point {a} to invalid index {b}")

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def n(self) -> int:
        return len(self.space)

    def restrict(self, keep: Sequence[int], name: str | None = None) -> "SemigroupSystem":
        """Subsystem generated by the listed generators (in the given order)."""
        return SemigroupSystem(self.space, tuple(self.generators[j] for j in keep), name or self.name)

    def __repr__(self) -> str:
        return f"SemigroupSystem({self.name!r}, n={self.n}, m={self.m})"


def apply_word(sys: SemigroupSystem, w: Word | Sequence[int], x: int) -> int:
    for s in reversed(tuple(w)):
        x = sys.generators[s][x]
    return x


def apply_selector_prefix(sys: SemigroupSystem, sel: Selector, n: int, x: int) -> int:
    for i in range(n):
        x = sys.generators[sel[i]][x]
    return x


def modulus(sys: SemigroupSystem, delta: Number, mode: str = "closed") -> Fraction:
    """Largest ``d(f_j(a), f_j(b))`` over generators and pairs with ``d(a, b)`` within ``delta``."""
    check_mode(mode)
    delta = as_fraction(delta)
    dist = sys.space.dist
    best = Fraction(0)
    for a in range(sys.n):
        for b in range(sys.n):
            if within(dist[a][b], delta, mode):
                for g in sys.generators:
                    v = dist[g[a]][g[b]]
                    if v > best:
                        best = v
    return best


@dataclass(frozen=True)
class PseudoOrbit:
    """Finite sequence ``prefix``, or ``prefix · cycle^∞`` when ``cycle`` is nonempty."""

    prefix: tuple[int, ...]
    cycle: tuple[int, ...] = ()
    selector: Selector | None = None

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.prefix and not self.cycle:
            raise ValueError("pseudo-orbit must be nonempty")

    @property
    def infinite(self) -> bool:
        return bool(self.cycle)

    def point(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        if not self.cycle:
            raise IndexError(f"finite pseudo-orbit has no index {n}")
        return self.cycle[(n - len(self.prefix)) % len(self.cycle)]

    @property
    def n_steps(self) -> int:
        """Number of distinct transitions: ``len-1`` if finite, preperiod+period otherwise."""
        if self.cycle:
            return len(self.prefix) + len(self.cycle)
        return len(self.prefix) - 1

    def points(self, n: int) -> list[int]:
        return [self.point(i) for i in range(n)]


@dataclass(frozen=True)
class Admissibility:
    """Per-step admissible generator sets of a pseudo-orbit at some δ."""

    steps: tuple[frozenset[int], ...]
    rejected_at: int | None
    selector_ok: bool | None = None

    @property
    def valid(self) -> bool:
        return self.rejected_at is None

    def at(self, i: int, po: PseudoOrbit) -> frozenset[int]:
        # Steps past the stored range repeat with the cycle.
        if i < len(self.steps):
            return self.steps[i]
        off = len(po.prefix)
        return self.steps[off + (i - off) % len(po.cycle)]


def admissible(sys: SemigroupSystem, p: int, q: int, delta: Fraction, mode: str) -> frozenset[int]:
    row = sys.space.dist
    return frozenset(j for j, g in enumerate(sys.generators) if within(row[g[p]][q], delta, mode))


# shared: the shadowing orbit may use any generator admissible for the step.
# fixed:  it must use the pseudo-orbit's own selector.
# free:   any generator at all.
SELECTOR_MODES = ("shared", "fixed", "free")


def check_selector(selector: str) -> str:
    if selector not in SELECTOR_MODES:
        raise ValueError(f"selector must be one of {SELECTOR_MODES}, got {selector!r}")
    return selector


def step_generators(
    sys: SemigroupSystem, p: int, q: int, delta: Fraction, mode: str, selector: str = "shared"
) -> tuple[int, ...]:
    """Generators the shadowing orbit may use on the step ``p -> q``.

    Empty when the step itself is not a δ-step, whatever the selector mode.
    In ``fixed`` mode this is the set the pseudo-orbit's selector chooses
    from; callers then restrict to the chosen symbol.
    """
    J = admissible(sys, p, q, delta, mode)
    if not J:
        return ()
    return tuple(range(sys.m)) if selector == "free" else tuple(sorted(J))


def validate_pseudo_orbit(sys: SemigroupSystem, po: PseudoOrbit, delta: Number, mode: str = "closed") -> Admissibility:
    check_mode(mode)
    delta = as_fraction(delta)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    steps = []
    rejected = None
    for i in range(po.n_steps):
        J = admissible(sys, po.point(i), po.point(i + 1), delta, mode)
        steps.append(J)
        if not J and rejected is None:
            rejected = i
    sel_ok = None
    if po.selector is not None:
        if po.selector.m != sys.m:
            raise ValueError(f"selector alphabet {po.selector.m} != {sys.m} generators")
        sel_ok = rejected is None and all(po.selector[i] in steps[i] for i in range(len(steps)))
        if sel_ok and po.infinite:
            # Periodic tail: check one joint period of selector and cycle.
            span = _joint_period(po, po.selector)
            base = len(steps)
            adm = Admissibility(tuple(steps), None)
            sel_ok = all(po.selector[i] in adm.at(i, po) for i in range(base, base + span))
    return Admissibility(tuple(steps), rejected, sel_ok)


def _joint_period(po: PseudoOrbit, sel: Selector) -> int:
    return lcm(len(po.cycle) or 1, len(sel.period)) + len(sel.preperiod)


@dataclass(frozen=True)
class ShadowCertificate:
    z: int
    selector: Selector
    epsilon: Fraction
    delta: Fraction
    mode: str = "closed"
    trace: tuple[int, ...] = field(default=(), compare=False)


def _dp_step(
    sys: SemigroupSystem, U: frozenset[int], J: Sequence[int], target: int, eps: Fraction, mode: str
) -> dict[int, tuple[int, int]]:
    """One forward step of the feasible-set DP with back-pointers ``v -> (u, j)``."""
    row = sys.space.dist
    out: dict[int, tuple[int, int]] = {}
    for u in sorted(U):
        for j in J:
            v = sys.generators[j][u]
            if v not in out and within(row[v][target], eps, mode):
                out[v] = (u, j)
    return out


def feasible_sets(
    sys: SemigroupSystem,
    points: Sequence[int],
    delta: Number,
    eps: Number,
    mode: str = "closed",
    selector: str = "shared",
    symbols: Sequence[int] | None = None,
) -> list[frozenset[int]]:
    """Feasible trace sets ``U_0..U_{n-1}`` along a finite point sequence.

    Stops early (last entry empty) once a set empties. Steps that are not
    admissible at ``delta`` get an empty generator set. ``fixed`` mode needs
    the pseudo-orbit's ``symbols``.
    """
    if selector == "fixed" and symbols is None:
        raise ValueError("fixed selector mode needs the pseudo-orbit's symbols")
    delta, eps = as_fraction(delta), as_fraction(eps)
    row = sys.space.dist
    U = frozenset(b for b in range(sys.n) if within(row[points[0]][b], eps, mode))
    out = [U]
    for i in range(len(points) - 1):
        if not U:
            break
        J = step_generators(sys, points[i], points[i + 1], delta, mode, selector)
        if selector == "fixed":
            J = (symbols[i],) if symbols[i] in J else ()
        U = frozenset(_dp_step(sys, U, J, points[i + 1], eps, mode))
        out.append(U)
    return out


def certify_shadowing(
    sys: SemigroupSystem,
    po: PseudoOrbit,
    delta: Number,
    eps: Number,
    mode: str = "closed",
    selector: str = "shared",
) -> ShadowCertificate | None:
    """Find ``(z, ω)`` whose orbit stays within ``eps`` of ``po``, or ``None``.

    With ``selector="shared"`` ``ω`` must pick an admissible generator at
    every step, ``"fixed"`` forces ``ω`` to be ``po.selector`` and ``"free"``
    drops the requirement. Runs the forward feasible-set DP; in the
    eventually periodic case the DP state ``(phase, U)`` is iterated until it
    repeats and the certificate is read off a cycle of back-pointers.
    """
    check_mode(mode)
    check_selector(selector)
    delta, eps = as_fraction(delta), as_fraction(eps)
    adm = validate_pseudo_orbit(sys, po, delta, mode)
    if not adm.valid:
        raise InvalidPseudoOrbit(f"not a {delta}-pseudo-orbit: no admissible generator at step {adm.rejected_at}", adm.rejected_at)
    if selector == "fixed":
        if po.selector is None:
            raise ValueError("fixed selector mode needs a pseudo-orbit carrying its selector")
        if not adm.selector_ok:
            raise InvalidPseudoOrbit(f"selector {po.selector} is not admissible at {delta}", -1)

    row = sys.space.dist
    all_j = tuple(range(sys.m))

    def J_at(t: int) -> Sequence[int]:
        if selector == "fixed":
            return (po.selector[t],)
        return all_j if selector == "free" else sorted(adm.at(t, po))

    x0 = po.point(0)
    U = frozenset(b for b in range(sys.n) if within(row[x0][b], eps, mode))
    if not U:
        return None
    sets = [U]
    back: list[dict[int, tuple[int, int]]] = [{}]

    def walk_back(v: int, t_from: int, t_to: int) -> tuple[int, list[int]]:
        syms = []
        for t in range(t_from, t_to, -1):
            v, j = back[t][v]
            syms.append(j)
        return v, syms[::-1]

    if not po.infinite:
        for t in range(po.n_steps):
            bp = _dp_step(sys, sets[-1], J_at(t), po.point(t + 1), eps, mode)
            if not bp:
                return None
            sets.append(frozenset(bp))
            back.append(bp)
        T = len(sets) - 1
        z, syms = walk_back(min(sets[-1]), T, 0)
        sel = Selector(Word(syms, sys.m), Word((0,), sys.m))
        return ShadowCertificate(z, sel, eps, delta, mode, _trace(sys, z, sel, T + 1))

    pre, cyc = len(po.prefix), len(po.cycle)
    seen: dict[tuple[int, frozenset[int]], int] = {}
    t = 0
    while True:
        if t >= pre:
            key = ((t - pre) % cyc, sets[t])
            if key in seen:
                t0, t1 = seen[key], t
                break
            seen[key] = t
        bp = _dp_step(sys, sets[t], J_at(t), po.point(t + 1), eps, mode)
        if not bp:
            return None
        sets.append(frozenset(bp))
        back.append(bp)
        t += 1

    # U_{t1} == U_{t0}; back-pointers over (t0, t1] map it into itself.
    def one_round(v: int) -> tuple[int, list[int]]:
        return walk_back(v, t1, t0)

    order: dict[int, int] = {}
    v = min(sets[t0])
    chain = []
    while v not in order:
        order[v] = len(chain)
        chain.append(v)
        v, _ = one_round(v)
    start = v
    rounds = len(chain) - order[start]
    period_syms: list[int] = []
    cur = start
    for _ in range(rounds):
        cur, syms = one_round(cur)
        period_syms = syms + period_syms
    assert cur == start
    z, pre_syms = walk_back(start, t0, 0)
    sel = Selector(Word(pre_syms, sys.m), Word(period_syms, sys.m))
    return ShadowCertificate(z, sel, eps, delta, mode, _trace(sys, z, sel, t0 + len(period_syms) + 1))


def _trace(sys: SemigroupSystem, z: int, sel: Selector, n: int) -> tuple[int, ...]:
    out = [z]
    for i in range(n - 1):
        z = sys.generators[sel[i]][z]
        out.append(z)
    return tuple(out)


def check_certificate(
    sys: SemigroupSystem,
    po: PseudoOrbit,
    cert: ShadowCertificate,
    delta: Number | None = None,
    selector: str = "shared",
) -> bool:
    """Re-verify a certificate by direct simulation, without the DP.

    Infinite pseudo-orbits are simulated until the joint state (trace point,
    selector phase, orbit phase) repeats.
    """
    delta = cert.delta if delta is None else as_fraction(delta)
    row = sys.space.dist
    mode = cert.mode
    sel = cert.selector
    z = cert.z

    def ok(t: int, z: int) -> bool:
        if not within(row[z][po.point(t)], cert.epsilon, mode):
            return False
        if po.infinite or t < len(po.prefix) - 1:
            j = sel[t]
            if selector == "fixed" and (po.selector is None or j != po.selector[t]):
                return False
            if selector != "free" and not within(row[sys.generators[j][po.point(t)]][po.point(t + 1)], delta, mode):
                return False
        return True

    if not po.infinite:
        for t in range(len(po.prefix)):
            if not ok(t, z):
                return False
            if t < len(po.prefix) - 1:
                z = sys.generators[sel[t]][z]
        return True

    own = po.selector or sel
    settle = max(len(po.prefix), len(sel.preperiod), len(own.preperiod))
    seen = set()
    t = 0
    while True:
        if t >= settle:
            key = (
                z,
                (t - len(sel.preperiod)) % len(sel.period),
                (t - len(po.prefix)) % len(po.cycle),
                (t - len(own.preperiod)) % len(own.period),
            )
            if key in seen:
                return True
            seen.add(key)
        if not ok(t, z):
            return False
        z = sys.generators[sel[t]][z]
        t += 1
