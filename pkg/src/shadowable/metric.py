"""Exact finite metric spaces.

Distances are stored as :class:`fractions.Fraction`. Every threshold test in
the package goes through :func:`within`, so the open/closed comparison mode is
decided in one place.

Point sets are exposed as ``frozenset`` of point indices; internally the hot
loops use Python ints as bitmasks (bit ``i`` set iff point ``i`` is a member).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Literal, Sequence

import networkx as nx
import numpy as np

Mode = Literal["closed", "open"]
MODES = ("closed", "open")

Number = int | Fraction | str


class MetricError(ValueError):
    """A distance table violates a metric axiom.

    ``pair`` holds the offending index pair (a triple for the triangle
    inequality).
    """

    def __init__(self, message: str, pair: tuple[int, ...]):
        super().__init__(message)
        self.pair = pair


def as_fraction(value: Number) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings. Floats are rejected."""
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a Fraction or 'p/q'")
    return Fraction(value)


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be 'closed' or 'open', got {mode!r}")
    return mode


def within(d: Fraction, r: Fraction, mode: str = "closed") -> bool:
    """``d <= r`` in closed mode, ``d < r`` in open mode."""
    return d <= r if mode == "closed" else d < r


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def set_of(mask: int) -> frozenset[int]:
    return frozenset(members(mask))


class FiniteMetricSpace:
    """Indexed point set with an exact, validated distance table.

    Instances are treated as immutable; the only mutable state is a private
    cache of ball bitmasks, which does not affect results.
    """

    __slots__ = ("labels", "dist", "_index", "_balls", "_grid")

    def __init__(self, labels: Sequence[str], dist: Sequence[Sequence[Fraction]]):
        self.labels: tuple[str, ...] = tuple(labels)
        self.dist: tuple[tuple[Fraction, ...], ...] = tuple(tuple(row) for row in dist)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._balls: dict[tuple[Fraction, str], tuple[int, ...]] = {}
        self._grid: tuple[Fraction, ...] | None = None

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={len(self)})"

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def d(self, a: int, b: int) -> Fraction:
        return self.dist[a][b]

    def index(self, label: str | int) -> int:
        """Resolve a point label (or pass through a valid index)."""
        if isinstance(label, int) and not isinstance(label, bool):
            if not 0 <= label < len(self.labels):
                raise IndexError(f"point index {label} out of range 0..{len(self.labels) - 1}")
            return label
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown point label {label!r}") from None

    def diameter(self) -> Fraction:
        return max((max(row) for row in self.dist), default=Fraction(0))

    def ball_masks(self, r: Fraction, mode: str = "closed") -> tuple[int, ...]:
        """Bitmask of ``ball(c, r, mode)`` for every center ``c``."""
        key = (Fraction(r), mode)
        cached = self._balls.get(key)
        if cached is None:
            rr = key[0]
            cached = tuple(
                mask_of(b for b, dcb in enumerate(row) if within(dcb, rr, mode))
                for row in self.dist
            )
            self._balls[key] = cached
        return cached

    def distances(self) -> tuple[Fraction, ...]:
        """Sorted distinct distance values (always contains 0 when nonempty)."""
        if self._grid is None:
            self._grid = tuple(sorted({v for row in self.dist for v in row}))
        return self._grid


def _validate(dist: list[list[Fraction]]) -> None:
    n = len(dist)
    for i, row in enumerate(dist):
        if len(row) != n:
            raise MetricError(f"distance table is not square: row {i} has {len(row)} entries, expected {n}", (i,))
    for a in range(n):
        for b in range(n):
            v = dist[a][b]
            if v < 0:
                raise MetricError(f"negative distance at ({a},{b}): {v}", (a, b))
            if a == b and v != 0:
                raise MetricError(f"nonzero self-distance at ({a},{a}): {v}", (a, a))
            if a < b and v != dist[b][a]:
                raise MetricError(f"asymmetric table at ({a},{b}): {v} != {dist[b][a]}", (a, b))
            if a != b and v == 0:
                raise MetricError(f"zero distance between distinct points ({a},{b})", (min(a, b), max(a, b)))
    if n < 3:
        return
    # Triangle inequality on a common-denominator integer table.
    den = lcm(*(v.denominator for row in dist for v in row))
    ints = [[v.numerator * (den // v.denominator) for v in row] for row in dist]
    top = max(max(row) for row in ints)
    dtype = np.int64 if 2 * top < 2**62 else object
    t = np.array(ints, dtype=dtype)
    for b in range(n):
        # bad[a, c]: d(a,c) > d(a,b) + d(b,c)
        bad = t > (t[:, b][:, None] + t[b, :][None, :])
        if bad.any():
            a, c = (int(v) for v in np.argwhere(bad)[0])
            raise MetricError(
                f"triangle inequality fails: d({a},{c})={dist[a][c]} > "
                f"d({a},{b})+d({b},{c})={dist[a][b] + dist[b][c]}",
                (a, b, c),
            )


def _norm(u: Sequence[Fraction], v: Sequence[Fraction], norm: str) -> Fraction:
    diffs = [abs(x - y) for x, y in zip(u, v)]
    if norm in ("abs", "l1"):
        return sum(diffs, Fraction(0))
    if norm in ("max", "linf"):
        return max(diffs, default=Fraction(0))
    raise ValueError(f"unsupported norm {norm!r} (exact norms only: 'abs', 'l1', 'max')")


def build_space(
    *,
    coords: Sequence[Sequence[Number] | Number] | None = None,
    norm: str = "abs",
    table: Sequence[Sequence[Number]] | None = None,
    labels: Sequence[str] | None = None,
    validate: bool = True,
) -> FiniteMetricSpace:
    """Build a validated space from coordinates or from an explicit table.

    Exactly one of ``coords`` and ``table`` must be given. Coordinates may be
    scalars (points on a line) or equal-length tuples; ``norm`` is one of
    ``abs``/``l1`` or ``max``. ``validate=False`` skips the axiom checks and
    is meant only for constructions that are metrics by design (products,
    cylinder spaces) when the check would dominate runtime.
    """
    if (coords is None) == (table is None):
        raise ValueError("give exactly one of coords= or table=")
    if coords is not None:
        pts = [
            tuple(as_fraction(c) for c in p) if isinstance(p, (list, tuple)) else (as_fraction(p),)
            for p in coords
        ]
        dims = {len(p) for p in pts}
        if len(dims) > 1:
            raise ValueError(f"coordinates have mixed dimensions {sorted(dims)}")
        dist = [[_norm(p, q, norm) for q in pts] for p in pts]
    else:
        dist = [[as_fraction(v) for v in row] for row in table]
    if not dist:
        raise ValueError("a metric space needs at least one point")
    if labels is None:
        labels = [str(i) for i in range(len(dist))]
    elif len(labels) != len(dist):
        raise ValueError(f"{len(labels)} labels for {len(dist)} points")
    elif len(set(labels)) != len(labels):
        raise ValueError("point labels must be distinct")
    if validate:
        _validate(dist)
    return FiniteMetricSpace(labels, dist)


def ball(space: FiniteMetricSpace, center: int, r: Number, mode: str = "closed") -> frozenset[int]:
    """Points within ``r`` of ``center``; strict in open mode."""
    check_mode(mode)
    center = space.index(center)
    r = as_fraction(r)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return set_of(space.ball_masks(r, mode)[center])


def set_ball(space: FiniteMetricSpace, points: Iterable[int], r: Number, mode: str = "closed") -> frozenset[int]:
    """Neighborhood of a point set: the union of balls around its members."""
    check_mode(mode)
    balls = space.ball_masks(as_fraction(r), mode)
    m = 0
    for p in points:
        m |= balls[p]
    return set_of(m)


def eps_components(space: FiniteMetricSpace, eps: Number) -> list[frozenset[int]]:
    """Classes of the ε-chain relation (steps of length at most ``eps``).

    Classes are sorted by their smallest member.
    """
    eps = as_fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    g = nx.Graph()
    g.add_nodes_from(range(len(space)))
    for a in range(len(space)):
        row = space.dist[a]
        g.add_edges_from((a, b) for b in range(a + 1, len(space)) if row[b] <= eps)
    comps = [frozenset(c) for c in nx.connected_components(g)]
    return sorted(comps, key=min)


def x_deg(space: FiniteMetricSpace, eps: Number) -> frozenset[int]:
    """Points that are alone in their ε-chain class."""
    return frozenset(p for c in eps_components(space, eps) if len(c) == 1 for p in c)


def gamma(space: FiniteMetricSpace, A: Iterable[int], eps: Number) -> frozenset[int]:
    """Union of the ε-chain classes that meet ``A``."""
    A = frozenset(A)
    out: set[int] = set()
    for c in eps_components(space, eps):
        if c & A:
            out |= c
    return frozenset(out)


def critical_distances(
    space: FiniteMetricSpace, maps: Sequence[Sequence[int]] | None = None
) -> list[Fraction]:
    """Sorted distinct values of ``d(a, b)`` and ``d(f(a), b)``, with 0 included.

    Every parametrized set in the package can only change at these values.
    """
    vals = set(space.distances())
    vals.add(Fraction(0))
    for f in maps or ():
        for a in range(len(space)):
            vals.update(space.dist[f[a]])
    return sorted(vals)


def snap(value: Number, grid: Sequence[Fraction], mode: str = "closed") -> Fraction:
    """Grid value with the same comparison outcomes as ``value``.

    Closed mode: the largest grid value ``<= value``; open mode: the largest
    grid value ``< value`` (queries at such a value then use closed
    comparison semantics, so callers keep the original value for deciding and
    use the snap only for reporting). Returns ``value`` itself if nothing lies
    below it.
    """
    value = as_fraction(value)
    below = [g for g in grid if within(g, value, mode)]
    return max(below) if below else value
