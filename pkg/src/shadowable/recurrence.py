"""Chain-recurrent, non-wandering and recurrent points at a given resolution."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import networkx as nx

from .action import SemigroupSystem
from .metric import Number, as_fraction, check_mode, members, within


@dataclass(frozen=True)
class LabeledGraph:
    """Edges ``(p, q, j)``: generator ``j`` carries ``p`` to within ``resolution`` of ``q``."""

    n: int
    edges: frozenset[tuple[int, int, int]]
    resolution: Fraction
    mode: str = "closed"

    def successors(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in range(self.n)]
        for p, q, _ in self.edges:
            out[p].add(q)
        return out

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(range(self.n))
        for p, q, j in sorted(self.edges):
            g.add_edge(p, q, key=j, label=j)
        return g


def chain_graph(sys: SemigroupSystem, eps: Number, mode: str = "closed") -> LabeledGraph:
    check_mode(mode)
    eps = as_fraction(eps)
    dist = sys.space.dist
    edges = frozenset(
        (p, q, j)
        for j, g in enumerate(sys.generators)
        for p in range(sys.n)
        for q in range(sys.n)
        if within(dist[g[p]][q], eps, mode)
    )
    return LabeledGraph(sys.n, edges, eps, mode)


def to_dot(sys: SemigroupSystem, graph: LabeledGraph) -> str:
    """DOT text: one edge per generator, labelled with its index and the exact miss distance."""
    labels = sys.space.labels
    lines = [f'digraph "{sys.name}" {{', f'  // resolution {graph.resolution} ({graph.mode})']
    for p in range(graph.n):
        lines.append(f'  n{p} [label="{labels[p]}"];')
    for p, q, j in sorted(graph.edges):
        d = sys.space.dist[sys.generators[j][p]][q]
        lines.append(f'  n{p} -> n{q} [label="{j}", distance="{d}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def on_cycle(succ: Sequence[Iterable[int]]) -> frozenset[int]:
    """Nodes lying on a directed cycle (self-loops included)."""
    g = nx.DiGraph()
    g.add_nodes_from(range(len(succ)))
    for p, qs in enumerate(succ):
        g.add_edges_from((p, q) for q in qs)
    out: set[int] = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1:
            out |= comp
        else:
            (p,) = comp
            if g.has_edge(p, p):
                out.add(p)
    return frozenset(out)


def cr_eps(sys: SemigroupSystem, eps: Number, mode: str = "closed") -> frozenset[int]:
    """Points with an ε-chain of positive length back to themselves."""
    return on_cycle(chain_graph(sys, eps, mode).successors())


def reach_plus(sys: SemigroupSystem) -> list[int]:
    """Bitmask of points ``f_w(y)`` over nonempty words ``w``, for every ``y``."""
    succ = [0] * sys.n
    for g in sys.generators:
        for p in range(sys.n):
            succ[p] |= 1 << g[p]
    out = []
    for y in range(sys.n):
        seen = succ[y]
        frontier = seen
        while frontier:
            new = 0
            for p in members(frontier):
                new |= succ[p]
            frontier = new & ~seen
            seen |= new
        out.append(seen)
    return out


def omega_eps(sys: SemigroupSystem, eps: Number, mode: str = "closed") -> frozenset[int]:
    """Points ``x`` whose ε-ball ``B`` has ``f_w(y) ∈ B`` for some ``y ∈ B`` and nonempty ``w``.

    Uses the exact maps; only the window is blurred.
    """
    check_mode(mode)
    balls = sys.space.ball_masks(as_fraction(eps), mode)
    reach = reach_plus(sys)
    return frozenset(
        x for x in range(sys.n) if any(reach[y] & balls[x] for y in members(balls[x]))
    )


def recurrent_set(sys: SemigroupSystem) -> frozenset[int]:
    """Points returning exactly to themselves under some nonempty word."""
    reach = reach_plus(sys)
    return frozenset(x for x in range(sys.n) if reach[x] >> x & 1)


@dataclass(frozen=True)
class GridIntersection:
    result: frozenset[int]
    trace: tuple[tuple[Fraction, frozenset[int]], ...]
    empty_grid: bool = False


def intersect_over_grid(
    setter: Callable[[Fraction], Iterable[int]],
    grid: Iterable[Number],
    n_points: int,
    mode: str = "closed",
) -> GridIntersection:
    """Intersect ``setter(eps)`` over positive grid values (and 0 in closed mode).

    An empty effective grid gives the whole space, with ``empty_grid`` set so
    reports can flag the convention.
    """
    check_mode(mode)
    used = sorted({as_fraction(e) for e in grid if as_fraction(e) > 0 or (mode == "closed" and as_fraction(e) == 0)})
    result = frozenset(range(n_points))
    trace = []
    for e in used:
        s = frozenset(setter(e))
        trace.append((e, s))
        result &= s
    return GridIntersection(result, tuple(trace), not used)
