"""Skew products over truncated shifts, the lifting check, and the rotation-pair example.

A product point is a pair ``(word, x)``; its index is ``word_index * N + x``
where ``N`` is the base size. The single product generator is
``(w, x) -> (shift(w), f_{w_0}(x))`` and the metric is the max of the word
metric and the base metric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .action import SemigroupSystem
from .decision import oracle_shadowable_bounded, point_shadowable
from .metric import Number, as_fraction, build_space, gamma, set_ball, within, x_deg
from .recurrence import recurrent_set
from .symbolic import DEFAULT_POINT_BUDGET, BudgetExceeded, Word, all_words, d1_metric

# Full triangle-inequality validation is cubic; larger products are metrics by construction.
VALIDATE_LIMIT = 512


@dataclass(frozen=True)
class ProductSystem:
    base: SemigroupSystem
    K: int
    pad: int | None
    words: tuple[tuple[int, ...], ...]
    shift: tuple[int, ...]
    system: SemigroupSystem = field(repr=False)

    @property
    def n(self) -> int:
        return self.system.n

    def index(self, word: Word | Sequence[int] | str, x: int) -> int:
        if isinstance(word, str):
            word = Word.parse(word, self.base.m)
        return self.words.index(tuple(word)) * self.base.n + x

    def split(self, i: int) -> tuple[tuple[int, ...], int]:
        w, x = divmod(i, self.base.n)
        return self.words[w], x

    def project(self, points) -> frozenset[int]:
        """Base components of a set of product points."""
        return frozenset(i % self.base.n for i in points)


def _label(word: tuple[int, ...], m: int, base_label: str) -> str:
    return f"{Word(word, m)}|{base_label}"


def _assemble(base: SemigroupSystem, K: int, pad: int | None, words, shift, name: str) -> ProductSystem:
    N = base.n
    bd = base.space.dist
    wd = [[d1_metric(a, b) for b in words] for a in words]
    table = [
        [max(wd[wa][wb], bd[xa][xb]) for wb in range(len(words)) for xb in range(N)]
        for wa in range(len(words))
        for xa in range(N)
    ]
    labels = [_label(w, base.m, base.space.labels[x]) for w in words for x in range(N)]
    space = build_space(table=table, labels=labels, validate=len(table) <= VALIDATE_LIMIT)
    gen = tuple(shift[wi] * N + base.generators[words[wi][0]][x] for wi in range(len(words)) for x in range(N))
    return ProductSystem(base, K, pad, tuple(words), tuple(shift), SemigroupSystem(space, (gen,), name))


def build_product(sys: SemigroupSystem, K: int, pad: int = 0, budget: int = DEFAULT_POINT_BUDGET) -> ProductSystem:
    """Skew product over all depth-``K`` words, shifting in ``pad`` at the end."""
    if K < 1:
        raise ValueError("depth K must be >= 1")
    if not 0 <= pad < sys.m:
        raise ValueError(f"pad symbol {pad} outside alphabet of size {sys.m}")
    size = sys.m**K * sys.n
    if size > budget:
        raise BudgetExceeded(f"product needs {size} points, budget is {budget}")
    words = all_words(sys.m, K)
    index = {w: i for i, w in enumerate(words)}
    shift = [index[w[1:] + (pad,)] for w in words]
    return _assemble(sys, K, pad, words, shift, f"product({sys.name},K={K})")


def restricted_product(sys: SemigroupSystem, words: Sequence[Sequence[int] | str], K: int) -> ProductSystem:
    """Product over a shift-invariant set of depth-``K`` words, with the exact (unpadded) shift.

    The word set must be closed under the periodic shift ``w -> w[1:] + w[:1]``,
    which is the true shift on these words when they are prefixes of periodic
    sequences whose period divides ``K``.
    """
    ws = [tuple(Word.parse(w, sys.m)) if isinstance(w, str) else tuple(w) for w in words]
    if any(len(w) != K for w in ws):
        raise ValueError(f"all words must have length {K}")
    index = {w: i for i, w in enumerate(ws)}
    shift = []
    for w in ws:
        s = w[1:] + w[:1]
        if s not in index:
            raise ValueError(f"word set is not shift-invariant: {Word(w, sys.m)} -> {Word(s, sys.m)}")
        shift.append(index[s])
    return _assemble(sys, K, None, ws, shift, f"orbit-product({sys.name})")


@dataclass(frozen=True)
class LiftReport:
    base_shadowable: bool
    delta: Fraction
    eps: Fraction
    T: int
    results: tuple[tuple[str, bool, str], ...]  # (word, passed, reason)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.results)

    @property
    def failures(self) -> list[tuple[str, str]]:
        return [(w, r) for w, ok, r in self.results if not ok]


def lift_check(
    sys: SemigroupSystem,
    product: ProductSystem,
    x: int,
    delta_base: Number,
    eps: Number,
    k: int,
    T: int,
    mode: str = "closed",
    selector: str = "fixed",
) -> LiftReport:
    """If ``x`` is shadowable at ``(delta_base, eps)``, every ``(w, x)`` must pass the
    bounded product oracle at ``min(2**-(k+1), delta_base)`` over ``T`` steps."""
    delta_base, eps = as_fraction(delta_base), as_fraction(eps)
    if not within(Fraction(1, 2**k), eps, mode):
        raise ValueError(f"need 2**-k within eps ({mode}), got k={k}, eps={eps}")
    if T > product.K - 1:
        raise ValueError(f"horizon T={T} exceeds K-1={product.K - 1}; padding would corrupt the selector")
    delta = min(Fraction(1, 2 ** (k + 1)), delta_base)
    base_ok = point_shadowable(sys, x, delta_base, eps, mode, selector).shadowable
    results = []
    for wi, w in enumerate(product.words):
        label = str(Word(w, sys.m))
        if not base_ok:
            results.append((label, True, "vacuous: base point not shadowable"))
            continue
        ok = oracle_shadowable_bounded(product.system, wi * sys.n + x, delta, eps, T, mode)
        reason = "" if ok else _binding_reason(product, eps, T, mode)
        results.append((label, ok, reason))
    return LiftReport(base_ok, delta, eps, T, tuple(results))


def symbols_resolved(eps: Number, mode: str = "closed") -> int:
    """Leading word symbols an ε-comparison under the word metric can see.

    Two words are within ``eps`` iff they agree on this many leading symbols.
    """
    eps = as_fraction(eps)
    j = 0
    while not within(Fraction(1, 2**j), eps, mode):
        j += 1
    return j


def lift_depth(T: int, eps: Number, mode: str = "closed") -> int:
    """Smallest product depth at which padding stays out of the compared window for ``T`` steps."""
    return max(T + symbols_resolved(eps, mode), T + 1)


def _binding_reason(product: ProductSystem, eps: Fraction, T: int, mode: str) -> str:
    j = symbols_resolved(eps, mode)
    if product.pad is not None and T + j > product.K:
        return f"horizon bound: T+{j}={T + j} > K={product.K}, padded symbols enter the compared window"
    return f"not explained by the horizon bound (T={T}, K={product.K}, resolved symbols={j})"


@dataclass(frozen=True)
class NeighborhoodReport:
    holds: bool
    shadowable: frozenset[int]
    components: frozenset[int]
    neighborhood: frozenset[int]
    recurrent: frozenset[int]
    projection: frozenset[int]
    base_x_deg: frozenset[int]

    @property
    def projection_in_x_deg(self) -> bool:
        return self.projection <= self.base_x_deg


def theorem2_condition(
    product: ProductSystem,
    delta: Number,
    eps_conn: Number,
    eps_sh: Number,
    delta_sh: Number,
    mode: str = "closed",
) -> NeighborhoodReport:
    """Is the δ-neighborhood of the ε-components meeting the shadowable set recurrent?

    Also reports the base projection of the shadowable set next to the base's
    isolated points at ``eps_conn``; that comparison is informational only.
    """
    psys = product.system
    S = frozenset(p for p in range(psys.n) if point_shadowable(psys, p, delta_sh, eps_sh, mode).shadowable)
    G = gamma(psys.space, S, eps_conn)
    B = set_ball(psys.space, G, delta, mode)
    R = recurrent_set(psys)
    return NeighborhoodReport(
        holds=B <= R,
        shadowable=S,
        components=G,
        neighborhood=B,
        recurrent=R,
        projection=product.project(S),
        base_x_deg=x_deg(product.base.space, eps_conn),
    )


def rotation_base(q: int, a0: int, a1: int) -> SemigroupSystem:
    """Two rotations ``x -> x + a0`` and ``x -> x + a1`` of ``Z_q`` with the arc metric."""
    if q < 2:
        raise ValueError("need q >= 2")
    if not (0 <= a0 < q and 0 <= a1 < q):
        raise ValueError(f"rotation amounts must lie in [0, {q})")
    table = [[Fraction(min(abs(a - b), q - abs(a - b)), q) for b in range(q)] for a in range(q)]
    space = build_space(table=table)
    gens = (tuple((x + a0) % q for x in range(q)), tuple((x + a1) % q for x in range(q)))
    return SemigroupSystem(space, gens, f"rotations-q{q}-a{a0}-{a1}")


def example_rotation_product(q: int, a0: int, a1: int) -> ProductSystem:
    """Rotation pair over the two-point orbit of the alternating sequence ``0101...``."""
    base = rotation_base(q, a0, a1)
    return restricted_product(base, ["01", "10"], 2)


def is_minimal_rotation(q: int, a0: int, a1: int) -> bool:
    return gcd(a0 + a1, q) == 1
