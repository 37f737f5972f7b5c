"""Invariant checks over systems, shared by the ``verify`` verbs and the test suite.

Each check returns a :class:`CheckResult`: how many instances were examined
and every failing instance in full.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .action import SemigroupSystem, modulus
from .catalog import builtin_systems, prepend_system, random_corpus, random_system
from .decision import (
    config_bound,
    oracle_shadowable_bounded,
    point_shadowable,
    point_shadowable_near,
    potp,
    witness_is_valid,
)
from .metric import critical_distances
from .recurrence import cr_eps, omega_eps, recurrent_set
from .skew import (
    build_product,
    example_rotation_product,
    is_minimal_rotation,
    lift_check,
    lift_depth,
    symbols_resolved,
    theorem2_condition,
)
from .symbolic import BudgetExceeded


@dataclass(frozen=True)
class Finding:
    system: str
    point: str
    delta: Fraction | None
    eps: Fraction | None
    detail: str


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list[Finding] = field(default_factory=list)
    notes: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "CheckResult") -> "CheckResult":
        self.checked += other.checked
        self.failures.extend(other.failures)
        self.notes.extend(other.notes)
        return self

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.checked} checked, {len(self.failures)} counterexamples"


def grid(sys: SemigroupSystem) -> list[Fraction]:
    return critical_distances(sys.space, sys.generators)


def _label(sys: SemigroupSystem, x: int) -> str:
    return sys.space.labels[x]


def check_oracle(sys: SemigroupSystem, mode: str = "closed", selector: str = "shared") -> CheckResult:
    """Engine verdict equals the bounded brute-force oracle at ``T = N * 2**N`` on the full grid."""
    res = CheckResult("oracle-equivalence")
    T = config_bound(sys)
    g = grid(sys)
    for x in range(sys.n):
        for d in g:
            for e in g:
                dec = point_shadowable(sys, x, d, e, mode, selector)
                orc = oracle_shadowable_bounded(sys, x, d, e, T, mode, selector)
                res.checked += 1
                if dec.shadowable != orc:
                    res.failures.append(Finding(sys.name, _label(sys, x), d, e, f"engine={dec.verdict} oracle={orc}"))
                elif not dec.shadowable and not witness_is_valid(sys, dec, selector):
                    res.failures.append(Finding(sys.name, _label(sys, x), d, e, "witness does not re-validate"))
    return res


def check_potp_pointwise(sys: SemigroupSystem, mode: str = "closed", selector: str = "shared") -> CheckResult:
    """``potp(δ, ε)`` iff every point is shadowable at ``(δ, ε)``."""
    res = CheckResult("potp-iff-all-points")
    g = grid(sys)
    for d in g:
        for e in g:
            whole = potp(sys, d, e, mode, selector)
            each = all(point_shadowable(sys, x, d, e, mode, selector).shadowable for x in range(sys.n))
            res.checked += 1
            if whole != each:
                res.failures.append(Finding(sys.name, "*", d, e, f"potp={whole} pointwise={each}"))
    return res


def check_cr_sh_in_omega(sys: SemigroupSystem, selector: str = "shared") -> CheckResult:
    """Closed mode: ``x ∈ CR_δ`` and shadowable at ``(δ, ε)`` imply ``x ∈ Ω_ε'`` for grid ``ε' > ε``."""
    res = CheckResult("cr-and-shadowable-in-omega")
    g = grid(sys)
    cr = {d: cr_eps(sys, d) for d in g}
    om = {e: omega_eps(sys, e) for e in g}
    for d in g:
        for x in sorted(cr[d]):
            for e in g:
                larger = [ep for ep in g if ep > e]
                if not larger:
                    continue
                res.checked += 1
                if not point_shadowable(sys, x, d, e, "closed", selector).shadowable:
                    continue
                missing = [ep for ep in larger if x not in om[ep]]
                if missing:
                    res.failures.append(
                        Finding(sys.name, _label(sys, x), d, e, f"not in omega at eps'={','.join(map(str, missing))}")
                    )
    return res


def check_inclusions(
    sys: SemigroupSystem, mode: str = "closed", bound: Callable[[Fraction, Fraction], Fraction] | None = None
) -> CheckResult:
    """``R ⊆ Ω_ε`` for grid ``ε > 0`` and ``Ω_ε ⊆ CR_{bound(ε, modulus(ε))}``.

    ``bound`` defaults to ``max``; pass ``operator.add`` for the sum bound.
    """
    bound = bound or max
    res = CheckResult("recurrence-inclusions")
    R = recurrent_set(sys)
    for e in grid(sys):
        if e == 0:
            continue
        O = omega_eps(sys, e, mode)
        res.checked += 1
        if not R <= O:
            res.failures.append(Finding(sys.name, "*", None, e, f"R not in omega: {sorted(R - O)}"))
        mod = modulus(sys, e, mode)
        e2 = bound(e, mod)
        C = cr_eps(sys, e2, mode)
        res.checked += 1
        if not O <= C:
            labels = ",".join(_label(sys, x) for x in sorted(O - C))
            res.failures.append(Finding(sys.name, labels, None, e, f"omega not in CR at {e2} (modulus {mod})"))
    return res


def near_start_delta(sys: SemigroupSystem, delta1: Fraction, eps: Fraction, g: list[Fraction] | None = None) -> Fraction:
    """``min(δ₁/2, largest grid δ with modulus(δ) <= δ₁/2, ε/2)``."""
    g = g if g is not None else grid(sys)
    cont = max(v for v in g if modulus(sys, v) <= delta1 / 2)
    return min(delta1 / 2, cont, eps / 2)


def check_near_start(sys: SemigroupSystem, mode: str = "closed", selector: str = "shared") -> CheckResult:
    """Shadowable at ``(δ₁, ε/2)`` implies shadowable from δ-close starts at ``(δ, ε)``."""
    res = CheckResult("near-start-shadowing")
    g = grid(sys)
    for x in range(sys.n):
        for e in g:
            for d1 in g:
                if not point_shadowable(sys, x, d1, e / 2, mode, selector).shadowable:
                    continue
                d = near_start_delta(sys, d1, e, g)
                res.checked += 1
                dec = point_shadowable_near(sys, x, d, e, mode, selector)
                if not dec.shadowable:
                    res.failures.append(
                        Finding(sys.name, _label(sys, x), d, e, f"delta1={d1}; witness {list(dec.witness.prefix)}")
                    )
    return res


def check_monotone(sys: SemigroupSystem, mode: str = "closed", selector: str = "shared") -> CheckResult:
    """Verdicts are downward closed in δ and upward closed in ε."""
    res = CheckResult("monotone-in-parameters")
    g = grid(sys)
    for x in range(sys.n):
        table = {(d, e): point_shadowable(sys, x, d, e, mode, selector).shadowable for d in g for e in g}
        for i, d in enumerate(g):
            for j, e in enumerate(g):
                res.checked += 1
                if not table[d, e]:
                    continue
                if i and not table[g[i - 1], e]:
                    res.failures.append(Finding(sys.name, _label(sys, x), g[i - 1], e, f"fails at smaller delta (holds at {d})"))
                if j + 1 < len(g) and not table[d, g[j + 1]]:
                    res.failures.append(Finding(sys.name, _label(sys, x), d, g[j + 1], f"fails at larger eps (holds at {e})"))
    return res


def check_prepend_potp(K: int) -> CheckResult:
    """Prepend system on depth-``K`` binary words: POTP at ``(2**-(k+1), 2**-k)`` for ``k <= K-2``."""
    res = CheckResult(f"prepend-potp-K{K}")
    sys = prepend_system(2, K)
    for k in range(K - 1):
        d, e = Fraction(1, 2 ** (k + 1)), Fraction(1, 2**k)
        res.checked += 1
        if not potp(sys, d, e):
            res.failures.append(Finding(sys.name, "*", d, e, f"no POTP at k={k}"))
    return res


def check_rotation_example(q: int, a0: int, a1: int) -> CheckResult:
    """Minimal rotation pair: every product point recurrent and the neighborhood condition holds on the grid."""
    res = CheckResult(f"rotation-product-q{q}-a{a0}-{a1}")
    prod = example_rotation_product(q, a0, a1)
    psys = prod.system
    R = recurrent_set(psys)
    if is_minimal_rotation(q, a0, a1):
        res.checked += 1
        if R != frozenset(range(psys.n)):
            res.failures.append(Finding(psys.name, "*", None, None, f"non-recurrent points {sorted(set(range(psys.n)) - R)}"))
    g = grid(psys)
    fine = min((v for v in g if v > 0), default=Fraction(0))
    for d in g:
        rep = theorem2_condition(prod, d, fine, fine, fine)
        res.checked += 1
        if not rep.holds:
            res.failures.append(Finding(psys.name, "*", d, None, "neighborhood of shadowable components not recurrent"))
        res.notes.append(Finding(psys.name, "*", d, None, f"projection in x_deg: {rep.projection_in_x_deg}"))
    return res


def check_lift(
    sys: SemigroupSystem,
    x: int,
    delta_base: Fraction,
    eps: Fraction,
    k: int,
    T: int,
    K: int | None = None,
    mode: str = "closed",
    selector: str = "fixed",
) -> CheckResult:
    """Run :func:`lift_check`; failures the horizon bound explains are logged as notes."""
    res = CheckResult("lift-to-product")
    K = K if K is not None else lift_depth(T, eps, mode)
    prod = build_product(sys, K)
    rep = lift_check(sys, prod, x, delta_base, eps, k, T, mode, selector)
    for word, ok, reason in rep.results:
        res.checked += 1
        if ok:
            continue
        f = Finding(sys.name, f"{word}|{_label(sys, x)}", rep.delta, eps, reason)
        if reason.startswith("horizon bound"):
            res.notes.append(f)
        else:
            res.failures.append(f)
    return res


def lift_cases(sys: SemigroupSystem, T: int = 2, budget: int = 800, mode: str = "closed", selector: str = "fixed"):
    """Grid pairs ``(x, δ', ε, k)`` with ``x`` shadowable at ``(δ', ε)`` and ``k`` least with ``2**-k < ε``."""
    g = grid(sys)
    for e in g:
        if e == 0:
            continue
        k = symbols_resolved(e, "open")
        if sys.m ** lift_depth(T, e, mode) * sys.n > budget:
            continue
        for x in range(sys.n):
            for d in g:
                if point_shadowable(sys, x, d, e, mode, selector).shadowable:
                    yield x, d, e, k


def run_over(systems: Iterable[SemigroupSystem], check: Callable[[SemigroupSystem], CheckResult], name: str) -> CheckResult:
    return run_over_results((check(s) for s in systems), name)


def run_over_results(results: Iterable[CheckResult], name: str) -> CheckResult:
    total = CheckResult(name)
    for r in results:
        total.merge(r)
    return total


# Seeded corpora used by the acceptance suite and the ``verify`` verbs.
CORPORA = {
    "oracle": dict(count=200, seed=20261015, max_points=5),
    "potp": dict(count=500, seed=20261016, max_points=6),
    "cr-omega": dict(count=1000, seed=20261017, max_points=6),
    "near-start": dict(count=500, seed=20261018, max_points=6),
    "lift": dict(count=50, seed=20261019, max_points=4),
}


def corpus(name: str) -> list[SemigroupSystem]:
    spec = CORPORA[name]
    return random_corpus(spec["count"], spec["seed"], spec["max_points"], 2)


def lift_corpus(count: int, seed: int, max_points: int) -> list[SemigroupSystem]:
    """Random two-generator bases (the lift needs a genuine choice of symbol)."""
    import random

    rng = random.Random(seed)
    return [
        random_system(rng.randrange(2**31), rng.randint(2, max_points), 2, rng.choice(("line", "circle")))
        for _ in range(count)
    ]


__all__ = [
    "BudgetExceeded",
    "CheckResult",
    "Finding",
    "builtin_systems",
    "check_cr_sh_in_omega",
    "check_inclusions",
    "check_lift",
    "check_monotone",
    "check_near_start",
    "check_oracle",
    "check_potp_pointwise",
    "check_prepend_potp",
    "check_rotation_example",
    "corpus",
    "lift_cases",
    "lift_corpus",
    "run_over",
    "run_over_results",
]
