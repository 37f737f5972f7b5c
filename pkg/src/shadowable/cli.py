"""Command line: ``shadowable <verb> ...`` or ``python -m shadowable.cli <verb> ...``.

Every verb writes CSV rows (stdout unless ``--csv``) and a short report
(stderr unless ``--report``). Exit codes: 0 ok, 2 config error, 3 budget
exceeded, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import operator
import sys as _sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable

from . import checks
from .action import SELECTOR_MODES, SemigroupSystem
from .catalog import builtin_systems, random_corpus
from .config import CATALOG, ConfigError, RunConfig, catalog_system, load_config, parse_kv, parse_rational, resolve_system
from .decision import point_shadowable, point_shadowable_near, potp_through, threshold_map
from .metric import MODES, critical_distances
from .recurrence import chain_graph, cr_eps, intersect_over_grid, omega_eps, recurrent_set, to_dot
from .skew import build_product
from .symbolic import DEFAULT_POINT_BUDGET, BudgetExceeded

HEADER = ["query_id", "system", "point", "delta", "eps", "verdict", "witness_len", "detail"]

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4

VERIFY_NAMES = (
    "lemma3.1",
    "lemma3.3",
    "lemma3.5",
    "theorem1.1",
    "theorem1.2",
    "inclusions",
    "oracle",
    "monotone",
    "example2.5",
    "example3.7",
)


def fmt(v) -> str:
    return "" if v is None else str(v)


@dataclass
class Output:
    rows: list[list[str]] = field(default_factory=list)
    report: list[str] = field(default_factory=list)
    dot: str | None = None
    violated: bool = False

    def row(self, system, point, delta, eps, verdict, witness_len=0, detail=""):
        self.rows.append([str(len(self.rows) + 1), system, point, fmt(delta), fmt(eps), verdict, str(witness_len), detail])

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HEADER)
        w.writerows(self.rows)
        return buf.getvalue()


@dataclass
class Context:
    system: SemigroupSystem | None
    params: dict[str, str]
    mode: str = "closed"
    selector: str = "shared"
    budget: int = DEFAULT_POINT_BUDGET
    seed: int | None = None
    jobs: int = 1
    want_dot: bool = False

    def need_system(self) -> SemigroupSystem:
        if self.system is None:
            raise ConfigError("system", "this verb needs a system (--catalog or a config file)")
        return self.system

    def rational(self, key: str, default=None) -> Fraction:
        if key not in self.params:
            if default is None:
                raise ConfigError(key, "missing")
            return default
        return parse_rational(self.params[key], key)

    def integer(self, key: str, default: int | None = None) -> int:
        if key not in self.params:
            if default is None:
                raise ConfigError(key, "missing")
            return default
        try:
            return int(self.params[key])
        except ValueError:
            raise ConfigError(key, f"expected an integer, got {self.params[key]!r}") from None

    def point(self, key: str = "x") -> int:
        raw = self.params.get(key)
        if raw is None:
            raise ConfigError(key, "missing")
        return self.point_named(raw, key)

    def point_named(self, raw: str, key: str) -> int:
        s = self.need_system()
        if raw in s.space.labels:
            return s.space.index(raw)
        try:
            return s.space.index(int(raw))
        except (ValueError, IndexError):
            raise ConfigError(key, f"unknown point {raw!r}") from None


def _labels(s: SemigroupSystem, pts) -> str:
    return " ".join(s.space.labels[p] for p in pts)


def _grid_or_value(ctx: Context, key: str = "eps") -> list[Fraction]:
    raw = ctx.params.get(key, "grid")
    if raw == "grid":
        return critical_distances(ctx.need_system().space, ctx.need_system().generators)
    return [parse_rational(raw, key)]


def verb_decide(ctx: Context, out: Output) -> None:
    s = ctx.need_system()
    x = ctx.point()
    d, e = ctx.rational("delta"), ctx.rational("eps")
    near = ctx.params.get("near", "false").lower() in ("1", "true", "yes")
    fn = point_shadowable_near if near else point_shadowable
    dec = fn(s, x, d, e, ctx.mode, ctx.selector)
    detail = ""
    if dec.witness is not None:
        detail = f"witness={_labels(s, dec.witness.prefix)}; selector={''.join(map(str, dec.witness.selector.preperiod.symbols))}"
    out.row(s.name, s.space.labels[x], d, e, dec.verdict, dec.witness_len, detail)
    out.report.append(f"{s.name} point {s.space.labels[x]} at delta={d} eps={e}: {dec.verdict}")
    if detail:
        out.report.append(f"  {detail}")


def verb_threshold(ctx: Context, out: Output) -> None:
    s = ctx.need_system()
    for e in _grid_or_value(ctx):
        th = threshold_map(s, e, ctx.mode, ctx.selector)
        for x in range(s.n):
            out.row(s.name, s.space.labels[x], th[x], e, "threshold", 0, "" if th[x] is not None else "no grid delta")
            out.report.append(f"{s.name} eps={e} point {s.space.labels[x]}: largest delta {fmt(th[x]) or 'none'}")


def verb_potp(ctx: Context, out: Output) -> None:
    s = ctx.need_system()
    d, e = ctx.rational("delta"), ctx.rational("eps")
    if "through" in ctx.params:
        names = ctx.params["through"].replace(",", " ").split()
        K = sorted({ctx.point_named(n, "through") for n in names})
    else:
        K = list(range(s.n))
    ok = potp_through(s, K, d, e, ctx.mode, ctx.selector)
    detail = ""
    if not ok:
        bad = [x for x in K if not point_shadowable(s, x, d, e, ctx.mode, ctx.selector)]
        detail = f"not shadowable: {_labels(s, bad)}"
    out.row(s.name, "*" if len(K) == s.n else _labels(s, K), d, e, "potp" if ok else "no-potp", 0, detail)
    out.report.append(f"{s.name} POTP at delta={d} eps={e}: {ok}" + (f" ({detail})" if detail else ""))


def verb_sets(ctx: Context, out: Output) -> None:
    s = ctx.need_system()
    kind = ctx.params.get("set")
    if kind == "r":
        R = recurrent_set(s)
        for x in sorted(R):
            out.row(s.name, s.space.labels[x], None, None, "member", 0, "recurrent")
        out.report.append(f"{s.name} recurrent set: {{{_labels(s, sorted(R))}}}")
        return
    if kind not in ("cr", "omega"):
        raise ConfigError("set", f"expected cr, omega or r, got {kind!r}")
    setter = cr_eps if kind == "cr" else omega_eps
    name = "chain-recurrent" if kind == "cr" else "non-wandering"
    raw = ctx.params.get("eps", "grid")
    if raw == "grid":
        inter = intersect_over_grid(lambda e: setter(s, e, ctx.mode), critical_distances(s.space, s.generators), s.n, ctx.mode)
        for e, S in inter.trace:
            for x in sorted(S):
                out.row(s.name, s.space.labels[x], None, e, "member", 0, name)
        for x in sorted(inter.result):
            out.row(s.name, s.space.labels[x], None, "grid", "member", 0, f"{name}; intersection over grid")
        note = " (empty grid: whole space)" if inter.empty_grid else ""
        out.report.append(f"{s.name} {name} over grid: {{{_labels(s, sorted(inter.result))}}}{note}")
        if ctx.want_dot and inter.trace:
            out.dot = to_dot(s, chain_graph(s, inter.trace[0][0], ctx.mode))
        return
    e = parse_rational(raw, "eps")
    S = setter(s, e, ctx.mode)
    for x in sorted(S):
        out.row(s.name, s.space.labels[x], None, e, "member", 0, name)
    out.report.append(f"{s.name} {name} at eps={e}: {{{_labels(s, sorted(S))}}}")
    if ctx.want_dot:
        out.dot = to_dot(s, chain_graph(s, e, ctx.mode))


def verb_product(ctx: Context, out: Output) -> None:
    s = ctx.need_system()
    K = ctx.integer("K", 2)
    pad = ctx.integer("pad", 0)
    prod = build_product(s, K, pad, ctx.budget)
    ps = prod.system
    for p in range(ps.n):
        out.row(ps.name, ps.space.labels[p], None, None, "maps-to", 0, ps.space.labels[ps.generators[0][p]])
    out.report.append(f"{ps.name}: {ps.n} points, pad symbol {pad}")
    if ctx.want_dot:
        out.dot = to_dot(ps, chain_graph(ps, 0, ctx.mode))


def _systems_for_verify(ctx: Context) -> list[SemigroupSystem]:
    if "random" in ctx.params:
        if ctx.seed is None:
            raise ConfigError("seed", "random sweeps need a seed")
        n = ctx.integer("random")
        return random_corpus(n, ctx.seed, ctx.integer("max-points", 5), ctx.integer("max-m", 2))
    if ctx.system is not None:
        return [ctx.system]
    return builtin_systems()


def _lift_one(s: SemigroupSystem, T: int, mode: str, selector: str, budget: int) -> checks.CheckResult:
    res = checks.CheckResult("lift-to-product")
    for x, d, e, k in checks.lift_cases(s, T, budget, mode, selector):
        res.merge(checks.check_lift(s, x, d, e, k, T, mode=mode, selector=selector))
    return res


def _fan_out(fn: Callable, systems: list[SemigroupSystem], jobs: int) -> list[checks.CheckResult]:
    # Results come back in submission order regardless of completion order.
    if jobs > 1 and len(systems) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, systems, chunksize=max(1, len(systems) // (4 * jobs))))
    return [fn(s) for s in systems]


def verify_result(name: str, ctx: Context) -> checks.CheckResult:
    mode, sel = ctx.mode, ctx.selector
    if name == "example2.5":
        total = checks.CheckResult("example2.5")
        for K in (4, 5, 6):
            total.merge(checks.check_prepend_potp(K))
        return total
    if name in ("example3.7", "theorem1.2"):
        total = checks.CheckResult(name)
        triples = [(ctx.integer("q"), ctx.integer("a0"), ctx.integer("a1"))] if "q" in ctx.params else [
            (4, 1, 2), (5, 1, 1), (12, 5, 2)
        ]
        for t in triples:
            total.merge(checks.check_rotation_example(*t))
        return total
    systems = _systems_for_verify(ctx)
    if name == "lemma3.5":
        T = ctx.integer("T", 2)
        results = _fan_out(partial(_lift_one, T=T, mode=mode, selector=ctx.params.get("lift-selector", "fixed"),
                                   budget=ctx.integer("product-budget", 800)), systems, ctx.jobs)
        return checks.run_over_results(results, name)
    table: dict[str, Callable] = {
        "oracle": partial(checks.check_oracle, mode=mode, selector=sel),
        "theorem1.1": partial(checks.check_potp_pointwise, mode=mode, selector=sel),
        "lemma3.3": partial(checks.check_cr_sh_in_omega, selector=sel),
        "lemma3.1": partial(checks.check_near_start, mode=mode, selector=sel),
        "monotone": partial(checks.check_monotone, mode=mode, selector=sel),
        "inclusions": partial(
            checks.check_inclusions, mode=mode, bound=operator.add if ctx.params.get("bound") == "sum" else None
        ),
    }
    if name not in table:
        raise ConfigError("verify", f"unknown check {name!r}; known: {', '.join(VERIFY_NAMES)}")
    return checks.run_over_results(_fan_out(table[name], systems, ctx.jobs), name)


def verb_verify(ctx: Context, out: Output) -> None:
    name = ctx.params.get("name")
    if name is None:
        raise ConfigError("verify", "missing check name")
    res = verify_result(name, ctx)
    for f in res.failures:
        out.row(f.system, f.point, f.delta, f.eps, "counterexample", 0, f.detail)
    for f in res.notes:
        out.row(f.system, f.point, f.delta, f.eps, "note", 0, f.detail)
    out.row(name, "*", None, None, "pass" if res.ok else "fail", 0,
            f"checked={res.checked} counterexamples={len(res.failures)}")
    out.report.append(f"verify {name}: {res.checked} checked, {len(res.failures)} counterexamples")
    for f in res.failures:
        out.report.append(f"  counterexample {f.system} point={f.point} delta={fmt(f.delta)} eps={fmt(f.eps)}: {f.detail}")
    out.violated = not res.ok


def verb_catalog(ctx: Context, out: Output) -> None:
    name = ctx.params.get("name")
    if name != "example3.7":
        raise ConfigError("catalog", f"unknown catalog verb {name!r}; known: example3.7")
    q, a0, a1 = ctx.integer("q", 4), ctx.integer("a0", 1), ctx.integer("a1", 2)
    res = checks.check_rotation_example(q, a0, a1)
    s = catalog_system("rotation-pair", {"q": q, "a0": a0, "a1": a1})
    R = recurrent_set(s)
    out.row(s.name, "*", None, None, "recurrent", 0, f"{len(R)} of {s.n} points recurrent")
    for f in res.failures:
        out.row(f.system, f.point, f.delta, f.eps, "counterexample", 0, f.detail)
    for f in res.notes:
        out.row(f.system, f.point, f.delta, f.eps, "note", 0, f.detail)
    out.report.append(f"{s.name}: {len(R)}/{s.n} recurrent; {res.summary()}")
    out.violated = not res.ok
    if ctx.want_dot:
        out.dot = to_dot(s, chain_graph(s, 0, ctx.mode))


VERBS: dict[str, Callable[[Context, Output], None]] = {
    "decide": verb_decide,
    "threshold": verb_threshold,
    "potp": verb_potp,
    "sets": verb_sets,
    "product": verb_product,
    "verify": verb_verify,
    "catalog": verb_catalog,
}


def execute(verb: str, ctx: Context) -> Output:
    if verb not in VERBS:
        raise ConfigError("command", f"unknown verb {verb!r}; known: {', '.join(VERBS)}")
    out = Output()
    VERBS[verb](ctx, out)
    return out


def context_from_config(cfg: RunConfig, jobs: int = 1) -> tuple[str, Context]:
    params = dict(cfg.params)
    verb = cfg.verb
    # "product build", "verify NAME", "sets KIND", "catalog NAME" carry a positional word.
    for key, pk in (("verify", "name"), ("catalog", "name"), ("sets", "set")):
        if verb.startswith(key + " "):
            verb, params[pk] = key, verb.split(" ", 1)[1]
    if verb == "product build":
        verb = "product"
    system = resolve_system(cfg) if cfg.system else None
    ctx = Context(system, params, cfg.mode, cfg.selector, cfg.budget, cfg.seed, jobs, cfg.dot is not None)
    return verb, ctx


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", nargs="+", metavar=("NAME", "K=V"), help=f"catalog system: {', '.join(CATALOG)}")
    common.add_argument("--mode", choices=MODES, default="closed")
    common.add_argument("--selector", choices=SELECTOR_MODES, default="shared")
    common.add_argument("--csv", help="CSV output path (default stdout)")
    common.add_argument("--report", help="report output path (default stderr)")
    common.add_argument("--dot", help="DOT output path")
    common.add_argument("--budget", type=int, default=DEFAULT_POINT_BUDGET)
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="shadowable", description="Shadowing decisions on finite semigroup actions.")
    sub = p.add_subparsers(dest="verb", required=True)

    d = sub.add_parser("decide", parents=[common], help="decide one point")
    d.add_argument("--x", required=True)
    d.add_argument("--delta", required=True)
    d.add_argument("--eps", required=True)
    d.add_argument("--near", action="store_true", help="allow starts within delta of x")

    t = sub.add_parser("threshold", parents=[common], help="largest grid delta per point")
    t.add_argument("--eps", default="grid")

    pp = sub.add_parser("potp", parents=[common], help="pseudo-orbit tracing at (delta, eps)")
    pp.add_argument("--delta", required=True)
    pp.add_argument("--eps", required=True)
    pp.add_argument("--through", help="comma-separated start points")

    st = sub.add_parser("sets", parents=[common], help="chain-recurrent, non-wandering or recurrent set")
    st.add_argument("set", choices=("cr", "omega", "r"))
    st.add_argument("--eps", default="grid")

    pr = sub.add_parser("product", parents=[common], help="skew product over depth-K words")
    pr.add_argument("action", choices=("build",))
    pr.add_argument("--K", type=int, default=2)
    pr.add_argument("--pad", type=int, default=0)

    v = sub.add_parser("verify", parents=[common], help="invariant sweeps")
    v.add_argument("name", choices=VERIFY_NAMES)
    v.add_argument("--random", metavar="n=COUNT", help="sweep COUNT seeded random systems")
    v.add_argument("--max-points", type=int, default=5)
    v.add_argument("--max-m", type=int, default=2)
    v.add_argument("--bound", choices=("max", "sum"), default="max", help="inclusions: CR resolution bound")
    v.add_argument("--T", type=int, default=2, help="lemma3.5: horizon")
    v.add_argument("--q", type=int)
    v.add_argument("--a0", type=int)
    v.add_argument("--a1", type=int)

    c = sub.add_parser("catalog", parents=[common], help="builtin example reports")
    c.add_argument("name", choices=("example3.7",))
    c.add_argument("--q", type=int, default=4)
    c.add_argument("--a0", type=int, default=1)
    c.add_argument("--a1", type=int, default=2)

    r = sub.add_parser("run", help="run a JSON config")
    r.add_argument("config")
    r.add_argument("--jobs", type=int, default=1)
    return p


def context_from_args(a: argparse.Namespace) -> tuple[str, Context]:
    system = None
    if a.catalog:
        name, *kv = a.catalog
        system = catalog_system(name, parse_kv(kv, "--catalog"), a.seed, "--catalog", a.budget)
    params: dict[str, str] = {}
    verb = a.verb
    if verb == "decide":
        params.update(x=a.x, delta=a.delta, eps=a.eps, near=str(a.near))
    elif verb == "threshold":
        params["eps"] = a.eps
    elif verb == "potp":
        params.update(delta=a.delta, eps=a.eps)
        if a.through:
            params["through"] = a.through
    elif verb == "sets":
        params.update(set=a.set, eps=a.eps)
    elif verb == "product":
        params.update(K=str(a.K), pad=str(a.pad))
    elif verb == "verify":
        params.update(name=a.name, bound=a.bound, T=str(a.T))
        params["max-points"], params["max-m"] = str(a.max_points), str(a.max_m)
        if a.random:
            params["random"] = a.random.split("=", 1)[-1]
        if a.q is not None:
            params.update(q=str(a.q), a0=str(a.a0 or 0), a1=str(a.a1 or 0))
    elif verb == "catalog":
        params.update(name=a.name, q=str(a.q), a0=str(a.a0), a1=str(a.a1))
    ctx = Context(system, params, a.mode, a.selector, a.budget, a.seed, a.jobs, a.dot is not None)
    return verb, ctx


def _write(path: str | None, text: str, stream) -> None:
    if path is None:
        stream.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        if a.verb == "run":
            cfg = load_config(a.config)
            verb, ctx = context_from_config(cfg, a.jobs)
            paths = (cfg.csv, cfg.report, cfg.dot)
        else:
            verb, ctx = context_from_args(a)
            paths = (a.csv, a.report, a.dot)
        out = execute(verb, ctx)
    except ConfigError as e:
        print(f"config error: {e}", file=_sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=_sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, IndexError) as e:
        print(f"config error: {e}", file=_sys.stderr)
        return EXIT_CONFIG
    csv_path, report_path, dot_path = paths
    _write(csv_path, out.csv_text(), _sys.stdout)
    _write(report_path, "\n".join(out.report) + "\n", _sys.stderr)
    if dot_path and out.dot is not None:
        _write(dot_path, out.dot, _sys.stdout)
    return EXIT_INVARIANT if out.violated else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
