"""Acceptance criteria 1-9. Each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s``.
"""

import time
from fractions import Fraction

import pytest

from shadowable import checks
from shadowable.catalog import builtin_systems, prepend_system
from shadowable.cli import main
from shadowable.skew import build_product, lift_check, lift_depth

F = Fraction


def report(n, title, res, extra=""):
    line = f"[criterion {n}] {'PASS' if res.ok else 'FAIL'} {title}: {res.checked} checked, {len(res.failures)} counterexamples"
    print(line + (f" ({extra})" if extra else ""))
    for f in res.failures[:10]:
        print(f"    {f.system} point={f.point} delta={f.delta} eps={f.eps}: {f.detail}")


@pytest.fixture(scope="module")
def catalog():
    return builtin_systems()


def test_c1_oracle_equivalence():
    t = time.perf_counter()
    systems = checks.corpus("oracle")
    assert len(systems) == 200 and max(s.n for s in systems) <= 5 and max(s.m for s in systems) <= 2
    res = checks.run_over(systems, checks.check_oracle, "oracle")
    took = time.perf_counter() - t
    report(1, "engine equals bounded oracle at T = N*2^N", res, f"{took:.1f}s")
    assert res.ok and took < 600


def test_c2_prepend_potp():
    for K in (4, 5, 6):
        t = time.perf_counter()
        res = checks.check_prepend_potp(K)
        took = time.perf_counter() - t
        report(2, f"prepend K={K} POTP at (2^-(k+1), 2^-k), k <= K-2", res, f"{took:.2f}s")
        assert res.ok and res.checked == K - 1 and took < 60


def test_c3_potp_iff_pointwise(catalog):
    systems = catalog + checks.corpus("potp")
    res = checks.run_over(systems, checks.check_potp_pointwise, "potp")
    report(3, "potp iff every point shadowable", res)
    assert res.ok


def test_c4_cr_and_shadowable_in_omega():
    systems = checks.corpus("cr-omega")
    assert len(systems) == 1000
    res = checks.run_over(systems, checks.check_cr_sh_in_omega, "cr-omega")
    report(4, "CR_delta and shadowable imply omega at every larger eps", res)
    assert res.ok


def test_c5_inclusion_chain(catalog):
    # All test systems: the catalog plus every seeded corpus above.
    systems = catalog + checks.corpus("oracle") + checks.corpus("potp") + checks.corpus("cr-omega") + checks.corpus(
        "near-start"
    )
    res = checks.run_over(systems, checks.check_inclusions, "inclusions")
    report(5, "R in omega_eps and omega_eps in CR at max(eps, modulus(eps))", res)
    assert res.ok


def test_c6_near_start():
    systems = checks.corpus("near-start")
    res = checks.run_over(systems, checks.check_near_start, "near-start")
    report(6, "shadowable at (delta1, eps/2) implies near-start shadowable at (delta, eps)", res)
    assert res.ok


def test_c7_rotation_examples():
    t = time.perf_counter()
    total = checks.CheckResult("rotation")
    for q, a0, a1 in [(4, 1, 2), (5, 1, 1), (12, 5, 2)]:
        total.merge(checks.check_rotation_example(q, a0, a1))
    took = time.perf_counter() - t
    report(7, "rotation products: all points recurrent, neighborhood condition at every grid delta", total, f"{took:.2f}s")
    assert total.ok and took < 30


def test_c8_lift():
    base = prepend_system(2, 4)
    x = base.space.index("0000")
    K = lift_depth(3, F(1, 4))
    rep = lift_check(base, build_product(base, K), x, F(1, 8), F(1, 4), 2, 3)
    total = checks.CheckResult("lift")
    total.checked += len(rep.results)
    total.failures += [checks.Finding(base.name, w, rep.delta, rep.eps, r) for w, r in rep.failures]
    # At depth 4 every failure must carry the horizon-bound reason.
    shallow = checks.check_lift(base, x, F(1, 8), F(1, 4), 2, 3, K=4)
    total.merge(shallow)
    for s in checks.lift_corpus(50, checks.CORPORA["lift"]["seed"], checks.CORPORA["lift"]["max_points"]):
        for xb, d, e, k in checks.lift_cases(s):
            total.merge(checks.check_lift(s, xb, d, e, k, 2))
    report(8, "lift to product at min(2^-(k+1), delta')", total, f"{len(total.notes)} horizon-bound failures logged")
    for n in total.notes[:3]:
        print(f"    logged {n.system} {n.point}: {n.detail}")
    assert total.ok


VERIFY_COMMANDS = [
    ["verify", "oracle", "--random", "n=20", "--seed", "1", "--max-points", "4"],
    ["verify", "example2.5"],
    ["verify", "theorem1.1", "--random", "n=20", "--seed", "2", "--max-points", "5"],
    ["verify", "lemma3.3", "--random", "n=20", "--seed", "3", "--max-points", "5"],
    ["verify", "inclusions", "--random", "n=20", "--seed", "4", "--max-points", "5"],
    ["verify", "lemma3.1", "--random", "n=20", "--seed", "5", "--max-points", "5"],
    ["verify", "example3.7"],
    ["verify", "lemma3.5", "--random", "n=5", "--seed", "6", "--max-points", "3"],
]


def test_c9_determinism(tmp_path):
    bad = []
    for i, cmd in enumerate(VERIFY_COMMANDS):
        outs = []
        for rep in range(2):
            p = tmp_path / f"{i}-{rep}.csv"
            main(cmd + ["--csv", str(p), "--report", str(tmp_path / "r.txt")])
            outs.append(p.read_bytes())
        if outs[0] != outs[1]:
            bad.append(" ".join(cmd))
    res = checks.CheckResult("determinism", checked=len(VERIFY_COMMANDS),
                             failures=[checks.Finding(c, "*", None, None, "CSV differs") for c in bad])
    report(9, "byte-identical CSV on re-run", res)
    assert res.ok
