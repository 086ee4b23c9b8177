"""Acceptance battery: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also written to the terminal when output is captured.
"""

import random
import time

import pytest

from helpers import jackson_setup
from qbcn.bcjackson import LatticeTruncation, wronskian_ratio_check
from qbcn.harness import DEFAULT_FLOOR, CheckConfig, run_check

INTERP_SHAPES = [(2, 1), (2, 2), (2, 3), (3, 2), (4, 2)]


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        return ok

    return emit


def _run(identity, **kw):
    t0 = time.perf_counter()
    rep = run_check(CheckConfig(identity, **kw))
    return rep, time.perf_counter() - t0


def _sub_max(rep, name):
    return max(c["residual"] for s in rep.samples for c in s["checks"] if c["name"] == name)


def test_c01_bailey(report):
    rep, dt = _run("bailey", samples=50, seed=1)
    qs = [float(s["params"]["q"][0]) for s in rep.samples]
    ok = rep.verdict == "PASS" and rep.max_residual < 1e-25 and dt < 10 and all(0.2 < q < 0.6 for q in qs)
    assert report(1, "Bailey 6psi6, 50 samples", ok, f"max residual {rep.max_residual:.2e}, {dt:.1f}s")


def test_c02_slater(report):
    t0 = time.perf_counter()
    worst, verdicts = 0.0, []
    for r in (3, 4, 5):
        rep, _ = _run("slater", r=r, samples=20, seed=2, tolerance=1e-20)
        worst = max(worst, rep.max_residual)
        verdicts.append(rep.verdict)
    dt = time.perf_counter() - t0
    ok = verdicts == ["PASS"] * 3 and worst < 1e-20 and dt < 60
    assert report(2, "Slater 2r-psi-2r, r = 3, 4, 5", ok, f"max residual {worst:.2e}, {dt:.1f}s")


def test_c03_delta(report):
    t0 = time.perf_counter()
    worst, verdicts = 0.0, []
    for s, n in INTERP_SHAPES:
        rep, _ = _run("delta", s=s, n=n, samples=1, seed=3, tolerance=1e-28)
        worst = max(worst, rep.max_residual)
        verdicts.append(rep.verdict)
    dt = time.perf_counter() - t0
    ok = set(verdicts) == {"PASS"} and worst < 1e-28 and dt < 30
    assert report(3, "delta property, exhaustive on 5 shapes", ok, f"max |f - delta| {worst:.2e}, {dt:.1f}s")


def test_c04_method_agreement(report):
    worst, verdicts = 0.0, []
    for s, n in INTERP_SHAPES:
        rep, _ = _run("method-agreement", s=s, n=n, samples=30, seed=4, tolerance=1e-25)
        worst = max(worst, rep.max_residual)
        verdicts.append(rep.verdict)
    ok = set(verdicts) == {"PASS"} and worst < 1e-25
    assert report(4, "three-method agreement, 30 per shape", ok, f"max pairwise deviation {worst:.2e}")


def test_c05_duality(report):
    worst, verdicts = 0.0, []
    for s, n in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)]:
        rep, _ = _run("duality", s=s, n=n, samples=30, seed=5, tolerance=1e-25)
        worst = max(worst, rep.max_residual)
        verdicts.append(rep.verdict)
    ok = set(verdicts) == {"PASS"} and worst < 1e-25
    assert report(5, "duality, 30 samples per shape up to (3,3)", ok, f"max residual {worst:.2e}")


def test_c06_quasi_periodicity(report):
    worst_interp, verdicts = 0.0, []
    for s, n in INTERP_SHAPES:
        rep, _ = _run("quasi-periodicity", s=s, n=n, samples=10, seed=6, tolerance=1e-25)
        worst_interp = max(worst_interp, rep.max_residual)
        verdicts.append(rep.verdict)
    # lattice side: residual against 20x the shell error of the sums involved
    ratio = 0.0
    for s, n, phi in [(1, 1, "one"), (2, 1, "one"), (2, 1, "schur"), (2, 2, "one"), (2, 2, "schur")]:
        rep, _ = _run("quasi-periodicity", s=s, n=n, phi=phi, target="jackson", samples=4, seed=6)
        verdicts.append(rep.verdict)
        for rec in rep.samples:
            for c in rec["checks"]:
                ratio = max(ratio, c["residual"] / max(20 * rec["shell_error"], DEFAULT_FLOOR["quasi-periodicity"]))
    ok = set(verdicts) == {"PASS"} and worst_interp < 1e-25 and ratio < 1
    detail = f"interp max {worst_interp:.2e}; jackson max residual/threshold {ratio:.2e}"
    assert report(6, "quasi-periodicity and W_n invariance", ok, detail)


def test_c07_transition_det(report):
    worst, forms, verdicts = 0.0, 0.0, []
    for s, n in [(2, 2), (2, 3), (3, 2)]:
        rep, _ = _run("transition-det", s=s, n=n, samples=20, seed=7, tolerance=1e-20)
        worst = max(worst, _sub_max(rep, "det-vs-closed"))
        forms = max(forms, _sub_max(rep, "closed-forms"))
        verdicts.append(rep.verdict)
    ok = set(verdicts) == {"PASS"} and worst < 1e-20 and forms < 1e-30
    assert report(7, "transition determinant", ok, f"det residual {worst:.2e}, forms {forms:.2e}")


def test_c08_triangularity(report):
    forb, diag, verdicts = 0.0, 0.0, []
    for s, n in [(2, 1), (2, 2), (2, 3), (3, 2), (4, 2)]:
        rep, _ = _run("one-coordinate", s=s, n=n, samples=5, seed=8, tolerance=1e-25)
        forb = max(forb, _sub_max(rep, "forbidden-entries"))
        diag = max(diag, _sub_max(rep, "diagonal"))
        verdicts.append(rep.verdict)
        rep, _ = _run("transition-det", s=s, n=n, samples=3, seed=8)
        forb = max(forb, _sub_max(rep, "chain-triangularity"))
        verdicts.append(rep.verdict)
    ok = set(verdicts) == {"PASS"} and forb < 1e-28 and diag < 1e-25
    assert report(8, "one-coordinate triangularity", ok, f"forbidden {forb:.2e}, diagonal {diag:.2e}")


def test_c09_vandiejen(report):
    lines, verdicts, slow = [], [], 0.0
    for n in (1, 2, 3):
        rep, dt = _run("vandiejen", s=1, n=n, samples=3, seed=9)
        verdicts.append(rep.verdict)
        lines.append(f"n={n} {rep.max_residual:.1e} ({dt:.0f}s)")
        if n == 3:
            slow = dt
    radius = [LatticeTruncation.default_for(n).radius for n in (1, 2, 3)]
    ok = verdicts == ["PASS"] * 3 and radius == [40, 40, 25] and slow < 180
    assert report(9, "van Diejen sum, s = 1", ok, ", ".join(lines))


def test_c10_wronskian(report):
    lines, verdicts, slow = [], [], 0.0
    for s, n in [(1, 1), (2, 1), (1, 2), (2, 2)]:
        rep, dt = _run("wronskian", s=s, n=n, samples=2, seed=10)
        verdicts.append(rep.verdict)
        lines.append(f"({s},{n}) {rep.max_residual:.1e}")
        if (s, n) == (2, 2):
            slow = dt / 2
    ok = verdicts == ["PASS"] * 4 and slow < 300
    assert report(10, "Wronskian determinant", ok, ", ".join(lines) + f"; (2,2) {slow:.0f}s per sample")


def test_c11_connection(report):
    lines, verdicts = [], []
    slater = 0.0
    for s, n in [(2, 1), (2, 2), (3, 1)]:
        for phi in ("one", "schur"):
            rep, _ = _run("connection", s=s, n=n, phi=phi, samples=2, seed=11)
            verdicts.append(rep.verdict)
            lines.append(f"({s},{n},{phi}) {rep.max_residual:.1e}")
            if (s, n, phi) == (2, 1, "one"):
                slater = max(_sub_max(rep, "slater-lhs-match"), _sub_max(rep, "slater-term-match"))
    ok = set(verdicts) == {"PASS"}
    assert report(11, "connection formula", ok, ", ".join(lines) + f"; Slater match {slater:.1e}")


def test_c12_wronskian_ratio(report):
    worst, ok = 0.0, True
    floor = DEFAULT_FLOOR["wronskian"]
    for n in (1, 2):
        for seed in range(2):
            ctx, p, _ = jackson_setup(2, n, 120 + seed, degree=1)
            rng = random.Random(seed)
            x2 = [ctx.abs_q ** rng.uniform(0.05, 0.25) * ctx.mp.expj(rng.uniform(-3, 3)) for _ in range(2)]
            c = wronskian_ratio_check(p, x2, ctx)
            ok = ok and c.passed(floor)
            worst = max(worst, c.residual / c.threshold(floor))
    assert report(12, "Wronskian ratio vs transition determinant", ok, f"max residual/threshold {worst:.2e}")


def test_c13_determinism(report):
    ok = True
    for ident, kw in [
        ("bailey", {}),
        ("slater", {"r": 4}),
        ("transition-det", {"s": 2, "n": 2}),
        ("connection", {"s": 2, "n": 1}),
        ("quasi-periodicity", {"s": 2, "n": 2, "target": "jackson", "phi": "schur"}),
    ]:
        a, _ = _run(ident, samples=3, seed=13, **kw)
        b, _ = _run(ident, samples=3, seed=13, **kw)
        ok = ok and [s["residual"] for s in a.samples] == [s["residual"] for s in b.samples]
        ok = ok and a.deterministic_view() == b.deterministic_view()
    assert report(13, "determinism under a fixed seed", ok, "bit-identical residuals on 5 identities")
