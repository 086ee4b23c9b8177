import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbcn.cli import main
from qbcn.errors import ConfigError
from qbcn.goldens import BATTERY, golden_update, golden_verify
from qbcn.harness import (
    CHECKS,
    IDENTITIES,
    CheckConfig,
    ExprSpec,
    Sampler,
    eval_expr,
    format_value,
    run_check,
    run_sample,
)
from qbcn.qnum import PrecisionContext


def test_every_identity_has_an_evaluator():
    assert set(CHECKS) == set(IDENTITIES)


@pytest.mark.parametrize(
    "bad",
    [
        {"identity": "nope"},
        {"identity": "bailey", "samples": 0},
        {"identity": "bailey", "seed": -1},
        {"identity": "bailey", "precision_bits": 32},
        {"identity": "slater", "r": 7},
        {"identity": "wronskian", "s": 3, "n": 3},
        {"identity": "vandiejen", "s": 2},
        {"identity": "duality", "s": 1},
        {"identity": "delta", "s": 4, "n": 4},
        {"identity": "connection", "n": 4},
        {"identity": "quasi-periodicity", "target": "elsewhere"},
    ],
)
def test_config_errors(bad):
    with pytest.raises(ConfigError):
        run_check(CheckConfig(**bad))


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        CheckConfig.from_dict({"identity": "bailey", "sampels": 3})


def test_sampler_streams_are_independent():
    a, b = Sampler(7, 0), Sampler(7, 1)
    assert [a.uniform(0, 1) for _ in range(3)] != [b.uniform(0, 1) for _ in range(3)]
    assert Sampler(7, 3).uniform(0, 1) == Sampler(7, 3).uniform(0, 1)


def test_failing_sample_is_recorded():
    cfg = CheckConfig("bailey", samples=1, precision_bits=64, tolerance=1e-300)
    rec = run_sample(cfg, 0)
    assert rec.status == "FAIL" and rec.residual > 1e-300


def test_bailey_and_delta_pass():
    rep = run_check(CheckConfig("bailey", samples=20, seed=1))
    assert rep.verdict == "PASS" and rep.max_residual < 1e-25 and rep.exit_code == 0
    rep = run_check(CheckConfig("delta", s=2, n=2, samples=3))
    assert rep.verdict == "PASS" and rep.max_residual < 1e-30


def test_determinism_and_jobs():
    cfg = CheckConfig("transition-det", s=2, n=2, samples=4, seed=5)
    one = run_check(cfg).deterministic_view()
    assert one == run_check(cfg).deterministic_view()
    par = CheckConfig("transition-det", s=2, n=2, samples=4, seed=5, jobs=2)
    view = run_check(par).deterministic_view()
    view["config"]["jobs"] = 1
    assert view == one


def test_report_json_schema():
    rep = run_check(CheckConfig("slater", r=4, samples=2))
    doc = json.loads(rep.to_json())
    assert doc["schema"] == 1 and doc["verdict"] == "PASS"
    rec = doc["samples"][0]
    assert {"index", "status", "params", "residual", "threshold", "checks"} <= set(rec)
    re_s, im_s = rec["params"]["q"]
    assert isinstance(re_s, str) and isinstance(im_s, str)


@settings(max_examples=5)
@given(st.integers(0, 2**64 - 1), st.sampled_from(["bailey", "delta", "one-coordinate"]))
def test_report_is_seed_deterministic(seed, identity):
    cfg = CheckConfig(identity, s=2, n=1, samples=1, seed=seed)
    assert run_check(cfg).deterministic_view() == run_check(cfg).deterministic_view()


# -- expression evaluation ----------------------------------------------------


def test_eval_expr_examples():
    v, ctx = eval_expr(ExprSpec("theta", args=["1"]))
    assert v == 0
    v, _ = eval_expr(ExprSpec("schur", lam=[0, 0], z=["2", "3"]))
    assert v == 1
    v, _ = eval_expr(ExprSpec("schur", lam=[1], z=["2"]))
    assert abs(v - 2.5) < 1e-70
    re_s, im_s = format_value(ctx.mp.mpc(1.5, -2), ctx, 5)
    assert float(re_s) == 1.5 and float(im_s) == -2
    with pytest.raises(ConfigError):
        eval_expr(ExprSpec("schur", lam=[1]))


# -- CLI ------------------------------------------------------------------------


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["check", "--identity", "bailey", "--samples", "3", "--quiet"]) == 0
    assert "verdict: PASS" in capsys.readouterr().out
    assert main(["check", "--identity", "wronskian", "--s", "3", "--n", "3"]) == 3
    assert main(["check", "--identity", "bailey", "--samples", "1", "--bits", "64", "--tolerance", "1e-300"]) == 1
    assert main(["eval", "theta", "0"]) == 1
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"identity": "slater", "r": 3, "samples": 2}))
    out = tmp_path / "rep.json"
    assert main(["check", "--config", str(cfg), "--json", str(out), "--quiet"]) == 0
    assert json.loads(out.read_text())["config"]["r"] == 3
    cfg.write_text("[1, 2]")
    assert main(["check", "--config", str(cfg)]) == 3


def test_cli_eval(capsys):
    assert main(["eval", "e-symbol", "0.8", "0.8", "--digits", "10"]) == 0
    assert "e-symbol = 0" in capsys.readouterr().out


# -- goldens ---------------------------------------------------------------------


def test_golden_roundtrip(tmp_path):
    path = tmp_path / "g.json"
    doc = golden_update(str(path), 384)
    assert len(doc["entries"]) == len(BATTERY)
    for bits in (256, 320):
        rep = golden_verify(str(path), bits)
        assert rep.status == "PASS" and rep.checked == len(BATTERY), rep.mismatches


def test_golden_corruption_is_reported(tmp_path):
    path = tmp_path / "g.json"
    doc = golden_update(str(path), 384)
    doc["entries"][0]["value"][0] = "0.123"
    doc["entries"][1]["expr"] = {"kind": "theta"}
    del doc["entries"][2]
    path.write_text(json.dumps(doc))
    rep = golden_verify(str(path))
    assert rep.status == "FAIL"
    reasons = {m["name"]: m["reason"] for m in rep.mismatches}
    assert reasons[doc["entries"][0]["name"]] == "value mismatch"
    assert reasons[doc["entries"][1]["name"]].startswith("malformed")
    assert any(r == "missing from file" for r in reasons.values())
    path.write_text("{not json")
    assert golden_verify(str(path)).status == "FAIL"
    assert golden_verify(str(tmp_path / "absent.json")).status == "FAIL"


def test_shipped_goldens_verify():
    import pathlib

    path = pathlib.Path(__file__).resolve().parent.parent / "goldens" / "goldens.json"
    rep = golden_verify(str(path))
    assert rep.status == "PASS", rep.mismatches


def test_precision_context_in_eval():
    _, ctx = eval_expr(ExprSpec("theta", args=["0.5"]), bits=128)
    assert isinstance(ctx, PrecisionContext) and ctx.precision_bits == 128
