"""Command-line front end: ``qbcn check``, ``qbcn eval`` and ``qbcn golden``."""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConfigError, QBCNError
from .harness import (
    EXIT_CONFIG,
    EXPR_KINDS,
    IDENTITIES,
    CheckConfig,
    ExprSpec,
    eval_expr,
    format_value,
    load_config,
    run_check,
    summarize,
)

DEFAULT_GOLDENS = os.path.join("goldens", "goldens.json")

# flag name -> CheckConfig field
_OVERRIDES = {
    "identity": "identity",
    "s": "s",
    "n": "n",
    "r": "r",
    "bits": "precision_bits",
    "radius": "radius",
    "shell_stop": "shell_stop",
    "samples": "samples",
    "seed": "seed",
    "tolerance": "tolerance",
    "jobs": "jobs",
    "phi": "phi",
    "target": "target",
}


def _csv(text: str) -> list:
    return [v.strip() for v in text.split(",") if v.strip()]


def _ints(text: str) -> list:
    try:
        return [int(v) for v in _csv(text)]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qbcn", description="High-precision identity checks for BC_n q-series.")
    sub = ap.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="run an identity check over random samples")
    chk.add_argument("--config", help="JSON file with CheckConfig fields; flags override it")
    chk.add_argument("--identity", choices=IDENTITIES)
    chk.add_argument("--s", type=int)
    chk.add_argument("--n", type=int)
    chk.add_argument("--r", type=int, help="Slater series order")
    chk.add_argument("--bits", type=int, help="working precision in bits")
    chk.add_argument("--radius", type=int, help="lattice truncation radius N")
    chk.add_argument("--shell-stop", dest="shell_stop", type=float)
    chk.add_argument("--samples", type=int)
    chk.add_argument("--seed", type=int)
    chk.add_argument("--tolerance", type=float, help="override the pass threshold (floor for lattice checks)")
    chk.add_argument("--jobs", type=int, help="worker processes")
    chk.add_argument("--phi", choices=("one", "schur"), help="integrand for lattice identities")
    chk.add_argument("--target", choices=("interp", "jackson"), help="quasi-periodicity target")
    chk.add_argument("--json", metavar="OUT", help="write the JSON report here ('-' for stdout)")
    chk.add_argument("--quiet", action="store_true", help="print only the verdict line")

    ev = sub.add_parser("eval", help="evaluate a single expression")
    ev.add_argument("kind", choices=EXPR_KINDS)
    ev.add_argument("args", nargs="*", help="u for theta; a b for e-symbol")
    ev.add_argument("--q", default="0.3")
    ev.add_argument("--bits", type=int, default=256)
    ev.add_argument("--lam", type=_ints, help="partition or index, e.g. 1,0")
    ev.add_argument("--z", type=_csv, help="point, comma-separated complex numbers")
    ev.add_argument("--mu", type=_ints, help="evaluate at the special point x_mu instead of --z")
    ev.add_argument("--t")
    ev.add_argument("--x", type=_csv)
    ev.add_argument("--a", type=_csv, help="the 2s+2 lattice parameters")
    ev.add_argument("--radius", type=int, help="jackson: fixed truncation radius")
    ev.add_argument("--digits", type=int, help="significant digits to print (default: full precision)")

    gd = sub.add_parser("golden", help="regenerate or verify golden values")
    gd.add_argument("action", choices=("update", "verify"))
    gd.add_argument("--goldens", default=DEFAULT_GOLDENS, metavar="PATH")
    gd.add_argument("--bits", type=int, help="precision (default 512 for update, 256 for verify)")
    gd.add_argument("--json", metavar="OUT", help="write the verify report here ('-' for stdout)")
    return ap


def _emit(text: str, dest: str | None) -> None:
    if dest is None:
        return
    if dest == "-":
        print(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def cmd_check(args) -> int:
    data = load_config(args.config) if args.config else {}
    for flag, key in _OVERRIDES.items():
        val = getattr(args, flag)
        if val is not None:
            data[key] = val
    if "identity" not in data:
        raise ConfigError("no identity given (use --identity or a config file)")
    cfg = CheckConfig.from_dict(data)
    report = run_check(cfg)
    _emit(report.to_json(), args.json)
    if args.json != "-":
        print(f"verdict: {report.verdict}" if args.quiet else summarize(report))
    return report.exit_code


def cmd_eval(args) -> int:
    spec = ExprSpec(
        kind=args.kind, q=args.q, args=args.args, lam=args.lam, z=args.z,
        mu=args.mu, t=args.t, x=args.x, a=args.a, radius=args.radius,
    )
    value, ctx = eval_expr(spec, args.bits)
    re_s, im_s = format_value(value, ctx, args.digits)
    print(f"{args.kind} = {re_s} + {im_s}j")
    print(f"  precision_bits={ctx.precision_bits} q={ctx.mp.nstr(ctx.q, 15)}")
    return 0


def cmd_golden(args) -> int:
    from .goldens import GOLDEN_BITS, golden_update, golden_verify

    if args.action == "update":
        os.makedirs(os.path.dirname(args.goldens) or ".", exist_ok=True)
        doc = golden_update(args.goldens, args.bits or GOLDEN_BITS)
        print(f"wrote {len(doc['entries'])} goldens at {doc['bits']} bits to {args.goldens}")
        return 0
    report = golden_verify(args.goldens, args.bits or 256)
    _emit(report.to_json(), args.json)
    if args.json != "-":
        print(f"golden verify: {report.status} ({report.checked} checked at {report.bits} bits)")
        for m in report.mismatches:
            print(f"  {m['name']}: {m['reason']}" + (f" (rel {m['rel_error']:.3e})" if m["rel_error"] is not None else ""))
    return 0 if report.status == "PASS" else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args)
        if args.command == "eval":
            return cmd_eval(args)
        return cmd_golden(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QBCNError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
