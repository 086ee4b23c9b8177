"""Golden-value regression store.

A fixed battery of expressions is evaluated at 512 bits and written to JSON
as decimal strings. Verification re-evaluates at the caller's precision and
requires relative agreement within ``2^-200``, so any precision of at least
256 bits should reproduce the stored digits.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import __version__
from .errors import QBCNError
from .harness import ExprSpec, eval_expr, format_value

GOLDEN_BITS = 512
GOLDEN_REL_TOL = 2.0**-200
SCHEMA = 1

_A6 = ["0.9", "0.88j", "-0.91", "0.87", "0.93+0.1j", "0.9"]

BATTERY: dict = {
    "theta-real": dict(kind="theta", q="0.35", args=["0.6"]),
    "theta-reduced": dict(kind="theta", q="0.35", args=["7.25-1.5j"]),
    "theta-complex-q": dict(kind="theta", q="0.3+0.4j", args=["0.45+0.2j"]),
    "theta-near-unit": dict(kind="theta", q="0.9", args=["0.95j"]),
    "e-symbol": dict(kind="e-symbol", q="0.35", args=["0.8+0.1j", "1.3"]),
    "schur-2": dict(kind="schur", lam=[2, 1], z=["0.7+0.2j", "1.9"]),
    "schur-3": dict(kind="schur", lam=[1, 1, 0], z=["0.6", "1.4j", "2.1-0.3j"]),
    "interp-s2n2": dict(kind="interp", q="0.35", lam=[1, 1], z=["0.9+0.3j", "1.2"], t="0.5+0.1j", x=["0.72", "1.3+0.2j"]),
    "interp-s3n2": dict(kind="interp", q="0.4", lam=[0, 1, 1], z=["0.8", "1.1-0.4j"], t="0.45", x=["0.7", "1.3j", "0.9-0.5j"]),
    "interp-delta": dict(kind="interp", q="0.35", lam=[1, 0], mu=[1, 0], t="0.55", x=["0.72", "1.3+0.2j"]),
    "jackson-s2n1": dict(kind="jackson", q="0.08", t="0.9", x=["0.8", "0.7j"], a=_A6, z=["0.6"], radius=30),
    "jackson-s2n2-schur": dict(
        kind="jackson", q="0.08", t="0.9", x=["0.8", "0.7j"], a=_A6, lam=[1, 0], z=["0.6", "0.5j"], radius=12
    ),
}


@dataclass
class GoldenMismatch:
    name: str
    reason: str
    expected: Optional[list] = None
    got: Optional[list] = None
    rel_error: Optional[float] = None


@dataclass
class GoldenReport:
    path: str
    bits: int
    status: str  # PASS or FAIL
    checked: int
    mismatches: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def golden_update(path: str, bits: int = GOLDEN_BITS) -> dict:
    """Evaluate the battery at ``bits`` and write it to ``path``."""
    entries = []
    for name, expr in BATTERY.items():
        value, ctx = eval_expr(ExprSpec.from_dict(expr), bits)
        entries.append({"name": name, "expr": expr, "value": format_value(value, ctx)})
    doc = {"schema": SCHEMA, "bits": bits, "library_version": __version__, "entries": entries}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return doc


def _rel(got, want) -> float:
    den = abs(want)
    if den == 0:
        return float(abs(got))
    return float(abs(got - want) / den)


def golden_verify(path: str, bits: int = 256) -> GoldenReport:
    """Compare stored goldens with fresh values; never raises on bad content."""
    report = GoldenReport(path, bits, "PASS", 0)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        report.status = "FAIL"
        report.mismatches.append(asdict(GoldenMismatch("<file>", f"unreadable: {exc}")))
        return report
    except json.JSONDecodeError as exc:
        report.status = "FAIL"
        report.mismatches.append(asdict(GoldenMismatch("<file>", f"invalid JSON: {exc}")))
        return report
    entries = doc.get("entries") if isinstance(doc, dict) else None
    if not isinstance(entries, list):
        report.status = "FAIL"
        report.mismatches.append(asdict(GoldenMismatch("<file>", "missing 'entries' list")))
        return report
    if doc.get("schema") != SCHEMA:
        report.mismatches.append(asdict(GoldenMismatch("<file>", f"schema {doc.get('schema')!r}, expected {SCHEMA}")))
    seen = set()
    for entry in entries:
        name = entry.get("name", "<unnamed>") if isinstance(entry, dict) else "<malformed>"
        seen.add(name)
        try:
            value, ctx = eval_expr(ExprSpec.from_dict(entry["expr"]), bits)
            re_s, im_s = entry["value"]
            want = ctx.mp.mpc(ctx.mp.mpf(re_s), ctx.mp.mpf(im_s))
        except (KeyError, TypeError, ValueError, QBCNError) as exc:
            report.mismatches.append(asdict(GoldenMismatch(name, f"malformed entry: {type(exc).__name__}: {exc}")))
            continue
        report.checked += 1
        rel = _rel(value, want)
        if not rel <= GOLDEN_REL_TOL:
            report.mismatches.append(
                asdict(GoldenMismatch(name, "value mismatch", entry["value"], format_value(value, ctx, 30), rel))
            )
    for name in BATTERY:
        if name not in seen:
            report.mismatches.append(asdict(GoldenMismatch(name, "missing from file")))
    if report.mismatches:
        report.status = "FAIL"
    return report
