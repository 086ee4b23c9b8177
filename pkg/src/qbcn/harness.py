"""Identity-check orchestration: sampling, per-sample evaluation and reports.

Every identity draws its parameters from a counter-based generator keyed by
``(seed, sample index)``, so a sample can be recomputed in isolation and
samples can run in any order or in parallel without changing the report.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from typing import Callable, Optional

import numpy as np

from . import __version__
from .bcjackson import (
    LatticeTruncation,
    connection_check,
    connection_slater_match,
    lattice_invariance_check,
    predicted_decay,
    quasi_periodicity_check,
    regularized_integral,
    vandiejen_check,
    wronskian_check,
    _wronskian_caps,
)
from .errors import ConfigError, NonGenericError, QBCNError, UnconvergedError
from .indexsets import ParameterSet, enumerate_indices, genericity_check
from .interp import METHODS, InterpolationBasis, duality_residual
from .qnum import PrecisionContext, rel_residual
from .qseries import bailey_residual, slater_residual
from .transition import forbidden_entry_max, one_coordinate_factor, transition_det_report

IDENTITIES = (
    "bailey",
    "slater",
    "duality",
    "delta",
    "method-agreement",
    "quasi-periodicity",
    "transition-det",
    "one-coordinate",
    "vandiejen",
    "wronskian",
    "connection",
    "lattice-invariance",
)

# pass thresholds for the exact (non-lattice) identities
DEFAULT_TOLERANCE = {
    "bailey": 1e-25,
    "slater": 1e-20,
    "duality": 1e-25,
    "delta": 1e-28,
    "method-agreement": 1e-25,
    "quasi-periodicity": 1e-25,
    "transition-det": 1e-20,
    "one-coordinate": 1e-25,
}
# floors for lattice identities; the effective threshold is max(floor, 20 * shell error)
DEFAULT_FLOOR = {
    "vandiejen": 1e-15,
    "wronskian": 1e-10,
    "connection": 1e-10,
    "lattice-invariance": 1e-15,
    "quasi-periodicity": 1e-15,
}
FORMS_TOLERANCE = 1e-30
FORBIDDEN_TOLERANCE = 1e-28
SLATER_R = (3, 4, 5)
MAX_INTERP_SHAPE = 20  # |Z_{s,n}|
MAX_RESAMPLE = 200

EXIT_CODES = {"PASS": 0, "FAIL": 1, "UNCONVERGED": 2}
EXIT_CONFIG = 3


@dataclass
class CheckConfig:
    identity: str
    s: int = 2
    n: int = 1
    r: int = 3
    precision_bits: int = 256
    radius: Optional[int] = None
    shell_stop: Optional[float] = None
    samples: int = 10
    seed: int = 0
    tolerance: Optional[float] = None
    jobs: int = 1
    phi: str = "one"  # integrand for lattice identities: "one" or "schur"
    target: str = "interp"  # quasi-periodicity: "interp" or "jackson"

    def validate(self) -> None:
        if self.identity not in IDENTITIES:
            raise ConfigError(f"unknown identity {self.identity!r}; choose from {', '.join(IDENTITIES)}")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.precision_bits < 64:
            raise ConfigError("precision_bits must be at least 64")
        if self.s < 1 or self.n < 1:
            raise ConfigError("need s, n >= 1")
        if self.phi not in ("one", "schur"):
            raise ConfigError("phi must be 'one' or 'schur'")
        if self.target not in ("interp", "jackson"):
            raise ConfigError("target must be 'interp' or 'jackson'")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")
        ident = self.identity
        if ident == "slater" and self.r not in SLATER_R:
            raise ConfigError(f"slater supports r in {SLATER_R}")
        if ident in ("delta", "method-agreement", "duality", "quasi-periodicity", "transition-det", "one-coordinate"):
            if math.comb(self.s + self.n - 1, self.n) > MAX_INTERP_SHAPE or self.n > 3 or self.s > 4:
                raise ConfigError(f"(s, n) = ({self.s}, {self.n}) is above the interpolation cap")
        if ident in ("duality", "transition-det", "one-coordinate") and self.s < 2:
            raise ConfigError(f"{ident} needs s >= 2")
        if ident == "method-agreement" and self.s < 2:
            raise ConfigError("the triangular route needs s >= 2")
        if ident == "vandiejen" and self.s != 1:
            raise ConfigError("vandiejen is the s = 1 case")
        if ident == "wronskian":
            _wronskian_caps(self.s, self.n)
        if ident in ("vandiejen", "wronskian", "connection", "lattice-invariance") or (
            ident == "quasi-periodicity" and self.target == "jackson"
        ):
            if self.n > 3:
                raise ConfigError("lattice sums are capped at n <= 3")
            if math.comb(self.s + self.n - 1, self.n) > MAX_INTERP_SHAPE:
                raise ConfigError("connection basis above the interpolation cap")

    @classmethod
    def from_dict(cls, d: dict) -> "CheckConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def threshold_floor(self) -> float:
        if self.tolerance is not None:
            return float(self.tolerance)
        if self.identity == "quasi-periodicity" and self.target == "jackson":
            return DEFAULT_FLOOR["quasi-periodicity"]
        if self.identity in DEFAULT_TOLERANCE:
            return DEFAULT_TOLERANCE[self.identity]
        return DEFAULT_FLOOR[self.identity]

    def truncation(self) -> LatticeTruncation:
        kw = {}
        if self.radius is not None:
            kw["radius"] = self.radius
        if self.shell_stop is not None:
            kw["shell_stop"] = self.shell_stop
        return LatticeTruncation.default_for(self.n, **kw)


@dataclass
class SubCheck:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.residual < self.threshold


@dataclass
class SampleRecord:
    index: int
    status: str  # PASS, FAIL, UNCONVERGED or ERROR
    params: dict = field(default_factory=dict)
    residual: Optional[float] = None
    threshold: Optional[float] = None
    shell_error: Optional[float] = None
    terms: Optional[int] = None
    checks: list = field(default_factory=list)
    error: Optional[str] = None
    wall_time: float = 0.0


@dataclass
class VerificationReport:
    config: dict
    samples: list
    verdict: str
    max_residual: Optional[float]
    library_version: str = __version__
    timestamp: str = ""
    schema: int = 1

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def deterministic_view(self) -> dict:
        """The report without timestamps and wall times."""
        d = asdict(self)
        d.pop("timestamp")
        for rec in d["samples"]:
            rec.pop("wall_time")
        return d


# -- sampling ----------------------------------------------------------------


class Sampler:
    """Deterministic draws for one sample: Philox keyed by ``(seed, index)``."""

    def __init__(self, seed: int, index: int):
        self.rng = np.random.Generator(np.random.Philox(key=(int(seed) << 64) | int(index)))

    def uniform(self, lo: float, hi: float) -> float:
        return float(self.rng.uniform(lo, hi))

    def phase(self) -> float:
        return self.uniform(-math.pi, math.pi)

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return int(self.rng.integers(lo, hi + 1))

    def choice(self, seq):
        return seq[self.integer(0, len(seq) - 1)]

    def polar(self, ctx: PrecisionContext, rlo: float, rhi: float):
        mp = ctx.mp
        return mp.mpf(self.uniform(rlo, rhi)) * mp.expj(mp.mpf(self.phase()))

    def q_power(self, ctx: PrecisionContext, lo: float, hi: float):
        """``|q|^u e^(i phi)`` with ``u`` uniform in ``(lo, hi)``."""
        mp = ctx.mp
        return ctx.abs_q ** mp.mpf(self.uniform(lo, hi)) * mp.expj(mp.mpf(self.phase()))


def _fmt(ctx: PrecisionContext, v) -> list:
    v = ctx.c(v)
    digits = int(ctx.precision_bits * math.log10(2)) + 3
    return [ctx.mp.nstr(v.real, digits, strip_zeros=False), ctx.mp.nstr(v.imag, digits, strip_zeros=False)]


def _fmt_params(ctx: PrecisionContext, **kw) -> dict:
    out = {}
    for k, v in kw.items():
        if isinstance(v, (list, tuple)):
            out[k] = [_fmt(ctx, u) if not isinstance(u, int) else u for u in v]
        elif isinstance(v, (int, str)):
            out[k] = v
        else:
            out[k] = _fmt(ctx, v)
    return out


# interpolation-side domain: real q, |t| and |x| away from 0 and 1
INTERP_Q = (0.2, 0.6)
# lattice-side domain, a sub-box of the documented one where the sums converge quickly
JACKSON_Q = (0.04, 0.12)
JACKSON_A_EXP = (0.02, 0.08)
JACKSON_T_EXP = (0.005, 0.03)
JACKSON_Z_EXP = (0.05, 0.25)
JACKSON_MAX_DECAY = 0.3
# observed last-shell weight stays below this multiple of decay**radius
SHELL_SLACK = 100.0


def decay_cap(trunc: LatticeTruncation) -> float:
    """Largest predicted decay whose outermost shell should clear ``trunc.shell_stop``."""
    return min(JACKSON_MAX_DECAY, (trunc.shell_stop / SHELL_SLACK) ** (1.0 / trunc.radius))


def _interp_context(cfg: CheckConfig, smp: Sampler) -> PrecisionContext:
    return PrecisionContext(smp.uniform(*INTERP_Q), cfg.precision_bits)


def _interp_params(cfg: CheckConfig, ctx: PrecisionContext, smp: Sampler, s: int | None = None, n: int | None = None) -> ParameterSet:
    s = cfg.s if s is None else s
    n = cfg.n if n is None else n
    for _ in range(MAX_RESAMPLE):
        p = ParameterSet(s, n, smp.polar(ctx, 0.3, 0.7), [smp.polar(ctx, 0.5, 1.5) for _ in range(s)])
        if genericity_check(p, ctx).generic:
            return p
    raise NonGenericError("no generic parameter set found")


def _jackson_context(cfg: CheckConfig, smp: Sampler) -> PrecisionContext:
    return PrecisionContext(smp.uniform(*JACKSON_Q), cfg.precision_bits)


def _jackson_params(cfg: CheckConfig, ctx: PrecisionContext, smp: Sampler, degree: int = 0, s: int | None = None) -> ParameterSet:
    s = cfg.s if s is None else s
    cap = decay_cap(cfg.truncation())
    for _ in range(MAX_RESAMPLE):
        p = ParameterSet(
            s,
            cfg.n,
            smp.q_power(ctx, *JACKSON_T_EXP),
            [smp.q_power(ctx, *JACKSON_Z_EXP) for _ in range(s)],
            [smp.q_power(ctx, *JACKSON_A_EXP) for _ in range(2 * s + 2)],
        )
        if predicted_decay(p, ctx, degree) < cap and genericity_check(p, ctx).generic:
            return p
    raise NonGenericError("no convergent parameter set found")


def _jackson_point(ctx: PrecisionContext, smp: Sampler, n: int) -> list:
    return [smp.q_power(ctx, *JACKSON_Z_EXP) for _ in range(n)]


def _pset_params(ctx, p: ParameterSet, **extra) -> dict:
    d = dict(q=ctx.q, t=p.t, x=list(p.x))
    if p.a:
        d["a"] = list(p.a)
    d.update(extra)
    return _fmt_params(ctx, **d)


# -- per-identity sample evaluators -------------------------------------------
# each returns (params, [SubCheck, ...], shell_error or None, terms or None)


def _bailey(cfg, smp):
    ctx = PrecisionContext(smp.uniform(*INTERP_Q), cfg.precision_bits)
    for _ in range(MAX_RESAMPLE):
        a, b, c, d, e = (smp.q_power(ctx, -0.25, 0.25) for _ in range(5))
        x = a * a * ctx.q / (b * c * d * e)
        if abs(x) < 0.95:
            break
    res = bailey_residual(a, b, c, d, e, ctx)
    return _fmt_params(ctx, q=ctx.q, a=a, b=b, c=c, d=d, e=e), [SubCheck("bailey", res, cfg.threshold_floor())], None, None


def _slater(cfg, smp):
    ctx = PrecisionContext(smp.uniform(*INTERP_Q), cfg.precision_bits)
    r = cfg.r
    for _ in range(MAX_RESAMPLE):
        a = smp.q_power(ctx, -0.25, 0.25)
        av = [smp.q_power(ctx, -0.25, 0.25) for _ in range(r - 2)]
        bv = [smp.q_power(ctx, -0.25, 0.25) for _ in range(2 * r - 2)]
        den = ctx.mp.mpc(1)
        for b in bv:
            den *= b
        if abs(a ** (r - 1) * ctx.q ** (r - 2) / den) < 0.95:
            break
    res = slater_residual(r, a, av, bv, ctx)
    return _fmt_params(ctx, q=ctx.q, r=r, a=a, a_vec=av, b_vec=bv), [SubCheck("slater", res, cfg.threshold_floor())], None, None


def _delta(cfg, smp):
    ctx = _interp_context(cfg, smp)
    p = _interp_params(cfg, ctx, smp)
    basis = InterpolationBasis(p, ctx)
    off = 0.0
    diag = 0.0
    for mu in basis.index:
        vals = basis.values(basis.point(mu))
        for lam, v in zip(basis.index, vals):
            if lam == mu:
                diag = max(diag, float(abs(v - 1)))
            else:
                off = max(off, float(abs(v)))
    tol = cfg.threshold_floor()
    return _pset_params(ctx, p), [SubCheck("off-diagonal", off, tol), SubCheck("diagonal", diag, tol)], None, None


def _method_agreement(cfg, smp):
    ctx = _interp_context(cfg, smp)
    p = _interp_params(cfg, ctx, smp)
    basis = InterpolationBasis(p, ctx)
    lam = smp.choice(basis.index)
    z = [smp.polar(ctx, 0.5, 1.5) for _ in range(cfg.n)]
    vals = {m: basis.value(lam, z, m) for m in METHODS}
    worst = max(rel_residual(vals[a], vals[b]) for a in METHODS for b in METHODS if a < b)
    return (
        _pset_params(ctx, p, z=z, lam=list(lam)),
        [SubCheck("pairwise", worst, cfg.threshold_floor())],
        None,
        None,
    )


def _duality(cfg, smp):
    ctx = _interp_context(cfg, smp)
    p = _interp_params(cfg, ctx, smp)
    z = [smp.polar(ctx, 0.5, 1.5) for _ in range(cfg.n)]
    y = [smp.polar(ctx, 0.5, 1.5) for _ in range(cfg.s - 1)]
    res = duality_residual(z, y, p, ctx)
    return _pset_params(ctx, p, z=z, y=y), [SubCheck("duality", res, cfg.threshold_floor())], None, None


def _interp_symmetry(cfg, smp):
    ctx = _interp_context(cfg, smp)
    p = _interp_params(cfg, ctx, smp)
    basis = InterpolationBasis(p, ctx)
    lam = smp.choice(basis.index)
    z = [smp.polar(ctx, 0.5, 1.5) for _ in range(cfg.n)]
    i = smp.integer(0, cfg.n - 1)
    base = basis.value(lam, z)
    zq = list(z)
    zq[i] = z[i] * ctx.q
    shifted = basis.value(lam, zq) * (ctx.q * z[i] ** 2) ** (p.s - 1)
    inv = list(z)
    inv[i] = 1 / z[i]
    sym = [basis.value(lam, inv), basis.value(lam, list(reversed(z)))]
    tol = cfg.threshold_floor()
    checks = [
        SubCheck("quasi-periodicity", rel_residual(shifted, base), tol),
        SubCheck("w-invariance", max(rel_residual(v, base) for v in sym), tol),
    ]
    return _pset_params(ctx, p, z=z, lam=list(lam), coord=i), checks, None, None


def _jackson_symmetry(cfg, smp):
    ctx = _jackson_context(cfg, smp)
    phi, degree = _pick_integrand(cfg, smp)
    p = _jackson_params(cfg, ctx, smp, degree)
    z = _jackson_point(ctx, smp, cfg.n)
    i = smp.integer(0, cfg.n - 1)
    trunc = cfg.truncation()
    qp = quasi_periodicity_check(phi, z, p, trunc, ctx, coord=i)
    base = regularized_integral(phi, z, p, trunc, ctx)
    inv = list(z)
    inv[i] = 1 / z[i]
    others = [regularized_integral(phi, inv, p, trunc, ctx)]
    if cfg.n > 1:
        others.append(regularized_integral(phi, list(reversed(z)), p, trunc, ctx))
    err = max([qp.shell_error, base.shell_error] + [o.shell_error for o in others])
    tol = max(cfg.threshold_floor(), 20 * err)
    checks = [
        SubCheck("quasi-periodicity", qp.residual, tol),
        SubCheck("w-invariance", max(rel_residual(o.value, base.value) for o in others), tol),
    ]
    return _pset_params(ctx, p, z=z, coord=i, phi=_phi_label(phi)), checks, err, qp.terms


def _quasi_periodicity(cfg, smp):
    if cfg.target == "jackson":
        return _jackson_symmetry(cfg, smp)
    return _interp_symmetry(cfg, smp)


def _transition_det(cfg, smp):
    ctx = _interp_context(cfg, smp)
    p = _interp_params(cfg, ctx, smp)
    for _ in range(MAX_RESAMPLE):
        y = [smp.polar(ctx, 0.5, 1.5) for _ in range(cfg.s)]
        if genericity_check(p.with_x(y), ctx).generic:
            break
    rep = transition_det_report(p, y, ctx)
    tol = cfg.threshold_floor()
    checks = [
        SubCheck("det-vs-closed", rep.residual, tol),
        SubCheck("closed-forms", rep.forms_residual, FORMS_TOLERANCE),
        SubCheck("chain-product", rep.chain_residual, tol),
        SubCheck("chain-closed", rep.chain_closed_residual, tol),
        SubCheck("chain-triangularity", rep.triangularity, FORBIDDEN_TOLERANCE),
    ]
    return _pset_params(ctx, p, y=y), checks, None, None


def _one_coordinate(cfg, smp):
    ctx = _interp_context(cfg, smp)
    p = _interp_params(cfg, ctx, smp)
    for _ in range(MAX_RESAMPLE):
        ys = smp.polar(ctx, 0.5, 1.5)
        if genericity_check(p.with_x(p.x[:-1] + (ys,)), ctx).generic:
            break
    mat, diag = one_coordinate_factor(p, ys, ctx)
    forb = forbidden_entry_max(mat, cfg.s)
    dres = max(rel_residual(mat.entries[k, k], d) for k, d in enumerate(diag))
    prod = ctx.mp.mpc(1)
    for d in diag:
        prod *= d
    tol = cfg.threshold_floor()
    checks = [
        SubCheck("forbidden-entries", forb, FORBIDDEN_TOLERANCE),
        SubCheck("diagonal", dres, tol),
        SubCheck("det-vs-diagonal", rel_residual(mat.det(), prod), tol),
    ]
    return _pset_params(ctx, p, y_s=ys), checks, None, None


def _pick_integrand(cfg, smp):
    if cfg.phi == "one":
        return None, 0
    lams = enumerate_indices("B", cfg.s, cfg.n)
    lam = smp.choice(lams)
    return lam, (lam[0] if lam else 0)


def _phi_label(phi) -> str:
    return "one" if phi is None else "schur" + str(list(phi))


def _vandiejen(cfg, smp):
    ctx = _jackson_context(cfg, smp)
    p = _jackson_params(cfg, ctx, smp)
    z = _jackson_point(ctx, smp, cfg.n)
    c = vandiejen_check(p, z, cfg.truncation(), ctx)
    return _pset_params(ctx, p, z=z), [SubCheck("vandiejen", c.residual, c.threshold(cfg.threshold_floor()))], c.shell_error, c.terms


def _wronskian(cfg, smp):
    ctx = _jackson_context(cfg, smp)
    p = _jackson_params(cfg, ctx, smp, degree=cfg.s - 1)
    c = wronskian_check(p, ctx, cfg.truncation())
    return _pset_params(ctx, p), [SubCheck("wronskian", c.residual, c.threshold(cfg.threshold_floor()))], c.shell_error, c.terms


def _connection(cfg, smp):
    ctx = _jackson_context(cfg, smp)
    phi, degree = _pick_integrand(cfg, smp)
    p = _jackson_params(cfg, ctx, smp, degree)
    z = _jackson_point(ctx, smp, cfg.n)
    floor = cfg.threshold_floor()
    if cfg.n == 1 and phi is None:
        m = connection_slater_match(z, p, cfg.truncation(), ctx)
        c = m.connection
        tol = c.threshold(floor)
        checks = [
            SubCheck("connection", c.residual, tol),
            SubCheck("slater", m.slater_residual, DEFAULT_TOLERANCE["slater"]),
            SubCheck("slater-lhs-match", m.lhs_residual, tol),
            SubCheck("slater-term-match", m.term_residual, tol),
        ]
    else:
        c = connection_check(phi, z, p, cfg.truncation(), ctx)
        checks = [SubCheck("connection", c.residual, c.threshold(floor))]
    return _pset_params(ctx, p, z=z, phi=_phi_label(phi)), checks, c.shell_error, c.terms


def _lattice_invariance(cfg, smp):
    ctx = _jackson_context(cfg, smp)
    phi, degree = _pick_integrand(cfg, smp)
    p = _jackson_params(cfg, ctx, smp, degree)
    z = _jackson_point(ctx, smp, cfg.n)
    i = smp.integer(0, cfg.n - 1)
    c = lattice_invariance_check(phi, z, p, cfg.truncation(), ctx, coord=i)
    return (
        _pset_params(ctx, p, z=z, coord=i, phi=_phi_label(phi)),
        [SubCheck("lattice-invariance", c.residual, c.threshold(cfg.threshold_floor()))],
        c.shell_error,
        c.terms,
    )


CHECKS: dict[str, Callable] = {
    "bailey": _bailey,
    "slater": _slater,
    "duality": _duality,
    "delta": _delta,
    "method-agreement": _method_agreement,
    "quasi-periodicity": _quasi_periodicity,
    "transition-det": _transition_det,
    "one-coordinate": _one_coordinate,
    "vandiejen": _vandiejen,
    "wronskian": _wronskian,
    "connection": _connection,
    "lattice-invariance": _lattice_invariance,
}


def run_sample(cfg: CheckConfig, index: int) -> SampleRecord:
    """Evaluate one sample; library errors are recorded, never raised."""
    t0 = time.perf_counter()
    smp = Sampler(cfg.seed, index)
    try:
        params, checks, shell, terms = CHECKS[cfg.identity](cfg, smp)
    except UnconvergedError as exc:
        return SampleRecord(index, "UNCONVERGED", error=str(exc), wall_time=time.perf_counter() - t0)
    except (QBCNError, ZeroDivisionError, ValueError) as exc:
        return SampleRecord(index, "ERROR", error=f"{type(exc).__name__}: {exc}", wall_time=time.perf_counter() - t0)
    main = max(checks, key=lambda c: c.residual / c.threshold)
    return SampleRecord(
        index=index,
        status="PASS" if all(c.passed for c in checks) else "FAIL",
        params=params,
        residual=main.residual,
        threshold=main.threshold,
        shell_error=shell,
        terms=terms,
        checks=[asdict(c) for c in checks],
        wall_time=time.perf_counter() - t0,
    )


def _run_sample_args(args):
    return run_sample(*args)


def run_check(cfg: CheckConfig) -> VerificationReport:
    """Run every sample of ``cfg`` and aggregate a report (raises ConfigError on a bad config)."""
    cfg.validate()
    jobs = [(cfg, i) for i in range(cfg.samples)]
    if cfg.jobs > 1 and cfg.samples > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = list(pool.map(_run_sample_args, jobs))
    else:
        records = [run_sample(*j) for j in jobs]
    statuses = {r.status for r in records}
    if statuses <= {"PASS"}:
        verdict = "PASS"
    elif statuses & {"FAIL", "ERROR"}:
        verdict = "FAIL"
    else:
        verdict = "UNCONVERGED"
    residuals = [r.residual for r in records if r.residual is not None]
    return VerificationReport(
        config=asdict(cfg),
        samples=[asdict(r) for r in records],
        verdict=verdict,
        max_residual=max(residuals) if residuals else None,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )


def load_config(path: str) -> dict:
    """Read a JSON config file holding any subset of :class:`CheckConfig` fields."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def summarize(report: VerificationReport) -> str:
    cfg = report.config
    lines = [
        f"identity={cfg['identity']} s={cfg['s']} n={cfg['n']} bits={cfg['precision_bits']} "
        f"samples={cfg['samples']} seed={cfg['seed']}"
    ]
    for rec in report.samples:
        if rec["residual"] is None:
            lines.append(f"  [{rec['index']:3d}] {rec['status']:<11} {rec['error']}")
        else:
            lines.append(
                f"  [{rec['index']:3d}] {rec['status']:<11} residual={rec['residual']:.3e} "
                f"threshold={rec['threshold']:.1e} ({rec['wall_time']:.2f}s)"
            )
    mr = report.max_residual
    lines.append(f"verdict: {report.verdict}" + (f"  max residual {mr:.3e}" if mr is not None else ""))
    return "\n".join(lines)


# -- single-expression evaluation -------------------------------------------

EXPR_KINDS = ("theta", "e-symbol", "schur", "interp", "jackson")


@dataclass
class ExprSpec:
    """One expression for :func:`eval_expr`; numbers are strings mpmath can parse.

    ``theta`` uses ``args = [u]``, ``e-symbol`` uses ``args = [a, b]``; the
    other kinds read ``lam``, ``z``, ``t``, ``x``, ``a``.  For ``interp`` and
    ``jackson`` the point may instead be given as ``mu``, meaning ``x_mu``.
    """

    kind: str
    q: str = "0.3"
    args: list = field(default_factory=list)
    lam: Optional[list] = None
    z: Optional[list] = None
    mu: Optional[list] = None
    t: Optional[str] = None
    x: Optional[list] = None
    a: Optional[list] = None
    radius: Optional[int] = None  # jackson only: sum the full box of this radius

    @classmethod
    def from_dict(cls, d: dict) -> "ExprSpec":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown expression keys: {sorted(unknown)}")
        return cls(**d)


def _need(value, name: str, kind: str):
    if value is None:
        raise ConfigError(f"{kind} needs {name}")
    return value


def eval_expr(spec: ExprSpec, bits: int = 256):
    """Evaluate one expression; returns ``(value, ctx)``."""
    from .bcjackson import symplectic_schur
    from .indexsets import point_x_mu
    from .qnum import e_symbol, theta

    if spec.kind not in EXPR_KINDS:
        raise ConfigError(f"unknown expression kind {spec.kind!r}; choose from {', '.join(EXPR_KINDS)}")
    try:
        ctx = PrecisionContext(spec.q, bits)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc

    def conv(vals):
        return [ctx.c(v) for v in vals]

    try:
        if spec.kind == "theta":
            if len(spec.args) != 1:
                raise ConfigError("theta takes one argument")
            return theta(spec.args[0], ctx), ctx
        if spec.kind == "e-symbol":
            if len(spec.args) != 2:
                raise ConfigError("e-symbol takes two arguments")
            return e_symbol(spec.args[0], spec.args[1], ctx), ctx
        lam = tuple(int(v) for v in _need(spec.lam, "lam", spec.kind)) if spec.kind != "jackson" or spec.lam else None
        if spec.kind == "schur":
            return symplectic_schur(lam, conv(_need(spec.z, "z", "schur")), ctx), ctx
        x = conv(_need(spec.x, "x", spec.kind))
        if spec.mu is not None:
            n = sum(int(v) for v in spec.mu)
        else:
            n = len(_need(spec.z, "z", spec.kind))
        p = ParameterSet(len(x), n, ctx.c(_need(spec.t, "t", spec.kind)), x, conv(spec.a or []))
        z = point_x_mu(p, spec.mu) if spec.mu is not None else conv(spec.z)
        if spec.kind == "interp":
            return InterpolationBasis(p, ctx).value(lam, z), ctx
        trunc = LatticeTruncation.default_for(p.n)
        if spec.radius is not None:
            trunc = LatticeTruncation(radius=spec.radius, shell_stop=trunc.shell_stop, fixed=True)
        return regularized_integral(lam, z, p, trunc, ctx).value, ctx
    except (TypeError, ValueError) as exc:
        if isinstance(exc, QBCNError):
            raise
        raise ConfigError(f"bad arguments: {exc}") from exc


def format_value(value, ctx: PrecisionContext, digits: Optional[int] = None) -> list:
    """``[re, im]`` as decimal strings carrying the context's full precision."""
    if digits is None:
        return _fmt(ctx, value)
    v = ctx.c(value)
    return [ctx.mp.nstr(v.real, digits), ctx.mp.nstr(v.imag, digits)]
