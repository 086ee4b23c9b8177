"""Transition matrices between interpolation bases and their determinants.

``E(x;y)`` has entries ``E_mu(x; y_nu)`` over ``Z_{s,n} x Z_{s,n}`` in
lexicographic order, so that ``E_mu(x; z) = sum_nu E(x;y)_{mu nu} E_nu(y; z)``.
The determinant is a product over pairs of coordinates, derived by walking
from ``y`` to ``x`` one coordinate at a time through the points
``w^(i) = (x_1, ..., x_i, y_{i+1}, ..., y_s)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Literal, Sequence

from .errors import NonGenericError
from .indexsets import ParameterSet, enumerate_indices, genericity_check, point_x_mu
from .interp import InterpolationBasis
from .linalg import ComplexMatrix
from .qnum import PrecisionContext, e_factorial, e_symbol, rel_residual, theta

__all__ = [
    "TransitionMatrix",
    "TransitionDetReport",
    "transition_matrix",
    "transition_det_closed",
    "chain_points",
    "chain_factor_det_closed",
    "one_coordinate_factor",
    "one_coordinate_diagonal",
    "contained_except",
    "forbidden_entry_max",
    "transition_det_report",
    "transition_det_residual",
]


@dataclass(frozen=True)
class TransitionMatrix:
    x: tuple
    y: tuple
    index: tuple
    entries: ComplexMatrix

    def det(self):
        return self.entries.det()


def _binomial_exponent(s: int, k: int) -> int:
    # C(s+k-3, k-1); for s = 1 the pair product is empty anyway
    top = s + k - 3
    return comb(top, k - 1) if top >= 0 else 0


def transition_matrix(
    p: ParameterSet,
    y: Sequence,
    ctx: PrecisionContext,
    basis: InterpolationBasis | None = None,
    check: bool = True,
    delta: float = 1e-20,
) -> TransitionMatrix:
    """``E(x;y)`` with x taken from ``p``."""
    y = tuple(ctx.c(v) for v in y)
    if len(y) != p.s:
        raise ValueError("y must have s entries")
    if check:
        rep = genericity_check(p.with_x(y), ctx, delta)
        if not rep.generic:
            raise NonGenericError(f"y is not generic (worst factor {rep.worst})")
    basis = basis or InterpolationBasis(p, ctx, check=check, delta=delta)
    index = basis.index
    cols = [point_x_mu(basis.p, nu, base=y) for nu in index]
    rows = [[basis.value(mu, z) for z in cols] for mu in index]
    return TransitionMatrix(basis.p.x, y, tuple(index), ComplexMatrix(rows, ctx))


def _ratio(num, den):
    if den == 0:
        raise NonGenericError("a closed-form denominator vanishes")
    return num / den


def transition_det_closed(
    p: ParameterSet, y: Sequence, ctx: PrecisionContext, form: Literal["e", "theta"] = "e"
):
    """Closed product for ``det E(x;y)`` in e-symbol form or the equivalent theta form."""
    p = p.in_context(ctx)
    x = p.x
    y = [ctx.c(v) for v in y]
    t = p.t
    s, n = p.s, p.n
    out = ctx.mp.mpc(1)
    for k in range(1, n + 1):
        power = _binomial_exponent(s, k)
        if power == 0:
            continue
        block = ctx.mp.mpc(1)
        m = n - k
        for r in range(m + 1):
            for i in range(s):
                for j in range(i + 1, s):
                    if form == "e":
                        num = e_symbol(y[i] * t**r, y[j] * t ** (m - r), ctx)
                        den = e_symbol(x[i] * t**r, x[j] * t ** (m - r), ctx)
                    elif form == "theta":
                        num = x[i] * theta(t ** (2 * r - m) * y[i] / y[j], ctx) * theta(t**m * y[i] * y[j], ctx)
                        den = y[i] * theta(t ** (2 * r - m) * x[i] / x[j], ctx) * theta(t**m * x[i] * x[j], ctx)
                    else:
                        raise ValueError(f"unknown form {form!r}")
                    block *= _ratio(num, den)
        out *= block**power
    return out


def chain_points(x: Sequence, y: Sequence) -> list:
    """``[w^(0), ..., w^(s)]`` with ``w^(i) = (x_1..x_i, y_{i+1}..y_s)``; ``w^(0) = y``, ``w^(s) = x``."""
    s = len(x)
    return [tuple(x[:i]) + tuple(y[i:]) for i in range(s + 1)]


def chain_factor_det_closed(p: ParameterSet, y: Sequence, l: int, ctx: PrecisionContext):
    """Closed ``det E(w^(l); w^(l-1))`` for ``l = 1..s`` (only coordinate l changes)."""
    p = p.in_context(ctx)
    x = p.x
    y = [ctx.c(v) for v in y]
    t = p.t
    s, n = p.s, p.n
    if not 1 <= l <= s:
        raise ValueError("l must lie in 1..s")
    c = l - 1
    out = ctx.mp.mpc(1)
    for k in range(1, n + 1):
        power = _binomial_exponent(s, k)
        if power == 0:
            continue
        block = ctx.mp.mpc(1)
        m = n - k
        for r in range(m + 1):
            for i in range(c):
                block *= _ratio(
                    e_symbol(x[i] * t**r, y[c] * t ** (m - r), ctx),
                    e_symbol(x[i] * t**r, x[c] * t ** (m - r), ctx),
                )
            for j in range(c + 1, s):
                block *= _ratio(
                    e_symbol(y[c] * t**r, y[j] * t ** (m - r), ctx),
                    e_symbol(x[c] * t**r, y[j] * t ** (m - r), ctx),
                )
        out *= block**power
    return out


def contained_except(beta: Sequence[int], alpha: Sequence[int], l: int) -> bool:
    """``beta_i <= alpha_i`` for every ``i != l`` (1-based ``l``)."""
    return all(b <= a for i, (b, a) in enumerate(zip(beta, alpha)) if i != l - 1)


def forbidden_entry_max(mat: TransitionMatrix, l: int) -> float:
    """Largest ``|E_{alpha beta}| / ||row alpha||`` over entries that must vanish.

    In the factor ``E(w^(l); w^(l-1))`` an entry can be nonzero only when
    ``beta_i <= alpha_i`` for all ``i != l``.
    """
    worst = 0.0
    for a, alpha in enumerate(mat.index):
        row = mat.entries.rows[a]
        norm = max(abs(v) for v in row)
        if norm == 0:
            continue
        for b, beta in enumerate(mat.index):
            if not contained_except(beta, alpha, l):
                worst = max(worst, float(abs(row[b]) / norm))
    return worst


def one_coordinate_diagonal(p: ParameterSet, y_s_new, ctx: PrecisionContext) -> list:
    """Closed diagonal ``prod_{i<s} e(y_s; x_i t^alpha_i)_{alpha_s} / e(x_s; x_i t^alpha_i)_{alpha_s}``."""
    p = p.in_context(ctx)
    x = p.x
    t = p.t
    ys = ctx.c(y_s_new)
    out = []
    for alpha in enumerate_indices("Z", p.s, p.n):
        v = ctx.mp.mpc(1)
        for i in range(p.s - 1):
            b = x[i] * t ** alpha[i]
            v *= _ratio(e_factorial(ys, b, alpha[-1], t, ctx), e_factorial(x[-1], b, alpha[-1], t, ctx))
        out.append(v)
    return out


def one_coordinate_factor(
    p: ParameterSet, y_s_new, ctx: PrecisionContext, basis: InterpolationBasis | None = None
) -> tuple:
    """``(E(x;y), closed diagonal)`` for ``y = (x_1, ..., x_{s-1}, y_s_new)``."""
    p = p.in_context(ctx)
    y = p.x[:-1] + (ctx.c(y_s_new),)
    mat = transition_matrix(p, y, ctx, basis=basis)
    return mat, one_coordinate_diagonal(p, y_s_new, ctx)


@dataclass(frozen=True)
class TransitionDetReport:
    residual: float  # numeric det vs closed product
    forms_residual: float  # e-symbol form vs theta form
    chain_residual: float  # numeric det vs product of numeric chain-factor dets
    chain_closed_residual: float  # worst chain factor, numeric det vs closed product
    triangularity: float  # worst forbidden entry over all chain factors
    condition: float

    @property
    def worst(self) -> float:
        return max(self.residual, self.chain_residual, self.chain_closed_residual)


def transition_det_report(p: ParameterSet, y: Sequence, ctx: PrecisionContext, chain: bool = True) -> TransitionDetReport:
    p = p.in_context(ctx)
    y = tuple(ctx.c(v) for v in y)
    mat = transition_matrix(p, y, ctx)
    numeric = mat.det()
    closed = transition_det_closed(p, y, ctx, "e")
    closed_theta = transition_det_closed(p, y, ctx, "theta")
    chain_res = 0.0
    chain_closed = 0.0
    tri = 0.0
    if chain:
        w = chain_points(p.x, y)
        prod = ctx.mp.mpc(1)
        for l in range(1, p.s + 1):
            # only coordinate l differs between w^(l) and w^(l-1)
            fac = transition_matrix(p.with_x(w[l]), w[l - 1], ctx)
            d = fac.det()
            prod *= d
            chain_closed = max(chain_closed, rel_residual(d, chain_factor_det_closed(p, y, l, ctx)))
            tri = max(tri, forbidden_entry_max(fac, l))
        chain_res = rel_residual(numeric, prod)
    return TransitionDetReport(
        residual=rel_residual(numeric, closed),
        forms_residual=rel_residual(closed, closed_theta),
        chain_residual=chain_res,
        chain_closed_residual=chain_closed,
        triangularity=tri,
        condition=mat.entries.cond(),
    )


def transition_det_residual(p: ParameterSet, y: Sequence, ctx: PrecisionContext) -> float:
    """Worst of: numeric det vs closed product, and numeric det vs the chain-factor product."""
    return transition_det_report(p, y, ctx).worst
