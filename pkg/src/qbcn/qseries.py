"""Bilateral basic hypergeometric series and the classical 6psi6 / 2r psi 2r checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .errors import DivergentSeriesError, DomainError, PoleError, ZeroArgumentError
from .qnum import PrecisionContext, qpoch_inf, rel_residual

__all__ = [
    "BilateralSeriesSpec",
    "SeriesResult",
    "bilateral_psi",
    "bilateral_psi_detail",
    "very_well_poised_spec",
    "bailey_spec",
    "bailey_rhs",
    "bailey_residual",
    "slater_prefactor",
    "slater_sides",
    "slater_residual",
]

# consecutive sub-threshold terms required before a tail is cut
_STOP_RUN = 3


@dataclass(frozen=True)
class BilateralSeriesSpec:
    numerators: tuple
    denominators: tuple
    x: Any

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(self.numerators))
        object.__setattr__(self, "denominators", tuple(self.denominators))
        if not self.numerators or len(self.numerators) != len(self.denominators):
            raise ValueError("need r >= 1 numerators and as many denominators")

    @property
    def r(self) -> int:
        return len(self.numerators)


@dataclass(frozen=True)
class SeriesResult:
    value: Any
    terms_negative: int
    terms_positive: int
    tail_bound: float


def _strip_ratios(spec: BilateralSeriesSpec, ctx: PrecisionContext):
    mp = ctx.mp
    num = mp.mpc(1)
    den = mp.mpc(1)
    for a in spec.numerators:
        num *= ctx.c(a)
    for b in spec.denominators:
        den *= ctx.c(b)
    if num == 0:
        raise ZeroArgumentError("a numerator parameter is zero")
    return abs(den / num), abs(ctx.c(spec.x))


def bilateral_psi_detail(
    spec: BilateralSeriesSpec, ctx: PrecisionContext, max_terms: int = 200_000
) -> SeriesResult:
    """Sum the r psi r series outward from nu = 0 with per-tail stopping.

    Terms come from the one-step ratio
    ``t(nu+1)/t(nu) = x * prod (1 - a_i q^nu) / (1 - b_i q^nu)``
    and its inverse for the negative tail.
    """
    low, high = _strip_ratios(spec, ctx)
    if not (low < high < 1):
        raise DivergentSeriesError(
            f"convergence strip violated: |b/a| = {float(low):.3g}, |x| = {float(high):.3g}"
        )
    mp = ctx.mp
    q = ctx.q
    a = [ctx.c(v) for v in spec.numerators]
    b = [ctx.c(v) for v in spec.denominators]
    x = ctx.c(spec.x)
    eps = ctx.eps_product

    def tail(direction: int) -> list:
        out = []
        term = mp.mpc(1)
        qnu = mp.mpc(1)  # q^nu for the current nu
        small = 0
        acc = mp.mpc(1)  # nu = 0 term plus this tail so far
        for _ in range(max_terms):
            if direction > 0:
                num = x
                den = mp.mpc(1)
                for ai, bi in zip(a, b):
                    num *= 1 - ai * qnu
                    den *= 1 - bi * qnu
                qnu *= q
            else:
                qnu /= q
                num = mp.mpc(1)
                den = x
                for ai, bi in zip(a, b):
                    num *= 1 - bi * qnu
                    den *= 1 - ai * qnu
            if den == 0 or abs(den) <= eps * abs(num):
                raise PoleError("a denominator q-Pochhammer factor vanished")
            term = term * num / den
            out.append(term)
            acc += term
            if abs(term) < eps * abs(acc):
                small += 1
                if small >= _STOP_RUN:
                    return out
            else:
                small = 0
        raise DivergentSeriesError(f"tail did not settle within {max_terms} terms")

    neg = tail(-1)
    pos = tail(+1)
    # fixed combination order: negative tail (outermost first), nu = 0, positive tail
    total = mp.fsum(list(reversed(neg)) + [mp.mpc(1)] + pos)
    bound = float((abs(neg[-1]) + abs(pos[-1])) / max(abs(total), eps))
    return SeriesResult(total, len(neg), len(pos), bound)


def bilateral_psi(spec: BilateralSeriesSpec, ctx: PrecisionContext, max_terms: int = 200_000):
    return bilateral_psi_detail(spec, ctx, max_terms).value


def very_well_poised_spec(a, bs: Sequence, x, ctx: PrecisionContext) -> BilateralSeriesSpec:
    """Very-well-poised series with leading pairs (q sqrt a, -q sqrt a)/(sqrt a, -sqrt a).

    Both square roots enter symmetrically, so the branch of ``sqrt(a)`` does
    not affect the value.
    """
    a = ctx.c(a)
    ra = ctx.mp.sqrt(a)
    q = ctx.q
    bs = [ctx.c(b) for b in bs]
    num = [q * ra, -q * ra] + bs
    den = [ra, -ra] + [a * q / b for b in bs]
    return BilateralSeriesSpec(tuple(num), tuple(den), ctx.c(x))


def bailey_spec(a, b, c, d, e, ctx: PrecisionContext) -> BilateralSeriesSpec:
    a, b, c, d, e = (ctx.c(v) for v in (a, b, c, d, e))
    return very_well_poised_spec(a, [b, c, d, e], a * a * ctx.q / (b * c * d * e), ctx)


def _check_nonzero(*vals):
    for v in vals:
        if v == 0:
            raise ZeroArgumentError("parameters must be nonzero")


def bailey_rhs(a, b, c, d, e, ctx: PrecisionContext):
    """Product side of Bailey's very-well-poised 6psi6 summation."""
    a, b, c, d, e = (ctx.c(v) for v in (a, b, c, d, e))
    _check_nonzero(a, b, c, d, e)
    q = ctx.q
    arg = a * a * q / (b * c * d * e)
    if abs(arg) >= 1:
        raise DomainError(f"|a^2 q/(bcde)| = {float(abs(arg)):.3g} is not < 1")
    num = [a * q, a * q / (b * c), a * q / (b * d), a * q / (b * e), a * q / (c * d),
           a * q / (c * e), a * q / (d * e), q, q / a]
    den = [a * q / b, a * q / c, a * q / d, a * q / e, q / b, q / c, q / d, q / e, arg]
    top = ctx.mp.mpc(1)
    bot = ctx.mp.mpc(1)
    for u in num:
        top *= qpoch_inf(u, ctx)
    for u in den:
        bot *= qpoch_inf(u, ctx)
    if abs(bot) <= ctx.eps_product * max(1, abs(top)):
        raise PoleError("a denominator product vanishes")
    return top / bot


def bailey_residual(a, b, c, d, e, ctx: PrecisionContext) -> float:
    rhs = bailey_rhs(a, b, c, d, e, ctx)
    lhs = bilateral_psi(bailey_spec(a, b, c, d, e, ctx), ctx)
    return rel_residual(lhs, rhs)


def _slater_argument(r, a, b_vec, ctx):
    den = ctx.mp.mpc(1)
    for b in b_vec:
        den *= b
    return a ** (r - 1) * ctx.q ** (r - 2) / den


def slater_prefactor(a, lead, others: Sequence, b_vec: Sequence, ctx: PrecisionContext):
    """Infinite-product coefficient of the term led by ``lead`` (the printed a_3 term)."""
    q = ctx.q
    a3 = lead
    num = []
    den = []
    for ak in others:
        num += [ak, q / ak, ak / a, a * q / ak]
        den += [ak / a3, a3 * q / ak, a3 * ak / a, a * q / (a3 * ak)]
    for b in b_vec:
        num += [a3 * q / b, a * q / (a3 * b)]
        den += [q / b, a * q / b]
    num += [a * q, q / a]
    den += [a3 * a3 * q / a, a * q / (a3 * a3)]
    top = ctx.mp.mpc(1)
    bot = ctx.mp.mpc(1)
    for u in num:
        top *= qpoch_inf(u, ctx)
    for u in den:
        bot *= qpoch_inf(u, ctx)
    if abs(bot) <= ctx.eps_product * max(1, abs(top)):
        raise PoleError("a Slater prefactor denominator vanishes")
    return top / bot


def slater_sides(r: int, a, a_vec: Sequence, b_vec: Sequence, ctx: PrecisionContext):
    """Return ``(lhs, [term_3, ..., term_r])`` of the 2r psi 2r transformation.

    ``a_vec`` holds a_3..a_r and ``b_vec`` holds b_3..b_{2r}; term k is the
    printed a_3 term with a_3 and a_k interchanged.
    """
    r = int(r)
    if r < 3:
        raise ValueError("r must be at least 3")
    a_vec = [ctx.c(v) for v in a_vec]
    b_vec = [ctx.c(v) for v in b_vec]
    a = ctx.c(a)
    if len(a_vec) != r - 2 or len(b_vec) != 2 * r - 2:
        raise ValueError("need r-2 values a_3..a_r and 2r-2 values b_3..b_2r")
    _check_nonzero(a, *a_vec, *b_vec)
    x = _slater_argument(r, a, b_vec, ctx)
    if abs(x) >= 1:
        raise DomainError(f"|a^(r-1) q^(r-2)/(b_3...b_2r)| = {float(abs(x)):.3g} is not < 1")
    lhs = bilateral_psi(very_well_poised_spec(a, b_vec, x, ctx), ctx)
    terms = []
    for k, lead in enumerate(a_vec):
        others = a_vec[:k] + a_vec[k + 1:]
        pre = slater_prefactor(a, lead, others, b_vec, ctx)
        inner = very_well_poised_spec(lead * lead / a, [lead * b / a for b in b_vec], x, ctx)
        terms.append(pre * bilateral_psi(inner, ctx))
    return lhs, terms


def slater_residual(r: int, a, a_vec: Sequence, b_vec: Sequence, ctx: PrecisionContext) -> float:
    lhs, terms = slater_sides(r, a, a_vec, b_vec, ctx)
    return rel_residual(lhs, ctx.mp.fsum(terms))
