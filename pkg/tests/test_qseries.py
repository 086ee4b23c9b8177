import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbcn.errors import DivergentSeriesError, DomainError, ZeroArgumentError
from qbcn.qnum import PrecisionContext, qpoch_inf, qpoch_int, rel_residual
from qbcn.qseries import (
    BilateralSeriesSpec,
    bailey_residual,
    bailey_rhs,
    bailey_spec,
    bilateral_psi,
    bilateral_psi_detail,
    slater_residual,
    slater_sides,
)


def qpow(ctx, rng, lo=-0.25, hi=0.25):
    return ctx.abs_q ** ctx.mp.mpf(rng.uniform(lo, hi)) * ctx.mp.expj(rng.uniform(-3.1, 3.1))


def bailey_sample(ctx, rng):
    while True:
        a, b, c, d, e = (qpow(ctx, rng) for _ in range(5))
        if abs(a * a * ctx.q / (b * c * d * e)) < 0.95:
            return a, b, c, d, e


def slater_sample(ctx, rng, r):
    while True:
        a = qpow(ctx, rng)
        av = [qpow(ctx, rng) for _ in range(r - 2)]
        bv = [qpow(ctx, rng) for _ in range(2 * r - 2)]
        den = ctx.mp.mpc(1)
        for b in bv:
            den *= b
        if abs(a ** (r - 1) * ctx.q ** (r - 2) / den) < 0.95:
            return a, av, bv


def ramanujan_1psi1(a, b, x, ctx):
    """Closed product for sum (a)_nu/(b)_nu x^nu."""
    q = ctx.q
    num = [q, b / a, a * x, q / (a * x)]
    den = [b, q / a, x, b / (a * x)]
    out = ctx.mp.mpc(1)
    for u in num:
        out *= qpoch_inf(u, ctx)
    for u in den:
        out /= qpoch_inf(u, ctx)
    return out


def test_forced_single_term(ctx):
    # a = 1 kills every positive term, b = q every negative one
    spec = BilateralSeriesSpec([1], [ctx.q], "0.5")
    assert bilateral_psi(spec, ctx) == 1


def test_permutation_invariance(ctx):
    rng = random.Random(3)
    spec = bailey_spec(*bailey_sample(ctx, rng), ctx)
    v = bilateral_psi(spec, ctx)
    perm = BilateralSeriesSpec(spec.numerators[::-1], spec.denominators[2:] + spec.denominators[:2], spec.x)
    assert rel_residual(bilateral_psi(perm, ctx), v) < 1e-74


@pytest.mark.parametrize("seed", range(5))
def test_ramanujan_oracle(seed):
    ctx = PrecisionContext("0.4", 256)
    rng = random.Random(seed)
    a = qpow(ctx, rng, -1.0, -0.8)
    b = qpow(ctx, rng, 0.0, 0.2)
    x = qpow(ctx, rng, 0.3, 0.6)
    assert abs(b / a) < abs(x) < 1
    val = bilateral_psi(BilateralSeriesSpec([a], [b], x), ctx)
    assert rel_residual(val, ramanujan_1psi1(a, b, x, ctx)) < 1e-70


def test_strip_violation(ctx):
    with pytest.raises(DivergentSeriesError):
        bilateral_psi(BilateralSeriesSpec(["0.5"], ["0.4"], "1.1"), ctx)
    with pytest.raises(DivergentSeriesError):
        bilateral_psi(BilateralSeriesSpec(["0.5"], ["0.4"], "0.5"), ctx)


def test_bailey_symmetric_degenerate():
    ctx = PrecisionContext("0.3", 256)
    a, b = ctx.c("0.9+0.2j"), ctx.c("1.1-0.1j")
    assert abs(a * a * ctx.q / b**4) < 1
    rhs = bailey_rhs(a, b, b, b, b, ctx)
    lhs = bilateral_psi(bailey_spec(a, b, b, b, b, ctx), ctx)
    assert rel_residual(lhs, rhs) < 1e-70


def test_bailey_errors(ctx):
    with pytest.raises(ZeroArgumentError):
        bailey_rhs(0, 1, 1, 1, 1, ctx)
    # |a^2 q/(bcde)| = 1.5
    a = ctx.mp.sqrt(1.5 / ctx.q)
    with pytest.raises(DomainError):
        bailey_rhs(a, 1, 1, 1, 1, ctx)
    with pytest.raises(DomainError):
        bailey_residual(a, 1, 1, 1, 1, ctx)


def test_bailey_residual_and_precision():
    rng = random.Random(11)
    ctx = PrecisionContext("0.45", 256)
    low = PrecisionContext("0.45", 128)
    for _ in range(5):
        sample = bailey_sample(ctx, rng)
        r256 = bailey_residual(*sample, ctx)
        assert r256 < 1e-30
        assert bailey_residual(*sample, low) >= r256


@pytest.mark.parametrize("r,tol", [(3, 1e-30), (4, 1e-25), (5, 1e-25)])
def test_slater_residual(r, tol):
    rng = random.Random(r)
    ctx = PrecisionContext("0.3", 256)
    for _ in range(3):
        assert slater_residual(r, *slater_sample(ctx, rng, r), ctx) < tol


def test_slater_term_count_and_errors(ctx):
    rng = random.Random(0)
    a, av, bv = slater_sample(ctx, rng, 4)
    lhs, terms = slater_sides(4, a, av, bv, ctx)
    assert len(terms) == 2
    with pytest.raises(DomainError):
        slater_residual(3, a, av[:1], [ctx.c("1e-3")] * 4, ctx)
    with pytest.raises(ValueError):
        slater_residual(4, a, av[:1], bv, ctx)


def _direct_window(spec, ctx, lo, hi):
    # independent oracle: every term from finite q-shifted factorials
    terms = []
    for nu in range(-lo, hi + 1):
        t = ctx.c(spec.x) ** nu
        for ai, bi in zip(spec.numerators, spec.denominators):
            t *= qpoch_int(ai, nu, ctx) / qpoch_int(bi, nu, ctx)
        terms.append(t)
    return ctx.mp.fsum(terms), ctx.mp.fsum(abs(t) for t in terms)


@settings(max_examples=6)
@given(st.integers(0, 2**32))
def test_tail_soundness(seed):
    ctx = PrecisionContext("0.35", 192)
    rng = random.Random(seed)
    sample = bailey_sample(ctx, rng)
    while abs(bailey_spec(*sample, ctx).x) > 0.35:  # keeps the quadratic-cost oracle cheap
        sample = bailey_sample(ctx, rng)
    spec = bailey_spec(*sample, ctx)
    res = bilateral_psi_detail(spec, ctx)
    window, mass = _direct_window(spec, ctx, res.terms_negative, res.terms_positive)
    wider, _ = _direct_window(spec, ctx, res.terms_negative + 10, res.terms_positive + 10)
    eps = ctx.eps_product
    assert abs(wider - window) < 10 * eps * abs(window)
    # same window summed two ways; rounding is bounded by the absolute term mass
    assert abs(res.value - window) < 1000 * eps * mass
