"""Shared sampling helpers for the test suite."""

import random

from qbcn.bcjackson import LatticeTruncation, predicted_decay
from qbcn.harness import decay_cap
from qbcn.indexsets import ParameterSet, genericity_check
from qbcn.qnum import PrecisionContext


def rand_unit_power(ctx, rng, lo, hi):
    return ctx.abs_q ** ctx.mp.mpf(rng.uniform(lo, hi)) * ctx.mp.expj(rng.uniform(-3.14, 3.14))


def jackson_setup(s, n, seed, q="0.08", degree=0, bits=256, max_decay=None, min_decay=0.0):
    """Context, parameters and a point z in the fast-convergence region of the lattice sums."""
    ctx = PrecisionContext(q, bits)
    if max_decay is None:
        max_decay = decay_cap(LatticeTruncation.default_for(n))
    rng = random.Random(seed)
    for _ in range(200):
        p = ParameterSet(
            s, n,
            rand_unit_power(ctx, rng, 0.005, 0.03),
            [rand_unit_power(ctx, rng, 0.05, 0.25) for _ in range(s)],
            [rand_unit_power(ctx, rng, 0.02, 0.08) for _ in range(2 * s + 2)],
        )
        if min_decay <= predicted_decay(p, ctx, degree) < max_decay and genericity_check(p, ctx).generic:
            z = [rand_unit_power(ctx, rng, 0.05, 0.25) for _ in range(n)]
            return ctx, p, z
    raise RuntimeError("no convergent sample")


def generic_params(ctx, s, n, t="0.5+0.1j", seed=0):
    """A fixed generic ParameterSet with |x_i| spread over (0.6, 1.5)."""
    rng = random.Random(seed)
    for _ in range(100):
        x = [ctx.c(complex(rng.uniform(0.6, 1.5), rng.uniform(-0.4, 0.4))) for _ in range(s)]
        p = ParameterSet(s, n, ctx.c(t), x)
        if genericity_check(p, ctx).generic:
            return p
    raise RuntimeError("no generic sample")
