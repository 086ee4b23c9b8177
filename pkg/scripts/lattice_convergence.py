"""Truncation study for the van Diejen lattice sum.

For parameter sets whose predicted per-step decay sits in a chosen band, sum
the full box |nu|_inf <= N for several N and compare with the closed product.
The residual should shrink roughly like decay**N until it hits rounding.

    python3 scripts/lattice_convergence.py --radii 20 30 40 --decay 0.2 0.3
"""

import argparse
import json
import sys

from qbcn.bcjackson import LatticeTruncation, predicted_decay, regularized_integral, vandiejen_rhs
from qbcn.harness import Sampler
from qbcn.indexsets import ParameterSet, genericity_check
from qbcn.qnum import PrecisionContext, rel_residual


def draw(smp, ctx, n, band, tries=500):
    """Sample (p, z) for s = 1 with predicted decay inside ``band``."""
    for _ in range(tries):
        p = ParameterSet(
            1, n,
            smp.q_power(ctx, 0.005, 0.03),
            [smp.q_power(ctx, 0.05, 0.25)],
            [smp.q_power(ctx, 0.0, 0.08) for _ in range(4)],
        )
        rho = predicted_decay(p, ctx)
        if band[0] <= rho < band[1] and genericity_check(p, ctx).generic:
            return p, [smp.q_power(ctx, 0.05, 0.25) for _ in range(n)], rho
    raise RuntimeError(f"no sample with decay in {band}")


def study(radii, n, q, band, samples, seed, bits):
    ctx = PrecisionContext(q, bits)
    out = []
    for i in range(samples):
        p, z, rho = draw(Sampler(seed, i), ctx, n, band)
        rhs = vandiejen_rhs(p, ctx)
        row = {"sample": i, "decay": rho, "residual": {}}
        for radius in radii:
            v = regularized_integral(None, z, p, LatticeTruncation(radius=radius, fixed=True), ctx)
            row["residual"][radius] = float(rel_residual(v.value, rhs))
        out.append(row)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radii", type=int, nargs="+", default=[20, 30, 40])
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--q", default="0.2")
    ap.add_argument("--decay", type=float, nargs=2, default=[0.2, 0.3], metavar=("LO", "HI"))
    ap.add_argument("--samples", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bits", type=int, default=256)
    ap.add_argument("--json", help="write raw results here")
    args = ap.parse_args(argv)

    rows = study(args.radii, args.n, args.q, args.decay, args.samples, args.seed, args.bits)
    print("sample  decay   " + "  ".join(f"N={r:<8d}" for r in args.radii) + "  decay**N_max")
    for row in rows:
        cells = "  ".join(f"{row['residual'][r]:.2e}  " for r in args.radii)
        print(f"{row['sample']:>6}  {row['decay']:.3f}   {cells}  {row['decay'] ** max(args.radii):.1e}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
