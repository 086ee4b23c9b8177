import random

import mpmath
import pytest

from qbcn.linalg import ComplexMatrix, neumann_inverse, upper_triangular_inverse
from qbcn.qnum import PrecisionContext


def rand_matrix(ctx, n, seed, upper=False):
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if upper and j < i:
                row.append(ctx.mp.mpc(0))
            else:
                row.append(ctx.c(complex(rng.uniform(-1, 1), rng.uniform(-1, 1))) + (3 if i == j else 0))
        rows.append(row)
    return ComplexMatrix(rows, ctx)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_det_matches_mpmath(n):
    ctx = PrecisionContext("0.5", 256)
    a = rand_matrix(ctx, n, n)
    ref = ctx.mp.det(ctx.mp.matrix([list(r) for r in a.rows]))
    assert abs(a.det() - ref) <= 1e-70 * abs(ref)


def test_inverse_and_identity():
    ctx = PrecisionContext("0.5", 256)
    a = rand_matrix(ctx, 6, 1)
    eye = ComplexMatrix.identity(6, ctx)
    assert (a @ a.inverse()).max_abs_diff(eye) < 1e-70
    assert a.cond() >= 1


def test_singular_det_is_zero():
    ctx = PrecisionContext("0.5", 128)
    rows = [[1, 2], [2, 4]]
    assert ComplexMatrix(rows, ctx).det() == 0


def test_triangular_inverses_agree():
    ctx = PrecisionContext("0.5", 256)
    a = rand_matrix(ctx, 7, 3, upper=True)
    g = upper_triangular_inverse(a)
    assert g.max_abs_diff(neumann_inverse(a)) < 1e-70
    assert (a @ g).max_abs_diff(ComplexMatrix.identity(7, ctx)) < 1e-70
    assert all(g[i, j] == 0 for i in range(7) for j in range(i))


def test_private_context_untouched():
    ctx = PrecisionContext("0.5", 512)
    rand_matrix(ctx, 4, 0).det()
    assert mpmath.mp.prec == 53
