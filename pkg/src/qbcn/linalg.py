"""Dense complex matrices at working precision.

Sizes here stay below ~20 x 20, so a direct LU with partial pivoting is both
simple and stable enough.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .errors import NonGenericError
from .qnum import PrecisionContext

__all__ = ["ComplexMatrix", "upper_triangular_inverse", "neumann_inverse"]


class ComplexMatrix:
    def __init__(self, rows: Sequence[Sequence], ctx: PrecisionContext):
        self.ctx = ctx
        self.rows = [[ctx.c(v) for v in row] for row in rows]
        if self.rows and any(len(r) != len(self.rows[0]) for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n: int, ctx: PrecisionContext) -> "ComplexMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], ctx)

    @property
    def shape(self) -> tuple:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        n, m = self.shape
        m2, k = other.shape
        if m != m2:
            raise ValueError("shape mismatch")
        fsum = self.ctx.mp.fsum
        out = [
            [fsum(self.rows[i][l] * other.rows[l][j] for l in range(m)) for j in range(k)]
            for i in range(n)
        ]
        return ComplexMatrix(out, self.ctx)

    def lu(self):
        """Return ``(LU, perm, sign)`` with L unit-lower and U stored in place."""
        n, m = self.shape
        if n != m:
            raise ValueError("LU needs a square matrix")
        a = [row[:] for row in self.rows]
        perm = list(range(n))
        sign = 1
        for k in range(n):
            p = max(range(k, n), key=lambda i: abs(a[i][k]))
            if p != k:
                a[k], a[p] = a[p], a[k]
                perm[k], perm[p] = perm[p], perm[k]
                sign = -sign
            piv = a[k][k]
            if piv == 0:
                continue
            for i in range(k + 1, n):
                f = a[i][k] / piv
                a[i][k] = f
                if f != 0:
                    for j in range(k + 1, n):
                        a[i][j] -= f * a[k][j]
        return a, perm, sign

    def det(self):
        a, _, sign = self.lu()
        out = self.ctx.mp.mpc(sign)
        for i in range(len(a)):
            out *= a[i][i]
        return out

    def inverse(self) -> "ComplexMatrix":
        a, perm, _ = self.lu()
        n = len(a)
        mp = self.ctx.mp
        if any(a[i][i] == 0 for i in range(n)):
            raise NonGenericError("singular matrix")
        cols = []
        for j in range(n):
            b = [mp.mpc(1) if perm[i] == j else mp.mpc(0) for i in range(n)]
            for i in range(n):
                for k in range(i):
                    b[i] -= a[i][k] * b[k]
            for i in reversed(range(n)):
                for k in range(i + 1, n):
                    b[i] -= a[i][k] * b[k]
                b[i] /= a[i][i]
            cols.append(b)
        return ComplexMatrix([[cols[j][i] for j in range(n)] for i in range(n)], self.ctx)

    def norm1(self):
        n, m = self.shape
        return max(self.ctx.mp.fsum(abs(self.rows[i][j]) for i in range(n)) for j in range(m))

    def cond(self) -> float:
        """1-norm condition number estimate ``||A|| ||A^-1||``."""
        try:
            return float(self.norm1() * self.inverse().norm1())
        except NonGenericError:
            return float("inf")

    def max_abs_diff(self, other: "ComplexMatrix") -> float:
        return float(
            max(abs(u - v) for ru, rv in zip(self.rows, other.rows) for u, v in zip(ru, rv))
        )

    def diagonal(self) -> list:
        return [self.rows[i][i] for i in range(min(self.shape))]


def upper_triangular_inverse(a: ComplexMatrix) -> ComplexMatrix:
    """Inverse of an upper triangular matrix by back-substitution (strict lower part ignored)."""
    n = a.shape[0]
    mp = a.ctx.mp
    g = [[mp.mpc(0)] * n for _ in range(n)]
    for j in range(n):
        if a[j, j] == 0:
            raise NonGenericError("zero diagonal entry in triangular matrix")
        g[j][j] = 1 / a[j, j]
        for i in reversed(range(j)):
            acc = mp.fsum(a[i, k] * g[k][j] for k in range(i + 1, j + 1))
            g[i][j] = -acc / a[i, i]
    return ComplexMatrix(g, a.ctx)


def neumann_inverse(a: ComplexMatrix) -> ComplexMatrix:
    """Inverse of an upper triangular matrix as an explicit sum over index chains.

    ``(A^-1)_ij = sum_r (-1)^r sum_{i=k_0<...<k_r=j} a_{k0k1}...a_{k(r-1)kr} / (a_{k0k0}...a_{krkr})``.
    Exponential in the matrix size; meant as an independent oracle only.
    """
    n = a.shape[0]
    mp = a.ctx.mp
    g = [[mp.mpc(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            terms = []
            inner = range(i + 1, j)
            for r in range(0, j - i + 1):
                if i == j and r > 0:
                    break
                if i < j and r == 0:
                    continue
                for mid in itertools.combinations(inner, r - 1 if i < j else 0):
                    chain = (i,) + mid + ((j,) if i < j else ())
                    num = mp.mpc(1)
                    for u, v in zip(chain, chain[1:]):
                        num *= a[u, v]
                    den = mp.mpc(1)
                    for u in chain:
                        den *= a[u, u]
                    terms.append((-1) ** r * num / den)
            g[i][j] = mp.fsum(terms)
    return ComplexMatrix(g, a.ctx)
