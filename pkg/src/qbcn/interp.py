"""Elliptic Lagrange interpolation functions E_lambda(x; z) of type BC_n.

Three independent evaluation routes are provided:

``explicit``
    sum over ordered set partitions ``K_1 | ... | K_s`` of e-symbol quotients;
``recursive``
    peel off one variable at a time through the n = 1 closed form, memoized on
    the accumulated shift vector;
``triangular``
    expand the dual Cauchy kernel against the inverse ``G`` of the upper
    triangular matrix ``F = (F_mu(x; eta_nu(x)))``.
"""

from __future__ import annotations

from typing import Literal, Sequence

from .errors import NonGenericError, ZeroArgumentError
from .indexsets import (
    ParameterSet,
    enumerate_indices,
    enumerate_partitions,
    genericity_check,
    point_eta,
    point_x_mu,
)
from .linalg import ComplexMatrix, neumann_inverse, upper_triangular_inverse
from .qnum import PrecisionContext, e_factorial, e_symbol, rel_residual

Method = Literal["explicit", "recursive", "triangular"]
METHODS: tuple = ("explicit", "recursive", "triangular")

# the chain-sum inverse is exponential in |Z_{s,n}|
NEUMANN_CAP = 10

__all__ = [
    "METHODS",
    "InterpolationBasis",
    "kernel_psi",
    "f_dual",
    "f_matrix",
    "g_matrix",
    "e_interp",
    "e_single",
    "duality_residual",
]


def kernel_psi(z: Sequence, y: Sequence, ctx: PrecisionContext):
    """Dual Cauchy kernel ``prod_i prod_j e(z_i; y_j)``."""
    out = ctx.mp.mpc(1)
    for zi in z:
        for yj in y:
            out *= e_symbol(zi, yj, ctx)
    return out


def f_dual(mu: Sequence[int], y: Sequence, p: ParameterSet, ctx: PrecisionContext, x: Sequence | None = None):
    """``F_mu(x; y) = prod_i prod_j e(x_i; y_j)_{mu_i}``."""
    x = p.x if x is None else x
    out = ctx.mp.mpc(1)
    for xi, m in zip(x, mu):
        for yj in y:
            out *= e_factorial(xi, yj, m, p.t, ctx)
    return out


def e_single(i: int, y: Sequence, z, ctx: PrecisionContext):
    """n = 1 interpolation function ``E_{eps_i}(y; z) = prod_{j != i} e(z; y_j) / e(y_i; y_j)``."""
    out = ctx.mp.mpc(1)
    for j, yj in enumerate(y):
        if j == i:
            continue
        den = e_symbol(y[i], yj, ctx)
        if den == 0:
            raise NonGenericError("e(y_i; y_j) vanishes")
        out *= e_symbol(z, yj, ctx) / den
    return out


class InterpolationBasis:
    """The basis ``{E_lambda(x; .) : lambda in Z_{s,n}}`` of H_{s-1,n} at fixed ``x`` and ``t``.

    Construction runs the genericity check once (unless ``check=False``);
    the triangular system ``F``/``G`` is built lazily on first use.
    """

    def __init__(self, p: ParameterSet, ctx: PrecisionContext, check: bool = True, delta: float = 1e-20):
        self.p = p.in_context(ctx)
        self.ctx = ctx
        self.index = enumerate_indices("Z", p.s, p.n)
        self._pos = {mu: k for k, mu in enumerate(self.index)}
        if check:
            rep = genericity_check(self.p, ctx, delta)
            if not rep.generic:
                raise NonGenericError(f"x is not generic (worst factor {rep.worst}, score {rep.score:.3g})")
        self._f = None
        self._g = None

    @property
    def s(self) -> int:
        return self.p.s

    @property
    def n(self) -> int:
        return self.p.n

    def f_matrix(self) -> ComplexMatrix:
        if self._f is None:
            if self.s < 2:
                raise ValueError("the triangular system needs s >= 2")
            eta = [point_eta(self.p, nu) for nu in self.index]
            rows = [[f_dual(mu, y, self.p, self.ctx) for y in eta] for mu in self.index]
            f = ComplexMatrix(rows, self.ctx)
            if any(v == 0 for v in f.diagonal()):
                raise NonGenericError("F has a vanishing diagonal entry")
            self._f = f
        return self._f

    def g_matrix(self, cross_check: bool = True) -> ComplexMatrix:
        if self._g is None:
            f = self.f_matrix()
            g = upper_triangular_inverse(f)
            if cross_check and len(self.index) <= NEUMANN_CAP:
                oracle = neumann_inverse(f)
                scale = max(abs(v) for row in g.rows for v in row)
                if g.max_abs_diff(oracle) > self.ctx.eps_identity * scale:
                    raise NonGenericError("back-substitution and chain-sum inverses disagree")
            self._g = g
        return self._g

    def value(self, lam: Sequence[int], z: Sequence, method: Method = "explicit"):
        lam = tuple(lam)
        if len(lam) != self.s or sum(lam) != len(z):
            raise ValueError("lambda must lie in Z_{s,n} with n = len(z)")
        z = [self.ctx.c(v) for v in z]
        if any(v == 0 for v in z):
            raise ZeroArgumentError("z coordinates must be nonzero")
        if method == "explicit":
            return self._explicit(lam, z)
        if method == "recursive":
            return self._recursive(lam, z)
        if method == "triangular":
            if len(z) != self.n:
                raise ValueError("triangular route is tied to the basis dimension n")
            return self._triangular(lam, z)
        raise ValueError(f"unknown method {method!r}")

    def values(self, z: Sequence, method: Method = "explicit") -> list:
        return [self.value(lam, z, method) for lam in self.index]

    def _explicit(self, lam, z):
        ctx = self.ctx
        x = self.p.x
        t = self.p.t
        s = len(lam)
        num_cache: dict = {}
        den_cache: dict = {}
        terms = []
        for part in enumerate_partitions(lam):
            term = ctx.mp.mpc(1)
            for k, i in enumerate(part.labels):
                c = part.profile[k]
                for j in range(s):
                    if j == i:
                        continue
                    key = (k, j, c[j])
                    if key not in num_cache:
                        num_cache[key] = e_symbol(z[k], x[j] * t ** c[j], ctx)
                    dkey = (i, c[i], j, c[j])
                    if dkey not in den_cache:
                        d = e_symbol(x[i] * t ** c[i], x[j] * t ** c[j], ctx)
                        if d == 0:
                            raise NonGenericError("an e-symbol denominator vanishes")
                        den_cache[dkey] = d
                    term *= num_cache[key] / den_cache[dkey]
            terms.append(term)
        return ctx.mp.fsum(terms)

    def _recursive(self, lam, z):
        ctx = self.ctx
        x = self.p.x
        t = self.p.t
        s = len(lam)
        n = len(z)
        memo: dict = {}

        def rest(c: tuple):
            # sum over ways to finish from accumulated shift c (remaining index lam - c)
            k = sum(c)
            if k == n:
                return ctx.mp.mpc(1)
            if c in memo:
                return memo[c]
            shifted = [x[j] * t ** c[j] for j in range(s)]
            acc = []
            for i in range(s):
                if c[i] < lam[i]:
                    nxt = c[:i] + (c[i] + 1,) + c[i + 1:]
                    acc.append(e_single(i, shifted, z[k], ctx) * rest(nxt))
            memo[c] = ctx.mp.fsum(acc)
            return memo[c]

        return rest((0,) * s)

    def _triangular(self, lam, z):
        g = self.g_matrix()
        col = self._pos[lam]
        terms = []
        for row, mu in enumerate(self.index):
            if mu > lam:
                break
            gv = g[row, col]
            if gv != 0:
                terms.append(kernel_psi(z, point_eta(self.p, mu), self.ctx) * gv)
        return self.ctx.mp.fsum(terms)

    def point(self, mu: Sequence[int]) -> list:
        return point_x_mu(self.p, mu)


def f_matrix(p: ParameterSet, ctx: PrecisionContext) -> ComplexMatrix:
    return InterpolationBasis(p, ctx).f_matrix()


def g_matrix(p: ParameterSet, ctx: PrecisionContext, cross_check: bool = True) -> ComplexMatrix:
    return InterpolationBasis(p, ctx).g_matrix(cross_check)


def e_interp(
    lam: Sequence[int],
    z: Sequence,
    p: ParameterSet,
    ctx: PrecisionContext,
    method: Method = "explicit",
    check: bool = True,
):
    """One-shot ``E_lambda(x; z)``; build an :class:`InterpolationBasis` for repeated calls."""
    return InterpolationBasis(p, ctx, check=check).value(lam, z, method)


def duality_residual(z: Sequence, y: Sequence, p: ParameterSet, ctx: PrecisionContext,
                     basis: InterpolationBasis | None = None) -> float:
    """Residual of ``Psi(z; y) = sum_lambda E_lambda(x; z) F_lambda(x; y)``."""
    if len(y) != p.s - 1:
        raise ValueError("y must have s-1 entries")
    basis = basis or InterpolationBasis(p, ctx)
    lhs = kernel_psi(z, y, ctx)
    rhs = ctx.mp.fsum(
        basis.value(lam, z) * f_dual(lam, y, basis.p, ctx) for lam in basis.index
    )
    return rel_residual(lhs, rhs)
