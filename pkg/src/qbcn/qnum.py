"""Arbitrary-precision scalar building blocks.

Everything here is evaluated in a private :class:`mpmath.MPContext` owned by a
:class:`PrecisionContext`, so contexts at different precisions can coexist in
one process without touching the global ``mpmath.mp`` state.
"""

from __future__ import annotations

import math
from typing import Any

import mpmath

from .errors import PoleError, ZeroArgumentError

__all__ = [
    "PrecisionContext",
    "qpoch_inf",
    "qpoch_int",
    "theta",
    "theta_product",
    "e_symbol",
    "e_factorial",
    "rel_residual",
]


class PrecisionContext:
    """Working precision, the base ``q`` and the tolerances used downstream.

    ``q`` may be any value mpmath can parse (number or string such as
    ``"0.3"`` or ``"0.2+0.1j"``); the original input is kept so that
    :meth:`with_precision` re-parses it exactly at the new precision.
    """

    def __init__(
        self,
        q: Any = "0.5",
        precision_bits: int = 256,
        sqrt_q: Any = None,
        eps_product: Any = None,
        eps_identity: Any = None,
    ):
        if int(precision_bits) < 32:
            raise ValueError("precision_bits must be at least 32")
        mp = mpmath.MPContext()
        mp.prec = int(precision_bits)
        qv = mp.mpc(mp.mpmathify(q))
        if qv == 0 or abs(qv) >= 1:
            raise ValueError(f"need 0 < |q| < 1, got |q| = {mp.nstr(abs(qv), 10)}")
        if sqrt_q is None:
            root = mp.sqrt(qv)
        else:
            root = mp.mpc(mp.mpmathify(sqrt_q))
            if abs(root * root - qv) > mp.ldexp(abs(qv), 8 - mp.prec):
                raise ValueError("sqrt_q**2 does not reproduce q")
        eps_p = mp.ldexp(1, -mp.prec) if eps_product is None else mp.mpf(eps_product)
        if eps_identity is None:
            eps_i = max(mp.mpf("1e-25"), mp.ldexp(1, -(mp.prec // 2)))
        else:
            eps_i = mp.mpf(eps_identity)
        if not eps_p < eps_i:
            raise ValueError("eps_product must be smaller than eps_identity")

        self._q_source = q
        self._sqrt_source = sqrt_q
        self.mp = mp
        self.precision_bits = int(precision_bits)
        self.q = qv
        self.sqrt_q = root
        self.eps_product = eps_p
        self.eps_identity = eps_i
        self.abs_q = abs(qv)
        self._log_abs_q = float(mp.log(self.abs_q))
        self.qq_inf = qpoch_inf(qv, self)
        # the series cancels down to (q;q)_inf theta(u); carry that many guard bits
        self._theta_guard = 16 + max(0, int(-float(mp.log(abs(self.qq_inf), 2))))

    def __repr__(self) -> str:
        return (
            f"PrecisionContext(q={self.mp.nstr(self.q, 15)}, "
            f"precision_bits={self.precision_bits})"
        )

    def with_precision(self, bits: int, **overrides: Any) -> "PrecisionContext":
        kw = dict(q=self._q_source, precision_bits=bits, sqrt_q=self._sqrt_source)
        kw.update(overrides)
        return PrecisionContext(**kw)

    def theta_terms(self, bits: int) -> int:
        """Terms per tail of the triple-product series for ``bits`` of absolute accuracy.

        On ``|q| < |u| <= 1`` both tails are bounded termwise by ``|q|^(k(k-1)/2)``.
        """
        target = -(bits + 2) * math.log(2)
        k = 1
        while k * (k - 1) / 2 * self._log_abs_q > target:
            k += 1
        return k

    def c(self, x: Any):
        """Convert ``x`` to a complex number of this context."""
        return self.mp.mpc(self.mp.mpmathify(x))

    def terms_for_tail(self, modulus) -> int:
        """Smallest L with ``modulus * |q|**L / (1 - |q|) < eps_product``."""
        if modulus == 0:
            return 0
        mp = self.mp
        rhs = float(mp.log(self.eps_product) + mp.log(1 - self.abs_q) - mp.log(modulus))
        return max(0, math.floor(rhs / self._log_abs_q) + 1)


def qpoch_inf(u: Any, ctx: PrecisionContext):
    """``(u; q)_inf`` truncated adaptively by the geometric tail bound."""
    u = ctx.c(u)
    if u == 0:
        return ctx.mp.mpc(1)
    L = ctx.terms_for_tail(abs(u))
    prod = ctx.mp.mpc(1)
    uq = u
    q = ctx.q
    for _ in range(L):
        prod *= 1 - uq
        uq *= q
    return prod


def qpoch_int(u: Any, nu: int, ctx: PrecisionContext):
    """Finite q-shifted factorial ``(u)_nu = (u)_inf / (u q^nu)_inf`` for any integer nu."""
    u = ctx.c(u)
    mp = ctx.mp
    nu = int(nu)
    prod = mp.mpc(1)
    if nu >= 0:
        uq = u
        for _ in range(nu):
            prod *= 1 - uq
            uq *= ctx.q
        return prod
    uq = u
    for _ in range(-nu):
        uq /= ctx.q
        f = 1 - uq
        if abs(f) <= ctx.eps_product * max(1, abs(uq)):
            raise PoleError(f"(u)_{nu} has a vanishing denominator factor")
        prod *= f
    return 1 / prod


def _annulus_shift(u, ctx: PrecisionContext) -> int:
    """Integer k with ``|q|^(k+1) < |u| <= |q|^k``."""
    k = math.floor(float(ctx.mp.log(abs(u))) / ctx._log_abs_q)
    # float rounding of the logarithm can land one step off; fix up exactly
    while abs(u) > ctx.abs_q**k:
        k -= 1
    while abs(u) <= ctx.abs_q ** (k + 1):
        k += 1
    return k


def _theta_series(u, ctx: PrecisionContext):
    # Jacobi triple product: (q;q)_inf theta(u) = sum_k (-1)^k q^(k(k-1)/2) u^k
    mp = ctx.mp
    guard = ctx._theta_guard
    while True:
        with mp.extraprec(guard):
            value = _theta_sum(u, ctx, ctx.theta_terms(ctx.precision_bits + guard))
            # terms are at most 1 in modulus, so the sum shows how much cancelled
            lost = 0 if value == 0 else max(0, int(-float(mp.log(abs(value * ctx.qq_inf), 2))))
        if lost + 8 <= guard or guard > 4 * ctx.precision_bits:
            return +value
        guard = lost + 16


def _theta_sum(u, ctx: PrecisionContext, terms: int):
    mp = ctx.mp
    q = ctx.q
    acc = [mp.mpc(1)]
    term = mp.mpc(1)
    qk = mp.mpc(1)  # q^k, so term_{k+1} = -term_k * q^k * u
    for _ in range(terms):
        term = -term * qk * u
        qk *= q
        acc.append(term)
    term = mp.mpc(1)
    qk = mp.mpc(1)
    inv = 1 / u
    for _ in range(terms):
        qk *= q  # q^m for the m-th negative index
        term = -term * qk * inv
        acc.append(term)
    return mp.fsum(acc) / ctx.qq_inf


def theta_product(u: Any, ctx: PrecisionContext):
    """``(u)_inf (q/u)_inf`` by direct products, without any argument reduction."""
    u = ctx.c(u)
    if u == 0:
        raise ZeroArgumentError("theta(0) is undefined")
    return qpoch_inf(u, ctx) * qpoch_inf(ctx.q / u, ctx)


def theta(u: Any, ctx: PrecisionContext):
    """``theta(u) = (u)_inf (q/u)_inf``.

    The argument is moved into the annulus ``|q| < |u| <= 1`` with
    ``theta(q^k u) = (-1)^k q^(-k(k-1)/2) u^(-k) theta(u)``, then evaluated
    through the triple-product series, which needs O(sqrt(bits)) terms
    instead of O(bits) factors.
    """
    u = ctx.c(u)
    if u == 0:
        raise ZeroArgumentError("theta(0) is undefined")
    k = _annulus_shift(u, ctx)
    base = u / ctx.q**k if k else u
    if base == 1:
        return ctx.mp.mpc(0)
    core = _theta_series(base, ctx)
    if k == 0:
        return core
    sign = -1 if k % 2 else 1
    return sign * core * ctx.q ** (-(k * (k - 1) // 2)) * base ** (-k)


def e_symbol(a: Any, b: Any, ctx: PrecisionContext):
    """``e(a;b) = a^-1 theta(ab) theta(a/b)``."""
    a = ctx.c(a)
    b = ctx.c(b)
    if a == 0 or b == 0:
        raise ZeroArgumentError("e(a;b) needs a, b nonzero")
    return theta(a * b, ctx) * theta(a / b, ctx) / a


def e_factorial(a: Any, b: Any, r: int, t: Any, ctx: PrecisionContext):
    """t-shifted factorial ``e(a;b)_r = e(a;b) e(at;b) ... e(at^(r-1);b)``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    a = ctx.c(a)
    t = ctx.c(t)
    out = ctx.mp.mpc(1)
    for _ in range(r):
        out *= e_symbol(a, b, ctx)
        a *= t
    return out


def rel_residual(lhs, rhs) -> float:
    """``|lhs - rhs| / (|lhs| + |rhs|)``, zero when both sides vanish."""
    den = abs(lhs) + abs(rhs)
    if den == 0:
        return 0.0
    return float(abs(lhs - rhs) / den)
