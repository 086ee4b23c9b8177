"""Index sets B_{s,n}, Z_{s,n}, L_{s,n}, special points and genericity diagnostics.

Multi-indices are plain tuples of ints. Python's tuple comparison is exactly
the lexicographic order used for every matrix layout in this package, so
``sorted`` and ``<`` need no custom key.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Any, Iterator, Literal, Sequence

from .errors import DomainError, ZeroArgumentError
from .qnum import PrecisionContext, _annulus_shift, theta

Kind = Literal["B", "Z", "L"]
MultiIndex = tuple

__all__ = [
    "ParameterSet",
    "MultiIndex",
    "GenericityReport",
    "Partition",
    "enumerate_indices",
    "is_valid",
    "lex_less",
    "z_to_l",
    "l_to_z",
    "cardinality",
    "point_x_mu",
    "point_eta",
    "shift_x",
    "enumerate_partitions",
    "multinomial",
    "genericity_check",
    "normalized_theta",
]


@dataclass(frozen=True)
class ParameterSet:
    """Dimensions ``(s, n)``, the deformation ``t``, the ``2s+2`` characters ``a`` and base points ``x``.

    ``a`` may be left empty for operations that never touch the Jackson
    weight (interpolation functions and transition matrices).
    """

    s: int
    n: int
    t: Any
    x: tuple
    a: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "a", tuple(self.a))
        if self.s < 1 or self.n < 1:
            raise ValueError("need s, n >= 1")
        if len(self.x) != self.s:
            raise ValueError(f"x must have s = {self.s} entries")
        if self.a and len(self.a) != 2 * self.s + 2:
            raise ValueError(f"a must have 2s+2 = {2 * self.s + 2} entries")
        for v in (self.t, *self.x, *self.a):
            if v == 0:
                raise ZeroArgumentError("parameters must be nonzero")

    def in_context(self, ctx: PrecisionContext) -> "ParameterSet":
        return ParameterSet(
            self.s, self.n, ctx.c(self.t),
            tuple(ctx.c(v) for v in self.x), tuple(ctx.c(v) for v in self.a),
        )

    def with_x(self, x: Sequence) -> "ParameterSet":
        return ParameterSet(self.s, self.n, self.t, tuple(x), self.a)

    def with_n(self, n: int) -> "ParameterSet":
        return ParameterSet(self.s, n, self.t, self.x, self.a)


def enumerate_indices(kind: Kind, s: int, n: int) -> list:
    """All elements of B_{s,n}, Z_{s,n} or L_{s,n} in increasing lexicographic order."""
    if s < 1 or n < 0:
        raise ValueError("need s >= 1 and n >= 0")
    if kind == "B":
        out = [
            tuple(sorted(c, reverse=True))
            for c in itertools.combinations_with_replacement(range(s), n)
        ]
    elif kind == "Z":
        out = [c for c in _compositions(n, s)]
    elif kind == "L":
        out = [c for c in itertools.product(range(n + 1), repeat=s - 1) if sum(c) <= n]
    else:
        raise ValueError(f"unknown index kind {kind!r}")
    return sorted(out)


def _compositions(n: int, parts: int) -> Iterator[tuple]:
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def is_valid(kind: Kind, idx: Sequence[int], s: int, n: int) -> bool:
    idx = tuple(idx)
    if any(v < 0 for v in idx):
        return False
    if kind == "B":
        return len(idx) == n and all(s - 1 >= a >= b for a, b in zip(idx, idx[1:] + (0,)))
    if kind == "Z":
        return len(idx) == s and sum(idx) == n
    if kind == "L":
        return len(idx) == s - 1 and sum(idx) <= n
    raise ValueError(f"unknown index kind {kind!r}")


def lex_less(a: Sequence[int], b: Sequence[int]) -> bool:
    for u, v in zip(a, b):
        if u != v:
            return u < v
    return False


def z_to_l(mu: Sequence[int]) -> tuple:
    return tuple(mu[:-1])


def l_to_z(nu: Sequence[int], s: int, n: int) -> tuple:
    if len(nu) != s - 1 or sum(nu) > n:
        raise ValueError("not an element of L_{s,n}")
    return tuple(nu) + (n - sum(nu),)


def point_x_mu(p: ParameterSet, mu: Sequence[int], base: Sequence | None = None) -> list:
    """``x_mu = (x_1, x_1 t, ..., x_1 t^(mu_1-1), x_2, ..., x_s t^(mu_s-1))``."""
    base = p.x if base is None else base
    if len(mu) != len(base):
        raise ValueError("mu and the base point must have s entries")
    out = []
    for xi, m in zip(base, mu):
        v = xi
        for _ in range(m):
            out.append(v)
            v = v * p.t
    return out


def point_eta(p: ParameterSet, nu: Sequence[int], base: Sequence | None = None) -> list:
    """``eta_nu(x) = (x_1 t^nu_1, ..., x_{s-1} t^nu_{s-1})``; ``nu_s`` is ignored."""
    if p.s < 2:
        raise DomainError("eta_nu needs s >= 2")
    base = p.x if base is None else base
    return [base[i] * p.t ** nu[i] for i in range(p.s - 1)]


def shift_x(p: ParameterSet, mu: Sequence[int], base: Sequence | None = None) -> list:
    base = p.x if base is None else base
    return [xi * p.t**m for xi, m in zip(base, mu)]


@dataclass(frozen=True)
class Partition:
    """Ordered set partition ``K_1 | ... | K_s`` of ``{1..n}``.

    ``labels[k-1]`` is the block containing ``k`` (0-based block index) and
    ``profile[k][i] = |K_i ∩ {1..k}|`` for ``k = 0..n``.
    """

    labels: tuple
    profile: tuple

    @property
    def blocks(self) -> tuple:
        s = len(self.profile[0])
        return tuple(
            frozenset(k + 1 for k, lab in enumerate(self.labels) if lab == i) for i in range(s)
        )


def enumerate_partitions(lam: Sequence[int]) -> Iterator[Partition]:
    """Lazily yield every ordered set partition with ``|K_i| = lam_i``.

    Order: label sequences ``(i_1, ..., i_n)`` in increasing lexicographic order.
    """
    lam = tuple(lam)
    s = len(lam)
    n = sum(lam)
    labels = [0] * n
    counts = [0] * s
    profile: list = [tuple(counts)]

    def rec(k: int):
        if k == n:
            yield Partition(tuple(labels), tuple(profile))
            return
        for i in range(s):
            if counts[i] < lam[i]:
                labels[k] = i
                counts[i] += 1
                profile.append(tuple(counts))
                yield from rec(k + 1)
                profile.pop()
                counts[i] -= 1

    yield from rec(0)


def multinomial(lam: Sequence[int]) -> int:
    out = factorial(sum(lam))
    for v in lam:
        out //= factorial(v)
    return out


@dataclass(frozen=True)
class GenericityReport:
    score: float
    threshold: float
    worst: str

    @property
    def generic(self) -> bool:
        return self.score >= self.threshold

    @property
    def flag(self) -> str:
        return "GENERIC" if self.generic else "NON_GENERIC"


def normalized_theta(u, ctx: PrecisionContext) -> float:
    """``|theta(u')| / ((-|u'|)_inf (-|q/u'|)_inf)`` with ``u'`` the annulus representative of ``u``.

    Lies in ``[0, 1]`` and vanishes exactly on ``q^Z``.
    """
    u = ctx.c(u)
    if u == 0:
        return 0.0
    k = _annulus_shift(u, ctx)
    base = u / ctx.q**k
    m = float(abs(base))
    aq = float(ctx.abs_q)
    bound = 1.0
    term = 1.0
    while term > 1e-18:
        bound *= (1 + m * term) * (1 + aq / m * term)
        term *= aq
    return float(abs(theta(base, ctx))) / bound


def genericity_check(
    p: ParameterSet,
    ctx: PrecisionContext,
    delta: float = 1e-20,
    extra_points: Sequence[Sequence] = (),
) -> GenericityReport:
    """Smallest normalized theta value over the denominators the formulas divide by.

    Covers ``theta(t^m)`` (1 <= m <= n), ``theta(x_i x_j t^m)`` (i <= j,
    0 <= m <= 2n) and ``theta(x_i/x_j t^m)`` (i < j, |m| <= n), for ``x`` and for
    every point in ``extra_points`` (e.g. the target base of a transition
    matrix).
    """
    p = p.in_context(ctx)
    t = p.t
    n = p.n
    args: list[tuple[str, Any]] = [(f"t^{m}", t**m) for m in range(1, n + 1)]
    for label, pts in [("x", p.x)] + [(f"y{k}", [ctx.c(v) for v in pt]) for k, pt in enumerate(extra_points)]:
        s = len(pts)
        for i in range(s):
            for j in range(i, s):
                for m in range(0, 2 * n + 1):
                    args.append((f"{label}{i+1}*{label}{j+1}*t^{m}", pts[i] * pts[j] * t**m))
                if j > i:
                    for m in range(-n, n + 1):
                        args.append((f"{label}{i+1}/{label}{j+1}*t^{m}", pts[i] / pts[j] * t**m))
    score = float("inf")
    worst = ""
    for name, u in args:
        v = normalized_theta(u, ctx)
        if v < score:
            score, worst = v, name
    return GenericityReport(score, float(delta), worst)


def cardinality(s: int, n: int) -> int:
    return comb(s + n - 1, n)
