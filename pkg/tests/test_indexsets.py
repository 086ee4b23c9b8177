import itertools
from math import comb, factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qbcn.errors import DomainError
from qbcn.indexsets import (
    ParameterSet,
    cardinality,
    enumerate_indices,
    enumerate_partitions,
    genericity_check,
    is_valid,
    l_to_z,
    lex_less,
    multinomial,
    point_eta,
    point_x_mu,
    shift_x,
    z_to_l,
)
from qbcn.qnum import PrecisionContext


@pytest.fixture
def p3(ctx):
    return ParameterSet(3, 3, ctx.c("0.5+0.1j"), [ctx.c("0.7"), ctx.c("1.3j"), ctx.c("0.9-0.4j")])


def test_enumerate_examples():
    assert enumerate_indices("Z", 2, 2) == [(0, 2), (1, 1), (2, 0)]
    assert enumerate_indices("B", 2, 2) == [(0, 0), (1, 0), (1, 1)]
    for n in range(1, 5):
        assert enumerate_indices("Z", 1, n) == [(n,)]


@pytest.mark.parametrize("s,n", [(s, n) for s in range(1, 7) for n in range(1, 7)])
def test_cardinalities(s, n):
    z = enumerate_indices("Z", s, n)
    b = enumerate_indices("B", s, n)
    assert len(z) == len(b) == comb(s + n - 1, n) == cardinality(s, n)
    assert all(is_valid("Z", m, s, n) for m in z)
    assert all(is_valid("B", m, s, n) for m in b)
    assert all(lex_less(u, v) for u, v in zip(z, z[1:]))
    assert all(lex_less(u, v) for u, v in zip(b, b[1:]))


def test_l_set_and_bijection():
    s, n = 3, 3
    ls = enumerate_indices("L", s, n)
    assert all(is_valid("L", v, s, n) for v in ls)
    assert z_to_l((2, 1, 0)) == (2, 1)
    assert l_to_z((2, 1), 3, 3) == (2, 1, 0)
    zs = enumerate_indices("Z", s, n)
    assert sorted(z_to_l(m) for m in zs) == ls
    assert all(l_to_z(z_to_l(m), s, n) == m for m in zs)
    with pytest.raises(ValueError):
        l_to_z((3, 1), 3, 3)


index_pairs = st.tuples(
    st.lists(st.integers(0, 3), min_size=3, max_size=3),
    st.lists(st.integers(0, 3), min_size=3, max_size=3),
    st.lists(st.integers(0, 3), min_size=3, max_size=3),
)


@given(index_pairs)
def test_lex_order_is_strict_total(triple):
    a, b, c = (tuple(v) for v in triple)
    assert not lex_less(a, a)
    if a != b:
        assert lex_less(a, b) != lex_less(b, a)
    else:
        assert not lex_less(a, b) and not lex_less(b, a)
    if lex_less(a, b) and lex_less(b, c):
        assert lex_less(a, c)
    assert lex_less(a, b) == (a < b)


def test_point_x_mu_examples(ctx, p3):
    x, t = p3.x, p3.t
    assert point_x_mu(p3, (3, 0, 0)) == [x[0], x[0] * t, x[0] * t * t]
    assert point_x_mu(p3, (1, 1, 1)) == list(x)
    assert point_x_mu(p3, (0, 0, 3)) == [x[2], x[2] * t, x[2] * t * t]


@given(st.sampled_from(enumerate_indices("Z", 3, 4)))
def test_point_x_mu_blocks(mu):
    ctx = PrecisionContext("0.35", 128)
    p = ParameterSet(3, 4, ctx.c(2), [ctx.c(3), ctx.c(5), ctx.c(7)])
    pt = point_x_mu(p, mu)
    assert len(pt) == 4
    k = 0
    for xi, m in zip(p.x, mu):
        assert [int(v.real) for v in pt[k:k + m]] == [int(xi.real) * 2**e for e in range(m)]
        k += m


def test_point_eta(ctx, p3):
    x, t = p3.x, p3.t
    assert point_eta(p3, (0, 0, 3)) == [x[0], x[1]]
    assert point_eta(p3, (1, 2, 0)) == point_eta(p3, (1, 2, 5))
    p2 = ParameterSet(2, 3, t, x[:2])
    assert point_eta(p2, (2, 1)) == [x[0] * t**2]
    with pytest.raises(DomainError):
        point_eta(ParameterSet(1, 2, t, x[:1]), (2,))


def test_shift_x(ctx, p3):
    assert shift_x(p3, (0, 0, 0)) == list(p3.x)
    once = shift_x(p3, (1, 0, 2))
    twice = shift_x(p3, (0, 2, 1), base=once)
    direct = shift_x(p3, (1, 2, 3))
    assert all(abs(u - v) < 1e-70 for u, v in zip(twice, direct))
    p1 = ParameterSet(1, 3, p3.t, p3.x[:1])
    assert abs(shift_x(p1, (3,))[0] - p3.x[0] * p3.t**3) < 1e-70


def test_partitions_examples():
    assert len(list(enumerate_partitions((0, 3, 0)))) == 1
    parts = list(enumerate_partitions((1, 1)))
    assert len(parts) == 2
    # K_1 = {2}, K_2 = {1}
    target = [pt for pt in parts if pt.blocks == (frozenset({2}), frozenset({1}))][0]
    assert target.profile[1][0] == 0 and target.profile[2][0] == 1


@pytest.mark.parametrize("lam", [(2, 1), (1, 1, 1), (2, 0, 2), (3, 1, 1)])
def test_partitions_complete(lam):
    parts = list(enumerate_partitions(lam))
    n = sum(lam)
    assert len(parts) == multinomial(lam) == factorial(n) // prod(factorial(v) for v in lam)
    seen = set()
    for pt in parts:
        assert [len(b) for b in pt.blocks] == list(lam)
        assert set().union(*pt.blocks) == set(range(1, n + 1))
        for k in range(n + 1):
            assert pt.profile[k] == tuple(len([j for j in b if j <= k]) for b in pt.blocks)
        seen.add(pt.labels)
    assert len(seen) == len(parts)
    oracle = {c for c in itertools.product(range(len(lam)), repeat=n) if all(c.count(i) == lam[i] for i in range(len(lam)))}
    assert seen == oracle


def test_genericity(ctx):
    t = ctx.c("0.5+0.1j")
    x = ctx.c("0.8+0.2j")
    assert not genericity_check(ParameterSet(2, 2, t, [x, x]), ctx).generic
    assert genericity_check(ParameterSet(2, 2, t, [x, x]), ctx).flag == "NON_GENERIC"
    assert not genericity_check(ParameterSet(2, 2, t, [x, 1 / (x * t)]), ctx).generic
    rep = genericity_check(ParameterSet(2, 2, t, [x, ctx.c("1.3-0.4j")]), ctx)
    assert rep.generic and rep.flag == "GENERIC"


def test_parameterset_validation(ctx):
    with pytest.raises(ValueError):
        ParameterSet(2, 1, 0.5, [1])
    with pytest.raises(ValueError):
        ParameterSet(1, 1, 0.5, [1], [1, 2, 3])
    with pytest.raises(ValueError):
        ParameterSet(1, 1, 0, [1])
