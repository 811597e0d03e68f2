import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charpenum import upoly
from charpenum.ff import GF

FIELDS = [(2, 1), (3, 1), (5, 1), (3, 2), (2, 3), (7, 2), (5, 6), (2, 12)]


def rand_poly(F, rnd, deg, monic=False):
    f = [F.random_element(rnd) for _ in range(deg)] + [1 if monic else F.random_element(rnd)]
    return upoly.trim(f)


def product(F, factors):
    out = [1]
    for g, e in factors:
        for _ in range(e):
            out = upoly.mul(F, out, g)
    return out


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 2**32))
def test_divmod_reconstructs(pk, seed):
    rnd = random.Random(seed)
    F = GF(*pk)
    f = rand_poly(F, rnd, rnd.randint(0, 12))
    g = rand_poly(F, rnd, rnd.randint(1, 6), monic=True)
    q, r = upoly.divmod_(F, f, g)
    assert upoly.add(F, upoly.mul(F, q, g), r) == upoly.trim(f)
    assert upoly.degree(r) < upoly.degree(g)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 2**32))
def test_factor_round_trip(pk, seed):
    rnd = random.Random(seed)
    F = GF(*pk)
    f = rand_poly(F, rnd, rnd.randint(1, 10), monic=True)
    factors = upoly.factor(F, f, seed=rnd.randint(0, 99))
    assert product(F, factors) == f
    for g, _ in factors:
        assert upoly.is_irreducible(F, g)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 2**32), st.integers(4, 200))
def test_packed_powmod_matches_generic(pk, seed, e):
    rnd = random.Random(seed)
    F = GF(*pk)
    m = rand_poly(F, rnd, rnd.randint(2, 9), monic=True)
    f = rand_poly(F, rnd, rnd.randint(0, 12))
    expected = [1]
    base = upoly.rem(F, f, m)
    k = e
    while k:
        if k & 1:
            expected = upoly.mulmod(F, expected, base, m)
        base = upoly.mulmod(F, base, base, m)
        k >>= 1
    assert upoly.powmod(F, f, e, m) == expected


def test_squarefree_decomposition_with_vanishing_derivative():
    F = GF(3)
    f = [0] * 7
    f[6], f[0] = 1, 1  # x^6 + 1 = (x^2 + 1)^3
    assert upoly.derivative(F, f) == []
    assert upoly.squarefree_decomposition(F, f) == [([1, 0, 1], 3)]


def test_roots_of_split_polynomial():
    F = GF(5)
    f = [0, 4, 0, 1]  # x^3 - x
    assert sorted(upoly.roots(F, f)) == [0, 1, 4]
