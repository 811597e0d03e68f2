import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charpenum import upoly
from charpenum.ff import (
    GF,
    FieldError,
    FiniteField,
    embed,
    embedding,
    extension,
    format_modulus,
    frobenius,
    is_prime,
    parse_element,
    parse_field,
    pth_root,
    random_irreducible,
)

SMALL = [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (5, 2), (7, 1), (2, 4)]
BIG = [(2, 20), (3, 12), (5, 9), (7, 14), (11, 6), (2, 40)]


def field_strategy(specs):
    return st.sampled_from(specs).map(lambda pk: GF(*pk))


def _poly_eval_mod_p(m, x, p):
    acc = 0
    for c in reversed(m):
        acc = (acc * x + c) % p
    return acc


# -- construction --------------------------------------------------------------------


def test_degree_one_irreducible_is_monic_linear():
    m = random_irreducible(2, 1, 0)
    assert len(m) == 2 and m[-1] == 1


@pytest.mark.parametrize("seed", range(5))
def test_quadratic_over_gf3_has_no_root(seed):
    m = random_irreducible(3, 2, seed)
    assert m[-1] == 1 and len(m) == 3
    assert all(_poly_eval_mod_p(m, x, 3) for x in range(3))


@pytest.mark.parametrize("seed", range(5))
def test_quartic_over_gf2_divides_t16_minus_t_only(seed):
    F2 = GF(2)
    m = list(random_irreducible(2, 4, seed))

    def t_pow_minus_t(n):
        f = [0] * (n + 1)
        f[n], f[1] = 1, 1
        return f

    assert upoly.rem(F2, t_pow_minus_t(16), m) == []
    assert upoly.degree(upoly.gcd(F2, t_pow_minus_t(4), m)) == 0
    assert upoly.degree(upoly.gcd(F2, t_pow_minus_t(2), m)) == 0


def test_prime_checks():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2_147_483_647)
    with pytest.raises(FieldError):
        FiniteField(4)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        parse_field("GF(2^2; t^2+1)")


def test_field_literals_round_trip():
    K = parse_field("GF(2^4; t^4+t+1)")
    assert (K.p, K.k, K.q) == (2, 4, 16)
    assert format_modulus(K.modulus) == "t^4 + t + 1"
    assert parse_field(repr(K)).modulus == K.modulus
    assert parse_field("GF(9)") is GF(3, 2)
    for bad in ("GF(6)", "gf(9)", "GF(2^0)", "GF(3", "GF(2^2; t^3+t+1)"):
        with pytest.raises(FieldError):
            parse_field(bad)


def test_element_literals():
    K = GF(3, 3)
    a = parse_element(K, "[1,0,2]")
    assert K.coeffs(a) == [1, 0, 2]
    assert K.format(a) == "[1,0,2]"
    assert parse_element(K, "5") == parse_element(K, "[2,0,0]")
    with pytest.raises(FieldError):
        parse_element(K, "[1,3,0]")


# -- arithmetic examples -------------------------------------------------------------


def test_gf3_addition():
    K = GF(3)
    assert K.add(2, 2) == 1


def test_gf4_t_squared():
    K = parse_field("GF(2^2; t^2+t+1)")
    t = K.element([0, 1])
    assert (t * t).coeffs == [1, 1]


def test_gf9_multiplicative_order_divides_8():
    K = GF(3, 2)
    for a in range(1, 9):
        assert K.pow(a, 8) == 1


def test_zero_inverse_and_mismatch():
    K = GF(2, 2)
    with pytest.raises(ZeroDivisionError):
        K.inv(0)
    with pytest.raises(FieldError):
        GF(3).element(1) + GF(5).element(1)


# -- axioms over every backend -------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(field_strategy(SMALL + BIG), st.integers(0, 2**32))
def test_field_axioms(K, seed):
    rnd = random.Random(seed)
    a, b, c = (K.random_element(rnd) for _ in range(3))
    assert K.add(a, b) == K.add(b, a)
    assert K.mul(a, b) == K.mul(b, a)
    assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
    assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
    assert K.sub(K.add(a, b), b) == a
    assert K.add(a, K.neg(a)) == 0
    if a:
        assert K.mul(a, K.inv(a)) == 1


@settings(max_examples=40, deadline=None)
@given(field_strategy(BIG), st.integers(0, 2**32))
def test_packed_multiplication_matches_schoolbook(K, seed):
    rnd = random.Random(seed)
    a, b = K.random_element(rnd), K.random_element(rnd)
    assert K.mul(a, b) == K._vec_mul(a, b)
    assert K.coeffs(K.mul(a, b)) == K.coeffs(K.mul(b, a))


@settings(max_examples=40, deadline=None)
@given(field_strategy(SMALL + BIG), st.integers(0, 2**32))
def test_fermat_closes_orbit(K, seed):
    rnd = random.Random(seed)
    a = K.random_element(rnd)
    assert K.pow(a, K.q) == a


# -- Frobenius -----------------------------------------------------------------------


def test_frobenius_identity_on_gf2():
    K = GF(2)
    for a in range(2):
        assert frobenius(K.element(a)) == K.element(a)


def test_pth_root_inverts_frobenius_on_gf9():
    K = GF(3, 2)
    for a in range(9):
        x = K.element(a)
        assert pth_root(frobenius(x)) == x
        assert frobenius(pth_root(x)) == x


def test_frobenius_cubed_is_identity_on_gf8():
    K = GF(2, 3)
    for a in range(8):
        x = K.element(a)
        assert frobenius(frobenius(frobenius(x))) == x


# -- embeddings ----------------------------------------------------------------------


def test_embedding_fixes_zero_and_one():
    e = embedding(GF(3, 2), GF(3, 4))
    assert e(0) == 0 and e(1) == 1


def test_prime_field_embeds_into_prime_subfield():
    e = embedding(GF(2), GF(2, 2))
    assert [e(0), e(1)] == [0, 1]


@pytest.mark.parametrize("src,r", [((2, 1), 4), ((2, 2), 3), ((3, 1), 4), ((3, 2), 2), ((2, 3), 2)])
def test_embedding_homomorphism_and_injective(src, r):
    K = GF(*src)
    M = extension(K, r)
    e = embedding(K, M)
    images = [e(a) for a in range(K.q)]
    assert len(set(images)) == K.q
    for a, b in itertools.product(range(K.q), repeat=2):
        assert e(K.add(a, b)) == M.add(e(a), e(b))
        assert e(K.mul(a, b)) == M.mul(e(a), e(b))


def test_embedding_is_cached_and_consistent():
    K, M = GF(2, 3), GF(2, 6)
    assert embedding(K, M) is embedding(K, M)
    x = K.element([0, 1, 0])
    assert embed(x, M) == embed(x, M)


def test_embedding_concurrent_calls_agree():
    from concurrent.futures import ThreadPoolExecutor

    K, M = GF(5, 2), GF(5, 6)
    rnd = random.Random(0)
    a = K.random_element(rnd)
    with ThreadPoolExecutor(4) as ex:
        vals = list(ex.map(lambda _: embedding(K, M)(a), range(16)))
    assert len(set(vals)) == 1


def test_embedding_needs_divisible_degree():
    with pytest.raises(FieldError):
        embedding(GF(2, 2), GF(2, 3))
