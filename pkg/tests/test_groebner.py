import random
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charpenum.checks import random_polynomial, random_zero_dim_ideal
from charpenum.ff import GF
from charpenum.groebner import (
    CancelToken,
    Cancelled,
    Ideal,
    Limits,
    ResourceLimitError,
    buchberger,
    check_groebner,
    dump,
    eliminate,
    ideal_quotient,
    intersect,
    is_reduced,
    is_zero_dimensional,
    normal_form,
    quotient_basis,
    saturate,
    saturation,
)
from charpenum.poly import PolynomialRing, parse_polynomial


def ideal(R, *texts):
    return Ideal(R, [parse_polynomial(R, t) for t in texts])


def same_ideal(I, J):
    return I.groebner() == J.groebner()


# -- normal forms --------------------------------------------------------------------


def test_normal_form_examples():
    R = PolynomialRing(GF(5), ["x", "y"], "lex")
    I = ideal(R, "x^2 - y", "y^2 - 1")
    G = I.groebner()
    assert normal_form(parse_polynomial(R, "x^4"), G) == R.one()
    for g in I.generators:
        assert normal_form(g, G).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_normal_form_idempotent_and_congruent(seed):
    rnd = random.Random(seed)
    R = PolynomialRing(GF(3), ["x", "y", "z"])
    I = random_zero_dim_ideal(R, rnd)
    G = I.groebner()
    f = random_polynomial(R, rnd, 4)
    r = normal_form(f, G)
    assert normal_form(r, G) == r
    assert G.contains(f - r)
    lms = G.leading_monomials()
    for m in r.terms:
        assert not any(R.divides(l, m) for l in lms)


# -- Buchberger ----------------------------------------------------------------------


def test_unit_ideal():
    R = PolynomialRing(GF(7), ["x", "y"])
    assert ideal(R, "x*y + 3", "2").groebner().is_unit()
    assert Ideal(R, [R.one()]).groebner().basis == [R.one()]


def test_linear_system():
    R = PolynomialRing(GF(5), ["x", "y"])
    G = ideal(R, "x + y", "x - y").groebner()
    assert sorted(str(g) for g in G) == ["x", "y"]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(["grevlex", "lex"]))
def test_reduced_basis_closure_and_uniqueness(seed, order):
    rnd = random.Random(seed)
    K = [GF(2), GF(3), GF(5), GF(3, 2)][seed % 4]
    R = PolynomialRing(K, ["x", "y", "z"], order)
    gens = [random_polynomial(R, rnd, 2) for _ in range(3)]
    gens = [g for g in gens if g]
    if not gens:
        return
    G = Ideal(R, gens).groebner()
    assert check_groebner(G) and is_reduced(G)
    shuffled = gens[:]
    rnd.shuffle(shuffled)
    assert Ideal(R, shuffled).groebner() == G
    for g in gens:
        assert G.contains(g)


def test_resource_limit_carries_stats():
    R = PolynomialRing(GF(7), ["x", "y", "z", "w"])
    rnd = random.Random(3)
    I = Ideal(R, [random_polynomial(R, rnd, 3) for _ in range(4)])
    with pytest.raises(ResourceLimitError) as err:
        buchberger(I, limits=Limits(max_pairs=3))
    assert err.value.stats["pairs_processed"] >= 3


def test_cancellation_token():
    R = PolynomialRing(GF(7), ["x", "y", "z", "w"])
    rnd = random.Random(4)
    I = Ideal(R, [random_polynomial(R, rnd, 3) for _ in range(4)])
    token = CancelToken()
    token.cancel()
    with pytest.raises(Cancelled):
        buchberger(I, limits=Limits(token=token))


def test_parallel_computations_agree():
    R = PolynomialRing(GF(5), ["x", "y", "z"])
    rnd = random.Random(5)
    I = random_zero_dim_ideal(R, rnd)
    expected = I.groebner()
    results = []

    def work():
        results.append(Ideal(R, list(I.generators)).groebner())

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(G == expected for G in results)


def test_dump_format_is_stable():
    R = PolynomialRing(GF(3), ["x", "y"], "lex")
    G = ideal(R, "x^2 - y", "x*y - 1").groebner()
    text = dump(G)
    lines = text.splitlines()
    assert lines[0] == "lex"
    assert lines[1:] == [str(g) for g in G.basis]
    assert [parse_polynomial(R, ln) for ln in lines[1:]] == list(G.basis)
    assert dump(ideal(R, "x*y - 1", "x^2 - y").groebner()) == text


# -- elimination ---------------------------------------------------------------------


def test_twisted_cubic_elimination():
    R = PolynomialRing(GF(7), ["t", "x", "y"])
    E = eliminate(ideal(R, "x - t^2", "y - t^3"), ["t"])
    S = E.ring
    assert same_ideal(E, ideal(S, "x^3 - y^2"))


def test_eliminate_nothing_keeps_normal_forms():
    R = PolynomialRing(GF(5), ["x", "y"])
    I = ideal(R, "x^2 - y", "x*y - 2")
    E = eliminate(I, [])
    assert same_ideal(Ideal(R, [g.in_ring(R) for g in E.generators]), I)


def test_eliminate_to_y():
    R = PolynomialRing(GF(5), ["t", "x", "y"])
    E = eliminate(ideal(R, "t*x - 1", "t*y"), ["t"])
    assert same_ideal(E, ideal(E.ring, "y"))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_eliminate_members_are_free_of_dropped_variables(seed):
    rnd = random.Random(seed)
    R = PolynomialRing(GF(3), ["t", "x", "y"])
    I = random_zero_dim_ideal(R, rnd)
    E = eliminate(I, ["t"])
    G = I.groebner()
    for g in E.generators:
        lifted = g.in_ring(R)
        assert all(R.exponents(m)[0] == 0 for m in lifted.terms)
        assert G.contains(lifted)


# -- quotients and saturation --------------------------------------------------------


def test_monomial_quotient_and_saturation():
    R = PolynomialRing(GF(3), ["x", "y"])
    I = ideal(R, "x^2*y")
    x = R.gen(0)
    assert same_ideal(ideal_quotient(I, x), ideal(R, "x*y"))
    assert same_ideal(saturation(I, x), ideal(R, "y"))
    J, k = saturate(I, x)
    assert k == 2 and same_ideal(J, ideal(R, "y"))
    assert same_ideal(saturate(I, R.one())[0], I)
    with pytest.raises(ValueError):
        ideal_quotient(I, R.zero())


def test_quotient_chain_x3_xy():
    R = PolynomialRing(GF(3), ["x", "y"])
    I = ideal(R, "x^3", "x*y")
    x = R.gen(0)
    Q = ideal_quotient(I, x)
    assert same_ideal(Q, ideal(R, "x^2", "y"))
    for g in Q.groebner():
        assert I.contains(g * x)
    J, k = saturate(I, x)
    assert J.is_unit() and k == 3


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_quotient_times_f_lies_in_ideal(seed):
    rnd = random.Random(seed)
    R = PolynomialRing(GF(5), ["x", "y"])
    I = random_zero_dim_ideal(R, rnd, max_degree=3)
    f = random_polynomial(R, rnd, 2)
    if f.is_zero():
        return
    Q = ideal_quotient(I, f)
    G = I.groebner()
    for g in Q.groebner():
        assert G.contains(g * f)


def test_intersection():
    R = PolynomialRing(GF(5), ["x", "y"])
    J = intersect(ideal(R, "x"), ideal(R, "y"))
    assert same_ideal(J, ideal(R, "x*y"))


# -- zero-dimensionality and staircases ----------------------------------------------


def test_staircases():
    R = PolynomialRing(GF(3), ["x", "y"])
    G = ideal(R, "x^2", "y^3").groebner()
    assert is_zero_dimensional(G) and G.degree() == 6
    R2 = PolynomialRing(GF(5), ["x", "y"], "lex")
    G2 = ideal(R2, "x^2 - y", "y^2 - 1").groebner()
    assert sorted(R2.exponents(m) for m in quotient_basis(G2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    G3 = ideal(R, "x").groebner()
    assert not is_zero_dimensional(G3)
    with pytest.raises(ValueError):
        quotient_basis(G3)
