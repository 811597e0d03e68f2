import random
from itertools import combinations
from math import comb, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charpenum.formulas import (
    CONSTANTS,
    CountPrediction,
    central_binomial,
    central_binomial_congruence,
    congruence_sweep,
    dejonquieres,
    elementary_symmetric,
    even_theta_characteristics,
    factorial,
    permutation_sum,
    plucker_counts,
    primes_below,
    stabilizer_order,
    steiner_identity,
    theta_counts,
)


def sigma_by_subsets(values, h):
    return sum(prod(c) for c in combinations(values, h))


# -- symmetric functions -------------------------------------------------------------


def test_sigma_examples():
    assert elementary_symmetric([4, 5, 6], 0) == 1
    assert elementary_symmetric([], 0) == 1
    assert elementary_symmetric([1, 2, 3], 2) == 11
    assert elementary_symmetric([1, 2, 3], 3) == 6
    for h in (-1, 4):
        with pytest.raises(ValueError):
            elementary_symmetric([1, 2, 3], h)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-50, 50), max_size=7))
def test_sigma_matches_product_expansion(values):
    # prod(1 + v z) expanded directly, coefficient of z^h
    coeffs = [1]
    for v in values:
        coeffs = [a + v * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    for h in range(len(values) + 1):
        assert elementary_symmetric(values, h) == coeffs[h] == sigma_by_subsets(values, h)


@pytest.mark.parametrize("t", range(1, 7))
def test_permutation_sum_identity(t):
    rnd = random.Random(t)
    m = [rnd.randint(1, 5) for _ in range(t)]
    for h in range(t + 1):
        shifted = [x - 1 for x in m]
        assert permutation_sum(m, h) == factorial(t - h) * factorial(h) * elementary_symmetric(shifted, h)


def test_factorial_and_stabilizer():
    assert [factorial(n) for n in range(6)] == [1, 1, 2, 6, 24, 120]
    assert factorial(2000) == prod(range(1, 2001))
    with pytest.raises(ValueError):
        factorial(-1)
    assert stabilizer_order((2, 2, 3)) == 2
    assert stabilizer_order((1, 1, 1, 4, 4)) == 12


# -- de Jonquieres -------------------------------------------------------------------


def test_bitangent_count():
    J = dejonquieres(3, 0, (2, 2))
    assert (J.value, J.stab, J.unordered, J.divisible) == (56, 2, 28, True)
    assert J.to_dict()["m"] == [2, 2]


def test_all_ones_counts_ordered_point_tuples():
    # with m = (1, ..., 1) only h = 0 survives: C(t + v, v) * t!
    for t in range(1, 5):
        for v in range(4):
            assert dejonquieres(5, v, (1,) * t).value == comb(t + v, v) * factorial(t)


@pytest.mark.parametrize("g,v,m", [(-1, 0, (2,)), (0, -1, (2,)), (3, 0, ()), (3, 0, (0, 2))])
def test_dejonquieres_rejects_bad_input(g, v, m):
    with pytest.raises(ValueError):
        dejonquieres(g, v, m)


def _direct_value(g, v, m):
    t = len(m)
    s = 0
    for h in range(t + 1):
        s += comb(t + v - h, v) * comb(g, h) * permutation_sum(m, h)
    return prod(m) * s


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 8), st.integers(0, 5), st.lists(st.integers(1, 5), min_size=1, max_size=5))
def test_dejonquieres_integral_and_divisible(g, v, m):
    J = dejonquieres(g, v, m)
    assert J.value == _direct_value(g, v, m)
    assert J.value % J.stab == 0
    assert J.unordered % prod(m) == 0 and J.divisible


# -- predictions ---------------------------------------------------------------------


@pytest.mark.parametrize("d,p,expected", [
    (3, 0, (9, 1, 9)),
    (3, 7, (9, 1, 9)),
    (3, 3, (3, 3, 9)),
    (4, 3, (8, 3, 24)),
    (4, 5, (24, 1, 24)),
])
def test_plucker_counts(d, p, expected):
    c = plucker_counts(d, p)
    assert (c.points, c.multiplicity, c.total) == expected


def test_theta_counts():
    c = theta_counts(3, 2)
    assert (c.points, c.multiplicity, c.total) == (7, 4, 28)
    c = theta_counts(3, 7)
    assert (c.points, c.multiplicity, c.total) == (28, 1, 28)
    assert theta_counts(4, 2).total == theta_counts(4, 0).total == 120
    assert even_theta_characteristics(3) == 36
    with pytest.raises(ValueError):
        theta_counts(2, 5)
    with pytest.raises(ValueError):
        plucker_counts(1, 5)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.integers(3, 12), st.sampled_from([0, 2, 3, 5, 7]))
def test_predictions_conserve_degree(d, g, p):
    for c in (plucker_counts(d, p), theta_counts(g, p)):
        assert c.points * c.multiplicity == c.total


def test_prediction_rejects_inconsistent_totals():
    with pytest.raises(ValueError):
        CountPrediction("inflection", 3, 3, 3, 10)


# -- congruences ---------------------------------------------------------------------


def test_central_binomial_examples():
    assert [central_binomial(n) for n in range(6)] == [1, 2, 6, 20, 70, 252]
    assert central_binomial(9973) == comb(2 * 9973, 9973)
    assert central_binomial_congruence(2) == (2, 6)
    assert central_binomial_congruence(3) == (2, 20)
    assert central_binomial_congruence(5) == (2 % 25, 2)
    with pytest.raises(ValueError):
        central_binomial_congruence(9)


def test_congruence_sweep_small():
    res = congruence_sweep(200)
    assert res["ok"] and res["expected_mod_p3_failures"] == [2, 3]
    assert res["mod_p2_failures"] == [] and res["mod_p3_failures"] == []
    assert res["primes_checked"] == len(primes_below(200)) == 46


def test_primes_below():
    assert primes_below(2) == []
    assert primes_below(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_below(10_000)) == 1229


def test_steiner_constants():
    assert steiner_identity()
    assert CONSTANTS == {"steiner_conics": 3264, "steiner_conics_char2": 51}
