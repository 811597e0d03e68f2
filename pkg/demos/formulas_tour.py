"""Closed-form counts: de Jonquieres numbers, predictions and the C(2p,p) congruences."""

from charpenum.formulas import (
    central_binomial_congruence,
    congruence_sweep,
    dejonquieres,
    plucker_counts,
    steiner_identity,
    theta_counts,
)

J = dejonquieres(3, 0, (2, 2))
print(f"J(3,0,(2,2)) = {J.value}, unordered {J.unordered}, divisible by 4: {J.divisible}")
for g, v, m in [(2, 1, (3,)), (4, 1, (2, 2, 2)), (5, 2, (1, 3, 3))]:
    J = dejonquieres(g, v, m)
    print(f"J({g},{v},{m}) = {J.value}  unordered {J.unordered}")

for p in (0, 3):
    c = plucker_counts(4, p)
    print(f"quartic flexes, char {p}: {c.points} x {c.multiplicity}")
for p in (0, 2):
    c = theta_counts(3, p)
    print(f"quartic bitangents, char {p}: {c.points} x {c.multiplicity}")

for p in (2, 3, 5, 7):
    print(f"C({2 * p},{p}) mod p^2, p^3: {central_binomial_congruence(p)}")
res = congruence_sweep(10_000)
print(f"{res['primes_checked']} primes below 10^4, ok: {res['ok']}, expected mod p^3 failures {res['expected_mod_p3_failures']}")
print(f"3264 = 2 * 2^5 * 51: {steiner_identity()}")
