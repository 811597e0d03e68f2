"""Closed-form counts and congruences, in exact integer arithmetic."""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass
from functools import lru_cache
from math import comb, prod

from .ff import is_prime

STEINER_CONICS = 3264
STEINER_CONICS_CHAR2 = 51


@dataclass(frozen=True)
class CountPrediction:
    problem: str
    characteristic: int
    points: int
    multiplicity: int
    total: int

    def __post_init__(self):
        if self.points * self.multiplicity != self.total:
            raise ValueError("points * multiplicity must equal the total")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Jonquieres:
    g: int
    v: int
    m: tuple
    value: int
    stab: int
    unordered: int
    divisible: bool

    def to_dict(self):
        d = asdict(self)
        d["m"] = list(self.m)
        return d


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    # memoized prefix products; iterative to stay clear of the recursion limit
    if n < 0:
        raise ValueError("factorial of a negative number")
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def elementary_symmetric(values, h: int) -> int:
    """``sigma_h`` of ``values`` from the expansion of ``prod(1 + v z)``."""
    values = list(values)
    if h < 0 or h > len(values):
        raise ValueError(f"h must lie in [0, {len(values)}]")
    e = [1] + [0] * len(values)
    for k, v in enumerate(values, start=1):
        for j in range(k, 0, -1):
            e[j] += v * e[j - 1]
    return e[h]


def stabilizer_order(m) -> int:
    """Size of the subgroup of permutations fixing the tuple ``m``."""
    return prod(factorial(c) for c in Counter(m).values())


def dejonquieres(g: int, v: int, m) -> Jonquieres:
    """Expected number of hyperplanes with contact orders ``m`` at ordered points.

    Also returns the unordered count ``J / #Stab(m)`` and whether it is
    divisible by ``prod(m)``.
    """
    m = tuple(int(x) for x in m)
    if g < 0 or v < 0:
        raise ValueError("g and v must be non-negative")
    if not m or any(x < 1 for x in m):
        raise ValueError("m must be a non-empty tuple of positive integers")
    t = len(m)
    shifted = [x - 1 for x in m]
    total = 0
    for h in range(t + 1):
        total += comb(t + v - h, v) * comb(g, h) * factorial(t - h) * factorial(h) * elementary_symmetric(shifted, h)
    P = prod(m)
    value = P * total
    stab = stabilizer_order(m)
    if value % stab:
        raise AssertionError("J is not divisible by the stabilizer order")
    unordered = value // stab
    return Jonquieres(g, v, m, value, stab, unordered, unordered % P == 0)


def permutation_sum(m, h: int) -> int:
    """Sum over all orderings of ``prod_{i < h} (m_{tau(i)} - 1)``, by brute force.

    Equals ``(t-h)! h! sigma_h(m - 1)``; kept as an independent check.
    """
    from itertools import permutations

    shifted = [x - 1 for x in m]
    return sum(prod(shifted[perm[i]] for i in range(h)) for perm in permutations(range(len(m))))


def plucker_counts(d: int, characteristic: int) -> CountPrediction:
    """Inflection points of a general plane curve of degree ``d``."""
    if d < 2:
        raise ValueError("need d >= 2")
    total = 3 * d * (d - 2)
    if characteristic == 3:
        return CountPrediction("inflection", characteristic, d * (d - 2), 3, total)
    return CountPrediction("inflection", characteristic, total, 1, total)


def theta_counts(g: int, characteristic: int) -> CountPrediction:
    """Theta-hyperplanes of a general canonical curve of genus ``g``."""
    if g < 3:
        raise ValueError("need g >= 3")
    total = 2 ** (g - 1) * (2 ** g - 1)
    if characteristic == 2:
        return CountPrediction("theta", characteristic, 2 ** g - 1, 2 ** (g - 1), total)
    return CountPrediction("theta", characteristic, total, 1, total)


def even_theta_characteristics(g: int) -> int:
    return 2 ** (g - 1) * (2 ** g + 1)


_CENTRAL = [1]


def central_binomial(n: int) -> int:
    """``C(2n, n)``, extending a cached table with ``C(2k,k) = C(2k-2,k-1) * 2(2k-1) / k``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    while len(_CENTRAL) <= n:
        k = len(_CENTRAL)
        _CENTRAL.append(_CENTRAL[-1] * 2 * (2 * k - 1) // k)
    return _CENTRAL[n]


def central_binomial_congruence(p: int) -> tuple[int, int]:
    """Residues of ``C(2p, p)`` modulo ``p^2`` and ``p^3``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = central_binomial(p)
    return n % (p * p), n % (p ** 3)


def primes_below(n: int) -> list[int]:
    if n < 3:
        return []
    sieve = bytearray([1]) * n
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n, i)))
    return [i for i in range(n) if sieve[i]]


def congruence_sweep(max_prime: int) -> dict:
    """Check ``C(2p,p) = 2`` mod ``p^2`` for all primes and mod ``p^3`` from 5 on.

    Failures mod ``p^3`` at ``p = 2, 3`` are expected and listed separately.
    """
    mod2_fail, mod3_fail, expected = [], [], []
    primes = primes_below(max_prime)
    for p in primes:
        r2, r3 = central_binomial_congruence(p)
        if r2 != 2 % (p * p):
            mod2_fail.append(p)
        if r3 != 2 % (p ** 3):
            (expected if p in (2, 3) else mod3_fail).append(p)
    return {
        "max_prime": max_prime,
        "primes_checked": len(primes),
        "mod_p2_failures": mod2_fail,
        "mod_p3_failures": mod3_fail,
        "expected_mod_p3_failures": expected,
        "ok": not mod2_fail and not mod3_fail,
    }


def steiner_identity() -> bool:
    """``3264 = 2 * 2^5 * 51``: the char-0 and char-2 conic counts differ by ``2^6``."""
    return STEINER_CONICS == 2 * 2 ** 5 * STEINER_CONICS_CHAR2


CONSTANTS = {"steiner_conics": STEINER_CONICS, "steiner_conics_char2": STEINER_CONICS_CHAR2}
