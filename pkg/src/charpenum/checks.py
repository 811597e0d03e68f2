"""Desk-scale checks behind ``charpenum verify-paper``.

Each check takes ``(seed, limits, max_attempts)`` and returns a row with the
expected and observed values, a status and a one-line summary.  Rows hold no
timings so that reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import random

from .enumgeo import (
    PlaneCurve,
    fiber_linearity_check,
    gamma_dual_length,
    gamma_length,
    general_quartic,
    inflection_flag_scheme,
    inflection_scheme,
    inflection_verdict,
    random_flag,
    random_smooth_curve,
    sample_inflection_curve,
    simple_tangents,
    theta_scheme_quartic,
    theta_verdict,
    verified_bitangents,
)
from .ff import GF
from .formulas import congruence_sweep, dejonquieres, plucker_counts, theta_counts
from .groebner import Ideal, check_groebner, normal_form
from .poly import Polynomial, PolynomialRing, all_monomials_up_to
from .zerodim import (
    brute_force_points,
    factor_univariate,
    local_multiplicity,
    macaulay_local_length,
    solve_points,
    translate,
)

EXAMPLE_CURVE = "x0*x1*x2 + (x0 - x1)^3"
EXAMPLE_FLAGS = [
    (["1", "1", "0"], ["0", "0", "1"]),
    (["0", "0", "1"], ["1", "0", "0"]),
    (["0", "0", "1"], ["0", "1", "0"]),
]
EXAMPLE_TANGENT_DIMS = [1, 2, 2]


def example_curve() -> PlaneCurve:
    return PlaneCurve.parse(GF(3), EXAMPLE_CURVE)


def _row(name, expected, observed, ok, summary, **extra):
    row = {"check": name, "expected": expected, "observed": observed,
           "status": "PASS" if ok else "FAIL", "summary": summary}
    row.update(extra)
    return row


def _flag_key(P):
    return (P.extra["point"], P.extra["line"])


def check_flag_example(seed, limits, max_attempts):
    flags = inflection_flag_scheme(example_curve(), limits, seed)
    observed = sorted([list(_flag_key(P)), P.multiplicity, P.residue_degree] for P in flags.points)
    expected = sorted([list(f), 3, 1] for f in EXAMPLE_FLAGS)
    ok = observed == expected and flags.total_degree == 9
    return _row("flag-scheme-example", {"flags": expected, "total_degree": 9},
                {"flags": observed, "total_degree": flags.total_degree}, ok,
                f"{flags.radical_degree} flags of lengths {sorted(flags.multiplicities())}, total {flags.total_degree}")


def check_flag_tangent_dims(seed, limits, max_attempts):
    C = example_curve()
    flags = inflection_flag_scheme(C, limits, seed)
    by_key = {tuple(map(tuple, _flag_key(P))): P for P in flags.points}
    dims = []
    for f in EXAMPLE_FLAGS:
        P = by_key.get(tuple(map(tuple, f)))
        dims.append(P.extra["tangent_dimension"] if P else None)
    points = inflection_scheme(C, limits, seed, flags)
    at_point = {tuple(P.formatted(P.projective[0])): P.extra["tangent_dimension"] for P in points.points}
    point_dims = [at_point.get(tuple(f[0])) for f in EXAMPLE_FLAGS]
    return _row("flag-scheme-example-tangent-dims", EXAMPLE_TANGENT_DIMS, dims, dims == EXAMPLE_TANGENT_DIMS,
                f"flag charts give {dims}; point-factor charts give {point_dims}",
                point_factor_tangent_dims=point_dims)


def _inflection_rows(fields, seed, limits, max_attempts):
    rows, ok = [], True
    for lit, d in fields:
        K = _field(lit)
        C, flags = sample_inflection_curve(d, K, seed, max_attempts, limits)
        points = inflection_scheme(C, limits, seed, flags)
        pred = plucker_counts(d, K.p)
        good = inflection_verdict(flags, pred) == "PASS" and points.radical_degree == flags.radical_degree
        ok &= good
        rows.append({"field": lit, "degree": d, "curve": str(C.F), "attempts": C.meta["attempts"],
                     "predicted": [pred.points, pred.multiplicity],
                     "flags": [flags.radical_degree, sorted(set(flags.multiplicities()))],
                     "points": points.radical_degree, "total_degree": flags.total_degree})
    return rows, ok


def _field(lit):
    from .ff import parse_field

    return parse_field(lit)


def _inflection_summary(rows):
    return "; ".join(f"{r['field']} d={r['degree']}: {r['flags'][0]} x {r['flags'][1]}" for r in rows)


def check_inflection_not3(seed, limits, max_attempts):
    cases = [("GF(7)", 3), ("GF(7)", 4), ("GF(5^2)", 3), ("GF(5^2)", 4)]
    rows, ok = _inflection_rows(cases, seed, limits, max_attempts)
    expected = [[3 * d * (d - 2), [1]] for _, d in cases]
    return _row("inflection-char-not-3", expected, rows, ok, _inflection_summary(rows))


def check_inflection_3(seed, limits, max_attempts):
    cases = [("GF(3^3)", 3), ("GF(3^3)", 4)]
    rows, ok = _inflection_rows(cases, seed, limits, max_attempts)
    expected = [[d * (d - 2), [3]] for _, d in cases]
    return _row("inflection-char-3", expected, rows, ok, _inflection_summary(rows))


def check_fiber_linearity(seed, limits, max_attempts):
    rng = random.Random(seed)
    ranks = {}
    linear = True
    for p in (5, 7):
        K = GF(p)
        for d in (2, 3, 4, 5):
            seen = set()
            for _ in range(100):
                lin, r = fiber_linearity_check(random_flag(K, rng), d, rng)
                linear &= lin
                seen.add(r)
            ranks[f"GF({p}) d={d}"] = sorted(seen)
    ok = linear and all(v == [3] for v in ranks.values())
    return _row("fiber-linearity", 3, ranks, ok, f"800 flags, ranks {sorted({r for v in ranks.values() for r in v})}")


def check_gamma_length(seed, limits, max_attempts):
    cases = [("GF(5)", 3, 1), ("GF(7)", 4, 1), ("GF(2)", 3, 2), ("GF(2^2)", 3, 2)]
    rows, ok = [], True
    for lit, d, want in cases:
        K = _field(lit)
        C = random_smooth_curve(d, K, seed, lambda C, K=K: bool(simple_tangents(C, K, 1, limits)),
                                max_attempts, limits)
        lengths = [gamma_length(C, p, H, K, limits) for p, H in simple_tangents(C, K, 3, limits)]
        ok &= bool(lengths) and all(x == want for x in lengths)
        rows.append({"field": lit, "degree": d, "curve": str(C.F), "expected": want, "lengths": lengths})
    summary = "; ".join(f"{r['field']} d={r['degree']}: {r['lengths']}" for r in rows)
    return _row("gamma-length", [c[2] for c in cases], rows, ok, summary)


def check_gamma_dual_length(seed, limits, max_attempts):
    K = GF(2, 3)
    C = random_smooth_curve(4, K, seed, lambda C: bool(verified_bitangents(C, K, seed, limits)),
                            max_attempts, limits)
    lengths = []
    for H, pts, M, HM in verified_bitangents(C, K, seed, limits):
        lengths.append([gamma_dual_length(C, order, HM, M, limits) for order in (pts, pts[::-1])])
    ok = bool(lengths) and all(x == 4 for pair in lengths for x in pair)
    return _row("gamma-dual-length", 4, {"curve": str(C.F), "lengths": lengths}, ok,
                f"GF(2^3) quartic, bitangent fiber lengths {lengths}")


def _theta(lit, seed, limits, max_attempts):
    K = _field(lit)
    C = random_smooth_curve(4, K, seed, lambda C: general_quartic(C, limits), max_attempts, limits)
    rep = theta_scheme_quartic(C, limits, seed)
    pred = theta_counts(3, K.p)
    observed = {"curve": str(C.F), "attempts": C.meta["attempts"], "lines": rep.radical_degree,
                "total_degree": rep.total_degree, "multiplicities": sorted(set(rep.multiplicities())),
                "image_degree": rep.notes["image_degree"], "ordered_pairs": rep.notes["preimage_degree"]}
    expected = {"lines": pred.points, "total_degree": pred.total, "multiplicities": [pred.multiplicity]}
    ok = theta_verdict(rep, pred) == "PASS"
    return expected, observed, ok


def check_theta_char2(seed, limits, max_attempts):
    exp, obs, ok = _theta("GF(2^3)", seed, limits, max_attempts)
    return _row("theta-char-2", exp, obs, ok,
                f"GF(2^3): {obs['lines']} lines x {obs['multiplicities']} = {obs['total_degree']}")


def check_theta_not2(seed, limits, max_attempts):
    exp, obs, ok = _theta("GF(7)", seed, limits, max_attempts)
    return _row("theta-char-not-2", exp, obs, ok,
                f"GF(7): {obs['lines']} lines x {obs['multiplicities']} = {obs['total_degree']}")


def check_dejonquieres(seed, limits, max_attempts):
    J = dejonquieres(3, 0, (2, 2))
    rng = random.Random(seed)
    bad = []
    for _ in range(500):
        g, v = rng.randint(0, 8), rng.randint(0, 5)
        m = [rng.randint(1, 5) for _ in range(rng.randint(1, 5))]
        res = dejonquieres(g, v, m)
        if res.unordered * res.stab != res.value or not res.divisible:
            bad.append([g, v, m])
    ok = J.value == 56 and J.unordered == 28 and J.divisible and not bad
    return _row("dejonquieres", {"J(3,0,(2,2))": 56, "unordered": 28, "sweep_failures": []},
                {"J(3,0,(2,2))": J.value, "unordered": J.unordered, "sweep_failures": bad}, ok,
                f"J(3,0,(2,2)) = {J.value}; 500 random instances, {len(bad)} failures")


def check_congruences(seed, limits, max_attempts):
    res = congruence_sweep(10_000)
    ok = res["ok"] and res["expected_mod_p3_failures"] == [2, 3]
    return _row("binomial-congruences", {"mod_p2_failures": [], "mod_p3_failures": [],
                                         "expected_mod_p3_failures": [2, 3]}, res, ok,
                f"{res['primes_checked']} primes below 10^4; expected mod p^3 failures at "
                f"{res['expected_mod_p3_failures']}")


# -- engine self-checks ------------------------------------------------------------------


def random_zero_dim_ideal(R: PolynomialRing, rng: random.Random, max_degree: int = 2,
                          extra: int = 1) -> Ideal:
    """Generators ``x_i^d_i + (lower degree terms)``, plus ``extra`` random polynomials.

    The pure powers lead in any degree-compatible order, so the ideal is zero-dimensional.
    """
    K = R.field
    gens = []
    for i in range(R.n):
        d = rng.randint(1, max_degree)
        terms = {R.monomial(e): K.random_element(rng) for e in all_monomials_up_to(R.n, d - 1)}
        terms = {m: c for m, c in terms.items() if c}
        e = [0] * R.n
        e[i] = d
        terms[R.monomial(e)] = 1
        gens.append(Polynomial(R, terms))
    for _ in range(extra):
        terms = {R.monomial(e): K.random_element(rng) for e in all_monomials_up_to(R.n, max_degree)}
        gens.append(Polynomial(R, {m: c for m, c in terms.items() if c}))
    return Ideal(R, gens)


def random_polynomial(R: PolynomialRing, rng: random.Random, degree: int) -> Polynomial:
    K = R.field
    terms = {R.monomial(e): K.random_element(rng) for e in all_monomials_up_to(R.n, degree)}
    return Polynomial(R, {m: c for m, c in terms.items() if c})


def engine_checks(seed: int, ideals: int = 10, polys: int = 10, limits=None) -> dict:
    """Groebner closure, normal forms, factorization and the two multiplicity/point oracles."""
    rng = random.Random(seed)
    out = {"closure": 0, "normal_form": 0, "factor": 0, "macaulay": 0, "brute_force": 0, "failures": []}
    fields = [GF(2), GF(3), GF(3, 2), GF(5)]
    for k in range(ideals):
        K = fields[k % len(fields)]
        R = PolynomialRing(K, ["x", "y", "z"][: 1 + k % 3])
        I = random_zero_dim_ideal(R, rng)
        G = I.groebner(limits=limits)
        if check_groebner(G):
            out["closure"] += 1
        else:
            out["failures"].append(["closure", k])
        f = random_polynomial(R, rng, 3)
        r = normal_form(f, G)
        if normal_form(r, G) == r and G.contains(f - r):
            out["normal_form"] += 1
        else:
            out["failures"].append(["normal_form", k])
        rational = brute_force_points(I)
        pts = solve_points(I, limits, seed=seed)
        found = sorted(tuple(P.coords) for P in pts if P.residue_degree == 1)
        total = sum(P.residue_degree * local_multiplicity(I, P.coords, P.field, limits) for P in pts)
        if found == sorted(rational) and total == G.degree():
            out["brute_force"] += 1
        else:
            out["failures"].append(["brute_force", k])
        agree = True
        for pt in rational:
            m = local_multiplicity(I, pt, K, limits)
            agree &= macaulay_local_length(translate(I, pt, K), G.degree() + 1) == m
        if agree:
            out["macaulay"] += 1
        else:
            out["failures"].append(["macaulay", k])
    for k in range(polys):
        K = [GF(2), GF(3), GF(3, 2)][k % 3]
        R = PolynomialRing(K, ["x"])
        f = Polynomial(R, {R.monomial((rng.randint(2, 12),)): 1}) + random_polynomial(R, rng, 1)
        factors = factor_univariate(f, seed)
        prod = R.one()
        for g, e in factors:
            prod = prod * g ** e
        if prod == f.monic():
            out["factor"] += 1
        else:
            out["failures"].append(["factor", k])
    return out


def check_engine(seed, limits, max_attempts):
    res = engine_checks(seed, limits=limits)
    ok = not res["failures"]
    return _row("engine-self-checks", {"failures": []}, res, ok,
                f"closure {res['closure']}, normal form {res['normal_form']}, factor {res['factor']}, "
                f"Macaulay {res['macaulay']}, brute force {res['brute_force']}")


CHECKS = {
    "flag-scheme-example": (check_flag_example, "three inflection flags of length 3 on x0x1x2 + (x0-x1)^3 over GF(3)"),
    "flag-scheme-example-tangent-dims": (check_flag_tangent_dims, "tangent dimensions 1, 2, 2 at those flags"),
    "inflection-char-not-3": (check_inflection_not3, "3d(d-2) reduced inflection points, d = 3, 4, GF(7) and GF(5^2)"),
    "inflection-char-3": (check_inflection_3, "d(d-2) inflection points of length 3 over GF(3^3)"),
    "fiber-linearity": (check_fiber_linearity, "flag conditions are linear of rank 3"),
    "gamma-length": (check_gamma_length, "tangent fiber length 1 off char 2, 2 in char 2"),
    "gamma-dual-length": (check_gamma_dual_length, "fiber length 4 at a bitangent in char 2"),
    "theta-char-2": (check_theta_char2, "7 bitangents of multiplicity 4 over GF(2^3)"),
    "theta-char-not-2": (check_theta_not2, "28 reduced bitangents over GF(7)"),
    "dejonquieres": (check_dejonquieres, "J(3,0,(2,2)) = 56 and divisibility sweep"),
    "binomial-congruences": (check_congruences, "C(2p,p) = 2 mod p^2, and mod p^3 for p >= 5"),
    "engine-self-checks": (check_engine, "Groebner, normal form, factorization and oracle agreement"),
}


def run_checks(names, seed, limits, max_attempts) -> list[dict]:
    """Run checks in the order of ``CHECKS``; output is independent of how names were given."""
    wanted = set(names)
    return [CHECKS[n][0](seed, limits, max_attempts) for n in CHECKS if n in wanted]
