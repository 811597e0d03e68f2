"""Zero-dimensional ideals: radicals, points over splitting fields, local lengths.

Points are always made rational by explicit extension of the base field
before their multiplicity is measured; nothing is inferred from degree
ratios.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from dataclasses import field as dc_field
from typing import Callable

from . import upoly
from .ff import FiniteField, embedding, extension
from .groebner import Ideal, Limits, ResourceLimitError, is_zero_dimensional, quotient_basis
from .poly import Polynomial, PolynomialRing, all_monomials_up_to, monomials_of_degree, nullspace, rank

MAX_FIELD_DEGREE = 24
MAX_LOCAL_N = 64


class NotZeroDimensional(ValueError):
    """The ideal has positive-dimensional components."""


class PointNotOnScheme(ValueError):
    pass


class ChartInconsistency(AssertionError):
    """Two charts disagree about a point they share."""


# -- univariate helpers ------------------------------------------------------------------


def _as_upoly(f: Polynomial) -> tuple[list[int], int]:
    vs = f.variables()
    if len(vs) > 1:
        raise ValueError("polynomial is not univariate")
    R = f.ring
    i = vs.pop() if vs else 0
    coeffs = [0] * (max(f.degree_in(i), 0) + 1)
    for m, c in f.terms.items():
        coeffs[R.exponents(m)[i]] = c
    return upoly.trim(coeffs), i


def _from_upoly(ring: PolynomialRing, coeffs, i: int) -> Polynomial:
    out = {}
    for e, c in enumerate(coeffs):
        if c:
            ex = [0] * ring.n
            ex[i] = e
            out[ring.monomial(ex)] = c
    return Polynomial(ring, out)


def squarefree_decomposition_charp(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Monic pairwise-coprime squarefree factors with exponents; ``f = lc * prod g^e``."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    coeffs, i = _as_upoly(f)
    F = f.ring.field
    return [(_from_upoly(f.ring, g, i), e) for g, e in upoly.squarefree_decomposition(F, coeffs)]


def factor_univariate(f: Polynomial, seed: int = 0) -> list[tuple[Polynomial, int]]:
    """Irreducible monic factors with exponents (Cantor-Zassenhaus; deterministic per seed)."""
    if f.is_zero() or f.total_degree() < 1:
        raise ValueError("need a non-constant polynomial")
    coeffs, i = _as_upoly(f)
    F = f.ring.field
    return [(_from_upoly(f.ring, g, i), e) for g, e in upoly.factor(F, coeffs, seed)]


def squarefree_part(F: FiniteField, coeffs) -> list[int]:
    out = [1]
    for g, _ in upoly.squarefree_decomposition(F, coeffs):
        out = upoly.mul(F, out, g)
    return out


# -- linear algebra on the quotient ------------------------------------------------------


def minimal_polynomial(I: Ideal, var: int, limits: Limits | None = None) -> list[int]:
    """Monic minimal polynomial of ``x_var`` in ``k[x]/I`` (dense, constant first)."""
    G = I.groebner(limits=limits)
    if not is_zero_dimensional(G):
        raise NotZeroDimensional("minimal polynomial needs a zero-dimensional ideal")
    if G.is_unit():
        return [1]
    R = G.ring
    F = R.field
    stair = quotient_basis(G)
    index = {m: j for j, m in enumerate(stair)}
    x = R.gen(var)
    vecs = []
    power = R.one()
    while True:
        nf = G.normal_form(power)
        v = [0] * len(stair)
        for m, c in nf.terms.items():
            v[index[m]] = c
        vecs.append(v)
        # columns are powers; look for a kernel vector
        cols = len(vecs)
        rows = [[vecs[j][i] for j in range(cols)] for i in range(len(stair))]
        ker = nullspace(F, rows, cols)
        if ker:
            k = ker[0]
            # the kernel of the first dependent set is one-dimensional with top entry nonzero
            return upoly.monic(F, upoly.trim(k))
        power = nf * x


def radical_zero_dim(I: Ideal, limits: Limits | None = None) -> Ideal:
    """Seidenberg radical: adjoin the squarefree part of each variable's minimal polynomial."""
    G = I.groebner(limits=limits)
    if not is_zero_dimensional(G):
        raise NotZeroDimensional("radical_zero_dim needs a zero-dimensional ideal")
    R = I.ring
    if G.is_unit():
        return Ideal(R, [R.one()])
    extra = []
    for i in range(R.n):
        mp = minimal_polynomial(I, i, limits)
        extra.append(_from_upoly(R, squarefree_part(R.field, mp), i))
    return Ideal(R, list(G.basis) + extra)


class _Echelon:
    """Incremental row echelon form that remembers how each row was built."""

    def __init__(self, F: FiniteField):
        self.F = F
        self.rows = []  # (pivot, vector, combination dict)

    def add(self, vec, tag):
        """Insert ``vec``; return ``None`` if independent, else ``{tag: c}`` with sum c*vec = 0."""
        F = self.F
        v = list(vec)
        combo = {tag: 1}
        for piv, row, rc in self.rows:
            c = v[piv]
            if c:
                for i, x in enumerate(row):
                    if x:
                        v[i] = F.sub(v[i], F.mul(c, x))
                for t, x in rc.items():
                    combo[t] = F.sub(combo.get(t, 0), F.mul(c, x))
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return {t: x for t, x in combo.items() if x}
        inv = F.inv(v[piv])
        self.rows.append((piv, [F.mul(inv, x) for x in v], {t: F.mul(inv, x) for t, x in combo.items()}))
        return None


def _coordinates(G, f: Polynomial, index: dict) -> list[int]:
    v = [0] * len(index)
    for m, c in G.normal_form(f).terms.items():
        v[index[m]] = c
    return v


def _zero_dim_basis(I: Ideal, limits, what: str):
    G = I.groebner(limits=limits)
    if not is_zero_dimensional(G):
        raise NotZeroDimensional(f"{what} needs a zero-dimensional ideal")
    stair = quotient_basis(G)
    return G, stair, {m: j for j, m in enumerate(stair)}


def multiplication_matrix(I: Ideal, f: Polynomial, limits: Limits | None = None) -> list[list[int]]:
    """Matrix of multiplication by ``f`` on the staircase basis of ``k[x]/I`` (row i, column j)."""
    G, stair, index = _zero_dim_basis(I, limits, "multiplication_matrix")
    cols = [_coordinates(G, f.mul_monomial(m), index) for m in stair]
    return [[cols[j][i] for j in range(len(stair))] for i in range(len(stair))]


def saturate_zero_dim(I: Ideal, f: Polynomial, limits: Limits | None = None) -> Ideal:
    """``I : f^inf`` for zero-dimensional ``I``, by linear algebra on the quotient.

    The classes killed by a power of ``f`` form the generalized kernel of
    multiplication by ``f``; adjoining them to ``I`` removes exactly the
    components where ``f`` vanishes.
    """
    G, stair, index = _zero_dim_basis(I, limits, "saturate_zero_dim")
    R = G.ring
    F = R.field
    n = len(stair)
    if n == 0:
        return Ideal(R, [R.one()])
    M = multiplication_matrix(I, f, limits)
    # V_0 = 0, V_{i+1} = {v : M v in V_i}; stop when the dimension stalls
    basis: list[list[int]] = []
    while True:
        # solve M v = sum a_k b_k  <=>  [M | -B] (v, a) = 0
        rows = [list(M[i]) + [F.neg(b[i]) for b in basis] for i in range(n)]
        ker = nullspace(F, rows, n + len(basis))
        new = _row_basis(F, [k[:n] for k in ker])
        if len(new) == len(basis):
            break
        basis = new
        if len(basis) == n:
            return Ideal(R, [R.one()])
    extra = []
    for v in basis:
        terms = {stair[j]: c for j, c in enumerate(v) if c}
        extra.append(Polynomial(R, terms))
    return Ideal(R, list(G.basis) + extra)


def _row_basis(F, vectors):
    E = _Echelon(F)
    out = []
    for i, v in enumerate(vectors):
        if E.add(v, i) is None:
            out.append(v)
    return out


def eliminate_zero_dim(I: Ideal, drop, limits: Limits | None = None) -> Ideal:
    """``I`` intersected with ``k[kept variables]`` for zero-dimensional ``I``.

    Buchberger-Moeller on the kept variables: monomials are visited in
    increasing order and their normal forms tested for linear dependence.
    The result is the reduced Groebner basis of the elimination ideal in the
    ring of the kept variables (same order kind as ``I``).
    """
    import heapq

    G, stair, index = _zero_dim_basis(I, limits, "eliminate_zero_dim")
    R = G.ring
    F = R.field
    drop_idx = {R.index(d) if isinstance(d, str) else d for d in drop}
    keep = [i for i in range(R.n) if i not in drop_idx]
    S = PolynomialRing(F, [R.names[i] for i in keep], R.order if R.order.kind != "block" else "grevlex")
    if G.is_unit():
        return Ideal(S, [S.one()])
    E = _Echelon(F)
    nfs = {}
    leads = []
    out = []
    start = (0,) * len(keep)
    heap = [(S.key(S.monomial(start)), start)]
    seen = {start}
    while heap:
        _, ex = heapq.heappop(heap)
        m = S.monomial(ex)
        if any(S.divides(l, m) for l in leads):
            continue
        # normal form from a processed predecessor
        pred = next((i for i, e in enumerate(ex) if e), None)
        if pred is None:
            nf = G.normal_form(R.one())
        else:
            prev = list(ex)
            prev[pred] -= 1
            nf = G.normal_form(nfs[tuple(prev)] * R.gen(keep[pred]))
        v = [0] * len(stair)
        for mm, c in nf.terms.items():
            v[index[mm]] = c
        dep = E.add(v, ex)
        if dep is not None:
            poly = Polynomial(S, {S.monomial(t): c for t, c in dep.items()})
            out.append(poly.monic())
            leads.append(m)
            continue
        nfs[ex] = nf
        for i in range(len(keep)):
            nxt = list(ex)
            nxt[i] += 1
            nxt = tuple(nxt)
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (S.key(S.monomial(nxt)), nxt))
    return Ideal(S, out)


# -- points ------------------------------------------------------------------------------


@dataclass
class SchemePoint:
    """A geometric point, one representative per base-field conjugacy class.

    ``coords`` are encoded elements of ``field``, which is the residue field of
    the point (degree ``residue_degree`` over the base field).
    """

    coords: tuple
    field: FiniteField
    residue_degree: int
    chart: object = None
    multiplicity: int | None = None
    projective: tuple | None = None
    extra: dict = dc_field(default_factory=dict)

    def formatted(self, coords=None) -> list[str]:
        coords = self.coords if coords is None else coords
        return [self.field.format(c) for c in coords]

    def to_dict(self) -> dict:
        d = {
            "coordinates": self.formatted(),
            "chart": self.chart,
            "residue_degree": self.residue_degree,
            "multiplicity": self.multiplicity,
            "field": repr(self.field),
        }
        if self.projective is not None:
            d["projective"] = [[self.field.format(c) for c in part] for part in self.projective]
        if self.extra:
            d.update(self.extra)
        return d


def _drop_var(J: Ideal, var: int, value: int) -> Ideal:
    R = J.ring
    names = R.names[:var] + R.names[var + 1:]
    S = PolynomialRing(R.field, names, R.order)
    gens = S.gens()
    images = gens[:var] + [Polynomial(S, {0: value} if value else {})] + gens[var:]
    return Ideal(S, [g.substitute(images, S) for g in J.generators])


def solve_points(I: Ideal, limits: Limits | None = None, max_field_degree: int = MAX_FIELD_DEGREE,
                 seed: int = 0) -> list[SchemePoint]:
    """All geometric points, one per conjugacy class over the base field.

    Works from the last variable backwards: the squarefree part of its minimal
    polynomial is factored, one root per irreducible factor is adjoined (in the
    canonical extension of the right degree), substituted, and the remaining
    system is solved over the larger field.
    """
    R = I.ring
    base = R.field
    G = I.groebner(limits=limits)
    if not is_zero_dimensional(G):
        raise NotZeroDimensional("solve_points needs a zero-dimensional ideal")
    if G.is_unit():
        return []
    out = []
    for coords, K, r in _solve(Ideal(R, list(G.basis)), limits, max_field_degree, seed, base.k):
        out.append(SchemePoint(tuple(coords), K, r))
    out.sort(key=lambda P: (P.residue_degree, P.coords))
    return out


def _solve(J: Ideal, limits, max_deg, seed, base_k):
    R = J.ring
    K = R.field
    G = J.groebner(limits=limits)
    if G.is_unit():
        return
    v = R.n - 1
    mp = minimal_polynomial(Ideal(R, list(G.basis)), v, limits)
    sq = squarefree_part(K, mp)
    for h, _ in upoly.factor(K, sq, seed):
        r = upoly.degree(h)
        if (K.k * r) // base_k > max_deg:
            raise ResourceLimitError(f"splitting field degree {(K.k * r) // base_k} exceeds cap {max_deg}")
        L = extension_of(K, r)
        emb = embedding(K, L)
        hl = [emb(c) for c in h]
        alpha = upoly.roots(L, hl, seed)[0]
        if R.n == 1:
            # the roots of the minimal polynomial are exactly the points
            yield [alpha], L, r
            continue
        JL = Ideal(R.with_field(L), [g.map_coefficients(R.with_field(L)) for g in G.basis])
        sub = _drop_var(JL, v, alpha)
        for coords, M, d in _solve(sub, limits, max_deg, seed, base_k):
            e = embedding(L, M)
            yield coords + [e(alpha)], M, r * d


def extension_of(K: FiniteField, r: int) -> FiniteField:
    return extension(K, r)


# -- multiplicities ----------------------------------------------------------------------


def translate(I: Ideal, point, field: FiniteField) -> Ideal:
    """Map ``I`` into ``field`` and move ``point`` to the origin."""
    R = I.ring.with_field(field)
    gens = R.gens()
    images = [g + Polynomial(R, {0: c} if c else {}) for g, c in zip(gens, point)]
    return Ideal(R, [f.substitute(images, R) for f in I.generators])


def on_scheme(I: Ideal, point, field: FiniteField) -> bool:
    return all(f.evaluate(point, field) == 0 for f in I.generators)


def local_multiplicity(I: Ideal, point, field: FiniteField | None = None,
                       limits: Limits | None = None, max_n: int = MAX_LOCAL_N) -> int:
    """Length of the local component of ``V(I)`` at ``point``.

    ``dim k[x]/(I + m^N)`` is computed for ``N = 1, 2, ...`` until two
    consecutive values agree.
    """
    K = field or I.ring.field
    point = list(point)
    if not on_scheme(I, point, K):
        raise PointNotOnScheme("point does not lie on the scheme")
    T = translate(I, point, K)
    R = T.ring
    prev = None
    for N in range(1, max_n + 1):
        mons = [R.monomial(e) for e in _degree_exactly(R.n, N)]
        gens = T.generators + [Polynomial(R, {m: 1}) for m in mons]
        d = Ideal(R, gens).groebner(limits=limits).degree()
        if prev is not None and d == prev:
            return d
        prev = d
    raise ResourceLimitError(f"local length did not stabilise by N = {max_n}")


def local_length_sequence(I: Ideal, point, field=None, upto: int = 4, limits=None) -> list[int]:
    K = field or I.ring.field
    T = translate(I, list(point), K)
    R = T.ring
    out = []
    for N in range(1, upto + 1):
        mons = [R.monomial(e) for e in _degree_exactly(R.n, N)]
        out.append(Ideal(R, T.generators + [Polynomial(R, {m: 1}) for m in mons]).groebner(limits=limits).degree())
    return out


def _degree_exactly(n, d):
    return monomials_of_degree(n, d)


def tangent_space_dimension(I: Ideal, point, field: FiniteField | None = None) -> int:
    """Corank of the Jacobian of the generators at ``point``."""
    K = field or I.ring.field
    R = I.ring
    rows = []
    for f in I.generators:
        rows.append([f.diff(i).evaluate(point, K) for i in range(R.n)])
    return R.n - rank(K, rows) if rows else R.n


# -- reports -----------------------------------------------------------------------------


@dataclass
class Chart:
    """An affine chart ideal plus how its points map to normalized projective data."""

    label: object
    ideal: Ideal
    to_projective: Callable | None = None


@dataclass
class SchemeReport:
    base_field: FiniteField
    fingerprint: str
    total_degree: int
    radical_degree: int
    points: list
    uniform_multiplicity: int | None
    seed: int | None = None
    stats: dict = dc_field(default_factory=dict)
    chart_degrees: dict = dc_field(default_factory=dict)
    notes: dict = dc_field(default_factory=dict)
    related: dict = dc_field(default_factory=dict)

    def multiplicities(self) -> list[int]:
        return [P.multiplicity for P in self.points]

    def check(self):
        total = sum(P.residue_degree * P.multiplicity for P in self.points)
        rad = sum(P.residue_degree for P in self.points)
        if total != self.total_degree or rad != self.radical_degree:
            raise AssertionError("scheme report conservation violated")

    def to_dict(self) -> dict:
        return {
            "base_field": repr(self.base_field),
            "ideal_fingerprint": self.fingerprint,
            "total_degree": self.total_degree,
            "radical_degree": self.radical_degree,
            "uniform_multiplicity": self.uniform_multiplicity,
            "points": [P.to_dict() for P in self.points],
            "seed": self.seed,
            "stats": self.stats,
            "chart_degrees": {str(k): v for k, v in self.chart_degrees.items()},
            "notes": self.notes,
            "related": {k: v.to_dict() for k, v in self.related.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def normalize_projective(K: FiniteField, coords) -> tuple:
    """Scale so the first nonzero coordinate is one."""
    coords = list(coords)
    for c in coords:
        if c:
            inv = K.inv(c)
            return tuple(K.mul(x, inv) for x in coords)
    raise ValueError("zero vector is not a projective point")


def canonical_representative(K: FiniteField, parts: tuple, base_q: int, r: int) -> tuple:
    """Least element (by encoding) of the Frobenius orbit of projective data."""
    best = parts
    cur = parts
    for _ in range(r - 1):
        cur = tuple(tuple(K.pow(c, base_q) for c in part) for part in cur)
        if cur < best:
            best = cur
    return best


def _affine_parts(P: SchemePoint):
    return (tuple(P.coords),)


def scheme_report(charts: list[Chart], base_field: FiniteField | None = None, limits: Limits | None = None,
                  seed: int | None = None, multiplicity: bool = True, recheck: bool = False) -> SchemeReport:
    """Merge chart solutions into one report of deduplicated points with lengths.

    Each chart's local lengths must add up to its own degree; a mismatch means
    two charts disagree about a shared point and raises ChartInconsistency.
    """
    if not charts:
        raise ValueError("need at least one chart")
    base = base_field or charts[0].ideal.ring.field
    found: dict = {}
    order = []
    fps = []
    chart_degrees = {}
    for ch in charts:
        G = ch.ideal.groebner(limits=limits)
        fps.append(G.fingerprint())
        if not is_zero_dimensional(G):
            raise NotZeroDimensional(f"chart {ch.label} is not zero-dimensional")
        deg = G.degree()
        chart_degrees[ch.label] = deg
        if deg == 0:
            continue
        pts = solve_points(ch.ideal, limits, seed=seed or 0)
        acc = 0
        for P in pts:
            P.chart = ch.label
            K = P.field
            parts = ch.to_projective(P.coords, K) if ch.to_projective else _affine_parts(P)
            parts = tuple(normalize_projective(K, part) if ch.to_projective else part for part in parts)
            key = (P.residue_degree, canonical_representative(K, parts, base.q, P.residue_degree))
            if key in found and not recheck:
                mult = found[key].multiplicity
            else:
                mult = local_multiplicity(ch.ideal, P.coords, K, limits) if multiplicity else 1
                if key in found and found[key].multiplicity != mult:
                    raise ChartInconsistency(f"point {key} has multiplicities {found[key].multiplicity} and {mult}")
            if key not in found:
                P.multiplicity = mult
                P.projective = key[1]
                found[key] = P
                order.append(key)
            acc += P.residue_degree * mult
        if multiplicity and acc != deg:
            raise ChartInconsistency(f"chart {ch.label}: local lengths sum to {acc}, degree is {deg}")
    points = [found[k] for k in sorted(order, key=lambda k: (k[0], k[1]))]
    total = sum(P.residue_degree * P.multiplicity for P in points)
    rad = sum(P.residue_degree for P in points)
    mults = {P.multiplicity for P in points}
    rep = SchemeReport(
        base_field=base,
        fingerprint=hashlib.sha256("|".join(fps).encode()).hexdigest()[:16],
        total_degree=total,
        radical_degree=rad,
        points=points,
        uniform_multiplicity=mults.pop() if len(mults) == 1 else None,
        seed=seed,
        chart_degrees=chart_degrees,
    )
    rep.check()
    return rep


def brute_force_points(I: Ideal) -> list[tuple]:
    """Rational points by exhaustive evaluation (oracle for small fields)."""
    import itertools

    F = I.ring.field
    return [pt for pt in itertools.product(range(F.q), repeat=I.ring.n) if on_scheme(I, pt, F)]


def macaulay_local_length(I: Ideal, N: int) -> int:
    """``dim k[x]/(I + m^N)`` by dense linear algebra on monomials of degree < N.

    Independent of Groebner bases: the space spanned by ``monomial * generator``
    truncated below degree ``N`` is row-reduced and its corank returned.
    """
    R = I.ring
    F = R.field
    mons = list(all_monomials_up_to(R.n, N - 1))
    index = {R.monomial(e): j for j, e in enumerate(mons)}
    rows = []
    for f in I.generators:
        low = min(R.mono_degree(m) for m in f.terms)
        for e in all_monomials_up_to(R.n, max(N - 1 - low, 0)):
            mm = R.monomial(e)
            row = [0] * len(mons)
            nz = False
            for m, c in f.terms.items():
                j = index.get(m + mm)
                if j is not None:
                    row[j] = c
                    nz = True
            if nz:
                rows.append(row)
    return len(mons) - (rank(F, rows) if rows else 0)
