"""Buchberger's algorithm with the Gebauer-Moeller criteria, plus elimination,
ideal quotients, saturation and staircase enumeration."""

from __future__ import annotations

import hashlib
import heapq
import os
import threading
from dataclasses import dataclass, field

from .poly import MonomialOrder, Polynomial, PolynomialRing, parse_order

DEFAULT_MAX_PAIRS = int(os.environ.get("CHARPENUM_MAX_PAIRS", 200_000))
DEFAULT_MAX_BASIS = int(os.environ.get("CHARPENUM_MAX_BASIS", 20_000))


class ResourceLimitError(RuntimeError):
    """A Groebner computation exceeded its pair or basis budget."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


class Cancelled(RuntimeError):
    """The computation was cancelled through its token."""


class CancelToken:
    """Cooperative cancellation flag, checked once per reduction step."""

    def __init__(self):
        self._event = threading.Event()

    def cancel(self):
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()


@dataclass
class Limits:
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_basis: int = DEFAULT_MAX_BASIS
    token: CancelToken | None = None


@dataclass
class Stats:
    pairs_processed: int = 0
    pairs_skipped: int = 0
    reductions_to_zero: int = 0
    max_basis_size: int = 0

    def as_dict(self):
        return dict(self.__dict__)


_GLOBAL_STATS = Stats()
_GLOBAL_LOCK = threading.Lock()


def global_stats() -> dict:
    with _GLOBAL_LOCK:
        return _GLOBAL_STATS.as_dict()


def reset_global_stats():
    with _GLOBAL_LOCK:
        for k in _GLOBAL_STATS.__dict__:
            setattr(_GLOBAL_STATS, k, 0)


# -- reduction ---------------------------------------------------------------------------


def _reduce(terms: dict, basis, ring: PolynomialRing, full: bool = True, token=None) -> dict:
    """Reduce ``terms`` by ``basis`` (monic polynomials); returns a new dict.

    The largest reducible term is always rewritten with the first basis element
    whose leading monomial divides it.
    """
    h = dict(terms)
    if not h:
        return h
    key = ring.key
    guard = ring.guard
    F = ring.field
    fsub, fmul = F.sub, F.mul
    lms = [(g.lm(), g.terms) for g in basis]
    heap = [(-key(m), m) for m in h]
    heapq.heapify(heap)
    push, pop = heapq.heappush, heapq.heappop
    out = {}
    steps = 0
    while heap:
        _, m = pop(heap)
        c = h.get(m)
        if c is None:
            continue
        del h[m]
        for glm, gterms in lms:
            if ((m | guard) - glm) & guard == guard:
                break
        else:
            if not full:
                h[m] = c
                out.update(h)
                return out
            out[m] = c
            continue
        steps += 1
        if token is not None and steps & 63 == 0 and token.cancelled:
            raise Cancelled("groebner computation cancelled")
        q = m - glm
        for mg, cg in gterms.items():
            if mg == glm:
                continue
            mm = mg + q
            old = h.get(mm)
            if old is None:
                h[mm] = fsub(0, fmul(c, cg))
                push(heap, (-key(mm), mm))
            else:
                v = fsub(old, fmul(c, cg))
                if v:
                    h[mm] = v
                else:
                    del h[mm]
    return out


def _monic_terms(ring, terms):
    if not terms:
        return terms
    key = ring.key
    lm = max(terms, key=key)
    c = terms[lm]
    if c == 1:
        return terms
    F = ring.field
    inv = F.inv(c)
    return {m: F.mul(v, inv) for m, v in terms.items()}


# -- data types --------------------------------------------------------------------------


class GroebnerBasis:
    """Reduced Groebner basis of an ideal under ``ring.order``."""

    def __init__(self, ring: PolynomialRing, basis: list[Polynomial], stats: Stats | None = None):
        self.ring = ring
        self.basis = basis
        self.stats = stats or Stats()
        self.reduced = True

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def leading_monomials(self) -> list[int]:
        return [g.lm() for g in self.basis]

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            f = f.in_ring(self.ring)
        return Polynomial(self.ring, _reduce(f.terms, self.basis, self.ring))

    reduce = normal_form

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def is_zero_dimensional(self) -> bool:
        return is_zero_dimensional(self)

    def quotient_basis(self, limit: int | None = None) -> list[int]:
        return quotient_basis(self, limit)

    def degree(self) -> int:
        if self.is_unit():
            return 0
        return len(self.quotient_basis())

    def fingerprint(self) -> str:
        return hashlib.sha256(dump(self).encode()).hexdigest()[:16]

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.ring == other.ring
            and [g.terms for g in self.basis] == [g.terms for g in other.basis]
        )

    def __repr__(self):
        return f"GroebnerBasis({self.ring.order.name}, {[str(g) for g in self.basis]})"


class Ideal:
    """Generators in a common ring; Groebner bases are computed lazily per order."""

    def __init__(self, ring: PolynomialRing, generators):
        gens = []
        for g in generators:
            g = g if isinstance(g, Polynomial) else ring(g)
            if g.ring != ring:
                g = g.in_ring(ring)
            if g:
                gens.append(g)
        self.ring = ring
        self.generators = gens
        self._gb: dict = {}
        self._lock = threading.Lock()

    def groebner(self, order=None, limits: Limits | None = None) -> GroebnerBasis:
        order = parse_order(order) if order is not None else self.ring.order
        with self._lock:
            gb = self._gb.get(order)
        if gb is None:
            gb = buchberger(self, order, limits)
            with self._lock:
                self._gb[order] = gb
        return gb

    def __add__(self, other):
        if isinstance(other, Ideal):
            other = other.generators
        return Ideal(self.ring, self.generators + [g.in_ring(self.ring) for g in other])

    def contains(self, f: Polynomial, limits=None) -> bool:
        return self.groebner(limits=limits).contains(f)

    def is_unit(self, limits=None) -> bool:
        return self.groebner(limits=limits).is_unit()

    def degree(self, limits=None) -> int:
        return self.groebner(limits=limits).degree()

    def map_field(self, field) -> "Ideal":
        R = self.ring.with_field(field)
        return Ideal(R, [g.map_coefficients(R) for g in self.generators])

    def in_ring(self, R: PolynomialRing) -> "Ideal":
        """Same generators in another ring sharing the variable names."""
        return Ideal(R, [g.in_ring(R) for g in self.generators])

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"


# -- Buchberger --------------------------------------------------------------------------


@dataclass(order=True)
class _Pair:
    sugar: int
    lcm_key: int
    i: int
    j: int
    lcm: int = field(compare=False)


def buchberger(I: Ideal, order=None, limits: Limits | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``I`` under ``order`` (default: the ring's order)."""
    limits = limits or Limits()
    ring = I.ring.with_order(order) if order is not None else I.ring
    key = ring.key
    stats = Stats()
    token = limits.token

    polys: list[dict] = []
    lms: list[int] = []
    sugars: list[int] = []
    active: list[int] = []
    pairs: list[_Pair] = []
    mdeg = ring.mono_degree
    divides = ring.divides
    lcm_of = ring.lcm

    def one_basis():
        return GroebnerBasis(ring, [ring.one()], stats)

    def update(h_idx):
        hlm = lms[h_idx]
        # Gebauer-Moeller: new pairs
        cand = []
        for g in active:
            l = lcm_of(hlm, lms[g])
            cand.append((g, l, l == hlm + lms[g]))
        kept = []
        for idx, (g, l, coprime) in enumerate(cand):
            if coprime:
                kept.append((g, l, True))
                continue
            redundant = False
            for jdx, (g2, l2, _) in enumerate(cand):
                if jdx != idx and divides(l2, l) and (l2 != l or jdx < idx):
                    redundant = True
                    break
            if not redundant:
                kept.append((g, l, False))
        # drop old pairs whose lcm is divisible by lm(h) strictly (chain criterion)
        survivors = []
        for p in pairs:
            if divides(hlm, p.lcm):
                if lcm_of(lms[p.i], hlm) != p.lcm and lcm_of(lms[p.j], hlm) != p.lcm:
                    stats.pairs_skipped += 1
                    continue
            survivors.append(p)
        pairs[:] = survivors
        for g, l, coprime in kept:
            if coprime:
                stats.pairs_skipped += 1
                continue
            sug = max(sugars[g] + mdeg(l) - mdeg(lms[g]), sugars[h_idx] + mdeg(l) - hlm_deg(h_idx))
            pairs.append(_Pair(sug, key(l), g, h_idx, l))
        heapq.heapify(pairs)
        active[:] = [g for g in active if not divides(hlm, lms[g])] + [h_idx]
        stats.max_basis_size = max(stats.max_basis_size, len(active))
        if len(active) > limits.max_basis:
            raise ResourceLimitError("basis size cap exceeded", stats.as_dict())

    def hlm_deg(i):
        return mdeg(lms[i])

    def add(terms, sugar):
        terms = _monic_terms(ring, terms)
        polys.append(terms)
        lms.append(max(terms, key=key))
        sugars.append(sugar)
        return len(polys) - 1

    def as_polys(indices):
        return [_PolyView(ring, polys[i], lms[i]) for i in indices]

    # seed with generators, smallest first
    gens = sorted((g.in_ring(ring) for g in I.generators), key=lambda g: key(g.lm()))
    for g in gens:
        t = _reduce(g.terms, as_polys(active), ring, token=token)
        if not t:
            continue
        if list(t) == [0]:
            return one_basis()
        update(add(t, _poly_degree(ring, g.terms)))

    while pairs:
        p = heapq.heappop(pairs)
        if token is not None and token.cancelled:
            raise Cancelled("groebner computation cancelled")
        stats.pairs_processed += 1
        if stats.pairs_processed > limits.max_pairs:
            raise ResourceLimitError("pair cap exceeded", stats.as_dict())
        s = _spoly(ring, polys[p.i], lms[p.i], polys[p.j], lms[p.j], p.lcm)
        h = _reduce(s, as_polys(active), ring, token=token)
        if not h:
            stats.reductions_to_zero += 1
            continue
        if list(h) == [0]:
            return one_basis()
        update(add(h, p.sugar))

    # minimal basis, then inter-reduce
    minimal = []
    for i in active:
        if not any(j != i and divides(lms[j], lms[i]) and (lms[j] != lms[i] or j < i) for j in active):
            minimal.append(i)
    minimal.sort(key=lambda i: key(lms[i]))
    views = as_polys(minimal)
    result = []
    for idx, i in enumerate(minimal):
        others = views[:idx] + views[idx + 1:]
        t = _reduce(polys[i], others, ring, token=token)
        result.append(Polynomial(ring, _monic_terms(ring, t)))
    result.sort(key=lambda g: key(g.lm()))
    with _GLOBAL_LOCK:
        _GLOBAL_STATS.pairs_processed += stats.pairs_processed
        _GLOBAL_STATS.pairs_skipped += stats.pairs_skipped
        _GLOBAL_STATS.reductions_to_zero += stats.reductions_to_zero
        _GLOBAL_STATS.max_basis_size = max(_GLOBAL_STATS.max_basis_size, stats.max_basis_size)
    return GroebnerBasis(ring, result, stats)


def _poly_degree(ring, terms):
    return max(ring.mono_degree(m) for m in terms)


class _PolyView:
    """Minimal polynomial facade used inside the reducer."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring, terms, lm):
        self.ring, self.terms, self._lm = ring, terms, lm

    def lm(self):
        return self._lm


def _spoly(ring, f, flm, g, glm, l):
    F = ring.field
    qf, qg = l - flm, l - glm
    out = {}
    for m, c in f.items():
        if m != flm:
            out[m + qf] = c
    sub = F.sub
    for m, c in g.items():
        if m == glm:
            continue
        mm = m + qg
        v = sub(out.get(mm, 0), c)
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    return G.normal_form(f)


def spolynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    R = f.ring
    fm, gm = f.monic(), g.monic()
    l = R.lcm(fm.lm(), gm.lm())
    return Polynomial(R, _spoly(R, fm.terms, fm.lm(), gm.terms, gm.lm(), l))


def check_groebner(G: GroebnerBasis) -> bool:
    """Every S-polynomial of basis pairs reduces to zero."""
    B = G.basis
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            if not G.normal_form(spolynomial(B[i], B[j])).is_zero():
                return False
    return True


def is_reduced(G: GroebnerBasis) -> bool:
    R = G.ring
    for i, g in enumerate(G.basis):
        if g.lc() != 1:
            return False
        for j, h in enumerate(G.basis):
            if i != j and any(R.divides(h.lm(), m) for m in g.terms):
                return False
    return True


# -- zero-dimensional helpers ------------------------------------------------------------


def is_zero_dimensional(G: GroebnerBasis) -> bool:
    R = G.ring
    if G.is_unit():
        return True
    pure = set()
    for m in G.leading_monomials():
        ex = R.exponents(m)
        nz = [i for i, e in enumerate(ex) if e]
        if len(nz) == 1:
            pure.add(nz[0])
    return len(pure) == R.n


def quotient_basis(G: GroebnerBasis, limit: int | None = None) -> list[int]:
    """Standard monomials (the staircase), sorted increasingly in the order."""
    if not is_zero_dimensional(G):
        raise ValueError("ideal is not zero-dimensional")
    if G.is_unit():
        return []
    R = G.ring
    lms = G.leading_monomials()
    g = R.guard
    seen = {0}
    stack = [0]
    out = []
    while stack:
        m = stack.pop()
        out.append(m)
        if limit is not None and len(out) > limit:
            raise ResourceLimitError("staircase larger than limit")
        for i in range(R.n):
            mm = m + R.var_mono(i)
            if mm in seen:
                continue
            seen.add(mm)
            if any(((mm | g) - lm) & g == g for lm in lms):
                continue
            stack.append(mm)
    out.sort(key=R.key)
    return out


# -- elimination, quotient, saturation ---------------------------------------------------


def eliminate(I: Ideal, drop, limits: Limits | None = None, keep_ring: bool = False) -> Ideal:
    """``I`` intersected with the subring in the variables not listed in ``drop``."""
    R = I.ring
    drop_idx = [R.index(d) if isinstance(d, str) else d for d in drop]
    if not drop_idx:
        return Ideal(R, list(I.groebner(limits=limits).basis))
    keep_idx = [i for i in range(R.n) if i not in drop_idx]
    names = [R.names[i] for i in drop_idx] + [R.names[i] for i in keep_idx]
    E = PolynomialRing(R.field, names, MonomialOrder("block", len(drop_idx)))
    G = buchberger(Ideal(E, [g.in_ring(E) for g in I.generators]), limits=limits)
    sub = PolynomialRing(R.field, [R.names[i] for i in keep_idx], R.order)
    dropped = set(range(len(drop_idx)))
    out = []
    for g in G.basis:
        if not (g.variables() & dropped):
            out.append(_restrict(g, sub))
    if keep_ring:
        return Ideal(R, [g.in_ring(R) for g in out])
    return Ideal(sub, out)


def _restrict(g: Polynomial, sub: PolynomialRing) -> Polynomial:
    src = g.ring
    pos = [src.index(nm) for nm in sub.names]
    out = {}
    for m, c in g.terms.items():
        ex = src.exponents(m)
        out[sub.monomial([ex[i] for i in pos])] = c
    return Polynomial(sub, out)


def _with_extra_var(R: PolynomialRing, name: str) -> PolynomialRing:
    while name in R.names:
        name += "_"
    return PolynomialRing(R.field, (name,) + R.names, R.order)


def intersect(I: Ideal, J: Ideal, limits: Limits | None = None) -> Ideal:
    R = I.ring
    T = _with_extra_var(R, "_t")
    t = T.gen(0)
    gens = [t * g.in_ring(T) for g in I.generators] + [(T.one() - t) * g.in_ring(T) for g in J.generators]
    return eliminate(Ideal(T, gens), [0], limits, keep_ring=False).in_ring(R)


def ideal_quotient(I: Ideal, f: Polynomial, limits: Limits | None = None) -> Ideal:
    """``(I : f)`` computed as ``(I intersect <f>) / f``."""
    if f.is_zero():
        raise ValueError("quotient by the zero polynomial")
    R = I.ring
    f = f.in_ring(R)
    if f.is_constant():
        return Ideal(R, list(I.generators))
    inter = intersect(I, Ideal(R, [f]), limits)
    return Ideal(R, [g.exact_div(f) for g in inter.generators])


def saturation(I: Ideal, f: Polynomial, limits: Limits | None = None) -> Ideal:
    """``(I : f^inf)`` by eliminating ``t`` from ``I + <1 - t f>``."""
    if f.is_zero():
        raise ValueError("saturation by the zero polynomial")
    R = I.ring
    f = f.in_ring(R)
    if f.is_constant():
        return Ideal(R, list(I.generators))
    T = _with_extra_var(R, "_t")
    t = T.gen(0)
    gens = [g.in_ring(T) for g in I.generators] + [T.one() - t * f.in_ring(T)]
    return eliminate(Ideal(T, gens), [0], limits).in_ring(R)


def saturate(I: Ideal, f: Polynomial, limits: Limits | None = None) -> tuple[Ideal, int]:
    """``(I : f^inf)`` and the least ``k`` with ``(I : f^k) = (I : f^inf)``.

    The saturation comes from one elimination of ``1 - t f``; the exponent is
    then found by membership of ``f^k * g`` in ``I`` for each generator ``g``.
    """
    if f.is_zero():
        raise ValueError("saturation by the zero polynomial")
    R = I.ring
    f = f.in_ring(R)
    if f.is_constant():
        return Ideal(R, list(I.generators)), 0
    sat = saturation(I, f, limits)
    GI = I.groebner(limits=limits)
    Gs = sat.groebner(limits=limits)
    k = 0
    for g in Gs.basis:
        h = GI.normal_form(g)
        e = 0
        while h:
            e += 1
            h = GI.normal_form(h * f)
        k = max(k, e)
    return Ideal(R, list(Gs.basis)), k


def dump(G: GroebnerBasis) -> str:
    """Stable text form: the order name, then one polynomial per line."""
    lines = [G.ring.order.name]
    lines += [str(g) for g in G.basis]
    return "\n".join(lines) + "\n"
