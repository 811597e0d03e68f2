"""Enumerative schemes of plane curves as explicit ideals.

Inflection flags, inflection points and lines, tangency correspondences and
the bitangent (theta-hyperplane) scheme of a plane quartic.  Everything is
computed chart by chart on affine pieces and merged by normalized projective
coordinates.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import lru_cache

from . import upoly
from .ff import FiniteField, embedding, extension, parse_field
from .formulas import CountPrediction, plucker_counts, theta_counts
from .groebner import Ideal, Limits, eliminate, intersect, is_zero_dimensional, saturation
from .poly import (
    Polynomial,
    PolynomialRing,
    dehomogenize,
    gradient_dot,
    hessian_form,
    monomials_of_degree,
    nullspace,
    parse_polynomial,
    rank,
)
from .zerodim import (
    Chart,
    NotZeroDimensional,
    SchemeReport,
    canonical_representative,
    eliminate_zero_dim,
    local_multiplicity,
    normalize_projective,
    saturate_zero_dim,
    scheme_report,
    solve_points,
    tangent_space_dimension,
)

X = ("x0", "x1", "x2")
L = ("l0", "l1", "l2")
DEFAULT_MAX_ATTEMPTS = 500

__all__ = [
    "PlaneCurve",
    "Flag",
    "CountPrediction",
    "DegenerateInput",
    "SamplingFailure",
    "inflection_flag_ideal",
    "inflection_flag_scheme",
    "inflection_scheme",
    "gauss_image_scheme",
    "tangency_scheme",
    "tangency_fiber",
    "theta_scheme_quartic",
    "fiber_linearity_check",
    "random_smooth_curve",
    "random_flag",
    "intersection_multiplicity",
    "is_smooth",
    "gamma_length",
    "gamma_dual_length",
    "find_bitangents",
    "hasse_witt_matrix",
    "is_ordinary",
    "has_hyperflex",
    "general_quartic",
    "theta_prediction",
    "theta_verdict",
    "inflection_prediction",
    "inflection_verdict",
    "flex_hypotheses",
    "projective_ring",
    "flag_charts",
    "sample_inflection_curve",
    "simple_tangents",
    "verified_bitangents",
]


class DegenerateInput(ValueError):
    """The construction is not zero-dimensional for this curve."""


class SamplingFailure(RuntimeError):
    pass


def _cst(R: PolynomialRing, c: int) -> Polynomial:
    return Polynomial(R, {0: c} if c else {})


def projective_ring(K: FiniteField) -> PolynomialRing:
    return PolynomialRing(K, X)


@dataclass
class PlaneCurve:
    """A plane curve ``F(x0, x1, x2) = 0``."""

    F: Polynomial
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        R = self.F.ring
        if tuple(R.names) != X:
            self.F = self.F.in_ring(projective_ring(R.field))
        if self.F.is_zero():
            raise ValueError("the zero form does not define a curve")
        if not self.F.is_homogeneous():
            raise ValueError("curve equation must be homogeneous")

    @property
    def degree(self) -> int:
        return self.F.total_degree()

    @property
    def field(self) -> FiniteField:
        return self.F.ring.field

    @property
    def ring(self) -> PolynomialRing:
        return self.F.ring

    @classmethod
    def parse(cls, field: FiniteField | str, text: str) -> "PlaneCurve":
        K = parse_field(field) if isinstance(field, str) else field
        return cls(parse_polynomial(projective_ring(K), text))

    @classmethod
    def from_text(cls, text: str) -> "PlaneCurve":
        """Curve file: a field line (``GF(3)`` or ``field: GF(3)``) then the form.

        Blank lines and ``#`` comments are ignored; the form may span lines.
        """
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if len(lines) < 2:
            raise ValueError("curve file needs a field line and a polynomial")
        head = lines[0]
        if ":" in head and not head.startswith("GF"):
            head = head.split(":", 1)[1].strip()
        elif "=" in head and head.split("=", 1)[0].strip().lower() == "field":
            head = head.split("=", 1)[1].strip()
        K = parse_field(head)
        return cls.parse(K, " ".join(lines[1:]))

    @classmethod
    def load(cls, path) -> "PlaneCurve":
        with open(path) as fh:
            return cls.from_text(fh.read())

    def to_text(self) -> str:
        return f"{_field_literal(self.field)}\n{self.F}\n"

    def __str__(self):
        return str(self.F)


def _field_literal(K: FiniteField) -> str:
    if K.k == 1:
        return f"GF({K.p})"
    from .ff import format_modulus

    return f"GF({K.p}^{K.k}; {format_modulus(K.modulus)})"


@dataclass
class Flag:
    """A point and a line through it, with coordinates in ``field``."""

    point: tuple
    line: tuple
    field: FiniteField

    def __post_init__(self):
        K = self.field
        self.point = tuple(self.point)
        self.line = tuple(self.line)
        if not any(self.point) or not any(self.line):
            raise ValueError("projective coordinates cannot all vanish")
        acc = 0
        for a, b in zip(self.point, self.line):
            acc = K.add(acc, K.mul(a, b))
        if acc:
            raise ValueError("the point does not lie on the line")


# -- inflection flags ---------------------------------------------------------------------


def flag_ring(K: FiniteField) -> PolynomialRing:
    return PolynomialRing(K, X + L)


def flag_generators(C: PlaneCurve) -> list[Polynomial]:
    """Bihomogeneous equations of the inflection flags of ``C`` in ``x`` and ``l``."""
    S = flag_ring(C.field)
    F = C.F.in_ring(S)
    g = S.gens()
    x, l = g[:3], g[3:]
    zero = S.zero()
    gens = [x[0] * l[0] + x[1] * l[1] + x[2] * l[2], F]
    vs = _perp_polys(l, zero)
    for v in vs:
        gens.append(gradient_dot(F, list(v) + [0, 0, 0]))
    for v in vs:
        gens.append(hessian_form(F, list(v) + [0, 0, 0]))
    return gens


def _perp_polys(l, zero):
    l0, l1, l2 = l
    return [(zero, l2, -l1), (-l2, zero, l0), (l1, -l0, zero)]


def _specialize(gens, names_out, fixed: dict, K: FiniteField | None = None) -> list[Polynomial]:
    """Set the variables in ``fixed`` to constants and keep the rest by name."""
    R = gens[0].ring
    T = PolynomialRing(K or R.field, names_out)
    images = []
    for nm in R.names:
        if nm in fixed:
            images.append(_cst(T, fixed[nm]))
        else:
            images.append(T.gen(nm))
    return [g.substitute(images, T) for g in gens]


def flag_chart_names(i: int, j: int) -> list[str]:
    return [X[k] for k in range(3) if k != i] + [L[k] for k in range(3) if k != j]


def inflection_flag_ideal(C: PlaneCurve, chart_pair) -> Ideal:
    """Affine ideal of inflection flags in the chart ``x_i = 1, l_j = 1``."""
    i, j = chart_pair
    if i not in (0, 1, 2) or j not in (0, 1, 2):
        raise ValueError("chart indices must lie in {0, 1, 2}")
    gens = _specialize(flag_generators(C), flag_chart_names(i, j), {X[i]: 1, L[j]: 1})
    return Ideal(gens[0].ring, gens)


def _insert_one(coords, i):
    c = list(coords)
    c.insert(i, 1)
    return tuple(c)


def _flag_projective(i, j):
    def to_proj(coords, K):
        return (_insert_one(coords[:2], i), _insert_one(coords[2:], j))

    return to_proj


def flag_charts(C: PlaneCurve) -> list[Chart]:
    return [Chart((i, j), inflection_flag_ideal(C, (i, j)), _flag_projective(i, j))
            for i in range(3) for j in range(3)]


def is_smooth(C: PlaneCurve, limits: Limits | None = None) -> bool:
    """True when ``F`` and its three partials have no common zero in any chart."""
    F = C.F
    gens = [F, F.diff(0), F.diff(1), F.diff(2)]
    for i in range(3):
        aff = [dehomogenize(g, i) for g in gens]
        if not Ideal(aff[0].ring, aff).is_unit(limits):
            return False
    return True


def intersection_multiplicity(C: PlaneCurve, point, line, field: FiniteField | None = None,
                              limits: Limits | None = None) -> int | None:
    """Local intersection number of ``C`` and a line at a point; ``None`` if the line lies in ``C``."""
    K = field or C.field
    point = normalize_projective(K, point)
    i = next(k for k, c in enumerate(point) if c)
    RK = projective_ring(K)
    F = C.F.map_coefficients(RK) if K is not C.field else C.F
    ell = Polynomial(RK, {RK.var_mono(k): c for k, c in enumerate(line) if c})
    f, g = dehomogenize(F, i), dehomogenize(ell, i)
    I = Ideal(f.ring, [f, g])
    if not is_zero_dimensional(I.groebner(limits=limits)):
        return None
    aff = [c for k, c in enumerate(point) if k != i]
    return local_multiplicity(I, aff, K, limits)


def _gradient_at(C: PlaneCurve, point, K) -> tuple:
    return tuple(C.F.diff(k).evaluate(point, K) for k in range(3))


def inflection_flag_scheme(C: PlaneCurve, limits: Limits | None = None, seed: int = 0) -> SchemeReport:
    """Flag-level report: points ``(p, l)`` with lengths and per-point checks.

    Each point carries the Zariski tangent dimension of its chart ideal, whether
    ``p`` is a smooth point of ``C``, and the contact order of ``l`` with ``C`` at ``p``.
    """
    if C.degree < 1:
        raise DegenerateInput("need a curve of positive degree")
    charts = flag_charts(C)
    by_label = {ch.label: ch for ch in charts}
    try:
        rep = scheme_report(charts, C.field, limits, seed=seed)
    except NotZeroDimensional as exc:
        raise DegenerateInput(f"inflection flag scheme is not finite: {exc}") from exc
    for P in rep.points:
        K = P.field
        p, l = P.projective
        grad = _gradient_at(C, p, K)
        contact = intersection_multiplicity(C, p, l, K, limits)
        P.extra = {
            "point": [K.format(c) for c in p],
            "line": [K.format(c) for c in l],
            "tangent_dimension": tangent_space_dimension(by_label[P.chart].ideal, P.coords, K),
            "smooth_point": any(grad),
            "contact_order": contact,
        }
    rep.notes = {"level": "flags", "degree": C.degree, "curve": str(C.F)}
    return rep


def _image_charts(charts_by_label, keep_first: bool, limits):
    """Scheme-theoretic images of the flag charts on one factor.

    ``keep_first`` keeps the point variables (image in the plane), otherwise
    the line variables (image in the dual plane).  The image over one chart
    of the target is the intersection of the images of the three source
    charts covering it.
    """
    out = []
    for a in range(3):
        image = None
        for b in range(3):
            pair = (a, b) if keep_first else (b, a)
            I = charts_by_label[pair].ideal
            names = I.ring.names
            drop = list(names[2:]) if keep_first else list(names[:2])
            if is_zero_dimensional(I.groebner(limits=limits)):
                E = eliminate_zero_dim(I, drop, limits)
            else:
                E = eliminate(I, drop, limits)
            image = E if image is None else intersect(image, E, limits)
        out.append(Chart(a, image, lambda coords, K, a=a: (_insert_one(coords, a),)))
    return out


def inflection_scheme(C: PlaneCurve, limits: Limits | None = None, seed: int = 0,
                      flags: SchemeReport | None = None) -> SchemeReport:
    """The scheme of inflection points, with the flag-level report attached.

    The point factor is the image of the flag scheme under ``(p, l) -> p``.
    """
    if C.degree < 2:
        raise DegenerateInput("inflection points need degree >= 2")
    flags = flags or inflection_flag_scheme(C, limits, seed)
    charts = flag_charts(C)
    by_label = {ch.label: ch for ch in charts}
    images = _image_charts(by_label, True, limits)
    rep = scheme_report(images, C.field, limits, seed=seed)
    ideals = {ch.label: ch.ideal for ch in images}
    for P in rep.points:
        P.extra = {"tangent_dimension": tangent_space_dimension(ideals[P.chart], P.coords, P.field)}
    rep.related["flags"] = flags
    rep.notes = {"level": "points", "degree": C.degree, "curve": str(C.F)}
    return rep


def gauss_image_scheme(C: PlaneCurve, limits: Limits | None = None, seed: int = 0) -> SchemeReport:
    """The scheme of inflection lines: image of the flag scheme under ``(p, l) -> l``."""
    if C.degree < 2:
        raise DegenerateInput("inflection lines need degree >= 2")
    charts = flag_charts(C)
    for ch in charts:
        if not is_zero_dimensional(ch.ideal.groebner(limits=limits)):
            raise DegenerateInput(f"inflection flag scheme is not finite in chart {ch.label}")
    by_label = {ch.label: ch for ch in charts}
    rep = scheme_report(_image_charts(by_label, False, limits), C.field, limits, seed=seed)
    rep.notes = {"level": "lines", "degree": C.degree, "curve": str(C.F)}
    return rep


def inflection_prediction(C: PlaneCurve) -> CountPrediction:
    return plucker_counts(C.degree, C.field.p)


def inflection_verdict(flags: SchemeReport, prediction: CountPrediction) -> str:
    """PASS when the flag scheme has the predicted points, all of the predicted length."""
    ok = flags.radical_degree == prediction.points and all(
        P.multiplicity == prediction.multiplicity for P in flags.points
    )
    return "PASS" if ok else "FAIL"


def flex_hypotheses(P) -> bool:
    """Smooth point, tangent line with contact exactly 3 (so no line of ``C`` through it)."""
    return bool(P.extra.get("smooth_point")) and P.extra.get("contact_order") == 3


# -- tangency correspondences ------------------------------------------------------------


def _tangency_names(j: int, t: int) -> list[str]:
    return [L[k] for k in range(3) if k != j] + [f"u{i + 1}" for i in range(t)]


def _line_basis(kind: int):
    """Basis ``(e, f)`` of the line's coordinates ``(x_a, x_b)``; points are ``e + u f``.

    Kind 0 is ``x_a = 1``, kind 1 is ``x_b = 1``; kind ``c >= 2`` is
    ``(u, 1 + s u)`` with ``s`` the element encoded by ``c - 1``.  Kind ``c``
    misses exactly the point ``f``, and these points are pairwise distinct, so
    any ``t`` points of a line lie together in one of the first ``t + 1`` kinds.
    """
    if kind == 0:
        return (1, 0), (0, 1)
    if kind == 1:
        return (0, 1), (1, 0)
    return (0, 1), (1, kind - 1)


def _tangency_generators(C: PlaneCurve, T: PolynomialRing, j: int, kinds, lvals=None):
    """Generators for ``t`` points on the line ``l`` (with ``l_j = 1``) tangent to ``C``.

    Point ``i`` lies at ``e + u_i f`` in the basis of its kind; ``x_j`` is solved
    from the incidence.  ``lvals`` fixes the line instead of leaving ``l``
    variable.  Returns one list of generators per point.
    """
    a, b = [k for k in range(3) if k != j]
    if lvals is None:
        la, lb = T.gen(L[a]), T.gen(L[b])
    else:
        la, lb = _cst(T, lvals[a]), _cst(T, lvals[b])
    lv = [None, None, None]
    lv[j], lv[a], lv[b] = T.one(), la, lb
    grads = [C.F.diff(k) for k in range(3)]
    out = []
    for i, kind in enumerate(kinds):
        e, f = _line_basis(kind)
        u = T.gen(f"u{i + 1}")
        p = [None, None, None]
        p[a] = _cst(T, e[0]) + u * _cst(T, f[0])
        p[b] = _cst(T, e[1]) + u * _cst(T, f[1])
        p[j] = -(lv[a] * p[a] + lv[b] * p[b])
        g = [gr.substitute(p, T) for gr in grads]
        out.append([C.F.substitute(p, T),
                    lv[0] * g[1] - lv[1] * g[0], lv[0] * g[2] - lv[2] * g[0], lv[1] * g[2] - lv[2] * g[1]])
    return out


def _divided_differences(T: PolynomialRing, gens, t: int) -> list[Polynomial]:
    """Newton divided differences of the point-1 generators in ``u_1, ..., u_t``.

    Away from the diagonals they generate the same ideal as the generators
    for all ``t`` points, but they no longer vanish on the diagonals.
    """
    out = list(gens)
    level = list(gens)
    for k in range(2, t + 1):
        prev, cur = T.gen(f"u{k - 1}"), T.gen(f"u{k}")
        images = T.gens()
        images[T.index(f"u{k - 1}")] = cur
        level = [(g - g.substitute(images, T)).exact_div(prev - cur) for g in level]
        out += level
    return out


def _diagonal_equation(T, t: int) -> Polynomial:
    f = T.one()
    for i, k in itertools.combinations(range(t), 2):
        f = f * (T.gen(f"u{i + 1}") - T.gen(f"u{k + 1}"))
    return f


def _tangency_projective(j, kinds):
    a, b = [k for k in range(3) if k != j]

    def to_proj(coords, K):
        lv = [0, 0, 0]
        lv[j], lv[a], lv[b] = 1, coords[0], coords[1]
        parts = []
        for i, kind in enumerate(kinds):
            e, f = _line_basis(kind)
            u = coords[2 + i]
            p = [0, 0, 0]
            p[a] = K.add(e[0], K.mul(u, f[0]))
            p[b] = K.add(e[1], K.mul(u, f[1]))
            p[j] = K.neg(K.add(K.mul(lv[a], p[a]), K.mul(lv[b], p[b])))
            parts.append(tuple(p))
        return tuple(parts) + (tuple(lv),)

    return to_proj


def tangency_scheme(C: PlaneCurve, t: int, exclude_diagonal: bool = True,
                    limits: Limits | None = None) -> list[Chart]:
    """Charts of ``{(p_1, ..., p_t, H) : H tangent to C at every p_i}``.

    Charts are labelled ``(j, kinds)``: the line has ``l_j = 1`` and point ``i``
    is parametrized by ``kinds[i]`` (see :func:`_line_basis`).  With
    ``exclude_diagonal`` all points share one of ``t + 1`` kinds, the
    equations of points ``2..t`` are replaced by divided differences, and what
    is left on the diagonals is removed by saturating with the product of the
    ``u_i - u_k``.  Without it every combination of kinds 0 and 1 is used.
    """
    if t < 1:
        raise ValueError("need t >= 1")
    K = C.field
    if exclude_diagonal and t > 1:
        if t + 1 > K.q + 1:
            raise ValueError(f"{t} distinct points need {t + 1} line parametrizations; field too small")
        combos = [(c,) * t for c in range(t + 1)]
    else:
        combos = list(itertools.product((0, 1), repeat=t))
    out = []
    for j in range(3):
        for kinds in combos:
            T = PolynomialRing(K, _tangency_names(j, t))
            per_point = _tangency_generators(C, T, j, kinds)
            if exclude_diagonal and t > 1:
                I = Ideal(T, _divided_differences(T, per_point[0], t))
                diag = _diagonal_equation(T, t)
                if is_zero_dimensional(I.groebner(limits=limits)):
                    I = saturate_zero_dim(I, diag, limits)
                else:
                    I = saturation(I, diag, limits)
            else:
                I = Ideal(T, [g for gens in per_point for g in gens])
            out.append(Chart((j, kinds), I, _tangency_projective(j, kinds)))
    return out


def tangency_fiber(C: PlaneCurve, H, t: int, field: FiniteField | None = None, kinds=None) -> Ideal:
    """Fiber over a fixed line ``H`` (coordinates in ``field``): an ideal in ``u_1..u_t``."""
    K = field or C.field
    H = normalize_projective(K, H)
    j = next(k for k, c in enumerate(H) if c)
    kinds = tuple(kinds) if kinds is not None else (0,) * t
    T = PolynomialRing(K, [f"u{i + 1}" for i in range(t)])
    CK = C if K is C.field else PlaneCurve(C.F.map_coefficients(projective_ring(K)))
    per_point = _tangency_generators(CK, T, j, kinds, lvals=H)
    return Ideal(T, [g for gens in per_point for g in gens])


def _line_param(K, H, point):
    """Line chart ``j``, a parametrization kind containing ``point``, and its ``u``."""
    H = normalize_projective(K, H)
    j = next(k for k, c in enumerate(H) if c)
    a, b = [k for k in range(3) if k != j]
    pa, pb = point[a], point[b]
    for kind in range(K.q + 1):
        e, f = _line_basis(kind)
        det = K.sub(K.mul(e[0], f[1]), K.mul(e[1], f[0]))
        alpha = K.sub(K.mul(pa, f[1]), K.mul(pb, f[0]))
        if alpha:
            beta = K.sub(K.mul(e[0], pb), K.mul(e[1], pa))
            # point = (alpha e + beta f) / det, so u = beta / alpha
            return j, kind, K.mul(beta, K.inv(alpha))
    raise ValueError("point is not on a line chart")


def gamma_length(C: PlaneCurve, point, H, field: FiniteField | None = None, limits=None) -> int:
    """Length at ``(p, H)`` of the fiber over ``H`` of ``(p, H) -> H`` on tangent pairs."""
    return gamma_dual_length(C, [point], H, field, limits)


def gamma_dual_length(C: PlaneCurve, points, H, field: FiniteField | None = None, limits=None) -> int:
    """Length at ``(p_1, ..., p_t, H)`` of the fiber over ``H`` of the tangency correspondence."""
    K = field or C.field
    H = normalize_projective(K, H)
    kinds, us = [], []
    for p in points:
        j, c, u = _line_param(K, H, normalize_projective(K, p))
        kinds.append(c)
        us.append(u)
    I = tangency_fiber(C, H, len(points), K, kinds)
    return local_multiplicity(I, us, K, limits)


# -- bitangents / theta-hyperplanes --------------------------------------------------------


def _line_images(charts, limits):
    """Scheme-theoretic image in the dual plane, one affine chart per ``l_j = 1``."""
    out = []
    for j in range(3):
        image = None
        for ch in charts:
            if ch.label[0] != j:
                continue
            names = list(ch.ideal.ring.names[2:])
            if is_zero_dimensional(ch.ideal.groebner(limits=limits)):
                E = eliminate_zero_dim(ch.ideal, names, limits)
            else:
                E = eliminate(ch.ideal, names, limits)
            image = E if image is None else intersect(image, E, limits)
        out.append(Chart(j, image, lambda coords, K, j=j: (_insert_one(coords, j),)))
    return out


def _fiber_points(C, charts, H, K, limits, seed):
    """Points of the tangency scheme over ``H`` with their fiber lengths."""
    H = normalize_projective(K, H)
    j = next(k for k, c in enumerate(H) if c)
    seen = {}
    for ch in charts:
        if ch.label[0] != j:
            continue
        R = ch.ideal.ring
        T = PolynomialRing(K, R.names[2:])
        images = [_cst(T, H[k]) for k in range(3) if k != j] + T.gens()
        fib = Ideal(T, [g.substitute(images, T) for g in ch.ideal.generators])
        G = fib.groebner(limits=limits)
        if G.is_unit():
            continue
        if not is_zero_dimensional(G):
            raise DegenerateInput("fiber of the tangency scheme over a line is not finite")
        for P in solve_points(fib, limits, seed=seed):
            M = P.field
            e = embedding(K, M)
            full = ch.to_projective(tuple(e(h) for k, h in enumerate(H) if k != j) + P.coords, M)
            parts = tuple(normalize_projective(M, part) for part in full[:-1])
            key = (P.residue_degree, canonical_representative(M, parts, K.q, P.residue_degree))
            if key in seen:
                continue
            seen[key] = {
                "points": [[M.format(c) for c in part] for part in key[1]],
                "residue_degree": P.residue_degree,
                "length": local_multiplicity(fib, P.coords, M, limits),
            }
    return sorted(seen.values(), key=lambda d: (d["residue_degree"], d["points"]))


def theta_scheme_quartic(C: PlaneCurve, limits: Limits | None = None, seed: int = 0,
                         check_smooth: bool = True) -> SchemeReport:
    """Bitangent lines of a smooth plane quartic as a report on the dual plane.

    The tangency scheme for two distinct points is built chart by chart and
    both points are eliminated, giving the scheme-theoretic image.  Each image
    line ``H`` is then given the length of the fiber component over ``H`` at an
    ordered pair of tangency points; that fiber length is the multiplicity
    recorded on the point.  The image ideal's own local lengths are kept in
    ``extra['image_length']`` and ``notes['image_degree']``.
    """
    if C.degree != 4:
        raise ValueError("theta-hyperplanes of a plane quartic need degree 4")
    if check_smooth and not is_smooth(C, limits):
        raise DegenerateInput("the quartic is singular")
    charts = tangency_scheme(C, 2, True, limits)
    for ch in charts:
        if not is_zero_dimensional(ch.ideal.groebner(limits=limits)):
            raise DegenerateInput(f"tangency scheme not finite in chart {ch.label}")
    image = scheme_report(_line_images(charts, limits), C.field, limits, seed=seed)
    points = []
    preimage = 0
    uniform = True
    for P in image.points:
        K = P.field
        fib = _fiber_points(C, charts, P.projective[0], K, limits, seed)
        lengths = sorted({f["length"] for f in fib})
        if len(lengths) != 1:
            uniform = False
        fiber_length = sum(f["residue_degree"] * f["length"] for f in fib)
        preimage += P.residue_degree * fiber_length
        Q = type(P)(P.coords, K, P.residue_degree, P.chart, max(lengths) if lengths else 0, P.projective)
        Q.extra = {
            "line": [K.format(c) for c in P.projective[0]],
            "image_length": P.multiplicity,
            "fiber_length": fiber_length,
            "tangency_points": fib,
        }
        points.append(Q)
    mults = {Q.multiplicity for Q in points}
    rep = SchemeReport(
        base_field=C.field,
        fingerprint=image.fingerprint,
        total_degree=sum(Q.residue_degree * Q.multiplicity for Q in points),
        radical_degree=sum(Q.residue_degree for Q in points),
        points=points,
        uniform_multiplicity=mults.pop() if len(mults) == 1 else None,
        seed=seed,
        chart_degrees=image.chart_degrees,
        notes={
            "level": "bitangent lines",
            "multiplicity": "fiber length over the line at one ordered pair of tangency points",
            "image_degree": image.total_degree,
            "preimage_degree": preimage,
            "ordering_factor": 2,
            "fiber_lengths_uniform": uniform,
            "curve": str(C.F),
        },
    )
    rep.check()
    return rep


def hasse_witt_matrix(C: PlaneCurve) -> list[list[int]]:
    """Hasse-Witt matrix of a smooth plane quartic.

    Entry ``(i, j)`` is the coefficient of ``x^((p-1)(1,1,1) + p e_i - e_j)``
    in ``F^(p-1)``.
    """
    if C.degree != 4:
        raise ValueError("Hasse-Witt matrix is implemented for plane quartics")
    K = C.field
    p = K.p
    G = C.F ** (p - 1) if p > 2 else C.F
    R = G.ring
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            e = [p - 1] * 3
            e[i] += p
            e[j] -= 1
            row.append(G.terms.get(R.monomial(tuple(e)), 0))
        out.append(row)
    return out


def is_ordinary(C: PlaneCurve) -> bool:
    """``p``-rank equal to the genus; for a quartic in char 2 this means 7 bitangents."""
    return rank(C.field, hasse_witt_matrix(C)) == 3


def hyperflex_charts(C: PlaneCurve) -> list[Ideal]:
    """Ideals of ``(p, v)`` with ``F(p + s v) = O(s^4)``: lines meeting ``C`` in one point.

    ``p`` has ``x_c = 1`` and the direction ``v`` has ``v_c = 0`` and one more
    coordinate normalized, giving 6 charts in 3 variables each.
    """
    K = C.field
    out = []
    for c in range(3):
        d, e = [k for k in range(3) if k != c]
        for free in (True, False):
            R = PolynomialRing(K, ["a", "b", "w", "s"])
            a, b, w, s = R.gens()
            p = [None, None, None]
            p[c], p[d], p[e] = R.one(), a, b
            v = [R.zero(), R.zero(), R.zero()]
            if free:
                v[d], v[e] = R.one(), w
            else:
                v[e] = R.one()
            G = C.F.substitute([p[k] + s * v[k] for k in range(3)], R)
            gens = {}
            for m, coef in G.terms.items():
                ex = R.exponents(m)
                if ex[3] < C.degree:
                    key = ex[3]
                    mono = R.monomial(ex[:3] + (0,))
                    gens.setdefault(key, {})[mono] = coef
            T = PolynomialRing(K, ["a", "b", "w"])
            polys = [Polynomial(T, {T.monomial(R.exponents(m)[:3]): cf for m, cf in terms.items()})
                     for k, terms in sorted(gens.items())]
            if not free:
                polys.append(T.gen("w"))
            out.append(Ideal(T, polys))
    return out


def has_hyperflex(C: PlaneCurve, limits: Limits | None = None) -> bool:
    return not all(I.groebner(limits=limits).is_unit() for I in hyperflex_charts(C))


def general_quartic(C: PlaneCurve, limits: Limits | None = None) -> bool:
    """Sampling predicate for bitangent counts: no hyperflex, and ordinary in char 2."""
    if C.field.p == 2 and not is_ordinary(C):
        return False
    return not has_hyperflex(C, limits)


def theta_prediction(C: PlaneCurve) -> CountPrediction:
    return theta_counts(3, C.field.p)


def theta_verdict(rep: SchemeReport, prediction: CountPrediction) -> str:
    ok = (
        rep.radical_degree == prediction.points
        and rep.total_degree == prediction.total
        and all(P.multiplicity == prediction.multiplicity for P in rep.points)
    )
    return "PASS" if ok else "FAIL"


def find_bitangents(C: PlaneCurve, field: FiniteField | None = None, seed: int = 0) -> list[tuple]:
    """Lines over ``field`` meeting ``C`` in two distinct points, each with contact 2.

    Brute force over all lines: ``F`` restricted to the line must be a constant
    times the square of a squarefree binary quadratic.  Returns
    ``(H, [p1, p2], L)`` where ``L`` is a field containing both points.
    """
    K = field or C.field
    F = C.F if K is C.field else C.F.map_coefficients(projective_ring(K))
    out = []
    for H in _all_lines(K):
        j = next(k for k, c in enumerate(H) if c)
        a, b = [k for k in range(3) if k != j]
        coeffs = _restrict_to_line(F, H, j, a, b, K)
        deg = upoly.degree(coeffs)
        sq = upoly.squarefree_decomposition(K, coeffs) if deg > 0 else []
        if len(sq) != 1 or sq[0][1] != 2:
            continue
        g = sq[0][0]
        if deg == 4 and upoly.degree(g) == 2:
            at_infinity = False
        elif deg == 2 and upoly.degree(g) == 1:
            # the other contact point is where the parameter u is infinite
            at_infinity = True
        else:
            continue
        M = K if at_infinity or len(upoly.factor(K, g, seed)) == 2 else extension(K, 2)
        e = embedding(K, M)
        us = upoly.roots(M, [e(c) for c in g], seed)
        inv = M.inv(e(H[j]))
        pts = []
        for u in us:
            p = [0, 0, 0]
            p[a], p[b] = 1, u
            p[j] = M.neg(M.mul(M.add(e(H[a]), M.mul(e(H[b]), u)), inv))
            pts.append(normalize_projective(M, p))
        if at_infinity:
            p = [0, 0, 0]
            p[b] = 1
            p[j] = M.neg(M.mul(e(H[b]), inv))
            pts.append(normalize_projective(M, p))
        out.append((H, pts, M))
    return out


def _all_lines(K):
    for j in range(3):
        for rest in itertools.product(range(K.q), repeat=2 - j):
            yield tuple([0] * j + [1] + list(rest))


def _restrict_to_line(F, H, j, a, b, K):
    # points (x_a, x_b) = (1, u), x_j = -(H_a + H_b u) / H_j
    R = PolynomialRing(K, ["u"])
    u = R.gen(0)
    inv = K.inv(H[j])
    p = [None, None, None]
    p[a] = R.one()
    p[b] = u
    p[j] = (_cst(R, H[a]) + _cst(R, H[b]) * u).scale(K.neg(inv))
    f = F.substitute(p, R)
    coeffs = [0] * (max(f.total_degree(), 0) + 1)
    for m, c in f.terms.items():
        coeffs[R.exponents(m)[0]] = c
    return upoly.trim(coeffs)


# -- fiber linearity ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _monomials(d: int) -> tuple:
    return tuple(monomials_of_degree(3, d))


def _flag_conditions(F: Polynomial, point, line, K) -> list[int]:
    vals = [F.evaluate(point, K)]
    vs = _perp_elements(line, K)
    grads = [F.diff(i).evaluate(point, K) for i in range(3)]
    hess = {(i, j): F.second_derivative(i, j).evaluate(point, K) for i in range(3) for j in range(i, 3)}
    for v in vs:
        acc = 0
        for i in range(3):
            acc = K.add(acc, K.mul(grads[i], v[i]))
        vals.append(acc)
    for v in vs:
        acc = 0
        for (i, j), h in hess.items():
            acc = K.add(acc, K.mul(h, K.mul(v[i], v[j])))
        vals.append(acc)
    return vals


def _perp_elements(line, K):
    l0, l1, l2 = line
    return [(0, l2, K.neg(l1)), (K.neg(l2), 0, l0), (l1, K.neg(l0), 0)]


def fiber_linearity_check(flag: Flag, d: int, rng: random.Random | None = None) -> tuple[bool, int]:
    """Conditions on degree-``d`` forms to have an inflection flag at ``flag``.

    Builds the 7 x (N_d + 1) matrix of the conditions on the monomial basis,
    confirms on random forms that evaluating the conditions equals applying
    the matrix (so they are linear), and returns ``(is_linear, rank)``.
    """
    K = flag.field
    R = projective_ring(K)
    mons = _monomials(d)
    cols = [_flag_conditions(Polynomial(R, {R.monomial(e): 1}), flag.point, flag.line, K) for e in mons]
    rows = [[cols[c][r] for c in range(len(mons))] for r in range(7)]
    rng = rng or random.Random(0)
    linear = True
    for _ in range(2):
        coeffs = [K.random_element(rng) for _ in mons]
        F = Polynomial(R, {R.monomial(e): c for e, c in zip(mons, coeffs) if c})
        direct = _flag_conditions(F, flag.point, flag.line, K)
        via = []
        for row in rows:
            acc = 0
            for a, c in zip(row, coeffs):
                acc = K.add(acc, K.mul(a, c))
            via.append(acc)
        linear &= direct == via
    assert linear, "flag conditions failed to be linear in the coefficients"
    return linear, rank(K, rows)


def random_flag(K: FiniteField, rng: random.Random) -> Flag:
    while True:
        p = tuple(K.random_element(rng) for _ in range(3))
        if any(p):
            break
    basis = nullspace(K, [list(p)], 3)
    while True:
        s, t = K.random_element(rng), K.random_element(rng)
        line = tuple(K.add(K.mul(s, x), K.mul(t, y)) for x, y in zip(*basis))
        if any(line):
            return Flag(p, line, K)


# -- sampling -----------------------------------------------------------------------------


def random_form(d: int, K: FiniteField, rng: random.Random) -> Polynomial:
    R = projective_ring(K)
    while True:
        terms = {}
        for e in monomials_of_degree(3, d):
            c = K.random_element(rng)
            if c:
                terms[R.monomial(e)] = c
        if terms:
            return Polynomial(R, terms)


def random_smooth_curve(d: int, field: FiniteField | str, seed: int = 0, predicate=None,
                        max_attempts: int = DEFAULT_MAX_ATTEMPTS, limits: Limits | None = None) -> PlaneCurve:
    """Rejection-sample a smooth curve of degree ``d`` that also satisfies ``predicate``.

    The attempt count and seed are stored in ``curve.meta``.
    """
    K = parse_field(field) if isinstance(field, str) else field
    if d < 1:
        raise ValueError("need d >= 1")
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        C = PlaneCurve(random_form(d, K, rng))
        if not is_smooth(C, limits):
            continue
        if predicate is not None and not predicate(C):
            continue
        C.meta = {"seed": seed, "attempts": attempt}
        return C
    raise SamplingFailure(
        f"no curve of degree {d} over {K!r} passed within {max_attempts} attempts; try a larger field"
    )


def sample_inflection_curve(d: int, field: FiniteField | str, seed: int = 0,
                            max_attempts: int = DEFAULT_MAX_ATTEMPTS, limits: Limits | None = None):
    """Smooth curve whose inflection flags are finite and all satisfy ``flex_hypotheses``.

    Returns ``(curve, flag_report)``; the report is the one computed by the predicate.
    """
    found = {}

    def predicate(C):
        try:
            rep = inflection_flag_scheme(C, limits, seed)
        except DegenerateInput:
            return False
        if not all(flex_hypotheses(P) for P in rep.points):
            return False
        found["flags"] = rep
        return True

    C = random_smooth_curve(d, field, seed, predicate, max_attempts, limits)
    return C, found["flags"]


def _rational_points(C: PlaneCurve, K: FiniteField):
    F = C.F if K is C.field else C.F.map_coefficients(projective_ring(K))
    for j in range(3):
        for rest in itertools.product(range(K.q), repeat=2 - j):
            p = tuple([0] * j + [1] + list(rest))
            if not F.evaluate(p, K):
                yield p


def simple_tangents(C: PlaneCurve, field: FiniteField | None = None, count: int = 3,
                    limits: Limits | None = None) -> list[tuple]:
    """Rational ``(p, H)`` with ``p`` smooth and ``H`` its tangent, of contact exactly 2."""
    K = field or C.field
    CK = C if K is C.field else PlaneCurve(C.F.map_coefficients(projective_ring(K)))
    out = []
    for p in _rational_points(CK, K):
        grad = _gradient_at(CK, p, K)
        if not any(grad):
            continue
        H = normalize_projective(K, grad)
        if intersection_multiplicity(CK, p, H, K, limits) == 2:
            out.append((p, H))
            if len(out) >= count:
                break
    return out


def verified_bitangents(C: PlaneCurve, field: FiniteField | None = None, seed: int = 0,
                        limits: Limits | None = None) -> list[tuple]:
    """``find_bitangents`` output restricted to lines of contact exactly 2 at both points.

    Returns ``(H, [p1, p2], M, H_M)`` with ``H_M`` the line's coordinates in ``M``.
    """
    K = field or C.field
    out = []
    for H, pts, M in find_bitangents(C, K, seed):
        e = embedding(K, M)
        HM = tuple(e(h) for h in H)
        if len(pts) == 2 and all(intersection_multiplicity(C, p, HM, M, limits) == 2 for p in pts):
            out.append((H, pts, M, HM))
    return out
