import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charpenum.enumgeo import (
    DegenerateInput,
    Flag,
    PlaneCurve,
    SamplingFailure,
    fiber_linearity_check,
    gamma_length,
    gauss_image_scheme,
    general_quartic,
    has_hyperflex,
    hasse_witt_matrix,
    inflection_flag_scheme,
    inflection_prediction,
    inflection_scheme,
    inflection_verdict,
    intersection_multiplicity,
    is_ordinary,
    is_smooth,
    random_flag,
    random_smooth_curve,
    sample_inflection_curve,
    simple_tangents,
    tangency_fiber,
)
from charpenum.ff import GF, FieldError

E_TEXT = "x0*x1*x2 + (x0 - x1)^3"


@pytest.fixture(scope="module")
def E():
    return PlaneCurve.parse("GF(3)", E_TEXT)


@pytest.fixture(scope="module")
def E_flags(E):
    return inflection_flag_scheme(E)


# -- curve files ---------------------------------------------------------------------


@pytest.mark.parametrize("head", ["GF(3)", "field: GF(3)", "field = GF(3)"])
def test_curve_file_headers(head):
    C = PlaneCurve.from_text(f"# a cubic\n{head}\n\nx0*x1*x2 +\n  (x0 - x1)^3  # continued\n")
    assert C.degree == 3 and C.field is GF(3)
    assert PlaneCurve.from_text(C.to_text()).F == C.F


def test_curve_file_extension_field_round_trip():
    C = PlaneCurve.from_text("GF(2^4; t^4+t+1)\n[0,1]*x0^3 + x1^3 + x2^3\n")
    assert PlaneCurve.from_text(C.to_text()).F == C.F


@pytest.mark.parametrize("text,exc", [
    ("GF(3)\n", ValueError),
    ("GF(6)\nx0^3\n", FieldError),
    ("GF(3)\nx0^3 + x1\n", ValueError),
    ("GF(3)\n0\n", ValueError),
    ("GF(3)\nx0^3 + x4\n", ValueError),
])
def test_curve_file_errors(text, exc):
    with pytest.raises(exc):
        PlaneCurve.from_text(text)


def test_flag_validation():
    K = GF(5)
    with pytest.raises(ValueError):
        Flag((1, 0, 0), (1, 0, 0), K)
    with pytest.raises(ValueError):
        Flag((0, 0, 0), (1, 0, 0), K)


# -- the singular cubic in characteristic 3 ------------------------------------------


def test_example_cubic_flags(E, E_flags):
    rows = [(P.extra["point"], P.extra["line"], P.multiplicity) for P in E_flags.points]
    assert sorted(rows) == [
        (["0", "0", "1"], ["0", "1", "0"], 3),
        (["0", "0", "1"], ["1", "0", "0"], 3),
        (["1", "1", "0"], ["0", "0", "1"], 3),
    ]
    assert E_flags.total_degree == 9 and E_flags.radical_degree == 3
    assert [P.extra["tangent_dimension"] for P in E_flags.points] == [1, 1, 1]
    assert all(P.extra["contact_order"] == 3 for P in E_flags.points)
    assert inflection_verdict(E_flags, inflection_prediction(E)) == "PASS"


def test_example_cubic_is_singular_at_the_node(E, E_flags):
    assert not is_smooth(E)
    smooth = {tuple(P.extra["point"]): P.extra["smooth_point"] for P in E_flags.points}
    assert smooth == {("0", "0", "1"): False, ("1", "1", "0"): True}


def test_example_cubic_point_and_line_images(E, E_flags):
    pts = inflection_scheme(E, flags=E_flags)
    assert [(P.projective[0], P.multiplicity, P.extra["tangent_dimension"]) for P in pts.points] == [
        ((0, 0, 1), 5, 2),
        ((1, 1, 0), 3, 1),
    ]
    assert pts.total_degree == 8
    assert pts.related["flags"] is E_flags
    lines = gauss_image_scheme(E)
    assert sorted(P.projective[0] for P in lines.points) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert lines.uniform_multiplicity == 1


def test_smooth_conic_has_no_flexes():
    C = PlaneCurve.parse("GF(7)", "x0^2 + x1^2 + x2^2")
    rep = inflection_flag_scheme(C)
    assert rep.points == [] and rep.total_degree == 0


def test_line_is_degenerate():
    C = PlaneCurve.parse("GF(5)", "x0 + x1")
    with pytest.raises(DegenerateInput):
        inflection_flag_scheme(C)
    with pytest.raises(DegenerateInput):
        inflection_scheme(C)


def test_fermat_cubic_char_2():
    C = PlaneCurve.parse("GF(2)", "x0^3 + x1^3 + x2^3")
    assert is_smooth(C)
    rep = inflection_flag_scheme(C)
    assert rep.radical_degree == 9 and rep.uniform_multiplicity == 1
    assert inflection_verdict(rep, inflection_prediction(C)) == "PASS"
    # every point over GF(4) is a flex, so no tangent of contact exactly two exists
    assert simple_tangents(C, GF(2, 2)) == []


def test_sampled_cubic_gf7_lines_are_reduced():
    C, flags = sample_inflection_curve(3, "GF(7)", seed=1)
    assert flags.radical_degree == 9 and flags.uniform_multiplicity == 1
    lines = gauss_image_scheme(C)
    assert lines.radical_degree == 9 and lines.uniform_multiplicity == 1


# -- contact and tangency lengths ----------------------------------------------------


def test_intersection_multiplicity_examples(E):
    C = PlaneCurve.parse("GF(5)", "x0^2 - x1*x2")
    assert intersection_multiplicity(C, (0, 0, 1), (0, 1, 0)) == 2
    assert intersection_multiplicity(C, (0, 0, 1), (1, 0, 0)) == 1
    L = PlaneCurve.parse("GF(5)", "x0*(x1 - x2)")
    assert intersection_multiplicity(L, (0, 1, 0), (1, 0, 0)) is None


@pytest.mark.parametrize("field,expected", [("GF(5)", 1), ("GF(7)", 1), ("GF(2^2)", 2), ("GF(2)", 2)])
def test_gamma_length_depends_on_characteristic(field, expected):
    C = random_smooth_curve(3, field, seed=3, predicate=lambda C: bool(simple_tangents(C, count=1)))
    for p, H in simple_tangents(C):
        assert gamma_length(C, p, H) == expected


def test_tangency_fiber_is_zero_dimensional():
    C = random_smooth_curve(3, "GF(5)", seed=0)
    p, H = simple_tangents(C, count=1)[0]
    I = tangency_fiber(C, H, 1)
    assert tuple(I.ring.names) == ("u1",)
    assert I.groebner().degree() >= 1


# -- sampling ------------------------------------------------------------------------


def test_random_smooth_curve_meta_and_failure():
    C = random_smooth_curve(3, "GF(5)", seed=0)
    assert C.meta == {"seed": 0, "attempts": 2}
    assert random_smooth_curve(3, "GF(5)", seed=0).F == C.F
    with pytest.raises(SamplingFailure):
        random_smooth_curve(3, "GF(2)", seed=0, predicate=lambda C: False, max_attempts=3)
    with pytest.raises(ValueError):
        random_smooth_curve(0, "GF(5)")


# -- fiber linearity -----------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3])
def test_fiber_rank_at_fixed_flag(d):
    assert fiber_linearity_check(Flag((0, 0, 1), (1, 0, 0), GF(3)), d) == (True, 3)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(3, 1), (5, 1), (2, 2), (7, 1)]), st.integers(2, 5), st.integers(0, 2**32))
def test_fiber_conditions_linear_of_rank_three(pk, d, seed):
    rnd = random.Random(seed)
    K = GF(*pk)
    linear, r = fiber_linearity_check(random_flag(K, rnd), d, rnd)
    assert linear and r == 3


# -- quartic generality --------------------------------------------------------------


def test_hasse_witt_and_hyperflexes():
    Q = PlaneCurve.parse("GF(2)", "x0^4 + x1^4 + x2^4 + x0^2*x1^2 + x0*x1*x2^2")
    assert hasse_witt_matrix(Q) == [[0, 0, 0], [0, 0, 0], [0, 0, 1]]
    assert not is_ordinary(Q) and not general_quartic(Q)
    F = PlaneCurve.parse("GF(7)", "x0^4 + x1^4 + x2^4")
    assert is_smooth(F) and has_hyperflex(F) and not general_quartic(F)
    with pytest.raises(ValueError):
        hasse_witt_matrix(PlaneCurve.parse("GF(7)", "x0^3 + x1^3 + x2^3"))
