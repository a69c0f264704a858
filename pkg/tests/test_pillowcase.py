from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from furuta_ohta.errors import NonTransverse, NonUnimodular, NotInvariant, ValidationError
from furuta_ohta.manifolds import FIBER_SUM_MATRIX, surgery_matrix
from furuta_ohta.pillowcase import (
    CubePoint,
    PLCurve,
    PlaneImage,
    apply_gluing,
    boundary_of_v_counts,
    canonicalize,
    central_classes,
    inverse_transpose,
    pillowcase_singular_points,
    random_closed_curve,
    signed_intersection_count,
    standard_planes,
    surgery_count_identity,
    wrap,
)

PLANES = standard_planes()
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=24)
points = st.tuples(rationals, rationals, rationals)
IDENTITY = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@st.composite
def unimodular(draw):
    # products of elementary matrices and signed permutations
    m = sympy.eye(3)
    for _ in range(draw(st.integers(0, 4))):
        i, j = draw(st.permutations(range(3)))[:2]
        e = sympy.eye(3)
        e[i, j] = draw(st.integers(-2, 2))
        m = m * e
    if draw(st.booleans()):
        m = m * sympy.Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    return tuple(tuple(int(x) for x in m.row(i)) for i in range(3))


def matmul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3))


# -- canonical form ----------------------------------------------------------------

def test_canonicalize_examples():
    assert canonicalize((F(7, 10), F(1, 5), F(3, 10))).canonical.as_tuple() == (F(3, 10), F(-1, 5), F(-3, 10))
    assert canonicalize((0, 0, 0)).canonical.as_tuple() == (0, 0, 0)
    assert canonicalize((F(1, 2),) * 3).canonical.as_tuple() == (F(1, 2),) * 3


def test_floats_are_read_as_decimals():
    assert canonicalize((0.7, 0.2, 0.3)) == canonicalize((F(7, 10), F(1, 5), F(3, 10)))


def test_wrap_range():
    assert wrap(F(1, 2)) == F(1, 2)
    assert wrap(F(-1, 2)) == F(1, 2)
    assert wrap(F(3, 4)) == F(-1, 4)


@given(points)
def test_canonicalize_idempotent(v):
    c = canonicalize(v)
    assert canonicalize(c.canonical) == c


@given(points, st.tuples(*[st.integers(-3, 3)] * 3))
def test_canonicalize_respects_involution_and_translation(v, shift):
    neg = tuple(-x for x in v)
    moved = tuple(x + s for x, s in zip(v, shift))
    assert canonicalize(v) == canonicalize(neg) == canonicalize(moved)


def test_eight_central_classes():
    classes = central_classes()
    assert len(classes) == 8
    assert all(c.is_central for c in classes)


@pytest.mark.parametrize("name", ["P_N", "P_M", "P_0"])
def test_four_central_classes_per_plane(name):
    assert len(pillowcase_singular_points(PLANES[name])) == 4


def test_pn_singular_points():
    h = F(1, 2)
    expected = {canonicalize(p) for p in [(0, 0, 0), (0, 0, h), (0, h, 0), (0, h, h)]}
    assert pillowcase_singular_points(PLANES["P_N"]) == expected


def test_pm_singular_points_have_y_zero():
    assert all(p.canonical.y == 0 for p in pillowcase_singular_points(PLANES["P_M"]))


def test_p1_quotient_has_four_corners():
    pts = pillowcase_singular_points(PLANES["P_1"])
    assert len(pts) == 4
    assert all((p.canonical.x + p.canonical.y).denominator == 1 for p in pts)


def test_shifted_plane_is_not_invariant():
    p = PlaneImage(CubePoint(F(1, 3), 0, 0), ((0, 1, 0), (0, 0, 1)), (1, 0, 0), "x=1/3")
    with pytest.raises(NotInvariant):
        pillowcase_singular_points(p)


# -- gluing action -----------------------------------------------------------------

def test_phi1_maps_pn_onto_p1():
    image = apply_gluing(surgery_matrix(1, 1), PLANES["P_N"])
    assert image.coincides_with(PLANES["P_1"])
    for i in range(-4, 5):
        x = F(i, 9)
        assert image.contains((x, -x, F(1, 7)))
        assert not image.contains((x, -x + F(1, 5), F(1, 7)))


def test_phi0_maps_pn_into_pm():
    image = apply_gluing(surgery_matrix(0, 1), PLANES["P_N"])
    assert image.coincides_with(PLANES["P_M"])


def test_identity_is_trivial():
    for plane in PLANES.values():
        assert apply_gluing(IDENTITY, plane) == plane


def test_fiber_sum_matrix_swaps_x_and_y():
    p = CubePoint(F(1, 5), F(-1, 3), F(1, 7))
    assert apply_gluing(FIBER_SUM_MATRIX, p) == CubePoint(F(-1, 3), F(1, 5), F(1, 7))
    assert apply_gluing(FIBER_SUM_MATRIX, PLANES["P_N"]).coincides_with(PLANES["P_M"])


def test_non_unimodular_rejected():
    with pytest.raises(NonUnimodular):
        inverse_transpose(((2, 0, 0), (0, 1, 0), (0, 0, 1)))


@given(unimodular())
def test_inverse_transpose_matches_sympy(m):
    expected = sympy.Matrix(m).inv().T
    assert inverse_transpose(m) == tuple(tuple(int(x) for x in expected.row(i)) for i in range(3))


@given(unimodular(), unimodular(), points)
def test_gluing_is_functorial_on_points(a, b, v):
    p = CubePoint.of(v)
    assert apply_gluing(matmul(a, b), p) == apply_gluing(a, apply_gluing(b, p))
    c = canonicalize(v)
    assert apply_gluing(matmul(a, b), c) == apply_gluing(a, apply_gluing(b, c))


@given(unimodular(), unimodular(), st.sampled_from(sorted(PLANES)))
def test_gluing_is_functorial_on_planes(a, b, name):
    s = PLANES[name]
    lhs = apply_gluing(matmul(a, b), s)
    rhs = apply_gluing(a, apply_gluing(b, s))
    assert lhs.coincides_with(rhs)
    assert lhs.primitive_normal == rhs.primitive_normal


@given(unimodular(), st.sampled_from(sorted(PLANES)), rationals, rationals)
def test_gluing_maps_plane_points_to_image(m, name, s1, s2):
    s = PLANES[name]
    u, w = s.spanning
    v = tuple(b + s1 * x + s2 * y for b, x, y in zip(s.basepoint.as_tuple(), u, w))
    assert s.contains(v)
    assert apply_gluing(m, s).contains(apply_gluing(m, CubePoint.of(v)))


@given(unimodular(), st.sampled_from(sorted(PLANES)))
def test_gluing_preserves_level_and_invariance(m, name):
    s = PLANES[name]
    image = apply_gluing(m, s)
    assert image.is_involution_invariant() == s.is_involution_invariant()
    assert len(pillowcase_singular_points(image)) == 4


# -- crossings ---------------------------------------------------------------------

def test_single_crossing_example():
    seg = PLCurve([(F(-1, 4), F(3, 8), 0), (F(-1, 4), F(5, 8), 0)])
    assert signed_intersection_count(seg, PLANES["P_0"]) == 1
    back = PLCurve(list(reversed(seg.vertices)))
    assert signed_intersection_count(back, PLANES["P_0"]) == -1


def test_small_loop_misses_all_planes():
    c = F(-1, 4), F(1, 4)
    r = F(1, 20)
    loop = PLCurve([(c[0] + r, c[1], F(1, 9)), (c[0], c[1] + r, F(1, 9)), (c[0] - r, c[1], F(1, 9)),
                    (c[0], c[1] - r, F(1, 9)), (c[0] + r, c[1], F(1, 9))])
    rep = surgery_count_identity(loop)
    assert (rep.count_p1, rep.count_pn, rep.count_p0) == (0, 0, 0) and rep.holds


def test_loop_crossing_p0_twice():
    z = F(1, 9)
    loop = PLCurve([(F(1, 4), F(1, 3), z), (F(1, 4), F(2, 3), z), (F(1, 5), F(2, 3), z),
                    (F(1, 5), F(1, 3), z), (F(1, 4), F(1, 3), z)])
    rep = surgery_count_identity(loop)
    assert (rep.count_p1, rep.count_pn, rep.count_p0) == (0, 0, 0) and rep.holds
    n = 0
    for a, b in loop.segments():
        n += abs(signed_intersection_count(PLCurve([a, b]), PLANES["P_0"]))
    assert n == 2


def test_vertex_on_plane_is_non_transverse():
    with pytest.raises(NonTransverse) as err:
        signed_intersection_count(PLCurve([(0, F(1, 3), F(1, 3)), (F(1, 4), F(1, 3), F(1, 3))]),
                                  PLANES["P_N"])
    assert "(0, 1/3, 1/3)" in str(err.value)


def test_crossing_at_central_class_is_non_transverse():
    with pytest.raises(NonTransverse):
        signed_intersection_count(PLCurve([(F(-1, 4), 0, 0), (F(1, 4), 0, 0)]), PLANES["P_N"])


def test_curve_through_central_class_rejected():
    with pytest.raises(NonTransverse):
        surgery_count_identity(PLCurve([(F(1, 4), F(1, 4), F(1, 3)), (F(3, 4), F(3, 4), F(2, 3))]))


def test_degenerate_curves_rejected():
    with pytest.raises(ValidationError):
        PLCurve([(0, 0, 0)])
    with pytest.raises(ValidationError):
        PLCurve([(0, 0, 0), (0, 0, 0)])


@given(st.integers(0, 2 ** 32 - 1))
def test_random_closed_curves_satisfy_identity(seed):
    rng = random.Random(seed)
    c = random_closed_curve(rng, [PLANES["P_1"], PLANES["P_N"], PLANES["P_0"]])
    assert c.closed
    rep = surgery_count_identity(c)
    assert rep.holds
    delta = [e - s for s, e in zip(c.vertices[0], c.vertices[-1])]
    assert rep.count_pn == delta[0]
    assert rep.count_p0 == delta[1]
    assert rep.count_p1 == delta[0] + delta[1]
    assert sum(boundary_of_v_counts(c).values()) == 0


def test_random_curves_are_seed_deterministic():
    a = random_closed_curve(random.Random(7))
    b = random_closed_curve(random.Random(7))
    assert a == b


def test_chi_point_str():
    assert str(canonicalize((F(1, 2), 0, F(-1, 3)))) == "[(1/2, 0, 1/3)]"
