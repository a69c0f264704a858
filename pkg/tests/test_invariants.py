from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st
from sympy import ZZ
from sympy.matrices.normalforms import smith_normal_form
from test_knots import eig_signature

from furuta_ohta.catalog import FIGURE_EIGHT, TREFOIL, UNKNOT, builtin_catalog
from furuta_ohta.errors import NotAdmissible, NotAHomologySphere, Unresolvable, ValidationError
from furuta_ohta.invariants import (
    casson,
    check_admissibility,
    d0_invariant,
    excision_homology_test,
    excision_summands,
    expand_surgery_chain,
    fraction_str,
    lambda_fo,
)
from furuta_ohta.knots import alexander_second_derivative_at_1, is_qhs_branched_cover
from furuta_ohta.manifolds import (
    FIBER_SUM_MATRIX,
    S3,
    AbstractTorus,
    Excision,
    FiberSum,
    GluingMatrix,
    MappingTorus,
    MappingTorusOfBranchLocus,
    NamedSphere,
    Product,
    ProductTorus,
    Splice,
    SurgeryCore,
    SurgeryOneOverQ,
    TorusSurgery,
    ZeroSurgery,
    dehn_twist_matrix,
)

KNOTS = list(builtin_catalog().values())
S1S3 = Product(S3())


def surgered(knot, q):
    return TorusSurgery(S1S3, ProductTorus(knot), 1, q)


# -- Casson ------------------------------------------------------------------------

def test_casson_examples():
    assert casson(S3()).value == 0
    for q in range(-4, 5):
        assert casson(SurgeryOneOverQ(S3(), TREFOIL, q)).value == q
    assert casson(Splice(TREFOIL, FIGURE_EIGHT)).value == 0


def test_casson_rejects_zero_surgery():
    with pytest.raises(NotAHomologySphere):
        casson(ZeroSurgery(TREFOIL))


@pytest.mark.parametrize("k1,k2", list(product(KNOTS, KNOTS)))
def test_splice_symmetry(k1, k2):
    a = SurgeryOneOverQ(S3(), k1, 2)
    k1_in_a = type(k1)(a, k1.seifert, k1.label)
    assert casson(Splice(k1_in_a, k2)).value == casson(Splice(k2, k1_in_a)).value
    assert casson(Splice(k1, k2)).value == casson(Splice(k2, k1)).value


def test_named_sphere_passes_through():
    assert casson(NamedSphere("Σ(2,3,7)", Fraction(-1))).value == -1
    assert lambda_fo(Product(NamedSphere("Σ(2,3,7)", Fraction(-1)))).value == -1


# -- λ_FO examples -----------------------------------------------------------------

def test_lambda_fo_examples():
    assert lambda_fo(S1S3).value == 0
    assert lambda_fo(MappingTorus(2, TREFOIL)).value == Fraction(-1, 4)
    assert lambda_fo(MappingTorus(3, TREFOIL)).value == Fraction(-1, 2)


def test_values_serialise_as_fractions():
    out = lambda_fo(MappingTorus(2, TREFOIL)).to_json()
    assert out["value"] == "-1/4"
    assert out["trace"] and all({"formula", "operand", "value"} <= set(s) for s in out["trace"])
    assert fraction_str(Fraction(3)) == "3"


@pytest.mark.parametrize("knot,expected", [(UNKNOT, 0), (TREFOIL, 2), (FIGURE_EIGHT, -2)])
def test_d0_examples(knot, expected):
    assert d0_invariant(Product(ZeroSurgery(knot))).value == expected
    assert d0_invariant(TorusSurgery(S1S3, ProductTorus(knot), 0, 1)).value == expected


def test_d0_through_surgery_core_and_branch_locus():
    x = surgered(TREFOIL, 3)
    assert d0_invariant(TorusSurgery(x, SurgeryCore(), 0, 1)).value == 2
    m = MappingTorus(2, FIGURE_EIGHT)
    assert d0_invariant(TorusSurgery(m, MappingTorusOfBranchLocus(), 0, 1)).value == -2


def test_d0_abstract_torus_is_unresolvable():
    with pytest.raises(Unresolvable):
        d0_invariant(TorusSurgery(S1S3, AbstractTorus("T"), 0, 1))
    with pytest.raises(Unresolvable):
        lambda_fo(TorusSurgery(S1S3, AbstractTorus("T"), 1, 1))


def test_d0_rejects_non_zero_surgery():
    with pytest.raises(ValidationError):
        d0_invariant(S1S3)


def test_chain_examples():
    assert expand_surgery_chain(surgered(TREFOIL, 0), 0).value == 0
    assert expand_surgery_chain(surgered(TREFOIL, 3), 3).value == 3
    assert expand_surgery_chain(surgered(TREFOIL, -2), 2).value == -2
    with pytest.raises(ValidationError):
        expand_surgery_chain(surgered(TREFOIL, 3), 2)


@pytest.mark.parametrize("knot", KNOTS, ids=lambda k: k.label)
@pytest.mark.parametrize("q", range(-5, 6))
def test_path_independence(knot, q):
    a = lambda_fo(surgered(knot, q)).value
    b = casson(SurgeryOneOverQ(S3(), knot, q)).value
    c = expand_surgery_chain(surgered(knot, q), abs(q)).value
    assert a == b == c


# -- fiber sums and excision -------------------------------------------------------

def _pieces():
    out = []
    for k in KNOTS:
        out.append((S1S3, ProductTorus(k)))
        out.append((surgered(k, 2), SurgeryCore()))
        for n in (2, 3, 5):
            if is_qhs_branched_cover(k.seifert, n):
                out.append((MappingTorus(n, k), MappingTorusOfBranchLocus()))
    return out


PIECES = _pieces()


@given(st.sampled_from(PIECES), st.sampled_from(PIECES))
def test_fiber_sum_additivity(a, b):
    x = FiberSum(a[0], a[1], b[0], b[1])
    assert lambda_fo(x).value == lambda_fo(a[0]).value + lambda_fo(b[0]).value
    y = Excision(a[0], a[1], b[0], b[1], FIBER_SUM_MATRIX)
    assert lambda_fo(y).value == lambda_fo(x).value


@given(st.sampled_from(PIECES), st.sampled_from(PIECES), st.integers(-3, 3), st.sampled_from([1, -1]))
def test_excision_with_surgery_form_gluing(a, b, d, sign):
    # b = ±1, q = 0, p = 0: A = [[a, b, 0], [c, d, 0], [0, 0, 1]] with ad - bc = -1
    bb = sign
    aa = 1
    c = (aa * d + 1) * bb  # ad - bc = -1  with b = ±1
    glue = GluingMatrix([[aa, bb, 0], [c, d, 0], [0, 0, 1]])
    x = Excision(a[0], a[1], b[0], b[1], glue)
    side1, side2 = excision_summands(x)
    assert (side1.p, side1.q) == (1, bb * d)
    assert (side2.p, side2.q) == (1, -aa * bb)
    assert lambda_fo(x).value == lambda_fo(side1).value + lambda_fo(side2).value


@pytest.mark.parametrize("p,q", [(1, 0), (2, 3), (0, 1), (1, -1), (3, -2)])
def test_dehn_twist_excision_is_unresolvable(p, q):
    x = Excision(S1S3, ProductTorus(TREFOIL), S1S3, ProductTorus(FIGURE_EIGHT), dehn_twist_matrix(p, q))
    report = check_admissibility(x)
    if report.passed:
        with pytest.raises(Unresolvable) as err:
            lambda_fo(x)
        assert "[[" in str(err.value)
    else:
        with pytest.raises(NotAdmissible):
            lambda_fo(x)


def test_dehn_twist_needs_coprime_pair():
    with pytest.raises(ValidationError):
        dehn_twist_matrix(0, 0)


# -- admissibility -----------------------------------------------------------------

def test_admissibility_examples():
    r = check_admissibility(MappingTorus(6, TREFOIL))
    assert not r.passed and any("branched cover not QHS" in s for s in r.reasons)
    x = Excision(S1S3, ProductTorus(TREFOIL), S1S3, ProductTorus(UNKNOT), FIBER_SUM_MATRIX)
    assert check_admissibility(x).passed
    bad = GluingMatrix([[1, 2, 0], [0, -1, 0], [0, 0, 1]])  # b = 2, q = 0
    r = check_admissibility(Excision(S1S3, ProductTorus(TREFOIL), S1S3, ProductTorus(UNKNOT), bad))
    assert not r.passed and any("GCD" in s for s in r.reasons)


def test_not_admissible_names_subterm():
    with pytest.raises(NotAdmissible) as err:
        lambda_fo(FiberSum(MappingTorus(6, TREFOIL), MappingTorusOfBranchLocus(), S1S3, ProductTorus(UNKNOT)))
    assert "branched cover not QHS" in str(err.value)


def test_zero_one_surgery_is_not_admissible():
    with pytest.raises(NotAdmissible):
        lambda_fo(TorusSurgery(S1S3, ProductTorus(TREFOIL), 0, 1))


def test_torus_must_be_carried():
    with pytest.raises(NotAdmissible):
        lambda_fo(TorusSurgery(MappingTorus(2, TREFOIL), ProductTorus(TREFOIL), 1, 1))


# -- properties --------------------------------------------------------------------

@pytest.mark.parametrize("knot", KNOTS, ids=lambda k: k.label)
@pytest.mark.parametrize("n", range(2, 9))
def test_mapping_torus_consistency(knot, n):
    if not is_qhs_branched_cover(knot.seifert, n):
        with pytest.raises(NotAdmissible):
            lambda_fo(MappingTorus(n, knot))
        return
    ddelta = alexander_second_derivative_at_1(knot.seifert)
    sigs = sum(eig_signature(knot.seifert, m, n) for m in range(1, n))
    expected = n * 0 + Fraction(sigs, 8) + Fraction(ddelta, 2)
    x1 = TorusSurgery(MappingTorus(n, knot), MappingTorusOfBranchLocus(), 1, 1)
    assert lambda_fo(MappingTorus(n, knot)).value + Fraction(ddelta, 2) == expected
    assert lambda_fo(x1).value == expected


@given(st.sampled_from(PIECES), st.sampled_from(PIECES), st.integers(-3, 3))
def test_denominator_bound(a, b, q):
    x = TorusSurgery(FiberSum(a[0], a[1], b[0], b[1]), AbstractTorus("T"), 1, 0)
    assert 8 % lambda_fo(x).value.denominator == 0
    y = surgered(a[1].knot, q) if isinstance(a[1], ProductTorus) else a[0]
    assert 8 % lambda_fo(y).value.denominator == 0


@given(st.sampled_from(KNOTS), st.integers(-6, 6))
def test_casson_is_integral(knot, q):
    assert casson(SurgeryOneOverQ(S3(), knot, q)).value.denominator == 1


@st.composite
def det_minus_one_gluings(draw):
    a, b, c = (draw(st.integers(-4, 4)) for _ in range(3))
    # a d - b c = -1
    if a == 0:
        assume(b * c == 1)
        d = draw(st.integers(-4, 4))
    else:
        assume((b * c - 1) % a == 0)
        d = (b * c - 1) // a
    p, q = draw(st.integers(-4, 4)), draw(st.integers(-4, 4))
    return GluingMatrix([[a, b, 0], [c, d, 0], [p, q, 1]])


def h1_of_excision_is_z(glue: GluingMatrix) -> bool:
    """Cokernel of H_1(T^3) -> H_1(M_1) + H_1(M_2) via sympy's Smith form.

    Each piece has H_1 = Z<mu, gamma> with the longitude bounding; side 2 sees
    the torus through the gluing matrix.
    """
    a, b, c, d, p, q = glue.a, glue.b, glue.c, glue.d, glue.p, glue.q
    alpha = sympy.Matrix([[1, 0, 0], [0, 0, 1], [-a, -b, 0], [-p, -q, -1]])
    snf = smith_normal_form(alpha, domain=ZZ)
    diag = [abs(snf[i, i]) for i in range(3)]
    return diag == [1, 1, 1]


@given(det_minus_one_gluings())
def test_homology_test_implies_h1_is_z(glue):
    assert glue.det == -1
    if excision_homology_test(glue):
        assert h1_of_excision_is_z(glue)
    if not h1_of_excision_is_z(glue):
        assert not excision_homology_test(glue)
