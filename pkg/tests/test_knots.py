from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
import sympy
from conftest import seifert_entries
from hypothesis import assume, given
from hypothesis import strategies as st

from furuta_ohta.catalog import FIGURE_EIGHT, TREFOIL, UNKNOT, builtin_catalog, torus_knot
from furuta_ohta.errors import InvalidSeifertMatrix, SingularForm, ValidationError
from furuta_ohta.knots import (
    INFINITE,
    SeifertMatrix,
    alexander_polynomial,
    alexander_second_derivative_at_1,
    block_sum,
    branched_cover_h1_order,
    is_qhs_branched_cover,
    tristram_levine_signature,
)
from furuta_ohta.laurent import LaurentPolynomial

T = sympy.Symbol("t")


def eig_signature(v: SeifertMatrix, m: int, n: int) -> int | None:
    """Float oracle; None when the form is too close to singular to trust."""
    if v.size == 0:
        return 0
    a = np.array(v.entries, dtype=complex)
    w = cmath.exp(2j * math.pi * m / n)
    h = (1 - w) * a + (1 - w.conjugate()) * a.T
    ev = np.linalg.eigvalsh(h)
    if ev.size and np.min(np.abs(ev)) < 1e-8 * max(1.0, np.max(np.abs(ev))):
        return None
    return int(np.sum(ev > 0) - np.sum(ev < 0))


def alexander_values_product(v: SeifertMatrix, n: int) -> float:
    d = alexander_polynomial(v)
    return math.prod(abs(complex(d(cmath.exp(2j * math.pi * m / n)))) for m in range(1, n))


# -- examples ----------------------------------------------------------------------

def test_alexander_examples():
    assert alexander_polynomial(UNKNOT.seifert) == LaurentPolynomial.constant(1)
    assert alexander_polynomial(TREFOIL.seifert).format() == "t - 1 + t^-1"
    assert alexander_polynomial(FIGURE_EIGHT.seifert).format() == "-t + 3 - t^-1"


@pytest.mark.parametrize("knot,expected", [(UNKNOT, 0), (TREFOIL, 2), (FIGURE_EIGHT, -2)])
def test_second_derivative_examples(knot, expected):
    assert alexander_second_derivative_at_1(knot.seifert) == expected


@pytest.mark.parametrize("m,n", [(1, 2), (1, 3), (2, 3), (1, 5), (3, 7)])
def test_unknot_signature_is_zero(m, n):
    assert tristram_levine_signature(UNKNOT.seifert, m, n) == 0


@pytest.mark.parametrize("m,n", [(1, 2), (1, 3)])
def test_trefoil_signature_examples(m, n):
    assert tristram_levine_signature(TREFOIL.seifert, m, n) == -2


def test_trefoil_sixth_root_is_singular():
    with pytest.raises(SingularForm):
        tristram_levine_signature(TREFOIL.seifert, 1, 6)


@pytest.mark.parametrize("knot,n,expected", [(UNKNOT, 5, 1), (TREFOIL, 2, 3), (FIGURE_EIGHT, 2, 5)])
def test_cover_order_examples(knot, n, expected):
    assert branched_cover_h1_order(knot.seifert, n) == expected


def test_qhs_examples():
    assert is_qhs_branched_cover(TREFOIL.seifert, 2)
    assert not is_qhs_branched_cover(TREFOIL.seifert, 6)
    assert branched_cover_h1_order(TREFOIL.seifert, 6) == INFINITE
    assert all(is_qhs_branched_cover(UNKNOT.seifert, n) for n in range(2, 12))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_torus_knot_alexander(k):
    # Δ of T(2, 2k+1) is the alternating sum t^k - t^(k-1) + ... + t^-k
    expected = LaurentPolynomial({j: (-1) ** (k - j) for j in range(-k, k + 1)})
    assert alexander_polynomial(torus_knot(k).seifert) == expected
    assert tristram_levine_signature(torus_knot(k).seifert, 1, 2) == -2 * k


def test_catalog_labels():
    assert set(builtin_catalog()) == {"unknot", "trefoil", "figure-eight", "T(2,5)", "T(2,7)"}


# -- validation --------------------------------------------------------------------

@pytest.mark.parametrize("rows", [[[1]], [[1, 0], [0, 1]], [[1, 2], [3]], [[0.5, 1], [0, 1]]])
def test_invalid_seifert_matrices(rows):
    with pytest.raises(InvalidSeifertMatrix):
        SeifertMatrix(rows)


@pytest.mark.parametrize("m,n", [(0, 3), (3, 3), (1, 1)])
def test_bad_root_index(m, n):
    with pytest.raises(ValidationError):
        tristram_levine_signature(TREFOIL.seifert, m, n)


# -- properties --------------------------------------------------------------------

@given(seifert_entries())
def test_alexander_matches_sympy_determinant(rows):
    v = SeifertMatrix(rows)
    g = v.genus
    n = v.size
    raw = sympy.expand(sympy.Matrix(n, n, lambda i, j: T * rows[i][j] - rows[j][i]).det()) if n else 1
    sign = sympy.sign(sympy.sympify(raw).subs(T, 1))
    ours = sum((c * T ** (k + g) for k, c in alexander_polynomial(v).coeffs.items()), sympy.Integer(0))
    assert sympy.expand(ours - sign * raw) == 0


@given(seifert_entries())
def test_alexander_is_symmetric_and_normalised(rows):
    d = alexander_polynomial(SeifertMatrix(rows))
    assert d.is_symmetric()
    assert d(1) == 1


@given(seifert_entries())
def test_transpose_preserves_alexander(rows):
    v = SeifertMatrix(rows)
    assert alexander_polynomial(v.transpose()) == alexander_polynomial(v)


@given(seifert_entries())
def test_second_derivative_against_finite_difference(rows):
    v = SeifertMatrix(rows)
    d = alexander_polynomial(v)
    h = 1e-3
    approx = (float(d(1 + h)) - 2 * float(d(1)) + float(d(1 - h))) / h ** 2
    assert abs(approx - alexander_second_derivative_at_1(v)) < 1e-2 * max(1, abs(approx))


@given(seifert_entries(), st.integers(2, 9).flatmap(lambda n: st.tuples(st.integers(1, n - 1), st.just(n))))
def test_signature_matches_eigenvalues(rows, mn):
    v = SeifertMatrix(rows)
    m, n = mn
    try:
        exact = tristram_levine_signature(v, m, n)
    except SingularForm:
        d = alexander_polynomial(v)
        assert abs(complex(d(cmath.exp(2j * math.pi * m / n)))) < 1e-9
        return
    oracle = eig_signature(v, m, n)
    assume(oracle is not None)
    assert exact == oracle


@given(seifert_entries(max_genus=1), seifert_entries(max_genus=1), st.integers(2, 7))
def test_signature_additive_under_block_sum(r1, r2, n):
    a, b = SeifertMatrix(r1), SeifertMatrix(r2)
    try:
        sa = tristram_levine_signature(a, 1, n)
        sb = tristram_levine_signature(b, 1, n)
    except SingularForm:
        return
    assert tristram_levine_signature(block_sum(a, b), 1, n) == sa + sb


@given(seifert_entries(), st.integers(2, 8))
def test_cover_order_matches_root_product(rows, n):
    v = SeifertMatrix(rows)
    order = branched_cover_h1_order(v, n)
    approx = alexander_values_product(v, n)
    if order == INFINITE:
        assert approx < 1e-6
    else:
        assert abs(order - approx) < 1e-6 * max(1.0, approx)


@given(seifert_entries(), st.integers(2, 8).flatmap(lambda n: st.tuples(st.integers(1, n - 1), st.just(n))))
def test_signature_conjugate_symmetry(rows, mn):
    v = SeifertMatrix(rows)
    m, n = mn
    try:
        assert tristram_levine_signature(v, m, n) == tristram_levine_signature(v, n - m, n)
    except SingularForm:
        with pytest.raises(SingularForm):
            tristram_levine_signature(v, n - m, n)
