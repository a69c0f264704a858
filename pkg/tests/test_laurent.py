from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from furuta_ohta.laurent import (
    LaurentPolynomial,
    cyclotomic,
    integer_determinant,
    laurent_determinant,
    poly_divmod,
    resultant,
)

T = sympy.Symbol("t")

coeff_maps = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=5)
laurents = coeff_maps.map(LaurentPolynomial)
int_polys = st.lists(st.integers(-6, 6), min_size=1, max_size=5)


def to_sympy(p: LaurentPolynomial):
    return sum((c * T ** k for k, c in p.coeffs.items()), sympy.Integer(0))


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPolynomial()


@given(laurents, laurents)
def test_product_matches_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@given(laurents, laurents)
def test_exact_division_inverts_multiplication(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


def test_exact_division_rejects_remainder():
    with pytest.raises(ArithmeticError):
        LaurentPolynomial({0: 1, 1: 1}).exact_div(LaurentPolynomial({0: 2}))


@given(laurents, st.integers(-3, 3).filter(bool))
def test_evaluation_matches_sympy(a, x):
    assert a(x) == Fraction(str(to_sympy(a).subs(T, x)))


@given(laurents)
def test_derivative_matches_sympy(a):
    assert sympy.expand(to_sympy(a.derivative()) - sympy.diff(to_sympy(a), T)) == 0


def test_format_examples():
    assert LaurentPolynomial({1: 1, 0: -1, -1: 1}).format() == "t - 1 + t^-1"
    assert LaurentPolynomial({0: 1}).format() == "1"
    assert LaurentPolynomial().format() == "0"


def test_halve_exponents_requires_even_powers():
    assert LaurentPolynomial({2: 3, -4: 1}).halve_exponents() == LaurentPolynomial({1: 3, -2: 1})
    with pytest.raises(ArithmeticError):
        LaurentPolynomial({1: 1}).halve_exponents()


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_integer_determinant_matches_sympy(rows):
    assert integer_determinant(rows) == sympy.Matrix(rows).det()


def test_empty_determinant_is_one():
    assert integer_determinant([]) == 1
    assert laurent_determinant([]) == LaurentPolynomial.constant(1)


@given(st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(coeff_maps.map(LaurentPolynomial), min_size=n, max_size=n),
                       min_size=n, max_size=n)))
def test_laurent_determinant_matches_sympy(rows):
    expected = sympy.Matrix([[to_sympy(x) for x in r] for r in rows]).det()
    assert sympy.expand(to_sympy(laurent_determinant(rows)) - expected) == 0


def root_product_resultant(f, g) -> int:
    """lc(f)^deg(g) * prod g(root) over the roots of f, at high precision."""
    f = list(f)
    g = list(g)
    while f and f[-1] == 0:
        f.pop()
    while g and g[-1] == 0:
        g.pop()
    if not f or not g:
        return 0
    if len(f) == 1:
        return f[0] ** (len(g) - 1)
    with mpmath.workdps(60):
        roots = mpmath.polyroots(list(reversed(f)), maxsteps=200, extraprec=200)
        value = mpmath.mpf(f[-1]) ** (len(g) - 1)
        for r in roots:
            value *= mpmath.polyval(list(reversed(g)), r)
        assert abs(mpmath.im(value)) < 1e-20
        return int(mpmath.nint(mpmath.re(value)))


def test_resultant_sign_example():
    # Res(t + 1, t^3) = (-1)^3
    assert resultant([1, 1], [0, 0, 0, 1]) == -1


@given(int_polys, int_polys)
def test_resultant_matches_root_product(f, g):
    assert resultant(f, g) == root_product_resultant(f, g)


@pytest.mark.parametrize("n", range(1, 31))
def test_cyclotomic_matches_sympy(n):
    expected = sympy.Poly(sympy.cyclotomic_poly(n, T), T).all_coeffs()[::-1]
    assert list(cyclotomic(n)) == [int(c) for c in expected]


@given(int_polys, int_polys.filter(lambda g: any(g)))
def test_divmod_reconstructs(num, den):
    q, r = poly_divmod(num, den)
    sn = sum(Fraction(c) * T ** i for i, c in enumerate(num))
    sq = sum(c * T ** i for i, c in enumerate(q))
    sr = sum(c * T ** i for i, c in enumerate(r))
    sd = sum(c * T ** i for i, c in enumerate(den))
    assert sympy.expand(sq * sd + sr - sn) == 0
    deg_den = max(i for i, c in enumerate(den) if c)
    assert len([c for c in r if c]) == 0 or max(i for i, c in enumerate(r) if c) < deg_den
