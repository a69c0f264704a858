"""Exact integer Laurent polynomials and the integer-polynomial helpers they need.

Dense integer polynomials are plain lists of coefficients, lowest degree first.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

T = TypeVar("T")


class LaurentPolynomial:
    """Integer Laurent polynomial in one variable, stored sparsely.

    Instances are immutable and hashable; zero coefficients are never stored.
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        clean = {}
        for k, c in (coeffs or {}).items():
            if int(c) != c:
                raise ValueError(f"non-integer coefficient {c!r}")
            if c:
                clean[int(k)] = int(c)
        self._coeffs = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def constant(cls, c: int) -> LaurentPolynomial:
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> LaurentPolynomial:
        return cls({k: c})

    @classmethod
    def from_dense(cls, coeffs: Sequence[int], shift: int = 0) -> LaurentPolynomial:
        return cls({i + shift: c for i, c in enumerate(coeffs)})

    # -- structure --------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def coefficient(self, k: int) -> int:
        return self._coeffs.get(k, 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def min_degree(self) -> int:
        if not self._coeffs:
            raise ValueError("zero polynomial has no degree")
        return next(iter(self._coeffs))

    @property
    def max_degree(self) -> int:
        if not self._coeffs:
            raise ValueError("zero polynomial has no degree")
        return next(reversed(self._coeffs))

    def to_dense(self) -> tuple[list[int], int]:
        """Return ``(coeffs, shift)`` with ``self == t**shift * sum(coeffs[i] t**i)``."""
        if not self._coeffs:
            return [], 0
        lo, hi = self.min_degree, self.max_degree
        return [self._coeffs.get(k, 0) for k in range(lo, hi + 1)], lo

    def is_symmetric(self) -> bool:
        return all(self._coeffs.get(-k) == c for k, c in self._coeffs.items())

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for i, a in self._coeffs.items():
            for j, b in other._coeffs.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if len(self._coeffs) != 1:
                raise ValueError("only monomials are invertible")
            (k, c), = self._coeffs.items()
            if abs(c) != 1:
                raise ValueError("only unit monomials are invertible")
            return LaurentPolynomial({k * e: 1 if e % 2 == 0 else c})
        result = LaurentPolynomial.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def exact_div(self, other: LaurentPolynomial) -> LaurentPolynomial:
        """Quotient ``self / other``; raises ``ArithmeticError`` if inexact."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return self
        num, ns = self.to_dense()
        den, ds = other.to_dense()
        q, r = poly_divmod(num, den)
        if any(r) or any(c.denominator != 1 for c in q):
            raise ArithmeticError("inexact Laurent division")
        return LaurentPolynomial.from_dense([int(c) for c in q], ns - ds)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._coeffs.items()))
        return self._hash

    def __bool__(self):
        return bool(self._coeffs)

    # -- calculus and evaluation ------------------------------------------

    def derivative(self) -> LaurentPolynomial:
        return LaurentPolynomial({k - 1: k * c for k, c in self._coeffs.items()})

    def __call__(self, x):
        """Evaluate at ``x`` (int, Fraction, float or complex)."""
        if isinstance(x, int):
            x = Fraction(x)
        total = 0
        for k, c in self._coeffs.items():
            total += c * (x ** k if k >= 0 else 1 / x ** (-k))
        return total

    def halve_exponents(self) -> LaurentPolynomial:
        """Substitute ``s = t**(1/2)``: requires every exponent to be even."""
        odd = [k for k in self._coeffs if k % 2]
        if odd:
            raise ArithmeticError(f"odd powers {odd} survive the substitution s^2 = t")
        return LaurentPolynomial({k // 2: c for k, c in self._coeffs.items()})

    # -- presentation -----------------------------------------------------

    def __repr__(self):
        return f"LaurentPolynomial({self._coeffs!r})"

    def __str__(self):
        return self.format("t")

    def format(self, var: str = "t") -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for k, c in sorted(self._coeffs.items(), reverse=True):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = var if k == 1 else f"{var}^{k}"
                body = power if mag == 1 else f"{mag}*{power}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _coerce(x):
    if isinstance(x, LaurentPolynomial):
        return x
    if isinstance(x, int):
        return LaurentPolynomial.constant(x)
    return NotImplemented


# -- dense polynomial helpers ------------------------------------------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_divmod(num: Sequence, den: Sequence) -> tuple[list, list]:
    """Long division over a field (Fractions); coefficient lists low to high."""
    num = _trim([Fraction(c) for c in num])
    den = _trim([Fraction(c) for c in den])
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [], num
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    r = list(num)
    lead = den[-1]
    for i in range(len(q) - 1, -1, -1):
        c = r[i + len(den) - 1] / lead
        q[i] = c
        if c:
            for j, d in enumerate(den):
                r[i + j] -= c * d
    return _trim(q), _trim(r[: len(den) - 1])


def poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_mod_monic(a: Sequence, m: Sequence[int]) -> list:
    """Remainder of ``a`` modulo the monic integer polynomial ``m``."""
    r = list(a)
    d = len(m) - 1
    for i in range(len(r) - 1, d - 1, -1):
        c = r[i]
        if c:
            for j in range(d + 1):
                r[i - d + j] -= c * m[j]
    r = r[:d] + [0] * max(0, d - len(r))
    return r


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = poly_divmod(num, cyclotomic(d))
            assert not rem
    return tuple(int(c) for c in num)


def bareiss_determinant(rows: Sequence[Sequence[T]], exact_div: Callable[[T, T], T],
                        zero: T, one: T) -> T:
    """Fraction-free determinant over an integral domain.

    ``exact_div(a, b)`` must return the exact quotient ``a / b``.
    """
    m = [list(r) for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("matrix must be square")
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if m[k][k] == zero:
            swap = next((i for i in range(k + 1, n) if m[i][k] != zero), None)
            if swap is None:
                return zero
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = exact_div(pivot * m[i][j] - m[i][k] * m[k][j], prev)
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def _int_exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError(f"{a} not divisible by {b}")
    return q


def integer_determinant(rows: Sequence[Sequence[int]]) -> int:
    return bareiss_determinant(rows, _int_exact_div, 0, 1)


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Resultant of two integer polynomials via the Sylvester matrix."""
    f = _trim([int(c) for c in f])
    g = _trim([int(c) for c in g])
    if not f or not g:
        return 0
    m, n = len(f) - 1, len(g) - 1
    if m == 0 and n == 0:
        return 1
    size = m + n
    rows = []
    fh = list(reversed(f))
    gh = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fh + [0] * (size - i - len(fh)))
    for i in range(m):
        rows.append([0] * i + gh + [0] * (size - i - len(gh)))
    return integer_determinant(rows)


def laurent_determinant(rows: Sequence[Sequence[LaurentPolynomial]]) -> LaurentPolynomial:
    zero = LaurentPolynomial()
    one = LaurentPolynomial.constant(1)
    return bareiss_determinant(rows, LaurentPolynomial.exact_div, zero, one)


def dense_from(coeffs: Iterable[int]) -> list[int]:
    return _trim([int(c) for c in coeffs])
