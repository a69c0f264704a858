"""Exact arithmetic in the cyclotomic field Q(ζ), ζ = exp(2πi/n).

Elements are reduced modulo the n-th cyclotomic polynomial, so the
representation is unique and the zero test is exact. Signs of real elements
are certified with mpmath interval arithmetic.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Sequence

from mpmath.ctx_iv import MPIntervalContext

from .laurent import _trim, cyclotomic, poly_divmod, poly_mul


class CyclotomicElement:
    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence):
        self.n = n
        modulus = cyclotomic(n)
        d = len(modulus) - 1
        r = [Fraction(c) for c in coeffs]
        for i in range(len(r) - 1, d - 1, -1):
            c = r[i]
            if c:
                for j in range(d + 1):
                    r[i - d + j] -= c * modulus[j]
        r = r[:d] + [Fraction(0)] * max(0, d - len(r))
        self.coeffs = tuple(r)

    @classmethod
    def rational(cls, n: int, q) -> CyclotomicElement:
        return cls(n, [q])

    @classmethod
    def zeta_power(cls, n: int, k: int) -> CyclotomicElement:
        k %= n
        return cls(n, [0] * k + [1])

    def _check(self, other) -> CyclotomicElement:
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement.rational(self.n, other)
        if not isinstance(other, CyclotomicElement) or other.n != self.n:
            raise TypeError("operands must live in the same cyclotomic field")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CyclotomicElement(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.n, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return CyclotomicElement(self.n, poly_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicElement.rational(self.n, other)
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def conjugate(self) -> CyclotomicElement:
        # complex conjugation sends ζ^k to ζ^(n-k)
        out = [Fraction(0)] * self.n
        for k, c in enumerate(self.coeffs):
            out[(-k) % self.n] += c
        return CyclotomicElement(self.n, out)

    def inverse(self) -> CyclotomicElement:
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        # extended Euclid on (a, Φ_n) over Q[x]
        r0, r1 = [Fraction(c) for c in cyclotomic(self.n)], _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, poly_mul(q, s1))
        if not r1:
            raise ArithmeticError("element shares a factor with the modulus")
        c = r1[0]
        return CyclotomicElement(self.n, [x / c for x in s1])

    def interval(self, prec: int = 53):
        """Interval enclosure of the complex value, as ``(re, im)`` intervals."""
        # private context: precision changes must not leak across threads
        ctx = MPIntervalContext()
        ctx.prec = prec
        re = ctx.mpf(0)
        im = ctx.mpf(0)
        two_pi = 2 * ctx.pi
        for k, c in enumerate(self.coeffs):
            if c:
                coef = ctx.mpf(c.numerator) / c.denominator
                angle = two_pi * k / self.n
                re += coef * ctx.cos(angle)
                im += coef * ctx.sin(angle)
        return re, im

    def real_sign(self, max_prec: int = 1 << 14) -> int:
        """Certified sign of a real element (exactly 0 only if the element is 0)."""
        if self.is_zero():
            return 0
        if self != self.conjugate():
            raise ValueError("element is not real")
        prec = 64
        while prec <= max_prec:
            re, _ = self.interval(prec)
            if re.a > 0:
                return 1
            if re.b < 0:
                return -1
            prec *= 2
        raise ArithmeticError("could not certify sign")  # pragma: no cover

    def __complex__(self):
        return sum((complex(c) * cmath.exp(2j * cmath.pi * k / self.n)
                    for k, c in enumerate(self.coeffs)), 0j)

    def __repr__(self):
        return f"CyclotomicElement(n={self.n}, coeffs={[str(c) for c in self.coeffs]})"


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(out)
