"""Knot invariants computed from Seifert matrices.

All polynomial work is exact. Signatures are computed by symmetric
elimination over the cyclotomic field containing the root of unity, with
pivot signs certified by interval arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .cyclotomic import CyclotomicElement
from .errors import InvalidSeifertMatrix, SingularForm, ValidationError
from .laurent import (
    LaurentPolynomial,
    cyclotomic,
    integer_determinant,
    laurent_determinant,
    poly_mod_monic,
    resultant,
)

INFINITE = math.inf


@dataclass(frozen=True)
class SeifertMatrix:
    """Integer matrix of a Seifert form, of size 2g x 2g.

    ``det(V - V^T)`` must be ±1, i.e. ``V - V^T`` is the intersection form
    of a genus-g surface with one boundary component.
    """

    entries: tuple[tuple[int, ...], ...]

    def __init__(self, entries: Sequence[Sequence[int]] = ()):
        rows = []
        for row in entries:
            r = []
            for x in row:
                if isinstance(x, bool) or int(x) != x:
                    raise InvalidSeifertMatrix(f"non-integer entry {x!r}")
                r.append(int(x))
            rows.append(tuple(r))
        size = len(rows)
        if any(len(r) != size for r in rows):
            raise InvalidSeifertMatrix("Seifert matrix must be square")
        if size % 2:
            raise InvalidSeifertMatrix(f"Seifert matrix must have even size, got {size}")
        skew = [[rows[i][j] - rows[j][i] for j in range(size)] for i in range(size)]
        det = integer_determinant(skew)
        if abs(det) != 1:
            raise InvalidSeifertMatrix(f"det(V - V^T) = {det}, expected ±1")
        object.__setattr__(self, "entries", tuple(rows))

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def genus(self) -> int:
        return self.size // 2

    def transpose(self) -> SeifertMatrix:
        n = self.size
        return SeifertMatrix([[self.entries[j][i] for j in range(n)] for i in range(n)])

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def block_sum(a: SeifertMatrix, b: SeifertMatrix) -> SeifertMatrix:
    """Seifert matrix of the connected sum (block diagonal)."""
    n, m = a.size, b.size
    rows = [list(r) + [0] * m for r in a.entries]
    rows += [[0] * n + list(r) for r in b.entries]
    return SeifertMatrix(rows)


def torus_knot_2(k: int) -> SeifertMatrix:
    """Bidiagonal Seifert matrix of the torus knot T(2, 2k+1): -1 on the
    diagonal, +1 on the superdiagonal."""
    if k < 0:
        raise ValidationError("k must be non-negative")
    n = 2 * k
    return SeifertMatrix([[-1 if i == j else (1 if j == i + 1 else 0) for j in range(n)]
                          for i in range(n)])


@lru_cache(maxsize=256)
def alexander_polynomial(v: SeifertMatrix) -> LaurentPolynomial:
    """Symmetrized Alexander polynomial det(t^(1/2) V - t^(-1/2) V^T), Δ(1) = 1."""
    n = v.size
    s = LaurentPolynomial.monomial(1)
    s_inv = LaurentPolynomial.monomial(-1)
    rows = [[s * v.entries[i][j] - s_inv * v.entries[j][i] for j in range(n)]
            for i in range(n)]
    delta = laurent_determinant(rows).halve_exponents()
    at_one = delta(1)
    if abs(at_one) != 1:  # pragma: no cover - excluded by the det(V - V^T) check
        raise InvalidSeifertMatrix(f"Δ(1) = {at_one}")
    if at_one == -1:
        delta = -delta
    if not delta.is_symmetric():  # pragma: no cover
        raise ArithmeticError(f"Alexander polynomial {delta} is not symmetric")
    return delta


def alexander_second_derivative_at_1(v: SeifertMatrix) -> int:
    return int(alexander_polynomial(v).derivative().derivative()(1))


def _alexander_dense(v: SeifertMatrix) -> list[int]:
    """Coefficients of the honest polynomial t^g Δ(t), lowest degree first."""
    coeffs, shift = alexander_polynomial(v).to_dense()
    return [0] * (shift + v.genus) + coeffs


def _vanishes_at_root_of_unity(v: SeifertMatrix, m: int, n: int) -> bool:
    order = n // math.gcd(m, n)
    rem = poly_mod_monic(_alexander_dense(v), cyclotomic(order))
    return not any(rem)


def _check_root(m: int, n: int) -> None:
    if n < 2:
        raise ValidationError(f"n must be at least 2, got {n}")
    if not 1 <= m <= n - 1:
        raise ValidationError(f"m must satisfy 1 <= m <= n-1, got m={m}, n={n}")


@lru_cache(maxsize=1024)
def tristram_levine_signature(v: SeifertMatrix, m: int, n: int) -> int:
    """Signature of (1-ω)V + (1-ω̄)V^T at ω = exp(2πi m/n)."""
    _check_root(m, n)
    if v.size == 0:
        return 0
    if _vanishes_at_root_of_unity(v, m, n):
        raise SingularForm(m, n, "ω is a root of the Alexander polynomial")
    omega = CyclotomicElement.zeta_power(n, m)
    a = 1 - omega
    a_bar = a.conjugate()
    size = v.size
    h = [[a * v.entries[i][j] + a_bar * v.entries[j][i] for j in range(size)]
         for i in range(size)]
    sig = hermitian_signature(h)
    if sig % 2:  # pragma: no cover
        raise ArithmeticError(f"odd signature {sig}")
    return sig


def hermitian_signature(h: list[list[CyclotomicElement]]) -> int:
    """Signature of a nonsingular Hermitian matrix over a cyclotomic field.

    Diagonalises by congruence; each pivot is a real field element whose sign
    is certified. Raises ``SingularForm`` on a degenerate form.
    """
    h = [list(r) for r in h]
    sig = 0
    while h:
        n = len(h)
        piv = next((i for i in range(n) if not h[i][i].is_zero()), None)
        if piv is None:
            pair = next(((i, j) for i in range(n) for j in range(n)
                         if i != j and not h[i][j].is_zero()), None)
            if pair is None:
                raise SingularForm(0, 0, f"{n} null directions remain")
            i, j = pair
            c = h[i][j]
            # row_i += c row_j, col_i += conj(c) col_j; new h_ii = 2|h_ij|^2
            h[i] = [x + c * y for x, y in zip(h[i], h[j])]
            cb = c.conjugate()
            for row in h:
                row[i] = row[i] + cb * row[j]
            piv = i
        p = h[piv][piv]
        sig += p.real_sign()
        p_inv = p.inverse()
        rest = [k for k in range(n) if k != piv]
        h = [[h[r][c] - h[r][piv] * p_inv * h[piv][c] for c in rest] for r in rest]
    return sig


def branched_cover_h1_order(v: SeifertMatrix, n: int) -> int | float:
    """|H_1| of the n-fold cyclic branched cover, or ``INFINITE``.

    Computed as |Res(t^g Δ(t), 1 + t + ... + t^(n-1))| = ∏_{m=1}^{n-1} |Δ(ζ^m)|.
    """
    if n < 2:
        raise ValidationError(f"n must be at least 2, got {n}")
    res = resultant(_alexander_dense(v), [1] * n)
    return abs(res) if res else INFINITE


def is_qhs_branched_cover(v: SeifertMatrix, n: int) -> bool:
    return branched_cover_h1_order(v, n) != INFINITE


def signature_sum(v: SeifertMatrix, n: int) -> int:
    return sum(tristram_levine_signature(v, m, n) for m in range(1, n))


def seifert_from_json(obj) -> SeifertMatrix:
    if not isinstance(obj, list):
        raise InvalidSeifertMatrix("seifert must be a list of integer rows")
    return SeifertMatrix(obj)


__all__ = [
    "INFINITE",
    "SeifertMatrix",
    "alexander_polynomial",
    "alexander_second_derivative_at_1",
    "block_sum",
    "branched_cover_h1_order",
    "hermitian_signature",
    "is_qhs_branched_cover",
    "signature_sum",
    "torus_knot_2",
    "tristram_levine_signature",
]
