"""Symbolic descriptions of homology 3-spheres and homology S^1 x S^3's.

Every node is an immutable dataclass, so expression trees hash and compare
structurally. ``describe`` renders the short operand summaries used in
evaluation traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import ValidationError
from .knots import SeifertMatrix
from .laurent import integer_determinant


# -- three-manifolds ---------------------------------------------------------

@dataclass(frozen=True)
class S3:
    def describe(self) -> str:
        return "S3"


@dataclass(frozen=True)
class NamedSphere:
    label: str
    casson: Fraction

    def __post_init__(self):
        value = Fraction(self.casson)
        if value.denominator != 1:
            raise ValidationError(f"Casson invariant of {self.label} must be an integer, got {value}")
        object.__setattr__(self, "casson", value)

    def describe(self) -> str:
        return self.label


@dataclass(frozen=True)
class KnotInSphere:
    ambient: "ThreeManifoldExpr"
    seifert: SeifertMatrix
    label: str

    def __post_init__(self):
        if not is_homology_sphere(self.ambient):
            raise ValidationError(f"knot {self.label}: ambient {self.ambient.describe()} "
                                  "is not an integral homology sphere")

    def describe(self) -> str:
        if isinstance(self.ambient, S3):
            return self.label
        return f"{self.label}⊂{self.ambient.describe()}"


@dataclass(frozen=True)
class SurgeryOneOverQ:
    base: "ThreeManifoldExpr"
    knot: KnotInSphere
    q: int

    def __post_init__(self):
        if not is_homology_sphere(self.base):
            raise ValidationError("1/q-surgery base must be an integral homology sphere")
        if self.base != self.knot.ambient:
            raise ValidationError(f"knot {self.knot.label} lives in {self.knot.ambient.describe()}, "
                                  f"not in {self.base.describe()}")

    def describe(self) -> str:
        return f"{self.base.describe()}_{{1/{self.q}}}({self.knot.label})"


@dataclass(frozen=True)
class Splice:
    k1: KnotInSphere
    k2: KnotInSphere

    def describe(self) -> str:
        return f"splice({self.k1.describe()}, {self.k2.describe()})"


@dataclass(frozen=True)
class ZeroSurgery:
    """0-surgery on a knot: a homology S^1 x S^2, legal only under ``Product``."""

    knot: KnotInSphere

    def describe(self) -> str:
        return f"{self.knot.ambient.describe()}_0({self.knot.label})"


ThreeManifoldExpr = Union[S3, NamedSphere, SurgeryOneOverQ, Splice, ZeroSurgery]


def is_homology_sphere(y) -> bool:
    return isinstance(y, (S3, NamedSphere, SurgeryOneOverQ, Splice))


# -- gluing matrices ---------------------------------------------------------

@dataclass(frozen=True)
class GluingMatrix:
    """3x3 integer matrix on the ordered basis (μ, λ, γ), columns = images.

    After framing normalisation the third column is (0, 0, 1)^T, so the
    matrix reads ``[[a, b, 0], [c, d, 0], [p, q, 1]]``.
    """

    entries: tuple[tuple[int, int, int], ...]

    def __init__(self, entries: Sequence[Sequence[int]]):
        if any(isinstance(x, bool) or int(x) != x for r in entries for x in r):
            raise ValidationError("gluing matrix entries must be integers")
        rows = tuple(tuple(int(x) for x in r) for r in entries)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValidationError("gluing matrix must be 3x3")
        if (rows[0][2], rows[1][2], rows[2][2]) != (0, 0, 1):
            raise ValidationError(f"third column must be (0,0,1) after framing normalisation, got "
                                  f"{[rows[0][2], rows[1][2], rows[2][2]]}")
        det = integer_determinant(rows)
        if abs(det) != 1:
            raise ValidationError(f"gluing matrix has determinant {det}, expected ±1")
        object.__setattr__(self, "entries", rows)

    @property
    def det(self) -> int:
        return integer_determinant(self.entries)

    @property
    def a(self) -> int:
        return self.entries[0][0]

    @property
    def b(self) -> int:
        return self.entries[0][1]

    @property
    def c(self) -> int:
        return self.entries[1][0]

    @property
    def d(self) -> int:
        return self.entries[1][1]

    @property
    def p(self) -> int:
        return self.entries[2][0]

    @property
    def q(self) -> int:
        return self.entries[2][1]

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def describe(self) -> str:
        return str(self.as_lists())


def surgery_matrix(p: int, q: int) -> GluingMatrix:
    """φ_{p,q} = [[p, r, 0], [q, s, 0], [0, 0, 1]] with ps - qr = 1.

    (1, q) uses r = 0, s = 1; (0, 1) uses the matrix [[0, -1, 0], [1, 0, 0], [0, 0, 1]].
    """
    if math.gcd(p, q) != 1:
        raise ValidationError(f"(p, q) = ({p}, {q}) is not a coprime pair")
    if p == 1:
        r, s = 0, 1
    elif (p, q) == (0, 1):
        r, s = -1, 0
    else:
        g, x, y = _ext_gcd(p, q)  # p x + q y = 1, so ps - qr = 1 with s = x, r = -y
        r, s = -y, x
    return GluingMatrix([[p, r, 0], [q, s, 0], [0, 0, 1]])


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


FIBER_SUM_MATRIX = GluingMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])


def dehn_twist_matrix(p: int, q: int) -> GluingMatrix:
    """Gluing matrix of the mapping torus of a Dehn twist along a splice torus."""
    if math.gcd(p, q) != 1:
        raise ValidationError(f"(p, q) = ({p}, {q}) is not a coprime pair")
    return GluingMatrix([[0, 1, 0], [1, 0, 0], [-p, -q, 1]])


# -- tori --------------------------------------------------------------------

@dataclass(frozen=True)
class MappingTorusOfBranchLocus:
    """The mapping torus of the branch set inside a ``MappingTorus``."""

    def describe(self) -> str:
        return "T(branch locus)"


@dataclass(frozen=True)
class ProductTorus:
    """S^1 x K inside S^1 x Y."""

    knot: KnotInSphere

    def describe(self) -> str:
        return f"S1 x {self.knot.label}"


@dataclass(frozen=True)
class SurgeryCore:
    """Core torus of the D^2 x T^2 glued in by the enclosing torus surgery."""

    def describe(self) -> str:
        return "core"


@dataclass(frozen=True)
class AbstractTorus:
    label: str

    def describe(self) -> str:
        return f"T[{self.label}]"


TorusDescriptor = Union[MappingTorusOfBranchLocus, ProductTorus, SurgeryCore, AbstractTorus]


# -- four-manifolds ----------------------------------------------------------

@dataclass(frozen=True)
class Product:
    y: ThreeManifoldExpr

    def describe(self) -> str:
        return f"S1 x {self.y.describe()}"


@dataclass(frozen=True)
class MappingTorus:
    """Mapping torus of the covering translation of the n-fold cyclic branched cover."""

    n: int
    knot: KnotInSphere

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError(f"mapping torus needs n >= 2, got {self.n}")

    def describe(self) -> str:
        return f"X_{self.n}({self.knot.ambient.describe()}, {self.knot.label})"


@dataclass(frozen=True)
class TorusSurgery:
    base: "FourManifoldExpr"
    torus: TorusDescriptor
    p: int
    q: int

    def __post_init__(self):
        if math.gcd(self.p, self.q) != 1:
            raise ValidationError(f"torus surgery coefficients ({self.p}, {self.q}) are not coprime")

    def describe(self) -> str:
        return f"({self.base.describe()})_{{{self.p},{self.q}}}[{self.torus.describe()}]"


@dataclass(frozen=True)
class FiberSum:
    a: "FourManifoldExpr"
    ta: TorusDescriptor
    b: "FourManifoldExpr"
    tb: TorusDescriptor

    def describe(self) -> str:
        return f"({self.a.describe()}) #_T ({self.b.describe()})"


@dataclass(frozen=True)
class Excision:
    a: "FourManifoldExpr"
    ta: TorusDescriptor
    b: "FourManifoldExpr"
    tb: TorusDescriptor
    glue: GluingMatrix

    def __post_init__(self):
        if self.glue.det != -1:
            raise ValidationError(f"excision gluing must reverse orientation (det = -1), "
                                  f"got det = {self.glue.det}")

    def describe(self) -> str:
        return f"({self.a.describe()}) #_φ ({self.b.describe()}), φ={self.glue.describe()}"


FourManifoldExpr = Union[Product, MappingTorus, TorusSurgery, FiberSum, Excision]
