"""Exact model of the U(1) character variety of T^3 as a quotient of the cube.

Points are holonomy-logarithm triples in (-1/2, 1/2]^3 modulo the involution
v -> -v. Planes are affine 2-subtori; crossings of piecewise-linear curves with
them are counted exactly over the rationals.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NonTransverse, NonUnimodular, NotInvariant, ValidationError
from .laurent import integer_determinant
from .manifolds import GluingMatrix

HALF = Fraction(1, 2)


def to_fraction(x) -> Fraction:
    if isinstance(x, bool):
        raise ValidationError(f"not a coordinate: {x!r}")
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValidationError(f"non-finite coordinate {x!r}")
        return Fraction(repr(x))  # decimal literal, not the binary expansion
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"not a rational coordinate: {x!r}") from exc


def wrap(x) -> Fraction:
    """Representative of x mod 1 in (-1/2, 1/2]."""
    x = to_fraction(x)
    return x - math.ceil(x - HALF)


@dataclass(frozen=True)
class CubePoint:
    x: Fraction
    y: Fraction
    z: Fraction

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, wrap(getattr(self, name)))

    @classmethod
    def of(cls, v: Sequence) -> CubePoint:
        if len(v) != 3:
            raise ValidationError(f"expected three coordinates, got {len(v)}")
        return cls(*v)

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.x, self.y, self.z)

    def __neg__(self) -> CubePoint:
        return CubePoint(-self.x, -self.y, -self.z)

    def __str__(self):
        return "(" + ", ".join(_fmt(c) for c in self.as_tuple()) + ")"


@dataclass(frozen=True)
class ChiPoint:
    canonical: CubePoint

    @property
    def is_central(self) -> bool:
        return all(c in (0, HALF) for c in self.canonical.as_tuple())

    def __str__(self):
        return f"[{self.canonical}]"


def canonicalize(v) -> ChiPoint:
    p = v if isinstance(v, CubePoint) else CubePoint.of(v)
    return ChiPoint(max(p, -p, key=CubePoint.as_tuple))


def central_classes() -> frozenset[ChiPoint]:
    vals = (Fraction(0), HALF)
    return frozenset(canonicalize((a, b, c)) for a in vals for b in vals for c in vals)


# -- planes --------------------------------------------------------------------

def _int_vector(v, what: str) -> tuple[int, int, int]:
    if len(v) != 3 or any(isinstance(c, bool) or int(c) != c for c in v):
        raise ValidationError(f"{what} must be an integer 3-vector, got {v!r}")
    return tuple(int(c) for c in v)


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


@dataclass(frozen=True)
class PlaneImage:
    """Affine 2-subtorus through ``basepoint`` spanned by two integer directions.

    The co-orientation is ``normal``. As a subset of T^3 the plane is the level
    set {v : n.v = n.basepoint mod 1}, n the primitive normal.
    """

    basepoint: CubePoint
    spanning: tuple[tuple[int, int, int], tuple[int, int, int]]
    normal: tuple[int, int, int]
    label: str = ""

    def __post_init__(self):
        bp = self.basepoint if isinstance(self.basepoint, CubePoint) else CubePoint.of(self.basepoint)
        object.__setattr__(self, "basepoint", bp)
        if len(self.spanning) != 2:
            raise ValidationError("a plane needs exactly two spanning vectors")
        u, v = (_int_vector(s, "spanning vector") for s in self.spanning)
        n = _int_vector(self.normal, "normal")
        if _cross(u, v) == (0, 0, 0):
            raise ValidationError(f"spanning vectors {u}, {v} are linearly dependent")
        if _dot(n, u) or _dot(n, v):
            raise ValidationError(f"normal {n} is not orthogonal to {u} and {v}")
        object.__setattr__(self, "spanning", (u, v))
        object.__setattr__(self, "normal", n)

    @property
    def primitive_normal(self) -> tuple[int, int, int]:
        g = math.gcd(*self.normal)
        return tuple(c // g for c in self.normal)

    @property
    def level(self) -> Fraction:
        """n.basepoint for the primitive normal n (not reduced mod 1)."""
        return _dot(self.primitive_normal, self.basepoint.as_tuple())

    def contains(self, v) -> bool:
        p = v.canonical if isinstance(v, ChiPoint) else v
        coords = p.as_tuple() if isinstance(p, CubePoint) else tuple(map(to_fraction, p))
        return (_dot(self.primitive_normal, coords) - self.level).denominator == 1

    def coincides_with(self, other: PlaneImage) -> bool:
        """Equality as subsets of T^3 (co-orientation ignored)."""
        n, m = self.primitive_normal, other.primitive_normal
        if n != m and n != tuple(-c for c in m):
            return False
        return other.contains(self.basepoint)

    def is_involution_invariant(self) -> bool:
        return (2 * self.level).denominator == 1

    def with_label(self, label: str) -> PlaneImage:
        return PlaneImage(self.basepoint, self.spanning, self.normal, label)

    def to_json(self) -> dict:
        return {"basepoint": [_fmt(c) for c in self.basepoint.as_tuple()],
                "spanning": [list(s) for s in self.spanning],
                "normal": list(self.normal), "label": self.label}


def standard_planes() -> dict[str, PlaneImage]:
    """The meridian, longitude, surgered and shifted-longitude planes."""
    z = (0, 0, 1)
    return {
        "P_N": PlaneImage(CubePoint(0, 0, 0), ((0, 1, 0), z), (1, 0, 0), "P_N"),
        "P_M": PlaneImage(CubePoint(0, 0, 0), ((1, 0, 0), z), (0, 1, 0), "P_M"),
        "P_0": PlaneImage(CubePoint(0, HALF, 0), ((1, 0, 0), z), (0, 1, 0), "P_0"),
        "P_1": PlaneImage(CubePoint(0, 0, 0), ((1, -1, 0), z), (1, 1, 0), "P_1"),
    }


def pillowcase_singular_points(plane: PlaneImage) -> frozenset[ChiPoint]:
    """Central classes on the quotient of an involution-invariant plane (always four)."""
    if not plane.is_involution_invariant():
        raise NotInvariant(f"plane {plane.label or plane.to_json()} at level "
                           f"{_fmt(plane.level)} is not preserved by v -> -v")
    return frozenset(p for p in central_classes() if plane.contains(p))


# -- gluing action ---------------------------------------------------------------

def _matrix(a) -> tuple[tuple[int, ...], ...]:
    rows = a.entries if isinstance(a, GluingMatrix) else a
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValidationError("gluing matrix must be 3x3")
    if any(isinstance(x, bool) or int(x) != x for r in rows for x in r):
        raise ValidationError("gluing matrix entries must be integers")
    return tuple(tuple(int(x) for x in r) for r in rows)


def inverse_transpose(a) -> tuple[tuple[int, ...], ...]:
    m = _matrix(a)
    det = integer_determinant(m)
    if abs(det) != 1:
        raise NonUnimodular(f"matrix {[list(r) for r in m]} has determinant {det}")
    # inverse transpose = cofactor matrix / det
    cof = [[(m[(i + 1) % 3][(j + 1) % 3] * m[(i + 2) % 3][(j + 2) % 3]
             - m[(i + 1) % 3][(j + 2) % 3] * m[(i + 2) % 3][(j + 1) % 3]) for j in range(3)]
           for i in range(3)]
    return tuple(tuple(c * det for c in row) for row in cof)


def _apply(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(3)) for i in range(3))


def apply_gluing(a, s):
    """Pull a point or plane of T^3 back along a gluing map.

    Coordinates transform by the inverse transpose of the matrix on H_1;
    co-orientations transform by the matrix itself, so levels are preserved.
    """
    m = inverse_transpose(a)
    if isinstance(s, ChiPoint):
        return canonicalize(_apply(m, s.canonical.as_tuple()))
    if isinstance(s, CubePoint):
        return CubePoint.of(_apply(m, s.as_tuple()))
    if isinstance(s, PlaneImage):
        a_ = _matrix(a)
        u, v = s.spanning
        return PlaneImage(CubePoint.of(_apply(m, s.basepoint.as_tuple())),
                          (_apply(m, u), _apply(m, v)), _apply(a_, s.normal), s.label)
    raise ValidationError(f"cannot apply a gluing matrix to {type(s).__name__}")


# -- curves and crossings --------------------------------------------------------

@dataclass(frozen=True)
class PLCurve:
    """A piecewise-linear path given by a continuous lift of its vertices to R^3."""

    vertices: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        verts = tuple(tuple(to_fraction(c) for c in v) for v in self.vertices)
        if len(verts) < 2:
            raise ValidationError("a curve needs at least two vertices")
        for i, v in enumerate(verts):
            if len(v) != 3:
                raise ValidationError(f"vertex {i} must have three coordinates")
        for i in range(len(verts) - 1):
            if verts[i] == verts[i + 1]:
                raise ValidationError(f"vertices {i} and {i + 1} coincide")
        object.__setattr__(self, "vertices", verts)

    @property
    def closed(self) -> bool:
        first, last = self.vertices[0], self.vertices[-1]
        return all((a - b).denominator == 1 for a, b in zip(first, last))

    def segments(self):
        return zip(self.vertices, self.vertices[1:])

    def to_json(self) -> dict:
        return {"vertices": [[_fmt(c) for c in v] for v in self.vertices], "closed": self.closed}


def _central_on_segment(a, b) -> tuple | None:
    """A point of the segment [a, b] with all coordinates in (1/2)Z, if any."""
    d = tuple(y - x for x, y in zip(a, b))
    moving = [i for i in range(3) if d[i]]
    for i in range(3):
        if not d[i] and (2 * a[i]).denominator != 1:
            return None
    k = max(moving, key=lambda i: abs(d[i]))
    # 2 a_k + 2 t d_k = j for integer j, t in [0, 1]
    lo, hi = sorted((2 * a[k], 2 * b[k]))
    for j in range(math.ceil(lo), math.floor(hi) + 1):
        t = (j - 2 * a[k]) / (2 * d[k])
        p = tuple(a[i] + t * d[i] for i in range(3))
        if all((2 * c).denominator == 1 for c in p):
            return p
    return None


def check_avoids_central(c: PLCurve) -> None:
    for i, (a, b) in enumerate(c.segments()):
        hit = _central_on_segment(a, b)
        if hit is not None:
            raise NonTransverse(_fmt_vec(hit), f"segment {i} meets the central class "
                                f"{canonicalize(hit)}")


def signed_intersection_count(c: PLCurve, s: PlaneImage) -> int:
    """Signed crossings of the curve with every Z^3-translate of the plane."""
    n = s.primitive_normal
    level = s.level
    total = 0
    for i, (a, b) in enumerate(c.segments()):
        fa, fb = _dot(n, a) - level, _dot(n, b) - level
        if fa.denominator == 1:
            raise NonTransverse(_fmt_vec(a), f"vertex {i} lies on plane {s.label}")
        if fa == fb:
            continue
        lo, hi = sorted((fa, fb))
        sign = 1 if fb > fa else -1
        for k in range(math.ceil(lo), math.floor(hi) + 1):
            if k == fb:
                raise NonTransverse(_fmt_vec(b), f"vertex {i + 1} lies on plane {s.label}")
            t = (k - fa) / (fb - fa)
            p = tuple(x + t * (y - x) for x, y in zip(a, b))
            if all((2 * q).denominator == 1 for q in p):
                raise NonTransverse(_fmt_vec(p), f"crossing with {s.label} is a central class")
            total += sign
    return total


@dataclass
class CountIdentityReport:
    count_p1: int
    count_pn: int
    count_p0: int
    holds: bool
    closed: bool = True
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"P_1": self.count_p1, "P_N": self.count_pn, "P_0": self.count_p0,
                "holds": self.holds, "closed": self.closed}


def surgery_count_identity(c: PLCurve) -> CountIdentityReport:
    """count(P_1) - count(P_N) = count(P_0); guaranteed for closed curves."""
    check_avoids_central(c)
    planes = standard_planes()
    c1 = signed_intersection_count(c, planes["P_1"])
    cn = signed_intersection_count(c, planes["P_N"])
    c0 = signed_intersection_count(c, planes["P_0"])
    return CountIdentityReport(c1, cn, c0, c1 - cn == c0, c.closed)


def boundary_of_v_counts(c: PLCurve) -> dict[str, int]:
    """Signed crossings with the faces -P_1, P_N, P_0 bounding the solid V."""
    planes = standard_planes()
    return {"-P_1": -signed_intersection_count(c, planes["P_1"]),
            "P_N": signed_intersection_count(c, planes["P_N"]),
            "P_0": signed_intersection_count(c, planes["P_0"])}


def random_closed_curve(rng: random.Random, planes: Iterable[PlaneImage] | None = None,
                        n_vertices: int = 6, denominator: int = 997,
                        max_winding: int = 2, attempts: int = 1000) -> PLCurve:
    """Seeded random closed PL loop transverse to ``planes`` and off the central classes."""
    planes = list(planes if planes is not None else standard_planes().values())
    for _ in range(attempts):
        verts = [tuple(Fraction(rng.randint(-2 * denominator, 2 * denominator), denominator)
                       for _ in range(3)) for _ in range(n_vertices)]
        shift = tuple(rng.randint(-max_winding, max_winding) for _ in range(3))
        verts.append(tuple(c + s for c, s in zip(verts[0], shift)))
        try:
            curve = PLCurve(verts)
            check_avoids_central(curve)
            for p in planes:
                signed_intersection_count(curve, p)
        except (NonTransverse, ValidationError):
            continue
        return curve
    raise RuntimeError("could not sample a transverse curve")  # pragma: no cover


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_vec(v) -> str:
    return "(" + ", ".join(_fmt(c) for c in v) + ")"
