"""Casson and Furuta-Ohta invariants of symbolic manifolds.

Evaluation is exact (``Fraction``) and every result carries a trace: the
ordered list of formulas applied, each with an operand summary and the
partial value it produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotAdmissible, NotAHomologySphere, Unresolvable, ValidationError
from .knots import alexander_second_derivative_at_1, is_qhs_branched_cover, signature_sum
from .manifolds import (
    AbstractTorus,
    Excision,
    FiberSum,
    GluingMatrix,
    MappingTorus,
    MappingTorusOfBranchLocus,
    NamedSphere,
    Product,
    ProductTorus,
    S3,
    Splice,
    SurgeryCore,
    SurgeryOneOverQ,
    TorusSurgery,
    ZeroSurgery,
)


@dataclass(frozen=True)
class TraceStep:
    formula: str
    operand: str
    value: Fraction

    def to_json(self) -> dict:
        return {"formula": self.formula, "operand": self.operand, "value": fraction_str(self.value)}


@dataclass(frozen=True)
class InvariantValue:
    value: Fraction
    trace: tuple[TraceStep, ...] = ()

    def to_json(self) -> dict:
        return {"value": fraction_str(self.value), "trace": [s.to_json() for s in self.trace]}


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class _Tracer:
    def __init__(self):
        self.steps: list[TraceStep] = []

    def add(self, formula: str, operand: str, value) -> Fraction:
        value = Fraction(value)
        self.steps.append(TraceStep(formula, operand, value))
        return value

    def result(self, value) -> InvariantValue:
        return InvariantValue(Fraction(value), tuple(self.steps))


# -- Casson invariant --------------------------------------------------------

def casson(y) -> InvariantValue:
    """λ(Y) for an integral homology sphere expression."""
    tr = _Tracer()
    value = _casson(y, tr)
    if value.denominator != 1:  # pragma: no cover - Δ''(1) is always even
        raise ArithmeticError(f"non-integral Casson invariant {value}")
    return tr.result(value)


def _casson(y, tr: _Tracer) -> Fraction:
    if isinstance(y, S3):
        return tr.add("casson.s3", "S3", 0)
    if isinstance(y, NamedSphere):
        return tr.add("casson.named", y.label, y.casson)
    if isinstance(y, SurgeryOneOverQ):
        base = _casson(y.base, tr)
        ddelta = alexander_second_derivative_at_1(y.knot.seifert)
        return tr.add("casson.surgery_1q",
                      f"{y.describe()}: λ(base) + ({y.q}/2)·Δ''(1) = {base} + ({y.q}/2)·{ddelta}",
                      base + Fraction(y.q, 2) * ddelta)
    if isinstance(y, Splice):
        a = _casson(y.k1.ambient, tr)
        b = _casson(y.k2.ambient, tr)
        return tr.add("casson.splice", f"{y.describe()}: {a} + {b}", a + b)
    if isinstance(y, ZeroSurgery):
        raise NotAHomologySphere(f"{y.describe()} is a homology S1 x S2, not a homology sphere")
    raise ValidationError(f"not a three-manifold expression: {y!r}")


# -- admissibility -----------------------------------------------------------

@dataclass
class AdmissibilityReport:
    passed: bool
    reasons: list[str] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"passed": self.passed, "reasons": list(self.reasons), "checks": dict(self.checks)}


def excision_homology_test(glue: GluingMatrix) -> bool:
    """Glued manifold is an integral homology S^1 x S^3 iff gcd(aq, b) = 1 and (aq)^2 + b^2 != 0."""
    aq, b = glue.a * glue.q, glue.b
    return math.gcd(aq, b) == 1 and aq * aq + b * b != 0


def excision_homology_level_test(glue: GluingMatrix) -> bool:
    """Admissibility follows from that of the pieces on the homology level iff b = ±1, q = 0."""
    return abs(glue.b) == 1 and glue.q == 0


def torus_carried_by(torus, base) -> bool:
    if isinstance(torus, AbstractTorus):
        return True
    if isinstance(torus, ProductTorus):
        return isinstance(base, Product) and base.y == torus.knot.ambient
    if isinstance(torus, MappingTorusOfBranchLocus):
        return isinstance(base, MappingTorus)
    if isinstance(torus, SurgeryCore):
        return isinstance(base, TorusSurgery) and base.p == 1
    return False


def check_admissibility(x) -> AdmissibilityReport:
    report = AdmissibilityReport(True)
    _admissible(x, report, "")
    report.passed = not report.reasons or all(r.startswith("note:") for r in report.reasons)
    return report


def _fail(report: AdmissibilityReport, path: str, x, why: str) -> None:
    report.reasons.append(f"{path or 'root'} [{x.describe()}]: {why}")


def _admissible(x, report: AdmissibilityReport, path: str) -> None:
    if isinstance(x, Product):
        if not isinstance(x.y, (S3, NamedSphere, SurgeryOneOverQ, Splice)):
            _fail(report, path, x, "not a homology S1 x S3 (fiber is not a homology sphere)")
    elif isinstance(x, MappingTorus):
        ok = is_qhs_branched_cover(x.knot.seifert, x.n)
        report.checks[f"{path or 'root'}.branched_cover_qhs"] = ok
        if not ok:
            _fail(report, path, x, "branched cover not QHS")
    elif isinstance(x, TorusSurgery):
        if x.p == 0:
            _fail(report, path, x, "(0,1)-surgery has the homology of S2 x T2")
        elif x.p != 1:
            _fail(report, path, x, f"({x.p},{x.q})-surgery is not a homology S1 x S3")
        if not torus_carried_by(x.torus, x.base):
            _fail(report, path, x, f"torus {x.torus.describe()} is not carried by the base")
        _admissible(x.base, report, path + ".base")
    elif isinstance(x, (FiberSum, Excision)):
        for side, piece, torus in (("a", x.a, x.ta), ("b", x.b, x.tb)):
            if not torus_carried_by(torus, piece):
                _fail(report, path, x, f"torus {torus.describe()} is not carried by side {side}")
            _admissible(piece, report, f"{path}.{side}")
        if isinstance(x, Excision):
            homology = excision_homology_test(x.glue)
            level = excision_homology_level_test(x.glue)
            report.checks[f"{path or 'root'}.gluing_homology"] = homology
            report.checks[f"{path or 'root'}.gluing_homology_level"] = level
            if not homology:
                g = x.glue
                _fail(report, path, x, f"glued manifold is not a homology S1 x S3: "
                      f"GCD(aq, b) = GCD({g.a * g.q}, {g.b}) = {math.gcd(g.a * g.q, g.b)}")
            elif not level:
                report.reasons.append(
                    f"note: {path or 'root'}: admissibility is not implied on the homology level "
                    f"(needs b = ±1, q = 0; got b = {x.glue.b}, q = {x.glue.q})")
    else:
        raise ValidationError(f"not a four-manifold expression: {x!r}")


# -- D^0 and λ_FO --------------------------------------------------------------

def _d0(base, torus, tr: _Tracer) -> int:
    """D^0 of the (0,1)-surgery of ``base`` along ``torus``, reduced to knot data."""
    where = f"(0,1)-surgery of {base.describe()} along {torus.describe()}"
    if isinstance(torus, ProductTorus):
        if not (isinstance(base, Product) and base.y == torus.knot.ambient):
            raise Unresolvable(where, "product torus is not carried by this base")
        value = alexander_second_derivative_at_1(torus.knot.seifert)
        tr.add("d0.product_torus", f"D0(S1 x {torus.knot.ambient.describe()}_0({torus.knot.label}))"
               f" = Δ''(1) = {value}", value)
        return value
    if isinstance(torus, SurgeryCore):
        if not (isinstance(base, TorusSurgery) and base.p == 1):
            raise Unresolvable(where, "core torus needs a (1,q)-surgered base")
        # (0,1)-surgery on the core of X_q gives back X_0
        value = _d0(base.base, base.torus, tr)
        tr.add("d0.surgery_core", f"{where} = (0,1)-surgery of the original torus", value)
        return value
    if isinstance(torus, MappingTorusOfBranchLocus):
        if not isinstance(base, MappingTorus):
            raise Unresolvable(where, "branch-locus torus needs a mapping-torus base")
        knot = base.knot
        value = alexander_second_derivative_at_1(knot.seifert)
        tr.add("d0.branch_locus", f"{where} = S1 x {knot.ambient.describe()}_0({knot.label}); "
               f"D0 = Δ''(1) = {value}", value)
        return value
    if isinstance(torus, AbstractTorus):
        raise Unresolvable(where, "abstract torus carries no knot data for D0")
    raise ValidationError(f"not a torus descriptor: {torus!r}")  # pragma: no cover


def d0_invariant(x0) -> InvariantValue:
    """D^0_{w_T} of a 0-surgered manifold, reduced to Δ''(1) of a knot."""
    tr = _Tracer()
    if isinstance(x0, Product) and isinstance(x0.y, ZeroSurgery):
        knot = x0.y.knot
        value = alexander_second_derivative_at_1(knot.seifert)
        tr.add("d0.zero_surgery_product", f"D0({x0.describe()}) = Δ''_{knot.label}(1) = {value}", value)
        return tr.result(value)
    if isinstance(x0, TorusSurgery) and x0.p == 0:
        return tr.result(_d0(x0.base, x0.torus, tr))
    raise ValidationError(f"{x0.describe()} has no 0-surgery structure")


def lambda_fo(x) -> InvariantValue:
    """Furuta-Ohta invariant of an admissible homology S^1 x S^3 expression."""
    report = check_admissibility(x)
    if not report.passed:
        raise NotAdmissible(x.describe(), [r for r in report.reasons if not r.startswith("note:")])
    tr = _Tracer()
    value = _lambda_fo(x, tr)
    if 8 % value.denominator:  # pragma: no cover
        raise ArithmeticError(f"λ_FO denominator {value.denominator} does not divide 8")
    return tr.result(value)


def _lambda_fo(x, tr: _Tracer) -> Fraction:
    if isinstance(x, Product):
        y = _casson(x.y, tr)
        return tr.add("lambda_fo.product", f"λ_FO({x.describe()}) = λ({x.y.describe()})", y)
    if isinstance(x, MappingTorus):
        lam = _casson(x.knot.ambient, tr)
        sigs = signature_sum(x.knot.seifert, x.n)
        value = x.n * lam + Fraction(sigs, 8)
        return tr.add("lambda_fo.mapping_torus",
                      f"{x.describe()}: n·λ(Y) + (1/8)Σ sign^(m/n) = {x.n}·{lam} + ({sigs})/8", value)
    if isinstance(x, TorusSurgery):
        if x.p != 1:
            raise NotAdmissible(x.describe(), ["only (1,q)-surgeries evaluate"])
        base = _lambda_fo(x.base, tr)
        if x.q == 0:
            return tr.add("lambda_fo.torus_surgery", f"{x.describe()}: q = 0, unchanged", base)
        d0 = _d0(x.base, x.torus, tr)
        return tr.add("lambda_fo.torus_surgery",
                      f"{x.describe()}: λ_FO(X) + (q/2)·D0 = {base} + ({x.q}/2)·{d0}",
                      base + Fraction(x.q, 2) * d0)
    if isinstance(x, FiberSum):
        a = _lambda_fo(x.a, tr)
        b = _lambda_fo(x.b, tr)
        return tr.add("lambda_fo.fiber_sum", f"{x.describe()}: {a} + {b}", a + b)
    if isinstance(x, Excision):
        side_a, side_b = excision_summands(x)
        a = _lambda_fo(side_a, tr)
        b = _lambda_fo(side_b, tr)
        return tr.add("lambda_fo.excision", f"{x.describe()}: λ_FO(X_1,φ) + λ_FO(X_2,φ) = {a} + {b}",
                      a + b)
    raise ValidationError(f"not a four-manifold expression: {x!r}")


def excision_summands(x: Excision) -> tuple[TorusSurgery, TorusSurgery]:
    """Rewrite X_{1,φ}, X_{2,φ} as (1, ·)-surgeries on the two pieces.

    Only gluings with b = ±1, q = 0 qualify. Side 1 bounds φ(λ') = b(μ1 + bd λ1),
    a (1, bd)-surgery. Side 2 bounds φ^{-1}(λ1) = b(μ2 - ab λ2 - p γ2), a (1, -ab)-surgery
    provided the γ2-component p vanishes.
    """
    g = x.glue
    if not excision_homology_level_test(g):
        raise Unresolvable(x.describe(), f"gluing matrix {g.describe()} is not of (1,q)-surgery form "
                           f"(b = {g.b}, q = {g.q}); it has no reduction to knot data")
    if g.p != 0:
        raise Unresolvable(x.describe(), f"gluing matrix {g.describe()} glues side 2 along a curve "
                           f"with γ-component {-g.p * g.b}; not a (1,q)-surgery")
    return (TorusSurgery(x.a, x.ta, 1, g.b * g.d), TorusSurgery(x.b, x.tb, 1, -g.a * g.b))


def expand_surgery_chain(x: TorusSurgery, steps: int) -> InvariantValue:
    """λ_FO of a (1,q)-surgery by |q| unit surgeries, each on the previous core torus."""
    if not isinstance(x, TorusSurgery) or x.p != 1:
        raise ValidationError("expand_surgery_chain needs a (1,q) torus surgery")
    if steps != abs(x.q):
        raise ValidationError(f"steps must equal |q| = {abs(x.q)}, got {steps}")
    report = check_admissibility(x)
    if not report.passed:
        raise NotAdmissible(x.describe(), [r for r in report.reasons if not r.startswith("note:")])
    tr = _Tracer()
    value = _lambda_fo(x.base, tr)
    unit = 1 if x.q > 0 else -1
    current, torus = x.base, x.torus
    for k in range(steps):
        d0 = _d0(current, torus, tr)
        value = tr.add("lambda_fo.unit_surgery",
                       f"step {k + 1}: λ_FO(X') = λ_FO(X) {'+' if unit > 0 else '-'} (1/2)·D0 "
                       f"= {value} {'+' if unit > 0 else '-'} {d0}/2",
                       value + Fraction(unit * d0, 2))
        current, torus = TorusSurgery(current, torus, 1, unit), SurgeryCore()
    return tr.result(value)
