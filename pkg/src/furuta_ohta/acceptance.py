"""Acceptance checks shared by ``furuta-ohta selftest`` and the test suite.

Each check computes its expected values through an independent route
(floating-point eigenvalues, numerical derivatives, Mayer-Vietoris ranks,
homology pairings, closed-form ODE solutions) and compares them with the
exact engine. Details are deterministic for a fixed seed; wall-clock timings
are reported separately so they can be excluded from comparisons.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import csflow
from .catalog import builtin_catalog
from .errors import Unresolvable
from .invariants import (
    casson,
    check_admissibility,
    d0_invariant,
    expand_surgery_chain,
    fraction_str,
    lambda_fo,
)
from .knots import SeifertMatrix, branched_cover_h1_order
from .manifolds import (
    FIBER_SUM_MATRIX,
    S3,
    Excision,
    FiberSum,
    GluingMatrix,
    MappingTorus,
    MappingTorusOfBranchLocus,
    Product,
    ProductTorus,
    SurgeryCore,
    SurgeryOneOverQ,
    TorusSurgery,
    ZeroSurgery,
    dehn_twist_matrix,
    surgery_matrix,
)
from .pillowcase import (
    apply_gluing,
    boundary_of_v_counts,
    central_classes,
    pillowcase_singular_points,
    random_closed_curve,
    standard_planes,
    surgery_count_identity,
)

DEFAULT_SEED = 20240917


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    limit_s: float
    details: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    @property
    def within_time(self) -> bool:
        return self.elapsed_s < self.limit_s

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "" if self.within_time else f" (over time limit {self.limit_s}s)"
        return f"[{status}] criterion {self.number}: {self.name} ({self.elapsed_s:.2f}s){extra}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "limit_s": self.limit_s, "details": self.details}


# -- independent oracles ---------------------------------------------------------

def float_signature(v: SeifertMatrix, m: int, n: int) -> int:
    """Signature of (1-ω)V + (1-ω̄)V^T from floating-point eigenvalues."""
    a = np.array(v.entries, dtype=complex)
    w = cmath.exp(2j * math.pi * m / n)
    h = (1 - w) * a + (1 - w.conjugate()) * a.T
    ev = np.linalg.eigvalsh(h)
    if np.min(np.abs(ev)) < 1e-9:
        raise ArithmeticError("form is numerically singular")
    return int(np.sum(ev > 0) - np.sum(ev < 0))


def numeric_alexander_second_derivative(v: SeifertMatrix) -> int:
    """Δ''(1) from a central second difference of det(t^(1/2) V - t^(-1/2) V^T)."""
    a = np.array(v.entries, dtype=float)
    if a.size == 0:
        return 0

    def delta(t: float) -> float:
        s = math.sqrt(t)
        val = np.linalg.det(s * a - a.T / s)
        return val

    sign = 1.0 if delta(1.0) > 0 else -1.0
    h = 1e-3
    second = sign * (delta(1 + h) - 2 * delta(1.0) + delta(1 - h)) / (h * h)
    return int(round(second))


def _snf_cyclic_order(entries: list[int]) -> int:
    """gcd of a list of integers (the order of Z / (entries))."""
    g = 0
    for e in entries:
        g = math.gcd(g, e)
    return g


def mayer_vietoris_is_homology_s1s3(glue: GluingMatrix) -> bool:
    """Homology of M_1 ∪_φ M_2 where each H_1(M_i) = Z<μ_i, γ_i> and λ_i bounds.

    H_1 = Z^2 / (b, q) must be Z; H_2 = coker of the boundary map with columns
    (aq - pb, 0), (b, 0), (a, 1) must vanish.
    """
    a, b, p, q = glue.a, glue.b, glue.p, glue.q
    h1_ok = _snf_cyclic_order([b, q]) == 1
    h2_ok = _snf_cyclic_order([a * q - p * b, b]) == 1
    return h1_ok and h2_ok


def side_one_surgery_curve_ok(glue: GluingMatrix) -> bool:
    """φ(λ') has μ-coefficient ±1 and no γ-component (a (1, k)-surgery curve)."""
    col = [row[1] for row in glue.entries]
    return abs(col[0]) == 1 and col[2] == 0


def gluing_table(rng: random.Random, size: int = 50) -> list[GluingMatrix]:
    """The fiber-sum matrix, Dehn-twist matrices and seeded random det = -1 matrices."""
    table = [FIBER_SUM_MATRIX, dehn_twist_matrix(1, 0), dehn_twist_matrix(2, 3),
             dehn_twist_matrix(1, -1)]
    seen = {m.entries for m in table}
    while len(table) < size:
        a, b, c = (rng.randint(-3, 3) for _ in range(3))
        # ad - bc = -1 needs a | bc - 1
        if a == 0:
            if b * c != 1:
                continue
            d = rng.randint(-3, 3)
        else:
            if (b * c - 1) % a:
                continue
            d = (b * c - 1) // a
        p, q = rng.randint(-3, 3), rng.choice([0, 0, rng.randint(-3, 3)])
        m = GluingMatrix([[a, b, 0], [c, d, 0], [p, q, 1]])
        if m.det != -1 or m.entries in seen:
            continue
        seen.add(m.entries)
        table.append(m)
    return table


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def membership_grid(rng: np.random.Generator) -> list[csflow.SuTriple]:
    """10^3 triples of norm <= 2: norm ratio x angle x signed scale, randomly rotated.

    The stable set is hit exactly at ratio 1, angle 0 and positive scale.
    """
    ratios = [0.5, 0.75, 0.9, 0.95, 1.0, 1.05, 1.1, 1.25, 1.5, 1.9]
    angles = [-0.6, -0.3, -0.1, -0.05, 0.0, 0.05, 0.1, 0.3, 0.6, 1.0]
    scales = [-1.0, -0.6, -0.3, -0.1, -0.02, 0.02, 0.1, 0.3, 0.6, 1.0]
    out = []
    for rho, th, sc in itertools.product(ratios, angles, scales):
        r = sc * 2.0 / math.sqrt(2.0 + rho * rho)
        x1 = (r, 0.0, 0.0)
        x2 = (r * rho * math.sin(th), r * rho * math.cos(th), 0.0)
        x3 = (0.0, 0.0, r)
        out.append(csflow.SuTriple(x1, x2, x3).rotated(random_rotation(rng)))
    return out


# -- criteria ------------------------------------------------------------------------

def criterion_mapping_torus(seed: int) -> dict:
    trefoil = builtin_catalog()["trefoil"]
    details = {}
    ok = True
    for n in (2, 3):
        sigs = [float_signature(trefoil.seifert, m, n) for m in range(1, n)]
        expected = n * 0 + Fraction(sum(sigs), 8)
        got = lambda_fo(MappingTorus(n, trefoil)).value
        details[f"n={n}"] = {"value": fraction_str(got), "oracle": fraction_str(expected),
                             "signatures": sigs}
        ok &= got == expected
    ok &= details["n=2"]["value"] == "-1/4" and details["n=3"]["value"] == "-1/2"
    return {"passed": ok, **details}


def criterion_surgery_coherence(seed: int) -> dict:
    mismatches = []
    checked = 0
    for label, k in builtin_catalog().items():
        for q in range(-5, 6):
            x = TorusSurgery(Product(S3()), ProductTorus(k), 1, q)
            a = lambda_fo(x).value
            b = casson(SurgeryOneOverQ(S3(), k, q)).value
            c = expand_surgery_chain(x, abs(q)).value
            checked += 1
            if not a == b == c:
                mismatches.append({"knot": label, "q": q, "lambda_fo": fraction_str(a),
                                   "casson": fraction_str(b), "chain": fraction_str(c)})
    return {"passed": not mismatches, "checked": checked, "mismatches": mismatches}


def criterion_d0(seed: int) -> dict:
    rows = {}
    ok = True
    for label, k in builtin_catalog().items():
        got = d0_invariant(Product(ZeroSurgery(k))).value
        oracle = numeric_alexander_second_derivative(k.seifert)
        rows[label] = {"d0": fraction_str(got), "oracle": oracle}
        ok &= got == oracle
    return {"passed": ok, "knots": rows}


def _four_manifold_samples():
    cat = builtin_catalog()
    out = []
    for label, k in cat.items():
        out.append((f"S1xS3 along {label}", Product(S3()), ProductTorus(k)))
        out.append((f"S1xS3_(1,2) along {label}",
                    TorusSurgery(Product(S3()), ProductTorus(k), 1, 2), SurgeryCore()))
        n = next(n for n in (2, 3, 4, 5) if branched_cover_h1_order(k.seifert, n) != math.inf)
        out.append((f"X_{n}({label})", MappingTorus(n, k), MappingTorusOfBranchLocus()))
    return out


def criterion_fiber_sum(seed: int) -> dict:
    samples = _four_manifold_samples()
    bad = []
    checked = 0
    for (na, a, ta), (nb, b, tb) in itertools.product(samples, repeat=2):
        la, lb = lambda_fo(a).value, lambda_fo(b).value
        fs = lambda_fo(FiberSum(a, ta, b, tb)).value
        ex = lambda_fo(Excision(a, ta, b, tb, FIBER_SUM_MATRIX)).value
        checked += 1
        if not fs == ex == la + lb:
            bad.append({"a": na, "b": nb, "sum": fraction_str(fs), "excision": fraction_str(ex),
                        "expected": fraction_str(la + lb)})
    return {"passed": not bad, "pairs": checked, "failures": bad}


def criterion_admissibility(seed: int) -> dict:
    rng = random.Random(seed)
    trefoil = builtin_catalog()["trefoil"]
    fig8 = builtin_catalog()["figure-eight"]
    a, ta = Product(S3()), ProductTorus(trefoil)
    b, tb = Product(S3()), ProductTorus(fig8)
    table = gluing_table(rng)
    rows = []
    disagreements = 0
    for g in table:
        x = Excision(a, ta, b, tb, g)
        report = check_admissibility(x)
        homology = report.checks["root.gluing_homology"]
        level = report.checks["root.gluing_homology_level"]
        oracle_h = mayer_vietoris_is_homology_s1s3(g)
        oracle_l = side_one_surgery_curve_ok(g)
        agree = homology == oracle_h and level == oracle_l and report.passed == oracle_h
        disagreements += not agree
        rows.append({"matrix": g.as_lists(), "homology": homology, "homology_level": level,
                     "agree": agree})
    fs = Excision(a, ta, b, tb, FIBER_SUM_MATRIX)
    fs_ok = check_admissibility(fs).passed and lambda_fo(fs).value == 0
    dt = Excision(a, ta, b, tb, dehn_twist_matrix(2, 3))
    dt_pass = check_admissibility(dt).passed
    try:
        lambda_fo(dt)
        dt_unresolvable = False
    except Unresolvable:
        dt_unresolvable = True
    passes = sum(r["homology"] for r in rows)
    return {"passed": disagreements == 0 and fs_ok and dt_pass and dt_unresolvable,
            "matrices": len(rows), "homology_pass": passes,
            "homology_level_pass": sum(r["homology_level"] for r in rows),
            "disagreements": disagreements, "fiber_sum_pass": fs_ok,
            "dehn_twist_homology_pass": dt_pass, "dehn_twist_unresolvable": dt_unresolvable}


def criterion_pillowcase(seed: int) -> dict:
    planes = standard_planes()
    phi1 = surgery_matrix(1, 1)
    image = apply_gluing(phi1, planes["P_N"])
    # the set {(x, -x, z)} mod Z^3 is exactly {x + y in Z}
    pts = [(Fraction(i, 7), Fraction(j, 11) - Fraction(i, 7) * k, Fraction(j, 5))
           for i in range(-3, 4) for j in range(-2, 3) for k in (0, 1)]
    same_set = image.coincides_with(planes["P_1"]) and all(
        image.contains(p) == ((p[0] + p[1]).denominator == 1) for p in pts)
    classes = central_classes()
    counts = {name: len(pillowcase_singular_points(planes[name])) for name in ("P_M", "P_N", "P_0")}
    ok = same_set and len(classes) == 8 and all(c == 4 for c in counts.values())
    return {"passed": ok, "phi1_PN_equals_P1": same_set, "central_classes": len(classes),
            "singular_points": counts}


def criterion_counting(seed: int) -> dict:
    rng = random.Random(seed)
    planes = standard_planes()
    failures = 0
    boundary_failures = 0
    pairing_failures = 0
    tally = {"P_1": 0, "P_N": 0, "P_0": 0}
    nonzero = 0
    for _ in range(100):
        c = random_closed_curve(rng, [planes["P_1"], planes["P_N"], planes["P_0"]])
        r = surgery_count_identity(c)
        failures += not r.holds
        boundary_failures += sum(boundary_of_v_counts(c).values()) != 0
        # homology pairing oracle: a closed lift crosses n.v = const exactly n.(end - start) times
        delta = tuple(e - s for s, e in zip(c.vertices[0], c.vertices[-1]))
        expect = {name: sum(x * y for x, y in zip(planes[name].primitive_normal, delta))
                  for name in ("P_1", "P_N", "P_0")}
        got = {"P_1": r.count_p1, "P_N": r.count_pn, "P_0": r.count_p0}
        pairing_failures += expect != got
        nonzero += any(got.values())
        for k in tally:
            tally[k] += abs(got[k])
    return {"passed": failures == 0 and boundary_failures == 0 and pairing_failures == 0,
            "curves": 100, "identity_failures": failures, "boundary_failures": boundary_failures,
            "pairing_failures": pairing_failures, "curves_with_crossings": nonzero,
            "total_abs_counts": tally}


def criterion_flow(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    out: dict = {}

    # gradient vs central differences
    worst = 0.0
    for _ in range(100):
        b = csflow.SuTriple.from_flat(rng.uniform(-1, 1, 9) * rng.uniform(0.1, 10.0) / 3)
        d = csflow.SuTriple.from_flat(rng.normal(size=9))
        worst = max(worst, csflow.finite_difference_error(b, d))
    out["gradient_max_rel_error"] = worst
    grad_ok = worst < 1e-6

    # first integrals over t in [0, 100] with step 1e-3
    drift_params = csflow.FlowParams(step=1e-3, t_max=100.0, clock="physical", sample_every=0)
    starts = []
    while len(starts) < 8:
        v = rng.normal(size=9)
        v *= rng.uniform(0.005, 0.02) / np.linalg.norm(v)
        starts.append(csflow.SuTriple.from_flat(v))
    starts += [csflow.orthonormal_triple(1.0).rotated(random_rotation(rng)),
               csflow.SuTriple((0.3, 0.0, 0.0), (0.0, 0.3, 0.0), (0.0, 0.0, 0.3)).rotated(
                   random_rotation(rng))]
    batch = csflow.flow_batch(starts, drift_params)
    max_drift = max(max(d) for d in batch.drift)
    max_cs_rise = max(batch.cs_increase)
    survived = all(c != csflow.TRUNCATED for c in batch.classifications)
    grown = max(f.norm() / s.norm() for f, s in zip(batch.finals, starts))
    out.update({"drift_max": max_drift, "cs_max_step_increase": max_cs_rise,
                "drift_trajectories": len(starts), "all_reached_t100": survived,
                "max_growth_factor": grown})
    drift_ok = max_drift < 1e-9 and max_cs_rise <= 1e-9 and survived

    # contracting branch against r / (1 + r t)
    worst_rel = 0.0
    for r in (0.5, 1.0, 2.0):
        rot = random_rotation(rng)
        b0 = csflow.orthonormal_triple(r).rotated(rot)
        tr = csflow.flow(b0, csflow.FlowParams(step=1e-3, t_max=100.0, clock="physical",
                                               sample_every=500))
        trs = csflow.flow(b0, csflow.FlowParams())
        for traj in (tr, trs):
            for t, s in zip(traj.times, traj.samples):
                exact = r / (1 + r * t)
                for x in (s.X1, s.X2, s.X3):
                    worst_rel = max(worst_rel, abs(math.sqrt(sum(c * c for c in x)) - exact) / exact)
        out[f"r={r}"] = {"scaled_clock": trs.classification, "final_norm": trs.final.norm()}
        if trs.classification != csflow.CONVERGES_TO_ZERO:
            worst_rel = math.inf
    flipped = csflow.flow(csflow.orthonormal_triple(1.0), csflow.FlowParams(sign_convention=-1))
    out["contracting_max_rel_error"] = worst_rel
    out["flipped_sign"] = flipped.classification
    branch_ok = worst_rel < 0.01 and flipped.classification == csflow.TRUNCATED

    # membership <=> convergence to zero on the grid
    grid = membership_grid(rng)
    tol, collar = 1e-9, 1e-6
    res = csflow.flow_batch(grid, csflow.FlowParams())
    disagreements = 0
    skipped = 0
    members = 0
    for b, cls in zip(grid, res.classifications):
        defect = csflow.membership_defect(b)
        if tol < defect < collar:
            skipped += 1
            continue
        member = csflow.stable_set_membership(b, tol)
        members += member
        disagreements += member != (cls == csflow.CONVERGES_TO_ZERO)
    classes = {c: res.classifications.count(c) for c in sorted(set(res.classifications))}
    out.update({"grid_points": len(grid), "grid_members": members, "grid_in_collar": skipped,
                "grid_disagreements": disagreements, "grid_classes": classes})
    grid_ok = disagreements == 0 and members > 0

    out["passed"] = grad_ok and drift_ok and branch_ok and grid_ok
    return out


CRITERIA: list[tuple[int, str, float, Callable[[int], dict]]] = [
    (1, "mapping-torus formula", 1.0, criterion_mapping_torus),
    (2, "surgery and Casson coherence", 1.0, criterion_surgery_coherence),
    (3, "D0 identity", 1.0, criterion_d0),
    (4, "fiber-sum additivity", 1.0, criterion_fiber_sum),
    (5, "admissibility gates", 1.0, criterion_admissibility),
    (6, "pillowcase regression", 1.0, criterion_pillowcase),
    (7, "counting identity", 10.0, criterion_counting),
    (8, "flow verification", 60.0, criterion_flow),
]


def _round_floats(obj, digits: int = 12):
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}") if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, digits) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return _round_floats(float(obj), digits)
    return obj


def run_criterion(number: int, seed: int = DEFAULT_SEED) -> CriterionResult:
    for num, name, limit, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            details = fn(seed)
            elapsed = time.perf_counter() - t0
            passed = bool(details.pop("passed"))
            return CriterionResult(num, name, passed, limit, _round_floats(details), elapsed)
    raise KeyError(number)


def canonical_json(results: list[CriterionResult], seed: int) -> str:
    return json.dumps({"seed": seed, "backend": csflow.BACKEND,
                       "criteria": [r.to_json() for r in results]},
                      sort_keys=True, separators=(",", ":"))


def run_all(seed: int = DEFAULT_SEED, determinism: bool = True) -> list[CriterionResult]:
    results = [run_criterion(num, seed) for num, *_ in CRITERIA]
    if determinism:
        t0 = time.perf_counter()
        first = canonical_json(results, seed)
        again = canonical_json([run_criterion(num, seed) for num, *_ in CRITERIA], seed)
        elapsed = time.perf_counter() - t0
        results.append(CriterionResult(9, "determinism", first == again, math.inf,
                                       {"identical_reruns": first == again,
                                        "bytes": len(first)}, elapsed))
    return results
