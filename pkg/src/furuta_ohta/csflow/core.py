"""Chern-Simons gradient flow at a central flat connection on T^3.

The tangent space at the central connection is H^1(T^3) ⊗ su(2); with an
orthonormal frame it is a triple (X1, X2, X3) of vectors in R^3, where the
Lie bracket is the cross product. The Chern-Simons value restricted to this
slice is the triple product, and the downward flow is a Nahm-type ODE.

``sign_convention`` flips the overall sign of the functional. The default,
+1, makes r(e1, e2, e3) with r > 0 the contracting branch.

Two clocks are available. ``physical`` integrates in the flow time t.
``scaled`` integrates in σ with dt/dσ = 1/|b|. That turns the algebraic 1/t
decay of the contracting branch into exponential decay, so limits are reached
in a bounded number of fixed steps. Physical time is carried along as an
extra coordinate in both clocks.

The origin is a saddle: its stable set has positive codimension, so round-off
of order ε pushes an exact member off it once |b| ~ sqrt(ε). With
``stop_at_zero`` the ball |b| < ZERO_THRESHOLD is treated as absorbing and
integration ends on entry. A non-member whose stable-set defect is δ never
gets closer than about sqrt(δ), so the ball is only entered by members.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import InvalidParams, ValidationError
from . import _backend

Vec = tuple[float, float, float]

ZERO_THRESHOLD = 1e-6
COMMUTING_THRESHOLD = 1e-6

CONVERGES_TO_ZERO = "converges_to_zero"
CONVERGES_TO_COMMUTING = "converges_to_commuting"
TRUNCATED = "truncated"
EXHAUSTED = "exhausted"


def _vec(v, name: str) -> Vec:
    try:
        out = tuple(float(c) for c in v)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} must be three numbers") from exc
    if len(out) != 3:
        raise ValidationError(f"{name} must have three components, got {len(out)}")
    if not all(math.isfinite(c) for c in out):
        raise ValidationError(f"{name} has non-finite entries")
    return out


def _cross(a, b) -> Vec:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


@dataclass(frozen=True)
class SuTriple:
    X1: Vec
    X2: Vec
    X3: Vec

    def __post_init__(self):
        for name in ("X1", "X2", "X3"):
            object.__setattr__(self, name, _vec(getattr(self, name), name))

    @classmethod
    def from_flat(cls, values: Sequence[float]) -> SuTriple:
        values = list(values)
        if len(values) != 9:
            raise ValidationError(f"a triple needs nine numbers, got {len(values)}")
        return cls(values[0:3], values[3:6], values[6:9])

    def flat(self) -> list[float]:
        return [*self.X1, *self.X2, *self.X3]

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.flat()))

    def scaled(self, k: float) -> SuTriple:
        return SuTriple.from_flat([k * c for c in self.flat()])

    def rotated(self, r) -> SuTriple:
        """Apply the 3x3 matrix ``r`` to each vector (adjoint action)."""
        r = np.asarray(r, dtype=float)
        return SuTriple(*(tuple(r @ np.asarray(x)) for x in (self.X1, self.X2, self.X3)))

    def __add__(self, other: SuTriple) -> SuTriple:
        return SuTriple.from_flat([a + b for a, b in zip(self.flat(), other.flat())])


def orthonormal_triple(r: float = 1.0) -> SuTriple:
    return SuTriple((r, 0.0, 0.0), (0.0, r, 0.0), (0.0, 0.0, r))


@dataclass(frozen=True)
class FlowParams:
    """Fixed-step integration controls.

    Rule of thumb: keep ``step`` at most 1e-2 times the characteristic time
    scale, which is 1/|b| on the physical clock and O(1) on the scaled clock.
    ``t_max`` is measured on the chosen clock.
    """

    step: float = 1e-2
    t_max: float = 60.0
    truncation_radius: float = 1e3
    sign_convention: int = 1
    clock: str = "scaled"
    sample_every: int = 100
    stop_at_zero: bool = True

    def __post_init__(self):
        for name in ("step", "t_max", "truncation_radius"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v <= 0:
                raise InvalidParams(f"{name} must be a positive finite number, got {v!r}")
        if self.sign_convention not in (1, -1) or isinstance(self.sign_convention, bool):
            raise InvalidParams(f"sign_convention must be +1 or -1, got {self.sign_convention!r}")
        if self.clock not in ("physical", "scaled"):
            raise InvalidParams(f"clock must be 'physical' or 'scaled', got {self.clock!r}")
        if isinstance(self.sample_every, bool) or not isinstance(self.sample_every, int) \
                or self.sample_every < 0:
            raise InvalidParams(f"sample_every must be a non-negative integer, got {self.sample_every!r}")
        if not isinstance(self.stop_at_zero, bool):
            raise InvalidParams(f"stop_at_zero must be a boolean, got {self.stop_at_zero!r}")
        if self.step > self.t_max:
            raise InvalidParams(f"step {self.step} exceeds t_max {self.t_max}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.step))

    @property
    def zero_radius(self) -> float:
        return ZERO_THRESHOLD if self.stop_at_zero else 0.0


def kuranishi_map(b: SuTriple) -> tuple[Vec, Vec, Vec]:
    """Bracket components on e1^e2, e2^e3, e3^e1."""
    return (_cross(b.X1, b.X2), _cross(b.X2, b.X3), _cross(b.X3, b.X1))


def kuranishi_norm(b: SuTriple) -> float:
    return math.sqrt(sum(_dot(v, v) for v in kuranishi_map(b)))


def chern_simons_value(b: SuTriple, sign_convention: int = 1) -> float:
    return sign_convention * _dot(b.X1, _cross(b.X2, b.X3))


def gradient(b: SuTriple, sign_convention: int = 1) -> SuTriple:
    s = sign_convention
    return SuTriple(*(tuple(s * c for c in v) for v in
                      (_cross(b.X2, b.X3), _cross(b.X3, b.X1), _cross(b.X1, b.X2))))


def conserved_quantities(b: SuTriple, sign_convention: int = 1) -> tuple[float, ...]:
    """Five first integrals of the flow, then the (non-increasing) Chern-Simons value."""
    n1, n2, n3 = (_dot(x, x) for x in (b.X1, b.X2, b.X3))
    return (n1 - n2, n2 - n3, _dot(b.X1, b.X2), _dot(b.X2, b.X3), _dot(b.X1, b.X3),
            chern_simons_value(b, sign_convention))


def membership_defect(b: SuTriple, sign_convention: int = 1) -> float:
    """How far ``b`` is from satisfying the stable-set conditions (0 on the set)."""
    n = [math.sqrt(_dot(x, x)) for x in (b.X1, b.X2, b.X3)]
    dots = [_dot(b.X1, b.X2), _dot(b.X2, b.X3), _dot(b.X1, b.X3)]
    cs = chern_simons_value(b, sign_convention)
    return max(abs(n[0] - n[1]), abs(n[1] - n[2]), abs(n[0] - n[2]),
               *(abs(d) for d in dots), max(0.0, -cs))


def stable_set_membership(b: SuTriple, tol: float = 1e-9, sign_convention: int = 1) -> bool:
    """Equal norms, pairwise orthogonal, and Chern-Simons value >= -tol."""
    if not tol > 0:
        raise InvalidParams(f"tol must be positive, got {tol!r}")
    return membership_defect(b, sign_convention) <= tol


@dataclass
class Trajectory:
    times: list[float]
    samples: list[SuTriple]
    classification: str
    steps: int
    drift: tuple[float, ...]
    cs_increase: float
    clock: str = "physical"
    sigma: list[float] = field(default_factory=list)

    @property
    def final(self) -> SuTriple:
        return self.samples[-1]

    def to_json(self, with_samples: bool = True) -> dict:
        out = {"classification": self.classification, "steps": self.steps,
               "clock": self.clock, "final": self.final.flat(),
               "final_time": self.times[-1],
               "drift": list(self.drift), "max_drift": max(self.drift),
               "cs_increase": self.cs_increase}
        if with_samples:
            out["samples"] = [{"t": t, "b": s.flat()} for t, s in zip(self.times, self.samples)]
        return out


def classify(final: SuTriple, truncated: bool) -> str:
    if truncated:
        return TRUNCATED
    if final.norm() < ZERO_THRESHOLD:
        return CONVERGES_TO_ZERO
    if kuranishi_norm(final) < COMMUTING_THRESHOLD:
        return CONVERGES_TO_COMMUTING
    return EXHAUSTED


def flow(b0: SuTriple, p: FlowParams | None = None) -> Trajectory:
    """Integrate the downward flow with fixed-step RK4 and classify the end state."""
    p = p or FlowParams()
    scaled = p.clock == "scaled"
    samples, status, steps, drift, cs_inc = _backend.kernels.integrate(
        b0.flat() + [0.0], float(p.sign_convention), float(p.step), p.n_steps,
        float(p.truncation_radius), scaled, p.sample_every, p.zero_radius)
    samples = np.asarray(samples)
    triples = [SuTriple.from_flat(row[:9]) for row in samples]
    if scaled:
        sigma = [min(i * p.sample_every, steps) * p.step for i in range(len(samples))]
        sigma[-1] = steps * p.step
    else:
        sigma = []
    return Trajectory(times=[float(t) for t in samples[:, 9]], samples=triples,
                      classification=classify(triples[-1], status == 1), steps=int(steps),
                      drift=tuple(float(d) for d in drift), cs_increase=float(cs_inc),
                      clock=p.clock, sigma=sigma)


@dataclass
class BatchResult:
    finals: list[SuTriple]
    final_times: list[float]
    classifications: list[str]
    steps: list[int]
    drift: list[tuple[float, ...]]
    cs_increase: list[float]

    def __len__(self):
        return len(self.finals)


def flow_batch(triples: Iterable[SuTriple], p: FlowParams | None = None) -> BatchResult:
    """Integrate many initial conditions; results come back in input order."""
    p = p or FlowParams()
    triples = list(triples)
    if not triples:
        return BatchResult([], [], [], [], [], [])
    y0 = np.array([t.flat() + [0.0] for t in triples], dtype=float)
    final, status, steps, drift, cs_inc = _backend.kernels.integrate_batch(
        y0, float(p.sign_convention), float(p.step), p.n_steps, float(p.truncation_radius),
        p.clock == "scaled", p.zero_radius)
    finals = [SuTriple.from_flat(row[:9]) for row in final]
    return BatchResult(
        finals=finals,
        final_times=[float(t) for t in final[:, 9]],
        classifications=[classify(f, int(s) == 1) for f, s in zip(finals, status)],
        steps=[int(s) for s in steps],
        drift=[tuple(float(x) for x in d) for d in drift],
        cs_increase=[float(c) for c in cs_inc],
    )


def finite_difference_error(b: SuTriple, direction: SuTriple, sign_convention: int = 1,
                            eps: float = 1e-5) -> float:
    """Relative error between <grad, δb> and a central difference of the functional."""
    g = gradient(b, sign_convention).flat()
    d = direction.flat()
    analytic = sum(x * y for x, y in zip(g, d))
    plus = chern_simons_value(b + direction.scaled(eps), sign_convention)
    minus = chern_simons_value(b + direction.scaled(-eps), sign_convention)
    numeric = (plus - minus) / (2 * eps)
    scale = max(abs(analytic), math.sqrt(sum(x * x for x in g)) * direction.norm(), 1e-300)
    return abs(analytic - numeric) / scale
