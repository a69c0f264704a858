from __future__ import annotations

from ._backend import BACKEND, compiled_available
from .core import (
    CONVERGES_TO_COMMUTING,
    CONVERGES_TO_ZERO,
    EXHAUSTED,
    TRUNCATED,
    BatchResult,
    FlowParams,
    SuTriple,
    Trajectory,
    chern_simons_value,
    classify,
    conserved_quantities,
    finite_difference_error,
    flow,
    flow_batch,
    gradient,
    kuranishi_map,
    kuranishi_norm,
    membership_defect,
    orthonormal_triple,
    stable_set_membership,
)

__all__ = [
    "BACKEND",
    "CONVERGES_TO_COMMUTING",
    "CONVERGES_TO_ZERO",
    "EXHAUSTED",
    "TRUNCATED",
    "BatchResult",
    "FlowParams",
    "SuTriple",
    "Trajectory",
    "chern_simons_value",
    "classify",
    "compiled_available",
    "conserved_quantities",
    "finite_difference_error",
    "flow",
    "flow_batch",
    "gradient",
    "kuranishi_map",
    "kuranishi_norm",
    "membership_defect",
    "orthonormal_triple",
    "stable_set_membership",
]
