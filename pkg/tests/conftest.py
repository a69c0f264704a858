from __future__ import annotations

import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def seifert_entries(draw, max_genus: int = 2, bound: int = 3):
    """V = J + S with J the standard skew block and S symmetric, so det(V - V^T) = 1."""
    g = draw(st.integers(0, max_genus))
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            x = draw(st.integers(-bound, bound))
            rows[i][j] += x
            if j != i:
                rows[j][i] += x
    for k in range(g):
        rows[2 * k][2 * k + 1] += 1
    return rows
