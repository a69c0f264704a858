"""Pure-Python RK4 kernels, used when the compiled extension is unavailable.

Single trajectories and small batches run on plain floats; large batches are
vectorised with numpy.
State layout: nine coordinates (X1, X2, X3) followed by physical time.
"""

from __future__ import annotations

import math

import numpy as np

COMPLETED = 0
TRUNCATED = 1
ABSORBED = 2


def _rhs(x, s, scaled):
    a1, a2, a3, b1, b2, b3, c1, c2, c3 = x[:9]
    # dX1 = -s X2 x X3, dX2 = -s X3 x X1, dX3 = -s X1 x X2
    g = (b2 * c3 - b3 * c2, b3 * c1 - b1 * c3, b1 * c2 - b2 * c1,
         c2 * a3 - c3 * a2, c3 * a1 - c1 * a3, c1 * a2 - c2 * a1,
         a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1)
    if scaled:
        norm = math.sqrt(sum(v * v for v in x[:9]))
        if norm == 0.0:
            return [0.0] * 10
        k = -s / norm
        return [k * v for v in g] + [1.0 / norm]
    return [-s * v for v in g] + [1.0]


def _invariants(x, s):
    a, b, c = x[0:3], x[3:6], x[6:9]
    aa = a[0] * a[0] + a[1] * a[1] + a[2] * a[2]
    bb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2]
    cc = c[0] * c[0] + c[1] * c[1] + c[2] * c[2]
    det = (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
           + a[2] * (b[0] * c[1] - b[1] * c[0]))
    return (aa - bb, bb - cc,
            a[0] * b[0] + a[1] * b[1] + a[2] * b[2],
            b[0] * c[0] + b[1] * c[1] + b[2] * c[2],
            a[0] * c[0] + a[1] * c[1] + a[2] * c[2]), s * det


def integrate(y0, s, h, n_steps, radius, scaled, sample_every, zero_radius=0.0):
    """Integrate one trajectory.

    Integration stops early once |b| > ``radius`` (status TRUNCATED) or
    |b| < ``zero_radius`` (status ABSORBED). Returns ``(samples, status, steps, drift, cs_increase)``: samples is an
    (k, 10) array, drift the max deviation of each of the five first integrals,
    cs_increase the largest one-step rise of the Chern-Simons value.
    """
    x = [float(v) for v in y0]
    q0, cs = _invariants(x, s)
    drift = [0.0] * 5
    cs_inc = 0.0
    samples = [list(x)]
    status = COMPLETED
    steps = 0
    half = 0.5 * h
    for i in range(n_steps):
        k1 = _rhs(x, s, scaled)
        k2 = _rhs([u + half * v for u, v in zip(x, k1)], s, scaled)
        k3 = _rhs([u + half * v for u, v in zip(x, k2)], s, scaled)
        k4 = _rhs([u + h * v for u, v in zip(x, k3)], s, scaled)
        x = [u + h / 6.0 * (p + 2.0 * q + 2.0 * r + w)
             for u, p, q, r, w in zip(x, k1, k2, k3, k4)]
        steps = i + 1
        q, cs_new = _invariants(x, s)
        for j in range(5):
            d = abs(q[j] - q0[j])
            if d > drift[j]:
                drift[j] = d
        if cs_new - cs > cs_inc:
            cs_inc = cs_new - cs
        cs = cs_new
        norm = math.sqrt(sum(v * v for v in x[:9]))
        if not math.isfinite(norm) or norm > radius:
            status = TRUNCATED
            samples.append(list(x))
            break
        if norm < zero_radius:
            status = ABSORBED
            samples.append(list(x))
            break
        if sample_every and steps % sample_every == 0:
            samples.append(list(x))
    if samples[-1] != x:
        samples.append(list(x))
    return np.array(samples, dtype=float), status, steps, np.array(drift), cs_inc


def _rhs_batch(x, s, scaled):
    a, b, c = x[:, 0:3], x[:, 3:6], x[:, 6:9]
    out = np.empty_like(x)
    out[:, 0:3] = np.cross(b, c)
    out[:, 3:6] = np.cross(c, a)
    out[:, 6:9] = np.cross(a, b)
    if scaled:
        norm = np.sqrt(np.einsum("ij,ij->i", x[:, :9], x[:, :9]))
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(norm > 0.0, 1.0 / norm, 0.0)
        out[:, :9] *= (-s * inv)[:, None]
        out[:, 9] = inv
    else:
        out[:, :9] *= -s
        out[:, 9] = 1.0
    return out


def _invariants_batch(x, s):
    a, b, c = x[:, 0:3], x[:, 3:6], x[:, 6:9]
    aa, bb, cc = (np.einsum("ij,ij->i", v, v) for v in (a, b, c))
    q = np.stack([aa - bb, bb - cc, np.einsum("ij,ij->i", a, b),
                  np.einsum("ij,ij->i", b, c), np.einsum("ij,ij->i", a, c)], axis=1)
    det = np.einsum("ij,ij->i", a, np.cross(b, c))
    return q, s * det


# below this many rows the per-call numpy overhead loses to plain floats
LOCKSTEP_MIN_ROWS = 64


def integrate_batch(y0, s, h, n_steps, radius, scaled, zero_radius=0.0):
    """Integrate many trajectories; truncated rows freeze.

    Returns ``(final, status, steps, drift, cs_increase)`` with one row per
    trajectory.
    """
    x = np.array(y0, dtype=float, copy=True)
    m = x.shape[0]
    if m < LOCKSTEP_MIN_ROWS:
        rows = [integrate(row, s, h, n_steps, radius, scaled, 0, zero_radius) for row in x]
        return (np.array([r[0][-1] for r in rows]), np.array([r[1] for r in rows], dtype=np.int64),
                np.array([r[2] for r in rows], dtype=np.int64), np.array([r[3] for r in rows]),
                np.array([r[4] for r in rows]))
    q0, cs = _invariants_batch(x, s)
    drift = np.zeros((m, 5))
    cs_inc = np.zeros(m)
    status = np.zeros(m, dtype=np.int64)
    steps = np.zeros(m, dtype=np.int64)
    active = np.ones(m, dtype=bool)
    half = 0.5 * h
    for _ in range(n_steps):
        if not active.any():
            break
        xa = x[active]
        k1 = _rhs_batch(xa, s, scaled)
        k2 = _rhs_batch(xa + half * k1, s, scaled)
        k3 = _rhs_batch(xa + half * k2, s, scaled)
        k4 = _rhs_batch(xa + h * k3, s, scaled)
        xa = xa + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x[active] = xa
        steps[active] += 1
        q, cs_new = _invariants_batch(xa, s)
        drift[active] = np.maximum(drift[active], np.abs(q - q0[active]))
        cs_inc[active] = np.maximum(cs_inc[active], cs_new - cs[active])
        cs[active] = cs_new
        with np.errstate(invalid="ignore"):
            norm = np.sqrt(np.einsum("ij,ij->i", xa[:, :9], xa[:, :9]))
            blown = ~np.isfinite(norm) | (norm > radius)
        absorbed = norm < zero_radius
        if blown.any() or absorbed.any():
            idx = np.flatnonzero(active)
            status[idx[blown]] = TRUNCATED
            status[idx[absorbed]] = ABSORBED
            active[idx[blown | absorbed]] = False
    return x, status, steps, drift, cs_inc
