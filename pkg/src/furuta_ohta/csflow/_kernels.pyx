# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernels; same interface as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, isfinite

cnp.import_array()

cdef enum:
    N = 10
COMPLETED = 0
TRUNCATED = 1
ABSORBED = 2


cdef inline void _rhs(const double* x, double s, bint scaled, double* out) noexcept nogil:
    cdef double a1 = x[0], a2 = x[1], a3 = x[2]
    cdef double b1 = x[3], b2 = x[4], b3 = x[5]
    cdef double c1 = x[6], c2 = x[7], c3 = x[8]
    cdef double k, norm
    cdef int i
    out[0] = b2 * c3 - b3 * c2
    out[1] = b3 * c1 - b1 * c3
    out[2] = b1 * c2 - b2 * c1
    out[3] = c2 * a3 - c3 * a2
    out[4] = c3 * a1 - c1 * a3
    out[5] = c1 * a2 - c2 * a1
    out[6] = a2 * b3 - a3 * b2
    out[7] = a3 * b1 - a1 * b3
    out[8] = a1 * b2 - a2 * b1
    if scaled:
        norm = 0.0
        for i in range(9):
            norm += x[i] * x[i]
        norm = sqrt(norm)
        if norm == 0.0:
            for i in range(N):
                out[i] = 0.0
            return
        k = -s / norm
        for i in range(9):
            out[i] *= k
        out[9] = 1.0 / norm
    else:
        for i in range(9):
            out[i] *= -s
        out[9] = 1.0


cdef inline double _invariants(const double* x, double s, double* q) noexcept nogil:
    cdef const double* a = x
    cdef const double* b = x + 3
    cdef const double* c = x + 6
    cdef double aa = a[0] * a[0] + a[1] * a[1] + a[2] * a[2]
    cdef double bb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2]
    cdef double cc = c[0] * c[0] + c[1] * c[1] + c[2] * c[2]
    q[0] = aa - bb
    q[1] = bb - cc
    q[2] = a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    q[3] = b[0] * c[0] + b[1] * c[1] + b[2] * c[2]
    q[4] = a[0] * c[0] + a[1] * c[1] + a[2] * c[2]
    return s * (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]))


cdef inline void _step(double* x, double s, double h, bint scaled) noexcept nogil:
    cdef double k1[N]
    cdef double k2[N]
    cdef double k3[N]
    cdef double k4[N]
    cdef double tmp[N]
    cdef int i
    _rhs(x, s, scaled, k1)
    for i in range(N):
        tmp[i] = x[i] + 0.5 * h * k1[i]
    _rhs(tmp, s, scaled, k2)
    for i in range(N):
        tmp[i] = x[i] + 0.5 * h * k2[i]
    _rhs(tmp, s, scaled, k3)
    for i in range(N):
        tmp[i] = x[i] + h * k3[i]
    _rhs(tmp, s, scaled, k4)
    for i in range(N):
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


cdef inline double _norm(const double* x) noexcept nogil:
    cdef double norm = 0.0
    cdef int i
    for i in range(9):
        norm += x[i] * x[i]
    return sqrt(norm)


cdef long _run(double* x, double s, double h, long n_steps, double radius, double zero_radius,
               bint scaled, double* drift, double* cs_inc, int* status,
               double* samples, long sample_every, long max_samples, long* n_samples) noexcept nogil:
    cdef double q0[5]
    cdef double q[5]
    cdef double cs, cs_new, d, norm
    cdef long i, steps = 0
    cdef int j
    cs = _invariants(x, s, q0)
    for j in range(5):
        drift[j] = 0.0
    cs_inc[0] = 0.0
    status[0] = 0
    for i in range(n_steps):
        _step(x, s, h, scaled)
        steps = i + 1
        cs_new = _invariants(x, s, q)
        for j in range(5):
            d = fabs(q[j] - q0[j])
            if d > drift[j]:
                drift[j] = d
        if cs_new - cs > cs_inc[0]:
            cs_inc[0] = cs_new - cs
        cs = cs_new
        norm = _norm(x)
        if not isfinite(norm) or norm > radius:
            status[0] = 1
            break
        if norm < zero_radius:
            status[0] = 2
            break
        if samples != NULL and sample_every > 0 and steps % sample_every == 0 \
                and n_samples[0] < max_samples:
            for j in range(N):
                samples[n_samples[0] * N + j] = x[j]
            n_samples[0] += 1
    return steps


def integrate(y0, double s, double h, long n_steps, double radius, bint scaled, long sample_every,
              double zero_radius=0.0):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.array(y0, dtype=np.float64).copy()
    cdef long max_samples = (n_steps // sample_every if sample_every > 0 else 0) + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2] samples = np.empty((max_samples + 1, N))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] drift = np.zeros(5)
    cdef double cs_inc = 0.0
    cdef int status = 0
    cdef long n_samples = 1
    cdef long steps
    samples[0, :] = x
    with nogil:
        steps = _run(&x[0], s, h, n_steps, radius, zero_radius, scaled, &drift[0], &cs_inc, &status,
                     &samples[0, 0], sample_every, max_samples, &n_samples)
    out = samples[:n_samples]
    if not np.array_equal(out[-1], x):
        out = np.vstack([out, x])
    return out, status, steps, drift, cs_inc


def integrate_batch(y0, double s, double h, long n_steps, double radius, bint scaled,
                    double zero_radius=0.0):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] x = np.array(y0, dtype=np.float64, order="C").copy()
    cdef long m = x.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] drift = np.zeros((m, 5))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cs_inc = np.zeros(m)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] steps = np.zeros(m, dtype=np.int64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] status = np.zeros(m, dtype=np.int32)
    cdef long r, dummy = 0
    with nogil:
        for r in range(m):
            steps[r] = _run(&x[r, 0], s, h, n_steps, radius, zero_radius, scaled, &drift[r, 0], &cs_inc[r],
                            <int*>&status[r], NULL, 0, 0, &dummy)
    return x, status.astype(np.int64), steps, drift, cs_inc
