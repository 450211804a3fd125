# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled hot loops for the evolutionary engines.

Mirrors ``chanceknap._py_kernels`` draw for draw: one uniform per bit, one
per power-law sample, one per bounded integer (``int(u * k)``), identical
fitness arithmetic.  See the fallback module for the reference semantics.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport log, sqrt
from libc.stdlib cimport free, malloc, qsort
from numpy.random cimport bitgen_t

cnp.import_array()

cdef const char *_CAPSULE_NAME = "BitGenerator"


cdef bitgen_t *_bitgen(object gen) except NULL:
    capsule = gen.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, _CAPSULE_NAME):
        raise ValueError("expected a numpy Generator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, _CAPSULE_NAME)


cdef inline double _next(bitgen_t *bg) noexcept nogil:
    return bg.next_double(bg.state)


cdef inline long _upper_bound(const double *cdf, long size, double u) noexcept nogil:
    # first index with cdf[index] > u (matches numpy searchsorted side='right')
    cdef long lo = 0, hi = size, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline void _evaluate(const unsigned char *bits, const cnp.int64_t *weights,
                           const double *mus, long n, long capacity,
                           bint use_cheb, double delta, double d2,
                           double ratio, double hoef_t,
                           double *out_u, double *out_p) noexcept nogil:
    cdef long i, w = 0, ones = 0
    cdef double m = 0.0, v
    for i in range(n):
        if bits[i]:
            w += weights[i]
            m += mus[i]
            ones += 1
    out_u[0] = <double> (w - capacity) if w > capacity else 0.0
    if use_cheb:
        v = (<double> ones) * d2 / 3.0
        out_p[0] = m - sqrt(ratio * v)
    else:
        out_p[0] = m - delta * sqrt(hoef_t * (<double> ones))


def one_plus_one(const cnp.int64_t[::1] weights, const double[::1] mus,
                 long capacity, double delta, double alpha, bint use_cheb,
                 long budget, long stride, bint heavy,
                 const double[::1] power_cdf, object init_gen, object mut_gen):
    cdef long n = weights.shape[0]
    cdef double d2 = delta * delta
    cdef double ratio = (1.0 - alpha) / alpha
    cdef double hoef_t = log(1.0 / alpha) * 2.0
    cdef double flip_p = 1.0 / (<double> n)

    cdef bitgen_t *init_bg = _bitgen(init_gen)
    cdef bitgen_t *mut_bg = _bitgen(mut_gen)

    x_arr = np.empty(n, dtype=np.uint8)
    y_arr = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] x = x_arr
    cdef unsigned char[::1] y = y_arr

    cdef long cap_traj = budget // stride + 3
    traj_e_arr = np.empty(cap_traj, dtype=np.int64)
    traj_p_arr = np.empty(cap_traj, dtype=np.float64)
    cdef cnp.int64_t[::1] traj_e = traj_e_arr
    cdef double[::1] traj_p = traj_p_arr
    cdef long n_rec = 0, last_rec = 0

    cdef long i, evals, theta
    cdef double u_x, p_x, u_y, p_y, p_mut

    for i in range(n):
        x[i] = 1 if _next(init_bg) < 0.5 else 0
    _evaluate(&x[0], &weights[0], &mus[0], n, capacity, use_cheb, delta,
              d2, ratio, hoef_t, &u_x, &p_x)
    evals = 1
    if evals == 1 or evals % stride == 0 or evals == budget:
        traj_e[n_rec] = evals
        traj_p[n_rec] = p_x
        n_rec += 1
        last_rec = evals

    while evals < budget:
        if heavy:
            theta = _upper_bound(&power_cdf[0], power_cdf.shape[0],
                                 _next(mut_bg)) + 1
            p_mut = (<double> theta) / (<double> n)
        else:
            p_mut = flip_p
        for i in range(n):
            if _next(mut_bg) < p_mut:
                y[i] = 1 - x[i]
            else:
                y[i] = x[i]
        _evaluate(&y[0], &weights[0], &mus[0], n, capacity, use_cheb, delta,
                  d2, ratio, hoef_t, &u_y, &p_y)
        evals += 1
        if u_y < u_x or (u_y == u_x and p_y >= p_x):
            for i in range(n):
                x[i] = y[i]
            u_x = u_y
            p_x = p_y
        if evals % stride == 0 or evals == budget:
            if last_rec != evals:
                traj_e[n_rec] = evals
                traj_p[n_rec] = p_x
                n_rec += 1
                last_rec = evals

    return (x_arr, u_x, p_x, evals,
            traj_e_arr[:n_rec].copy(), traj_p_arr[:n_rec].copy())


cdef struct RatioIdx:
    double ratio
    long idx


cdef int _cmp_ratio_idx(const void *pa, const void *pb) noexcept nogil:
    # decreasing ratio, ties toward the lower original index
    cdef const RatioIdx *a = <const RatioIdx *> pa
    cdef const RatioIdx *b = <const RatioIdx *> pb
    if a.ratio > b.ratio:
        return -1
    if a.ratio < b.ratio:
        return 1
    if a.idx < b.idx:
        return -1
    if a.idx > b.idx:
        return 1
    return 0


cdef long _crossover(const unsigned char *xb, const unsigned char *yb,
                     unsigned char *z, RatioIdx *work,
                     const cnp.int64_t *weights, const double *mus,
                     long n, long capacity, double delta,
                     double hoef_t) noexcept nogil:
    cdef long i, n_diff = 0, ones_z = 0, weight_z = 0, item, w_i
    cdef double disc
    for i in range(n):
        if xb[i] == yb[i]:
            z[i] = xb[i]
            if z[i]:
                ones_z += 1
                weight_z += weights[i]
        else:
            z[i] = 0
            work[n_diff].idx = i
            n_diff += 1
    if n_diff == 0:
        return 0
    disc = delta * (sqrt(hoef_t * (<double> (ones_z + 1)))
                    - sqrt(hoef_t * (<double> ones_z)))
    for i in range(n_diff):
        item = work[i].idx
        work[i].ratio = (mus[item] - disc) / (<double> weights[item])
    qsort(work, n_diff, sizeof(RatioIdx), _cmp_ratio_idx)
    for i in range(n_diff):
        item = work[i].idx
        w_i = weights[item]
        if weight_z + w_i <= capacity:
            z[item] = 1
            weight_z += w_i
    return n_diff


def mu_plus_one(const cnp.int64_t[::1] weights, const double[::1] mus,
                long capacity, double delta, double alpha, bint use_cheb,
                long budget, long stride, long mu_size, double pc,
                const double[::1] power_cdf, object init_gen, object sel_gen,
                object coin_gen, object mut_gen):
    cdef long n = weights.shape[0]
    cdef double d2 = delta * delta
    cdef double ratio = (1.0 - alpha) / alpha
    cdef double hoef_t = log(1.0 / alpha) * 2.0

    cdef bitgen_t *init_bg = _bitgen(init_gen)
    cdef bitgen_t *sel_bg = _bitgen(sel_gen)
    cdef bitgen_t *coin_bg = _bitgen(coin_gen)
    cdef bitgen_t *mut_bg = _bitgen(mut_gen)

    pop_arr = np.empty((mu_size, n), dtype=np.uint8)
    z_arr = np.empty(n, dtype=np.uint8)
    u_all = np.empty(mu_size, dtype=np.float64)
    p_all = np.empty(mu_size, dtype=np.float64)
    cdef unsigned char[:, ::1] pop = pop_arr
    cdef unsigned char[::1] z = z_arr
    cdef double[::1] u_arr = u_all
    cdef double[::1] p_arr = p_all

    cdef long cap_traj = budget // stride + 3
    traj_e_arr = np.empty(cap_traj, dtype=np.int64)
    traj_p_arr = np.empty(cap_traj, dtype=np.float64)
    cdef cnp.int64_t[::1] traj_e = traj_e_arr
    cdef double[::1] traj_p = traj_p_arr
    cdef long n_rec = 0, last_rec = 0

    cdef RatioIdx *work = <RatioIdx *> malloc(n * sizeof(RatioIdx))
    if work == NULL:
        raise MemoryError()

    cdef long i, k, evals = 0, best_idx = 0, slot, theta, pi, pj
    cdef double u_z, p_z, p_mut
    cdef bint crossed

    try:
        for k in range(mu_size):
            for i in range(n):
                pop[k, i] = 1 if _next(init_bg) < 0.5 else 0
            _evaluate(&pop[k, 0], &weights[0], &mus[0], n, capacity, use_cheb,
                      delta, d2, ratio, hoef_t, &u_arr[k], &p_arr[k])
            evals += 1
            if k == 0 or u_arr[k] < u_arr[best_idx] or \
                    (u_arr[k] == u_arr[best_idx] and p_arr[k] > p_arr[best_idx]):
                best_idx = k
            if evals == 1 or evals % stride == 0 or evals == budget:
                if n_rec == 0 or last_rec != evals:
                    traj_e[n_rec] = evals
                    traj_p[n_rec] = p_arr[best_idx]
                    n_rec += 1
                    last_rec = evals

        while evals < budget:
            crossed = _next(coin_bg) < pc
            if crossed:
                pi = <long> (_next(sel_bg) * (<double> mu_size))
                pj = <long> (_next(sel_bg) * (<double> (mu_size - 1)))
                if pj >= pi:
                    pj += 1
                _crossover(&pop[pi, 0], &pop[pj, 0], &z[0], work,
                           &weights[0], &mus[0], n, capacity, delta, hoef_t)
            else:
                pi = <long> (_next(sel_bg) * (<double> mu_size))
                pj = -1
                for i in range(n):
                    z[i] = pop[pi, i]
            theta = _upper_bound(&power_cdf[0], power_cdf.shape[0],
                                 _next(mut_bg)) + 1
            p_mut = (<double> theta) / (<double> n)
            for i in range(n):
                if _next(mut_bg) < p_mut:
                    z[i] = 1 - z[i]
            _evaluate(&z[0], &weights[0], &mus[0], n, capacity, use_cheb,
                      delta, d2, ratio, hoef_t, &u_z, &p_z)
            evals += 1

            slot = -1
            if u_z < u_arr[pi] or (u_z == u_arr[pi] and p_z >= p_arr[pi]):
                slot = pi
            elif crossed and (u_z < u_arr[pj] or
                              (u_z == u_arr[pj] and p_z >= p_arr[pj])):
                slot = pj
            if slot >= 0:
                for i in range(n):
                    pop[slot, i] = z[i]
                u_arr[slot] = u_z
                p_arr[slot] = p_z
                if slot == best_idx or u_z < u_arr[best_idx] or \
                        (u_z == u_arr[best_idx] and p_z > p_arr[best_idx]):
                    best_idx = slot
            if evals % stride == 0 or evals == budget:
                if n_rec == 0 or last_rec != evals:
                    traj_e[n_rec] = evals
                    traj_p[n_rec] = p_arr[best_idx]
                    n_rec += 1
                    last_rec = evals
    finally:
        free(work)

    return (pop_arr[best_idx].copy(), u_all[best_idx], p_all[best_idx], evals,
            traj_e_arr[:n_rec].copy(), traj_p_arr[:n_rec].copy())
