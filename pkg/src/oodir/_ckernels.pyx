# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled basis-evaluation kernels; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, exp, log, lgamma, M_PI

cnp.import_array()

cdef double INV_SQRT_4PI = 1.0 / sqrt(4.0 * M_PI)
cdef double SQRT2 = sqrt(2.0)


def sh_offsets(int lmax, int mmax):
    offsets = np.zeros(lmax + 2, dtype=np.intp)
    cdef Py_ssize_t[:] off = offsets
    cdef int l
    for l in range(lmax + 1):
        off[l + 1] = off[l] + 2 * min(l, mmax) + 1
    return offsets


def real_sh_matrix(azimuth, colatitude, int lmax, int mmax):
    cdef double[:] az = np.ascontiguousarray(azimuth, dtype=np.float64).reshape(-1)
    cdef double[:] th = np.ascontiguousarray(colatitude, dtype=np.float64).reshape(-1)
    offsets = sh_offsets(lmax, mmax)
    cdef Py_ssize_t[:] off = offsets
    cdef Py_ssize_t q, nq = az.shape[0]
    out_arr = np.empty((nq, offsets[lmax + 1]))
    cdef double[:, :] out = out_arr
    cdef int l, m, mtop = min(lmax, mmax)
    cdef Py_ssize_t centre
    cdef double x, s, pmm, p, p1, p2, a, b, tc, ts

    # recurrence coefficients are shared by all points
    a_arr = np.zeros((lmax + 1, mtop + 1))
    b_arr = np.zeros((lmax + 1, mtop + 1))
    cdef double[:, :] ca = a_arr
    cdef double[:, :] cb = b_arr
    for m in range(mtop + 1):
        for l in range(m + 2, lmax + 1):
            ca[l, m] = sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            cb[l, m] = -sqrt((2.0 * l + 1.0) * ((l - 1.0) * (l - 1.0) - m * m)
                             / ((2.0 * l - 3.0) * (l * l - m * m)))

    for q in range(nq):
        x = cos(th[q])
        s = sin(th[q])
        pmm = INV_SQRT_4PI
        for m in range(mtop + 1):
            if m > 0:
                pmm = sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * pmm
                tc = SQRT2 * cos(m * az[q])
                ts = SQRT2 * sin(m * az[q])
            p2 = 0.0
            p1 = pmm
            for l in range(m, lmax + 1):
                if l == m:
                    p = pmm
                elif l == m + 1:
                    p = sqrt(2.0 * m + 3.0) * x * pmm
                else:
                    p = ca[l, m] * x * p1 + cb[l, m] * p2
                if l > m:
                    p2 = p1
                    p1 = p
                centre = off[l] + min(l, mmax)
                if m == 0:
                    out[q, centre] = p
                else:
                    out[q, centre + m] = p * tc
                    out[q, centre - m] = p * ts
    return out_arr


cpdef double hsh_norm(int n, int l):
    return exp(0.5 * ((2 * l + 1) * log(2.0) + log(n + 1.0)
                      + 2.0 * lgamma(l + 1.0) + lgamma(n - l + 1.0)
                      - log(M_PI) - lgamma(n + l + 2.0)))


def gegenbauer(int nu, double alpha, x):
    x_arr = np.asarray(x, dtype=np.float64)
    flat = np.ascontiguousarray(x_arr).reshape(-1)
    cdef double[:] xv = flat
    res = np.empty(flat.shape[0])
    cdef double[:] rv = res
    cdef Py_ssize_t i
    cdef int k
    cdef double c, c_prev, c_next, xi
    for i in range(xv.shape[0]):
        xi = xv[i]
        c_prev = 1.0
        if nu == 0:
            rv[i] = 1.0
            continue
        c = 2.0 * alpha * xi
        for k in range(2, nu + 1):
            c_next = (2.0 * xi * (k + alpha - 1.0) * c - (k + 2.0 * alpha - 2.0) * c_prev) / k
            c_prev = c
            c = c_next
        rv[i] = c
    return res.reshape(x_arr.shape)


def hsh_radial_table(psi, int nmax):
    cdef double[:] pv = np.ascontiguousarray(psi, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t q, npts = pv.shape[0]
    out_arr = np.empty((npts, (nmax + 1) * (nmax + 2) // 2))
    cdef double[:, :] out = out_arr
    norm_arr = np.empty((nmax + 1, nmax + 1))
    cdef double[:, :] norm = norm_arr
    cdef int n, l, nu
    for n in range(nmax + 1):
        for l in range(n + 1):
            norm[n, l] = hsh_norm(n, l)
    cdef double x, s, s_pow, alpha, c, c_prev, c_next
    for q in range(npts):
        x = cos(pv[q])
        s = sin(pv[q])
        s_pow = 1.0
        for l in range(nmax + 1):
            if l > 0:
                s_pow = s_pow * s
            alpha = l + 1.0
            c_prev = 0.0
            c = 1.0
            for nu in range(nmax - l + 1):
                if nu == 1:
                    c_prev = c
                    c = 2.0 * alpha * x
                elif nu > 1:
                    c_next = (2.0 * x * (nu + alpha - 1.0) * c
                              - (nu + 2.0 * alpha - 2.0) * c_prev) / nu
                    c_prev = c
                    c = c_next
                n = l + nu
                out[q, n * (n + 1) // 2 + l] = norm[n, l] * s_pow * c
    return out_arr
