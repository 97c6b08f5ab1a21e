# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same contracts as ``_fallback``."""
import numpy as np

from libc.stdlib cimport malloc, free
from libc.string cimport memset

ctypedef long long i64


cdef inline i64 _pmod(i64 v, i64 mod) noexcept nogil:
    v = v % mod
    if v < 0:
        v += mod
    return v


cdef void _fold(i64* acc, i64 P, i64 p, i64 mod, i64* out) noexcept nogil:
    # acc has length P; writes phi reduced coefficients into out
    cdef i64 s, phi, t, r, i, v
    if P == 1:
        out[0] = _pmod(acc[0], mod)
        return
    s = P // p
    phi = P - s
    for t in range(phi, P):
        v = _pmod(acc[t], mod)
        if v:
            r = t - phi
            for i in range(p - 1):
                acc[r + i * s] -= v
    for t in range(phi):
        out[t] = _pmod(acc[t], mod)


def dft_axis(src, expo, i64 P, i64 p, i64 mod):
    cdef const i64[:, :, ::1] s = np.ascontiguousarray(src, dtype=np.int64)
    cdef const i64[:, ::1] e = np.ascontiguousarray(expo, dtype=np.int64)
    cdef Py_ssize_t batch = s.shape[0], n_in = s.shape[1], phi = s.shape[2]
    cdef Py_ssize_t n_out = e.shape[0]
    out_arr = np.empty((batch, n_out, phi), dtype=np.int64)
    cdef i64[:, :, ::1] out = out_arr
    cdef i64* acc = <i64*> malloc(P * sizeof(i64))
    if acc == NULL:
        raise MemoryError()
    cdef Py_ssize_t b, o, a, j, lim
    cdef i64 ex
    cdef const i64* row
    try:
        with nogil:
            for b in range(batch):
                for o in range(n_out):
                    memset(acc, 0, P * sizeof(i64))
                    for a in range(n_in):
                        ex = e[o, a]
                        row = &s[b, a, 0]
                        lim = P - ex
                        if lim > phi:
                            lim = phi
                        for j in range(lim):
                            acc[j + ex] += row[j]
                        for j in range(lim, phi):
                            acc[j + ex - P] += row[j]
                    _fold(acc, P, p, mod, &out[b, o, 0])
    finally:
        free(acc)
    return out_arr


def lambda_mul(a, b, i64 P, i64 p, i64 mod):
    cdef const i64[:, ::1] x = np.ascontiguousarray(a, dtype=np.int64)
    cdef const i64[:, ::1] y = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t n = x.shape[0], phi = x.shape[1]
    out_arr = np.empty((n, phi), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef i64* acc = <i64*> malloc(P * sizeof(i64))
    if acc == NULL:
        raise MemoryError()
    # each slot receives at most phi reduced products, far below 2^63
    cdef Py_ssize_t r, i, j, t
    cdef i64 xi
    try:
        with nogil:
            for r in range(n):
                memset(acc, 0, P * sizeof(i64))
                for i in range(phi):
                    xi = x[r, i]
                    if xi == 0:
                        continue
                    for j in range(phi):
                        t = i + j
                        if t >= P:
                            t -= P
                        acc[t] += (xi * y[r, j]) % mod
                _fold(acc, P, p, mod, &out[r, 0])
    finally:
        free(acc)
    return out_arr


def group_convolve(f, g, axis_sub, int d, i64 P, i64 p, i64 mod):
    cdef const i64[:, ::1] F = np.ascontiguousarray(f, dtype=np.int64)
    cdef const i64[:, ::1] G = np.ascontiguousarray(g, dtype=np.int64)
    cdef const i64[:, ::1] S = np.ascontiguousarray(axis_sub, dtype=np.int64)
    cdef Py_ssize_t n = F.shape[0], phi = F.shape[1], Q = S.shape[0]
    out_arr = np.empty((n, phi), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef i64* acc = <i64*> malloc(P * sizeof(i64))
    if acc == NULL:
        raise MemoryError()
    cdef Py_ssize_t x, y, i, j, t, ax, gi, xr, yr, stride
    cdef i64 fy
    try:
        with nogil:
            for x in range(n):
                memset(acc, 0, P * sizeof(i64))
                for y in range(n):
                    # flat index of x - y, axis by axis from the last one
                    gi = 0
                    xr = x
                    yr = y
                    stride = 1
                    for ax in range(d):
                        gi += S[xr % Q, yr % Q] * stride
                        xr //= Q
                        yr //= Q
                        stride *= Q
                    for i in range(phi):
                        fy = F[y, i]
                        if fy == 0:
                            continue
                        for j in range(phi):
                            t = i + j
                            if t >= P:
                                t -= P
                            acc[t] += (fy * G[gi, j]) % mod
                    if (y & 1023) == 1023:
                        for t in range(P):
                            acc[t] %= mod
                _fold(acc, P, p, mod, &out[x, 0])
    finally:
        free(acc)
    return out_arr
