# cython: language_level=3
"""Compiled kernels; same contracts and notation as ``_pykernels``."""

import numpy as np

from libc.math cimport exp, log
from libc.stdlib cimport free, malloc


cdef inline double _ipow(double x, long e) noexcept nogil:
    cdef double r = 1.0
    while e > 0:
        if e & 1:
            r *= x
        x *= x
        e >>= 1
    return r


cdef inline double _kroot(const double* x, Py_ssize_t m, long k) noexcept nogil:
    cdef Py_ssize_t l
    cdef double mx = 0.0, s = 0.0
    for l in range(m):
        if x[l] > mx:
            mx = x[l]
    if mx <= 0.0:
        return 0.0
    for l in range(m):
        s += _ipow(x[l] / mx, k)
    return mx * exp(log(s) / k)


cdef inline void _fill(const double complex* z, const double complex* v, Py_ssize_t m,
                       double* a, double* x) noexcept nogil:
    cdef Py_ssize_t l
    cdef double r2
    for l in range(m):
        r2 = z[l].real * z[l].real + z[l].imag * z[l].imag
        a[l] = 1.0 / ((1.0 - r2) * (1.0 - r2))
        x[l] = a[l] * (v[l].real * v[l].real + v[l].imag * v[l].imag)


cdef double* _scratch(Py_ssize_t size) except NULL:
    cdef double* buf = <double*> malloc(max(size, 1) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    return buf


def f2(const double complex[:, ::1] z, const double complex[:, ::1] v,
       const double[::1] t, const long[::1] k):
    cdef Py_ssize_t N = z.shape[0], m = z.shape[1], n, l
    out_arr = np.empty(N, dtype=np.float64)
    if N == 0:
        return out_arr
    cdef double[::1] out = out_arr
    cdef double* buf = _scratch(2 * m)
    cdef double* a = buf
    cdef double* x = buf + m
    cdef double q, rho
    try:
        with nogil:
            for n in range(N):
                _fill(&z[n, 0], &v[n, 0], m, a, x)
                q = 0.0
                for l in range(m):
                    q += x[l]
                rho = _kroot(x, m, k[n]) if t[n] != 0.0 else 0.0
                out[n] = (q + t[n] * rho) / (1.0 + t[n])
    finally:
        free(buf)
    return out_arr


def grad_vbar(const double complex[:, ::1] z, const double complex[:, ::1] v,
              const double[::1] t, const long[::1] k):
    cdef Py_ssize_t N = z.shape[0], m = z.shape[1], n, l
    out_arr = np.empty((N, m), dtype=np.complex128)
    if N == 0:
        return out_arr
    cdef double complex[:, ::1] out = out_arr
    cdef double* buf = _scratch(2 * m)
    cdef double* a = buf
    cdef double* x = buf + m
    cdef double rho, c
    try:
        with nogil:
            for n in range(N):
                _fill(&z[n, 0], &v[n, 0], m, a, x)
                rho = _kroot(x, m, k[n])
                c = 1.0 / (1.0 + t[n])
                for l in range(m):
                    out[n, l] = v[n, l] * (a[l] * (1.0 + t[n] * _ipow(x[l] / rho, k[n] - 1)) * c)
    finally:
        free(buf)
    return out_arr


def levi(const double complex[:, ::1] z, const double complex[:, ::1] v,
         const double[::1] t, const long[::1] k):
    cdef Py_ssize_t N = z.shape[0], m = z.shape[1], n, i, j
    out_arr = np.empty((N, m, m), dtype=np.complex128)
    if N == 0:
        return out_arr
    cdef double complex[:, :, ::1] out = out_arr
    cdef double* buf = _scratch(5 * m)
    cdef double* a = buf
    cdef double* x = buf + m
    cdef double* yk1 = buf + 2 * m
    cdef double* pr = buf + 3 * m
    cdef double* pi = buf + 4 * m
    cdef double rho, c, coef, s
    try:
        with nogil:
            for n in range(N):
                _fill(&z[n, 0], &v[n, 0], m, a, x)
                rho = _kroot(x, m, k[n])
                c = 1.0 / (1.0 + t[n])
                coef = t[n] * (k[n] - 1) / rho * c
                for i in range(m):
                    yk1[i] = _ipow(x[i] / rho, k[n] - 1)
                    s = yk1[i] * a[i]
                    pr[i] = s * v[n, i].real
                    pi[i] = s * v[n, i].imag
                for i in range(m):
                    for j in range(m):
                        # conj(p_i) p_j
                        out[n, i, j] = -coef * ((pr[i] * pr[j] + pi[i] * pi[j]) + 1j * (pr[i] * pi[j] - pi[i] * pr[j]))
                    out[n, i, i] = out[n, i, i] + a[i] * (1.0 + t[n] * k[n] * yk1[i]) * c
    finally:
        free(buf)
    return out_arr


def hess_vbar(const double complex[:, ::1] z, const double complex[:, ::1] v,
              const double[::1] t, const long[::1] k):
    cdef Py_ssize_t N = z.shape[0], m = z.shape[1], n, i, j
    out_arr = np.empty((N, m, m), dtype=np.complex128)
    if N == 0:
        return out_arr
    cdef double complex[:, :, ::1] out = out_arr
    cdef double* buf = _scratch(4 * m)
    cdef double* a = buf
    cdef double* x = buf + m
    cdef double* pr = buf + 2 * m
    cdef double* pi = buf + 3 * m
    cdef double rho, c, y, s, wr, wi
    try:
        with nogil:
            for n in range(N):
                _fill(&z[n, 0], &v[n, 0], m, a, x)
                rho = _kroot(x, m, k[n])
                c = t[n] * (k[n] - 1) / rho / (1.0 + t[n])
                for i in range(m):
                    s = _ipow(x[i] / rho, k[n] - 1) * a[i]
                    pr[i] = s * v[n, i].real
                    pi[i] = s * v[n, i].imag
                for i in range(m):
                    for j in range(m):
                        out[n, i, j] = -c * ((pr[i] * pr[j] - pi[i] * pi[j]) + 1j * (pr[i] * pi[j] + pi[i] * pr[j]))
                    y = x[i] / rho
                    wr = a[i] * v[n, i].real
                    wi = a[i] * v[n, i].imag
                    s = c * _ipow(y, k[n] - 2)
                    out[n, i, i] = out[n, i, i] + s * ((wr * wr - wi * wi) + 2j * wr * wi)
    finally:
        free(buf)
    return out_arr


def mixed(const double complex[:, ::1] z, const double complex[:, ::1] v,
          const double[::1] t, const long[::1] k):
    cdef Py_ssize_t N = z.shape[0], m = z.shape[1], n, s, l
    out_arr = np.empty((N, m, m), dtype=np.complex128)
    if N == 0:
        return out_arr
    cdef double complex[:, :, ::1] out = out_arr
    cdef double* buf = _scratch(3 * m)
    cdef double* a = buf
    cdef double* x = buf + m
    cdef double* yk1 = buf + 2 * m
    cdef double complex* cbuf = <double complex*> malloc(max(3 * m, 1) * sizeof(double complex))
    if cbuf == NULL:
        free(buf)
        raise MemoryError()
    cdef double complex* ps = cbuf
    cdef double complex* ql = cbuf + m
    cdef double complex* gam = cbuf + 2 * m
    cdef double rho, c, r2, y, coef
    try:
        with nogil:
            for n in range(N):
                _fill(&z[n, 0], &v[n, 0], m, a, x)
                rho = _kroot(x, m, k[n])
                c = 1.0 / (1.0 + t[n])
                coef = t[n] * (k[n] - 1) * c
                for l in range(m):
                    r2 = z[n, l].real * z[n, l].real + z[n, l].imag * z[n, l].imag
                    gam[l] = z[n, l].conjugate() * (2.0 / (1.0 - r2))
                    y = x[l] / rho
                    yk1[l] = _ipow(y, k[n] - 1)
                    ps[l] = v[n, l] * (yk1[l] * a[l])
                    ql[l] = gam[l] * (yk1[l] * y)
                for s in range(m):
                    for l in range(m):
                        out[n, s, l] = -coef * ps[s] * ql[l]
                    out[n, s, s] = out[n, s, s] + gam[s] * v[n, s] * (a[s] * (1.0 + t[n] * k[n] * yk1[s]) * c)
    finally:
        free(buf)
        free(cbuf)
    return out_arr
