# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykern``.

Same signatures, same conventions (right-limit slopes, principal logs).
Scalar loops beat the NumPy fallback mainly on the short arrays that
dominate adaptive quadrature (16-24 nodes per panel).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex clog(double complex)
    double complex cexp(double complex)
    double complex conj(double complex)


def pwl_values(u, knots_u, knots_a, double left_slope, double right_slope):
    cdef cnp.ndarray[double, ndim=1] uu = np.ascontiguousarray(
        np.atleast_1d(np.asarray(u, dtype=np.float64)).ravel())
    cdef cnp.ndarray[double, ndim=1] ku = np.ascontiguousarray(
        np.asarray(knots_u, dtype=np.float64))
    cdef cnp.ndarray[double, ndim=1] ka = np.ascontiguousarray(
        np.asarray(knots_a, dtype=np.float64))
    cdef cnp.ndarray[double, ndim=1] out = np.empty(uu.shape[0], dtype=np.float64)
    cdef Py_ssize_t i, j, n = ku.shape[0]
    cdef double x, t
    for i in range(uu.shape[0]):
        x = uu[i]
        if x < ku[0]:
            out[i] = ka[0] + left_slope * (x - ku[0])
        elif x >= ku[n - 1]:
            out[i] = ka[n - 1] + right_slope * (x - ku[n - 1])
        else:
            j = _bisect(ku, x, n)
            t = (x - ku[j]) / (ku[j + 1] - ku[j])
            out[i] = ka[j] * (1.0 - t) + ka[j + 1] * t
    return out.reshape(np.shape(np.asarray(u, dtype=np.float64)))


def pwl_slopes(u, knots_u, knots_a, double left_slope, double right_slope):
    cdef cnp.ndarray[double, ndim=1] uu = np.ascontiguousarray(
        np.atleast_1d(np.asarray(u, dtype=np.float64)).ravel())
    cdef cnp.ndarray[double, ndim=1] ku = np.ascontiguousarray(
        np.asarray(knots_u, dtype=np.float64))
    cdef cnp.ndarray[double, ndim=1] ka = np.ascontiguousarray(
        np.asarray(knots_a, dtype=np.float64))
    cdef cnp.ndarray[double, ndim=1] out = np.empty(uu.shape[0], dtype=np.float64)
    cdef Py_ssize_t i, j, n = ku.shape[0]
    cdef double x
    for i in range(uu.shape[0]):
        x = uu[i]
        if x < ku[0]:
            out[i] = left_slope
        elif x >= ku[n - 1]:
            out[i] = right_slope
        else:
            j = _bisect(ku, x, n)
            out[i] = (ka[j + 1] - ka[j]) / (ku[j + 1] - ku[j])
    return out.reshape(np.shape(np.asarray(u, dtype=np.float64)))


cdef inline Py_ssize_t _bisect(double[:] ku, double x, Py_ssize_t n) nogil:
    # rightmost j with ku[j] <= x, given ku[0] <= x < ku[n-1]
    cdef Py_ssize_t lo = 0, hi = n - 1, mid
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if ku[mid] <= x:
            lo = mid
        else:
            hi = mid
    return lo


def sc_log_deriv(z, prevertices, exponents):
    cdef cnp.ndarray[complex, ndim=1] zz = np.ascontiguousarray(
        np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel())
    cdef cnp.ndarray[double, ndim=1] x = np.ascontiguousarray(
        np.asarray(prevertices, dtype=np.float64))
    cdef cnp.ndarray[double, ndim=1] b = np.ascontiguousarray(
        np.asarray(exponents, dtype=np.float64))
    cdef cnp.ndarray[complex, ndim=1] out = np.zeros(zz.shape[0], dtype=np.complex128)
    cdef Py_ssize_t i, k, n = x.shape[0], m = zz.shape[0]
    cdef double complex acc, zi
    for i in range(m):
        zi = zz[i]
        acc = 0
        for k in range(n):
            acc = acc - b[k] * clog(zi - x[k])
        out[i] = acc
    return out.reshape(np.shape(np.asarray(z, dtype=np.complex128)))


def straddle_kernel(zeta, zeta0, z):
    cdef cnp.ndarray[complex, ndim=1] zs = np.ascontiguousarray(
        np.atleast_1d(np.asarray(zeta, dtype=np.complex128)).ravel())
    cdef cnp.ndarray[complex, ndim=1] out = np.empty(zs.shape[0], dtype=np.complex128)
    cdef double complex z0 = zeta0, w = z, d
    cdef double complex scale = w / (1j * np.pi)
    cdef Py_ssize_t i
    for i in range(zs.shape[0]):
        d = zs[i] - z0
        out[i] = scale / (d * d - w * w)
    return out.reshape(np.shape(np.asarray(zeta, dtype=np.complex128)))


def blaschke_half_plane(z, zeros, prefactors, int m_at_i):
    cdef cnp.ndarray[complex, ndim=1] zz = np.ascontiguousarray(
        np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel())
    cdef cnp.ndarray[complex, ndim=1] zn = np.ascontiguousarray(
        np.asarray(zeros, dtype=np.complex128))
    cdef cnp.ndarray[complex, ndim=1] cn = np.ascontiguousarray(
        np.asarray(prefactors, dtype=np.complex128))
    cdef cnp.ndarray[complex, ndim=1] out = np.empty(zz.shape[0], dtype=np.complex128)
    cdef Py_ssize_t i, k, n = zn.shape[0]
    cdef double complex acc, zi, mob
    cdef int j
    for i in range(zz.shape[0]):
        zi = zz[i]
        acc = 1
        if m_at_i:
            mob = (zi - 1j) / (zi + 1j)
            for j in range(m_at_i):
                acc = acc * mob
        for k in range(n):
            acc = acc * cn[k] * (zi - zn[k]) / (zi - conj(zn[k]))
        out[i] = acc
    return out.reshape(np.shape(np.asarray(z, dtype=np.complex128)))
