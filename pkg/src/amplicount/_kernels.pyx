# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled amplification kernels; same contracts as ``_kernels_py``."""

cimport cython


cdef inline void _q_step(double complex[::1] v, const double complex[::1] psi,
                         const unsigned char[::1] mask, double complex c,
                         double complex varphi) noexcept nogil:
    cdef Py_ssize_t i, n = v.shape[0]
    cdef double complex overlap = 0
    for i in range(n):
        if mask[i]:
            v[i] = v[i] * varphi
        overlap = overlap + psi[i].conjugate() * v[i]
    overlap = overlap * c
    for i in range(n):
        v[i] = overlap * psi[i] - v[i]


def q_iterate(double complex[::1] v, const double complex[::1] psi,
              const unsigned char[::1] mask, double complex phi,
              double complex varphi, Py_ssize_t m):
    if v.shape[0] != psi.shape[0] or v.shape[0] != mask.shape[0]:
        raise ValueError("kernel operand lengths differ")
    cdef double complex c = 1.0 - phi
    cdef Py_ssize_t j
    with nogil:
        for j in range(m):
            _q_step(v, psi, mask, c, varphi)
    return v.base if v.base is not None else v


def power_rows(double complex[:, ::1] out, const double complex[::1] psi,
               const unsigned char[::1] mask, double complex phi,
               double complex varphi):
    if out.shape[1] != psi.shape[0] or out.shape[1] != mask.shape[0]:
        raise ValueError("kernel operand lengths differ")
    cdef double complex c = 1.0 - phi
    cdef Py_ssize_t j, i, n = out.shape[1]
    with nogil:
        for j in range(1, out.shape[0]):
            for i in range(n):
                out[j, i] = out[j - 1, i]
            _q_step(out[j], psi, mask, c, varphi)
    return out.base if out.base is not None else out
