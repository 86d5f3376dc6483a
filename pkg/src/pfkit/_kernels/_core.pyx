# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernels: eigenvalue/phase evaluation and CSV row
formatting as tight C loops over batches.

Both mirror their ``_fallback`` counterparts operation for operation, so
the backends classify identically and emit identical bytes (glibc and
CPython agree on "%.17g" output).
"""

import numpy as np

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdio cimport snprintf
from libc.stdlib cimport free, malloc

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)


def sweep_eval(object h00o, object h01o, object h10o, object h11o, double tol):
    """Eigenvalues, coalescence data and phase class for a batch of matrices."""
    cdef double complex[::1] h00 = np.ascontiguousarray(h00o, dtype=np.complex128)
    cdef double complex[::1] h01 = np.ascontiguousarray(h01o, dtype=np.complex128)
    cdef double complex[::1] h10 = np.ascontiguousarray(h10o, dtype=np.complex128)
    cdef double complex[::1] h11 = np.ascontiguousarray(h11o, dtype=np.complex128)
    cdef Py_ssize_t n = h00.shape[0]

    e0_arr = np.empty(n, dtype=np.complex128)
    e1_arr = np.empty(n, dtype=np.complex128)
    disc_arr = np.empty(n, dtype=np.float64)
    gamma_arr = np.empty(n, dtype=np.float64)
    phase_arr = np.empty(n, dtype=np.int8)

    cdef double complex[::1] e0 = e0_arr
    cdef double complex[::1] e1 = e1_arr
    cdef double[::1] disc = disc_arr
    cdef double[::1] absg = gamma_arr
    cdef signed char[::1] phase = phase_arr

    cdef Py_ssize_t i
    cdef double complex tr, det, half, d, ea, eb, lo, hi
    cdef double gap, inf = float("inf")
    cdef bint is_ep, real0, real1, conj_pair

    with nogil:
        for i in range(n):
            tr = h00[i] + h11[i]
            det = h00[i] * h11[i] - h01[i] * h10[i]
            half = 0.5 * tr
            d = csqrt(half * half - det)
            ea = half - d
            eb = half + d
            if creal(eb) < creal(ea) or (creal(eb) == creal(ea)
                                         and cimag(eb) < cimag(ea)):
                lo = eb; hi = ea
            else:
                lo = ea; hi = eb
            e0[i] = lo
            e1[i] = hi
            gap = cabs(hi - lo)
            disc[i] = gap * gap
            is_ep = gap < tol * (1.0 + cabs(tr))
            if is_ep:
                absg[i] = inf
            elif gap == 0.0:
                absg[i] = inf
            else:
                absg[i] = cabs(h01[i]) / gap
            real0 = fabs_(cimag(lo)) <= tol * (1.0 + fabs_(creal(lo)))
            real1 = fabs_(cimag(hi)) <= tol * (1.0 + fabs_(creal(hi)))
            conj_pair = cabs(hi - conj(lo)) <= tol * (1.0 + cabs(lo) + cabs(hi))
            if is_ep:
                phase[i] = 2
            elif real0 and real1:
                phase[i] = 0
            elif conj_pair:
                phase[i] = 1
            else:
                phase[i] = 3

    return e0_arr, e1_arr, disc_arr, gamma_arr, phase_arr


cdef inline double fabs_(double x) nogil:
    return -x if x < 0.0 else x


#: generous per-row bound: nine 24-char doubles, the longest labels, commas
DEF ROW_CAP = 340


def format_rows(double[::1] p1, p2o, double[::1] e0r, double[::1] e0i,
                double[::1] e1r, double[::1] e1i, double[::1] absg,
                double[::1] disc, double[::1] margin,
                signed char[::1] phase, unsigned char[::1] pf):
    """CSV body rows (no header) as one str; p2o may be None for 1D grids."""
    cdef bint has_p2 = p2o is not None
    cdef double[::1] p2 = p2o if has_p2 else p1
    cdef Py_ssize_t n = p1.shape[0]
    cdef const char* labels[4]
    labels[0] = "unbroken"
    labels[1] = "broken"
    labels[2] = "ep"
    labels[3] = "unclassifiable"
    cdef const char* bools[2]
    bools[0] = "false"
    bools[1] = "true"

    cdef size_t cap = <size_t> n * ROW_CAP + 64
    cdef char* buf = <char*> malloc(cap)
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t off = 0, i
    try:
        with nogil:
            if has_p2:
                for i in range(n):
                    off += snprintf(
                        buf + off, ROW_CAP,
                        "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%s\n",
                        p1[i], p2[i], e0r[i], e0i[i], e1r[i], e1i[i],
                        absg[i], disc[i], margin[i],
                        labels[phase[i]], bools[1 if pf[i] else 0])
            else:
                for i in range(n):
                    off += snprintf(
                        buf + off, ROW_CAP,
                        "%.17g,,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%s\n",
                        p1[i], e0r[i], e0i[i], e1r[i], e1i[i],
                        absg[i], disc[i], margin[i],
                        labels[phase[i]], bools[1 if pf[i] else 0])
        return PyBytes_FromStringAndSize(buf, off).decode("ascii")
    finally:
        free(buf)
