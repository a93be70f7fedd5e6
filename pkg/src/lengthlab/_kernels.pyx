# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scans over Gromov-product and distance matrices.

Every function takes a row range ``[i0, i1)`` so callers can split work
across threads; the GIL is released inside the loops.  Matrices are either
int64 (exact values scaled to a common denominator) or float64.
"""
from libc.math cimport fabs

ctypedef fused num_t:
    long long
    double


def delta_rows(num_t[:, ::1] C, Py_ssize_t i0, Py_ssize_t i1):
    """Max of ``min(C[i,j], C[j,k]) - C[i,k]`` over i in [i0, i1).

    Returns ``(best, i, j, k)`` for the lexicographically first maximiser,
    or ``(None, -1, -1, -1)`` for an empty range.
    """
    cdef Py_ssize_t n = C.shape[0]
    cdef Py_ssize_t i, j, k, bi = -1, bj = -1, bk = -1
    cdef num_t best = 0, v, cij, cjk
    cdef bint found = False
    with nogil:
        for i in range(i0, i1):
            for j in range(n):
                cij = C[i, j]
                for k in range(n):
                    cjk = C[j, k]
                    v = (cij if cij < cjk else cjk) - C[i, k]
                    if not found or v > best:
                        best = v
                        bi = i
                        bj = j
                        bk = k
                        found = True
    if not found:
        return None, -1, -1, -1
    return best, bi, bj, bk


def triangle_rows(num_t[:, ::1] D, Py_ssize_t i0, Py_ssize_t i1, double tol):
    """First ``(i, j, k)`` with ``D[i,k] > D[i,j] + D[j,k] + tol``."""
    cdef Py_ssize_t n = D.shape[0]
    cdef Py_ssize_t i, j, k, ri = -1, rj = -1, rk = -1
    cdef double excess
    with nogil:
        for i in range(i0, i1):
            for j in range(n):
                for k in range(n):
                    excess = <double>(D[i, k] - D[i, j] - D[j, k])
                    if excess > tol:
                        ri = i
                        rj = j
                        rk = k
                        break
                if ri >= 0:
                    break
            if ri >= 0:
                break
    if ri < 0:
        return None
    return ri, rj, rk


cdef inline bint _fp_bad(num_t s1, num_t s2, num_t s3, double tol) nogil:
    # the two largest of the three pair sums must coincide
    cdef num_t hi, mid
    if s1 >= s2:
        if s2 >= s3:
            hi = s1
            mid = s2
        elif s1 >= s3:
            hi = s1
            mid = s3
        else:
            hi = s3
            mid = s1
    else:
        if s1 >= s3:
            hi = s2
            mid = s1
        elif s2 >= s3:
            hi = s2
            mid = s3
        else:
            hi = s3
            mid = s2
    return <double>(hi - mid) > tol


def four_point_rows(num_t[:, ::1] D, Py_ssize_t i0, Py_ssize_t i1, double tol):
    """First quadruple ``i < j < k < l`` (i in [i0, i1)) violating the four-point condition."""
    cdef Py_ssize_t n = D.shape[0]
    cdef Py_ssize_t i, j, k, l, ri = -1, rj = -1, rk = -1, rl = -1
    with nogil:
        for i in range(i0, i1):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    for l in range(k + 1, n):
                        if _fp_bad(D[i, j] + D[k, l], D[i, k] + D[j, l], D[i, l] + D[j, k], tol):
                            ri = i
                            rj = j
                            rk = k
                            rl = l
                            break
                    if ri >= 0:
                        break
                if ri >= 0:
                    break
            if ri >= 0:
                break
    if ri < 0:
        return None
    return ri, rj, rk, rl


def four_point_quads(num_t[:, ::1] D, long long[:, ::1] Q, double tol):
    """Index of the first row ``(i, j, k, l)`` of ``Q`` that violates the condition, or -1."""
    cdef Py_ssize_t m = Q.shape[0], r, found = -1
    cdef long long i, j, k, l
    with nogil:
        for r in range(m):
            i = Q[r, 0]
            j = Q[r, 1]
            k = Q[r, 2]
            l = Q[r, 3]
            if _fp_bad(D[i, j] + D[k, l], D[i, k] + D[j, l], D[i, l] + D[j, k], tol):
                found = r
                break
    return found
