# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; signatures match ``_pykernels``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def prefix_slack(a, b, double tol):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0], i
    cdef Py_ssize_t first = -1
    cdef double sa = 0.0, sb = 0.0, diff, worst = 0.0
    if n == 0:
        return 0.0, -1
    for i in range(n):
        sa += av[i]
        sb += bv[i]
        diff = sa - sb
        if i == 0 or diff < worst:
            worst = diff
        if first < 0 and diff < -tol:
            first = i
    return worst, first


def hlp_transfer(lam, mu, double eps):
    cdef cnp.ndarray[double, ndim=1] xa = np.array(lam, dtype=np.float64)
    cdef double[::1] x = xa
    cdef const double[::1] y = np.ascontiguousarray(mu, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[double, ndim=2] Ba = np.eye(n)
    cdef double[:, ::1] B = Ba
    cdef Py_ssize_t it, i, j, k, c
    cdef int steps = 0
    cdef double delta, gap, t, xj, xk, bj, bk
    for it in range(2 * n):
        j = -1
        for i in range(n - 1, -1, -1):
            if x[i] - y[i] > eps:
                j = i
                break
        if j < 0:
            break
        k = -1
        for i in range(j + 1, n):
            if y[i] - x[i] > eps:
                k = i
                break
        if k < 0:
            break
        delta = min(x[j] - y[j], y[k] - x[k])
        gap = x[j] - x[k]
        t = 1.0 - delta / gap
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        xj = x[j]
        xk = x[k]
        x[j] = t * xj + (1.0 - t) * xk
        x[k] = (1.0 - t) * xj + t * xk
        for c in range(n):
            bj = B[j, c]
            bk = B[k, c]
            B[j, c] = t * bj + (1.0 - t) * bk
            B[k, c] = (1.0 - t) * bj + t * bk
        steps += 1
    return Ba, steps


cdef bint _augment(Py_ssize_t row, const double[:, ::1] mat, double tol,
                   Py_ssize_t[::1] match_col, char[::1] seen) noexcept:
    cdef Py_ssize_t n = mat.shape[0], col
    for col in range(n):
        if mat[row, col] <= tol or seen[col]:
            continue
        seen[col] = 1
        if match_col[col] < 0 or _augment(match_col[col], mat, tol, match_col, seen):
            match_col[col] = row
            return True
    return False


cdef bint _matching(const double[:, ::1] mat, double tol, Py_ssize_t[::1] perm,
                    Py_ssize_t[::1] match_col, char[::1] seen) noexcept:
    cdef Py_ssize_t n = mat.shape[0], row, col
    for col in range(n):
        match_col[col] = -1
    for row in range(n):
        for col in range(n):
            seen[col] = 0
        if not _augment(row, mat, tol, match_col, seen):
            return False
    for col in range(n):
        perm[match_col[col]] = col
    return True


def perfect_matching(mat, double tol):
    cdef const double[:, ::1] m = np.ascontiguousarray(mat, dtype=np.float64)
    cdef Py_ssize_t n = m.shape[0]
    perm = np.empty(n, dtype=np.intp)
    if not _matching(m, tol, perm, np.empty(n, dtype=np.intp), np.empty(n, dtype=np.int8)):
        return None
    return perm


def birkhoff_greedy(mat, double tol):
    cdef cnp.ndarray[double, ndim=2] Da = np.array(mat, dtype=np.float64, order="C")
    cdef double[:, ::1] D = Da
    cdef Py_ssize_t n = D.shape[0], i, c
    cdef Py_ssize_t[::1] perm
    cdef Py_ssize_t[::1] match_col = np.empty(n, dtype=np.intp)
    cdef char[::1] seen = np.empty(n, dtype=np.int8)
    cdef double w, top
    weights, perms = [], []
    for i in range(n):
        for c in range(n):
            if D[i, c] <= tol:
                D[i, c] = 0.0
    while True:
        top = 0.0
        for i in range(n):
            for c in range(n):
                if D[i, c] > top:
                    top = D[i, c]
        if top <= tol:
            break
        p = np.empty(n, dtype=np.intp)
        perm = p
        if not _matching(D, tol, perm, match_col, seen):
            break
        w = D[0, perm[0]]
        for i in range(1, n):
            if D[i, perm[i]] < w:
                w = D[i, perm[i]]
        for i in range(n):
            D[i, perm[i]] -= w
            if D[i, perm[i]] <= tol:
                D[i, perm[i]] = 0.0
        weights.append(w)
        perms.append(p)
    return weights, perms


def partial_trace_keep(rho, Py_ssize_t left, Py_ssize_t d, Py_ssize_t right):
    cdef const double complex[:, ::1] r = np.ascontiguousarray(rho, dtype=np.complex128)
    out = np.zeros((d, d), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef Py_ssize_t a, b, l, q, ra, rb
    cdef double complex acc
    for a in range(d):
        for b in range(d):
            acc = 0
            for l in range(left):
                ra = (l * d + a) * right
                rb = (l * d + b) * right
                for q in range(right):
                    acc = acc + r[ra + q, rb + q]
            o[a, b] = acc
    return out
