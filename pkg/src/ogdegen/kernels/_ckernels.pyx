# cython: boundscheck=False, wraparound=False
"""Compiled kernels: Bareiss rank, polytope point check, vertex candidates.

Same signatures and results as ogdegen.kernels._pykernels.
"""
from libc.stdlib cimport malloc, free


def int_rank(rows):
    cdef Py_ssize_t m = len(rows)
    if m == 0:
        return 0
    cdef Py_ssize_t ncols = len(rows[0])
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef list mat = [list(x) for x in rows]
    cdef list pr, ri
    cdef object prev = 1, piv, a
    for c in range(ncols):
        if r == m:
            break
        p = -1
        for i in range(r, m):
            if (<list>mat[i])[c]:
                p = i
                break
        if p < 0:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        pr = <list>mat[r]
        piv = pr[c]
        for i in range(r + 1, m):
            ri = <list>mat[i]
            a = ri[c]
            if a:
                for j in range(c + 1, ncols):
                    ri[j] = (piv * ri[j] - a * pr[j]) // prev
            elif piv != prev:
                for j in range(c + 1, ncols):
                    ri[j] = (piv * ri[j]) // prev
            ri[c] = 0
        prev = piv
        r += 1
    return r


def point_check(const long long[:, :] signs, const long long[:] bounds,
                const long long[:] xnum, long long den):
    cdef Py_ssize_t m = bounds.shape[0], n = xnum.shape[0], i, q
    cdef long long s, rhs
    cdef Py_ssize_t first = -1, tight = 0
    for i in range(m):
        s = 0
        for q in range(n):
            s += signs[i, q] * xnum[q]
        rhs = bounds[i] * den
        if s > rhs:
            if first < 0:
                first = i
        elif s == rhs:
            tight += 1
    return first, tight


cdef long long _det(long long* a, int n) nogil:
    # fraction-free elimination in place on an n x n row-major buffer
    cdef int c, i, j, p
    cdef long long sign = 1, prev = 1, tmp
    for c in range(n):
        p = -1
        for i in range(c, n):
            if a[i * n + c] != 0:
                p = i
                break
        if p < 0:
            return 0
        if p != c:
            for j in range(n):
                tmp = a[c * n + j]
                a[c * n + j] = a[p * n + j]
                a[p * n + j] = tmp
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i * n + j] = (a[c * n + c] * a[i * n + j] - a[i * n + c] * a[c * n + j]) // prev
        prev = a[c * n + c]
    return sign * a[(n - 1) * n + (n - 1)]


def vertex_candidates(const long long[:, :] normals, const long long[:] bounds):
    cdef int m = normals.shape[0]
    if m == 0:
        return []
    cdef int n = normals.shape[1]
    if n > m:
        return []
    cdef int* idx = <int*>malloc(n * sizeof(int))
    cdef long long* buf = <long long*>malloc(n * n * sizeof(long long))
    cdef long long* nums = <long long*>malloc(n * sizeof(long long))
    cdef int k, c, q, i
    cdef long long d, s
    cdef bint ok
    out = []
    try:
        for k in range(n):
            idx[k] = k
        while True:
            for k in range(n):
                for q in range(n):
                    buf[k * n + q] = normals[idx[k], q]
            d = _det(buf, n)
            if d != 0:
                for c in range(n):
                    for k in range(n):
                        for q in range(n):
                            buf[k * n + q] = bounds[idx[k]] if q == c else normals[idx[k], q]
                    nums[c] = _det(buf, n)
                if d < 0:
                    d = -d
                    for c in range(n):
                        nums[c] = -nums[c]
                ok = True
                for i in range(m):
                    s = 0
                    for q in range(n):
                        s += normals[i, q] * nums[q]
                    if s > bounds[i] * d:
                        ok = False
                        break
                if ok:
                    out.append((tuple([nums[c] for c in range(n)]), d))
            # next combination in lexicographic order
            k = n - 1
            while k >= 0 and idx[k] == m - n + k:
                k -= 1
            if k < 0:
                break
            idx[k] += 1
            for q in range(k + 1, n):
                idx[q] = idx[q - 1] + 1
    finally:
        free(idx)
        free(buf)
        free(nums)
    return out
