"""Pure-Python kernels; reference implementation and fallback for _ckernels."""
from itertools import combinations


def int_rank(rows):
    """Rank of an integer matrix (list of lists) by Bareiss elimination."""
    rows = [list(r) for r in rows]
    m = len(rows)
    if m == 0:
        return 0
    ncols = len(rows[0])
    prev = 1
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = -1
        for i in range(r, m):
            if rows[i][c]:
                p = i
                break
        if p < 0:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        pr = rows[r]
        for i in range(r + 1, m):
            a = rows[i][c]
            ri = rows[i]
            for j in range(c + 1, ncols):
                ri[j] = (piv * ri[j] - a * pr[j]) // prev
            ri[c] = 0
        prev = piv
        r += 1
    return r


def point_check(signs, bounds, xnum, den):
    """Check sum_q signs[i][q] * xnum[q] <= bounds[i] * den for all i.

    Returns (index of the first violated row or -1, number of tight rows).
    ``den`` must be positive.
    """
    first = -1
    tight = 0
    n = len(xnum)
    for i in range(len(bounds)):
        row = signs[i]
        s = 0
        for q in range(n):
            e = row[q]
            if e:
                s += e * xnum[q]
        rhs = bounds[i] * den
        if s > rhs:
            if first < 0:
                first = i
        elif s == rhs:
            tight += 1
    return first, tight


def _det(mat):
    a = [list(r) for r in mat]
    n = len(a)
    sign = 1
    prev = 1
    for c in range(n):
        p = -1
        for i in range(c, n):
            if a[i][c]:
                p = i
                break
        if p < 0:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (a[c][c] * a[i][j] - a[i][c] * a[c][j]) // prev
        prev = a[c][c]
    return sign * a[n - 1][n - 1]


def vertex_candidates(normals, bounds):
    """Feasible basic solutions of {x : normals x <= bounds}.

    Every n-subset of constraints with nonzero determinant is solved by
    Cramer's rule; the solution is kept if it satisfies all constraints.
    Returns a list of (numerators, det) with det > 0; duplicates included.
    """
    m = len(normals)
    if m == 0:
        return []
    n = len(normals[0])
    out = []
    for sub in combinations(range(m), n):
        mat = [normals[i] for i in sub]
        d = _det(mat)
        if d == 0:
            continue
        nums = []
        for c in range(n):
            mc = [list(r) for r in mat]
            for k, i in enumerate(sub):
                mc[k][c] = bounds[i]
            nums.append(_det(mc))
        if d < 0:
            d = -d
            nums = [-v for v in nums]
        ok = True
        for i in range(m):
            s = 0
            row = normals[i]
            for q in range(n):
                s += row[q] * nums[q]
            if s > bounds[i] * d:
                ok = False
                break
        if ok:
            out.append((tuple(nums), d))
    return out
