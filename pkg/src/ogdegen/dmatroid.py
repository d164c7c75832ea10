"""Delta-matroids of isotropic subspaces and their base polytopes.

An admissible set S is a sign vector: +1 at q means column q, -1 means
column q-bar, 0 means neither.  Ranks are ranks of column submatrices of any
basis matrix of the subspace.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import exactnum as en
from . import kernels
from .chart import ChartMatrix, col_index
from .combin import T_from_signs, enumerate_admissible, signs_from_T, signs_to_str
from .errors import DimensionTooLarge


def _rows(A):
    if isinstance(A, ChartMatrix):
        return A.entries
    return en._entries(A)


class RankOracle:
    """Column-submatrix ranks of one matrix, on an integer lift, memoized."""

    def __init__(self, A):
        rows = _rows(A)
        self.n = len(rows)
        self.width = len(rows[0])
        if self.width != 2 * self.n + 1:
            raise ValueError("expected an n x (2n+1) matrix")
        self.lifted = [en._lift_row_int([Fraction(v) for v in r]) for r in rows]
        self._cache = {}

    def columns(self, signs) -> list:
        n = self.n
        return [col_index(n, q if e > 0 else -q) for q, e in enumerate(signs, start=1) if e]

    def rank(self, signs) -> int:
        key = tuple(signs)
        r = self._cache.get(key)
        if r is None:
            cols = self.columns(key)
            r = kernels.int_rank([[row[c] for c in cols] for row in self.lifted]) if cols else 0
            self._cache[key] = r
        return r

    def g(self, signs) -> int:
        return self.rank(signs) - sum(1 for e in signs if e < 0)


def rank_of(A, S) -> int:
    return RankOracle(A).rank(S)


def g_of(A, S) -> int:
    return RankOracle(A).g(S)


def x_of(S, x):
    return sum((e * v for e, v in zip(S, x) if e), Fraction(0))


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeltaMatroid:
    n: int
    feasible: frozenset   # of T-tuples: q in T <=> q in S', else q-bar in S'

    def sign_vectors(self) -> list:
        return [signs_from_T(self.n, T) for T in sorted(self.feasible)]

    def to_json(self):
        return [list(T) for T in sorted(self.feasible, key=lambda T: (len(T), T))]


def feasible_sets(A) -> DeltaMatroid:
    R = A if isinstance(A, RankOracle) else RankOracle(A)
    n = R.n
    feas = frozenset(T_from_signs(S) for S in enumerate_admissible(n, maximal_only=True)
                     if R.rank(S) == n)
    return DeltaMatroid(n, feas)


def rank_via_matroid(D: DeltaMatroid, S) -> int:
    best = 0
    for Sp in D.sign_vectors():
        m = sum(1 for a, b in zip(S, Sp) if a and a == b)
        best = max(best, m)
    return best


# ---------------------------------------------------------------------------
# polytopes

@dataclass(frozen=True)
class PolytopeH:
    n: int
    constraints: tuple   # ((signs, g), ...) over nonempty admissible S

    @property
    def arrays(self):
        return _arrays(self.constraints)

    def to_json(self):
        return [{"signs": signs_to_str(s), "g": g} for s, g in self.constraints]


@lru_cache(maxsize=64)
def _arrays(constraints):
    signs = np.array([s for s, _ in constraints], dtype=np.int64)
    bounds = np.array([g for _, g in constraints], dtype=np.int64)
    return signs, bounds


@dataclass(frozen=True)
class PolytopeV:
    n: int
    vertices: tuple   # sorted 0/1 tuples

    def to_json(self):
        return [list(v) for v in self.vertices]


def polytope_H(A) -> PolytopeH:
    R = A if isinstance(A, RankOracle) else RankOracle(A)
    cons = tuple((S, R.g(S)) for S in enumerate_admissible(R.n) if any(S))
    return PolytopeH(R.n, cons)


def chi(n: int, T) -> tuple:
    return tuple(1 if q in T else 0 for q in range(1, n + 1))


def polytope_V(A) -> PolytopeV:
    D = A if isinstance(A, DeltaMatroid) else feasible_sets(A)
    return PolytopeV(D.n, tuple(sorted(chi(D.n, T) for T in D.feasible)))


def _scaled(x):
    x = [Fraction(v) for v in x]
    den = 1
    for v in x:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in x], den


def check_point(P: PolytopeH, x) -> tuple:
    """(first violated admissible S or None, number of tight constraints)."""
    if len(x) != P.n:
        raise ValueError("point dimension mismatch")
    signs, bounds = P.arrays
    xnum, den = _scaled(x)
    first, tight = kernels.point_check(signs, bounds, xnum, den)
    return (P.constraints[first][0] if first >= 0 else None), tight


def contains(P: PolytopeH, x) -> bool:
    return check_point(P, x)[0] is None


def strictly_contains(P: PolytopeH, x) -> bool:
    bad, tight = check_point(P, x)
    return bad is None and tight == 0


def enumerate_vertices(P: PolytopeH) -> set:
    """Vertices from feasible basic solutions of n-subsets of constraints."""
    if P.n > 4:
        raise DimensionTooLarge(f"vertex enumeration is limited to n <= 4 (got {P.n})")
    signs, bounds = P.arrays
    out = set()
    for nums, d in kernels.vertex_candidates(signs, bounds):
        out.add(tuple(Fraction(v, d) for v in nums))
    return out


def vertex_lattice_index(V):
    verts = V.vertices if isinstance(V, PolytopeV) else tuple(V)
    if len(verts) < 2:
        raise ValueError("need at least two vertices")
    n = len(verts[0])
    base = verts[0]
    diffs = [[a - b for a, b in zip(v, base)] for v in verts[1:]]
    return en.lattice_index(diffs, n)


def affine_dimension(V: PolytopeV) -> int:
    base = V.vertices[0]
    return en.mat_rank([[Fraction(a - b) for a, b in zip(v, base)] for v in V.vertices[1:]]) \
        if len(V.vertices) > 1 else 0


# ---------------------------------------------------------------------------
# structural checks

def meet(S1, S2) -> tuple:
    return tuple(a if a == b else 0 for a, b in zip(S1, S2))


def join(S1, S2) -> tuple:
    """{a in S1 u S2 : a-bar not in S1 u S2} on sign vectors."""
    out = []
    for a, b in zip(S1, S2):
        pos = a > 0 or b > 0
        neg = a < 0 or b < 0
        out.append(0 if pos == neg else (1 if pos else -1))
    return tuple(out)


def random_admissible(n: int, rng: random.Random) -> tuple:
    return tuple(rng.choice((1, 0, -1)) for _ in range(n))


def bisubmodular_violations(A, trials: int, rng: random.Random) -> list:
    R = A if isinstance(A, RankOracle) else RankOracle(A)
    bad = []
    for _ in range(trials):
        S1, S2 = random_admissible(R.n, rng), random_admissible(R.n, rng)
        if R.g(S1) + R.g(S2) < R.g(meet(S1, S2)) + R.g(join(S1, S2)):
            bad.append((S1, S2))
    return bad


def check_bisubmodular(A, trials: int = 1000, rng: random.Random | None = None) -> bool:
    return not bisubmodular_violations(A, trials, rng or random.Random(0))


def split_rank_violations(A) -> list:
    R = A if isinstance(A, RankOracle) else RankOracle(A)
    bad = []
    for S in enumerate_admissible(R.n):
        pos = tuple(e if e > 0 else 0 for e in S)
        neg = tuple(e if e < 0 else 0 for e in S)
        if R.rank(S) != R.rank(pos) + R.rank(neg):
            bad.append(S)
    return bad


def check_split_rank(A) -> bool:
    return not split_rank_violations(A)


def check_rank_plus_j(A, S, J) -> tuple:
    """Extend S by one of q, q-bar for each q in J, raising the rank by |J|.

    Greedy: at each q take whichever of the two columns increases the rank.
    Returns the extended sign vector; raises ValueError if neither works,
    which cannot happen for an isotropic row span.
    """
    R = A if isinstance(A, RankOracle) else RankOracle(A)
    cur = list(S)
    for q in sorted(J):
        if cur[q - 1]:
            raise ValueError(f"{q} or its bar already lies in S")
    base = R.rank(cur)
    for q in sorted(J):
        for e in (1, -1):
            trial = list(cur)
            trial[q - 1] = e
            r = R.rank(trial)
            if r == base + 1:
                cur, base = trial, r
                break
        else:
            raise ValueError(f"neither {q} nor {q}-bar raises the rank; input is not isotropic")
    return tuple(cur)


def index_two_matrix(a=1, b=1, c=1) -> en.ExactMatrix:
    """A point of OG(3,7) whose polytope has vertex lattice index 2.

    Columns in the order 1,2,3,0,3-bar,2-bar,1-bar.
    """
    F = Fraction
    return en.ExactMatrix([
        [F(1), F(0), F(0), F(0), F(a), F(b), F(0)],
        [F(0), F(1), F(0), F(0), F(c), F(0), F(-b)],
        [F(0), F(0), F(1), F(0), F(0), F(-c), F(-a)],
    ])


def random_isotropic(n: int, rng: random.Random, bound: int = 3) -> ChartMatrix:
    """A chart point of a random allowed pair with small, possibly zero, + values.

    Zeros are allowed so that special (non-generic) delta-matroids show up.
    """
    from .chart import build_shape, solve_stars
    from .combin import enumerate_tree
    from .errors import NotNice

    pairs = [nd.pair for nd in enumerate_tree(n).walk()]
    while True:
        shape = build_shape(rng.choice(pairs))
        plus = {pos: Fraction(rng.randint(-bound, bound)) for pos in shape.plus_positions}
        try:
            return solve_stars(shape, plus)
        except NotNice:
            continue
