"""Symbol grids for Richardson charts, the quadratic form, and the star solver.

Columns are stored 0-based in the order 1,...,n, 0, n-bar,...,1-bar: column q
sits at index q-1, the zero column at index n, and q-bar at index 2n+1-q.
Rows are 0-based internally; messages and JSON use 1-based row numbers.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import exactnum as en
from .combin import AllowedPair, partition_data, validate_pair
from .errors import NotInCell, NotNice, SingularSystem

ZERO, ONE, PLUS, STAR = "0", "1", "+", "*"


def col_index(n: int, label: int) -> int:
    """Index of a signed column label: q > 0 unbarred, 0, -q for q-bar."""
    if label > 0:
        return label - 1
    if label == 0:
        return n
    return 2 * n + 1 + label


def col_label(n: int, idx: int) -> int:
    if idx < n:
        return idx + 1
    if idx == n:
        return 0
    return -(2 * n + 1 - idx)


def col_name(n: int, idx: int) -> str:
    lab = col_label(n, idx)
    return f"{-lab}bar" if lab < 0 else str(lab)


def bar(n: int, idx: int) -> int:
    return 2 * n - idx


def iso_dot(y, z):
    """2 y_0 z_0 + sum over q of (y_q z_qbar + y_qbar z_q)."""
    if len(y) != len(z) or len(y) % 2 == 0:
        raise ValueError("vectors must have equal odd length 2n+1")
    n = (len(y) - 1) // 2
    acc = 2 * y[n] * z[n]
    last = 2 * n
    for i in range(n):
        a, b = y[i], z[last - i]
        if a and b:
            acc = acc + a * b
        a, b = y[last - i], z[i]
        if a and b:
            acc = acc + a * b
    return acc


# ---------------------------------------------------------------------------
# shapes

@dataclass(frozen=True)
class SymbolShape:
    pair: AllowedPair
    grid: tuple
    inner_rows: tuple      # (first, last) 0-based, inclusive
    inner_cols: tuple      # (first, last) 0-based, inclusive
    path_sw: tuple
    path_ne: tuple
    special_columns: tuple  # signed labels, unbarred then barred

    @property
    def n(self) -> int:
        return self.pair.n

    @property
    def plus_positions(self) -> list:
        return [(r, c) for r, row in enumerate(self.grid) for c, s in enumerate(row) if s == PLUS]

    @property
    def star_positions(self) -> list:
        return [(r, c) for r, row in enumerate(self.grid) for c, s in enumerate(row) if s == STAR]

    def one_col(self, r: int) -> int:
        return self.grid[r].index(ONE)

    def leading_zeros(self, r: int) -> int:
        row = self.grid[r]
        return len(row) - len(row.lstrip(ZERO))

    def inner_box(self) -> tuple:
        r0, r1 = self.inner_rows
        c0, c1 = self.inner_cols
        return tuple(row[c0:c1 + 1] for row in self.grid[r0:r1 + 1])

    def to_json(self):
        return {"pair": self.pair.to_json(), "rows": list(self.grid)}


def _row_symbols(n, lead, trail):
    width = 2 * n + 1
    g = [None] * width
    for c in range(lead):
        g[c] = ZERO
    for c in range(width - trail, width):
        g[c] = ZERO
    free = [c for c in range(width) if g[c] is None]
    if not free:
        raise ValueError("row without free entries")
    g[free[-1]] = ONE
    for c in free[:-1]:
        g[c] = PLUS if c >= n else STAR
    return "".join(g)


def _grid(n, I, Ip):
    pd, pdp = partition_data(n, I), partition_data(n, Ip)
    s, sp = pd.s, pdp.s
    rows = []
    for p in range(1, n + 1):
        lead = n + pdp.lam[p - 1] if p <= sp else pdp.mu[p - sp - 1]
        trail = n + pd.lam[n - p] if p >= n - s + 1 else pd.mu[n - p - s]
        rows.append(_row_symbols(n, lead, trail))
    return tuple(rows)


def _path(grid, rows, window):
    """Nonzero cells of ``rows`` (bottom to top) restricted per row to window(r)."""
    cells = []
    for r in rows:
        lo, hi = window(r)
        cells.extend((r, c) for c in range(lo, hi + 1) if grid[r][c] != ZERO)
    return tuple(cells)


def upward_steps(path) -> list:
    """Columns where a lattice path (bottom-left to top-right) moves up."""
    steps = []
    for (r0, c0), (r1, c1) in zip(path, path[1:]):
        if r1 != r0:
            if r1 != r0 - 1 or c1 != c0:
                raise ValueError(f"path is not a lattice path at {(r0, c0)} -> {(r1, c1)}")
            steps.append(c0)
    return steps


def build_shape(pair: AllowedPair) -> SymbolShape:
    n, j, k = pair.n, pair.j, pair.k
    grid = _grid(n, pair.I, pair.Iprime)
    top = len(set(pair.Iprime) - {j})
    bottom = n - len(pair.I) - 1
    c0, c1 = n - k, n + k
    last = 2 * n
    sw = _path(grid, range(n - 1, bottom - 1, -1),
               lambda r: (0, c0) if r == bottom else (0, last))
    ne = _path(grid, range(top, -1, -1),
               lambda r: (c1, last) if r == top else (0, last))
    lam = sorted(pair.I, reverse=True)
    lamp = sorted(pair.Iprime, reverse=True)
    if j:
        lamp = lamp[:-1]
    special = tuple(sorted(n + 1 - x for x in lam)) + tuple(sorted(-(n + 1 - x) for x in lamp))
    return SymbolShape(pair, grid, (top, bottom), (c0, c1), sw, ne, special)


def plus_count(shape: SymbolShape) -> int:
    return sum(row.count(PLUS) for row in shape.grid)


def star_count(shape: SymbolShape) -> int:
    return sum(row.count(STAR) for row in shape.grid)


# ---------------------------------------------------------------------------
# chart matrices

@dataclass(frozen=True)
class ChartMatrix:
    shape: SymbolShape
    entries: tuple

    @property
    def n(self) -> int:
        return self.shape.n

    @property
    def field(self) -> str:
        return "Q(t)" if en.is_function_field(self.entries) else "Q"

    def matrix(self) -> en.ExactMatrix:
        return en.ExactMatrix(self.entries)

    def plus_values(self) -> dict:
        return {pos: self.entries[pos[0]][pos[1]] for pos in self.shape.plus_positions}

    def map(self, f) -> ChartMatrix:
        return ChartMatrix(self.shape, tuple(tuple(f(v) for v in r) for r in self.entries))

    def to_json(self):
        return {"shape": self.shape.to_json(), "entries": en.matrix_to_json(self.entries)}


def _as_plus_dict(shape, plus) -> dict:
    positions = shape.plus_positions
    if isinstance(plus, Mapping):
        if set(plus) != set(positions):
            raise ValueError("plus assignment does not match the shape's + positions")
        return dict(plus)
    plus = list(plus)
    if len(plus) != len(positions):
        raise ValueError(f"expected {len(positions)} plus values, got {len(plus)}")
    return dict(zip(positions, plus))


def solve_stars(shape: SymbolShape, plus) -> ChartMatrix:
    """Fill the * entries so that all rows are pairwise orthogonal.

    Rows are handled top to bottom.  The stars of row p sit in unbarred
    columns, so the conditions v_q . v_p = 0 (q < p) and v_p . v_p = 0 are
    linear in them.  The system must have exactly one solution; otherwise
    NotNice reports the row.
    """
    n = shape.n
    width = 2 * n + 1
    plus = _as_plus_dict(shape, plus)
    func = any(isinstance(v, en.RationalFunction) for v in plus.values())
    if func:
        conv = en.RationalFunction.const
        zero, one = conv(0), conv(1)
    else:
        conv = Fraction
        zero, one = Fraction(0), Fraction(1)
    rows = []
    for p, sym in enumerate(shape.grid):
        v = [zero] * width
        stars = []
        for c, s in enumerate(sym):
            if s == ONE:
                v[c] = one
            elif s == PLUS:
                v[c] = conv(plus[(p, c)])
            elif s == STAR:
                stars.append(c)
        if stars:
            coeffs, rhs = [], []
            for q in range(p):
                w = rows[q]
                cf = [w[bar(n, c)] for c in stars]
                const = iso_dot(w, v)
                if any(cf) or const:
                    coeffs.append(cf)
                    rhs.append(-const)
            cf = [2 * v[bar(n, c)] for c in stars]
            const = iso_dot(v, v)
            if any(cf) or const:
                coeffs.append(cf)
                rhs.append(-const)
            if not coeffs:
                raise NotNice(f"row {p + 1}: no conditions on {len(stars)} star entries",
                              row=p + 1, unknowns=len(stars), rank=0)
            try:
                sol = en.solve_unique(coeffs, rhs)
            except en.SingularSystem as exc:
                rank = en.mat_rank(coeffs)
                raise NotNice(f"row {p + 1}: star system singular or inconsistent ({exc})",
                              row=p + 1, unknowns=len(stars), rank=rank) from None
            for c, x in zip(stars, sol):
                v[c] = x
        rows.append(v)
    for p in range(n):
        for q in range(p + 1):
            if iso_dot(rows[p], rows[q]):
                raise NotNice(f"rows {q + 1} and {p + 1} are not orthogonal", row=p + 1)
    return ChartMatrix(shape, tuple(tuple(r) for r in rows))


def check_leftmost_nonzero(A: ChartMatrix) -> bool:
    for r, row in enumerate(A.entries):
        lead = A.shape.leading_zeros(r)
        if row[lead] == 0:
            return False
    return True


def plus_nonzero(A: ChartMatrix) -> bool:
    return all(A.entries[r][c] != 0 for r, c in A.shape.plus_positions)


def is_nice(A: ChartMatrix) -> bool:
    return check_leftmost_nonzero(A) and plus_nonzero(A)


def random_plus(shape: SymbolShape, rng: random.Random, bound: int = 99) -> dict:
    vals = {}
    for pos in shape.plus_positions:
        x = 0
        while x == 0:
            x = rng.randint(-bound, bound)
        vals[pos] = Fraction(x)
    return vals


def random_nice_chart(pair: AllowedPair, rng: random.Random, tries: int = 32) -> ChartMatrix:
    """Solve a random nonzero plus assignment, redrawing on failure."""
    shape = build_shape(pair)
    last = None
    for _ in range(tries):
        try:
            A = solve_stars(shape, random_plus(shape, rng))
        except NotNice as exc:
            last = exc
            continue
        if check_leftmost_nonzero(A):
            return A
    raise NotNice(f"no nice point for {pair.label()} after {tries} draws ({last})")


# ---------------------------------------------------------------------------
# incidence conditions

def _dim_meet(entries, support) -> int:
    """dim of (row span) meet (coordinate subspace on ``support``)."""
    n = len(entries)
    outside = [c for c in range(len(entries[0])) if c not in support]
    if not outside:
        return n
    return n - en.mat_rank([[r[c] for c in outside] for r in entries])


def incidence_dims(entries, n: int, I, Iprime) -> list:
    """(expected, actual) dimension pairs of both Schubert conditions."""
    width = 2 * n + 1
    unb = lambda q: {col_index(n, x) for x in range(1, q + 1)}
    bars = lambda q: {col_index(n, -x) for x in range(1, q + 1)}
    everything = set(range(width))
    out = []
    for flag_small, flag_perp, J in ((unb, bars, I), (bars, unb, Iprime)):
        pd = partition_data(n, J)
        for h, lam in enumerate(pd.lam, start=1):
            out.append((h, _dim_meet(entries, flag_small(n + 1 - lam))))
        for h, mu in enumerate(pd.mu, start=pd.s + 1):
            # perp of the q-th flag space kills the paired coordinates
            out.append((h, _dim_meet(entries, everything - flag_perp(mu))))
    return out


def verify_richardson_membership(A, pair: AllowedPair | None = None) -> bool:
    entries = A.entries if isinstance(A, ChartMatrix) else en._entries(A)
    if pair is None:
        pair = A.shape.pair
    n = pair.n
    if en.mat_rank(entries) != n:
        return False
    return all(e == a for e, a in incidence_dims(entries, n, pair.I, pair.Iprime))


# ---------------------------------------------------------------------------
# normal form from an arbitrary basis

def nullspace(M) -> list:
    """Basis of {x : M x = 0} over Q as a list of vectors."""
    rows = [[Fraction(v) for v in r] for r in M]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -rows[i][fc]
        basis.append(x)
    return basis


def reconstruct_chart(B, pair: AllowedPair) -> ChartMatrix:
    """The shape-conformant basis of the row span of B, if it is in the cell."""
    entries = [[Fraction(v) for v in r] for r in en._entries(B)]
    shape = build_shape(pair)
    n = pair.n
    if len(entries) != n or en.mat_rank(entries) != n:
        raise NotInCell("basis rows are dependent or of the wrong count")
    width = 2 * n + 1
    rows = []
    for p, sym in enumerate(shape.grid):
        zero_cols = [c for c in range(width) if sym[c] == ZERO]
        if zero_cols:
            ker = nullspace([[r[c] for r in entries] for c in zero_cols])
        else:
            ker = [[Fraction(int(i == m)) for i in range(n)] for m in range(n)]
        if len(ker) != 1:
            raise NotInCell(f"row {p + 1}: the coordinate subspace meets the span in dimension {len(ker)}")
        y = ker[0]
        v = [sum((y[i] * entries[i][c] for i in range(n)), Fraction(0)) for c in range(width)]
        oc = shape.one_col(p)
        if v[oc] == 0:
            raise NotInCell(f"row {p + 1}: the normalizing entry vanishes")
        inv = 1 / v[oc]
        rows.append(tuple(x * inv for x in v))
    return ChartMatrix(shape, tuple(rows))


def torus_scale(A, t_vec):
    """Scale column q by t_q and column q-bar by 1/t_q; column 0 is fixed."""
    ent = A.entries if isinstance(A, ChartMatrix) else en._entries(A)
    n = (len(ent[0]) - 1) // 2
    if len(t_vec) != n:
        raise ValueError(f"expected {n} torus coordinates")
    if any(t == 0 for t in t_vec):
        raise ValueError("torus coordinates must be nonzero")
    mult = [None] * (2 * n + 1)
    for q, t in enumerate(t_vec, start=1):
        mult[col_index(n, q)] = t
        mult[col_index(n, -q)] = 1 / t
    out = tuple(tuple(v if m is None or v == 0 else v * m for v, m in zip(r, mult)) for r in ent)
    if isinstance(A, ChartMatrix):
        return ChartMatrix(A.shape, out)
    return en.ExactMatrix(out)


def pair_from_text(n: int, text: str) -> AllowedPair:
    from .combin import parse_subset
    if ";" not in text:
        raise ValueError('pair must look like "I;Iprime", e.g. "4,6,7;1,3,5"')
    a, b = text.split(";", 1)
    return validate_pair(n, parse_subset(a), parse_subset(b))
