"""One-parameter degenerations of chart points and the cascade down the tree.

A point of the chart of a non-saturated pair is deformed by multiplying its
active coordinate by t.  Two limits as t -> 0 are taken: the plain limit,
which lands in the chart of the left child, and the limit after a torus
translation, which lands in the chart of the right child.  Both are compared
with the purely combinatorial projections pr_left / pr_right.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactnum as en
from .chart import (
    ZERO, ONE, PLUS, ChartMatrix, SymbolShape, build_shape, check_leftmost_nonzero,
    col_index, col_name, plus_nonzero, random_plus, reconstruct_chart, solve_stars,
    torus_scale,
)
from .combin import AllowedPair, left_child, right_child, root
from .errors import (
    NotInCell, NotNice, PoleAtZero, SingularReduction, VerificationFailure,
)

T = en.T


def active_coordinate(shape: SymbolShape) -> tuple:
    """(row, col) of the leftmost + in the top row of the inner box."""
    n, j = shape.n, shape.pair.j
    row = shape.inner_rows[0]
    col = n + j  # column n-j+1 barred when j > 0, the zero column otherwise
    if shape.grid[row][col] != PLUS:
        raise ValueError(f"active coordinate {(row, col)} is not a + entry")
    return row, col


def pr_left(pair: AllowedPair, plus: dict) -> dict:
    """Forget the active coordinate; the rest keep their positions."""
    shape = build_shape(pair)
    act = active_coordinate(shape)
    child = build_shape(left_child(pair))
    out = {}
    for pos in child.plus_positions:
        if pos == act or pos not in plus:
            raise ValueError(f"left child + position {pos} has no parent coordinate")
        out[pos] = plus[pos]
    return out


def _inner_block(shape, plus):
    """Rows of the matrix restricted to columns 0, n-bar, ..., 1-bar."""
    n = shape.n
    rows = []
    for r, sym in enumerate(shape.grid):
        row = []
        for c in range(n, 2 * n + 1):
            s = sym[c]
            row.append(plus[(r, c)] if s == PLUS else Fraction(int(s == ONE)))
        rows.append(row)
    return rows


def pr_right(pair: AllowedPair, plus: dict) -> dict:
    """Zero part of inner rows 2..j+1, re-normalize them, read off r-shape +s.

    Entries above the inner box and in its first row are kept.  Inner rows
    j+2 and below are forgotten.  In inner rows 2..j+1 the inner columns
    (k-j)-bar .. 2-bar are set to 0, then each row, top to bottom, has the
    earlier rows subtracted so that its last nonzero entry is a 1 in inner
    column (k-j+r-1)-bar.  A vanishing pivot raises SingularReduction.
    """
    shape = build_shape(pair)
    n, j, k = pair.n, pair.j, pair.k
    child = build_shape(right_child(pair))
    top = shape.inner_rows[0]
    block = _inner_block(shape, plus)  # block column c <-> matrix column n + c
    for i in range(j):
        r = top + 1 + i
        for c in range(j + 1, k):
            block[r][c] = Fraction(0)
    done = []
    for i in range(j):
        r = top + 1 + i
        v = list(block[r])
        for i0, (c0, w) in enumerate(done):
            f = v[c0]
            if f:
                v = [a - f * b for a, b in zip(v, w)]
        target = j - i
        piv = v[target]
        if piv == 0 or any(v[target + 1:]):
            raise SingularReduction(f"inner row {i + 2}: pivot in column {col_name(n, n + target)} vanishes")
        v = [a / piv for a in v]
        done.append((target, v))
        block[r] = v
    out = {}
    for (r, c) in child.plus_positions:
        if r > top + j:
            raise ValueError("unexpected + entry below the reduced rows")
        if r <= top and (r, c) not in plus:
            raise ValueError(f"right child + position {(r, c)} missing in parent")
        out[(r, c)] = plus[(r, c)] if r <= top else block[r][c - n]
    return out


def pr_right_preimage(pair: AllowedPair, target: dict, rng: random.Random) -> dict:
    """A parent + assignment whose pr_right is ``target``.

    Rows above the inner box and its first row are copied.  Inner rows
    2..j+1 are L * (target rows) for a random lower-triangular L chosen so
    that each row carries the parent's fixed 1 and the zeros to its right;
    every forgotten or zeroed coordinate is random.
    """
    shape = build_shape(pair)
    n, j, k = pair.n, pair.j, pair.k
    child = build_shape(right_child(pair))
    top = shape.inner_rows[0]
    rand = lambda: Fraction(rng.choice([x for x in range(-9, 10) if x]))
    tgt = _inner_block(child, target)
    out = {}
    for (r, c) in shape.plus_positions:
        if r <= top:
            out[(r, c)] = target[(r, c)]
    # block rows of the target: row i has its 1 at block column j - i
    t_rows = [tgt[top + 1 + i] for i in range(j)]
    for i in range(j):
        r = top + 1 + i
        sym = shape.grid[r]
        one = sym.index(ONE) - n  # block column of the parent's fixed 1
        coeff = [Fraction(0)] * (i + 1)
        if one <= j:
            # the 1 lies among the kept columns: zero the columns right of it
            # (rows i0 with target column > one) and hit it exactly once
            m = j - one  # rows 0..m-1 have pivots right of the parent's 1
            coeff[m] = Fraction(1)
            for i0 in range(m + 1, i + 1):
                coeff[i0] = rand()
        else:
            for i0 in range(i + 1):
                coeff[i0] = rand()
        if coeff[i] == 0:
            coeff[i] = Fraction(1)
        row = [sum((cf * t[c] for cf, t in zip(coeff, t_rows)), Fraction(0)) for c in range(n + 1)]
        for c in range(n, 2 * n + 1):
            if sym[c] == PLUS:
                bc = c - n
                out[(r, c)] = row[bc] if bc <= j else rand()
    for (r, c) in shape.plus_positions:
        if r > top + j:
            out[(r, c)] = rand()
    return out


# ---------------------------------------------------------------------------
# families and limits

@dataclass
class DegenerationStep:
    pair: AllowedPair
    plus: dict
    At: ChartMatrix
    left_result: tuple = None
    right_result: tuple = None


def build_family(pair: AllowedPair, plus: dict) -> DegenerationStep:
    shape = build_shape(pair)
    act = active_coordinate(shape)
    fam = {pos: (en.RationalFunction.const(v) * T if pos == act else en.RationalFunction.const(v))
           for pos, v in plus.items()}
    At = solve_stars(shape, fam)
    return DegenerationStep(pair, dict(plus), At)


def _conform(entries, shape: SymbolShape, what: str):
    for r, sym in enumerate(shape.grid):
        for c, s in enumerate(sym):
            v = entries[r][c]
            if (s == ZERO and v != 0) or (s == ONE and v != 1):
                raise NotInCell(f"{what}: entry ({r + 1},{col_name(shape.n, c)}) = {v} "
                                f"does not fit symbol {s}")


def limit_left(step: DegenerationStep) -> tuple:
    pair = left_child(step.pair)
    shape = build_shape(pair)
    lim = tuple(tuple(en.eval_at_zero(v) for v in r) for r in step.At.entries)
    _conform(lim, shape, "left limit")
    return pair, ChartMatrix(shape, lim)


def right_scaled_family(step: DegenerationStep):
    """The torus-translated and row-rescaled family, before t -> 0."""
    pair = step.pair
    n, j = pair.n, pair.j
    tinv = 1 / T
    t_vec = [tinv] * (n - j) + [en.RationalFunction.const(1)] * j
    scaled = torus_scale(step.At, t_vec).entries
    top = build_shape(pair).inner_rows[0]
    rows = []
    for r, row in enumerate(scaled):
        if r <= top:
            row = tuple(v * tinv for v in row)
        elif r > top + j:
            row = tuple(v * T for v in row)
        rows.append(row)
    return tuple(rows)


def limit_right(step: DegenerationStep) -> tuple:
    pair = right_child(step.pair)
    dagger = tuple(tuple(en.eval_at_zero(v) for v in r) for r in right_scaled_family(step))
    return pair, reconstruct_chart(dagger, pair)


def compare_charts(got: ChartMatrix, want: ChartMatrix, what: str):
    if got.shape.grid != want.shape.grid:
        raise VerificationFailure(f"{what}: shapes differ")
    for r, (a, b) in enumerate(zip(got.entries, want.entries)):
        for c, (x, y) in enumerate(zip(a, b)):
            if x != y:
                raise VerificationFailure(
                    f"{what}: entry ({r + 1},{col_name(got.n, c)}) is {x}, expected {y}")


# ---------------------------------------------------------------------------
# nicest points

def is_nicest(pair: AllowedPair, plus: dict) -> bool:
    """Nice here and, recursively, at both projections down to the leaves.

    Nice means: the star system of every row has a unique solution, every
    + entry is nonzero and every row's leftmost non-0 entry is nonzero.
    """
    try:
        A = solve_stars(build_shape(pair), plus)
    except NotNice:
        return False
    if not (plus_nonzero(A) and check_leftmost_nonzero(A)):
        return False
    if pair.saturated:
        return True
    try:
        right = pr_right(pair, plus)
    except SingularReduction:
        return False
    return is_nicest(left_child(pair), pr_left(pair, plus)) and is_nicest(right_child(pair), right)


def draw_nicest_root(n: int, seed: int, tries: int = 32) -> tuple:
    """(plus, attempts) for a nicest random root point."""
    rng = random.Random(seed)
    pair = root(n)
    shape = build_shape(pair)
    for attempt in range(1, tries + 1):
        plus = random_plus(shape, rng)
        if is_nicest(pair, plus):
            return plus, attempt
    raise NotNice(f"no nicest root point for n={n}, seed={seed} after {tries} draws")


# ---------------------------------------------------------------------------
# cascade

@dataclass
class CascadeReport:
    n: int
    seed: int
    attempts: int
    leaves: list = field(default_factory=list)   # dicts: path, pair, chart, multiplicity
    steps: list = field(default_factory=list)    # dicts: path, pair, checks, max_degree
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, dump_matrices: bool = False):
        leaves = []
        for lf in self.leaves:
            d = {"path": lf["path"], "pair": lf["pair"].to_json(), "I": list(lf["pair"].I),
                 "multiplicity": lf.get("multiplicity")}
            if dump_matrices:
                d["chart"] = lf["chart"].to_json()
            leaves.append(d)
        steps = []
        for st in self.steps:
            d = {"path": st["path"], "pair": st["pair"].to_json(), "left": st["left"],
                 "right": st["right"], "max_degree": st["max_degree"]}
            if dump_matrices and "matrices" in st:
                d["matrices"] = {key: m.to_json() for key, m in st["matrices"].items()}
            steps.append(d)
        return {"n": self.n, "seed": self.seed, "root_draws": self.attempts,
                "leaf_count": len(self.leaves), "leaves": leaves, "steps": steps,
                "failures": self.failures, "ok": self.ok}


def degenerate(pair: AllowedPair, plus: dict, keep_matrices: bool = False) -> dict:
    """Run one node: family, both limits, both projections, comparisons."""
    step = build_family(pair, plus)
    rec = {"pair": pair, "left": "pending", "right": "pending",
           "max_degree": max(v.degree for r in step.At.entries for v in r)}
    lp = pr_left(pair, plus)
    lpair, lim_l = limit_left(step)
    want_l = solve_stars(build_shape(lpair), lp)
    compare_charts(lim_l, want_l, f"left limit at {pair.label()}")
    rec["left"] = "match"
    rp = pr_right(pair, plus)
    rpair, lim_r = limit_right(step)
    want_r = solve_stars(build_shape(rpair), rp)
    compare_charts(lim_r, want_r, f"right limit at {pair.label()}")
    rec["right"] = "match"
    if keep_matrices:
        rec["matrices"] = {"family": step.At, "left": lim_l, "right": lim_r}
    rec["children"] = ((lpair, lp), (rpair, rp))
    return rec


def cascade(n: int, seed: int, keep_matrices: bool = False, multiplicities: bool = True) -> CascadeReport:
    from .dmatroid import polytope_V, vertex_lattice_index

    plus, attempts = draw_nicest_root(n, seed)
    report = CascadeReport(n, seed, attempts)

    def visit(pair, plus, path):
        if pair.saturated:
            A = solve_stars(build_shape(pair), plus)
            leaf = {"path": path, "pair": pair, "chart": A}
            if multiplicities:
                leaf["multiplicity"] = vertex_lattice_index(polytope_V(A))
            report.leaves.append(leaf)
            return
        try:
            rec = degenerate(pair, plus, keep_matrices)
        except (VerificationFailure, NotInCell, NotNice, PoleAtZero, SingularReduction) as exc:
            report.failures.append({"path": path, "pair": pair.to_json(),
                                    "error": type(exc).__name__, "detail": str(exc)})
            return
        (lpair, lp), (rpair, rp) = rec.pop("children")
        rec["path"] = path
        report.steps.append(rec)
        visit(lpair, lp, path + "L")
        visit(rpair, rp, path + "R")

    visit(root(n), plus, "")
    return report
