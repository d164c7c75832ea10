"""Decomposition of the hypercube into the leaf polytopes, and bookkeeping.

Every point x of [0,1]^n is assigned a subset I of [n-1] from the partial
sums y_q = x_1 + ... + x_q.  The leaf polytope of the saturated pair
(I, [n-1] - I) is expected to contain x, and generic x should lie in the
interior of exactly one leaf polytope.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .chart import build_shape, plus_count, random_nice_chart
from .combin import codim_w, enumerate_tree, signs_to_str, validate_pair
from .dmatroid import (
    RankOracle, check_point, feasible_sets, polytope_H, polytope_V, strictly_contains,
    vertex_lattice_index,
)
from .errors import BoundaryPoint, VerificationFailure


@dataclass(frozen=True)
class RegionAssignment:
    x: tuple
    y: tuple
    SC: tuple
    I: tuple
    Iprime: tuple
    dual_checked: bool = True

    def to_json(self):
        fs = lambda v: str(v)
        return {"x": [fs(v) for v in self.x], "y": [fs(v) for v in self.y],
                "SC": list(self.SC), "I": list(self.I), "Iprime": list(self.Iprime),
                "dual_checked": self.dual_checked}


def partial_sums(x) -> tuple:
    out, acc = [], Fraction(0)
    for v in x:
        acc += Fraction(v)
        out.append(acc)
    return tuple(out)


def _wall(y) -> int | None:
    for q, v in enumerate(y, start=1):
        if v.denominator == 1 and 0 < v < q:
            return q
    return None


def dual_inequalities_hold(n: int, y, Iprime) -> bool:
    """y'_{n-l} < m <= y'_{n+1-l} for the m-th largest l in I', y'_q = q - y_q."""
    yp = [Fraction(0)] + [q - v for q, v in enumerate(y, start=1)]
    for m, lam in enumerate(sorted(Iprime, reverse=True), start=1):
        if not (yp[n - lam] < m <= yp[n + 1 - lam]):
            return False
    return True


def assign_region(n: int, x) -> RegionAssignment:
    x = tuple(Fraction(v) for v in x)
    if len(x) != n:
        raise ValueError(f"expected {n} coordinates")
    if any(v < 0 or v > 1 for v in x):
        raise ValueError("point is outside [0,1]^n")
    y = partial_sums(x)
    q = _wall(y)
    if q is not None:
        raise BoundaryPoint(f"y_{q} = {y[q - 1]} is an integer strictly between 0 and {q}")
    ys = (Fraction(0),) + y
    s = max(0, math.ceil(y[-1]) - 1)
    lams = []
    for ell in range(1, s + 1):
        hits = [lam for lam in range(1, n) if ys[n - lam] <= ell < ys[n + 1 - lam]]
        if len(hits) != 1:
            raise BoundaryPoint(f"level {ell} is matched by {len(hits)} parts")
        lams.append(hits[0])
    I = tuple(sorted(lams))
    Ip = tuple(v for v in range(1, n) if v not in I)
    SC = tuple(sorted(n + 1 - lam for lam in lams))
    # the dual inequalities are strict on the left and can only fail where
    # some y_q is 0 or q, i.e. on a face of the cube; check them elsewhere
    interior = all(0 < v < q for q, v in enumerate(y, start=1))
    if interior and not dual_inequalities_hold(n, y, Ip):
        raise VerificationFailure(f"dual inequalities fail at x={x}")
    return RegionAssignment(x, y, SC, I, Ip, interior)


# ---------------------------------------------------------------------------

class LeafPolytopes:
    """One nice chart and its polytope per leaf of the tree, built on demand."""

    def __init__(self, n: int, seed: int = 0, check_independence: bool = True):
        self.n = n
        self.rng = random.Random(seed)
        self.check_independence = check_independence
        self._charts = {}
        self._polys = {}

    def chart(self, I):
        I = tuple(I)
        if I not in self._charts:
            pair = validate_pair(self.n, I, [v for v in range(1, self.n) if v not in I])
            A = random_nice_chart(pair, self.rng)
            if self.check_independence:
                B = random_nice_chart(pair, self.rng)
                if feasible_sets(A) != feasible_sets(B):
                    raise VerificationFailure(f"two nice draws for leaf {I} have different polytopes")
            self._charts[I] = A
        return self._charts[I]

    def polytope(self, I):
        I = tuple(I)
        if I not in self._polys:
            self._polys[I] = polytope_H(RankOracle(self.chart(I)))
        return self._polys[I]

    def all_leaves(self):
        return [tuple(nd.pair.I) for nd in enumerate_tree(self.n).leaves()] if self.n >= 2 else [()]


def verify_membership(x, A_I) -> tuple:
    """(True, None) or (False, first violated admissible S)."""
    P = A_I if hasattr(A_I, "constraints") else polytope_H(A_I)
    bad, _ = check_point(P, x)
    return bad is None, bad


def next_prime(m: int) -> int:
    def prime(v):
        return v > 1 and all(v % d for d in range(2, math.isqrt(v) + 1))
    while not prime(m):
        m += 1
    return m


def generic_jitter(n: int, den: int) -> tuple:
    """Offsets 2^(q-1)/J, J prime and > den * 2^n.

    Every signed sum of the offsets is a nonzero multiple of 1/J with
    magnitude below 1, so no x(S) with x on the 1/den grid plus this offset
    is ever an integer, and each coordinate stays in [0,1].
    """
    J = next_prime(den * 2 ** n + 1)
    return tuple(Fraction(2 ** q, J) for q in range(n))


def _as_offsets(n, jitter):
    if isinstance(jitter, (list, tuple)):
        return tuple(Fraction(v) for v in jitter)
    return tuple([Fraction(jitter)] * n)


@dataclass
class DecompositionReport:
    n: int
    grid_denominator: int
    jitter: tuple
    samples: list = field(default_factory=list)      # dicts per point
    boundary: list = field(default_factory=list)
    leaf_counts: dict = field(default_factory=dict)
    multiplicities: dict = field(default_factory=dict)
    terms: list = field(default_factory=list)

    @property
    def assigned(self):
        return sum(1 for s in self.samples)

    @property
    def membership_failures(self):
        return [s for s in self.samples if not s["member"]]

    @property
    def interior_failures(self):
        return [s for s in self.samples if s["interior_count"] != 1]

    @property
    def ok(self) -> bool:
        return not self.membership_failures and not self.interior_failures

    def to_json(self):
        return {
            "n": self.n,
            "grid_denominator": self.grid_denominator,
            "jitter": [str(v) for v in self.jitter],
            "points": len(self.samples) + len(self.boundary),
            "assigned": self.assigned,
            "boundary_points": len(self.boundary),
            "membership_failures": len(self.membership_failures),
            "interior_count_not_one": len(self.interior_failures),
            "dual_inequalities_checked": sum(1 for s in self.samples if s["dual_checked"]),
            "leaf_counts": {",".join(map(str, k)) or "-": v for k, v in sorted(self.leaf_counts.items())},
            "multiplicities": {",".join(map(str, k)) or "-": v for k, v in sorted(self.multiplicities.items())},
            "first_failures": (self.membership_failures + self.interior_failures)[:5],
            "ok": self.ok,
        }

    def to_markdown(self):
        lines = ["| leaf I | w(I) | w(I^c) | multiplicity | samples |", "|---|---|---|---|---|"]
        for I in sorted(set(self.leaf_counts) | set(self.multiplicities), key=lambda t: (len(t), t)):
            Ic = [v for v in range(1, self.n) if v not in I]
            lab = "{" + ",".join(map(str, I)) + "}"
            lines.append(f"| {lab} | {codim_w(I)} | {codim_w(Ic)} | "
                         f"{self.multiplicities.get(I, '-')} | {self.leaf_counts.get(I, 0)} |")
        return "\n".join(lines) + "\n"


def _check_point(leaves, n, x, report):
    try:
        ra = assign_region(n, x)
    except BoundaryPoint as exc:
        report.boundary.append({"x": [str(v) for v in x], "reason": str(exc)})
        return
    member, bad = verify_membership(x, leaves.polytope(ra.I))
    inside = sum(1 for I in leaves.all_leaves() if strictly_contains(leaves.polytope(I), x))
    report.leaf_counts[ra.I] = report.leaf_counts.get(ra.I, 0) + 1
    report.samples.append({"x": [str(v) for v in x], "I": list(ra.I), "member": member,
                           "violated": None if bad is None else signs_to_str(bad),
                           "interior_count": inside, "dual_checked": ra.dual_checked})


def coverage_test(n: int, grid_denominator: int, jitter=None, seed: int = 0,
                  samples: int | None = None, leaves: LeafPolytopes | None = None) -> DecompositionReport:
    """Assign and test either every grid point or ``samples`` random ones.

    Points are a/grid_denominator + jitter coordinatewise with
    0 <= a < grid_denominator.
    """
    if jitter is None:
        jitter = generic_jitter(n, grid_denominator)
    off = _as_offsets(n, jitter)
    leaves = leaves or LeafPolytopes(n, seed)
    report = DecompositionReport(n, grid_denominator, off)
    if samples is None:
        from itertools import product
        pts = product(range(grid_denominator), repeat=n)
    else:
        rng = random.Random(seed + 1)
        pts = ([rng.randrange(grid_denominator) for _ in range(n)] for _ in range(samples))
    for a in pts:
        x = tuple(Fraction(ai, grid_denominator) + o for ai, o in zip(a, off))
        if any(v > 1 for v in x):
            raise ValueError("jitter pushes a grid point outside [0,1]^n")
        _check_point(leaves, n, x, report)
    return report


def multiplicity_report(cascade_report) -> dict:
    """Leaf I -> vertex lattice index of its polytope."""
    out = {}
    for leaf in cascade_report.leaves:
        m = leaf.get("multiplicity")
        if m is None:
            m = vertex_lattice_index(polytope_V(leaf["chart"]))
        out[tuple(leaf["pair"].I)] = m
    return out


def class_formula(n: int) -> list:
    """Terms (I, I^c) with their codimensions and Richardson dimension.

    Raises VerificationFailure if some codimension sum differs from
    n(n-1)/2 or some chart dimension differs from n.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    total = n * (n - 1) // 2
    terms = []
    for node in enumerate_tree(n).leaves():
        pair = node.pair
        wI, wIc = codim_w(pair.I), codim_w(pair.Iprime)
        dim_formula = n * (n + 1) // 2 - wI - wIc
        dim_chart = plus_count(build_shape(pair))
        if wI + wIc != total or dim_formula != n or dim_chart != n:
            raise VerificationFailure(
                f"term {pair.label()}: w-sum {wI + wIc}, dimension {dim_formula}/{dim_chart}")
        terms.append({"I": list(pair.I), "Ic": list(pair.Iprime), "w_I": wI, "w_Ic": wIc,
                      "degree": 2 * (wI + wIc), "dimension": dim_chart, "path": node.path})
    if len(terms) != 2 ** (n - 1):
        raise VerificationFailure(f"{len(terms)} terms, expected {2 ** (n - 1)}")
    terms.sort(key=lambda t: (len(t["I"]), t["I"]))
    return terms
