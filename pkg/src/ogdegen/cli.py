"""Command-line interface.

Every command prints one deterministic JSON document (or Markdown with
``--format md``).  Exit codes: 0 success, 1 a verification failed, 2 bad usage.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .chart import (
    build_shape, check_leftmost_nonzero, col_name, pair_from_text, plus_count, random_nice_chart,
    random_plus, star_count, verify_richardson_membership,
)
from .combin import (
    codim_w, dimension, enumerate_admissible, enumerate_tree, root, signs_to_str,
)
from .errors import BoundaryPoint, NotAllowed, NotNice, OgdegenError, VerificationFailure

STATEMENTS = {
    "decomposition": "hypercube-decomposition",
    "multiplicity": "multiplicity-one",
    "polytopes-same": "vertex-hull-equals-inequalities",
    "formula": "class-formula",
    "appendix": "delta-matroid-rank-properties",
}


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


# ---------------------------------------------------------------------------
# argument helpers

def _need_n(args, lo=2, hi=None):
    if args.n is None:
        raise UsageError("--n", "required for this command")
    if args.n < lo or (hi is not None and args.n > hi):
        rng = f"[{lo},{hi}]" if hi is not None else f">= {lo}"
        raise UsageError("--n", f"must be {rng}, got {args.n}")
    return args.n


def _pair(args):
    n = _need_n(args)
    if args.pair is None:
        return root(n)
    try:
        return pair_from_text(n, args.pair)
    except (NotAllowed, ValueError) as exc:
        raise UsageError("--pair", str(exc)) from None


def _point(args, n):
    try:
        x = tuple(Fraction(v.strip()) for v in args.point.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError("--point", f"not a list of rationals ({exc})") from None
    if len(x) != n:
        raise UsageError("--point", f"expected {n} coordinates, got {len(x)}")
    return x


def _subset(I) -> str:
    return "{" + ",".join(map(str, I)) + "}"


def _check(name, ok, detail=None):
    d = {"name": name, "ok": bool(ok)}
    if detail is not None:
        d["detail"] = detail
    return d


def _verify_doc(kind, checks, **extra):
    doc = {"statement": STATEMENTS[kind], "command": f"verify {kind}",
           "ok": all(c["ok"] for c in checks), "checks": checks}
    doc.update(extra)
    return doc


# ---------------------------------------------------------------------------
# commands

def cmd_tree(args):
    n = _need_n(args)
    nodes = []
    for node in enumerate_tree(n).walk():
        p = node.pair
        nodes.append({"path": node.path or "-", "I": list(p.I), "Iprime": list(p.Iprime),
                      "j": p.j, "k": p.k, "case": p.case, "saturated": p.saturated,
                      "dimension": dimension(p)})
    return {"n": n, "node_count": len(nodes), "leaf_count": sum(d["saturated"] for d in nodes),
            "nodes": nodes}


def cmd_shape(args):
    pair = _pair(args)
    shape = build_shape(pair)
    n = pair.n
    return {"pair": pair.to_json(), "case": pair.case, "j": pair.j, "k": pair.k,
            "rows": list(shape.grid),
            "inner_rows": [shape.inner_rows[0] + 1, shape.inner_rows[1] + 1],
            "inner_columns": [col_name(n, shape.inner_cols[0]), col_name(n, shape.inner_cols[1])],
            "special_columns": [str(q) if q > 0 else f"{-q}bar" for q in shape.special_columns],
            "plus_count": plus_count(shape), "star_count": star_count(shape),
            "dimension": dimension(pair)}


def cmd_solve(args):
    pair = _pair(args)
    A = random_nice_chart(pair, random.Random(args.seed))
    checks = [_check("rows-orthogonal", True),
              _check("leftmost-nonzero", check_leftmost_nonzero(A)),
              _check("richardson-incidences", verify_richardson_membership(A, pair))]
    return {"pair": pair.to_json(), "seed": args.seed, "chart": A.to_json(), "checks": checks,
            "ok": all(c["ok"] for c in checks)}


def _nicest_for(pair, seed, tries=32):
    from .degen import is_nicest
    rng = random.Random(seed)
    shape = build_shape(pair)
    for _ in range(tries):
        plus = random_plus(shape, rng)
        if is_nicest(pair, plus):
            return plus
    raise NotNice(f"no nicest point for {pair.label()} after {tries} draws")


def cmd_degenerate(args):
    from .degen import degenerate
    pair = _pair(args)
    if pair.saturated:
        raise UsageError("--pair", f"{pair.label()} is saturated and has no degeneration")
    rec = degenerate(pair, _nicest_for(pair, args.seed), keep_matrices=args.dump_matrices)
    (lpair, _), (rpair, _) = rec["children"]
    doc = {"pair": pair.to_json(), "seed": args.seed, "max_degree": rec["max_degree"],
           "left": {"pair": lpair.to_json(), "limit": rec["left"]},
           "right": {"pair": rpair.to_json(), "limit": rec["right"]}, "ok": True}
    if args.dump_matrices:
        doc["matrices"] = {k: m.to_json() for k, m in rec["matrices"].items()}
    return doc


def cmd_cascade(args):
    from .degen import cascade
    n = _need_n(args)
    rep = cascade(n, args.seed, keep_matrices=args.dump_matrices)
    doc = rep.to_json(args.dump_matrices)
    if not rep.ok:
        f = rep.failures[0]
        doc["failed_check"] = f"degeneration at path {f['path'] or '-'}: {f['error']}: {f['detail']}"
    return doc


def _chart_for(args):
    pair = _pair(args)
    return pair, random_nice_chart(pair, random.Random(args.seed))


def cmd_matroid(args):
    from .dmatroid import feasible_sets
    pair, A = _chart_for(args)
    D = feasible_sets(A)
    return {"pair": pair.to_json(), "seed": args.seed, "feasible_count": len(D.feasible),
            "feasible": [signs_to_str(s) for s in sorted(D.sign_vectors(), reverse=True)]}


def cmd_polytope(args):
    from .dmatroid import (
        RankOracle, affine_dimension, check_point, polytope_H, polytope_V, vertex_lattice_index,
    )
    pair, A = _chart_for(args)
    R = RankOracle(A)
    H, V = polytope_H(R), polytope_V(A)
    doc = {"pair": pair.to_json(), "seed": args.seed, "constraints": H.to_json(),
           "vertices": V.to_json(), "affine_dimension": affine_dimension(V)}
    if len(V.vertices) > 1:
        doc["lattice_index"] = vertex_lattice_index(V)
    if args.point is not None:
        x = _point(args, pair.n)
        bad, tight = check_point(H, x)
        doc["point"] = {"x": [str(v) for v in x], "member": bad is None,
                        "violated": None if bad is None else signs_to_str(bad), "tight": tight}
    return doc


# ---------------------------------------------------------------------------
# verify

def verify_decomposition(args):
    from .decomp import LeafPolytopes, assign_region, coverage_test, verify_membership
    n = _need_n(args)
    if args.point is not None:
        x = _point(args, n)
        try:
            ra = assign_region(n, x)
        except (BoundaryPoint, ValueError) as exc:
            raise UsageError("--point", str(exc)) from None
        leaves = LeafPolytopes(n, args.seed)
        member, bad = verify_membership(x, leaves.polytope(ra.I))
        checks = [_check("dual-inequalities", True, "checked" if ra.dual_checked else "skipped on a face"),
                  _check("membership", member, None if bad is None else signs_to_str(bad))]
        return _verify_doc("decomposition", checks, n=n, assignment=ra.to_json())
    if args.grid < 2:
        raise UsageError("--grid", "denominator must be at least 2")
    rep = coverage_test(n, args.grid, seed=args.seed, samples=args.samples)
    checks = [
        _check("all-points-assigned", not rep.boundary, f"{len(rep.boundary)} boundary points"),
        _check("membership", not rep.membership_failures,
               f"{len(rep.membership_failures)} failures"),
        _check("interior-count-one", not rep.interior_failures,
               f"{len(rep.interior_failures)} points not in exactly one interior"),
        # assign_region raises on a failing dual inequality, so reaching here means all held
        _check("dual-inequalities", True,
               f"{sum(1 for x in rep.samples if x['dual_checked'])} assignments checked"),
    ]
    if args.summary:
        return rep.to_markdown()
    return _verify_doc("decomposition", checks, report=rep.to_json())


def verify_multiplicity(args):
    from .degen import cascade
    from .dmatroid import polytope_V, index_two_matrix, vertex_lattice_index
    n = _need_n(args)
    rep = cascade(n, args.seed)
    mult = {",".join(map(str, lf["pair"].I)) or "-": lf["multiplicity"] for lf in rep.leaves}
    control = vertex_lattice_index(polytope_V(index_two_matrix()))
    checks = [_check("cascade-coherent", rep.ok, None if rep.ok else rep.failures[0]["detail"]),
              _check("leaf-count", len(rep.leaves) == 2 ** (n - 1), f"{len(rep.leaves)} leaves"),
              _check("every-leaf-index-one", all(v == 1 for v in mult.values()),
                     ", ".join(f"{k}:{v}" for k, v in sorted(mult.items()) if v != 1) or None),
              _check("control-index-two", control == 2, f"index {control}")]
    if args.summary:
        lines = ["| leaf I | w(I) | multiplicity |", "|---|---|---|"]
        for lf in rep.leaves:
            lines.append(f"| {_subset(lf['pair'].I)} | {codim_w(lf['pair'].I)} | {lf['multiplicity']} |")
        return "\n".join(lines) + "\n"
    return _verify_doc("multiplicity", checks, n=n, seed=args.seed, multiplicities=mult,
                       control_index=control)


def verify_polytopes_same(args):
    from .dmatroid import enumerate_vertices, polytope_H, polytope_V, random_isotropic
    n = _need_n(args, lo=1, hi=4)
    rng = random.Random(args.seed)
    count = args.samples or 50
    mismatches = []
    for i in range(count):
        A = random_isotropic(n, rng) if n >= 2 else None
        if A is None:
            raise UsageError("--n", "must be at least 2")
        verts = enumerate_vertices(polytope_H(A))
        chis = {tuple(Fraction(v) for v in c) for c in polytope_V(A).vertices}
        if verts != chis:
            mismatches.append(i)
    checks = [_check("vertex-sets-equal", not mismatches,
                     f"{len(mismatches)} of {count} points differ")]
    return _verify_doc("polytopes-same", checks, n=n, points=count)


def verify_formula(args):
    from .decomp import class_formula
    n = _need_n(args)
    try:
        terms = class_formula(n)
        checks = [_check("term-count", True, f"{len(terms)} terms"),
                  _check("codimension-sums", True, f"each w(I)+w(I^c) = {n * (n - 1) // 2}"),
                  _check("richardson-dimension", True, f"each dimension = {n}")]
    except VerificationFailure as exc:
        terms = []
        checks = [_check("class-formula-terms", False, str(exc))]
    return _verify_doc("formula", checks, n=n, terms=terms)


def appendix_checks(n: int, seed: int, points: int = 20, bisub_pairs: int = 1000,
                    sampled: int = 1000, plus_j_trials: int = 500) -> list:
    from .decomp import LeafPolytopes
    from .dmatroid import (
        RankOracle, bisubmodular_violations, check_rank_plus_j, feasible_sets, random_admissible,
        random_isotropic, rank_via_matroid, split_rank_violations,
    )
    rng = random.Random(seed)
    oracles = [RankOracle(random_isotropic(n, rng)) for _ in range(points)]

    bad_rank = 0
    for R in oracles:
        D = feasible_sets(R)
        if n <= 4:
            sets = [S for S in enumerate_admissible(n) if any(S)]
        else:
            sets = [random_admissible(n, rng) for _ in range(sampled)]
        bad_rank += sum(1 for S in sets if R.rank(S) != rank_via_matroid(D, S))

    bad_bisub = sum(len(bisubmodular_violations(R, bisub_pairs, rng)) for R in oracles)

    bad_split = 0
    if n <= 4:
        leaves = LeafPolytopes(n, seed, check_independence=False)
        for I in leaves.all_leaves():
            bad_split += len(split_rank_violations(leaves.chart(I)))

    bad_plus_j = 0
    for _ in range(plus_j_trials):
        R = rng.choice(oracles)
        S = list(random_admissible(n, rng))
        free = [q for q in range(1, n + 1) if not S[q - 1]]
        J = [q for q in free if rng.random() < 0.5]
        try:
            out = check_rank_plus_j(R, S, J)
            if R.rank(out) != R.rank(S) + len(J):
                bad_plus_j += 1
        except ValueError:
            bad_plus_j += 1

    checks = [_check("rank-equals-matroid-max", bad_rank == 0, f"{bad_rank} discrepancies"),
              _check("bisubmodular", bad_bisub == 0, f"{bad_bisub} violating pairs")]
    if n <= 4:
        checks.append(_check("split-rank-on-leaf-charts", bad_split == 0, f"{bad_split} violations"))
    checks.append(_check("rank-plus-J-witness", bad_plus_j == 0, f"{bad_plus_j} failures"))
    return checks


def verify_appendix(args):
    n = _need_n(args)
    checks = appendix_checks(n, args.seed, points=args.samples or 20)
    return _verify_doc("appendix", checks, n=n, seed=args.seed)


VERIFY = {
    "decomposition": verify_decomposition,
    "multiplicity": verify_multiplicity,
    "polytopes-same": verify_polytopes_same,
    "formula": verify_formula,
    "appendix": verify_appendix,
}

COMMANDS = {
    "tree": cmd_tree, "shape": cmd_shape, "solve": cmd_solve, "degenerate": cmd_degenerate,
    "cascade": cmd_cascade, "matroid": cmd_matroid, "polytope": cmd_polytope,
}


# ---------------------------------------------------------------------------
# output

def _md_value(v):
    if isinstance(v, (dict, list)):
        return "`" + json.dumps(v, sort_keys=True) + "`"
    return str(v)


def to_markdown(doc) -> str:
    lines = []
    if "statement" in doc:
        lines += [f"# {doc['statement']}", ""]
    for key in sorted(doc):
        v = doc[key]
        if key == "statement":
            continue
        if isinstance(v, list) and v and all(isinstance(r, dict) for r in v):
            cols = sorted({c for r in v for c in r})
            lines += ["", f"## {key}", "", "| " + " | ".join(cols) + " |",
                      "|" + "---|" * len(cols)]
            for r in v:
                lines.append("| " + " | ".join(_md_value(r.get(c, "")) for c in cols) + " |")
            lines.append("")
        elif key == "rows" and isinstance(v, list):
            lines += ["", "```", *v, "```", ""]
        else:
            lines.append(f"- **{key}**: {_md_value(v)}")
    return "\n".join(lines).rstrip() + "\n"


def render(doc, fmt: str) -> str:
    if isinstance(doc, str):
        return doc
    if fmt == "md":
        return to_markdown(doc)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def first_failure(doc):
    if isinstance(doc, str) or doc.get("ok", True):
        return None
    if "failed_check" in doc:
        return doc["failed_check"]
    for c in doc.get("checks", []):
        if not c["ok"]:
            head = doc.get("statement", doc.get("command", "check"))
            return f"{head}: {c['name']}" + (f" ({c['detail']})" if c.get("detail") else "")
    return "verification failed"


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="dimension n of OG(n, 2n+1)")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    common.add_argument("--pair", help='allowed pair "I;Iprime", e.g. "4,6,7;1,3,5"')
    common.add_argument("--point", help='rational point "x1,...,xn"')
    common.add_argument("--grid", type=int, default=5, help="grid denominator (default 5)")
    common.add_argument("--samples", type=int, help="number of random samples")
    common.add_argument("--format", choices=("json", "md"), default="json")
    common.add_argument("--summary", action="store_true", help="emit a Markdown summary table")
    common.add_argument("--dump-matrices", action="store_true", help="include matrices in the output")
    common.add_argument("--out", help="also write the output to this file")

    parser = argparse.ArgumentParser(
        prog="ogdegen",
        description="Exact charts, torus degenerations and delta-matroid polytopes for OG(n, 2n+1).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "tree": "list the tree of allowed pairs",
        "shape": "symbol grid of a chart",
        "solve": "random nice chart point",
        "degenerate": "one degeneration step with both limits",
        "cascade": "full degeneration cascade from the root",
        "matroid": "feasible sets of a chart point",
        "polytope": "inequality and vertex description of a chart point's polytope",
    }
    for name, h in helps.items():
        sub.add_parser(name, parents=[common], help=h)
    ver = sub.add_parser("verify", help="run a named verification")
    vsub = ver.add_subparsers(dest="check", required=True)
    vhelp = {
        "decomposition": "leaf polytopes cover [0,1]^n with disjoint interiors",
        "multiplicity": "every leaf polytope has vertex lattice index 1",
        "polytopes-same": "vertex hull equals the inequality polytope (n <= 4)",
        "formula": "codimension and dimension bookkeeping of the class formula",
        "appendix": "rank, bisubmodularity, split-rank and rank-plus-J properties",
    }
    for name, ident in STATEMENTS.items():
        vsub.add_parser(name, parents=[common], help=f"{vhelp[name]} [{ident}]")
    return parser


def run(argv=None) -> tuple:
    """(exit code, output text, message for stderr or None).

    argparse's own usage errors exit directly with status 2.
    """
    args = build_parser().parse_args(argv)
    code, text, msg = _dispatch(args)
    if text and args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code, text, msg


def _dispatch(args):
    if args.samples is not None and args.samples < 1:
        return 2, "", "error: --samples: must be positive"
    handler = VERIFY[args.check] if args.command == "verify" else COMMANDS[args.command]
    try:
        doc = handler(args)
    except UsageError as exc:
        return 2, "", f"error: {exc}"
    except (VerificationFailure, NotNice) as exc:
        label = STATEMENTS.get(getattr(args, "check", None), args.command)
        return 1, "", f"verification failed: {label}: {type(exc).__name__}: {exc}"
    except OgdegenError as exc:
        return 1, "", f"verification failed: {args.command}: {type(exc).__name__}: {exc}"
    text = render(doc, args.format)
    failure = first_failure(doc)
    return (1 if failure else 0), text, (f"verification failed: {failure}" if failure else None)


def main(argv=None) -> int:
    code, text, msg = run(argv)
    if text:
        sys.stdout.write(text)
    if msg:
        print(msg, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
