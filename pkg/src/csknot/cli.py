"""Command-line interface.

Exit codes: 0 success or equivalent, 2 not CS or a failed verification,
3 not equivalent, 4 unknown, 64 parse error, 65 shape error.

Text formats: a polynomial is whitespace-separated ascending integer
coefficients; a matrix is one row per line.  Lines starting with ``#`` are
ignored.  ``CSKNOT_BUDGET_MS`` caps the compute time of each classify run
and of each sweep row.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from fractions import Fraction
from pathlib import Path

from . import linalg as la
from .classes import DEFAULT_ENUM_CAP, ClassList, Status, class_monoid
from .correspondence import _certify_irreducible, ideal_to_matrix, star_equivalent
from .cs import is_cs_matrix, is_cs_polynomial
from .errors import CsknotError, NonSquareError, ParseError
from .families import family, family_polynomial, verify_family_theorem
from .order import Order, Tri, is_integrally_closed, minkowski_bound
from .poly import IntPoly

EXIT_OK = 0
EXIT_NOT_CS = 2
EXIT_NOT_EQUIVALENT = 3
EXIT_UNKNOWN = 4
EXIT_PARSE = 64
EXIT_SHAPE = 65

# classify falls back to a lower-bound run above this Minkowski bound
CERTIFY_CAP = 2000
LOWER_BOUND_NORM = 50
DEFAULT_BUDGET_MS = 120_000

CONVENTIONS = {"coeff_order": "ascending", "hnf": "row-upper", "companion_last_row": "negated ascending coefficients"}


class ShapeError(CsknotError, ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing


def _tokens(text: str) -> list[str]:
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    return " ".join(lines).split()


def parse_poly(text: str) -> IntPoly:
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty polynomial")
    try:
        coeffs = [int(t) for t in toks]
    except ValueError as exc:
        raise ParseError(f"bad coefficient: {exc}") from None
    f = IntPoly(coeffs)
    if f.degree < 2 or not f.is_monic():
        raise ShapeError(f"need a monic polynomial of degree >= 2, got {f}")
    return f


def parse_matrix(text: str) -> la.Matrix:
    rows = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        try:
            rows.append([int(t) for t in ln.replace(",", " ").split()])
        except ValueError as exc:
            raise ParseError(f"bad matrix entry: {exc}") from None
    if not rows:
        raise ParseError("empty matrix")
    if len({len(r) for r in rows}) != 1:
        raise ParseError("rows have different lengths")
    if len(rows) != len(rows[0]):
        raise NonSquareError(f"matrix is {len(rows)} x {len(rows[0])}")
    return rows


def format_poly(f: IntPoly) -> str:
    return " ".join(str(c) for c in f.coeffs)


def format_matrix(m: la.Matrix) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in m)


def _read(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text()


def _poly_from_args(args) -> IntPoly:
    if getattr(args, "family", None) is not None:
        if args.a is None:
            raise ParseError("--family needs --a")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return family_polynomial(args.family, args.a)
    if args.file:
        return parse_poly(_read(args.file))
    if not args.coeffs:
        raise ParseError("no polynomial given")
    return parse_poly(" ".join(args.coeffs))


# ---------------------------------------------------------------------------
# output


def _emit(args, payload, text: str, rows: list[dict] | None = None) -> None:
    fmt = args.format
    if fmt == "json":
        out = json.dumps(payload, indent=2, sort_keys=False, default=_json_default) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        rows = rows if rows is not None else [_flatten(payload)]
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else [], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        out = buf.getvalue()
    else:
        out = text.rstrip("\n") + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, IntPoly):
        return list(x.coeffs)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _flatten(d: dict) -> dict:
    return {k: (json.dumps(v, default=_json_default) if isinstance(v, (list, dict)) else v) for k, v in d.items()}


def _budget_deadline(args) -> float | None:
    ms = args.budget_ms
    if ms is None:
        env = os.environ.get("CSKNOT_BUDGET_MS")
        ms = int(env) if env else DEFAULT_BUDGET_MS
    return time.monotonic() + ms / 1000 if ms > 0 else None


# ---------------------------------------------------------------------------
# subcommands


def _cs_text(rep) -> str:
    lines = [f"charpoly: {rep.charpoly}", f"det: {rep.det}"]
    for k, d, ok in rep.cs_conditions:
        lines.append(f"det(I - wedge^{k} A) = {d}  {'ok' if ok else 'FAIL'}")
    lines.append(f"CS: {'yes' if rep.is_cs else 'no'}")
    pos = rep.is_positive
    lines.append(f"positive: {'n/a' if pos is None else ('yes' if pos else 'no')}")
    return "\n".join(lines)


def cmd_verify_poly(args) -> int:
    f = _poly_from_args(args)
    rep = is_cs_polynomial(f)
    payload = {"polynomial": list(f.coeffs), "conventions": CONVENTIONS, **rep.to_dict()}
    _emit(args, payload, f"polynomial: {f}\n" + _cs_text(rep))
    return EXIT_OK if rep.is_cs else EXIT_NOT_CS


def cmd_verify_matrix(args) -> int:
    m = parse_matrix(_read(args.matrix))
    rep = is_cs_matrix(m)
    annihilated = la.is_zero(la.poly_at_matrix(rep.charpoly.coeffs, m))
    payload = {"matrix": m, "conventions": CONVENTIONS, **rep.to_dict(), "charpoly_annihilates": annihilated}
    _emit(args, payload, _cs_text(rep) + f"\nf(A) = O: {'yes' if annihilated else 'no'}")
    return EXIT_OK if rep.is_cs else EXIT_NOT_CS


def cmd_family(args) -> int:
    rep = verify_family_theorem(args.n, args.l)
    fam = family(args.n)
    in_range = fam.l_ok(args.l)
    payload = {**rep.to_dict(), "l_range": fam.l_range, "l_in_range": in_range}
    lines = [f"n = {rep.n}, l = {rep.l}, a = {rep.a}" + ("" if in_range else f" (outside {fam.l_range})"), f"f = {rep.polynomial}"]
    for i, m in enumerate(rep.matrices, 1):
        lines.append(f"m{i} =\n{format_matrix(m)}")
    for c in rep.checks:
        lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if rep.passed else EXIT_NOT_CS


def default_norm_bound(o: Order, closure) -> tuple[int, bool]:
    """Minkowski bound when it is certifiable and small, else a lower-bound run."""
    if closure.verdict == Tri.YES:
        mb = math.ceil(minkowski_bound(o, closure))
        if mb <= CERTIFY_CAP:
            return max(mb, 1), True
    return LOWER_BOUND_NORM, False


def classify_payload(o: Order, cl: ClassList, with_matrices: bool = True) -> dict:
    reps = []
    for k, (rep, inv) in enumerate(zip(cl.representatives, cl.invertible)):
        entry = {"index": k, "norm": rep.norm, "invertible": inv, "hnf": rep.rows()}
        if with_matrices:
            m = ideal_to_matrix(o, rep)
            entry["matrix"] = m
            entry["cs"] = is_cs_matrix(m).is_cs
        reps.append(entry)
    if cl.table is not None:
        orders = []
        ident = 0
        for g in range(cl.count):
            k, x = 1, g
            while x is not None and x != ident and k <= cl.count:
                x = cl.table[x][g]
                k += 1
            orders.append(k if x == ident else None)
    else:
        orders = None
    status = "complete" if cl.complete else "incomplete, lower bound"
    return {
        "polynomial": list(o.f.coeffs),
        "conventions": CONVENTIONS,
        "discriminant": o.disc,
        "signature": list(o.signature),
        "integrally_closed": cl.closure.verdict.value,
        "failing_primes": list(cl.closure.failing_primes),
        "minkowski_bound": None if cl.minkowski is None else str(cl.minkowski),
        "norm_bound": cl.norm_bound,
        "status": status,
        "complete": cl.complete,
        "is_group": cl.is_group and cl.closure.verdict == Tri.YES,
        "not_a_group": not cl.is_group,
        "count": cl.count,
        "certified_lower_bound": cl.certified_lower_bound,
        "truncated": cl.truncated,
        "unresolved_pairs": [list(p) for p in cl.unresolved],
        "structure": cl.structure_str() if cl.structure is not None else None,
        "element_orders": orders,
        "table": cl.table,
        "routes": dict(sorted(cl.routes.items())),
        "representatives": reps,
    }


def cmd_classify(args) -> int:
    f = _poly_from_args(args)
    _certify_irreducible(f)
    o = Order(f)
    closure = is_integrally_closed(o, args.factor_budget, seed=args.seed)
    bound = args.norm_bound
    if bound is None:
        bound, _ = default_norm_bound(o, closure)
    deadline = _budget_deadline(args)
    cl = class_monoid(o, bound, radius=args.radius, deadline=deadline, closure=closure, enum_cap=args.enum_cap)
    payload = classify_payload(o, cl)
    lines = [
        f"f = {f}",
        f"disc = {o.disc}, signature = {o.signature}",
        f"integrally closed: {closure.verdict.value}" + (f" (fails at {list(closure.failing_primes)})" if closure.failing_primes else ""),
        f"Minkowski bound: {payload['minkowski_bound']}",
        f"norm bound used: {bound}",
        f"classes: {cl.count} ({payload['status']})",
        f"certified pairwise distinct: {cl.certified_lower_bound}",
    ]
    if not cl.is_group:
        lines.append("not a group: non-invertible classes present")
    if cl.structure is not None:
        lines.append(f"structure: {cl.structure_str()}")
    for r in payload["representatives"]:
        lines.append(f"  [{r['index']}] norm {r['norm']} invertible={r['invertible']} hnf={r['hnf']}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def sweep_row(n: int, a: int, norm_bound: int | None, bound_scale: int, radius: int, budget_ms: int | None, factor_budget: int, seed: int) -> dict:
    row = {"a": a, "integrally_closed": "", "class_count_or_lower_bound": "", "complete": False, "not_a_group": False, "norm_bound": "", "structure": "", "error": ""}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            f = family_polynomial(n, a)
        o = Order(f)
        closure = is_integrally_closed(o, factor_budget, seed=seed)
        row["integrally_closed"] = closure.verdict.value
        bound = norm_bound if norm_bound is not None else default_norm_bound(o, closure)[0]
        bound *= bound_scale
        row["norm_bound"] = bound
        deadline = time.monotonic() + budget_ms / 1000 if budget_ms else None
        cl = class_monoid(o, bound, radius=radius, deadline=deadline, closure=closure)
        row["complete"] = cl.complete
        row["not_a_group"] = closure.verdict != Tri.YES or not cl.is_group
        row["class_count_or_lower_bound"] = cl.count if cl.complete else cl.certified_lower_bound
        row["structure"] = cl.structure_str() if cl.structure is not None else ""
    except CsknotError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_sweep(args) -> int:
    budget = args.budget_ms
    if budget is None:
        env = os.environ.get("CSKNOT_BUDGET_MS")
        budget = int(env) if env else DEFAULT_BUDGET_MS
    a_values = list(range(args.a_min, args.a_max + 1))
    params = [(args.n, a, args.norm_bound, args.bound_scale, args.radius, budget, args.factor_budget, args.seed) for a in a_values]
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(_sweep_star, params))
    else:
        rows = [sweep_row(*p) for p in params]
    rows.sort(key=lambda r: r["a"])
    text_lines = ["a,integrally_closed,class_count_or_lower_bound,complete,not_a_group"]
    for r in rows:
        text_lines.append(f"{r['a']},{r['integrally_closed']},{r['class_count_or_lower_bound']},{r['complete']},{r['not_a_group']}")
    if args.format == "text":
        args.format = "csv"
    _emit(args, {"rows": rows}, "\n".join(text_lines), rows=rows)
    return EXIT_OK


def _sweep_star(p):
    return sweep_row(*p)


def cmd_star_eq(args) -> int:
    a = parse_matrix(_read(args.a))
    b = parse_matrix(_read(args.b))
    if len(a) != len(b):
        raise ShapeError("matrices have different orders")
    v = star_equivalent(a, b, radius=args.radius, coeff_box=args.box)
    payload = v.to_dict()
    text = f"{v.verdict.value} via {v.route.value}" + (f" (inverted b)" if v.inverted else "")
    if v.witness is not None:
        text += f"\nwitness: {payload['witness']}"
    _emit(args, payload, text)
    return {Status.EQUIVALENT: EXIT_OK, Status.NOT_EQUIVALENT: EXIT_NOT_EQUIVALENT}.get(v.verdict, EXIT_UNKNOWN)


# ---------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser, default_format: str = "text") -> None:
    p.add_argument("--format", choices=["json", "csv", "text"], default=default_format)
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--seed", type=int, default=1, help="seed for randomized factor splitting")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--factor-budget", type=int, default=10**6, help="trial-division bound for the discriminant")
    p.add_argument("--budget-ms", type=int, default=None, help="overrides CSKNOT_BUDGET_MS; 0 disables")


def _add_poly_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("coeffs", nargs="*", help="ascending integer coefficients")
    p.add_argument("--file", help="read coefficients from a file ('-' for stdin)")
    p.add_argument("--family", type=int, choices=[4, 5, 6, 7], help="use a family polynomial")
    p.add_argument("--a", type=int, help="family parameter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csknot", description="Cappell-Shaneson matrices and ideal classes of Z[theta].")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-poly", help="CS conditions and positivity of a polynomial")
    _add_poly_source(p)
    _add_common(p)
    p.set_defaults(func=cmd_verify_poly)

    p = sub.add_parser("verify-matrix", help="CS conditions of a matrix file")
    p.add_argument("matrix", help="matrix file ('-' for stdin)")
    _add_common(p)
    p.set_defaults(func=cmd_verify_matrix)

    p = sub.add_parser("family", help="verify a family theorem at parameter l")
    p.add_argument("--n", type=int, required=True, choices=[4, 5, 6, 7])
    p.add_argument("--l", type=int, required=True)
    _add_common(p, "json")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("classify", help="ideal classes of Z[theta]")
    _add_poly_source(p)
    p.add_argument("--norm-bound", type=int, default=None)
    p.add_argument("--radius", type=int, default=5)
    p.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP)
    _add_common(p, "json")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="class counts across a family parameter range (CSV)")
    p.add_argument("--n", type=int, required=True, choices=[4, 5, 6, 7])
    p.add_argument("--a-min", type=int, required=True)
    p.add_argument("--a-max", type=int, required=True)
    p.add_argument("--norm-bound", type=int, default=None)
    p.add_argument("--bound-scale", type=int, default=1, help="multiply every row's norm bound")
    p.add_argument("--radius", type=int, default=5)
    _add_common(p, "csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("star-eq", help="decide *-equivalence of two matrices")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--radius", type=int, default=5)
    p.add_argument("--box", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_star_eq)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NonSquareError, ShapeError) as exc:
        print(f"shape error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CsknotError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SHAPE


if __name__ == "__main__":
    sys.exit(main())
