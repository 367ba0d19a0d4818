"""Command-line front end.

Exit status: 0 when every requested check passes, 1 when a check fails,
2 on usage or input errors. JSON output is canonical (sorted keys, exact
scalar strings); text output is a human summary of the same report.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import bialgebra, cybe, dnalg, series, stolin
from .algebra import (
    MetricAlgebra,
    as_array,
    casimir_gamma,
    category_predicates,
    check_gamma_invariance,
    is_zero,
    matrix_algebra,
    named_algebra,
    to_lists,
)
from .errors import AcybeError, ParseError, PoleDoesNotCancel
from .scalars import Cyclotomic, format_scalar

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

KINDS = ("rational", "quasi-rational", "quasi-trig", "trig")
CATEGORIES = ("associative", "lie", "jordan")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- I/O helpers


def _plain(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, Fraction, Cyclotomic)):
        return format_scalar(x)
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _plain_report(x):
    """Like _plain but keeps ints and bools of report fields as JSON numbers."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (Fraction, Cyclotomic)):
        return format_scalar(x)
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, dict):
        return {str(k): _plain_report(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain_report(v) for v in x]
    return str(x)


def canonical_json(doc) -> str:
    return json.dumps(_plain_report(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("acybe") / "data" / name))


def load_json(path: str):
    p = bundled_path(path[len("bundled:"):]) if path.startswith("bundled:") else Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_algebra(spec: str) -> MetricAlgebra:
    """A name such as matrix:2, or a path to an algebra document."""
    if spec.startswith("bundled:") or spec.endswith(".json"):
        return named_algebra(load_json(spec))
    return named_algebra(spec)


def load_solution(path: str) -> cybe.StandardFormSeries:
    doc = load_json(path)
    try:
        return cybe.solution_from_json(doc)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def load_bialgebra(path: str) -> bialgebra.FiniteBialgebra:
    """{"algebra": ..., "delta": [[[s]]]} or {"algebra": ..., "coboundary": [[s]], "co_opposite"?: bool}."""
    doc = load_json(path)
    try:
        M = named_algebra(doc["algebra"])
        if "delta" in doc:
            B = bialgebra.FiniteBialgebra(M.algebra, as_array(doc["delta"]), M.gram)
        else:
            B = bialgebra.coboundary(M, as_array(doc["coboundary"]))
            B.gram = M.gram
        if doc.get("co_opposite"):
            B = B.co_opposite()
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed bialgebra document: {exc}") from exc
    return B


def _window(text: str):
    try:
        parts = [int(p) for p in text.strip("[]() ").split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like -4,4, got {text!r}")
    if len(parts) != 2 or parts[0] > parts[1]:
        raise argparse.ArgumentTypeError(f"window must be two increasing integers v,N, got {text!r}")
    return tuple(parts)


def _order(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be an integer, got {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError("order must be non-negative")
    return n


# ---------------------------------------------------------------- commands


def cmd_gamma(args):
    M = load_algebra(args.algebra)
    ok = check_gamma_invariance(M)
    report = {"algebra": M.name, "dim": M.dim, "gamma": to_lists(casimir_gamma(M)), "invariant": ok}
    text = [f"algebra {M.name} (dim {M.dim})", f"gamma invariant: {ok}"]
    return ok, report, text


def cmd_verify(args):
    r = load_solution(args.input)
    report = cybe.verify(r, args.order, args.equation)
    report["form"] = r.to_text()
    ok = report["first_nonzero"] is None
    text = [r.to_text(), f"{args.equation}: verified through degree {report['verified_through_degree']} "
            f"(order {args.order})"]
    if not ok:
        first = report["first_nonzero"]
        text.append(f"first nonzero coefficient at exponent {first['exp']} (degree {first['degree']})")
    return ok, report, text


def cmd_build_stolin(args):
    if args.kind not in ("rational", "quasi-rational"):
        raise UsageError("build-stolin supports --kind rational or quasi-rational")
    pair = stolin.pair_from_json(load_json(args.input))
    check = stolin.check_stolin_pair(pair)
    if not check:
        return False, {"pair": check.as_dict()}, [f"invalid Stolin pair: {check.first_failure}"]
    build = stolin.rational_from_pair if args.kind == "rational" else stolin.quasi_rational_from_pair
    r = build(pair, args.order)
    doc = cybe.solution_to_json(r)
    report = {"pair": check.as_dict(), "kind": args.kind, "form": r.to_text(),
              "verification": cybe.verify(r, args.order, "cybe"), "solution": doc}
    text = [f"{args.kind} solution of type {r.type_text()}: {r.to_text()}",
            f"cybe verified through degree {report['verification']['verified_through_degree']}"]
    if args.out:
        Path(args.out).write_text(canonical_json(doc))
        text.append(f"written to {args.out}")
    return True, report, text


def cmd_convert(args):
    doc = load_json(args.input)
    if "tails" in doc:
        if not args.algebra:
            raise UsageError("converting a WBasis needs --algebra")
        M = load_algebra(args.algebra)
        W = dnalg.wbasis_from_json(doc, M)
        r = cybe.subspace_to_series(W)
        out = cybe.solution_to_json(r)
        text = [f"series {r.to_text()}"]
    else:
        r = cybe.solution_from_json(doc)
        W = cybe.series_to_subspace(r)
        out = dnalg.wbasis_to_json(W)
        text = [f"WBasis with n={W.n}, tail bound {W.tail_bound}"]
    if args.out:
        Path(args.out).write_text(canonical_json(out))
        text.append(f"written to {args.out}")
    return True, out, text


def cmd_double(args):
    B = load_bialgebra(args.input)
    start = time.perf_counter()
    D = bialgebra.build_double(B)
    report = bialgebra.double_category(B)
    report["structure"] = D.structure_dump()
    ok = (report["ev_symmetric"] and report["ev_nondegenerate"] and report["ev_associative"]
          and report["manin_triple"]["ok"] and report.get("determines_delta", False))
    if args.category:
        ok = ok and report[args.category]
    elapsed = time.perf_counter() - start
    text = [f"double of dimension {D.algebra.dim}",
            "categories: " + (", ".join(c for c in CATEGORIES if report.get(c)) or "none"),
            f"ev metric: symmetric={report['ev_symmetric']} nondegenerate={report['ev_nondegenerate']} "
            f"associative={report['ev_associative']}",
            f"Manin triple: {report['manin_triple']['ok']}, determines delta: {report.get('determines_delta')}",
            f"({elapsed:.2f} s)"]
    return ok, report, text


def cmd_cocycle_check(args):
    category = args.category or "associative"
    top = args.window[1] if args.window else 4
    doc = load_json(args.input)
    if "delta" in doc or "coboundary" in doc:
        delta = load_bialgebra(args.input)
        source = "finite"
    else:
        r = load_solution(args.input)
        source = r.to_text()
        try:
            delta = bialgebra.delta_from_r(r, top)
        except PoleDoesNotCancel as exc:
            return False, {"source": source, "category": category, "window": top, "error": str(exc)}, [str(exc)]
    if category == "associative":
        flipped = delta.co_opposite() if isinstance(delta, bialgebra.FiniteBialgebra) else delta.flipped()
        reports = [bialgebra.check_associative_cocycle(flipped, top), bialgebra.check_balanced(flipped, top)]
    elif category == "lie":
        reports = [bialgebra.check_lie_cocycle(delta, top)]
    else:
        if not isinstance(delta, bialgebra.FiniteBialgebra):
            raise UsageError("the Jordan identities are checked on finite bialgebra documents")
        reports = [bialgebra.check_jordan_identities(delta)]
    ok = all(reports)
    report = {"source": source, "category": category, "window": top, "checks": [r.as_dict() for r in reports]}
    text = [f"{r.check}: {'pass' if r.ok else 'FAIL'} ({r.pairs} pairs)"
            + ("" if r.ok else f", first failure {r.first_failure}") for r in reports]
    return ok, report, text


def cmd_manin_check(args):
    r = load_solution(args.input)
    window = args.window or (-4, 4)
    W = cybe.series_to_subspace(r)
    P = dnalg.ResiduePairing(r.M, r.n, r.lam, general_lambda=True)
    triple = bialgebra.manin_triple_series(W, P, window)
    report = {"form": r.to_text(), "window": list(window), "manin_triple": triple.as_dict()}
    text = [r.to_text(), f"Manin triple in window {list(window)}: {'pass' if triple.ok else 'FAIL'}"]
    if not triple.ok:
        text.append(f"first failure: {triple.first_failure}")
    return triple.ok, report, text


# ---------------------------------------------------------------- demo


def _demo_steps(order: int):
    """(name, callable returning bool) covering every module."""
    M1, M2 = matrix_algebra(1), matrix_algebra(2)
    t0 = np.zeros((4, 4), dtype=object)
    t0[0, 1], t0[1, 0] = 1, -1
    yang = cybe.StandardFormSeries(M2)
    const = cybe.StandardFormSeries(M2, 0, None, cybe.constant_tail(M2, t0))
    pair = stolin.pair_from_json(load_json("bundled:pair_m2.json"))
    state = {}

    def scalars_step():
        z = Cyclotomic(3, [0, 1])
        return z ** 3 == 1 and format_scalar(Fraction(-1, 2)) == "-1/2"

    def gamma_step():
        names = ("matrix:1", "matrix:2", "lie:sl_2", "jordan:sym_2")
        return all(check_gamma_invariance(named_algebra(n)) for n in names)

    def categories_step():
        rep = category_predicates(named_algebra("lie:sl_2").algebra)
        return rep.lie and not rep.associative

    def series_step():
        B = series.bernoulli_expansion(4)
        return B.coeff(-1) == 1 and B.coeff(0) == Fraction(-1, 2) and B.coeff(1) == Fraction(1, 12)

    def pole_step():
        return all(dnalg.check_pole_expansion(n, 3) for n in range(4))

    def yang_step():
        return cybe.verify(yang, order)["first_nonzero"] is None

    def constant_step():
        return (is_zero(cybe.constant_cyb(M2.algebra, t0))
                and cybe.verify(const, order)["first_nonzero"] is None and cybe.is_skew(const))

    def corrupted_step():
        bad = cybe.solution_from_json(load_json("bundled:corrupted_m2.json"))
        return cybe.verify(bad, order)["first_nonzero"] is not None

    def convert_step():
        return cybe.subspace_to_series(cybe.series_to_subspace(const)) == const

    def stolin_step():
        r = stolin.rational_from_pair(pair, order)
        q = stolin.quasi_rational_from_pair(pair, order)
        state["q"] = q
        return stolin.pair_from_solution(r, 0) == pair and stolin.pair_from_solution(q, 0) == pair

    def pairing_step():
        q = state["q"]
        P = dnalg.ResiduePairing(M2, 2)
        return (cybe.orthogonality_check(q, P, (-2, 2)).ok
                and cybe.gcyb_pairing_identity(const, dnalg.ResiduePairing(M2, 0), (-1, 1)).ok)

    def normalize_step():
        a = series.Series({(1, 1): 1}, 2)
        r = cybe.normalize_type(a, const.tail, M2)
        return r.n == 2 and cybe.verify(r, 4)["first_nonzero"] is None

    def gauge_step():
        phi = series.Series({(0,): np.eye(1, dtype=object)}, 1, series.INF, (1, 1))
        u = series.Series({(1,): 2}, 1)
        r = cybe.gauge_transform(cybe.StandardFormSeries(M1), cybe.GaugeData(phi, u), 4)
        return r.lam.terms.get((0,)) == Fraction(1, 2)

    def bialgebra_step():
        delta = bialgebra.delta_from_r(const, 3).flipped()
        return bool(bialgebra.check_associative_cocycle(delta, 3)) and bool(bialgebra.check_balanced(delta, 3))

    def double_step():
        B = bialgebra.coboundary(M2, t0)
        rep = bialgebra.double_category(B)
        return rep["manin_triple"]["ok"] and rep.get("determines_delta", False)

    def manin_series_step():
        q = state["q"]
        return bool(bialgebra.manin_triple_series(cybe.series_to_subspace(q), dnalg.ResiduePairing(M2, 2), (-2, 2)))

    def trig_step():
        data = cybe.TrigFormData(np.eye(4, dtype=object), 1)
        r = cybe.emit_standard_form("trig", data, M2, 4)
        return cybe.verify(r, 3)["first_nonzero"] is not None

    return [
        ("scalars: cyclotomic arithmetic", scalars_step),
        ("algebra: gamma invariance", gamma_step),
        ("algebra: category predicates", categories_step),
        ("series: Bernoulli expansion", series_step),
        ("dnalg: pole expansion", pole_step),
        ("cybe: Yang solution over M_2", yang_step),
        ("cybe: constant tail e11(x)e12 - e12(x)e11", constant_step),
        ("cybe: corrupted solution is rejected", corrupted_step),
        ("cybe: series <-> subspace round trip", convert_step),
        ("stolin: rational and quasi-rational round trips", stolin_step),
        ("cybe: orthogonality and GCYB pairing identity", pairing_step),
        ("cybe: normalization to type (2,1)", normalize_step),
        ("cybe: gauge action", gauge_step),
        ("bialgebra: associative cocycle and balance", bialgebra_step),
        ("bialgebra: classical double", double_step),
        ("bialgebra: Manin triple over series", manin_series_step),
        ("cybe: trigonometric candidate is not a solution", trig_step),
    ]


def cmd_demo(args):
    results = []
    for name, step in _demo_steps(args.order):
        start = time.perf_counter()
        try:
            ok, error = bool(step()), None
        except AcybeError as exc:
            ok, error = False, f"{type(exc).__name__}: {exc}"
        results.append({"step": name, "ok": ok, "error": error, "seconds": round(time.perf_counter() - start, 3)})
    ok = all(r["ok"] for r in results)
    text = [f"{'pass' if r['ok'] else 'FAIL'}  {r['step']}" + (f" ({r['error']})" if r["error"] else "")
            for r in results]
    report = {"order": args.order, "steps": [{"step": r["step"], "ok": r["ok"], "error": r["error"]} for r in results]}
    return ok, report, text


# ---------------------------------------------------------------- entry point


COMMANDS = {
    "gamma": cmd_gamma,
    "verify": cmd_verify,
    "build-stolin": cmd_build_stolin,
    "convert": cmd_convert,
    "double": cmd_double,
    "cocycle-check": cmd_cocycle_check,
    "manin-check": cmd_manin_check,
    "demo": cmd_demo,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acybe", description="A-CYBE solutions, bialgebras and Stolin pairs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=_order, default=6, help="degree through which series are checked")
    common.add_argument("--window", type=_window, help="degree window v,N (write --window=-4,4)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the produced document to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", parents=[common], help="canonical invariant element and its invariance")
    p.add_argument("algebra", help="name like matrix:2 or an algebra JSON path")
    p = sub.add_parser("verify", parents=[common], help="check the CYBE or GCYBE through --order")
    p.add_argument("input")
    p.add_argument("--equation", choices=("cybe", "gcybe"), default="cybe")
    p = sub.add_parser("build-stolin", parents=[common], help="solution from a Stolin pair")
    p.add_argument("input")
    p.add_argument("--kind", choices=KINDS, default="rational")
    p = sub.add_parser("convert", parents=[common], help="series <-> WBasis")
    p.add_argument("input")
    p.add_argument("--algebra", help="algebra of a WBasis document")
    p = sub.add_parser("double", parents=[common], help="classical double of a finite bialgebra")
    p.add_argument("input")
    p.add_argument("--category", choices=CATEGORIES, help="also require the double to lie in this category")
    p = sub.add_parser("cocycle-check", parents=[common], help="D-bialgebra axioms of delta_r or a finite delta")
    p.add_argument("input")
    p.add_argument("--category", choices=CATEGORIES)
    p = sub.add_parser("manin-check", parents=[common], help="Manin triple over D_n(A) in a window")
    p.add_argument("input")
    p = sub.add_parser("demo", parents=[common], help="run the bundled M_2 examples end to end")
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        ok, report, text = COMMANDS[args.command](args)
    except (UsageError, ParseError) as exc:
        print(f"acybe {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AcybeError as exc:
        print(f"acybe {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        stdout.write(canonical_json({"command": args.command, "ok": ok, "report": report}))
    else:
        stdout.write("\n".join(text) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
