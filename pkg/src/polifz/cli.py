"""Command-line entry point.

Exit status: 0 on success, 1 on a computation-domain error (or a failed
``verify``), 2 on a usage error.  Output is JSON unless ``--format text``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import graphs, operators, series
from .coeff import format_rational
from .polyring import LAMBDA_Q, LAMBDA_Q_HAT, Polynomial, RingError, parse_polynomial
from .verify import SUITES, run_suite

# A thread-count variable (POLIFZ_THREADS) is tolerated but unused: all work is
# sequential, so output never depends on it.

SERIES_NAMES = series.GF_NAMES + ("master", "omega", "A")


def _scalar_json(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else format_rational(c)


def _bounded(lo: int, hi: Optional[int] = None):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
        if value < lo or (hi is not None and value > hi):
            bound = f">= {lo}" if hi is None else f"in [{lo}, {hi}]"
            raise argparse.ArgumentTypeError(f"{value} must be {bound}")
        return value

    return parse


def _sigma(text: str) -> List[int]:
    if not text.strip():
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad partition {text!r}; use comma-separated parts") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polifz", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply-operator", help="apply a named operator to a polynomial")
    p.add_argument("--op", required=True, choices=sorted(operators.NAMED_OPERATORS))
    p.add_argument("--power", type=_bounded(0, 12), default=1)
    p.add_argument("--input", required=True)
    p.add_argument("--extended", action="store_true", help="work in the extended surface ring")

    p = sub.add_parser("fz-relation", help="FZ relation from the Psi series")
    p.add_argument("--genus", type=_bounded(0), required=True)
    p.add_argument("--n", type=_bounded(1, 6), required=True)
    p.add_argument("--sigma", type=_sigma, default=[])

    p = sub.add_parser("top-fz", help="top FZ relation from A(z)")
    p.add_argument("--k", type=_bounded(1, 6), required=True)
    p.add_argument("--scale", type=Fraction, default=Fraction(1))

    p = sub.add_parser("beta", help="beta coefficients from log A(9z^2)")
    p.add_argument("--max", type=_bounded(1, 6), required=True)

    p = sub.add_parser("enumerate-graphs", help="count ordered trivalent graphs by number of leaves")
    p.add_argument("--vertices", type=_bounded(0, graphs.MAX_VERTICES), required=True)
    p.add_argument("--kind", choices=graphs.KINDS, default="any")
    p.add_argument("--connected", action="store_true")
    p.add_argument("--leaf-free", action="store_true")
    p.add_argument("--leaves", type=_bounded(0))
    p.add_argument("--list", action="store_true", help="also print every graph encoding")

    p = sub.add_parser("core", help="core decomposition of an encoded graph")
    p.add_argument("--graph", required=True, help='encoding such as [2,[[0,3],[1,2],[4,5]],[]]')

    p = sub.add_parser("series", help="expand a generating function")
    p.add_argument("--name", required=True, choices=SERIES_NAMES)
    p.add_argument("--truncation", type=_bounded(0, 12), default=4)
    p.add_argument("--n", type=_bounded(0), default=0, help="n for the omega evaluation")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--k", type=_bounded(1, 2), default=1)
    return parser


def _emit_poly(f: Polynomial, fmt: str) -> str:
    return str(f) if fmt == "text" else f.dumps()


def _graph_json(g: graphs.Graph) -> dict:
    return {"vertices": g.n_vertices, "target": list(g.target), "involution": list(g.involution)}


def _run(args) -> int:
    fmt = args.format
    cmd = args.command
    if cmd == "apply-operator":
        ring = LAMBDA_Q_HAT if args.extended else LAMBDA_Q
        f = parse_polynomial(args.input, ring)
        op = operators.NAMED_OPERATORS[args.op](extended=args.extended)
        print(_emit_poly(op.apply(f, args.power), fmt))
    elif cmd == "fz-relation":
        rel = series.general_fz_relation(args.genus, args.n, args.sigma)
        print(str(rel.relation) if fmt == "text" else json.dumps(rel.to_json()))
    elif cmd == "top-fz":
        print(_emit_poly(series.top_fz_relation(args.k, args.scale), fmt))
    elif cmd == "beta":
        betas = series.beta_coefficients(args.max)
        if fmt == "text":
            print(" ".join(format_rational(b) for b in betas))
        else:
            print(json.dumps([_scalar_json(b) for b in betas]))
    elif cmd == "enumerate-graphs":
        counts = {}
        listing = []
        for g in graphs.enumerate_ordered_trivalent(
            args.vertices, kind=args.kind, connected=args.connected, leaf_free=args.leaf_free, leaves=args.leaves
        ):
            m = len(g.leaves())
            counts[m] = counts.get(m, 0) + 1
            if args.list:
                listing.append(g.encode())
        if fmt == "text":
            for m in sorted(counts):
                print(f"leaves={m} count={counts[m]}")
            for line in listing:
                print(line)
        else:
            out = {"vertices": args.vertices, "counts": {str(m): counts[m] for m in sorted(counts)}, "total": sum(counts.values())}
            if args.list:
                out["graphs"] = listing
            print(json.dumps(out))
    elif cmd == "core":
        try:
            g = graphs.Graph.decode(args.graph)
        except (ValueError, TypeError) as exc:
            raise graphs.GraphError(f"cannot decode graph: {exc}") from None
        d = graphs.core_decomposition(g)
        out = {
            "core": _graph_json(d.core),
            "insertion_forest": _graph_json(d.insertion_forest),
            "root_pairs": [list(p) for p in d.root_pairs],
            "core_vertices": d.core_vertices,
            "forest_vertices": d.forest_vertices,
            "euler_characteristic": g.euler_characteristic(),
        }
        if fmt == "text":
            print(f"core vertices {d.core_vertices}; forest vertices {d.forest_vertices}; roots {d.root_pairs}")
        else:
            print(json.dumps(out))
    elif cmd == "series":
        n = args.truncation
        if args.name == "master":
            s = series.master_series(n)
        elif args.name == "omega":
            s = series.omega_evaluation(args.n, n)
        elif args.name == "A":
            s = series.faber_zagier_A(n)
        else:
            s = series.closed_form_gf(args.name, n)
        data = s.to_json()
        if fmt == "text":
            for t in data:
                mono = "*".join(f"{v}^{e}" for v, e in t["exponents"].items()) or "1"
                print(f"{t['coeff']} {mono}")
        else:
            print(json.dumps(data))
    elif cmd == "verify":
        checks = run_suite(args.suite, k=args.k)
        ok = all(passed for _, passed, _ in checks)
        if fmt == "text":
            for name, passed, detail in checks:
                print(f"{'PASS' if passed else 'FAIL'} {name}" + (f" ({detail})" if detail else ""))
        else:
            print(json.dumps({
                "suite": args.suite,
                "passed": ok,
                "checks": [{"name": n_, "passed": p_, "detail": d_} for n_, p_, d_ in checks],
            }))
        return 0 if ok else 1
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except (RingError, series.SeriesError, graphs.GraphError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
