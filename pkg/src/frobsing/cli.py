"""Command-line front end.

Exit codes: 0 holds or certified, 1 refuted, 2 usage error, 3 budget
exceeded, 4 inconclusive.  ``catalog`` exits 1 only when an internal
invariant fails.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from . import catalog as cat
from .criteria import (STRONG, WEAK, PairSpec, divisorial_freg_test, fpure_test_ci, fpure_test_general,
                       parse_rational, strong_freg_test_ci)
from .discrepancy import solve_discrepancies
from .errors import BudgetExceeded, FrobsingError
from .ideal import Ideal
from .polynomial import poly_parse, poly_print
from .report import (EXIT_BUDGET, EXIT_OK, EXIT_REFUTED, EXIT_USAGE, dumps, envelope, exit_code,
                     graph_dict, load_graph, term_text, threshold_dict, toric_dict, verdict_dict)
from .thresholds import fpt_report
from .toric import Cone, toric_fpure_details

log = logging.getLogger("frobsing")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pair_args(sp, boundary=True, t=True):
    sp.add_argument("--p", type=int, required=True, help="prime characteristic")
    sp.add_argument("--vars", required=True, help="comma-separated variable names, e.g. x,y,z")
    sp.add_argument("--ci", action="append", default=[], metavar="POLY",
                    help="defining equation of the complete intersection (repeatable)")
    if boundary:
        sp.add_argument("--g", help="boundary equation g of t*div(g)")
    if t:
        sp.add_argument("--t", default="0", help="boundary coefficient as a rational a/b")
    sp.add_argument("--max-e", type=int, default=2, help="deepest Frobenius level (default 2)")


def _common(sp):
    sp.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="frobsing", description="Fedder-type F-singularity tests, F-pure thresholds, "
                 "resolution-graph discrepancies and toric lattice checks.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("fpure", help="F-purity (weak) or strong F-purity of a pair")
    _pair_args(sp)
    sp.add_argument("--mode", choices=(WEAK, STRONG), default=WEAK,
                    help="weak: r = floor(t(q-1)); strong: r = floor(tq)")
    sp.add_argument("--ideal", action="store_true",
                    help="treat the --ci equations as an arbitrary ideal (Groebner colon engine)")
    _common(sp)

    sp = sub.add_parser("fpt", help="nu-values and F-pure threshold bounds of a hypersurface")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--vars", required=True)
    sp.add_argument("--f", required=True, help="the polynomial f")
    sp.add_argument("--max-e", type=int, default=2)
    sp.add_argument("--t", help="also report the large-p strong F-purity bound at this t")
    _common(sp)

    sp = sub.add_parser("sfr", help="strong F-regularity with a witness search")
    _pair_args(sp)
    sp.add_argument("--witness", help="test element c (default: a Jacobian minor)")
    _common(sp)

    sp = sub.add_parser("divfr", help="divisorial F-regularity of (A, div g) via A/gA")
    _pair_args(sp, t=False)
    sp.add_argument("--witness", help="test element c on the quotient")
    _common(sp)

    sp = sub.add_parser("graph", help="discrepancies and predicted class of a resolution graph")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", help="path to a graph JSON file ('-' for stdin)")
    src.add_argument("--json", help="graph JSON given inline")
    sp.add_argument("--p", type=int, help="characteristic for the prediction (default: both cases)")
    _common(sp)

    sp = sub.add_parser("toric", help="lattice-level F-purity check for a toric pair")
    sp.add_argument("--rays", required=True, help='primitive rays, e.g. "1,0;1,2"')
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--full-delta", action="store_true", help="boundary on every ray")
    grp.add_argument("--delta", default="", help="comma-separated ray indices carrying the boundary")
    sp.add_argument("--e", type=int, default=1)
    sp.add_argument("--box", type=int, default=8)
    sp.add_argument("--p", type=int, default=2, help="q = p^e (default p = 2)")
    _common(sp)

    sp = sub.add_parser("catalog", help="run the built-in examples and print the agreement table")
    sp.add_argument("--filter", help="substring or glob on entry ids")
    sp.add_argument("--max-e", type=int, default=2)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--list", action="store_true", help="list entry ids and exit")
    _common(sp)
    return ap


# ---------------------------------------------------------------------------


def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("format", "verbose")}


def _emit(args, body: dict, text: str, started: float) -> None:
    if args.format == "json":
        print(dumps(envelope(_echo(args), body, time.perf_counter() - started)))
    else:
        print(text)


def _verdict_text(v, ring) -> str:
    lines = [v.summary()]
    for rec in v.transcript:
        mark = "pass" if rec.passed else "fail"
        line = f"  e={rec.e} q={rec.q} r={rec.r} {mark}"
        if rec.surviving_term is not None:
            line += f"  surviving term {term_text(ring, rec.surviving_term)}"
        lines.append(line)
        if rec.colon is not None:
            lines.append("    colon: (" + ", ".join(poly_print(g) for g in rec.colon.generators) + ")")
        if rec.note:
            lines.append(f"    {rec.note}")
    return "\n".join(lines)


def _pair(args, t=None) -> PairSpec:
    return PairSpec.build(args.p, args.vars, args.ci, getattr(args, "g", None),
                          args.t if t is None else t, getattr(args, "mode", WEAK))


def cmd_fpure(args) -> int:
    started = time.perf_counter()
    pair = _pair(args)
    if args.ideal:
        if not pair.ci:
            raise FrobsingError("--ideal needs at least one --ci generator")
        v = fpure_test_general(Ideal(pair.ring, list(pair.ci)), pair.g, pair.t, args.max_e, pair.mode)
    else:
        v = fpure_test_ci(pair, args.max_e)
    _emit(args, {"pair": pair.describe(), "verdict": verdict_dict(v, pair.ring)},
          _verdict_text(v, pair.ring), started)
    return exit_code(v)


def cmd_fpt(args) -> int:
    started = time.perf_counter()
    f = poly_parse(args.f, args.vars, args.p)
    rep = fpt_report(f, args.max_e, parse_rational(args.t) if args.t else None)
    body = {"threshold": threshold_dict(rep)}
    lines = [f"f = {poly_print(f)} over F_{args.p}"]
    lines += [f"  e={e} q={q} nu={j}" for e, q, j in rep.entries]
    lines.append(f"certified upper bound {rep.display_upper}  (raw {rep.upper})")
    lines.append(f"every t <= {rep.level_watermark} passes all computed levels")
    lines.append(f"estimate {rep.estimate}")
    lines.append(f"strong convention: upper {rep.strong_upper}, watermark {rep.strong_watermark}")
    lines.append(f"multiplicity {rep.bounds.n}: F-pure for t <= {rep.bounds.lower}, "
                 f"F-purity forces t <= {rep.bounds.upper}")
    pred = rep.prediction
    if pred is not None:
        if pred.mu is None:
            lines.append(f"large-p bound not available: {pred.reason}")
        else:
            verdict = "predicts" if pred.predicts_strongly_fpure else "does not predict"
            lines.append(f"exponents {pred.exponents}, mu = {pred.mu}: p = {args.p} {verdict} "
                         "strong F-purity")
    _emit(args, body, "\n".join(lines), started)
    return EXIT_OK


def _witness(args, ring):
    return poly_parse(args.witness, ring, ring.p) if args.witness else None


def cmd_sfr(args) -> int:
    started = time.perf_counter()
    pair = _pair(args)
    v = strong_freg_test_ci(pair, args.max_e, _witness(args, pair.ring))
    _emit(args, {"pair": pair.describe(), "verdict": verdict_dict(v, pair.ring)},
          _verdict_text(v, pair.ring), started)
    return exit_code(v)


def cmd_divfr(args) -> int:
    started = time.perf_counter()
    pair = _pair(args, t="1")
    v = divisorial_freg_test(pair, args.max_e, _witness(args, pair.ring))
    _emit(args, {"pair": pair.describe(), "verdict": verdict_dict(v, pair.ring)},
          _verdict_text(v, pair.ring), started)
    return exit_code(v)


def cmd_graph(args) -> int:
    started = time.perf_counter()
    if args.json is not None:
        text = args.json
    elif args.file == "-":
        text = sys.stdin.read()
    else:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    graph = load_graph(text)
    body = graph_dict(graph, args.p)
    sol = solve_discrepancies(graph)
    lines = [f"discrepancies: {', '.join(str(a) for a in sol.a)}",
             f"minimum {sol.min}, class {body['lc_class']}"]
    if body["graph_type"] is not None:
        lines.append(f"graph type ({body['graph_type']})")
        lines += [f"predicted for {k}: {v}" for k, v in body["predicted"].items()]
    _emit(args, body, "\n".join(lines), started)
    return EXIT_OK


def cmd_toric(args) -> int:
    started = time.perf_counter()
    cone = Cone.parse(args.rays)
    if args.full_delta:
        delta = list(range(len(cone.rays)))
    else:
        try:
            delta = [int(v) for v in args.delta.split(",") if v.strip()]
        except ValueError:
            raise FrobsingError(f"cannot read ray indices from {args.delta!r}") from None
    chk = toric_fpure_details(cone, delta, args.e, args.box, args.p)
    body = {"cone": str(cone), "delta": delta, "check": toric_dict(chk)}
    lines = [str(chk.ok).lower()]
    if chk.full_delta:
        lines.append(f"set identity on the box: {chk.identity} ({chk.canonical_size} points)")
    else:
        lines.append(f"twisted module inside canonical: {chk.contained}; "
                     f"q * canonical inside twisted: {chk.scaled_contained}")
        if chk.witnesses:
            lines.append("strict witnesses: " + " ".join(str(m) for m in chk.witnesses))
    _emit(args, body, "\n".join(lines), started)
    return EXIT_OK if chk.ok else EXIT_REFUTED


def cmd_catalog(args) -> int:
    started = time.perf_counter()
    if args.list:
        for e in cat.select(args.filter):
            print(f"{e.id}  {e.description}")
        return EXIT_OK
    results = cat.run_catalog(args.filter, args.max_e, max(1, args.jobs))
    body = {"entries": [r.as_dict() for r in results],
            "flagged": [r.id for r in results if r.status == cat.FLAGGED],
            "failed": [r.id for r in results if r.status == cat.FAIL]}
    _emit(args, body, cat.format_table(results), started)
    return EXIT_REFUTED if body["failed"] else EXIT_OK


COMMANDS = {
    "fpure": cmd_fpure,
    "fpt": cmd_fpt,
    "sfr": cmd_sfr,
    "divfr": cmd_divfr,
    "graph": cmd_graph,
    "toric": cmd_toric,
    "catalog": cmd_catalog,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"frobsing: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (FrobsingError, OSError) as exc:
        print(f"frobsing: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
