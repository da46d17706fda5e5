"""JSON-ready records for verdicts, thresholds, graphs and toric checks.

Every rational leaves the process as a ``"num/den"`` string, and key order
is fixed so that identical runs serialize byte for byte.  The only
nondeterministic field is ``elapsed_s``, which comparisons strip.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .criteria import LevelRecord, Verdict, VerdictKind
from .discrepancy import DualGraph, classify_graph_type, predict_fclass, solve_discrepancies
from .errors import InvalidInput
from .polynomial import Polynomial, poly_print
from .thresholds import ThresholdReport
from .toric import ToricCheck

SCHEMA = "frobsing/1"

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_INCONCLUSIVE = 4


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def term_text(ring, term) -> str | None:
    if term is None:
        return None
    exps, c = term
    return poly_print(Polynomial(ring, {tuple(exps): c}))


def level_dict(ring, rec: LevelRecord) -> dict:
    out = {
        "e": rec.e,
        "q": rec.q,
        "r": rec.r,
        "passed": rec.passed,
        "surviving_term": term_text(ring, rec.surviving_term),
    }
    if rec.colon is not None:
        out["colon"] = [poly_print(g) for g in rec.colon.generators]
    if rec.note:
        out["note"] = rec.note
    return out


def verdict_dict(verdict: Verdict, ring) -> dict:
    return {
        "criterion": verdict.criterion,
        "kind": verdict.kind.value,
        "level": verdict.level,
        "max_e": verdict.max_e,
        "truncated": verdict.truncated,
        "reason": verdict.reason,
        "witness": None if verdict.witness is None else poly_print(verdict.witness),
        "summary": verdict.summary(),
        "transcript": [level_dict(ring, r) for r in verdict.transcript],
    }


def exit_code(verdict: Verdict) -> int:
    """Process exit status for a verdict."""
    if verdict.truncated:
        return EXIT_BUDGET
    return {
        VerdictKind.HOLDS_UP_TO_LEVEL: EXIT_OK,
        VerdictKind.CERTIFIED_POSITIVE: EXIT_OK,
        VerdictKind.REFUTED: EXIT_REFUTED,
        VerdictKind.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[verdict.kind]


def threshold_dict(rep: ThresholdReport) -> dict:
    out = {
        "f": poly_print(rep.f),
        "p": rep.f.ring.p,
        "nu": [{"e": e, "q": q, "j": j} for e, q, j in rep.entries],
        "upper": rat(rep.upper),
        "display_upper": rat(rep.display_upper),
        "level_watermark": rat(rep.level_watermark),
        "estimate": rat(rep.estimate),
        "strong_upper": rat(rep.strong_upper),
        "strong_watermark": rat(rep.strong_watermark),
        "multiplicity": rep.bounds.n,
        "fpure_below": rat(rep.bounds.lower),
        "fpure_forces_at_most": rat(rep.bounds.upper),
    }
    pred = rep.prediction
    if pred is not None:
        out["prediction"] = {
            "applicable": pred.applicable,
            "initial_form": poly_print(pred.initial_form),
            "exponents": pred.exponents,
            "mu": None if pred.mu is None else rat(pred.mu),
            "predicts_strongly_fpure": pred.predicts_strongly_fpure,
            "reason": pred.reason,
        }
    return out


def graph_dict(graph: DualGraph, p: int | None = None) -> dict:
    sol = solve_discrepancies(graph)
    out = {
        "graph": graph.to_json(),
        "a": [rat(a) for a in sol.a],
        "min_a": rat(sol.min),
        "lc_class": sol.lc_class.value,
    }
    if not any(graph.boundary):
        out["graph_type"] = None
        return out
    out["graph_type"] = classify_graph_type(graph).value
    if p is None:
        out["predicted"] = {"p=2": predict_fclass(graph, 2).value,
                            "p odd": predict_fclass(graph, 3).value}
    else:
        out["predicted"] = {f"p={p}": predict_fclass(graph, p).value}
    return out


def toric_dict(check: ToricCheck) -> dict:
    return {
        "q": check.q,
        "full_delta": check.full_delta,
        "identity": check.identity,
        "contained": check.contained,
        "scaled_contained": check.scaled_contained,
        "injective": check.injective,
        "twisted_size": check.twisted_size,
        "canonical_size": check.canonical_size,
        "witnesses": [list(m) for m in check.witnesses],
        "result": check.ok,
    }


def envelope(command: dict, body: dict, elapsed: float | None = None) -> dict:
    out = {"schema": SCHEMA, "command": command}
    out.update(body)
    if elapsed is not None:
        out["elapsed_s"] = round(elapsed, 3)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)


def strip_timing(obj):
    """Copy of a report with every ``elapsed_s`` field removed."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "elapsed_s"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def load_graph(text: str) -> DualGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"graph is not valid JSON: {exc}") from None
    return DualGraph.from_json(data)
