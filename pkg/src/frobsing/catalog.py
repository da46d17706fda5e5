"""Built-in catalog of worked examples and the agreement sweep.

Each entry carries the outcome its source asserts (``claim``) or an
outcome fixed by an independent oracle (``derived``).  Running an entry
produces a row whose status is one of

* ``AGREE``: the computation matches the expectation;
* ``OPEN``: finite-level evidence cannot settle the expectation;
* ``FLAGGED``: the computation contradicts a claimed outcome;
* ``FAIL``: an internal invariant broke (a bug, not a disagreement).

Only ``FAIL`` makes the sweep exit nonzero.
"""

from __future__ import annotations

import fnmatch
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .criteria import (STRONG, WEAK, PairSpec, VerdictKind, divisorial_freg_test, fpure_test_ci,
                       strong_freg_test_ci, validate_pair_implications)
from .discrepancy import (DualGraph, FClass, GraphType, chain, classify_graph_type, fork,
                          graded_discrepancy, predict_fclass, residual, solve_discrepancies)
from .errors import BudgetExceeded
from .polynomial import poly_parse
from .report import graph_dict, rat, threshold_dict, toric_dict, verdict_dict
from .thresholds import fpt_report
from .toric import Cone, toric_fpure_details

log = logging.getLogger(__name__)

AGREE, OPEN, FLAGGED, FAIL, INFO = "AGREE", "OPEN", "FLAGGED", "FAIL", "INFO"

# expectation vocabulary
HOLDS = "holds"          # property holds at every level
FAILS = "fails"          # property fails
CERTIFIED = "certified"  # strong F-regularity certified by a witness


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    description: str
    kind: str           # fpure | sfr | divfr | fpt | graded | graph | toric
    params: dict
    expected: object
    source: str         # "claim" or "derived"
    note: str = ""


@dataclass
class EntryResult:
    id: str
    description: str
    kind: str
    expected: str
    source: str
    outcome: str
    status: str
    note: str = ""
    detail: dict = field(default_factory=dict)
    invariants: list = field(default_factory=list)  # (name, ok, detail)

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "kind": self.kind,
            "expected": self.expected,
            "source": self.source,
            "outcome": self.outcome,
            "status": self.status,
            "note": self.note,
            "invariants": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.invariants],
            "detail": self.detail,
        }


def _t_tag(t: str) -> str:
    return t.replace("/", "_")


def _entries() -> list:
    out = []

    def add(*args, **kw):
        out.append(CatalogEntry(*args, **kw))

    # regular ring with a boundary along coordinate hyperplanes
    for p in (3, 5):
        for t, exp in (("1/2", HOLDS), ("1", HOLDS), ("3/2", FAILS)):
            src = "claim" if exp == HOLDS else "derived"
            add(f"regular-p{p:02d}-t{_t_tag(t)}-fpure", f"F_{p}[x,y,z], {t}*div(xy), F-pure",
                "fpure", dict(p=p, vars="x,y,z", ci=[], g="x*y", t=t, mode=WEAK), exp, src,
                "t > 1 cannot be F-pure" if exp == FAILS else "F-pure for t <= 1")
        add(f"regular-p{p:02d}-t1_2-sfr", f"F_{p}[x,y,z], 1/2*div(xy), strongly F-regular",
            "sfr", dict(p=p, vars="x,y,z", ci=[], g="x*y", t="1/2", mode=WEAK), CERTIFIED, "claim",
            "strongly F-regular for t < 1")

    # quadric cone xy - z^2 with boundary along z
    for p in (3, 5, 7):
        for t, exp in (("1/2", HOLDS), ("1", HOLDS), ("3/2", FAILS)):
            src = "claim" if exp == HOLDS else "derived"
            add(f"cone-p{p:02d}-t{_t_tag(t)}-fpure", f"F_{p}[x,y,z]/(xy-z^2), {t}*div(z), F-pure",
                "fpure", dict(p=p, vars="x,y,z", ci=["x*y-z^2"], g="z", t=t, mode=WEAK), exp, src,
                "t > 1 cannot be F-pure" if exp == FAILS else "F-pure for t <= 1")
        add(f"cone-p{p:02d}-t1_2-sfr", f"F_{p}[x,y,z]/(xy-z^2), 1/2*div(z), strongly F-regular",
            "sfr", dict(p=p, vars="x,y,z", ci=["x*y-z^2"], g="z", t="1/2", mode=WEAK), CERTIFIED,
            "claim", "strongly F-regular for t < 1")
    add("cone-p05-sfr-witness-x", "F_5[x,y,z]/(xy-z^2), no boundary, witness x",
        "sfr", dict(p=5, vars="x,y,z", ci=["x*y-z^2"], g=None, t="0", mode=WEAK, witness="x"),
        CERTIFIED, "derived", "certified at level 1")

    # cusp x^2 - y^3 on the plane
    for p in (5, 7, 13):
        add(f"cusp-p{p:02d}-t5_6-weak", f"F_{p}[x,y], 5/6*div(x^2-y^3), F-pure",
            "fpure", dict(p=p, vars="x,y", ci=[], g="x^2-y^3", t="5/6", mode=WEAK), HOLDS, "claim",
            "F-pure in every characteristic")
        add(f"cusp-p{p:02d}-t11_12-weak", f"F_{p}[x,y], 11/12*div(x^2-y^3), F-pure",
            "fpure", dict(p=p, vars="x,y", ci=[], g="x^2-y^3", t="11/12", mode=WEAK), FAILS, "claim",
            "F-pure only for t <= 5/6")
        add(f"cusp-p{p:02d}-t5_6-strong", f"F_{p}[x,y], 5/6*div(x^2-y^3), strongly F-pure",
            "fpure", dict(p=p, vars="x,y", ci=[], g="x^2-y^3", t="5/6", mode=STRONG),
            HOLDS if p % 3 == 1 else FAILS, "claim", "strongly F-pure iff p = 1 mod 3")
        add(f"cusp-p{p:02d}-t11_12-strong", f"F_{p}[x,y], 11/12*div(x^2-y^3), strongly F-pure",
            "fpure", dict(p=p, vars="x,y", ci=[], g="x^2-y^3", t="11/12", mode=STRONG), FAILS,
            "derived", "strong F-purity implies F-purity")
        add(f"cusp-p{p:02d}-t5_6-sfr", f"F_{p}[x,y], 5/6*div(x^2-y^3), strongly F-regular",
            "sfr", dict(p=p, vars="x,y", ci=[], g="x^2-y^3", t="5/6", mode=WEAK), FAILS, "claim",
            "not strongly F-regular")
        add(f"cusp-p{p:02d}-fpt", f"F_{p}[x,y], threshold of x^2-y^3 against lct 5/6",
            "fpt", dict(p=p, vars="x,y", f="x^2-y^3", lct="5/6"), "5/6", "claim",
            "reference log canonical threshold")

    # Fermat quartic cone
    for p in (3, 5, 7, 11, 13):
        add(f"fermat-p{p:02d}-fpure", f"F_{p}[x,y,z,w]/(x^4+y^4+z^4+w^4), F-pure",
            "fpure", dict(p=p, vars="x,y,z,w", ci=["x^4+y^4+z^4+w^4"], g=None, t="0", mode=WEAK),
            HOLDS if p % 4 == 1 else FAILS, "claim", "F-pure iff p = 1 mod 4")

    # divisorial F-regularity through the quotient
    add("divfr-p05-plane-x", "F_5[x,y], div(x), divisorially F-regular",
        "divfr", dict(p=5, vars="x,y", ci=[], g="x", t="1", mode=WEAK), CERTIFIED, "derived",
        "the quotient F_5[y] is regular")

    # graded blow-ups
    for ident, index, b, value, src, note in (
        ("graded-veronese-n2-r3", 3, -2, Fraction(-1, 3), "claim", "Veronese: -1 + n/r"),
        ("graded-fermat-quartic", 1, 0, Fraction(-1), "claim", "trivial canonical class"),
        ("graded-plane-d2", 1, -2, Fraction(1), "derived", "blow-up of a smooth point"),
        ("graded-plane-d3", 1, -3, Fraction(2), "derived", "blow-up of a smooth point"),
        ("graded-plane-d4", 1, -4, Fraction(3), "derived", "blow-up of a smooth point"),
    ):
        add(ident, f"graded discrepancy, index {index}, b = {b}", "graded",
            dict(index=index, b=b), rat(value), src, note)

    # resolution graph templates
    graphs = (
        ("graph-a-chain3", chain([2, 2, 2], [0]), None),
        ("graph-a-chain-mixed", chain([3, 2, 4], [2]), None),
        ("graph-b-chain4", chain([2, 2, 2, 2], [0, 3]), None),
        ("graph-b-single", chain([2], [0, 0]), None),
        ("graph-c-fork-p2", fork([2]), 2),
        ("graph-c-fork-p3", fork([2]), 3),
        ("graph-c-long-p5", fork([3, 2]), 5),
        ("graph-other-star", DualGraph([2], [], [3]), None),
    )
    for ident, g, p in graphs:
        pp = 3 if p is None else p
        add(ident, f"dual graph {g.b} edges {g.edges} marks {g.boundary}, p = {pp}", "graph",
            dict(graph=g.to_json(), p=pp), _graph_expectation(classify_graph_type(g), pp), "claim",
            "classification of log canonical surface pairs")

    # toric
    for e in (1, 2):
        add(f"toric-a1-full-e{e}", f"A1 cone (1,0),(1,2), full boundary, e = {e}", "toric",
            dict(rays="1,0;1,2", delta=[0, 1], e=e, box=8), True, "claim",
            "twisted module equals the canonical module")
        add(f"toric-quadrant-full-e{e}", f"quadrant, full boundary, e = {e}", "toric",
            dict(rays="1,0;0,1", delta=[0, 1], e=e, box=8), True, "claim",
            "twisted module equals the canonical module")
    add("toric-quadrant-empty-e1", "quadrant, no boundary, e = 1", "toric",
        dict(rays="1,0;0,1", delta=[], e=1, box=3), True, "derived",
        "containment with strict witnesses")
    return out


def _graph_expectation(kind, p) -> str:
    if kind is GraphType.A:
        return FClass.DIV_F_REGULAR.value + "; min a > -1"
    if kind in (GraphType.B, GraphType.C):
        f = FClass.NOT_F_PURE if (kind is GraphType.C and p == 2) else FClass.F_PURE_NOT_DFR
        return f.value + "; min a = -1"
    return FClass.NOT_F_PURE.value


CATALOG = {e.id: e for e in _entries()}


def select(pattern: str | None = None) -> list:
    ids = sorted(CATALOG)
    if pattern:
        pat = pattern if any(ch in pattern for ch in "*?[") else f"*{pattern}*"
        ids = [i for i in ids if fnmatch.fnmatchcase(i, pat)]
    return [CATALOG[i] for i in ids]


# ---------------------------------------------------------------------------
# Running entries


def _pair(params) -> PairSpec:
    return PairSpec.build(params["p"], params["vars"], params.get("ci", []), params.get("g"),
                          params.get("t", "0"), params.get("mode", WEAK))


def _fpure_outcome(v) -> str:
    if v.truncated:
        return f"budget (holds to {v.level})"
    return {VerdictKind.HOLDS_UP_TO_LEVEL: HOLDS, VerdictKind.REFUTED: FAILS}[v.kind]


def _run_fpure(entry, max_e) -> EntryResult:
    pair = _pair(entry.params)
    v = fpure_test_ci(pair, max_e)
    other = fpure_test_ci(pair.with_mode(STRONG if pair.mode == WEAK else WEAK), max_e)
    weak, strong = (v, other) if pair.mode == WEAK else (other, v)
    checks = validate_pair_implications(pair, weak, strong).checks
    outcome = _fpure_outcome(v)
    if v.truncated:
        status = OPEN
    elif outcome == entry.expected:
        status = AGREE
    elif entry.expected == HOLDS:
        status = FLAGGED if entry.source == "claim" else FAIL
    else:
        status = OPEN
    note = entry.note
    if status == FLAGGED:
        note = f"computation refutes the claim ({entry.note}): {v.summary()}"
    elif status == OPEN and not v.truncated:
        note = f"not refuted up to level {max_e}; {entry.note}"
    return EntryResult(entry.id, entry.description, entry.kind, entry.expected, entry.source,
                       v.summary(), status, note, verdict_dict(v, pair.ring), checks)


def _run_sfr(entry, max_e, divisorial=False) -> EntryResult:
    pair = _pair(entry.params)
    w = entry.params.get("witness")
    witness = poly_parse(w, pair.ring, pair.p) if w else None
    test = divisorial_freg_test if divisorial else strong_freg_test_ci
    v = test(pair, max_e, witness)
    outcome = {VerdictKind.CERTIFIED_POSITIVE: CERTIFIED, VerdictKind.REFUTED: FAILS,
               VerdictKind.INCONCLUSIVE: "inconclusive",
               VerdictKind.HOLDS_UP_TO_LEVEL: "inconclusive"}[v.kind]
    if outcome == entry.expected:
        status = AGREE
    elif outcome == "inconclusive":
        status = OPEN
    else:
        status = FLAGGED if entry.source == "claim" else FAIL
    note = entry.note
    if status == OPEN:
        note = f"witness dies at every level up to {max_e}; {entry.note}"
    elif status == FLAGGED:
        note = f"computation contradicts the claim ({entry.note})"
    return EntryResult(entry.id, entry.description, entry.kind, entry.expected, entry.source,
                       v.summary(), status, note, verdict_dict(v, pair.ring))


def _run_fpt(entry, max_e) -> EntryResult:
    prm = entry.params
    f = poly_parse(prm["f"], prm["vars"], prm["p"])
    rep = fpt_report(f, max_e)
    lct = Fraction(prm["lct"])
    detail = threshold_dict(rep)
    checks = [
        ("watermark <= upper", rep.level_watermark < rep.upper, ""),
        ("t = 1/n passes every level",
         all(floor(rep.bounds.lower * (q - 1)) <= j for _, q, j in rep.entries), ""),
    ]
    outcome = (f"upper {rat(rep.display_upper)}, watermark {rat(rep.level_watermark)}, "
               f"estimate {rat(rep.estimate)}")
    rel = "=" if rep.estimate == lct else ("<" if rep.estimate < lct else ">")
    return EntryResult(entry.id, entry.description, entry.kind, entry.expected, entry.source,
                       outcome, INFO, f"estimate {rel} lct {rat(lct)}", detail, checks)


def _run_graded(entry, max_e) -> EntryResult:
    v = graded_discrepancy(entry.params["index"], entry.params["b"])
    status = AGREE if rat(v) == entry.expected else FLAGGED
    return EntryResult(entry.id, entry.description, entry.kind, entry.expected, entry.source,
                       rat(v), status, entry.note, {"a0": rat(v)})


def _run_graph(entry, max_e) -> EntryResult:
    g = DualGraph.from_json(entry.params["graph"])
    p = entry.params["p"]
    sol = solve_discrepancies(g)
    checks = [("exact residual", all(r == 0 for r in residual(g, sol.a)), "")]
    fc = predict_fclass(g, p).value
    kind = classify_graph_type(g).value
    lo = sol.min
    if kind == "a":
        outcome = fc + ("; min a > -1" if lo > -1 else f"; min a = {rat(lo)}")
    elif kind in ("b", "c"):
        outcome = fc + ("; min a = -1" if lo == -1 else f"; min a = {rat(lo)}")
    else:
        outcome = fc
    status = AGREE if outcome == entry.expected else FLAGGED
    return EntryResult(entry.id, entry.description, entry.kind, entry.expected, entry.source,
                       outcome, status, entry.note, graph_dict(g, p), checks)


def _run_toric(entry, max_e) -> EntryResult:
    prm = entry.params
    chk = toric_fpure_details(Cone.parse(prm["rays"]), prm["delta"], prm["e"], prm["box"])
    checks = [("scaling injective", chk.injective, "")]
    status = AGREE if chk.ok == entry.expected else FLAGGED
    return EntryResult(entry.id, entry.description, entry.kind, str(entry.expected).lower(),
                       entry.source, str(chk.ok).lower(), status, entry.note, toric_dict(chk), checks)


_RUNNERS = {
    "fpure": _run_fpure,
    "sfr": _run_sfr,
    "divfr": lambda e, m: _run_sfr(e, m, divisorial=True),
    "fpt": _run_fpt,
    "graded": _run_graded,
    "graph": _run_graph,
    "toric": _run_toric,
}


def run_entry(entry_id: str, max_e: int = 2) -> EntryResult:
    entry = CATALOG[entry_id]
    try:
        res = _RUNNERS[entry.kind](entry, max_e)
    except BudgetExceeded as exc:
        return EntryResult(entry.id, entry.description, entry.kind, str(entry.expected), entry.source,
                           "budget exceeded", OPEN, str(exc))
    if any(not ok for _, ok, _ in res.invariants):
        res.status = FAIL
    return res


def run_catalog(pattern: str | None = None, max_e: int = 2, jobs: int = 1) -> list:
    ids = [e.id for e in select(pattern)]
    if jobs > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_entry, ids, [max_e] * len(ids)))
    else:
        results = [run_entry(i, max_e) for i in ids]
    return sorted(results, key=lambda r: r.id)


def format_table(results) -> str:
    w_id = max((len(r.id) for r in results), default=2)
    w_st = 7
    lines = [f"{'id':<{w_id}}  {'status':<{w_st}}  outcome  [expected; source]"]
    for r in results:
        lines.append(f"{r.id:<{w_id}}  {r.status:<{w_st}}  {r.outcome}  [{r.expected}; {r.source}]")
        if r.status in (FLAGGED, FAIL, OPEN) and r.note:
            lines.append(f"{'':<{w_id}}  {'':<{w_st}}  -> {r.note}")
        for name, ok, detail in r.invariants:
            if not ok:
                lines.append(f"{'':<{w_id}}  {'':<{w_st}}  !! invariant {name} {detail}")
    counts = {}
    for r in results:
        counts[r.status] = counts.get(r.status, 0) + 1
    lines.append(", ".join(f"{k}: {counts[k]}" for k in sorted(counts)))
    return "\n".join(lines)
