"""Fedder-type splitting criteria for pairs ``(R/(f_1..f_s), t*div(g))``.

Every test works level by level: at ``q = p^e`` the criterion polynomial is
reduced modulo ``m^[q]`` and the level passes when something survives.
A failing level is a proof of non-splitting (splitting at ``q`` forces
splitting at every smaller power), while passing levels are only evidence,
hence the verdict kinds ``refuted`` versus ``holds_up_to_level``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import floor

from .errors import BudgetExceeded, InvalidInput, current_budget
from .ideal import Ideal, bracket_power, colon_artinian, ideal_colon
from .polynomial import (
    BracketPowers,
    Polynomial,
    Ring,
    partial_derivative,
    poly_parse,
)

log = logging.getLogger(__name__)

WEAK = "weak"
STRONG = "strong"


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"bad rational {text!r}") from None


@dataclass(frozen=True)
class PairSpec:
    """A pair ``(A, t*div(g))`` with ``A = F_p[x]/(f_1..f_s)`` localized at the origin.

    ``g`` is assumed reduced and ``f_1..f_s, g`` a regular sequence; neither
    is checked.  ``mode`` selects ``floor(t(q-1))`` (weak, F-purity) or
    ``floor(tq)`` (strong F-purity) for the boundary exponent.
    """

    ring: Ring
    ci: tuple = ()
    g: Polynomial | None = None
    t: Fraction = Fraction(0)
    mode: str = WEAK

    def __post_init__(self):
        object.__setattr__(self, "ci", tuple(self.ci))
        object.__setattr__(self, "t", parse_rational(self.t))
        if self.mode not in (WEAK, STRONG):
            raise InvalidInput(f"mode must be weak or strong, not {self.mode!r}")
        if self.t < 0:
            raise InvalidInput("boundary coefficient t must be nonnegative")
        if len(self.ci) > self.ring.ngens:
            raise InvalidInput("more complete-intersection generators than variables")
        for f in self.ci + ((self.g,) if self.g is not None else ()):
            if f.ring != self.ring:
                raise InvalidInput("polynomial from another ring")
            if f.is_zero():
                raise InvalidInput("zero polynomial in pair data")
            if f.constant_term():
                raise InvalidInput(f"{f} is not in the maximal ideal")

    @classmethod
    def build(cls, p: int, vars, ci=(), g=None, t="0", mode: str = WEAK) -> "PairSpec":
        """Construct from polynomial strings, e.g. ``build(7, "x,y", g="x^2-y^3", t="5/6")``."""
        if isinstance(vars, str):
            vars = [v.strip() for v in vars.split(",") if v.strip()]
        ring = Ring(p, tuple(vars))
        ci = tuple(poly_parse(f, ring.names, p) if isinstance(f, str) else f for f in ci)
        if isinstance(g, str):
            g = poly_parse(g, ring.names, p)
        return cls(ring, ci, g, parse_rational(t), mode)

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def has_boundary(self) -> bool:
        return self.g is not None and self.t > 0

    def with_t(self, t) -> "PairSpec":
        return replace(self, t=parse_rational(t))

    def with_mode(self, mode: str) -> "PairSpec":
        return replace(self, mode=mode)

    def describe(self) -> str:
        base = f"F_{self.p}[{','.join(self.ring.names)}]"
        if self.ci:
            base += "/(" + ", ".join(str(f) for f in self.ci) + ")"
        if self.g is not None:
            base += f", {self.t}*div({self.g})"
        return base + f" [{self.mode}]"


@dataclass(frozen=True)
class Level:
    e: int
    q: int
    r: int


def r_level(t, e: int, mode: str = WEAK, p: int = 2) -> Level:
    """Boundary exponent at level ``e``: ``floor(t(q-1))`` or ``floor(tq)``."""
    t = parse_rational(t)
    if t < 0:
        raise InvalidInput("t must be nonnegative")
    if e < 1:
        raise InvalidInput("levels start at e = 1")
    q = p ** e
    if mode == WEAK:
        r = floor(t * (q - 1))
    elif mode == STRONG:
        r = floor(t * q)
    else:
        raise InvalidInput(f"unknown mode {mode!r}")
    return Level(e, q, r)


class VerdictKind(str, Enum):
    REFUTED = "refuted"
    HOLDS_UP_TO_LEVEL = "holds_up_to_level"
    CERTIFIED_POSITIVE = "certified_positive"
    INCONCLUSIVE = "inconclusive"


@dataclass
class LevelRecord:
    e: int
    q: int
    r: int
    passed: bool
    surviving_term: tuple | None = None  # (exponents, coefficient) of one surviving term
    colon: Ideal | None = None
    note: str = ""


@dataclass
class Verdict:
    kind: VerdictKind
    criterion: str
    max_e: int
    level: int | None = None
    reason: str = ""
    witness: Polynomial | None = None
    transcript: list = field(default_factory=list)
    truncated: bool = False

    @property
    def refuted(self) -> bool:
        return self.kind is VerdictKind.REFUTED

    def passed_levels(self) -> dict:
        return {rec.e: rec.passed for rec in self.transcript}

    def summary(self) -> str:
        k = self.kind
        if k is VerdictKind.REFUTED:
            where = f"level {self.level}" if self.level is not None else "structural"
            return f"Refuted({where}): {self.reason}"
        if k is VerdictKind.HOLDS_UP_TO_LEVEL:
            s = f"HoldsUpToLevel({self.level})"
            return s + (" [truncated by budget]" if self.truncated else "")
        if k is VerdictKind.CERTIFIED_POSITIVE:
            return f"CertifiedPositive({self.level}, witness {self.witness})"
        return f"Inconclusive(levels 1..{self.max_e}): {self.reason}"


def _product_text(pair: PairSpec, q: int, r: int, c=None) -> str:
    parts = ["c"] if c is not None else []
    if len(pair.ci) == 1:
        parts.append(f"f^{q - 1}")
    elif pair.ci:
        parts.append(f"(f_1...f_{len(pair.ci)})^{q - 1}")
    if pair.g is not None and r:
        parts.append(f"g^{r}")
    return " * ".join(parts) or "1"


def _surviving(h: Polynomial):
    if h.is_zero():
        return None
    a = h.support()[0]
    return a, h.terms[a]


def fedder_product(pair: PairSpec, q: int, r: int, c: Polynomial | None = None,
                   powers: BracketPowers | None = None) -> Polynomial:
    """``c * (f_1...f_s)^(q-1) * g^r`` reduced modulo ``m^[q]``."""
    powers = powers or _powers_for(pair, c)
    exps = {i: q - 1 for i in range(len(pair.ci))}
    if pair.g is not None:
        exps[len(pair.ci)] = r
    if c is not None:
        exps[len(powers.factors) - 1] = 1
    return powers.power_product(exps, q)


def _powers_for(pair: PairSpec, c: Polynomial | None = None) -> BracketPowers:
    factors = list(pair.ci)
    if pair.g is not None:
        factors.append(pair.g)
    if c is not None:
        factors.append(c)
    if not factors:
        factors = [pair.ring.one()]
    return BracketPowers(factors)


def _check_terms(h: Polynomial) -> None:
    limit = current_budget().dimension
    if len(h) > limit:
        raise BudgetExceeded(f"criterion polynomial has {len(h)} terms", required=len(h))


def fpure_test_ci(pair: PairSpec, e_max: int) -> Verdict:
    """F-purity (weak mode) or strong F-purity of a complete-intersection pair."""
    if e_max < 1:
        raise InvalidInput("e_max must be at least 1")
    criterion = "fpure-" + pair.mode
    powers = _powers_for(pair)
    transcript = []
    for e in range(1, e_max + 1):
        lvl = r_level(pair.t, e, pair.mode, pair.p)
        try:
            h = fedder_product(pair, lvl.q, lvl.r, powers=powers)
            _check_terms(h)
        except BudgetExceeded as exc:
            log.warning("level %d abandoned: %s", e, exc)
            return Verdict(VerdictKind.HOLDS_UP_TO_LEVEL, criterion, e_max, e - 1,
                           reason=str(exc), transcript=transcript, truncated=True)
        rec = LevelRecord(e, lvl.q, lvl.r, not h.is_zero(), _surviving(h))
        transcript.append(rec)
        if not rec.passed:
            return Verdict(VerdictKind.REFUTED, criterion, e_max, e,
                           reason=f"{_product_text(pair, lvl.q, lvl.r)} lies in m^[{lvl.q}]",
                           transcript=transcript)
    return Verdict(VerdictKind.HOLDS_UP_TO_LEVEL, criterion, e_max, e_max, transcript=transcript)


def fpure_test_general(ideal: Ideal, g: Polynomial | None, t, e_max: int,
                       mode: str = WEAK) -> Verdict:
    """Criterion ``g^r (I^[q] : I) not contained in m^[q]`` for ``A = R/I``.

    The colon is computed by Groebner elimination at every level.
    """
    t = parse_rational(t)
    ring = ideal.ring
    if e_max < 1:
        raise InvalidInput("e_max must be at least 1")
    if g is not None and ideal.contains(g):
        raise InvalidInput("g lies in I")
    criterion = "fpure-" + mode
    transcript = []
    for e in range(1, e_max + 1):
        lvl = r_level(t, e, mode, ring.p)
        try:
            if ideal.is_zero():
                colon = Ideal(ring, [ring.one()])
            else:
                colon = ideal_colon(bracket_power(ideal, lvl.q), ideal)
        except BudgetExceeded as exc:
            return Verdict(VerdictKind.HOLDS_UP_TO_LEVEL, criterion, e_max, e - 1,
                           reason=str(exc), transcript=transcript, truncated=True)
        survivor = None
        for c in colon.generators:
            factors = [c] if g is None else [c, g]
            exps = {0: 1} if g is None else {0: 1, 1: lvl.r}
            h = BracketPowers(factors).power_product(exps, lvl.q)
            if not h.is_zero():
                survivor = _surviving(h)
                break
        rec = LevelRecord(e, lvl.q, lvl.r, survivor is not None, survivor, colon)
        transcript.append(rec)
        if not rec.passed:
            boundary = f"g^{lvl.r} * " if g is not None and lvl.r else ""
            return Verdict(VerdictKind.REFUTED, criterion, e_max, e,
                           reason=f"{boundary}(I^[{lvl.q}] : I) lies in m^[{lvl.q}]",
                           transcript=transcript)
    return Verdict(VerdictKind.HOLDS_UP_TO_LEVEL, criterion, e_max, e_max, transcript=transcript)


# ---------------------------------------------------------------------------
# Strong and divisorial F-regularity


def _det(matrix) -> Polynomial:
    n = len(matrix)
    ring = matrix[0][0].ring
    total = ring.zero()
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = ring.one()
        for i, j in enumerate(perm):
            term = term * matrix[i][j]
            if term.is_zero():
                break
        total = total - term if inversions % 2 else total + term
    return total


def default_witness(pair: PairSpec) -> Polynomial:
    """Heuristic test element: a maximal Jacobian minor of ``(f_1..f_s)`` outside the ideal.

    With a boundary present the minor is multiplied by ``g`` so that the
    witness also vanishes along the support of the boundary.
    """
    ring = pair.ring
    s = len(pair.ci)
    c = None
    if s == 0:
        c = ring.one()
    else:
        ideal = Ideal(ring, list(pair.ci))
        jac = [[partial_derivative(f, i) for i in range(ring.ngens)] for f in pair.ci]
        for cols in itertools.combinations(range(ring.ngens), s):
            minor = _det([[row[j] for j in cols] for row in jac])
            if not minor.is_zero() and not ideal.contains(minor):
                c = minor
                break
        if c is None:
            c = next((x for x in ring.gens() if not ideal.contains(x)), ring.one())
    if pair.has_boundary:
        c = c * pair.g
    return c


def strong_freg_test_ci(pair: PairSpec, e_max: int, witness: Polynomial | None = None,
                        transcript_budget: int | None = None) -> Verdict:
    """Strong F-regularity of a complete-intersection pair.

    Stages: the round-down of the boundary must vanish; the pair must not be
    refuted as F-pure; then a witness ``c`` is searched for a level with
    ``c (f_1...f_s)^(q-1) g^r`` outside ``m^[q]``.  Whether one witness
    suffices for every ``c`` is a tight-closure fact taken on trust.
    """
    criterion = "strong-freg"
    if pair.g is not None and pair.t >= 1:
        return Verdict(VerdictKind.REFUTED, criterion, e_max, None,
                       reason="round-down of the boundary is nonzero (t >= 1)")
    fp = fpure_test_ci(pair, e_max)
    if fp.refuted:
        return Verdict(VerdictKind.REFUTED, criterion, e_max, fp.level,
                       reason="not F-pure: " + fp.reason, transcript=fp.transcript)
    if witness is None:
        witness = default_witness(pair)
    elif witness.ring != pair.ring:
        raise InvalidInput("witness from another ring")
    if witness.is_zero() or (pair.ci and Ideal(pair.ring, list(pair.ci)).contains(witness)):
        raise InvalidInput("witness must be nonzero modulo (f_1..f_s)")

    powers = _powers_for(pair, witness)
    transcript = []
    for e in range(1, e_max + 1):
        lvl = r_level(pair.t, e, pair.mode, pair.p)
        h = fedder_product(pair, lvl.q, lvl.r, witness, powers)
        rec = LevelRecord(e, lvl.q, lvl.r, not h.is_zero(), _surviving(h))
        transcript.append(rec)
        if rec.passed:
            return Verdict(VerdictKind.CERTIFIED_POSITIVE, criterion, e_max, e,
                           reason=f"{_product_text(pair, lvl.q, lvl.r, witness)} survives mod m^[{lvl.q}]",
                           witness=witness, transcript=transcript)

    if transcript_budget is None:
        transcript_budget = current_budget().transcript_dimension
    base = _powers_for(pair)
    for rec in transcript:
        dim = rec.q ** pair.ring.ngens
        if dim > transcript_budget:
            rec.note = f"colon omitted: dimension {dim} exceeds {transcript_budget}"
            continue
        h = fedder_product(pair, rec.q, rec.r, powers=base)
        rec.colon = colon_artinian(rec.q, h, budget=transcript_budget)
    return Verdict(VerdictKind.INCONCLUSIVE, criterion, e_max, None,
                   reason=f"witness {witness} dies in m^[q] at every level",
                   witness=witness, transcript=transcript)


def quotient_pair(pair: PairSpec) -> PairSpec:
    if pair.g is None:
        raise InvalidInput("pair has no boundary")
    return PairSpec(pair.ring, pair.ci + (pair.g,), None, Fraction(0), pair.mode)


def divisorial_freg_test(pair: PairSpec, e_max: int, witness: Polynomial | None = None,
                         transcript_budget: int | None = None) -> Verdict:
    """Divisorial F-regularity of ``(A, div g)`` via strong F-regularity of ``A/gA``."""
    if pair.g is None or pair.t != 1:
        raise InvalidInput("divisorial test needs a boundary with coefficient exactly 1")
    v = strong_freg_test_ci(quotient_pair(pair), e_max, witness, transcript_budget)
    v.criterion = "divisorial-freg"
    return v


# ---------------------------------------------------------------------------
# Consistency checks between verdicts


@dataclass
class ConsistencyReport:
    checks: list = field(default_factory=list)  # (name, ok, detail)

    @property
    def violations(self) -> list:
        return [c for c in self.checks if not c[1]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        if not ok:
            log.error("internal inconsistency: %s %s", name, detail)
        self.checks.append((name, ok, detail))


def validate_pair_implications(pair: PairSpec, weak: Verdict, strong: Verdict, lower=()) -> ConsistencyReport:
    """Criterion-level consequences of the basic implications between pair properties.

    ``lower`` holds ``(t', verdict)`` weak-mode runs for smaller ``t'``.
    """
    rep = ConsistencyReport()
    wl, sl = weak.passed_levels(), strong.passed_levels()
    for e, ok in sl.items():
        if ok and e in wl:
            rep.add(f"strong=>weak@{e}", wl[e], "strong level passed but weak failed")
    t = pair.t
    if pair.g is not None and t > 1:
        bound = t / (t - 1)
        e0 = next((e for e in range(1, weak.max_e + 1) if pair.p ** e >= bound), None)
        if e0 is not None:
            ok = weak.refuted and weak.level is not None and weak.level <= e0
            rep.add(f"t>1 refutes by level {e0}", ok, weak.summary())
    for t2, v in lower:
        if parse_rational(t2) > t:
            continue
        ll = v.passed_levels()
        for e, ok in wl.items():
            if ok and e in ll:
                rep.add(f"monotone t={t2}@{e}", ll[e], "smaller t failed where larger passed")
    return rep


def run_pair_implications(pair: PairSpec, e_max: int, lower_ts=()) -> ConsistencyReport:
    weak = fpure_test_ci(pair.with_mode(WEAK), e_max)
    strong = fpure_test_ci(pair.with_mode(STRONG), e_max)
    lower = [(t2, fpure_test_ci(pair.with_mode(WEAK).with_t(t2), e_max)) for t2 in lower_ts]
    return validate_pair_implications(pair, weak, strong, lower)
