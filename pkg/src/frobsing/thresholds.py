"""F-pure thresholds of hypersurfaces ``(F_p[x], t*div(f))`` from nu-values.

``nu_value(f, e)`` is the largest ``j`` with ``f^j`` outside ``m^[p^e]``.
The weak criterion at ``t`` passes level ``e`` exactly when
``floor(t(q-1)) <= j_e``, which turns each nu-value into an interval
statement about the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .criteria import parse_rational
from .errors import InvalidInput
from .ideal import homogeneous_member_power
from .polynomial import BracketPowers, Polynomial, initial_form, partial_derivative


def _check_f(f: Polynomial) -> None:
    if f.is_zero():
        raise InvalidInput("f must be nonzero")
    if f.constant_term():
        raise InvalidInput("f must lie in the maximal ideal")


def nu_value(f: Polynomial, e: int, powers: BracketPowers | None = None) -> int:
    """Largest ``j`` with ``f^j`` not in ``m^[p^e]``, by binary search."""
    _check_f(f)
    if e < 0:
        raise InvalidInput("e must be nonnegative")
    powers = powers or BracketPowers([f])
    q = f.ring.p ** e
    lo, hi = 0, f.ring.ngens * (q - 1)  # f^lo survives; f^(hi+1) cannot
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if powers.power(mid, q).is_zero():
            hi = mid - 1
        else:
            lo = mid
    return lo


@dataclass
class NuSequence:
    f: Polynomial
    entries: list = field(default_factory=list)  # (e, q, j_e)


def nu_sequence(f: Polynomial, e_max: int) -> NuSequence:
    powers = BracketPowers([f])
    p = f.ring.p
    return NuSequence(f, [(e, p ** e, nu_value(f, e, powers)) for e in range(1, e_max + 1)])


@dataclass
class MultiplicityBounds:
    n: int
    lower: Fraction   # F-pure for every t up to this
    upper: Fraction   # F-purity forces t below this


def multiplicity_bounds(f: Polynomial) -> tuple:
    """``(1/n, d/n)`` for ``f`` of multiplicity ``n`` in ``d`` variables."""
    _check_f(f)
    n, _ = initial_form(f)
    return Fraction(1, n), Fraction(f.ring.ngens, n)


@dataclass
class StrongFPurityPrediction:
    applicable: bool
    n: int
    initial_form: Polynomial
    jacobian: list
    exponents: list          # m_i per variable, None when x_i^m is never reached
    mu: Fraction | None
    predicts_strongly_fpure: bool | None
    reason: str = ""


def predict_strong_fpurity(f: Polynomial, t, p: int | None = None, cap: int | None = None) -> StrongFPurityPrediction:
    """Characteristic bound ``mu = (m_1+...+m_d)/(d - n t)`` for strong F-purity.

    ``m_i`` is the least power of ``x_i`` inside the ideal of partials of the
    initial form.  The prediction is strong F-purity whenever ``p >= mu``.
    """
    _check_f(f)
    t = parse_rational(t)
    p = f.ring.p if p is None else p
    d = f.ring.ngens
    n, fn = initial_form(f)
    jac = [partial_derivative(fn, i) for i in range(d)]
    if not t < min(Fraction(1), Fraction(d, n)):
        return StrongFPurityPrediction(False, n, fn, jac, [], None, None,
                                 reason=f"needs t < min(1, d/n) = {min(Fraction(1), Fraction(d, n))}")
    if cap is None:
        cap = max(n, d * (n - 2) + 1, 1)
    exps = [homogeneous_member_power(i, jac, cap) for i in range(d)]
    if any(m is None for m in exps):
        missing = [f.ring.names[i] for i, m in enumerate(exps) if m is None]
        return StrongFPurityPrediction(True, n, fn, jac, exps, None, None,
                                 reason=f"no power of {', '.join(missing)} up to {cap} lies in J; "
                                        "initial form not smooth or p divides n")
    mu = Fraction(sum(exps)) / (d - n * t)
    return StrongFPurityPrediction(True, n, fn, jac, exps, mu, p >= mu)


@dataclass
class ThresholdReport:
    """F-pure threshold evidence from ``e = 1..e_max``.

    ``upper`` is certified: at ``t = upper`` some computed level fails.
    ``level_watermark`` is the largest ``j_e/(q_e-1)`` that passes every
    computed level, so every ``t`` up to it passes them all.
    ``estimate`` is ``j_E / (q_E - 1)`` at the deepest level; it is a
    heuristic, not a claim of convergence.  The ``strong_*`` fields are the
    same quantities for the ``floor(tq)`` convention.
    """

    f: Polynomial
    entries: list
    upper: Fraction
    level_watermark: Fraction
    estimate: Fraction
    strong_upper: Fraction
    strong_watermark: Fraction
    bounds: MultiplicityBounds
    prediction: StrongFPurityPrediction | None = None

    @property
    def display_upper(self) -> Fraction:
        return min(self.upper, Fraction(1))


def _watermark(entries, scale) -> Fraction:
    """Largest candidate ``j_e / scale(q_e)`` that passes every computed level."""
    best = Fraction(0)
    for _, q0, j0 in entries:
        t = Fraction(j0, scale(q0))
        if t > best and all(floor(t * scale(q)) <= j for _, q, j in entries):
            best = t
    return best


def fpt_report(f: Polynomial, e_max: int, t_predict=None) -> ThresholdReport:
    if e_max < 1:
        raise InvalidInput("e_max must be at least 1")
    seq = nu_sequence(f, e_max)
    ents = seq.entries
    upper = min(Fraction(j + 1, q - 1) for _, q, j in ents)
    water = _watermark(ents, lambda q: q - 1)
    _, qE, jE = ents[-1]
    lo, hi = multiplicity_bounds(f)
    n, _ = initial_form(f)
    return ThresholdReport(
        f=f,
        entries=ents,
        upper=upper,
        level_watermark=water,
        estimate=Fraction(jE, qE - 1),
        strong_upper=min(Fraction(j + 1, q) for _, q, j in ents),
        strong_watermark=_watermark(ents, lambda q: q),
        bounds=MultiplicityBounds(n, lo, hi),
        prediction=None if t_predict is None else predict_strong_fpurity(f, t_predict),
    )
