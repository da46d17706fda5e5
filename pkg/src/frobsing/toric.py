"""Toric pairs at the lattice level.

A cone is given by its primitive rays ``n_1..n_s`` in ``Z^d``.  The divisorial
module of ``sum lambda_i D_i`` is spanned by the monomials ``x^m`` with
``<m, n_i> >= -lambda_i`` for every ray; the canonical module has every
``lambda_i = -1``.  Frobenius sends ``x^m`` to ``x^(qm)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from .errors import InvalidInput, ParseError


def _dot(m, n) -> int:
    return sum(a * b for a, b in zip(m, n))


def _feasible(rows, rhs) -> bool:
    """Is ``{x : rows[k].x >= rhs[k]}`` nonempty over the rationals?

    Plain Fourier-Motzkin elimination, exact in Fractions.  Fine for the
    handful of rays a desk-scale cone carries.
    """
    ineqs = [([Fraction(v) for v in r], Fraction(b)) for r, b in zip(rows, rhs)]
    dim = len(rows[0]) if rows else 0
    for var in range(dim):
        pos, neg, keep = [], [], []
        for coeffs, b in ineqs:
            c = coeffs[var]
            if c > 0:
                pos.append((coeffs, b))
            elif c < 0:
                neg.append((coeffs, b))
            else:
                keep.append((coeffs, b))
        for cp, bp in pos:
            for cn, bn in neg:
                sp, sn = -cn[var], cp[var]
                coeffs = [sp * u + sn * v for u, v in zip(cp, cn)]
                keep.append((coeffs, sp * bp + sn * bn))
        ineqs = keep
    # every variable is gone: each row reads 0 >= b
    return all(b <= 0 for _, b in ineqs)


@dataclass(frozen=True)
class Cone:
    rays: tuple

    def __post_init__(self):
        rays = tuple(tuple(int(v) for v in r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        if not rays:
            raise InvalidInput("a cone needs at least one ray")
        d = len(rays[0])
        if d == 0 or any(len(r) != d for r in rays):
            raise InvalidInput("rays must share a positive dimension")
        for r in rays:
            if gcd(*r) != 1:
                raise InvalidInput(f"ray {r} is not primitive")
        for i, a in enumerate(rays):
            for b in rays[i + 1:]:
                if _parallel(a, b):
                    raise InvalidInput(f"rays {a} and {b} are parallel")
        # no line inside the cone <=> some m pairs strictly positively with every ray
        if not _feasible(rays, [1] * len(rays)):
            raise InvalidInput("cone is not strongly convex")

    @property
    def dim(self) -> int:
        return len(self.rays[0])

    @classmethod
    def parse(cls, text: str) -> "Cone":
        rays = []
        try:
            for chunk in text.split(";"):
                if chunk.strip():
                    rays.append(tuple(int(v) for v in chunk.split(",")))
        except ValueError:
            raise ParseError(f"cannot read rays from {text!r}", 0) from None
        return cls(tuple(rays))

    def __str__(self) -> str:
        return ";".join(",".join(map(str, r)) for r in self.rays)


def _parallel(a, b) -> bool:
    d = len(a)
    return all(a[i] * b[j] == a[j] * b[i] for i in range(d) for j in range(i + 1, d))


def _coeffs(cone: Cone, coeffs) -> list:
    lam = [Fraction(c) for c in coeffs]
    if len(lam) != len(cone.rays):
        raise InvalidInput("one coefficient per ray is required")
    return lam


def in_module(cone: Cone, coeffs, m) -> bool:
    lam = _coeffs(cone, coeffs)
    return all(_dot(m, n) >= -c for n, c in zip(cone.rays, lam))


def divisor_module_points(cone: Cone, coeffs, box: int) -> frozenset:
    """Lattice points ``m`` with ``|m|_inf <= box`` and ``<m, n_i> >= -lambda_i``."""
    if box < 1:
        raise InvalidInput("box must be at least 1")
    lam = _coeffs(cone, coeffs)
    rng = range(-box, box + 1)
    return frozenset(
        m for m in product(rng, repeat=cone.dim)
        if all(_dot(m, n) >= -c for n, c in zip(cone.rays, lam))
    )


def canonical_coeffs(cone: Cone) -> list:
    return [Fraction(-1)] * len(cone.rays)


def frobenius_twist_coeffs(cone: Cone, delta_rays, q: int) -> list:
    """Coefficients of ``q K + (q-1) Delta`` for reduced ``Delta`` on ``delta_rays``."""
    delta = set(delta_rays)
    if any(not 0 <= i < len(cone.rays) for i in delta):
        raise InvalidInput("boundary ray index out of range")
    return [Fraction(-q + (q - 1) * (i in delta)) for i in range(len(cone.rays))]


@dataclass
class ToricCheck:
    q: int
    full_delta: bool
    identity: bool | None          # set equality, full boundary only
    contained: bool                # A(qK+(q-1)D) inside A(K)
    scaled_contained: bool         # q*A(K) inside A(qK+(q-1)D)
    injective: bool
    twisted_size: int
    canonical_size: int
    witnesses: list = field(default_factory=list)  # in A(K) but not in the twisted module

    @property
    def ok(self) -> bool:
        base = self.contained and self.scaled_contained and self.injective
        return base and (self.identity is not False)


def toric_fpure_details(cone: Cone, delta_rays, e: int, box: int = 8, p: int = 2,
                        max_witnesses: int = 10) -> ToricCheck:
    """Run every lattice check for ``q = p^e`` and keep the evidence.

    The lattice statements are uniform in ``q``; ``p`` only fixes which
    ``q`` is tested.
    """
    if e < 1:
        raise InvalidInput("e must be at least 1")
    q = p ** e
    delta = sorted(set(delta_rays))
    twisted_coeffs = frobenius_twist_coeffs(cone, delta, q)
    twisted = divisor_module_points(cone, twisted_coeffs, box)
    canonical = divisor_module_points(cone, canonical_coeffs(cone), box)
    scaled = {tuple(q * v for v in m) for m in canonical}
    full = len(delta) == len(cone.rays)
    witnesses = sorted(canonical - twisted)[:max_witnesses]
    return ToricCheck(
        q=q,
        full_delta=full,
        identity=(twisted == canonical) if full else None,
        contained=twisted <= canonical,
        scaled_contained=all(in_module(cone, twisted_coeffs, m) for m in scaled),
        injective=len(scaled) == len(canonical),
        twisted_size=len(twisted),
        canonical_size=len(canonical),
        witnesses=witnesses,
    )


def toric_fpure_verify(cone: Cone, delta_rays, e: int, box: int = 8, p: int = 2) -> bool:
    return toric_fpure_details(cone, delta_rays, e, box, p).ok
