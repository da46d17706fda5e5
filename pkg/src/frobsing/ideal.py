"""Ideals in F_p[x_1..x_d]: bracket powers, Groebner bases, colons.

Two colon engines live here.  :func:`colon_artinian` handles the hot case
``(m^[q] : h)`` by linear algebra on the q^d-dimensional Artinian quotient;
:func:`ideal_colon` handles arbitrary ``(I : J)`` by Buchberger elimination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BudgetExceeded, FrobsingError, InvalidInput, current_budget
from .linalg import ModPEchelon
from .polynomial import Polynomial, Ring, frobenius_power, prime_power_exponent


# ---------------------------------------------------------------------------
# Monomial orders


def _grevlex(a):
    return (sum(a), tuple(-v for v in reversed(a)))


@dataclass(frozen=True)
class MonomialOrder:
    """``grevlex``, ``lex``, or ``block`` (first ``k`` variables dominate)."""

    kind: str = "grevlex"
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise InvalidInput(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.k < 1:
            raise InvalidInput("block order needs k >= 1")

    def key(self, a):
        if self.kind == "lex":
            return a
        if self.kind == "grevlex":
            return _grevlex(a)
        return (_grevlex(a[: self.k]), _grevlex(a[self.k:]))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(k: int) -> MonomialOrder:
    return MonomialOrder("block", k)


def leading_term(f: Polynomial, order: MonomialOrder = GREVLEX):
    if f.is_zero():
        raise InvalidInput("zero polynomial has no leading term")
    m = max(f.terms, key=order.key)
    return m, f.terms[m]


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(terms: dict, lc: int, p: int) -> dict:
    inv = pow(lc, -1, p)
    return {a: c * inv % p for a, c in terms.items()}


# ---------------------------------------------------------------------------
# Reduction and Buchberger


class _Reducer:
    """Monic divisors with cached leading monomials."""

    def __init__(self, p: int, order: MonomialOrder):
        self.p = p
        self.order = order
        self.lms: list = []
        self.polys: list = []

    def append(self, terms: dict, lm) -> None:
        self.lms.append(lm)
        self.polys.append(terms)

    def reduce(self, terms: dict, skip: int | None = None, full: bool = True) -> dict:
        p, key = self.p, self.order.key
        work = dict(terms)
        rem = {}
        while work:
            m = max(work, key=key)
            c = work[m]
            for i, lm in enumerate(self.lms):
                if i != skip and _divides(lm, m):
                    shift = tuple(x - y for x, y in zip(m, lm))
                    for a, v in self.polys[i].items():
                        s = tuple(x + y for x, y in zip(a, shift))
                        nv = (work.get(s, 0) - c * v) % p
                        if nv:
                            work[s] = nv
                        else:
                            work.pop(s, None)
                    break
            else:
                if not full:
                    rem.update(work)
                    return rem
                rem[m] = c
                del work[m]
        return rem


@dataclass
class GroebnerBasis:
    ring: Ring
    order: MonomialOrder
    elements: list
    reduced: bool = True

    def __post_init__(self):
        self._reducer = _Reducer(self.ring.p, self.order)
        for g in self.elements:
            self._reducer.append(dict(g.terms), leading_term(g, self.order)[0])

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise InvalidInput("polynomial from another ring")
        return Polynomial(self.ring, self._reducer.reduce(dict(f.terms)), _clean=True)

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def leading_monomials(self) -> list:
        return list(self._reducer.lms)

    def is_unit_ideal(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    (a, c), (b, d) = leading_term(f, order), leading_term(g, order)
    l = _lcm(a, b)
    p = f.ring.p
    u = f.mul_term(tuple(x - y for x, y in zip(l, a)), pow(c, -1, p))
    v = g.mul_term(tuple(x - y for x, y in zip(l, b)), pow(d, -1, p))
    return u - v


def groebner(gens, order: MonomialOrder = GREVLEX, max_pairs: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pairs are taken by the normal strategy (smallest lcm first) and pruned
    with the product and chain criteria.  ``max_pairs`` bounds the number of
    S-polynomials actually reduced.
    """
    if isinstance(gens, Ideal):
        gens = gens.generators
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise InvalidInput("Groebner basis of an empty generator list; use Ideal for (0)")
    ring = gens[0].ring
    if any(g.ring != ring for g in gens):
        raise InvalidInput("generators live in different rings")
    if max_pairs is None:
        max_pairs = current_budget().pairs
    p, key = ring.p, order.key

    red = _Reducer(p, order)
    pairs: set = set()
    reductions = 0

    def add(terms: dict) -> None:
        lm = max(terms, key=key)
        terms = _monic(terms, terms[lm], p)
        n = len(red.lms)
        red.append(terms, lm)
        for i in range(n):
            pairs.add((i, n))

    for g in gens:
        t = red.reduce(dict(g.terms))
        if t:
            add(t)

    while pairs:
        i, j = min(pairs, key=lambda ij: (key(_lcm(red.lms[ij[0]], red.lms[ij[1]])), ij))
        pairs.discard((i, j))
        a, b = red.lms[i], red.lms[j]
        l = _lcm(a, b)
        if all(x == 0 or y == 0 for x, y in zip(a, b)):
            continue
        if any(
            k != i and k != j and _divides(red.lms[k], l)
            and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs
            for k in range(len(red.lms))
        ):
            continue
        reductions += 1
        if reductions > max_pairs:
            raise BudgetExceeded(f"Buchberger pair limit {max_pairs} exceeded", required=reductions)
        sa = tuple(x - y for x, y in zip(l, a))
        sb = tuple(x - y for x, y in zip(l, b))
        s = {}
        for m, c in red.polys[i].items():
            s[tuple(x + y for x, y in zip(m, sa))] = c
        for m, c in red.polys[j].items():
            t = tuple(x + y for x, y in zip(m, sb))
            v = (s.get(t, 0) - c) % p
            if v:
                s[t] = v
            else:
                s.pop(t, None)
        h = red.reduce(s)
        if h:
            add(h)

    # minimalize, then interreduce
    lms, polys = red.lms, red.polys
    keep = []
    for i, lm in enumerate(lms):
        if any(
            _divides(lms[j], lm) and (lms[j] != lm or j < i)
            for j in range(len(lms)) if j != i
        ):
            continue
        keep.append(i)
    final = _Reducer(p, order)
    for i in keep:
        final.append(polys[i], lms[i])
    elements = []
    for idx, i in enumerate(keep):
        lm = lms[i]
        tail = dict(polys[i])
        tail.pop(lm)
        tail = final.reduce(tail, skip=idx) if tail else {}
        tail[lm] = 1
        elements.append(Polynomial(ring, tail, _clean=True))
    elements.sort(key=lambda g: key(leading_term(g, order)[0]))
    return GroebnerBasis(ring, order, elements, reduced=True)


# ---------------------------------------------------------------------------
# Ideals


@dataclass
class Ideal:
    """Ideal given by generators; equality is decided through normal forms."""

    ring: Ring
    generators: list = field(default_factory=list)

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if g.ring != self.ring:
                raise InvalidInput("generator from another ring")
            if not g.is_zero() and g not in gens:
                gens.append(g)
        self.generators = gens
        self._gb: dict = {}

    @classmethod
    def of(cls, *gens: Polynomial) -> "Ideal":
        if not gens:
            raise InvalidInput("Ideal.of needs at least one generator")
        return cls(gens[0].ring, list(gens))

    @classmethod
    def maximal(cls, ring: Ring) -> "Ideal":
        return cls(ring, ring.gens())

    def is_zero(self) -> bool:
        return not self.generators

    def groebner(self, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
        if self.is_zero():
            return GroebnerBasis(self.ring, order, [])
        gb = self._gb.get(order)
        if gb is None:
            gb = self._gb[order] = groebner(self.generators, order)
        return gb

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        if self.is_zero():
            return False
        return self.groebner().contains(f)

    __contains__ = contains

    def is_subset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: "Ideal") -> bool:
        return self.is_subset(other) and other.is_subset(self)

    def is_unit(self) -> bool:
        return not self.is_zero() and self.groebner().is_unit_ideal()

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.generators + other.generators)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in sorted(self.generators, key=lambda g: (g.degree(), str(g)))) + ")"


def bracket_power(ideal: Ideal, q: int) -> Ideal:
    """``I^[q]``, generated by the q-th powers of the generators of ``I``."""
    prime_power_exponent(q, ideal.ring.p)
    return Ideal(ideal.ring, [frobenius_power(u, q) for u in ideal.generators])


def bracket_max(ring: Ring, q: int) -> Ideal:
    return bracket_power(Ideal.maximal(ring), q)


def in_bracket_max(f: Polynomial, q: int) -> bool:
    """Membership in ``m^[q]``: every term must have some exponent ``>= q``."""
    return all(max(a) >= q for a in f.terms)


def ideal_member(f: Polynomial, ideal: Ideal) -> bool:
    return ideal.contains(f)


# ---------------------------------------------------------------------------
# Colon by linear algebra on R / m^[q]


def colon_artinian(q: int, h: Polynomial, budget: int | None = None,
                   order: MonomialOrder = GREVLEX) -> Ideal:
    """``(m^[q] : h)`` via the multiplication-by-h map on ``R/m^[q]``.

    ``R/m^[q]`` is Gorenstein with socle ``x^(q-1,...,q-1)``, so the kernel of
    multiplication by ``h`` is the orthogonal complement of the image ``hR``
    under the socle pairing.  One echelon pass over the image yields a basis
    of that complement with distinct leading monomials; the elements with
    minimal leading monomials, together with the ``x_i^q``, form a Groebner
    basis of the colon.
    """
    ring = h.ring
    prime_power_exponent(q, ring.p)
    d = ring.ngens
    dim = q ** d
    if budget is None:
        budget = current_budget().dimension
    if dim > budget:
        raise BudgetExceeded(f"R/m^[{q}] has dimension {dim}, budget is {budget}", required=dim)
    gens_q = [frobenius_power(x, q) for x in ring.gens()]
    h = h.truncate(q)
    if h.is_zero():
        return Ideal(ring, [ring.one()])

    top = q - 1
    mons = list(itertools.product(range(q), repeat=d))
    # column of v is the rank of its reflection (q-1) - v in the monomial order
    mons.sort(key=lambda v: order.key(tuple(top - x for x in v)))
    col = {v: i for i, v in enumerate(mons)}

    ech = ModPEchelon(ring.p)
    hterms = list(h.terms.items())
    # rows h * x^b, low-degree multipliers first (they span the most)
    for b in sorted(mons, key=sum):
        row = {}
        for a, c in hterms:
            s = tuple(x + y for x, y in zip(a, b))
            if max(s) < q:
                row[col[s]] = c
        if row:
            ech.add(row)
        if ech.rank == dim:
            break

    kernel = []
    for vec in ech.orthogonal_complement(dim):
        lead = max(vec)
        terms = {tuple(top - x for x in mons[j]): c for j, c in vec.items()}
        kernel.append((tuple(top - x for x in mons[lead]), terms))

    lead_set = [lm for lm, _ in kernel]
    minimal = [(lm, terms) for lm, terms in kernel
               if not any(other != lm and _divides(other, lm) for other in lead_set)]
    gens = [xq for xq in gens_q
            if not any(_divides(lm, leading_term(xq, order)[0]) for lm, _ in minimal)]
    gens += [Polynomial(ring, terms, _clean=True) for _, terms in minimal]
    return Ideal(ring, gens)


# ---------------------------------------------------------------------------
# Colon by elimination


_AUX = "_elim_t"


def _aux_ring(ring: Ring) -> Ring:
    name = _AUX
    while name in ring.names:
        name += "_"
    return ring.with_extra_variables([name])


def intersect(a: Ideal, b: Ideal, max_pairs: int | None = None) -> Ideal:
    """``a ∩ b`` by eliminating t from ``t·a + (1-t)·b``."""
    ring = a.ring
    if a.is_zero() or b.is_zero():
        return Ideal(ring, [])
    big = _aux_ring(ring)
    t = big.gen(0)
    gens = [t * g.embed(big, 1) for g in a.generators]
    gens += [(1 - t) * g.embed(big, 1) for g in b.generators]
    gb = groebner(gens, block_order(1), max_pairs)
    kept = [g.restrict(ring, 1) for g in gb.elements if not any(m[0] for m in g.terms)]
    return Ideal(ring, kept)


def divide_exact(f: Polynomial, u: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    """Quotient ``f / u``; raises if ``u`` does not divide ``f``."""
    if u.is_zero():
        raise InvalidInput("division by zero polynomial")
    p = f.ring.p
    lm, lc = leading_term(u, order)
    inv = pow(lc, -1, p)
    work = dict(f.terms)
    quot = {}
    while work:
        m = max(work, key=order.key)
        if not _divides(lm, m):
            raise FrobsingError("inexact polynomial division")
        shift = tuple(x - y for x, y in zip(m, lm))
        c = work[m] * inv % p
        quot[shift] = c
        for a, v in u.terms.items():
            s = tuple(x + y for x, y in zip(a, shift))
            nv = (work.get(s, 0) - c * v) % p
            if nv:
                work[s] = nv
            else:
                work.pop(s, None)
    return Polynomial(f.ring, quot, _clean=True)


def colon_element(ideal: Ideal, u: Polynomial, max_pairs: int | None = None) -> Ideal:
    """``(I : u) = (I ∩ (u)) / u``."""
    if u.is_zero():
        raise InvalidInput("colon by the zero polynomial")
    inter = intersect(ideal, Ideal(ideal.ring, [u]), max_pairs)
    return Ideal(ideal.ring, [divide_exact(g, u) for g in inter.generators])


def ideal_colon(ideal: Ideal, other: Ideal, max_pairs: int | None = None,
                verify: bool = True) -> Ideal:
    """``(I : J)`` as the intersection of ``(I : u)`` over generators ``u`` of ``J``."""
    if other.is_zero():
        raise InvalidInput("colon by the zero ideal")
    result = None
    for u in other.generators:
        piece = colon_element(ideal, u, max_pairs)
        result = piece if result is None else intersect(result, piece, max_pairs)
    result = Ideal(ideal.ring, list(result.groebner().elements)) if not result.is_zero() else result
    if verify:
        for c in result.generators:
            for u in other.generators:
                if not ideal.contains(c * u):
                    raise FrobsingError("colon verification failed")
    return result


# ---------------------------------------------------------------------------
# Degree-by-degree homogeneous membership


def _monomials_of_degree(d: int, m: int):
    if d == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in _monomials_of_degree(d - 1, m - first):
            yield (first,) + rest


def homogeneous_member_power(var, gens, cap: int):
    """Least ``m <= cap`` with ``x_var^m`` in the ideal of homogeneous ``gens``.

    Each degree is decided by row reduction of the Macaulay matrix spanned
    by ``monomial * generator`` in that degree.  Returns None when no
    exponent up to ``cap`` works.
    """
    if isinstance(gens, Ideal):
        ring, gens = gens.ring, gens.generators
    else:
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            return None
        ring = gens[0].ring
    gens = [g for g in gens if not g.is_zero()]
    if any(not g.is_homogeneous() for g in gens):
        raise InvalidInput("generators must be homogeneous")
    i = ring.index(var)
    d = ring.ngens
    for m in range(0, cap + 1):
        cols = {}
        ech = ModPEchelon(ring.p)
        for g in gens:
            k = g.degree()
            if k > m:
                continue
            for mon in _monomials_of_degree(d, m - k):
                row = {}
                for a, c in g.terms.items():
                    s = tuple(x + y for x, y in zip(a, mon))
                    row[cols.setdefault(s, len(cols))] = c
                ech.add(row)
        target = tuple(m if j == i else 0 for j in range(d))
        if target in cols and ech.contains({cols[target]: 1}):
            return m
    return None
