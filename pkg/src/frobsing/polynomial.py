"""Sparse multivariate polynomials over a prime field F_p.

A :class:`Polynomial` maps exponent tuples to nonzero residues in ``[0, p)``.
Values are immutable; every operation returns a new polynomial.  The
canonical display order is graded lexicographic, largest term first.

Powers modulo the Frobenius bracket power ``m^[q] = (x_1^q, ..., x_d^q)``
are the hot path of every splitting criterion, so :class:`BracketPowers`
splits the exponent into base-``p`` digits and lifts each digit's power with
the (additive) Frobenius map before multiplying, discarding every term with
an exponent ``>= q`` after each product.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import InvalidInput, ParseError, SizingError

EXP_LIMIT = 2**31

Monomial = tuple  # tuple[int, ...]


def is_prime(n: int) -> bool:
    """Deterministic primality test for machine-word integers."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    if n % 3 == 0:
        return n == 3
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def prime_power_exponent(q: int, p: int) -> int:
    """Return ``e`` with ``q == p**e``; raise if ``q`` is not a power of ``p``."""
    if q < 1:
        raise InvalidInput(f"{q} is not a power of {p}")
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    if q != 1:
        raise InvalidInput(f"not a power of {p}")
    return e


def _check_exponent(a: Monomial) -> Monomial:
    for v in a:
        if v >= EXP_LIMIT:
            raise SizingError(f"exponent {v} exceeds 2^31")
    return a


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Ring:
    """Polynomial ring F_p[x_1, ..., x_d] with named variables."""

    p: int
    names: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not (2 <= self.p < EXP_LIMIT) or not is_prime(self.p):
            raise InvalidInput(f"p={self.p} is not a prime below 2^31")
        if not self.names:
            raise InvalidInput("a ring needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise InvalidInput(f"duplicate variable names in {self.names}")
        for n in self.names:
            if not _IDENT.match(n):
                raise InvalidInput(f"bad variable name {n!r}")

    @property
    def ngens(self) -> int:
        return len(self.names)

    def index(self, var) -> int:
        if isinstance(var, str):
            try:
                return self.names.index(var)
            except ValueError:
                raise InvalidInput(f"unknown variable {var!r}") from None
        if not 0 <= var < self.ngens:
            raise InvalidInput(f"variable index {var} out of range")
        return var

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.ngens: c})

    def monomial(self, exps, c: int = 1) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.ngens or any(v < 0 for v in exps):
            raise InvalidInput(f"bad exponent vector {exps}")
        return Polynomial(self, {_check_exponent(exps): c})

    def gen(self, var) -> "Polynomial":
        i = self.index(var)
        return self.monomial(tuple(int(j == i) for j in range(self.ngens)))

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.ngens)]

    def parse(self, text: str) -> "Polynomial":
        return poly_parse(text, self.names, self.p)

    def with_extra_variables(self, extra: Iterable[str]) -> "Ring":
        """Ring with ``extra`` variables placed *before* the existing ones."""
        return Ring(self.p, tuple(extra) + self.names)


class Polynomial:
    """Immutable sparse polynomial; see the module docstring."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping | None = None, *, _clean: bool = False):
        self.ring = ring
        if _clean:
            self._terms = terms
        else:
            p, d = ring.p, ring.ngens
            clean = {}
            for a, c in (terms or {}).items():
                a = tuple(a)
                if len(a) != d:
                    raise InvalidInput(f"exponent {a} does not match {d} variables")
                c %= p
                if c:
                    clean[a] = c
            self._terms = clean
        self._hash = None

    # -- basic access ---------------------------------------------------

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        zero = (0,) * self.ring.ngens
        return all(a == zero for a in self._terms)

    def coefficient(self, exps) -> int:
        return self._terms.get(tuple(exps), 0)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.ring.ngens, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(a) for a in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(a) for a in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(a) for a in self._terms}) <= 1

    def support(self) -> list:
        return sorted(self._terms, key=_grlex_key, reverse=True)

    def variables_used(self) -> set:
        return {i for a in self._terms for i, v in enumerate(a) if v}

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise InvalidInput("polynomials live in different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self._terms)
        for a, c in other._terms.items():
            v = (out.get(a, 0) + c) % p
            if v:
                out[a] = v
            else:
                out.pop(a, None)
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {a: p - c for a, c in self._terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {a: v * c % p for a, v in self._terms.items()}, _clean=True)

    def mul_term(self, exps: Monomial, c: int = 1) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        out = {}
        for a, v in self._terms.items():
            out[_check_exponent(tuple(x + y for x, y in zip(a, exps)))] = v * c % p
        return Polynomial(self.ring, out, _clean=True)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _mul(self, other, None)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise InvalidInput("polynomial powers need a nonnegative integer exponent")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, q: int) -> "Polynomial":
        """Drop every term with some exponent ``>= q`` (reduction mod ``m^[q]``)."""
        return Polynomial(self.ring, {a: c for a, c in self._terms.items() if max(a) < q},
                          _clean=True)

    def mul_truncated(self, other: "Polynomial", q: int) -> "Polynomial":
        """Product reduced modulo ``m^[q]``."""
        other = self._coerce(other)
        return _mul(self, other, q)

    def monic_by(self, c: int) -> "Polynomial":
        return self.scale(pow(c, -1, self.ring.p))

    # -- comparisons and display ----------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        return poly_print(self)

    def __repr__(self):
        return f"Polynomial({poly_print(self)!r}, p={self.ring.p}, vars={','.join(self.ring.names)})"

    # -- ring changes ---------------------------------------------------

    def embed(self, ring: Ring, offset: int) -> "Polynomial":
        """Copy into ``ring`` whose variables are ``offset`` new ones followed by ours."""
        if ring.ngens != self.ring.ngens + offset or ring.p != self.ring.p:
            raise InvalidInput("incompatible target ring")
        pad = (0,) * offset
        return Polynomial(ring, {pad + a: c for a, c in self._terms.items()}, _clean=True)

    def restrict(self, ring: Ring, offset: int) -> "Polynomial":
        """Inverse of :meth:`embed`; the first ``offset`` exponents must vanish."""
        out = {}
        for a, c in self._terms.items():
            if any(a[:offset]):
                raise InvalidInput("polynomial involves eliminated variables")
            out[a[offset:]] = c
        return Polynomial(ring, out, _clean=True)


def _grlex_key(a):
    return (sum(a), a)


def _mul(f: Polynomial, g: Polynomial, q: int | None) -> Polynomial:
    p = f.ring.p
    ft, gt = f._terms, g._terms
    if len(ft) > len(gt):
        ft, gt = gt, ft
    if q is not None:
        ft = {a: c for a, c in ft.items() if max(a) < q}
        gt = {a: c for a, c in gt.items() if max(a) < q}
    out: dict = {}
    get = out.get
    for a, c in ft.items():
        for b, v in gt.items():
            s = tuple([x + y for x, y in zip(a, b)])
            if q is not None and max(s) >= q:
                continue
            out[s] = (get(s, 0) + c * v) % p
    if q is None:
        for s in out:
            if max(s, default=0) >= EXP_LIMIT:
                _check_exponent(s)
    return Polynomial(f.ring, {a: c for a, c in out.items() if c}, _clean=True)


# ---------------------------------------------------------------------------
# Text format


def poly_print(f: Polynomial) -> str:
    """Canonical text form, parseable by :func:`poly_parse`."""
    if f.is_zero():
        return "0"
    p = f.ring.p
    names = f.ring.names
    pieces = []
    for a in f.support():
        c = f._terms[a]
        neg = p > 2 and c > p // 2
        mag = p - c if neg else c
        factors = []
        for name, v in zip(names, a):
            if v == 1:
                factors.append(name)
            elif v > 1:
                factors.append(f"{name}^{v}")
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.ring = ring
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            num, ident, sym = m.groups()
            start = m.start(m.lastindex)
            if num is not None:
                self.tokens.append(("num", int(num), start))
            elif ident is not None:
                self.tokens.append(("ident", ident, start))
            elif sym in "+-*^()":
                self.tokens.append((sym, sym, start))
            else:
                raise ParseError(f"unexpected character {sym!r}", start)
            pos = m.end()
        self.end = len(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", None, self.end)

    def take(self, kind=None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty polynomial", 0)
        f = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return f

    def expr(self) -> Polynomial:
        negate = False
        if self.peek()[0] == "-":
            self.take()
            negate = True
        f = self.term()
        if negate:
            f = -f
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            f = f + t if op == "+" else f - t
        return f

    def term(self) -> Polynomial:
        f = self.factor()
        while self.peek()[0] == "*":
            self.take()
            f = f * self.factor()
        return f

    def factor(self) -> Polynomial:
        b = self.base()
        if self.peek()[0] == "^":
            self.take()
            k = self.take("num")[1]
            b = b ** k
        return b

    def base(self) -> Polynomial:
        kind, value, pos = self.peek()
        if kind == "num":
            self.take()
            return self.ring.const(value)
        if kind == "ident":
            self.take()
            if value not in self.ring.names:
                raise ParseError(f"unknown variable {value!r}", pos)
            return self.ring.gen(value)
        if kind == "(":
            self.take()
            f = self.expr()
            self.take(")")
            return f
        what = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"expected a number, variable or '(', found {what}", pos)


def poly_parse(text: str, vars, p: int) -> Polynomial:
    """Parse ``text`` into a polynomial over F_p in the variables ``vars``.

    >>> str(poly_parse("(x+y)^2", ["x", "y"], 2))
    'x^2 + y^2'
    """
    if isinstance(vars, str):
        vars = [v.strip() for v in vars.split(",") if v.strip()]
    ring = vars if isinstance(vars, Ring) else Ring(p, tuple(vars))
    return _Parser(text, ring).parse()


# ---------------------------------------------------------------------------
# Frobenius, bracket powers, derivatives


def frobenius_power(f: Polynomial, q: int) -> Polynomial:
    """``f^q`` for ``q`` a power of p, computed termwise as ``sum c^q x^(q a)``."""
    p = f.ring.p
    prime_power_exponent(q, p)
    return Polynomial(
        f.ring,
        {_check_exponent(tuple(q * v for v in a)): pow(c, q, p) for a, c in f.items()},
        _clean=True,
    )


def _digits(k: int, p: int) -> list:
    out = []
    while k:
        k, r = divmod(k, p)
        out.append(r)
    return out


class BracketPowers:
    """Cached powers of fixed polynomials modulo ``m^[q]``.

    ``power_product({i: k_i}, q)`` returns ``prod f_i^{k_i}`` reduced mod
    ``m^[q]`` for ``q`` a power of p.  Each exponent is split in base p;
    the digit-``i`` contribution ``prod f^{k_ij}`` only matters modulo
    ``m^[q/p^i]`` before its Frobenius lift, so it stays small.
    """

    def __init__(self, factors):
        self.factors = list(factors)
        if not self.factors:
            raise InvalidInput("need at least one factor")
        self.ring = self.factors[0].ring
        for f in self.factors:
            if f.ring != self.ring:
                raise InvalidInput("factors live in different rings")
        self._cache: dict = {}

    def _small_power(self, idx: int, k: int, bound: int) -> Polynomial:
        key = (idx, k, bound)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        f = self.factors[idx]
        if k == 0:
            out = self.ring.one()
        elif k == 1:
            out = f.truncate(bound)
        else:
            half = self._small_power(idx, k // 2, bound)
            out = half.mul_truncated(half, bound)
            if k % 2:
                out = out.mul_truncated(f.truncate(bound), bound)
        self._cache[key] = out
        return out

    def power_product(self, exponents, q: int) -> Polynomial:
        p = self.ring.p
        prime_power_exponent(q, p)
        if isinstance(exponents, int):
            exponents = {0: exponents}
        elif not isinstance(exponents, Mapping):
            exponents = dict(enumerate(exponents))
        for k in exponents.values():
            if k < 0:
                raise InvalidInput("negative exponent")
        digits = {i: _digits(k, p) for i, k in exponents.items() if k}
        top = max((len(ds) for ds in digits.values()), default=0)
        result = self.ring.one().truncate(q)
        for level in range(top - 1, -1, -1):
            scale = p ** level
            bound = -(-q // scale)
            piece = self.ring.one()
            for i, ds in digits.items():
                if level < len(ds) and ds[level]:
                    piece = piece.mul_truncated(self._small_power(i, ds[level], bound), bound)
            if scale > 1:
                piece = frobenius_power(piece, scale)
            result = result.mul_truncated(piece, q)
            if result.is_zero():
                break
        return result

    def power(self, k: int, q: int, idx: int = 0) -> Polynomial:
        return self.power_product({idx: k}, q)


def poly_pow_mod_bracket(f: Polynomial, k: int, q: int) -> Polynomial:
    """Representative of ``f^k`` modulo ``m^[q]`` with every exponent ``< q``."""
    return BracketPowers([f]).power(k, q)


def power_product_mod_bracket(pairs, q: int) -> Polynomial:
    """``prod f^k`` over ``(f, k)`` pairs, reduced modulo ``m^[q]``."""
    pairs = list(pairs)
    return BracketPowers([f for f, _ in pairs]).power_product([k for _, k in pairs], q)


def partial_derivative(f: Polynomial, var) -> Polynomial:
    i = f.ring.index(var)
    p = f.ring.p
    out = {}
    for a, c in f.items():
        if a[i] % p:
            b = a[:i] + (a[i] - 1,) + a[i + 1:]
            out[b] = c * a[i] % p
    return Polynomial(f.ring, out, _clean=True)


def initial_form(f: Polynomial):
    """Return ``(n, f_n)``: the multiplicity and the lowest-degree homogeneous part."""
    if f.is_zero():
        raise InvalidInput("the zero polynomial has no initial form")
    n = f.min_degree()
    return n, Polynomial(f.ring, {a: c for a, c in f.items() if sum(a) == n}, _clean=True)
