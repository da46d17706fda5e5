"""Exact linear algebra: sparse row reduction over F_p and Bareiss over Z."""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInput


class ModPEchelon:
    """Incrementally built reduced row echelon basis over F_p.

    Rows are sparse ``{column: value}`` dicts with integer columns.  Each
    stored row is monic at its pivot, which is its smallest column.
    """

    def __init__(self, p: int):
        self.p = p
        self.rows: dict = {}

    def reduce(self, row: dict) -> dict:
        """Reduce ``row`` against the stored pivots (pivot columns only)."""
        p = self.p
        row = {c: v % p for c, v in row.items() if v % p}
        pending = sorted(c for c in row if c in self.rows)
        # pivots are reduced in increasing column order; eliminating pivot c can
        # only introduce columns > c, so re-scan lazily
        while pending:
            c = pending.pop(0)
            v = row.get(c)
            if not v:
                continue
            for col, w in self.rows[c].items():
                nv = (row.get(col, 0) - v * w) % p
                if nv:
                    if col not in row and col in self.rows and col != c:
                        _insort(pending, col)
                    row[col] = nv
                else:
                    row.pop(col, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert ``row``; return False if it was already in the span."""
        row = self.reduce(row)
        if not row:
            return False
        p = self.p
        piv = min(row)
        inv = pow(row[piv], -1, p)
        row = {c: v * inv % p for c, v in row.items()}
        self.rows[piv] = row
        return True

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def make_reduced(self) -> None:
        """Back-substitute so each pivot column is zero in every other row."""
        p = self.p
        for piv in sorted(self.rows, reverse=True):
            row = self.rows[piv]
            for c in sorted(k for k in row if k != piv and k in self.rows):
                v = row.get(c)
                if not v:
                    continue
                for col, w in self.rows[c].items():
                    nv = (row.get(col, 0) - v * w) % p
                    if nv:
                        row[col] = nv
                    else:
                        row.pop(col, None)

    def orthogonal_complement(self, ncols: int) -> list:
        """Basis of the complement under the standard dot product.

        One vector per free column ``j``; ``j`` is the largest column in
        that vector's support and carries coefficient 1.
        """
        self.make_reduced()
        p = self.p
        hits: dict = {}
        for piv, row in self.rows.items():
            for c, v in row.items():
                if c != piv:
                    hits.setdefault(c, []).append((piv, v))
        out = []
        for j in range(ncols):
            if j in self.rows:
                continue
            vec = {j: 1}
            for piv, v in hits.get(j, ()):
                vec[piv] = (-v) % p
            out.append(vec)
        return out


def _insort(seq: list, x) -> None:
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    if lo == len(seq) or seq[lo] != x:
        seq.insert(lo, x)


# ---------------------------------------------------------------------------
# Integer matrices


def bareiss_determinant(m) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, r)) for r in m]
    n = len(a)
    if any(len(r) != n for r in a):
        raise InvalidInput("matrix is not square")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def leading_principal_minors(m) -> list:
    return [bareiss_determinant([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def bareiss_solve(m, rhs) -> list:
    """Solve ``m x = rhs`` exactly for nonsingular integer ``m``.

    Forward elimination is fraction-free on the augmented matrix, so every
    intermediate entry is an integer minor; only the back substitution
    divides.
    """
    n = len(m)
    a = [list(map(int, row)) + [int(b)] for row, b in zip(m, rhs)]
    if len(a) != n or any(len(r) != n + 1 for r in a):
        raise InvalidInput("shape mismatch")
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                raise InvalidInput("singular matrix")
            a[k], a[swap] = a[swap], a[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(a[i][n]) - sum(a[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / a[i][i]
    return x
