"""Exact square matrices over Q, F or L.

Entries are ``Fraction``, ``AlgebraicNumber`` or ``ExtElement``; integers are
promoted to ``Fraction`` on construction so that division never falls back to
floats.  The list-level helpers (``det_rows``, ``rank_rows``, ...) take any
list of rows over a field and are reused by the certification code.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import Singular


def _promote(x):
    if isinstance(x, bool):
        raise TypeError("boolean matrix entry")
    if isinstance(x, int):
        return Fraction(x)
    return x


def det_rows(rows: Sequence[Sequence]) -> object:
    a = [[_promote(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        det = det * p
        for r in range(c + 1, n):
            if a[r][c] == 0:
                continue
            t = a[r][c] / p
            for k in range(c, n):
                a[r][k] = a[r][k] - t * a[c][k]
    return det


def rref_rows(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[_promote(x) for x in r] for r in rows]
    if not a:
        return a, []
    m, n = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                t = a[i][c]
                a[i] = [x - t * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def rank_rows(rows: Sequence[Sequence]) -> int:
    return len(rref_rows(rows)[1])


def nullspace_rows(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    a, pivots = rref_rows(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][f]
        basis.append(v)
    return basis


def inverse_rows(rows: Sequence[Sequence]) -> list[list]:
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref_rows(aug)
    if pivots[:n] != list(range(n)):
        raise Singular("matrix is singular")
    return [row[n:] for row in red]


def charpoly_rows(rows: Sequence[Sequence]) -> list:
    """det(xI - A), ascending coefficients, via reduction to Hessenberg form."""
    h = [[_promote(x) for x in r] for r in rows]
    n = len(h)
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if h[i][m - 1] != 0), None)
        if i is None:
            continue
        if i != m:
            h[i], h[m] = h[m], h[i]
            for row in h:
                row[i], row[m] = row[m], row[i]
        p = h[m][m - 1]
        for i in range(m + 1, n):
            if h[i][m - 1] == 0:
                continue
            t = h[i][m - 1] / p
            for k in range(n):
                h[i][k] = h[i][k] - t * h[m][k]
            for k in range(n):
                h[k][m] = h[k][m] + t * h[k][i]
    polys: list[list] = [[Fraction(1)]]
    for m in range(n):
        # (x - h[m][m]) * p_m
        pm = polys[m]
        nxt = [Fraction(0)] + list(pm)
        for k, c in enumerate(pm):
            nxt[k] = nxt[k] - h[m][m] * c
        prod = Fraction(1)
        for i in range(1, m + 1):
            prod = prod * h[m - i + 1][m - i]
            coef = h[m - i][m] * prod
            if coef == 0:
                continue
            for k, c in enumerate(polys[m - i]):
                nxt[k] = nxt[k] - coef * c
        polys.append(nxt)
    return polys[n]


class Matrix:
    """Immutable square (or rectangular) matrix with exact entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(_promote(x) for x in r) for r in rows)
        if self.rows and any(len(r) != len(self.rows[0]) for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def map(self, f: Callable) -> "Matrix":
        return Matrix([[f(x) for x in r] for r in self.rows])

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def conj_transpose(self) -> "Matrix":
        """Transpose with the Galois involution applied entrywise."""
        return self.map(_tau).transpose()

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.map(lambda x: x * other)
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a != 0]
            row = []
            for c in cols:
                acc = Fraction(0)
                for k, a in nz:
                    b = c[k]
                    if b != 0:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def __rmul__(self, other):
        return self.map(lambda x: other * x)

    def __matmul__(self, other):
        return self * other

    def __pow__(self, k: int) -> "Matrix":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        acc = Matrix.identity(self.n)
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def apply(self, v: Sequence) -> list:
        return [sum((a * x for a, x in zip(r, v)), Fraction(0)) for r in self.rows]

    def det(self):
        return det_rows(self.rows)

    def inverse(self) -> "Matrix":
        return Matrix(inverse_rows(self.rows))

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.n)), Fraction(0))

    def charpoly(self) -> list:
        return charpoly_rows(self.rows)

    def rank(self) -> int:
        return rank_rows(self.rows)

    def is_identity(self) -> bool:
        return all(
            (x == 1) if i == j else (x == 0)
            for i, r in enumerate(self.rows)
            for j, x in enumerate(r)
        )

    def commutes_with(self, other: "Matrix") -> bool:
        return self * other == other * self

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return all(a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __hash__(self):
        return hash(self.rows)

    def flat(self) -> list:
        return [x for r in self.rows for x in r]

    def __repr__(self):
        return "Matrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"


def _tau(x):
    return x.tau() if hasattr(x, "tau") else x


FieldMatrix = Matrix
