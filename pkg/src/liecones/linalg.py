"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`.  Matrices are small
immutable dense objects (:class:`Mat`); the elimination routines used for
large sparse systems (derivation conditions, commutants) work on rows stored
as ``{column: int}`` dicts and never leave the integers: each row operation is
``a*row - b*pivot_row`` followed by division by the row content.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Vec = tuple  # tuple of Fraction


class LinAlgError(Exception):
    pass


class NotSymmetric(LinAlgError):
    pass


class Inconsistent(LinAlgError):
    pass


class Singular(LinAlgError):
    pass


def frac(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; use an exact rational")
    return Fraction(x)


def vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def zero_vec(n: int) -> Vec:
    return (Fraction(0),) * n


def unit_vec(n: int, i: int) -> Vec:
    return tuple(Fraction(int(k == i)) for k in range(n))


def vadd(u: Sequence, v: Sequence) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Sequence, v: Sequence) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(t, u: Sequence) -> Vec:
    return tuple(t * a for a in u)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), Fraction(0))


def is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


class Mat:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(vec(r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> Mat:
        m = n if m is None else m
        return cls([[0] * m for _ in range(n)], ncols=m)

    @classmethod
    def identity(cls, n: int) -> Mat:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def diag(cls, entries: Sequence) -> Mat:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> Mat:
        if not cols:
            return cls.zeros(nrows or 0, 0)
        return cls(zip(*cols), ncols=len(cols))

    @classmethod
    def block_diag(cls, *blocks: Mat) -> Mat:
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        out = [[Fraction(0)] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    out[r0 + i][c0 + j] = b.rows[i][j]
            r0 += b.nrows
            c0 += b.ncols
        return cls(out, ncols=m)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def T(self) -> Mat:
        return Mat(zip(*self.rows), ncols=self.nrows) if self.nrows else Mat.zeros(self.ncols, 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self.rows)

    def cols(self) -> list[Vec]:
        return [self.col(j) for j in range(self.ncols)]

    def __eq__(self, other):
        return isinstance(other, Mat) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Mat([{body}])"

    def __add__(self, other: Mat) -> Mat:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat((vadd(a, b) for a, b in zip(self.rows, other.rows)), ncols=self.ncols)

    def __sub__(self, other: Mat) -> Mat:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat((vsub(a, b) for a, b in zip(self.rows, other.rows)), ncols=self.ncols)

    def __neg__(self) -> Mat:
        return self.scale(-1)

    def scale(self, t) -> Mat:
        t = frac(t)
        return Mat((vscale(t, r) for r in self.rows), ncols=self.ncols)

    def __rmul__(self, t) -> Mat:
        return self.scale(t)

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.cols()
            return Mat(([dot(r, c) for c in cols] for r in self.rows), ncols=other.ncols)
        return self.apply(other)

    def apply(self, v: Sequence) -> Vec:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(dot(r, v) for r in self.rows)

    def is_zero(self) -> bool:
        return all(is_zero(r) for r in self.rows)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self == self.T

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Mat:
        return Mat(([self.rows[i][j] for j in cols] for i in rows), ncols=len(cols))

    def flatten(self) -> Vec:
        return tuple(x for r in self.rows for x in r)

    @classmethod
    def unflatten(cls, flat: Sequence, n: int, m: int | None = None) -> Mat:
        m = n if m is None else m
        return cls((flat[i * m:(i + 1) * m] for i in range(n)), ncols=m)


def commutator(a: Mat, b: Mat) -> Mat:
    return a @ b - b @ a


# --- sparse integer elimination -------------------------------------------------

def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    # normalize sign on the leading column so that echelon forms are canonical
    if row and row[min(row)] < 0:
        row = {k: -v for k, v in row.items()}
    return row


def _integer_row(entries) -> dict:
    """Sparse row from ``{col: Fraction}`` or a dense sequence, scaled to integers."""
    if not isinstance(entries, dict):
        entries = {j: x for j, x in enumerate(entries) if x != 0}
    entries = {j: frac(x) for j, x in entries.items() if x != 0}
    if not entries:
        return {}
    den = lcm(*(x.denominator for x in entries.values()))
    return _primitive({j: int(x * den) for j, x in entries.items()})


def _eliminate(row: dict, prow: dict, col: int) -> dict:
    a, b = prow[col], row[col]
    out = {k: a * v for k, v in row.items()}
    for k, v in prow.items():
        nv = out.get(k, 0) - b * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return _primitive(out)


class Echelon:
    """Incremental reduced echelon form over the integers.

    Rows are added one at a time and kept fully reduced: every pivot column
    appears in exactly one stored row.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        for c in [c for c in row if c in self.pivots]:
            if c in row:
                row = _eliminate(row, self.pivots[c], c)
        return row

    def add(self, entries) -> bool:
        """Insert a row; return True iff it raised the rank."""
        row = self.reduce(_integer_row(entries))
        if not row:
            return False
        # pick the sparsest-friendly pivot: the smallest column index keeps output canonical
        c = min(row)
        for pc, prow in list(self.pivots.items()):
            if c in prow:
                self.pivots[pc] = _eliminate(prow, row, c)
        self.pivots[c] = row
        return True

    def contains(self, entries) -> bool:
        return not self.reduce(_integer_row(entries))

    def basis(self) -> list[Vec]:
        """Row-space basis in reduced form (leading entry 1), sorted by pivot column."""
        out = []
        for c in sorted(self.pivots):
            row = self.pivots[c]
            p = row[c]
            v = [Fraction(0)] * self.ncols
            for k, x in row.items():
                v[k] = Fraction(x, p)
            out.append(tuple(v))
        return out

    def nullspace(self) -> list[Vec]:
        free = [j for j in range(self.ncols) if j not in self.pivots]
        out = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for c, row in self.pivots.items():
                if f in row:
                    v[c] = Fraction(-row[f], row[c])
            out.append(tuple(v))
        return out


def sparse_kernel(rows: Iterable, ncols: int) -> list[Vec]:
    """Kernel of the matrix whose rows are given as ``{col: value}`` dicts or sequences."""
    ech = Echelon(ncols)
    for r in rows:
        ech.add(r)
    return ech.nullspace()


def kernel(m: Mat) -> list[Vec]:
    return sparse_kernel(m.rows, m.ncols)


def rank(m: Mat) -> int:
    ech = Echelon(m.ncols)
    for r in m.rows:
        ech.add(r)
    return ech.rank


def eigenspace(m: Mat, lam) -> list[Vec]:
    if m.nrows != m.ncols:
        raise ValueError("eigenspace needs a square matrix")
    return kernel(m - Mat.identity(m.nrows).scale(lam))


def solve(m: Mat, rhs: Sequence) -> Vec:
    """Some solution of ``m x = rhs``; raises :class:`Inconsistent` if none exists."""
    if len(rhs) != m.nrows:
        raise ValueError("rhs length mismatch")
    n = m.ncols
    ech = Echelon(n + 1)
    for r, b in zip(m.rows, rhs):
        ech.add(tuple(r) + (frac(b),))
    if n in ech.pivots:
        raise Inconsistent("system has no solution")
    x = [Fraction(0)] * n
    for c, row in ech.pivots.items():
        x[c] = Fraction(row.get(n, 0), row[c])
    return tuple(x)


def inverse(m: Mat) -> Mat:
    n = m.nrows
    if n != m.ncols:
        raise ValueError("inverse needs a square matrix")
    if n == 0:
        return m
    ech = Echelon(2 * n)
    for i, r in enumerate(m.rows):
        ech.add(tuple(r) + unit_vec(n, i))
    if any(c not in ech.pivots for c in range(n)):
        raise Singular("matrix is singular")
    rows = []
    for c in range(n):
        row = ech.pivots[c]
        rows.append([Fraction(row.get(n + j, 0), row[c]) for j in range(n)])
    return Mat(rows, ncols=n)


def det(m: Mat) -> Fraction:
    """Determinant by Bareiss fraction-free elimination."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("det needs a square matrix")
    if n == 0:
        return Fraction(1)
    den = lcm(*(x.denominator for r in m.rows for x in r))
    a = [[int(x * den) for x in r] for r in m.rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], den ** n)


# --- subspaces -------------------------------------------------------------------

def span_basis(vectors: Iterable[Sequence], dim: int) -> list[Vec]:
    ech = Echelon(dim)
    for v in vectors:
        ech.add(v)
    return ech.basis()


def span_rank(vectors: Iterable[Sequence], dim: int) -> int:
    ech = Echelon(dim)
    for v in vectors:
        ech.add(v)
    return ech.rank


def in_span(v: Sequence, basis: Sequence[Sequence], dim: int | None = None) -> bool:
    dim = len(v) if dim is None else dim
    ech = Echelon(dim)
    for b in basis:
        ech.add(b)
    return ech.contains(v)


def subspace_contains(big: Sequence[Sequence], small: Sequence[Sequence], dim: int) -> bool:
    ech = Echelon(dim)
    for b in big:
        ech.add(b)
    return all(ech.contains(v) for v in small)


def subspace_equal(a: Sequence[Sequence], b: Sequence[Sequence], dim: int) -> bool:
    return subspace_contains(a, b, dim) and subspace_contains(b, a, dim)


def intersection(a: Sequence[Sequence], b: Sequence[Sequence], dim: int) -> list[Vec]:
    """Basis of span(a) ∩ span(b) via the kernel of [A | -B]."""
    a = span_basis(a, dim)
    b = span_basis(b, dim)
    if not a or not b:
        return []
    cols = list(a) + [vscale(-1, v) for v in b]
    rows = [[c[i] for c in cols] for i in range(dim)]
    out = []
    for coeffs in sparse_kernel(rows, len(cols)):
        w = zero_vec(dim)
        for t, v in zip(coeffs[:len(a)], a):
            if t:
                w = vadd(w, vscale(t, v))
        out.append(w)
    return span_basis(out, dim)


def is_direct_sum(subspaces: Sequence[Sequence[Sequence]], ambient_dim: int) -> bool:
    allv = [v for s in subspaces for v in s]
    if any(len(v) != ambient_dim for v in allv):
        raise ValueError("vector length does not match ambient dimension")
    return len(allv) == ambient_dim and span_rank(allv, ambient_dim) == ambient_dim


def coordinates(v: Sequence, basis: Sequence[Sequence]) -> Vec:
    """Coordinates of ``v`` in ``basis`` (raises Inconsistent if v is outside the span)."""
    if not basis:
        if is_zero(v):
            return ()
        raise Inconsistent("vector is not in the span")
    return solve(Mat.from_columns(basis), v)


# --- definiteness ----------------------------------------------------------------

class PSDStatus(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    POSITIVE_SEMIDEFINITE_SINGULAR = "PositiveSemidefiniteSingular"
    INDEFINITE = "Indefinite"

    @property
    def is_psd(self) -> bool:
        return self is not PSDStatus.INDEFINITE


def psd_status(m: Mat) -> PSDStatus:
    """Classify a symmetric matrix by pivoted Schur complements.

    The matrix is scaled to integers and each Schur complement is taken in the
    fraction-free form ``p*A - r r^T`` (a positive multiple of the true
    complement), so the classification is exact.
    """
    if not m.is_symmetric():
        raise NotSymmetric("psd_status needs a symmetric matrix")
    n = m.nrows
    if n == 0:
        return PSDStatus.POSITIVE_DEFINITE
    den = lcm(*(x.denominator for r in m.rows for x in r))
    a = [[int(x * den) for x in r] for r in m.rows]
    singular = False
    while a:
        k = len(a)
        if any(a[i][i] < 0 for i in range(k)):
            return PSDStatus.INDEFINITE
        zero_diag = [i for i in range(k) if a[i][i] == 0]
        if any(any(a[i]) for i in zero_diag):
            return PSDStatus.INDEFINITE
        if zero_diag:
            singular = True
            keep = [i for i in range(k) if a[i][i] != 0]
            a = [[a[i][j] for j in keep] for i in keep]
            continue
        p = 0  # any positive diagonal works; take the first
        piv = a[p][p]
        r = [a[p][j] for j in range(k) if j != p]
        rest = [i for i in range(k) if i != p]
        nxt = [[piv * a[i][j] - r[x] * r[y] for y, j in enumerate(rest)] for x, i in enumerate(rest)]
        g = 0
        for row in nxt:
            for v in row:
                g = gcd(g, v)
        if g > 1:
            nxt = [[v // g for v in row] for row in nxt]
        a = nxt
    return PSDStatus.POSITIVE_SEMIDEFINITE_SINGULAR if singular else PSDStatus.POSITIVE_DEFINITE


def quadratic_form(m: Mat, v: Sequence) -> Fraction:
    return dot(v, m.apply(v))
