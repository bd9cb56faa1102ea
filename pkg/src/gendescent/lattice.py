"""Integer lattices in echelon (Hermite) form and small exact linear algebra over Q."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

_SAFE = 1 << 40


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = x*a + y*b and g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _lead(v: np.ndarray) -> int:
    nz = np.flatnonzero(v)
    return int(nz[0]) if len(nz) else -1


class Lattice:
    """A sublattice of Z^n kept as an echelon basis with positive pivots.

    Rows are added one at a time; membership and rank are exact.  Arithmetic
    runs in int64 and switches to Python integers if entries grow large.
    """

    def __init__(self, dim: int, vectors: Iterable = ()):
        self.dim = dim
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []
        self._dtype = np.int64
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _vec(self, v) -> np.ndarray:
        arr = np.asarray(v)
        if arr.shape != (self.dim,):
            raise ValueError(f"expected a vector of length {self.dim}")
        if arr.dtype == object:
            if self._dtype is not object and max((abs(int(x)) for x in arr), default=0) >= _SAFE:
                self._promote()
            return arr.astype(self._dtype) if self._dtype is not object else arr.copy()
        if not np.issubdtype(arr.dtype, np.integer):
            raise TypeError("lattice vectors must be integral")
        if self._dtype is not object and len(arr) and np.abs(arr).max() >= _SAFE:
            self._promote()
        return arr.astype(self._dtype)

    def _promote(self):
        self._dtype = object
        self.rows = [r.astype(object) for r in self.rows]

    def _check(self, *vs):
        if self._dtype is object:
            return
        for v in vs:
            if len(v) and np.abs(v).max() >= _SAFE:
                self._promote()
                return

    def _combine(self, p: int, u: np.ndarray, q: int, v: np.ndarray) -> np.ndarray:
        """p*u + q*v without int64 overflow (promotes the lattice to Python ints if needed)."""
        if self._dtype is not object and len(u):
            bound = abs(p) * int(np.abs(u).max()) + abs(q) * int(np.abs(v).max())
            if bound >= _SAFE:
                self._promote()
        if self._dtype is object:
            u, v = u.astype(object), v.astype(object)
        return p * u + q * v

    def reduce(self, v) -> np.ndarray:
        """Residue of v after subtracting integer multiples of the basis rows."""
        v = self._vec(v)
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                q = int(v[p]) // int(row[p])
                if q:
                    v = self._combine(1, v, -q, row)
                if v[p]:
                    return v
        return v

    def __contains__(self, v) -> bool:
        return not np.any(self.reduce(v))

    def add(self, v) -> bool:
        """Insert v; return True if the lattice grew."""
        v = self._vec(v)
        changed = False
        i = 0
        while i < len(self.rows):
            lv = _lead(v)
            if lv < 0:
                return changed
            p = self.pivots[i]
            if lv < p:
                break
            if lv == p:
                row = self.rows[i]
                a, b = int(row[p]), int(v[p])
                if b % a == 0:
                    v = self._combine(1, v, -(b // a), row)
                else:
                    g, x, y = xgcd(a, b)
                    new_row = self._combine(x, row, y, v)
                    v = self._combine(a // g, v, -(b // g), row)
                    if self._dtype is object:
                        new_row, v = new_row.astype(object), v.astype(object)
                    self.rows[i] = self._size_reduce(new_row, i)
                    changed = True
            i += 1
        lv = _lead(v)
        if lv < 0:
            return changed
        if v[lv] < 0:
            v = -v
        v = self._size_reduce_from(v, i)
        self.rows.insert(i, v)
        self.pivots.insert(i, lv)
        return True

    def _size_reduce(self, row: np.ndarray, i: int) -> np.ndarray:
        """Reduce row's entries at the pivots of later rows (keeps coefficients small)."""
        for j in range(i + 1, len(self.rows)):
            p = self.pivots[j]
            q = int(row[p]) // int(self.rows[j][p])
            if q:
                row = self._combine(1, row, -q, self.rows[j])
        return row

    def _size_reduce_from(self, row: np.ndarray, i: int) -> np.ndarray:
        # row is about to be inserted at position i: rows i.. have larger pivots
        return self._size_reduce(row, i - 1)

    def basis(self) -> list[np.ndarray]:
        return [r.copy() for r in self.rows]

    def hnf(self) -> np.ndarray:
        """Hermite normal form: echelon rows with entries above pivots reduced mod the pivot."""
        rows = [r.copy() for r in self.rows]
        for i in range(len(rows)):
            p = self.pivots[i]
            for j in range(i):
                q = int(rows[j][p]) // int(rows[i][p])
                if q:
                    rows[j] = rows[j] - q * rows[i]
        if not rows:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array(rows, dtype=self._dtype)

    def coordinates(self, v) -> Optional[list[int]]:
        """Integer coefficients of v in the current basis, or None if v is not a member."""
        v = self._vec(v)
        coeffs = [0] * len(self.rows)
        for i, (row, p) in enumerate(zip(self.rows, self.pivots)):
            if v[p]:
                q, r = divmod(int(v[p]), int(row[p]))
                if r:
                    return None
                coeffs[i] = q
                v = v - q * row
        return coeffs if not np.any(v) else None

    def index_in(self, other_dim_full: bool = True) -> Optional[int]:
        """Index [Z^n : L] when L has full rank, else None."""
        if len(self.rows) != self.dim:
            return None
        d = 1
        for row, p in zip(self.rows, self.pivots):
            d *= int(row[p])
        return d


def integer_kernel(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """Z-basis of {x in Z^k : sum_i x_i * matrix[i] = 0} (rows of matrix are the images)."""
    rows = [list(map(int, r)) for r in matrix]
    k = len(rows)
    if k == 0:
        return []
    width = len(rows[0])
    lat = Lattice(width + k)
    for i, r in enumerate(rows):
        lat.add(np.array(r + [1 if j == i else 0 for j in range(k)], dtype=object))
    return [[int(x) for x in row[width:]] for row, p in zip(lat.rows, lat.pivots) if p >= width]


# ------------------------------------------------------------------ over Q


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    M = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank_q(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace_q(rows: Sequence[Sequence], ncols: Optional[int] = None) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0} over Q."""
    if ncols is None:
        ncols = len(rows[0])
    R, piv = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(R, piv):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve_q(rows: Sequence[Sequence], rhs: Sequence) -> Optional[list[Fraction]]:
    """Solve x . rows = rhs (x a row vector of coefficients) over Q, or None."""
    k = len(rows)
    n = len(rhs)
    aug = [[Fraction(rows[i][j]) for i in range(k)] + [Fraction(rhs[j])] for j in range(n)]
    R, piv = rref(aug, k + 1)
    if k in piv:
        return None
    x = [Fraction(0)] * k
    for row, p in zip(R, piv):
        x[p] = row[k]
    return x


def rank_int_matrix(vectors: Sequence[np.ndarray]) -> int:
    """Exact rank over Q of integer vectors (via the lattice they span)."""
    if not len(vectors):
        return 0
    lat = Lattice(len(vectors[0]))
    for v in vectors:
        lat.add(v)
    return lat.rank
