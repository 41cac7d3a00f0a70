"""Skew-symmetric matrices, Pfaffians and small signed minors.

Scalars are plain Python numbers. A computation runs in *exact* mode when
every input is an ``int`` or :class:`fractions.Fraction`, and in *float* mode
as soon as a ``float`` appears. The same code path serves both; only
:func:`determinant` switches algorithm.

Indices are 1-based everywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "SkewMatrix",
    "pfaffian",
    "sub_pfaffian",
    "signed_minor",
    "determinant",
    "is_exact",
]


def is_exact(values: Iterable) -> bool:
    """True when no value is a float (so arithmetic on them is exact)."""
    return all(isinstance(v, Rational) for v in values)


class SkewMatrix:
    """An n x n skew-symmetric matrix stored by its strict upper triangle.

    ``A[i, j]`` returns the signed entry of the full matrix, so
    ``A[j, i] == -A[i, j]`` and ``A[i, i] == 0``.
    """

    __slots__ = ("_n", "_upper")

    def __init__(self, n: int, upper: Sequence):
        if n < 0:
            raise ValueError("matrix order must be non-negative")
        upper = tuple(upper)
        if len(upper) != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} upper entries, got {len(upper)}")
        self._n = n
        self._upper = upper

    # constructors ---------------------------------------------------------

    @classmethod
    def from_upper(cls, n: int, entries: Mapping[tuple[int, int], object] | Callable[[int, int], object]):
        """Build from a mapping ``(i, j) -> value`` (i < j) or a callable ``f(i, j)``.

        Missing mapping keys are treated as 0.
        """
        if callable(entries):
            get = entries
        else:
            for (i, j) in entries:
                if not 1 <= i < j <= n:
                    raise ValueError(f"upper index {(i, j)} out of range for order {n}")
            get = lambda i, j: entries.get((i, j), 0)  # noqa: E731
        return cls(n, [get(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])

    @classmethod
    def from_full(cls, rows: Sequence[Sequence]):
        n = len(rows)
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("matrix is not square")
            if rows[i][i] != 0:
                raise ValueError("diagonal of a skew-symmetric matrix must vanish")
            for j in range(i + 1, n):
                if rows[j][i] != -rows[i][j]:
                    raise ValueError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not opposite")
        return cls(n, [rows[i][j] for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def zeros(cls, n: int):
        return cls(n, [0] * (n * (n - 1) // 2))

    # access ---------------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def upper(self) -> dict[tuple[int, int], object]:
        """Upper-triangle entries as a fresh ``{(i, j): value}`` dict."""
        return dict(self.items())

    def items(self):
        k = 0
        for i in range(1, self._n + 1):
            for j in range(i + 1, self._n + 1):
                yield (i, j), self._upper[k]
                k += 1

    def values(self) -> tuple:
        return self._upper

    @property
    def exact(self) -> bool:
        return is_exact(self._upper)

    def _pos(self, i: int, j: int) -> int:
        # row-major offset of (i, j), i < j, 1-based
        return (i - 1) * self._n - (i - 1) * i // 2 + (j - i - 1)

    def __getitem__(self, key: tuple[int, int]):
        i, j = key
        n = self._n
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"index {key} out of range for order {n}")
        if i == j:
            return 0
        if i < j:
            return self._upper[self._pos(i, j)]
        return -self._upper[self._pos(j, i)]

    def full(self) -> list[list]:
        n = self._n
        return [[self[i, j] for j in range(1, n + 1)] for i in range(1, n + 1)]

    def to_numpy(self) -> np.ndarray:
        """Full matrix as a float64 array (0-based)."""
        n = self._n
        out = np.zeros((n, n), dtype=np.float64)
        iu = np.triu_indices(n, 1)
        out[iu] = [float(v) for v in self._upper]
        out.T[iu] = -out[iu]
        return out

    # derived matrices -----------------------------------------------------

    def restrict(self, indices: Iterable[int]) -> "SkewMatrix":
        """Principal submatrix on ``indices``, rows/columns in increasing order."""
        idx = sorted(indices)
        if len(set(idx)) != len(idx):
            raise ValueError("repeated index in restriction")
        for i in idx:
            if not 1 <= i <= self._n:
                raise IndexError(f"index {i} out of range for order {self._n}")
        m = len(idx)
        return SkewMatrix(m, [self[idx[a], idx[b]] for a in range(m) for b in range(a + 1, m)])

    def relabel(self, perm: Sequence[int]) -> "SkewMatrix":
        """Matrix B with ``B[r, c] = A[perm[r-1], perm[c-1]]``."""
        n = self._n
        if sorted(perm) != list(range(1, n + 1)):
            raise ValueError("relabeling must be a permutation of 1..n")
        return SkewMatrix(n, [self[perm[r], perm[c]] for r in range(n) for c in range(r + 1, n)])

    def scaled(self, c) -> "SkewMatrix":
        return SkewMatrix(self._n, [c * v for v in self._upper])

    def map(self, f: Callable) -> "SkewMatrix":
        return SkewMatrix(self._n, [f(v) for v in self._upper])

    # dunder ---------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SkewMatrix):
            return NotImplemented
        return self._n == other._n and self._upper == other._upper

    def __hash__(self):
        return hash((self._n, self._upper))

    def __repr__(self):
        return f"SkewMatrix(n={self._n}, upper={self.upper!r})"


def _pf(A: SkewMatrix, idx: tuple[int, ...], memo: dict):
    if not idx:
        return 1
    hit = memo.get(idx)
    if hit is not None:
        return hit
    first, rest = idx[0], idx[1:]
    total = 0
    for t, j in enumerate(rest):
        a = A[first, j]
        if a == 0:
            continue
        term = a * _pf(A, rest[:t] + rest[t + 1:], memo)
        # position of j in idx is t + 2, sign (-1)^(t+2)
        total = total + term if t % 2 == 0 else total - term
    memo[idx] = total
    return total


def pfaffian(A: SkewMatrix):
    """Pfaffian by Laplace expansion along the first row.

    The 0 x 0 matrix has Pfaffian 1.
    """
    if A.n % 2:
        raise ValueError("odd-order Pfaffian requested")
    return _pf(A, tuple(range(1, A.n + 1)), {})


def sub_pfaffian(A: SkewMatrix, S: Iterable[int]):
    """Pfaffian of the principal submatrix indexed by ``S`` (sorted increasingly)."""
    idx = tuple(sorted(S))
    if len(set(idx)) != len(idx):
        raise ValueError("repeated index in support")
    if len(idx) % 2:
        raise ValueError("odd-order Pfaffian requested")
    for i in idx:
        if not 1 <= i <= A.n:
            raise IndexError(f"index {i} out of range for order {A.n}")
    return _pf(A, idx, {})


def _det2(a, b, c, d):
    return a * d - b * c


def _det3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def signed_minor(A: SkewMatrix, rows: Sequence[int], cols: Sequence[int]):
    """Determinant of the rows x cols submatrix of the full skew matrix.

    Row and column order is taken as given. Entries below the diagonal carry
    the sign of the skew matrix, e.g. entry (6, 3) is ``-x[3, 6]``.
    """
    if len(rows) != len(cols):
        raise ValueError(f"minor needs as many rows as columns, got {len(rows)} and {len(cols)}")
    sub = [[A[r, c] for c in cols] for r in rows]
    k = len(rows)
    if k == 2:
        return _det2(sub[0][0], sub[0][1], sub[1][0], sub[1][1])
    if k == 3:
        return _det3(sub)
    return determinant(sub)


def determinant(M: Sequence[Sequence]):
    """Determinant of a square matrix.

    Exact inputs use fraction-free Bareiss elimination on a denominator-cleared
    integer copy; float inputs use Gaussian elimination with partial pivoting.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    flat = [v for row in M for v in row]
    if is_exact(flat):
        return _det_bareiss(M)
    return _det_float(M)


def _det_bareiss(M):
    n = len(M)
    scale = 1
    rows = []
    for row in M:
        fr = [Fraction(v) for v in row]
        den = lcm(*(v.denominator for v in fr))
        scale *= den
        rows.append([int(v * den) for v in fr])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if rows[r][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, n):
            ri, rk = rows[i], rows[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pivot - ri[k] * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    det = sign * rows[n - 1][n - 1]
    return Fraction(det, scale) if scale != 1 else det


def _det_float(M):
    a = [[float(v) for v in row] for row in M]
    n = len(a)
    det = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda r: abs(a[r][k]))
        if a[p][k] == 0.0:
            return 0.0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return det
