"""The determinantal generators G_n and their evaluation under leaf-labelings.

G_n consists of the 2x2 minors with rows {i, j} and columns {k, l} for
1 < i < j < k < l <= n, and the 3x3 minors with rows {1, i2, i3} and columns
{j1, j2, j3} for 1 < i2 < j1 < j2 < j3 < i3 <= n. A labeling theta sends
leaf position r of the sunlet to sequence index theta(r); evaluating a minor
under theta uses the relabeled matrix whose upper entry (r, c) is the moment
of the unordered pair {theta(r), theta(c)}: moments are symmetric in the pair,
so this is exactly the matrix built from the reordered sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, lcm
from typing import Iterable, Sequence, Union

import numpy as np

from .skewpfaff import SkewMatrix, signed_minor

__all__ = [
    "Two",
    "Three",
    "MinorIndex",
    "SunletLabeling",
    "generate_minors",
    "minor_count",
    "relabeled",
    "place_labeling",
    "evaluate_minor",
    "score_labeling",
    "score_parts",
    "score_labelings",
    "minor_polynomial",
    "term_order_key",
    "initial_term",
]


@dataclass(frozen=True, order=True)
class Two:
    i: int
    j: int
    k: int
    l: int  # noqa: E741

    def __post_init__(self):
        if not 1 < self.i < self.j < self.k < self.l:
            raise ValueError(f"Two{(self.i, self.j, self.k, self.l)} violates 1 < i < j < k < l")

    @property
    def rows(self) -> tuple[int, int]:
        return (self.i, self.j)

    @property
    def cols(self) -> tuple[int, int]:
        return (self.k, self.l)

    @property
    def kind(self) -> str:
        return "two"

    @property
    def top(self) -> int:
        return self.l


@dataclass(frozen=True, order=True)
class Three:
    i2: int
    j1: int
    j2: int
    j3: int
    i3: int

    def __post_init__(self):
        if not 1 < self.i2 < self.j1 < self.j2 < self.j3 < self.i3:
            raise ValueError(
                f"Three{(self.i2, self.j1, self.j2, self.j3, self.i3)} violates 1 < i2 < j1 < j2 < j3 < i3"
            )

    @property
    def rows(self) -> tuple[int, int, int]:
        return (1, self.i2, self.i3)

    @property
    def cols(self) -> tuple[int, int, int]:
        return (self.j1, self.j2, self.j3)

    @property
    def kind(self) -> str:
        return "three"

    @property
    def top(self) -> int:
        return self.i3


MinorIndex = Union[Two, Three]


@lru_cache(maxsize=None)
def _minors(n: int) -> tuple:
    twos = tuple(Two(*c) for c in combinations(range(2, n + 1), 4))
    threes = tuple(Three(*c) for c in combinations(range(2, n + 1), 5))
    return twos + threes


def generate_minors(n: int) -> list[MinorIndex]:
    """G_n: every Two in lexicographic order, then every Three."""
    if n < 4:
        raise ValueError("G_n is defined for n >= 4")
    return list(_minors(n))


def minor_count(n: int) -> int:
    return comb(n - 1, 4) + comb(n - 1, 5)


@dataclass(frozen=True)
class SunletLabeling:
    """Bijection from leaf positions 1..n to sequence indices 1..n.

    Position 1 is the leaf under the reticulation vertex; the others run
    around the cycle. ``perm[p - 1]`` is the sequence at position p.
    """

    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        object.__setattr__(self, "perm", perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError(f"labeling {perm} is not a bijection on 1..{len(perm)}")

    @classmethod
    def identity(cls, n: int) -> "SunletLabeling":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, position: int) -> int:
        return self.perm[position - 1]

    def reflected(self) -> "SunletLabeling":
        """theta composed with the reflection fixing position 1 and reversing 2..n."""
        return SunletLabeling((self.perm[0],) + self.perm[:0:-1])

    def __iter__(self):
        return iter(self.perm)

    def __len__(self):
        return len(self.perm)


def _as_labeling(theta) -> SunletLabeling:
    return theta if isinstance(theta, SunletLabeling) else SunletLabeling(tuple(theta))


def _pair(omega: SkewMatrix, a: int, b: int):
    return omega[a, b] if a < b else omega[b, a]


def relabeled(omega: SkewMatrix, theta) -> SkewMatrix:
    """Upper entry (r, c) is x at the pair {theta(r), theta(c)}, whatever its order."""
    theta = _as_labeling(theta)
    if theta.n != omega.n:
        raise ValueError(f"labeling on {theta.n} leaves for a matrix of order {omega.n}")
    return SkewMatrix.from_upper(omega.n, lambda r, c: _pair(omega, theta(r), theta(c)))


def place_labeling(omega: SkewMatrix, theta) -> SkewMatrix:
    """Inverse of :func:`relabeled`: the data matrix seen when sequence theta(p) is leaf p."""
    theta = _as_labeling(theta)
    n = omega.n
    position = {seq: pos for pos, seq in enumerate(theta.perm, 1)}
    return SkewMatrix.from_upper(n, lambda a, b: _pair(omega, position[a], position[b]))


def _check(omega: SkewMatrix, m: MinorIndex) -> None:
    if m.top > omega.n:
        raise ValueError(f"{m} needs order at least {m.top}, matrix has order {omega.n}")


def evaluate_minor(omega: SkewMatrix, m: MinorIndex, theta: SunletLabeling | Sequence[int] | None = None):
    _check(omega, m)
    if theta is not None:
        omega = relabeled(omega, theta)
    return signed_minor(omega, m.rows, m.cols)


def score_parts(omega: SkewMatrix, theta=None):
    """(sum of |2x2 minors|, sum of |3x3 minors|) in generated order."""
    if theta is not None:
        omega = relabeled(omega, theta)
    two = 0
    three = 0
    for m in generate_minors(omega.n):
        v = abs(signed_minor(omega, m.rows, m.cols))
        if isinstance(m, Two):
            two = two + v
        else:
            three = three + v
    return two, three


def score_labeling(omega: SkewMatrix, theta=None):
    """Sum of |minor| over G_n, added up in generated order."""
    if theta is not None:
        omega = relabeled(omega, theta)
    total = 0
    for m in generate_minors(omega.n):
        total = total + abs(signed_minor(omega, m.rows, m.cols))
    return total


# Batch scoring -------------------------------------------------------------


@lru_cache(maxsize=None)
def _index_arrays(n: int):
    minors = _minors(n)
    twos = np.array([(m.i, m.j, m.k, m.l) for m in minors if isinstance(m, Two)], dtype=np.intp).reshape(-1, 4) - 1
    threes = (
        np.array([(1, m.i2, m.i3, m.j1, m.j2, m.j3) for m in minors if isinstance(m, Three)], dtype=np.intp).reshape(-1, 6)
        - 1
    )
    return twos, threes


def _signs(n: int) -> np.ndarray:
    return np.triu(np.ones((n, n)), 1) - np.tril(np.ones((n, n)), -1)


def _float_scores(full: np.ndarray, perms: np.ndarray) -> np.ndarray:
    # Same operation order as signed_minor/score_labeling so results agree bitwise.
    n = full.shape[0]
    twos, threes = _index_arrays(n)
    sym = np.triu(full, 1) + np.triu(full, 1).T
    B = sym[perms[:, :, None], perms[:, None, :]] * _signs(n)
    total = np.zeros(perms.shape[0], dtype=np.float64)
    for r0, r1, c0, c1 in twos:
        v = B[:, r0, c0] * B[:, r1, c1] - B[:, r0, c1] * B[:, r1, c0]
        total += np.abs(v)
    for r0, r1, r2, c0, c1, c2 in threes:
        a, b, c = B[:, r0, c0], B[:, r0, c1], B[:, r0, c2]
        d, e, f = B[:, r1, c0], B[:, r1, c1], B[:, r1, c2]
        g, h, i = B[:, r2, c0], B[:, r2, c1], B[:, r2, c2]
        v = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        total += np.abs(v)
    return total


def _exact_scores(omega: SkewMatrix, perms: Iterable[Sequence[int]]) -> list[Fraction]:
    # Clear denominators once: a 2x2 minor of cA is c^2 times the minor of A,
    # a 3x3 minor c^3 times, so integer sums rescale back exactly.
    vals = [Fraction(v) for v in omega.values()]
    c = lcm(*(v.denominator for v in vals)) if vals else 1
    n = omega.n
    scaled = SkewMatrix(n, [int(v * c) for v in vals])
    sym = [[scaled[min(a, b), max(a, b)] if a != b else 0 for b in range(1, n + 1)] for a in range(1, n + 1)]
    twos, threes = _index_arrays(omega.n)
    twos = twos.tolist()
    threes = threes.tolist()
    out = []
    for perm in perms:
        p = [x - 1 for x in perm]
        B = [[sym[p[r]][p[s]] if r < s else -sym[p[r]][p[s]] for s in range(n)] for r in range(n)]
        s2 = 0
        for r0, r1, c0, c1 in twos:
            s2 += abs(B[r0][c0] * B[r1][c1] - B[r0][c1] * B[r1][c0])
        s3 = 0
        for r0, r1, r2, c0, c1, c2 in threes:
            a, b, cc = B[r0][c0], B[r0][c1], B[r0][c2]
            d, e, f = B[r1][c0], B[r1][c1], B[r1][c2]
            g, h, i = B[r2][c0], B[r2][c1], B[r2][c2]
            s3 += abs(a * (e * i - f * h) - b * (d * i - f * g) + cc * (d * h - e * g))
        out.append(Fraction(s2, c * c) + Fraction(s3, c ** 3))
    return out


def score_labelings(omega: SkewMatrix, perms: Sequence[Sequence[int]]) -> list:
    """Scores of many labelings against one matrix.

    Float matrices are scored with vectorised numpy and give exactly the same
    floats as :func:`score_labeling`; exact matrices give exact Fractions.
    """
    if len(perms) == 0:
        return []
    if omega.exact:
        return _exact_scores(omega, perms)
    arr = np.asarray(perms, dtype=np.intp) - 1
    if arr.ndim != 2 or arr.shape[1] != omega.n:
        raise ValueError(f"labelings must have {omega.n} entries each")
    return _float_scores(omega.to_numpy(), arr).tolist()


# Term order and initial terms ----------------------------------------------


def minor_polynomial(m: MinorIndex) -> dict[tuple, int]:
    """Expansion of the generic minor as ``{sorted tuple of variables: coefficient}``.

    A variable is a pair (a, b) with a < b standing for x_ab.
    """
    rows, cols = m.rows, m.cols
    k = len(rows)
    poly: dict[tuple, int] = {}
    for sigma in permutations(range(k)):
        inversions = sum(1 for a in range(k) for b in range(a + 1, k) if sigma[a] > sigma[b])
        coef = -1 if inversions % 2 else 1
        mono = []
        for r, s in zip(rows, (cols[t] for t in sigma)):
            if r == s:
                coef = 0
                break
            if r > s:
                coef = -coef
                r, s = s, r
            mono.append((r, s))
        if coef:
            key = tuple(sorted(mono))
            poly[key] = poly.get(key, 0) + coef
    return {mono: c for mono, c in poly.items() if c}


def term_order_key(var: tuple[int, int]) -> tuple:
    """Sort key: larger key means larger variable in the lexicographic order.

    Every x_1i beats every x_jk with j > 1; x_1i > x_1j iff i < j; otherwise
    x_ij > x_kl iff i > k, or i = k and j < l.
    """
    a, b = var
    if a == 1:
        return (1, -b)
    return (0, a, -b)


def _monomial_key(mono: tuple) -> list:
    return sorted((term_order_key(v) for v in mono), reverse=True)


def initial_term(m: MinorIndex) -> tuple[tuple, int]:
    """Leading (monomial, coefficient) of the minor under the term order."""
    poly = minor_polynomial(m)
    mono = max(poly, key=_monomial_key)
    return mono, poly[mono]
