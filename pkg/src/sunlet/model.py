"""Fourier and Pfaffian coordinates of the CFN sunlet model.

Group elements of (Z/2)^n are tuples of 0/1 ints, leaf 1 first. Pattern and
group element tables indexed by integers read the tuple as a binary number
with leaf 1 as the most significant bit, so ``"1001"`` is index 9.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .skewpfaff import SkewMatrix, sub_pfaffian

__all__ = [
    "group_element",
    "parity",
    "even_elements",
    "unit_pair",
    "AffineParams",
    "phi",
    "psi",
    "omega_from_params",
    "beta_point",
    "FourierVector",
    "hadamard_transform",
    "omega_from_q",
    "random_rational",
    "random_affine_params",
]

_HALF = Fraction(1, 2)


def group_element(g: str | Iterable[int]) -> tuple[int, ...]:
    """Normalise ``"1001"`` or ``[1, 0, 0, 1]`` to ``(1, 0, 0, 1)``."""
    bits = tuple(int(c) for c in g)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"group element must be a 0/1 vector, got {g!r}")
    return bits


def parity(g: Sequence[int]) -> int:
    return sum(g) % 2


def even_elements(n: int) -> list[tuple[int, ...]]:
    """All even-parity elements of (Z/2)^n in lexicographic order (2^(n-1) of them)."""
    return [g for g in product((0, 1), repeat=n) if not sum(g) % 2]


def unit_pair(n: int, i: int, j: int) -> tuple[int, ...]:
    """The element e_i + e_j."""
    return tuple(int(t == i or t == j) for t in range(1, n + 1))


def _to_index(g: Sequence[int]) -> int:
    out = 0
    for b in g:
        out = (out << 1) | b
    return out


@dataclass(frozen=True)
class AffineParams:
    """Edge parameters a^1..a^2n on the patch where every a_0 equals 1.

    a^1..a^n sit on the pendant edges; a^(n+i) on the cycle edge (v_i, v_(i+1)),
    with a^(2n) on the closing edge (v_n, v_1).
    """

    n: int
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if len(self.a) != 2 * self.n:
            raise ValueError(f"expected {2 * self.n} parameters for n={self.n}, got {len(self.a)}")

    def __getitem__(self, i: int):
        if not 1 <= i <= 2 * self.n:
            raise IndexError(f"parameter index {i} out of range 1..{2 * self.n}")
        return self.a[i - 1]


def phi(g: Sequence[int], a: AffineParams):
    """The parameterization q_g -> A_n of the sunlet model on the affine patch.

    Half the sum of the two displayed-tree monomials; the first tree uses the
    cycle edges a^(n+1)..a^(2n-1), the second a^(n+2)..a^(2n).
    """
    g = group_element(g)
    n = a.n
    if len(g) != n:
        raise ValueError(f"group element of length {len(g)} for n={n}")
    if parity(g):
        raise ValueError("q_g is identically zero for odd g")
    pendant = 1
    for i in range(1, n + 1):
        if g[i - 1]:
            pendant = pendant * a[i]
    left = 1
    s = 0
    for i in range(1, n):
        s ^= g[i - 1]
        if s:
            left = left * a[n + i]
    right = 1
    s = 0
    for i in range(2, n + 1):
        s ^= g[i - 1]
        if s:
            right = right * a[n + i]
    return _HALF * pendant * (left + right)


def psi(g: Sequence[int], omega: SkewMatrix):
    """q_g -> Pf(omega restricted to supp(g)) / 2^k, where |supp(g)| = 2k."""
    g = group_element(g)
    if len(g) != omega.n:
        raise ValueError(f"group element of length {len(g)} for a matrix of order {omega.n}")
    if parity(g):
        raise ValueError("q_g is identically zero for odd g")
    support = [i + 1 for i, b in enumerate(g) if b]
    return Fraction(1, 2 ** (len(support) // 2)) * sub_pfaffian(omega, support)


def omega_from_params(a: AffineParams) -> SkewMatrix:
    """The point x_ij = 2 phi(e_i + e_j) of V(I_n)."""
    n = a.n
    return SkewMatrix.from_upper(n, lambda i, j: 2 * phi(unit_pair(n, i, j), a))


def beta_point(s: Sequence, t: Sequence) -> SkewMatrix:
    """x_1j = s_1 t_j + s_j t_1 and x_ij = s_i t_j for 1 < i < j."""
    if len(s) != len(t):
        raise ValueError("s and t must have the same length")

    def entry(i, j):
        if i == 1:
            return s[0] * t[j - 1] + s[j - 1] * t[0]
        return s[i - 1] * t[j - 1]

    return SkewMatrix.from_upper(len(s), entry)


@dataclass(frozen=True)
class FourierVector:
    """Even-parity Fourier coordinates plus the absolute odd-parity mass."""

    n: int
    q: Mapping[tuple[int, ...], object]
    odd_mass: object = 0
    odd: Mapping[tuple[int, ...], object] = field(default_factory=dict, repr=False)

    def __getitem__(self, g):
        g = group_element(g)
        if parity(g):
            return self.odd.get(g, 0)
        return self.q[g]


def _fwht(values: list) -> list:
    # unnormalised Walsh-Hadamard butterfly; out[g] = sum_h (-1)^<g,h> values[h]
    out = list(values)
    h = 1
    size = len(out)
    while h < size:
        for start in range(0, size, 2 * h):
            for k in range(start, start + h):
                x, y = out[k], out[k + h]
                out[k], out[k + h] = x + y, x - y
        h *= 2
    return out


def hadamard_transform(p: Mapping | Sequence) -> FourierVector:
    """Fourier coordinates q_g = sum_h (-1)^<g,h> p_h of a pattern table.

    ``p`` is either a sequence of length 2^n (index as in the module docstring)
    or a mapping from patterns (tuples or 0/1 strings) to values; absent
    patterns count as 0.
    """
    if isinstance(p, Mapping):
        keys = [group_element(k) for k in p]
        if not keys:
            raise ValueError("empty pattern table")
        n = len(keys[0])
        if any(len(k) != n for k in keys):
            raise ValueError("patterns of unequal length")
        table = [0] * (2 ** n)
        for k, v in zip(keys, p.values()):
            table[_to_index(k)] = v
    else:
        table = list(p)
        size = len(table)
        n = size.bit_length() - 1
        if size < 2 or 2 ** n != size:
            raise ValueError(f"pattern table size {size} is not a power of two")
    raw = _fwht(table)
    q = {}
    odd = {}
    odd_mass = 0
    for idx, g in enumerate(product((0, 1), repeat=n)):
        if sum(g) % 2:
            odd[g] = raw[idx]
            odd_mass = odd_mass + abs(raw[idx])
        else:
            q[g] = raw[idx]
    return FourierVector(n=n, q=q, odd_mass=odd_mass, odd=odd)


def omega_from_q(q: FourierVector) -> SkewMatrix:
    """x_ij = 2 q(e_i + e_j); only weight-two coordinates are read."""
    n = q.n
    if n < 4:
        raise ValueError("need at least 4 leaves")
    return SkewMatrix.from_upper(n, lambda i, j: 2 * q.q[unit_pair(n, i, j)])


def random_rational(rng: random.Random, bound: int = 100) -> Fraction:
    """Uniform draw of p/q with 1 <= p, q <= bound."""
    return Fraction(rng.randint(1, bound), rng.randint(1, bound))


def random_affine_params(n: int, rng: random.Random, bound: int = 100) -> AffineParams:
    return AffineParams(n, [random_rational(rng, bound) for _ in range(2 * n)])
