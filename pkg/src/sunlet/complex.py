"""The Stanley-Reisner complex of the initial ideal of G_n.

The ground set is all pairs (i, j) with 1 <= i < j <= n. Minimal non-faces
are the supports of the initial terms x_il x_jk and x_(1,j1) x_(i2,j2) x_(j3,i3).
Facets are generated from Dyck paths (monotone lattice paths from (2, 3) to
(n-1, n) staying above the diagonal) and a threshold choice per cycle leaf
j in 3..n-3, then checked against the face condition and maximality.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

__all__ = [
    "Pair",
    "Face",
    "ground_set",
    "minimal_nonfaces",
    "is_face",
    "is_maximal",
    "dyck_paths",
    "dominates",
    "path_meet",
    "path_join",
    "independent_set",
    "enumerate_facets",
    "brute_force_facets",
    "rectangle_region",
    "triangle_region",
    "associated_path",
    "decision_function",
    "precedes",
    "linear_extension",
    "ShellingResult",
    "check_order",
    "check_shelling",
    "scrambled_order",
    "search_shelling",
    "MAX_SHELLING_N",
]

Pair = tuple[int, int]
Face = frozenset

MAX_SHELLING_N = 8


def ground_set(n: int) -> list[Pair]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


@lru_cache(maxsize=None)
def _nonfaces(n: int) -> tuple[frozenset, ...]:
    pairs = tuple(frozenset({(i, l), (j, k)}) for i, j, k, l in combinations(range(2, n + 1), 4))
    triples = tuple(
        frozenset({(1, j1), (i2, j2), (j3, i3)}) for i2, j1, j2, j3, i3 in combinations(range(2, n + 1), 5)
    )
    return pairs + triples


def minimal_nonfaces(n: int) -> list[frozenset]:
    """Supports of the initial terms of G_n; pair-type first, then triple-type."""
    if n < 4:
        raise ValueError("the complex is defined for n >= 4")
    return list(_nonfaces(n))


def is_face(face: Iterable[Pair], n: int) -> bool:
    face = frozenset(face)
    for a, b in face:
        if not 1 <= a < b <= n:
            raise ValueError(f"{(a, b)} is not in the ground set for n={n}")
    return not any(nf <= face for nf in _nonfaces(n))


def is_maximal(face: Iterable[Pair], n: int) -> bool:
    """True for a face to which no further pair can be added."""
    face = frozenset(face)
    return is_face(face, n) and all(not is_face(face | {p}, n) for p in ground_set(n) if p not in face)


# Dyck paths -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _dyck(n: int) -> tuple[tuple[Pair, ...], ...]:
    paths = []
    end = (n - 1, n)

    def extend(path):
        a, b = path[-1]
        if (a, b) == end:
            paths.append(tuple(path))
            return
        # rows before columns, so the output is lexicographic in the step sequence
        if a + 1 < b:
            extend(path + [(a + 1, b)])
        if b + 1 <= n:
            extend(path + [(a, b + 1)])

    extend([(2, 3)])
    return tuple(paths)


def dyck_paths(n: int) -> list[tuple[Pair, ...]]:
    """All lattice paths from (2, 3) to (n-1, n) with unit steps and a < b throughout."""
    if n < 4:
        raise ValueError("Dyck paths are defined for n >= 4")
    return list(_dyck(n))


def dominates(upper: Sequence[Pair], lower: Sequence[Pair]) -> bool:
    """True when ``upper`` lies weakly above ``lower`` (column coordinate pointwise at least)."""
    return all(p[1] >= q[1] for p, q in zip(upper, lower))


def _path_from_heights(heights: Sequence[int]) -> tuple[Pair, ...]:
    # step t has a + b = 5 + t, so the column coordinate determines the point
    return tuple((5 + t - b, b) for t, b in enumerate(heights))


def path_meet(p: Sequence[Pair], q: Sequence[Pair]) -> tuple[Pair, ...]:
    return _path_from_heights([min(x[1], y[1]) for x, y in zip(p, q)])


def path_join(p: Sequence[Pair], q: Sequence[Pair]) -> tuple[Pair, ...]:
    return _path_from_heights([max(x[1], y[1]) for x, y in zip(p, q)])


def independent_set(n: int) -> frozenset:
    """{(1,2), (1,n-2), (1,n-1), (1,n)} plus all (i, i+1) and (i, i+2) with i >= 2."""
    base = {(1, 2), (1, n - 2), (1, n - 1), (1, n)}
    steps = {(i, i + 1) for i in range(2, n)} | {(i, i + 2) for i in range(2, n - 1)}
    return frozenset(base | steps)


# Facet enumeration ----------------------------------------------------------


def rectangle_region(n: int, j: int) -> frozenset:
    """Rows 2..j-1, columns j+1..n-2."""
    return frozenset((a, b) for a in range(2, j) for b in range(j + 1, n - 1))


def triangle_region(n: int, j: int) -> frozenset:
    """All (a, b) with j+2 <= a < b <= n."""
    return frozenset((a, b) for a in range(j + 2, n + 1) for b in range(a + 1, n + 1))


def _base(n: int) -> frozenset:
    return frozenset({(1, 2), (1, n - 2), (1, n - 1), (1, n)})


def _sort_key(face: Iterable[Pair]) -> list[Pair]:
    return sorted(face)


@lru_cache(maxsize=None)
def _facets(n: int) -> tuple[frozenset, ...]:
    # Sets are int bitmasks over the ground set.
    ground = ground_set(n)
    bit = {p: 1 << t for t, p in enumerate(ground)}

    def mask(pairs):
        out = 0
        for p in pairs:
            out |= bit[p]
        return out

    nonfaces = [mask(nf) for nf in _nonfaces(n)]
    blockers = {b: [x & ~b for x in nonfaces if x & b] for b in bit.values()}
    # Pair-type non-faces are never on a Dyck path; a triple-type one can only
    # appear once its first-row pair (1, j1) has been chosen.
    triples_at = {j: [mask(nf) for nf in _nonfaces(n) if (1, j) in nf] for j in range(3, n - 2)}
    everything = (1 << len(ground)) - 1

    def maximal(face):
        free = everything & ~face
        while free:
            b = free & -free
            free ^= b
            if not any(x & face == x for x in blockers[b]):
                return False
        return True

    cycle = list(range(3, n - 2))
    base = mask(_base(n))
    paths = [mask(p) for p in _dyck(n)]
    # For each j either (1, j) stays out, or it goes in with a threshold t:
    # pairs (a, b) with a < j < b <= n-2 and b < t leave the path, as do rows beyond t.
    keep = {
        (j, t): mask((a, b) for a, b in ground if a > 1 and a <= t and not (a < j < b <= n - 2 and b < t))
        for j in cycle
        for t in range(j + 1, n)
    }
    choices = [[None] + list(range(j + 1, n)) for j in cycle]
    found = set()
    tried = set()
    strata = set()
    for decision in product(*choices):
        first_row = base
        kept = everything
        chosen = []
        for j, t in zip(cycle, decision):
            if t is not None:
                first_row |= bit[1, j]
                kept &= keep[j, t]
                chosen.append(j)
        # different thresholds often cut the same pairs
        if (first_row, kept) in strata:
            continue
        strata.add((first_row, kept))
        checks = [x for j in chosen for x in triples_at[j]]
        for path in paths:
            face = first_row | (path & kept)
            if face in tried:
                continue
            tried.add(face)
            if not any(x & face == x for x in checks) and maximal(face):
                found.add(face)
    facets = (frozenset(p for p in ground if bit[p] & face) for face in found)
    return tuple(sorted(facets, key=_sort_key))


def enumerate_facets(n: int) -> list[frozenset]:
    """All facets, sorted by their sorted pair lists."""
    if not 5 <= n <= 12:
        raise ValueError("structural facet enumeration supports 5 <= n <= 12")
    return list(_facets(n))


def brute_force_facets(n: int) -> list[frozenset]:
    """Maximal faces by direct search, for checking :func:`enumerate_facets`.

    n <= 6 scans every subset of the ground set. Larger n runs an
    include/exclude search that drops a pair only if some non-face through
    it can still be completed, which is necessary for a maximal face.
    """
    ground = ground_set(n)
    bit = {p: t for t, p in enumerate(ground)}
    masks = [sum(1 << bit[p] for p in nf) for nf in _nonfaces(n)]
    m = len(ground)

    def face(mask):
        return all(mask & x != x for x in masks)

    def maximal(mask):
        return all(mask >> e & 1 or not face(mask | 1 << e) for e in range(m))

    found = []
    if n <= 6:
        found = [mask for mask in range(1 << m) if face(mask) and maximal(mask)]
    elif n <= 8:
        through = [[x for x in masks if x >> e & 1] for e in range(m)]

        def search(e, mask, excluded):
            if e == m:
                if maximal(mask):
                    found.append(mask)
                return
            if face(mask | 1 << e):
                search(e + 1, mask | 1 << e, excluded)
            # leaving e out needs a non-face through e that avoids excluded pairs
            if any((x & ~(1 << e)) & excluded == 0 for x in through[e]):
                search(e + 1, mask, excluded | 1 << e)

        search(0, 0, 0)
    else:
        raise ValueError("brute-force enumeration supports n <= 8")
    out = [frozenset(ground[t] for t in range(m) if mask >> t & 1) for mask in found]
    return sorted(out, key=_sort_key)


# Partial order and shelling -------------------------------------------------


def _second_part(face: Iterable[Pair]) -> frozenset:
    return frozenset(p for p in face if p[0] > 1)


def associated_path(face: Iterable[Pair], n: int) -> tuple[Pair, ...]:
    """The lowest Dyck path containing every pair (a, b) of the face with a > 1."""
    rest = _second_part(face)
    paths = [p for p in _dyck(n) if rest <= set(p)]
    if not paths:
        raise ValueError("face does not lie on a Dyck path")
    low = paths[0]
    for p in paths[1:]:
        low = path_meet(low, p)
    return low


def decision_function(face: Iterable[Pair], n: int) -> dict[int, str]:
    """Per j in 3..n-3: N if (1, j) is absent; else U when the face avoids the
    rectangle region, L when it avoids only the triangle region, M otherwise."""
    face = frozenset(face)
    rest = _second_part(face)
    out = {}
    for j in range(3, n - 2):
        if (1, j) not in face:
            out[j] = "N"
        elif not rest & rectangle_region(n, j):
            out[j] = "U"
        elif not rest & triangle_region(n, j):
            out[j] = "L"
        else:
            out[j] = "M"
    return out


@dataclass(frozen=True)
class _Summary:
    first_row: frozenset
    path: tuple
    decision: dict


def _summary(face, n) -> _Summary:
    return _Summary(frozenset(p for p in face if p[0] == 1), associated_path(face, n), decision_function(face, n))


def _precedes(x: _Summary, y: _Summary) -> bool:
    return (
        x.first_row <= y.first_row
        and dominates(y.path, x.path)
        and all(x.decision[j] == y.decision[j] for j in x.decision if (1, j) in x.first_row)
    )


def precedes(f: Iterable[Pair], g: Iterable[Pair], n: int) -> bool:
    """The facet order: (1) first-row pairs of f are among those of g, (2) the
    path of g dominates that of f, (3) decisions agree wherever f has (1, j)."""
    return _precedes(_summary(f, n), _summary(g, n))


def linear_extension(facets: Sequence[frozenset], n: int) -> list[frozenset]:
    """Topological sort of the facet order, ties broken by sorted pair list."""
    info = [_summary(f, n) for f in facets]
    m = len(facets)
    succ = [[b for b in range(m) if b != a and _precedes(info[a], info[b])] for a in range(m)]
    indeg = [0] * m
    for a in range(m):
        for b in succ[a]:
            indeg[b] += 1
    keys = [_sort_key(f) for f in facets]
    heap = [(keys[i], i) for i in range(m) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, a = heapq.heappop(heap)
        order.append(a)
        for b in succ[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, (keys[b], b))
    if len(order) != m:
        raise ValueError("the facet order has a cycle")
    return [facets[i] for i in order]


@dataclass(frozen=True)
class ShellingResult:
    ok: bool
    order: tuple
    first_failure: int | None = None
    method: str = "order"

    def __bool__(self):
        return self.ok


def check_order(order: Sequence[frozenset]) -> int | None:
    """Index k of the first facet whose intersection with the union of its
    predecessors is not a non-empty union of codimension-one faces, or None."""
    for k in range(1, len(order)):
        fk = order[k]
        meets = [order[i] & fk for i in range(k)]
        ridges = [x for x in meets if len(x) == len(fk) - 1]
        if not ridges:
            return k
        if not all(any(x <= r for r in ridges) for x in meets):
            return k
    return None


def check_shelling(n: int, order: Sequence[frozenset] | None = None) -> ShellingResult:
    """Check a shelling order; by default the linear extension of the facet order."""
    if not 5 <= n <= MAX_SHELLING_N:
        raise ValueError(f"shelling check supports 5 <= n <= {MAX_SHELLING_N}")
    if order is None:
        order = linear_extension(enumerate_facets(n), n)
    order = tuple(order)
    bad = check_order(order)
    return ShellingResult(bad is None, order, bad)


def scrambled_order(n: int) -> list[frozenset]:
    """A facet order that is not a shelling: the first facet is followed by
    one that meets it in a face of codimension at least two."""
    facets = enumerate_facets(n)
    head = facets[0]
    for k, f in enumerate(facets):
        if len(head & f) < len(head) - 1:
            return [head, f] + [g for i, g in enumerate(facets) if i not in (0, k)]
    raise ValueError("every pair of facets is adjacent; no scrambled order exists")


def search_shelling(n: int, seed: int = 0, attempts: int = 20) -> ShellingResult:
    """Greedy search: repeatedly append the first remaining facet that keeps
    the prefix a shelling. Starting facets are shuffled by ``seed``."""
    facets = enumerate_facets(n)
    rng = random.Random(seed)
    for _ in range(attempts):
        rest = list(facets)
        rng.shuffle(rest)
        order = [rest.pop(0)]
        while rest:
            for idx, f in enumerate(rest):
                if _extends(order, f):
                    order.append(rest.pop(idx))
                    break
            else:
                break
        if not rest:
            return ShellingResult(True, tuple(order), None, "search")
    return ShellingResult(False, tuple(order), len(order), "search")


def _extends(order: Sequence[frozenset], f: frozenset) -> bool:
    meets = [g & f for g in order]
    ridges = [x for x in meets if len(x) == len(f) - 1]
    return bool(ridges) and all(any(x <= r for r in ridges) for x in meets)
