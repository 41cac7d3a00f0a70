"""Sequence simulation on sunlet networks and pairwise Fourier moments.

Edge labels follow the sunlet convention: edge i (1 <= i <= n) is the pendant
edge to leaf i, edge n+i joins cycle vertices v_i and v_(i+1), and edge 2n
closes the cycle from v_n back to the reticulation vertex v_1. The two
reticulation edges are n+1 and 2n.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .alignment import Alignment
from .model import AffineParams
from .skewpfaff import SkewMatrix

__all__ = [
    "SunletTopology",
    "Tree",
    "NetworkParams",
    "displayed_trees",
    "simulate_alignment",
    "pairwise_moments",
    "pattern_counts",
    "expected_moments",
    "pattern_distribution",
    "affine_params_from_network",
    "random_network_params",
    "BLOCK_SITES",
]

# Sites per random stream; fixed so output never depends on how blocks are scheduled.
BLOCK_SITES = 1 << 16


def cycle_vertex(i: int) -> str:
    return f"v{i}"


def leaf_vertex(i: int) -> str:
    return f"leaf{i}"


@dataclass(frozen=True)
class Edge:
    label: int
    u: str
    v: str


@dataclass(frozen=True)
class SunletTopology:
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("a sunlet needs at least 3 leaves")

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        n = self.n
        pendant = [Edge(i, cycle_vertex(i), leaf_vertex(i)) for i in range(1, n + 1)]
        cycle = [Edge(n + i, cycle_vertex(i), cycle_vertex(i + 1)) for i in range(1, n)]
        closing = Edge(2 * n, cycle_vertex(n), cycle_vertex(1))
        return tuple(pendant + cycle + [closing])

    @property
    def reticulation_vertex(self) -> str:
        return cycle_vertex(1)

    @property
    def reticulation_edges(self) -> tuple[int, int]:
        return (self.n + 1, 2 * self.n)

    @property
    def leaves(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))


@dataclass(frozen=True)
class Tree:
    """A displayed tree: the sunlet minus one reticulation edge."""

    n: int
    edges: tuple[Edge, ...]
    deleted: int

    @cached_property
    def _adjacency(self) -> dict[str, list[tuple[str, int]]]:
        adj: dict[str, list[tuple[str, int]]] = {}
        for e in self.edges:
            adj.setdefault(e.u, []).append((e.v, e.label))
            adj.setdefault(e.v, []).append((e.u, e.label))
        return adj

    @property
    def leaves(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def traversal(self, root: str) -> list[tuple[str, str, int]]:
        """(parent, child, edge label) triples in BFS order away from ``root``."""
        adj = self._adjacency
        if root not in adj:
            raise ValueError(f"unknown vertex {root!r}")
        seen = {root}
        order = []
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, label in adj[u]:
                if v not in seen:
                    seen.add(v)
                    order.append((u, v, label))
                    queue.append(v)
        return order

    def path_edges(self, i: int, j: int) -> list[int]:
        """Edge labels on the path between leaves i and j."""
        parent: dict[str, tuple[str, int]] = {}
        for u, v, label in self.traversal(leaf_vertex(i)):
            parent[v] = (u, label)
        out = []
        node = leaf_vertex(j)
        while node != leaf_vertex(i):
            node, label = parent[node]
            out.append(label)
        return sorted(out)


def displayed_trees(top: SunletTopology) -> tuple[Tree, Tree]:
    """T0 drops the closing edge (v_n, v_1), T1 drops (v_1, v_2)."""
    n = top.n
    t0 = Tree(n, tuple(e for e in top.edges if e.label != 2 * n), deleted=2 * n)
    t1 = Tree(n, tuple(e for e in top.edges if e.label != n + 1), deleted=n + 1)
    return t0, t1


@dataclass(frozen=True)
class NetworkParams:
    """Mixing weight and per-edge substitution parameters.

    ``lam`` is the probability of the tree T0. For ``model="cfn"`` each edge
    carries a flip probability; for ``"k3p"`` a triple (b1, b2, b3) of
    substitution probabilities by group element (0,1), (1,0), (1,1). Only b2
    and b3 change the purine/pyrimidine bit.
    """

    lam: object
    edges: tuple
    model: str = "cfn"

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) if self.model == "k3p" else e for e in self.edges))
        if self.model not in ("cfn", "k3p"):
            raise ValueError(f"unknown model {self.model!r}")
        if len(self.edges) % 2:
            raise ValueError("need parameters for all 2n edges")
        if not 0 <= self.lam <= 1:
            raise ValueError(f"mixing weight {self.lam} outside [0, 1]")
        for label, e in enumerate(self.edges, 1):
            probs = e if self.model == "k3p" else (e,)
            if self.model == "k3p" and len(probs) != 3:
                raise ValueError(f"edge {label}: K3P needs three substitution probabilities")
            if any(p < 0 for p in probs) or sum(probs) > 1:
                raise ValueError(f"edge {label}: invalid substitution probabilities {e}")

    @property
    def n(self) -> int:
        return len(self.edges) // 2

    def flip(self, label: int):
        """Probability that edge ``label`` flips the binary state."""
        e = self.edges[label - 1]
        if self.model == "k3p":
            return e[1] + e[2]
        return e

    def to_cfn(self) -> "NetworkParams":
        if self.model == "cfn":
            return self
        return NetworkParams(self.lam, tuple(self.flip(i) for i in range(1, 2 * self.n + 1)), "cfn")

    def to_dict(self) -> dict:
        def conv(x):
            return float(x) if not isinstance(x, tuple) else [float(v) for v in x]

        return {"model": self.model, "lambda": float(self.lam), "edges": [conv(e) for e in self.edges]}


def random_network_params(
    n: int,
    rng: np.random.Generator,
    model: str = "k3p",
    lam_range: tuple[float, float] = (0.15, 0.85),
    flip_range: tuple[float, float] = (0.02, 0.2),
    transition_range: tuple[float, float] = (0.02, 0.2),
) -> NetworkParams:
    """Generic parameters: every edge's induced binary flip probability lies in ``flip_range``.

    For K3P the flip mass is split uniformly between b2 and b3, and b1 is drawn
    from ``transition_range``.
    """
    lam = float(rng.uniform(*lam_range))
    edges = []
    for _ in range(2 * n):
        flip = float(rng.uniform(*flip_range))
        if model == "cfn":
            edges.append(flip)
        else:
            share = float(rng.uniform(0.0, 1.0))
            b1 = float(rng.uniform(*transition_range))
            edges.append((b1, flip * share, flip * (1.0 - share)))
    return NetworkParams(lam, tuple(edges), model)


def _edge_draws(u: np.ndarray, probs, model: str) -> np.ndarray:
    if model == "cfn":
        return (u < probs).astype(np.uint8)
    b1, b2, b3 = probs
    stay = 1.0 - b1 - b2 - b3
    cuts = np.array([stay, stay + b1, stay + b1 + b2])
    return np.searchsorted(cuts, u, side="right").astype(np.uint8)


def _leaf_states(tree: Tree, root: str, root_state: np.ndarray, draws: dict[int, np.ndarray]) -> np.ndarray:
    state = {root: root_state}
    for parent, child, label in tree.traversal(root):
        state[child] = state[parent] ^ draws[label]
    return np.vstack([state[leaf_vertex(i)] for i in tree.leaves])


def _simulate_block(seed: int, block: int, size: int, top: SunletTopology, params: NetworkParams, root: str):
    # One Philox stream per block of sites: key = seed, counter offset = block.
    rng = np.random.Generator(np.random.Philox(key=seed, counter=block << 128))
    k = 4 if params.model == "k3p" else 2
    use_t0 = rng.random(size) < params.lam
    root_state = rng.integers(0, k, size, dtype=np.uint8)
    draws = {}
    for label in range(1, 2 * top.n + 1):
        u = rng.random(size)
        draws[label] = _edge_draws(u, params.edges[label - 1], params.model)
    t0, t1 = displayed_trees(top)
    leaves0 = _leaf_states(t0, root, root_state, draws)
    leaves1 = _leaf_states(t1, root, root_state, draws)
    return np.where(use_t0[None, :], leaves0, leaves1)


def simulate_alignment(
    top: SunletTopology,
    params: NetworkParams,
    length: int,
    seed: int,
    root: int = 1,
    labels: Sequence[str] | None = None,
) -> Alignment:
    """Simulate ``length`` independent sites under the network mixture.

    Each site picks T0 with probability ``lam`` (else T1), draws a uniform
    state at cycle vertex ``v_root`` and propagates it along the tree. Rows are
    leaves 1..n. K3P output is DNA, CFN output binary. Site s always comes from
    the same random stream, so output depends only on (seed, length, params).
    """
    if length < 1:
        raise ValueError("alignment length must be at least 1")
    if params.n != top.n:
        raise ValueError(f"parameters for n={params.n} on a {top.n}-sunlet")
    if not 1 <= root <= top.n:
        raise ValueError(f"root must be a cycle vertex 1..{top.n}")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    blocks = []
    for b, start in enumerate(range(0, length, BLOCK_SITES)):
        size = min(BLOCK_SITES, length - start)
        blocks.append(_simulate_block(seed, b, size, top, params, cycle_vertex(root)))
    codes = np.hstack(blocks)
    labels = tuple(labels) if labels is not None else tuple(f"taxon{i}" for i in range(1, top.n + 1))
    return Alignment(labels, codes, "dna" if params.model == "k3p" else "binary")


def _require_binary(aln: Alignment) -> None:
    if aln.alphabet != "binary":
        raise ValueError("moments need a binary alignment; project DNA first")
    if aln.n < 4:
        raise ValueError(f"need at least 4 sequences, got {aln.n}")


def pairwise_moments(aln: Alignment, exact: bool = False) -> SkewMatrix:
    """Omega with x_ij = (2/L) sum_s (-1)^(b_is + b_js).

    Sums are exact integer counts, so the float result is independent of any
    site blocking.
    """
    _require_binary(aln)
    n, L = aln.codes.shape
    b = aln.codes
    sums = {}
    for i in range(n):
        for j in range(i + 1, n):
            disagree = int(np.count_nonzero(b[i] != b[j]))
            sums[i + 1, j + 1] = L - 2 * disagree
    if exact:
        return SkewMatrix.from_upper(n, lambda i, j: Fraction(2 * sums[i, j], L))
    return SkewMatrix.from_upper(n, lambda i, j: 2 * sums[i, j] / L)


def pattern_counts(aln: Alignment) -> np.ndarray:
    """Counts of each binary leaf pattern, indexed with row 1 as the high bit."""
    _require_binary(aln)
    n = aln.n
    idx = np.zeros(aln.length, dtype=np.int64)
    for row in aln.codes:
        idx = (idx << 1) | row
    return np.bincount(idx, minlength=2 ** n)


def expected_moments(top: SunletTopology, params: NetworkParams) -> SkewMatrix:
    """Exact pairwise moments 2 E[(-1)^(b_i + b_j)] of the CFN network mixture.

    K3P parameters are reduced to their induced binary flip probabilities.
    """
    cfn = params.to_cfn()
    t0, t1 = displayed_trees(top)

    def path_product(tree, i, j):
        out = 1
        for label in tree.path_edges(i, j):
            out = out * (1 - 2 * cfn.edges[label - 1])
        return out

    lam = cfn.lam
    return SkewMatrix.from_upper(
        top.n, lambda i, j: 2 * (lam * path_product(t0, i, j) + (1 - lam) * path_product(t1, i, j))
    )


def _tree_distribution(tree: Tree, params: NetworkParams) -> dict[tuple[int, ...], object]:
    # Literal sum over all vertex states; uniform root, 2x2 flip matrices.
    vertices = sorted({e.u for e in tree.edges} | {e.v for e in tree.edges})
    leaves = [leaf_vertex(i) for i in tree.leaves]
    half = Fraction(1, 2) if not isinstance(params.lam, float) else 0.5
    dist: dict[tuple[int, ...], object] = {}
    for states in product((0, 1), repeat=len(vertices)):
        s = dict(zip(vertices, states))
        w = half
        for e in tree.edges:
            beta = params.edges[e.label - 1]
            w = w * (beta if s[e.u] != s[e.v] else 1 - beta)
        pattern = tuple(s[v] for v in leaves)
        dist[pattern] = dist.get(pattern, 0) + w
    return dist


def pattern_distribution(top: SunletTopology, params: NetworkParams) -> dict[tuple[int, ...], object]:
    """Exact CFN leaf-pattern distribution by exhaustive state enumeration.

    Cost is 4^n per displayed tree, so this is an oracle for small n only.
    """
    cfn = params.to_cfn()
    t0, t1 = displayed_trees(top)
    d0 = _tree_distribution(t0, cfn)
    d1 = _tree_distribution(t1, cfn)
    lam = cfn.lam
    return {g: lam * d0.get(g, 0) + (1 - lam) * d1.get(g, 0) for g in product((0, 1), repeat=top.n)}


def affine_params_from_network(params: NetworkParams) -> AffineParams:
    """Patch parameters whose omega_from_params equals :func:`expected_moments`.

    a^e = 1 - 2 beta_e, except that the mixing weights are absorbed into the
    reticulation edges: a^(n+1) carries 2 lam and a^(2n) carries 2 (1 - lam).
    """
    cfn = params.to_cfn()
    n = cfn.n
    a = [1 - 2 * b for b in cfn.edges]
    a[n] = 2 * cfn.lam * a[n]
    a[2 * n - 1] = 2 * (1 - cfn.lam) * a[2 * n - 1]
    return AffineParams(n, a)
