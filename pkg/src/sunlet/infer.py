"""Exhaustive ranking of sunlet leaf-labelings against a moment matrix."""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

import numpy as np

from .alignment import Alignment, project_to_binary
from .invariants import SunletLabeling, score_labelings
from .seqsim import pairwise_moments, pattern_counts
from .skewpfaff import SkewMatrix

__all__ = [
    "canonicalize",
    "enumerate_labelings",
    "RankingEntry",
    "rank_networks",
    "true_rank",
    "InferenceResult",
    "infer_alignment",
    "odd_parity_mass",
    "default_workers",
]


def default_workers() -> int:
    """Worker count from ``SUNLET_WORKERS``, else 1."""
    raw = os.environ.get("SUNLET_WORKERS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        raise ValueError(f"SUNLET_WORKERS must be an integer, got {raw!r}") from None


def canonicalize(theta: SunletLabeling | Sequence[int]) -> SunletLabeling:
    """Whichever of theta and its reflection has the smaller (theta(2), ..., theta(n))."""
    lab = theta if isinstance(theta, SunletLabeling) else SunletLabeling(tuple(theta))
    ref = lab.reflected()
    return lab if lab.perm[1:] <= ref.perm[1:] else ref


def enumerate_labelings(n: int) -> list[SunletLabeling]:
    """All n!/2 canonical labelings in lexicographic order."""
    if n < 4:
        raise ValueError("labelings are enumerated for n >= 4")
    # theta is canonical exactly when theta(2) < theta(n)
    return [SunletLabeling(p) for p in permutations(range(1, n + 1)) if p[1] < p[-1]]


@dataclass(frozen=True)
class RankingEntry:
    labeling: SunletLabeling
    score: object
    rank: int

    def to_dict(self) -> dict:
        score = self.score
        if isinstance(score, Fraction):
            score = str(score) if score.denominator != 1 else score.numerator
        return {"labeling": list(self.labeling.perm), "score": score, "rank": self.rank}


def _score_shard(args):
    omega, perms = args
    return score_labelings(omega, perms)


def _shards(items: list, k: int) -> list[list]:
    size, extra = divmod(len(items), k)
    out, start = [], 0
    for w in range(k):
        stop = start + size + (w < extra)
        out.append(items[start:stop])
        start = stop
    return [s for s in out if s]


def rank_networks(omega: SkewMatrix, workers: int = 1) -> list[RankingEntry]:
    """Score every canonical labeling and rank ascending.

    Ties share the minimal rank and are ordered lexicographically. Labelings
    are split into contiguous blocks per worker, so the result does not depend
    on ``workers``.
    """
    n = omega.n
    if n in (4, 5):
        warnings.warn(f"networks on {n} leaves are not identifiable from these invariants", stacklevel=2)
    labelings = enumerate_labelings(n)
    perms = [lab.perm for lab in labelings]
    workers = max(1, min(workers, len(perms)))
    if workers == 1:
        scores = score_labelings(omega, perms)
    else:
        shards = _shards(perms, workers)
        with ProcessPoolExecutor(max_workers=len(shards)) as pool:
            scores = [s for part in pool.map(_score_shard, [(omega, p) for p in shards]) for s in part]
    order = sorted(range(len(labelings)), key=lambda k: (scores[k], labelings[k].perm))
    entries = []
    rank = 0
    prev = None
    for pos, k in enumerate(order):
        if prev is None or scores[k] != prev:
            rank = pos + 1
            prev = scores[k]
        entries.append(RankingEntry(labelings[k], scores[k], rank))
    return entries


def true_rank(ranking: Sequence[RankingEntry], theta_star: SunletLabeling | Sequence[int]) -> int:
    target = canonicalize(theta_star)
    for entry in ranking:
        if entry.labeling == target:
            return entry.rank
    raise ValueError(f"labeling {target.perm} does not appear in the ranking")


def odd_parity_mass(aln: Alignment) -> float:
    """Total |q_g| over odd g of the empirical binary pattern distribution.

    For n above 16 the 2^n table is not formed and NaN is returned.
    """
    if aln.n > 16:
        return float("nan")
    table = pattern_counts(aln).astype(np.float64) / aln.length
    # float Walsh-Hadamard butterfly, same convention as model.hadamard_transform
    h = 1
    while h < table.size:
        t = table.reshape(-1, 2, h)
        table = np.concatenate([t[:, 0] + t[:, 1], t[:, 0] - t[:, 1]], axis=1).reshape(-1)
        h *= 2
    odd = np.array([bin(g).count("1") % 2 for g in range(table.size)], dtype=bool)
    return float(np.abs(table[odd]).sum())


@dataclass
class InferenceResult:
    n: int
    entries: list[RankingEntry]
    odd_parity_diagnostic: float
    labels: tuple[str, ...] = ()

    @property
    def num_labelings(self) -> int:
        return len(self.entries)

    def to_dict(self, top_k: int | None = None) -> dict:
        entries = self.entries if top_k is None else self.entries[:top_k]
        return {
            "n": self.n,
            "num_labelings": self.num_labelings,
            "labels": list(self.labels),
            "entries": [e.to_dict() for e in entries],
            "odd_parity_diagnostic": self.odd_parity_diagnostic,
        }


def infer_alignment(aln: Alignment, workers: int = 1) -> InferenceResult:
    """Project to binary, build the moment matrix once and rank all labelings."""
    binary = project_to_binary(aln)
    omega = pairwise_moments(binary)
    entries = rank_networks(omega, workers=workers)
    return InferenceResult(binary.n, entries, odd_parity_mass(binary), binary.labels)
