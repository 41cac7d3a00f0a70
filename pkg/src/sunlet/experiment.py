"""Simulation studies: how often the true network is ranked first."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .alignment import Alignment, project_to_binary
from .infer import rank_networks, true_rank
from .invariants import SunletLabeling
from .seqsim import NetworkParams, SunletTopology, pairwise_moments, random_network_params, simulate_alignment

__all__ = ["RunConfig", "Replicate", "draw_replicate", "simulate_labeled", "run_experiment", "RANK_COLUMNS"]

RANK_COLUMNS = [str(r) for r in range(1, 10)] + [">=10"]


@dataclass
class RunConfig:
    n: int = 6
    seed: int = 0
    model: str = "k3p"
    lengths: list[int] = field(default_factory=lambda: [1000, 10000, 100000])
    replicates: int = 100
    lam_range: tuple[float, float] = (0.15, 0.85)
    flip_range: tuple[float, float] = (0.02, 0.2)
    transition_range: tuple[float, float] = (0.02, 0.2)
    workers: int = 1

    def validate(self) -> None:
        if self.n < 4:
            raise ValueError("n must be at least 4")
        if self.model not in ("cfn", "k3p"):
            raise ValueError(f"model must be cfn or k3p, got {self.model!r}")
        if self.replicates < 0:
            raise ValueError("replicates must be non-negative")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if not self.lengths or any(L < 1 for L in self.lengths):
            raise ValueError("lengths must be positive")
        for name in ("lam_range", "flip_range", "transition_range"):
            lo, hi = getattr(self, name)
            if not 0 <= lo <= hi <= 1:
                raise ValueError(f"{name} must satisfy 0 <= low <= high <= 1")
        if self.flip_range[1] >= 0.5:
            raise ValueError("flip probabilities must stay below 0.5")
        if self.model == "k3p" and self.flip_range[1] + self.transition_range[1] > 1:
            raise ValueError("K3P substitution probabilities could exceed 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def resolved(self) -> dict:
        """Everything that determines the results; the worker count is left out."""
        out = asdict(self)
        del out["workers"]
        for k in ("lam_range", "flip_range", "transition_range"):
            out[k] = list(out[k])
        return out


@dataclass(frozen=True)
class Replicate:
    params: NetworkParams
    labeling: SunletLabeling


def draw_replicate(config: RunConfig, index: int) -> Replicate:
    """Network parameters and true labeling of replicate ``index``; shared by all lengths."""
    rng = np.random.default_rng([config.seed, index])
    params = random_network_params(
        config.n, rng, config.model, config.lam_range, config.flip_range, config.transition_range
    )
    labeling = SunletLabeling(tuple(int(v) for v in rng.permutation(config.n) + 1))
    return Replicate(params, labeling)


def simulation_seed(seed: int, index: int, length: int) -> int:
    return int(np.random.SeedSequence([seed, index, length]).generate_state(1, dtype=np.uint64)[0])


def simulate_labeled(params: NetworkParams, labeling: SunletLabeling, length: int, seed: int) -> Alignment:
    """Simulate on the sunlet and store leaf p as sequence ``labeling(p)``."""
    n = params.n
    leaves = simulate_alignment(SunletTopology(n), params, length, seed)
    codes = np.empty_like(leaves.codes)
    for pos, seq in enumerate(labeling.perm):
        codes[seq - 1] = leaves.codes[pos]
    return Alignment(tuple(f"taxon{i}" for i in range(1, n + 1)), codes, leaves.alphabet)


def _rank_column(rank: int) -> str:
    return str(rank) if rank < 10 else ">=10"


def run_experiment(config: RunConfig, progress=None) -> dict:
    """For each alignment length and replicate: simulate, project, rank, record the true rank.

    The returned report is a deterministic function of the config apart from
    ``timings``, which the caller may drop.
    """
    config.validate()
    replicates = [draw_replicate(config, r) for r in range(config.replicates)]
    timings = {"simulate": 0.0, "moments": 0.0, "scoring": 0.0}
    rows = []
    for length in config.lengths:
        counts = dict.fromkeys(RANK_COLUMNS, 0)
        ranks = []
        for r, rep in enumerate(replicates):
            t0 = time.perf_counter()
            aln = project_to_binary(simulate_labeled(rep.params, rep.labeling, length, simulation_seed(config.seed, r, length)))
            t1 = time.perf_counter()
            omega = pairwise_moments(aln)
            t2 = time.perf_counter()
            rank = true_rank(rank_networks(omega, workers=config.workers), rep.labeling)
            t3 = time.perf_counter()
            timings["simulate"] += t1 - t0
            timings["moments"] += t2 - t1
            timings["scoring"] += t3 - t2
            ranks.append(rank)
            counts[_rank_column(rank)] += 1
            if progress is not None:
                progress(length, r, rank)
        total = len(ranks)
        rows.append(
            {
                "length": length,
                "replicates": total,
                "counts": counts,
                "fractions": {k: (v / total if total else 0.0) for k, v in counts.items()},
                "rank1_fraction": counts["1"] / total if total else 0.0,
                "ranks": ranks,
            }
        )
    return {"config": config.resolved(), "columns": RANK_COLUMNS, "table": rows, "timings": timings}
