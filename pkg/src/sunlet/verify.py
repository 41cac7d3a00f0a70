"""Exact-arithmetic checks of the algebraic identities behind the inference method."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import complex as sr
from .infer import enumerate_labelings
from .invariants import SunletLabeling, evaluate_minor, generate_minors, place_labeling, score_labelings
from .model import (
    beta_point,
    even_elements,
    omega_from_params,
    phi,
    psi,
    random_affine_params,
    random_rational,
)
from .skewpfaff import SkewMatrix, determinant, pfaffian

__all__ = ["CheckResult", "VerifyReport", "run_verify", "random_skew", "model_point"]


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    skipped: bool = False

    def to_dict(self) -> dict:
        out = {"name": self.name, "ok": self.ok, "detail": self.detail}
        if self.skipped:
            out["skipped"] = True
        return out


@dataclass
class VerifyReport:
    n_max: int
    seed: int
    checks: list[CheckResult] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self, timing: bool = False) -> dict:
        out = {"n_max": self.n_max, "seed": self.seed, "ok": self.ok, "checks": [c.to_dict() for c in self.checks]}
        if timing:
            out["timings"] = dict(self.timings)
        return out


def random_skew(n: int, rng: random.Random, bound: int = 100) -> SkewMatrix:
    """Skew matrix with signed rational entries p/q, |p| <= bound, 1 <= q <= bound."""
    return SkewMatrix(n, [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(n * (n - 1) // 2)])


def model_point(n: int, rng: random.Random) -> tuple[SkewMatrix, SunletLabeling]:
    """An exact moment matrix of a generic random network under a random true labeling.

    Sequence theta(p) sits at leaf position p, so evaluating under theta
    reads the model matrix in leaf order.
    """
    # A parameter equal to 1 is a zero-length edge, which makes neighbouring
    # leaves interchangeable; such points are not generic.
    params = random_affine_params(n, rng)
    while any(v == 1 for v in params.a):
        params = random_affine_params(n, rng)
    omega = omega_from_params(params)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    theta = SunletLabeling(tuple(perm))
    return place_labeling(omega, theta), theta


def _check_pf_det(rng, draws=200) -> CheckResult:
    orders = (2, 4, 6, 8)
    for k in range(draws):
        a = random_skew(orders[k % len(orders)], rng)
        if pfaffian(a) ** 2 != determinant(a.full()):
            return CheckResult("pfaffian_squared_is_determinant", False, f"draw {k}: mismatch at order {a.n}")
    return CheckResult("pfaffian_squared_is_determinant", True, f"{draws} matrices of orders 2-8")


def _check_factorization(n_max, rng, psi_fn, draws=25) -> CheckResult:
    for n in range(4, min(n_max, 8) + 1):
        evens = even_elements(n)
        for k in range(draws):
            a = random_affine_params(n, rng)
            omega = omega_from_params(a)
            for g in evens:
                if phi(g, a) != psi_fn(g, omega):
                    label = "".join(map(str, g))
                    return CheckResult("factorization", False, f"n={n} draw {k}: phi != psi at g={label}")
    return CheckResult("factorization", True, f"n=4..{min(n_max, 8)}, {draws} draws, every even g")


def _check_vanishing(n_max, rng, draws=100) -> CheckResult:
    for n in range(4, min(n_max, 9) + 1):
        minors = generate_minors(n)
        for k in range(draws):
            points = {
                "parameterization": omega_from_params(random_affine_params(n, rng)),
                "beta": beta_point(
                    [random_rational(rng) for _ in range(n)], [random_rational(rng) for _ in range(n)]
                ),
            }
            for source, omega in points.items():
                for m in minors:
                    if evaluate_minor(omega, m) != 0:
                        return CheckResult("vanishing", False, f"n={n} draw {k}: {m} nonzero on {source} point")
    return CheckResult("vanishing", True, f"n=4..{min(n_max, 9)}, {draws} draws of each parameterization")


def _check_four_leaf(rng, draws=100) -> CheckResult:
    for k in range(draws):
        a = random_affine_params(4, rng)
        q = {g: phi(g, a) for g in ("0000", "1111", "1100", "0011", "1010", "0101", "1001", "0110")}
        rel = q["0000"] * q["1111"] - q["1100"] * q["0011"] + q["1010"] * q["0101"] - q["1001"] * q["0110"]
        if rel != 0:
            return CheckResult("four_leaf_relation", False, f"draw {k}: relation evaluates to {rel}")
    return CheckResult("four_leaf_relation", True, f"{draws} points")


def _check_separation(n_max, rng, draws=50) -> CheckResult:
    sizes = [n for n in (6, 7) if n <= n_max]
    if not sizes:
        return CheckResult("identifiability", True, "skipped: needs n_max >= 6", skipped=True)
    for n in sizes:
        labelings = enumerate_labelings(n)
        for k in range(draws):
            omega, theta = model_point(n, rng)
            truth = min(theta.perm, theta.reflected().perm, key=lambda p: p[1:])
            scores = score_labelings(omega, [lab.perm for lab in labelings])
            for lab, s in zip(labelings, scores):
                if (s == 0) != (lab.perm == truth):
                    why = "true labeling scores nonzero" if s else f"labeling {lab.perm} also scores 0"
                    return CheckResult("identifiability", False, f"n={n} draw {k}: {why}")
    return CheckResult("identifiability", True, f"n in {sizes}, {draws} points, unique zero at the true labeling")


def _check_purity(n_max) -> CheckResult:
    top = min(n_max, 8)
    if top < 5:
        return CheckResult("purity", True, "skipped: needs n_max >= 5", skipped=True)
    for n in range(5, top + 1):
        sizes = {len(f) for f in sr.enumerate_facets(n)}
        if sizes != {2 * n - 1}:
            return CheckResult("purity", False, f"n={n}: facet sizes {sorted(sizes)}")
    return CheckResult("purity", True, f"n=5..{top}: every facet has 2n-1 pairs")


def _check_facet_oracle(n_max) -> CheckResult:
    top = min(n_max, 7)
    if top < 5:
        return CheckResult("facet_enumeration", True, "skipped: needs n_max >= 5", skipped=True)
    for n in range(5, top + 1):
        if sr.enumerate_facets(n) != sr.brute_force_facets(n):
            return CheckResult("facet_enumeration", False, f"n={n}: structural and brute-force facets differ")
    return CheckResult("facet_enumeration", True, f"n=5..{top}: matches brute force")


def _check_shelling(n_max) -> CheckResult:
    top = min(n_max, sr.MAX_SHELLING_N)
    if top < 5:
        return CheckResult("shelling", True, "skipped: needs n_max >= 5", skipped=True)
    notes = []
    for n in range(5, top + 1):
        # the facet order's linear extension is checked up to n=6; beyond that
        # a greedy search supplies the certificate
        result = sr.check_shelling(n) if n <= 6 else sr.search_shelling(n)
        if not result.ok:
            return CheckResult("shelling", False, f"n={n}: {result.method} fails at facet {result.first_failure}")
        try:
            control = sr.scrambled_order(n)
        except ValueError:
            # all facets pairwise adjacent (n=5 has two): every order shells
            notes.append(f"n={n} {result.method}, no control order")
            continue
        if sr.check_order(control) is None:
            return CheckResult("shelling", False, f"n={n}: scrambled control order was accepted")
        notes.append(f"n={n} {result.method}, control rejected")
    return CheckResult("shelling", True, "; ".join(notes))


def run_verify(n_max: int = 8, seed: int = 0, psi_fn: Callable = psi) -> VerifyReport:
    """Run every identity check; ``psi_fn`` can be swapped for a faulty map in tests."""
    if not 4 <= n_max <= 9:
        raise ValueError("n_max must lie in 4..9")
    report = VerifyReport(n_max, seed)
    rng = random.Random(seed)
    steps = [
        ("pfaffian_squared_is_determinant", lambda: _check_pf_det(rng)),
        ("factorization", lambda: _check_factorization(n_max, rng, psi_fn)),
        ("vanishing", lambda: _check_vanishing(n_max, rng)),
        ("four_leaf_relation", lambda: _check_four_leaf(rng)),
        ("identifiability", lambda: _check_separation(n_max, rng)),
        ("facet_enumeration", lambda: _check_facet_oracle(n_max)),
        ("purity", lambda: _check_purity(n_max)),
        ("shelling", lambda: _check_shelling(n_max)),
    ]
    for name, step in steps:
        start = time.perf_counter()
        report.checks.append(step())
        report.timings[name] = time.perf_counter() - start
    return report
