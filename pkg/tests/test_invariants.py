import random
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from sunlet.infer import canonicalize, enumerate_labelings
from sunlet.invariants import (
    SunletLabeling,
    Three,
    Two,
    evaluate_minor,
    generate_minors,
    initial_term,
    minor_count,
    minor_polynomial,
    place_labeling,
    relabeled,
    score_labeling,
    score_labelings,
    score_parts,
)
from sunlet.model import omega_from_params, random_affine_params
from sunlet.seqsim import SunletTopology, expected_moments, random_network_params
from sunlet.skewpfaff import SkewMatrix, signed_minor


def symbolic(n):
    return SkewMatrix.from_upper(n, lambda i, j: sympy.Symbol(f"x{i}{j}"))


def random_skew(n, rng):
    return SkewMatrix(n, [Fraction(rng.randint(-20, 20), rng.randint(1, 20)) for _ in range(n * (n - 1) // 2)])


def exhaustive_minors(n):
    twos = [t for t in product(range(1, n + 1), repeat=4) if 1 < t[0] < t[1] < t[2] < t[3] <= n]
    threes = [t for t in product(range(1, n + 1), repeat=5) if 1 < t[0] < t[1] < t[2] < t[3] < t[4] <= n]
    return twos, threes


class TestGenerateMinors:
    @pytest.mark.parametrize("n", range(4, 13))
    def test_count(self, n):
        minors = generate_minors(n)
        assert len(minors) == comb(n - 1, 4) + comb(n - 1, 5) == minor_count(n)

    @pytest.mark.parametrize("n", range(4, 10))
    def test_matches_exhaustive_chains(self, n):
        twos, threes = exhaustive_minors(n)
        assert generate_minors(n) == [Two(*t) for t in twos] + [Three(*t) for t in threes]

    def test_n6_list(self):
        minors = generate_minors(6)
        assert [(m.rows, m.cols) for m in minors] == [
            ((2, 3), (4, 5)),
            ((2, 3), (4, 6)),
            ((2, 3), (5, 6)),
            ((2, 4), (5, 6)),
            ((3, 4), (5, 6)),
            ((1, 2, 6), (3, 4, 5)),
        ]

    def test_small_cases(self):
        assert generate_minors(4) == []
        assert generate_minors(5) == [Two(2, 3, 4, 5)]
        with pytest.raises(ValueError):
            generate_minors(3)

    def test_index_validation(self):
        with pytest.raises(ValueError):
            Two(1, 2, 3, 4)
        with pytest.raises(ValueError):
            Three(2, 3, 3, 4, 5)


class TestLabeling:
    def test_bijection_required(self):
        with pytest.raises(ValueError):
            SunletLabeling((1, 1, 2, 3))

    def test_reflection(self):
        assert SunletLabeling((1, 2, 3, 4)).reflected().perm == (1, 4, 3, 2)
        assert SunletLabeling((3, 1, 4, 2, 5)).reflected().reflected().perm == (3, 1, 4, 2, 5)

    def test_relabeled_reads_unordered_pairs(self):
        omega = random_skew(5, random.Random(0))
        theta = (3, 5, 1, 2, 4)
        b = relabeled(omega, theta)
        for r, c in combinations(range(1, 6), 2):
            a, bb = sorted((theta[r - 1], theta[c - 1]))
            assert b[r, c] == omega[a, bb]

    def test_place_is_inverse_of_relabel(self):
        omega = random_skew(6, random.Random(1))
        theta = SunletLabeling((4, 2, 6, 1, 5, 3))
        assert relabeled(place_labeling(omega, theta), theta) == omega


class TestEvaluate:
    def test_identity_is_signed_minor(self):
        omega = random_skew(7, random.Random(2))
        for m in generate_minors(7):
            assert evaluate_minor(omega, m) == signed_minor(omega, m.rows, m.cols)

    def test_example_two(self):
        x = lambda s: sympy.Symbol(f"x{s}")  # noqa: E731
        got = evaluate_minor(symbolic(6), Two(2, 3, 4, 5))
        assert sympy.expand(got - (x(24) * x(35) - x(25) * x(34))) == 0

    def test_swap_four_five(self):
        x = lambda s: sympy.Symbol(f"x{s}")  # noqa: E731
        got = evaluate_minor(symbolic(6), Two(2, 3, 4, 5), (1, 2, 3, 5, 4, 6))
        assert sympy.expand(got - (x(25) * x(34) - x(24) * x(35))) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            evaluate_minor(SkewMatrix.zeros(5), Two(2, 3, 4, 6))
        with pytest.raises(ValueError):
            evaluate_minor(SkewMatrix.zeros(6), Two(2, 3, 4, 5), (1, 2, 3, 4, 5))


class TestScore:
    def test_model_point_scores_zero(self):
        rng = random.Random(3)
        for n in (6, 7, 8):
            omega = omega_from_params(random_affine_params(n, rng))
            assert score_labeling(omega) == 0

    def test_normalized_float_point_scores_near_zero(self):
        for n in (6, 7, 8):
            params = random_network_params(n, np.random.default_rng(n), "cfn")
            assert score_labeling(expected_moments(SunletTopology(n), params)) <= 1e-12

    def test_other_labelings_positive(self):
        omega = omega_from_params(random_affine_params(6, random.Random(4)))
        zero = [lab.perm for lab in enumerate_labelings(6) if score_labeling(omega, lab) == 0]
        assert zero == [canonicalize(range(1, 7)).perm]

    @settings(max_examples=40, deadline=None)
    @given(st.integers(6, 8).flatmap(lambda n: st.tuples(st.permutations(range(1, n + 1)), st.integers(0, 10 ** 6))))
    def test_reflection_invariance(self, case):
        perm, seed = case
        omega = random_skew(len(perm), random.Random(seed))
        theta = SunletLabeling(tuple(perm))
        assert score_labeling(omega, theta) == score_labeling(omega, theta.reflected())

    def test_part_scaling(self):
        rng = random.Random(5)
        omega = random_skew(7, rng)
        theta = (2, 5, 1, 7, 3, 6, 4)
        two, three = score_parts(omega, theta)
        c = Fraction(3, 2)
        assert score_parts(omega.scaled(c), theta) == (c ** 2 * two, c ** 3 * three)
        assert score_labeling(omega, theta) == two + three

    def test_batch_float_is_bitwise_equal(self):
        rng = random.Random(6)
        omega = SkewMatrix(7, [rng.uniform(-2, 2) for _ in range(21)])
        perms = list(permutations(range(1, 8)))[::37]
        batch = score_labelings(omega, perms)
        assert batch == [score_labeling(omega, p) for p in perms]

    def test_batch_exact(self):
        omega = random_skew(6, random.Random(7))
        perms = list(permutations(range(1, 7)))[::17]
        assert score_labelings(omega, perms) == [score_labeling(omega, p) for p in perms]

    def test_zero_matrix(self):
        assert score_labeling(SkewMatrix.zeros(6)) == 0


class TestInitialTerms:
    def test_two(self):
        for m in generate_minors(8):
            if isinstance(m, Two):
                mono, coef = initial_term(m)
                assert set(mono) == {(m.i, m.l), (m.j, m.k)} and abs(coef) == 1

    def test_three(self):
        for m in generate_minors(8):
            if isinstance(m, Three):
                mono, coef = initial_term(m)
                assert set(mono) == {(1, m.j1), (m.i2, m.j2), (m.j3, m.i3)} and abs(coef) == 1

    def test_polynomial_matches_evaluation(self):
        rng = random.Random(8)
        omega = random_skew(7, rng)
        for m in generate_minors(7):
            poly = minor_polynomial(m)
            value = 0
            for mono, coef in poly.items():
                term = coef
                for a, b in mono:
                    term *= omega[a, b]
                value += term
            assert value == evaluate_minor(omega, m)
