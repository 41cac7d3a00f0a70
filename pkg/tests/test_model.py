import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oracles import full_hadamard
from sunlet.invariants import evaluate_minor, generate_minors
from sunlet.model import (
    AffineParams,
    FourierVector,
    beta_point,
    even_elements,
    group_element,
    hadamard_transform,
    omega_from_params,
    omega_from_q,
    phi,
    psi,
    random_affine_params,
    random_rational,
    unit_pair,
)
from sunlet.skewpfaff import SkewMatrix


def test_even_elements():
    evens = even_elements(4)
    assert len(evens) == 8
    assert evens[0] == (0, 0, 0, 0)
    assert all(sum(g) % 2 == 0 for g in evens)


def test_group_element_validation():
    assert group_element("1001") == (1, 0, 0, 1)
    with pytest.raises(ValueError):
        group_element("102")


def test_affine_params_length():
    with pytest.raises(ValueError):
        AffineParams(4, [1] * 7)
    assert AffineParams(2, [1, 2, 3, 4])[4] == 4


def test_random_rational_range():
    rng = random.Random(0)
    for _ in range(200):
        v = random_rational(rng)
        assert Fraction(1, 100) <= v <= 100


class TestPhi:
    def test_identity_element_is_one(self):
        a = random_affine_params(6, random.Random(1))
        assert phi([0] * 6, a) == 1

    def test_four_leaf_example(self):
        a = random_affine_params(4, random.Random(2))
        expected = Fraction(1, 2) * a[1] * a[4] * (a[5] * a[6] * a[7] + a[8])
        assert phi("1001", a) == expected

    def test_pairs_away_from_leaf_one(self):
        rng = random.Random(3)
        n = 7
        a = random_affine_params(n, rng)
        for i in range(2, n + 1):
            for j in range(i + 1, n + 1):
                path = 1
                for t in range(i, j):
                    path *= a[n + t]
                assert phi(unit_pair(n, i, j), a) == a[i] * a[j] * path

    def test_odd_element_rejected(self):
        a = random_affine_params(4, random.Random(4))
        with pytest.raises(ValueError, match="q_g is identically zero for odd g"):
            phi("1000", a)


class TestPsi:
    def test_identity(self):
        assert psi("0000", SkewMatrix.zeros(4)) == 1

    def test_pair(self):
        omega = SkewMatrix(4, [Fraction(k) for k in range(1, 7)])
        assert psi("0110", omega) == omega[2, 3] / 2

    def test_full_support(self):
        omega = SkewMatrix(4, [Fraction(k, 7) for k in range(1, 7)])
        x = omega.upper
        assert psi("1111", omega) == (x[1, 2] * x[3, 4] - x[1, 3] * x[2, 4] + x[1, 4] * x[2, 3]) / 4

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            psi("1110", SkewMatrix.zeros(4))


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_factorization(n):
    rng = random.Random(n)
    for _ in range(3):
        a = random_affine_params(n, rng)
        omega = omega_from_params(a)
        for g in even_elements(n):
            assert phi(g, a) == psi(g, omega)


def test_omega_from_params_zero():
    assert omega_from_params(AffineParams(5, [0] * 10)) == SkewMatrix.zeros(5)


@pytest.mark.parametrize("n", [6, 7])
def test_minors_vanish_on_both_parameterizations(n):
    rng = random.Random(10 + n)
    for _ in range(5):
        for omega in (
            omega_from_params(random_affine_params(n, rng)),
            beta_point([random_rational(rng) for _ in range(n)], [random_rational(rng) for _ in range(n)]),
        ):
            assert all(evaluate_minor(omega, m) == 0 for m in generate_minors(n))


def test_beta_point_substitution():
    n = 5
    omega = beta_point([0] + [1] * (n - 1), [1] + [0] * (n - 1))
    for (i, j), v in omega.items():
        assert v == (1 if i == 1 else 0)
    assert beta_point([0] * 4, [0] * 4) == SkewMatrix.zeros(4)


def test_four_leaf_relation():
    rng = random.Random(20)
    for _ in range(20):
        a = random_affine_params(4, rng)
        q = lambda g: phi(g, a)  # noqa: E731
        assert q("0000") * q("1111") - q("1100") * q("0011") + q("1010") * q("0101") - q("1001") * q("0110") == 0


class TestHadamard:
    def test_uniform(self):
        n = 4
        fv = hadamard_transform([Fraction(1, 2 ** n)] * 2 ** n)
        assert fv.q[(0,) * n] == 1
        assert all(v == 0 for g, v in fv.q.items() if any(g))
        assert fv.odd_mass == 0

    def test_point_mass(self):
        table = [0] * 16
        table[0] = 1
        fv = hadamard_transform(table)
        assert all(v == 1 for v in fv.q.values())

    def test_mapping_input_and_msb_convention(self):
        fv = hadamard_transform({"1000": 1})
        assert fv["1000"] == -1 and fv["1100"] == -1 and fv["0110"] == 1

    def test_matches_character_sum(self):
        rng = random.Random(30)
        n = 4
        p = {h: Fraction(rng.randint(0, 9)) for h in product((0, 1), repeat=n)}
        total = sum(p.values())
        p = {h: v / total for h, v in p.items()}
        expected = full_hadamard(p, n)
        fv = hadamard_transform(p)
        for g, v in expected.items():
            assert fv[g] == v
        assert fv.odd_mass == sum(abs(v) for g, v in expected.items() if sum(g) % 2)

    def test_bad_size(self):
        with pytest.raises(ValueError, match="not a power of two"):
            hadamard_transform([1, 2, 3])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(0, 20), min_size=16, max_size=16).filter(lambda v: sum(v) > 0))
    def test_probability_tables(self, counts):
        total = sum(counts)
        fv = hadamard_transform([Fraction(c, total) for c in counts])
        assert fv.q[(0, 0, 0, 0)] == 1
        assert all(abs(v) <= 1 for v in fv.q.values())


class TestOmegaFromQ:
    def test_uniform_gives_zero(self):
        assert omega_from_q(hadamard_transform([Fraction(1, 32)] * 32)) == SkewMatrix.zeros(5)

    def test_all_halves(self):
        n = 4
        q = {g: Fraction(1, 2) for g in even_elements(n)}
        omega = omega_from_q(FourierVector(n, q))
        assert all(v == 1 for v in omega.values())

    def test_needs_four_leaves(self):
        with pytest.raises(ValueError):
            omega_from_q(FourierVector(3, {g: 1 for g in even_elements(3)}))

    def test_depends_only_on_pairwise_marginals(self):
        rng = random.Random(31)
        n = 5
        p = {h: Fraction(rng.randint(1, 9)) for h in product((0, 1), repeat=n)}
        total = sum(p.values())
        p = {h: v / total for h, v in p.items()}
        omega = omega_from_q(hadamard_transform(p))
        for (i, j), v in omega.items():
            agree = sum(w for h, w in p.items() if h[i - 1] == h[j - 1])
            assert v == 2 * (agree - (1 - agree))
