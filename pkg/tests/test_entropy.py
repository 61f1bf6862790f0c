import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamswitch.entropy import (
    LOG2,
    AbsoluteContinuityError,
    DomainError,
    FiniteDistribution,
    JointDistribution,
    binary_entropy,
    binary_entropy_inverse,
    entropy,
    f_func,
    kl_divergence,
    log_binomial,
    log_binomial_row,
    mutual_information,
    mutual_information_from_counts,
    phi_func,
)

# expected values below were computed with mpmath at 40 digits


class TestBinaryEntropy:
    def test_maximum(self):
        assert binary_entropy(0.5) == pytest.approx(math.log(2), abs=1e-15)

    def test_endpoints(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_quarter(self):
        assert binary_entropy(0.25) == pytest.approx(0.5623351446188083503, abs=1e-15)

    @pytest.mark.parametrize("x", [-1e-9, 1.0000001, 2.0])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            binary_entropy(x)


class TestBinaryEntropyInverse:
    def test_top(self):
        assert binary_entropy_inverse(math.log(2)) == 0.5

    def test_zero(self):
        assert binary_entropy_inverse(0.0) == 0.0

    def test_quarter_roundtrip(self):
        assert binary_entropy_inverse(0.5623351446188083503) == pytest.approx(0.25, abs=1e-12)

    def test_clamps_rounding_above_log2(self):
        assert binary_entropy_inverse(LOG2 + 5e-13) == 0.5

    @pytest.mark.parametrize("t", [-1e-15, LOG2 + 1e-9])
    def test_domain(self, t):
        with pytest.raises(DomainError):
            binary_entropy_inverse(t)

    @given(st.floats(min_value=0.0, max_value=LOG2))
    def test_roundtrip(self, t):
        x = binary_entropy_inverse(t)
        assert 0.0 <= x <= 0.5
        assert abs(binary_entropy(x) - t) <= 1e-10

    @pytest.mark.parametrize("gap", [1e-3, 1e-6, 1e-9, 1e-12])
    def test_accurate_near_top(self, gap):
        # reference: mpmath inverse of the exact double t; comparing h2 itself
        # near the top would only resolve x to about 1e-8
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 50
        t = LOG2 - gap
        h2 = lambda x: -x * mp.log(x) - (1 - x) * mp.log(1 - x)  # noqa: E731
        ref = mp.findroot(lambda x: h2(x) - mp.mpf(t), (mp.mpf("1e-3"), mp.mpf("0.5")), solver="bisect")
        assert binary_entropy_inverse(t) == pytest.approx(float(ref), abs=1e-12)


class TestF:
    def test_values(self):
        assert f_func(0.0) == 0.0
        assert f_func(1.0) == 0.0
        assert f_func(0.5) == pytest.approx(0.3465735902799726547, abs=1e-15)

    def test_negative_arguments_allowed(self):
        assert f_func(-1.0) == pytest.approx(-2 * math.log(2))

    def test_domain(self):
        with pytest.raises(DomainError):
            f_func(1.5)


class TestPhi:
    def test_negative_is_zero(self):
        assert phi_func(-0.1) == 0.0
        assert phi_func(-1e6) == 0.0

    def test_zero(self):
        assert phi_func(0.0) == 0.0

    def test_top(self):
        assert phi_func(math.log(2)) == pytest.approx(0.3465735902799726547, abs=1e-15)

    def test_clamped_above_log2(self):
        assert phi_func(LOG2 + 1e-13) == phi_func(LOG2)

    def test_domain(self):
        with pytest.raises(DomainError):
            phi_func(0.7)

    def test_agrees_with_f_on_lower_half(self):
        for x in np.linspace(0, 0.5, 51):
            assert phi_func(binary_entropy(x)) == pytest.approx(f_func(x), abs=1e-12)


class TestLogBinomial:
    @pytest.mark.parametrize("i, expected", [(0, 0.0), (2, 3.3322045101752039239), (8, 0.0)])
    def test_examples(self, i, expected):
        assert log_binomial(8, i) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("n", [1, 7, 50, 333, 1000])
    def test_against_integer_binomials(self, n):
        row = log_binomial_row(n)
        for i in range(n + 1):
            exact = math.log(math.comb(n, i))
            assert log_binomial(n, i) == pytest.approx(exact, rel=1e-13, abs=1e-13)
            assert row[i] == pytest.approx(exact, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("i", [-1, 9])
    def test_domain(self, i):
        with pytest.raises(DomainError):
            log_binomial(8, i)


class TestDistributions:
    def test_rejects_bad_sums(self):
        with pytest.raises(ValueError):
            FiniteDistribution(("a", "b"), [0.5, 0.6])

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            FiniteDistribution(("a", "b"), [1.5, -0.5])

    def test_rejects_duplicate_outcomes(self):
        with pytest.raises(ValueError):
            FiniteDistribution(("a", "a"), [0.5, 0.5])

    def test_from_counts(self):
        d = FiniteDistribution.from_counts("xyz", [1, 2, 1])
        assert d.prob("y") == 0.5
        assert d.prob("missing") == 0.0

    def test_joint_marginals(self):
        j = JointDistribution((0, 1), ("a", "b", "c"), [[0.1, 0.2, 0.1], [0.3, 0.2, 0.1]])
        assert j.row_marginal().probs == pytest.approx([0.4, 0.6])
        assert j.col_marginal().probs == pytest.approx([0.4, 0.4, 0.2])


class TestKL:
    def test_identical(self):
        p = FiniteDistribution((1, 2, 3), [0.2, 0.3, 0.5])
        assert kl_divergence(p, p) == 0.0

    def test_point_mass(self):
        p = FiniteDistribution((0, 1), [1.0, 0.0])
        q = FiniteDistribution.uniform((0, 1))
        assert kl_divergence(p, q) == pytest.approx(math.log(2), abs=1e-15)

    def test_three_quarters(self):
        p = FiniteDistribution((0, 1), [0.75, 0.25])
        q = FiniteDistribution.uniform((0, 1))
        assert kl_divergence(p, q) == pytest.approx(0.1308120359411369591, abs=1e-15)

    def test_absolute_continuity(self):
        p = FiniteDistribution.uniform((0, 1))
        q = FiniteDistribution((0, 1), [1.0, 0.0])
        with pytest.raises(AbsoluteContinuityError):
            kl_divergence(p, q)

    def test_aligns_by_label(self):
        p = FiniteDistribution(("a", "b"), [0.75, 0.25])
        q = FiniteDistribution(("b", "a"), [0.5, 0.5])
        assert kl_divergence(p, q) == pytest.approx(0.1308120359411369591, abs=1e-15)

    @settings(max_examples=200)
    @given(
        st.lists(st.integers(0, 20), min_size=2, max_size=6).filter(lambda c: sum(c) > 0),
        st.lists(st.integers(1, 20), min_size=6, max_size=6),
    )
    def test_nonnegative_and_zero_iff_equal(self, pc, qc):
        qc = qc[: len(pc)]
        p = FiniteDistribution.from_counts(range(len(pc)), pc)
        q = FiniteDistribution.from_counts(range(len(qc)), qc)
        d = kl_divergence(p, q)
        assert d >= 0.0
        if np.allclose(p.probs, q.probs, atol=1e-12, rtol=0):
            assert d <= 1e-12
        else:
            assert d > 0.0


class TestMutualInformation:
    def test_independent(self):
        j = JointDistribution.product(
            FiniteDistribution((0, 1), [0.3, 0.7]), FiniteDistribution("abc", [0.2, 0.5, 0.3])
        )
        assert mutual_information(j) == pytest.approx(0.0, abs=1e-15)

    def test_diagonal(self):
        j = JointDistribution((1, 2), (1, 2), [[0.5, 0.0], [0.0, 0.5]])
        assert mutual_information(j) == pytest.approx(math.log(2), abs=1e-15)

    def test_example(self):
        j = JointDistribution((0, 1), (0, 1), [[0.4, 0.1], [0.1, 0.4]])
        assert mutual_information(j) == pytest.approx(0.1927447570217574299, abs=1e-15)

    @settings(max_examples=200)
    @given(st.lists(st.lists(st.integers(0, 9), min_size=3, max_size=3), min_size=2, max_size=4)
           .filter(lambda m: sum(map(sum, m)) > 0))
    def test_equals_kl_against_product(self, counts):
        counts = np.array(counts)
        j = JointDistribution.from_counts(range(len(counts)), range(3), counts)
        prod = JointDistribution.product(j.row_marginal(), j.col_marginal())
        flat = lambda d: FiniteDistribution(  # noqa: E731
            [(r, c) for r in d.row_labels for c in d.col_labels], d.probs.ravel()
        )
        mi = mutual_information(j)
        assert mi >= 0.0
        assert mi == pytest.approx(kl_divergence(flat(j), flat(prod)), abs=1e-10)
        assert mi == pytest.approx(mutual_information_from_counts(counts), abs=1e-10)


def test_entropy_of_uniform():
    assert entropy(FiniteDistribution.uniform(range(8))) == pytest.approx(math.log(8))
