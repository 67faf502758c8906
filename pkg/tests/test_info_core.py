import math

import numpy as np
import pytest

from praginfo import (
    Distribution,
    DimensionMismatchError,
    DomainError,
    InvalidDistributionError,
    JointDistribution,
    conditional_entropy,
    conditional_mutual_information,
    entropy,
    gaussian_entropy,
    mutual_information,
    relative_entropy,
)
from conftest import random_joint, random_probs

H_08_02 = 0.7219280948873623          # -0.8 log2 0.8 - 0.2 log2 0.2
H_09_01 = 0.4689955935892812          # binary entropy of 0.1
D_HALF_VS_3Q = 0.20751874963942185    # D((.5,.5) || (.75,.25))
BSC01_MI = 0.5310044064107188         # 1 - H(0.1)
GAUSS_1 = 2.047095585180641           # 0.5 log2(2 pi e)


def bsc_joint(flip):
    # uniform input through a binary symmetric channel
    return JointDistribution(
        [[0.5 * (1 - flip), 0.5 * flip], [0.5 * flip, 0.5 * (1 - flip)]]
    )


class TestDistribution:
    def test_valid(self):
        d = Distribution([0.25, 0.75], labels=("a", "b"))
        assert len(d) == 2
        assert d.labels == ("a", "b")
        assert d.probs.sum() == pytest.approx(1.0, abs=1e-15)

    def test_renormalizes_within_tolerance(self):
        d = Distribution([0.5, 0.5 + 5e-10])
        assert d.probs.sum() == pytest.approx(1.0, abs=1e-15)

    def test_rejects_bad_sum(self):
        with pytest.raises(InvalidDistributionError):
            Distribution([0.5, 0.6])

    def test_rejects_negative(self):
        with pytest.raises(InvalidDistributionError):
            Distribution([1.2, -0.2])

    def test_rejects_empty(self):
        with pytest.raises(InvalidDistributionError):
            Distribution([])

    def test_probs_frozen(self):
        d = Distribution([0.5, 0.5])
        with pytest.raises(ValueError):
            d.probs[0] = 0.9


class TestJointDistribution:
    def test_marginals(self):
        j = JointDistribution([[0.4, 0.1], [0.2, 0.3]])
        assert j.action_marginal().probs == pytest.approx([0.5, 0.5])
        assert j.message_marginal().probs == pytest.approx([0.6, 0.4])

    def test_rejects_negative_cell(self):
        with pytest.raises(InvalidDistributionError):
            JointDistribution([[0.6, -0.1], [0.3, 0.2]])

    def test_rejects_bad_total(self):
        with pytest.raises(InvalidDistributionError):
            JointDistribution([[0.5, 0.5], [0.5, 0.5]])


class TestEntropy:
    def test_uniform_binary(self):
        assert entropy([0.5, 0.5]) == 1.0

    def test_degenerate(self):
        assert entropy([1.0, 0.0]) == 0.0

    def test_skewed_binary(self):
        assert entropy([0.8, 0.2]) == pytest.approx(H_08_02, abs=1e-12)

    def test_bounds(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 9))
            h = entropy(random_probs(rng, n))
            assert -1e-12 <= h <= math.log2(n) + 1e-12


class TestRelativeEntropy:
    def test_identity(self, rng):
        for _ in range(50):
            p = random_probs(rng, int(rng.integers(1, 9)))
            assert relative_entropy(p, p) == pytest.approx(0.0, abs=1e-12)

    def test_oracle(self):
        d = relative_entropy([0.5, 0.5], [0.75, 0.25])
        assert d == pytest.approx(D_HALF_VS_3Q, abs=1e-12)

    def test_disjoint_support_is_infinite(self):
        assert relative_entropy([1.0, 0.0], [0.0, 1.0]) == math.inf

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            relative_entropy([0.5, 0.5], [0.5, 0.25, 0.25])

    def test_nonnegative_zero_iff_equal(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 9))
            p = random_probs(rng, n, floor=1e-3)
            q = random_probs(rng, n, floor=1e-3)
            d = relative_entropy(p, q)
            assert d >= -1e-12
            if np.max(np.abs(p - q)) > 1e-6:
                assert d > 0.0


class TestMutualInformation:
    def test_product_is_zero(self, rng):
        for _ in range(50):
            a = random_probs(rng, int(rng.integers(2, 6)))
            m = random_probs(rng, int(rng.integers(2, 6)))
            assert mutual_information(np.outer(a, m)) == pytest.approx(0.0, abs=1e-12)

    def test_identity_coupling(self):
        assert mutual_information([[0.5, 0.0], [0.0, 0.5]]) == pytest.approx(1.0, abs=1e-12)

    def test_bsc_oracle(self):
        assert mutual_information(bsc_joint(0.1)) == pytest.approx(BSC01_MI, abs=1e-12)

    def test_symmetric_under_transpose(self, rng):
        for _ in range(100):
            t = random_joint(rng, int(rng.integers(2, 6)), int(rng.integers(2, 6)))
            assert mutual_information(t) == pytest.approx(
                mutual_information(t.T), abs=1e-12
            )

    def test_entropy_identities(self, rng):
        # I = H(A) - H(A|M) = H(A) + H(M) - H(A,M)
        for _ in range(200):
            t = random_joint(rng, int(rng.integers(2, 6)), int(rng.integers(2, 6)))
            j = JointDistribution(t)
            i = mutual_information(j)
            ha = entropy(j.action_marginal())
            hm = entropy(j.message_marginal())
            hj = entropy(t.reshape(-1))
            assert i == pytest.approx(ha - conditional_entropy(j), abs=1e-9)
            assert i == pytest.approx(ha + hm - hj, abs=1e-9)
            assert -1e-12 <= i <= min(ha, hm) + 1e-9

    def test_additive_over_independent_ensembles(self, rng):
        for _ in range(50):
            t1 = random_joint(rng, 2, int(rng.integers(2, 4)))
            t2 = random_joint(rng, int(rng.integers(2, 4)), 2)
            # product coupling over independent pairs: I adds up
            prod = np.einsum("ij,kl->ikjl", t1, t2)
            prod = prod.reshape(t1.shape[0] * t2.shape[0], t1.shape[1] * t2.shape[1])
            assert mutual_information(prod) == pytest.approx(
                mutual_information(t1) + mutual_information(t2), abs=1e-9
            )

    def test_merging_message_columns_never_gains(self, rng):
        for _ in range(100):
            cols = int(rng.integers(3, 7))
            t = random_joint(rng, int(rng.integers(2, 6)), cols)
            j, k = rng.choice(cols, size=2, replace=False)
            merged = np.delete(t, k, axis=1)
            merged[:, j if j < k else j - 1] = t[:, j] + t[:, k]
            assert mutual_information(merged) <= mutual_information(t) + 1e-12


class TestConditionalEntropy:
    def test_independent_equals_marginal_entropy(self, rng):
        a = random_probs(rng, 4)
        m = random_probs(rng, 3)
        assert conditional_entropy(np.outer(a, m)) == pytest.approx(
            entropy(a), abs=1e-12
        )

    def test_identity_coupling(self):
        assert conditional_entropy([[0.5, 0.0], [0.0, 0.5]]) == 0.0

    def test_bsc_oracle(self):
        assert conditional_entropy(bsc_joint(0.1)) == pytest.approx(H_09_01, abs=1e-12)


class TestConditionalMutualInformation:
    def test_independent_z(self, rng):
        for _ in range(30):
            txy = random_joint(rng, 3, 3)
            pz = random_probs(rng, 3)
            txyz = txy[:, :, None] * pz[None, None, :]
            assert conditional_mutual_information(txyz) == pytest.approx(
                mutual_information(txy), abs=1e-9
            )

    def test_y_equals_z(self, rng):
        for _ in range(30):
            txy = random_joint(rng, 3, 4)
            txyz = np.zeros((3, 4, 4))
            for y in range(4):
                txyz[:, y, y] = txy[:, y]
            assert conditional_mutual_information(txyz) == pytest.approx(0.0, abs=1e-12)

    def test_chain_rule(self, rng):
        # I(X1 X2; M) = I(X1; M) + I(X2; M | X1) on random 2x2x2 tables
        for _ in range(200):
            t = rng.dirichlet(np.ones(8)).reshape(2, 2, 2)  # axes X1, X2, M
            block = mutual_information(t.reshape(4, 2))
            first = mutual_information(t.sum(axis=1))
            # conditional_mutual_information wants axes (X, Y, Z)
            second = conditional_mutual_information(np.transpose(t, (1, 2, 0)))
            assert block == pytest.approx(first + second, abs=1e-9)

    def test_invalid_table(self):
        with pytest.raises(InvalidDistributionError):
            conditional_mutual_information(np.full((2, 2, 2), 0.25))


class TestGaussianEntropy:
    def test_unit_sigma(self):
        assert gaussian_entropy(1.0) == pytest.approx(GAUSS_1, abs=1e-12)

    def test_doubling_sigma_adds_one_bit(self, rng):
        for _ in range(20):
            s = float(rng.uniform(0.01, 10.0))
            assert gaussian_entropy(2 * s) - gaussian_entropy(s) == pytest.approx(
                1.0, abs=1e-12
            )

    def test_zero_sigma_rejected(self):
        with pytest.raises(DomainError):
            gaussian_entropy(0.0)

    def test_negative_sigma_rejected(self):
        with pytest.raises(DomainError):
            gaussian_entropy(-1.0)
