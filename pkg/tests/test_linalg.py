import numpy as np

from strucrec.linalg import operator_norm


class TestOperatorNorm:
    def test_matches_svd(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            A = rng.standard_normal((rng.integers(2, 30), rng.integers(2, 30)))
            assert abs(operator_norm(A) - np.linalg.norm(A, 2)) < 1e-4 * np.linalg.norm(A, 2)

    def test_zero_matrix(self):
        assert operator_norm(np.zeros((4, 3))) == 0.0

    def test_rank_one(self):
        u = np.array([[3.0], [4.0]])
        A = u @ np.array([[1.0, 0.0]])
        assert abs(operator_norm(A) - 5.0) < 1e-8

    def test_deterministic(self):
        A = np.random.default_rng(1).standard_normal((20, 10))
        assert operator_norm(A) == operator_norm(A)
