"""
Unit tests for exact linear algebra over the rationals
"""
from fractions import Fraction

import numpy as np
import pytest

from core.exact_linalg import (
    bareiss_inverse,
    exact_equal,
    fraction_matrix,
    identity,
    matrix_rank,
    polarization,
    primitive_direction,
    rref,
)
from core.exceptions import SingularMatrixError


class TestBareissInverse:
    """Test fraction-free inversion"""

    def test_identity(self):
        """The identity is its own inverse"""
        assert exact_equal(bareiss_inverse(identity(3)), identity(3))

    def test_known_inverse(self):
        """[[2,1,1],[1,2,1],[1,1,2]] has 3/4 on the diagonal and -1/4 elsewhere"""
        inverse = bareiss_inverse(fraction_matrix([[2, 1, 1], [1, 2, 1], [1, 1, 2]]))
        for i in range(3):
            for j in range(3):
                assert inverse[i, j] == (Fraction(3, 4) if i == j else Fraction(-1, 4))

    def test_needs_pivoting(self):
        """A zero leading entry is handled by a row swap"""
        matrix = fraction_matrix([[0, 1], [1, 0]])
        assert exact_equal(bareiss_inverse(matrix), matrix)

    def test_rational_entries(self):
        """Entries with denominators invert exactly"""
        matrix = fraction_matrix([["1/2", "1/3"], ["1/4", "1/5"]])
        assert exact_equal(matrix @ bareiss_inverse(matrix), identity(2))

    def test_zero_matrix(self):
        """The zero matrix is singular with rank 0"""
        with pytest.raises(SingularMatrixError) as info:
            bareiss_inverse(fraction_matrix([[0, 0], [0, 0]]))
        assert info.value.rank == 0

    def test_rank_deficient(self):
        """A rank-two 3x3 matrix reports its rank"""
        with pytest.raises(SingularMatrixError) as info:
            bareiss_inverse(fraction_matrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]]))
        assert info.value.rank == 2

    def test_random_matrices(self):
        """M^-1 M = Id for random nonsingular integer matrices up to dimension 6"""
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 200:
            n = int(rng.integers(1, 7))
            matrix = fraction_matrix(rng.integers(-5, 6, size=(n, n)).tolist())
            if matrix_rank(matrix) < n:
                continue
            assert exact_equal(bareiss_inverse(matrix) @ matrix, identity(n))
            checked += 1


class TestEchelon:
    """Test rref, rank and primitive directions"""

    def test_rref_canonical(self):
        """Different bases of one plane share the same echelon form"""
        first, _ = rref(fraction_matrix([[1, 0, 1], [0, 1, 1]]))
        second, _ = rref(fraction_matrix([[1, 1, 2], [1, -1, 0]]))
        assert exact_equal(first, second)

    def test_rank(self):
        assert matrix_rank(fraction_matrix([[1, 1], [2, 2]])) == 1

    def test_primitive_direction(self):
        """(-2/3, 4/3) = -2/3 * (1, -2)"""
        primitive, scale = primitive_direction([Fraction(-2, 3), Fraction(4, 3)])
        assert primitive == (1, -2)
        assert scale == Fraction(-2, 3)

    def test_primitive_direction_zero(self):
        with pytest.raises(ValueError):
            primitive_direction([0, 0])


class TestPolarization:
    """Test rank-one decomposition of symmetric matrices"""

    @pytest.mark.parametrize(
        "rows",
        [
            [[0, 1], [1, 0]],
            [[2, 0, 0], [0, 2, 0], [0, 0, -1]],
            [[1, "1/2", 0], ["1/2", 1, 0], [0, 0, "-3/2"]],
        ],
    )
    def test_reconstructs_matrix(self, rows):
        """sum w X X^T gives back the matrix"""
        matrix = fraction_matrix(rows)
        n = matrix.shape[0]
        total = np.zeros((n, n), dtype=object)
        total.fill(Fraction(0))
        for weight, vector in polarization(matrix):
            total = total + weight * np.outer(vector, vector)
        assert exact_equal(total, matrix)

    def test_off_diagonal_pair(self):
        """An off-diagonal entry contributes e1+e2 and e1-e2 with opposite weights"""
        terms = polarization(fraction_matrix([[0, 1], [1, 0]]))
        assert [weight for weight, _ in terms] == [Fraction(1, 2), Fraction(-1, 2)]
        assert list(terms[0][1]) == [1, 1]
        assert list(terms[1][1]) == [1, -1]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
