"""
Unit tests for the Gram metric, plane enumeration and the vee-condition
"""
from fractions import Fraction

import numpy as np
import pytest

from catalog.parametric import d21lambda, g12
from catalog.registry import resolve_builtin
from core.covector_system import CovectorSystem, ScaledCovector, instantiate
from core.exact_linalg import exact_equal, fraction_matrix, identity
from core.exceptions import DegenerateGramError
from core.expression_parser import parse_scalar
from core.vee_checker import (
    PlaneStatus,
    check_vee_plane,
    enumerate_planes,
    gram_metric,
    gram_metric_symbolic,
    is_vee_system,
    pairing_matrix,
)


def _system(dimension, directions, radicands=None, name=""):
    radicands = radicands or [1] * len(directions)
    covectors = tuple(
        ScaledCovector(Fraction(r), d, f"c{i}") for i, (r, d) in enumerate(zip(radicands, directions))
    )
    return CovectorSystem(dimension, covectors, (), name)


@pytest.fixture
def orthonormal():
    return _system(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], name="orthonormal")


@pytest.fixture
def non_vee():
    """e1, e2, e3 and e1+e2+e3 with radicand 1"""
    return _system(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)], name="non-vee")


@pytest.fixture
def d21_at_one():
    return instantiate(d21lambda(), {"t": Fraction(1), "s": Fraction(1)})


class TestGramMetric:
    """Test gram_metric and gram_metric_symbolic"""

    def test_orthonormal(self, orthonormal):
        gram = gram_metric(orthonormal)
        assert exact_equal(gram.matrix, identity(3))
        assert not gram.is_singular

    def test_d21_at_one(self, d21_at_one):
        """D(2,1,lambda) at t=s=1 has Gram metric diag(6,6,6)"""
        gram = gram_metric(d21_at_one)
        assert exact_equal(gram.matrix, 6 * identity(3))

    def test_d21_symbolic(self):
        """Symbolic Gram metric diag(2(t+s+1), 2(t+s+1)/t, 2(t+s+1)/s)"""
        gram = gram_metric_symbolic(d21lambda())
        names = ["s", "t"]
        assert gram[0, 0] == parse_scalar("2*(t+s+1)", names)
        assert gram[1, 1] == parse_scalar("2*(t+s+1)/t", names)
        assert gram[2, 2] == parse_scalar("2*(t+s+1)/s", names)
        assert gram[0, 1].is_zero() and gram[1, 2].is_zero()

    def test_g12_symbolic(self):
        gram = gram_metric_symbolic(g12())
        assert gram[0, 0] == parse_scalar("4*(2*t+1)", ["t"])
        assert gram[0, 1] == parse_scalar("2*(2*t+1)", ["t"])
        assert gram[2, 2] == parse_scalar("3*(2*t+1)/t", ["t"])
        assert gram[0, 2].is_zero()

    def test_g12_nonsingular_at_one(self):
        assert not gram_metric(instantiate(g12(), {"t": Fraction(1)})).is_singular

    def test_singular_reports_rank(self):
        """A rank-deficient system still gets a Gram metric"""
        gram = gram_metric(_system(2, [(1, 0)]))
        assert gram.is_singular
        assert gram.rank == 1


class TestPairing:
    """Test pairing_matrix"""

    def test_orthonormal(self, orthonormal):
        assert exact_equal(pairing_matrix(orthonormal, gram_metric(orthonormal)), identity(3))

    def test_non_vee_entry(self, non_vee):
        """B for (e1, e2) is -1/4"""
        pairing = pairing_matrix(non_vee, gram_metric(non_vee))
        assert pairing[0, 1] == Fraction(-1, 4)

    @pytest.mark.parametrize("name", ["A3", "B2", "G2"])
    def test_resolution_of_identity(self, name):
        """sum_b r_b B_ab B_bc = B_ac"""
        system = resolve_builtin(name).build()
        pairing = pairing_matrix(system, gram_metric(system))
        radicands = system.radicand_vector()
        assert exact_equal((pairing * radicands) @ pairing, pairing)


class TestPlanes:
    """Test enumerate_planes"""

    def test_two_dimensional(self):
        """{e1, e2, e1+e2} lie in a single plane"""
        planes = enumerate_planes(_system(2, [(1, 0), (0, 1), (1, 1)]))
        assert len(planes) == 1
        assert planes[0].member_indices == (0, 1, 2)

    def test_non_vee_planes(self, non_vee):
        """Six planes with two members each"""
        planes = enumerate_planes(non_vee)
        assert len(planes) == 6
        assert all(len(plane.member_indices) == 2 for plane in planes)

    def test_every_pair_in_one_plane(self, d21_at_one):
        """Each covector pair belongs to exactly one plane"""
        planes = enumerate_planes(d21_at_one)
        count = len(d21_at_one)
        for i in range(count):
            for j in range(i + 1, count):
                assert sum(i in p.member_indices and j in p.member_indices for p in planes) == 1

    def test_order_independent(self, d21_at_one):
        """Plane keys do not depend on covector order"""
        reversed_system = CovectorSystem(3, tuple(reversed(d21_at_one.covectors)))
        first = [p.canonical_basis for p in enumerate_planes(d21_at_one)]
        second = [p.canonical_basis for p in enumerate_planes(reversed_system)]
        assert first == second


class TestVeePlane:
    """Test check_vee_plane on single planes"""

    @staticmethod
    def _plane(system, members):
        return next(p for p in enumerate_planes(system) if p.member_indices == members)

    def test_orthogonal_pair(self, orthonormal):
        gram = gram_metric(orthonormal)
        plane = self._plane(orthonormal, (0, 1))
        result = check_vee_plane(orthonormal, gram, pairing_matrix(orthonormal, gram), plane)
        assert result.status is PlaneStatus.SATISFIED

    def test_non_orthogonal_pair(self, non_vee):
        """e1 and e1+e2+e3 pair to 1/4"""
        gram = gram_metric(non_vee)
        plane = self._plane(non_vee, (0, 3))
        result = check_vee_plane(non_vee, gram, pairing_matrix(non_vee, gram), plane)
        assert not result.satisfied
        assert result.witness_index == 0
        assert result.residual == [Fraction(1, 4)]

    def test_three_member_plane(self):
        """The A2 plane carries one common multiplier"""
        system = resolve_builtin("A2").build()
        gram = gram_metric(system)
        plane = enumerate_planes(system)[0]
        result = check_vee_plane(system, gram, pairing_matrix(system, gram), plane)
        assert result.satisfied
        assert len(set(result.lambdas)) == 1


class TestVeeCondition:
    """Test is_vee_system"""

    @pytest.mark.parametrize("name", ["A2", "A3", "B2", "B3", "D4", "G2"])
    def test_root_systems(self, name):
        """Root systems are vee-systems"""
        assert is_vee_system(resolve_builtin(name).build()).holds

    def test_d21_at_one(self, d21_at_one):
        assert is_vee_system(d21_at_one).holds

    def test_non_vee(self, non_vee):
        verdict = is_vee_system(non_vee)
        assert not verdict.holds
        assert verdict.witnesses
        assert verdict.witnesses[0].residual == [Fraction(-1, 4)]

    def test_any_two_dimensional_system(self):
        """A 2D system is a vee-system with lambda = 1"""
        verdict = is_vee_system(_system(2, [(1, 0), (1, 3), (2, 5)], [1, 7, Fraction(1, 3)]))
        assert verdict.holds
        assert verdict.planes[0].lambdas == [1, 1, 1]

    def test_invariant_under_rescaling(self, d21_at_one):
        """(r, v) -> (r/k^2, k v) and sign flips leave the verdict unchanged"""
        rescaled = CovectorSystem(
            3,
            tuple(
                ScaledCovector(c.radicand / 9, tuple(-3 * value for value in c.direction), c.label)
                for c in d21_at_one.covectors
            ),
        )
        assert is_vee_system(rescaled).holds

    @pytest.mark.parametrize("index", range(4))
    def test_single_sign_flip(self, d21_at_one, non_vee, index):
        """v -> -v on one covector keeps both verdicts"""
        for system, expected in ((d21_at_one, True), (non_vee, False)):
            covectors = list(system.covectors)
            flipped = covectors[index]
            covectors[index] = ScaledCovector(
                flipped.radicand, tuple(-value for value in flipped.direction), flipped.label
            )
            assert is_vee_system(CovectorSystem(3, tuple(covectors))).holds is expected

    def test_invariant_under_permutation(self, non_vee):
        permuted = CovectorSystem(3, tuple(reversed(non_vee.covectors)))
        assert not is_vee_system(permuted).holds

    def test_singular_gram(self):
        """Degenerate systems are redirected to regularization"""
        system = instantiate(d21lambda(), {"t": Fraction(1), "s": Fraction(-2)})
        with pytest.raises(DegenerateGramError):
            is_vee_system(system)

    def test_negative_radicands(self):
        """Complex covectors stay exact through negative radicands"""
        system = instantiate(d21lambda(), {"t": Fraction(1), "s": Fraction(-3)})
        assert all(c.radicand < 0 for c in system.covectors[4:])
        gram = gram_metric(system)
        expected = fraction_matrix([[-2, 0, 0], [0, -2, 0], [0, 0, "2/3"]])
        assert exact_equal(gram.matrix, expected)
        assert is_vee_system(system).holds

    def test_numpy_free_of_floats(self, non_vee):
        """Exact verdict data stays in Fractions"""
        pairing = pairing_matrix(non_vee, gram_metric(non_vee))
        assert pairing.dtype == np.dtype(object)
        assert all(isinstance(value, Fraction) for value in pairing.flat)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
