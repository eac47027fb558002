"""
Unit tests for rank-one endomorphisms and the Kohno property
"""
from fractions import Fraction

import pytest

from catalog.parametric import d21lambda, g12
from catalog.random_systems import random_system, random_systems
from catalog.registry import resolve_builtin
from core.covector_system import CovectorSystem, ScaledCovector, instantiate
from core.exact_linalg import exact_equal, fraction_matrix, identity
from core.kohno_checker import (
    check_connection_flatness_at,
    check_kohno_group,
    crosscheck_equivalence,
    endomorphism_sum,
    endomorphisms,
    has_kohno_property,
    resolution_of_identity,
)
from core.vee_checker import PlaneGroup, enumerate_planes, gram_metric, is_vee_system
from frobenius.sampling import make_rng


def _system(dimension, directions):
    covectors = tuple(ScaledCovector(Fraction(1), d, f"c{i}") for i, d in enumerate(directions))
    return CovectorSystem(dimension, covectors)


@pytest.fixture
def non_vee():
    return _system(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])


@pytest.fixture
def d21_at_one():
    return instantiate(d21lambda(), {"t": Fraction(1), "s": Fraction(1)})


class TestEndomorphisms:
    """Test RankOneEndo construction"""

    def test_orthonormal(self):
        """rho_i = e_i e_i^T for an orthonormal basis"""
        system = _system(2, [(1, 0), (0, 1)])
        endos = endomorphisms(system, gram_metric(system))
        assert endos[0].matrix[0, 0] == 1 and endos[0].matrix[1, 1] == 0
        assert endos[1].matrix[1, 1] == 1 and endos[1].matrix[0, 0] == 0

    def test_sum_is_identity(self, d21_at_one):
        gram = gram_metric(d21_at_one)
        total = endomorphism_sum(endomorphisms(d21_at_one, gram), 3)
        assert exact_equal(total, identity(3))
        assert resolution_of_identity(d21_at_one, gram)

    def test_properties(self, d21_at_one):
        """Each rho has rank one, is G-self-adjoint and quasi-idempotent"""
        gram = gram_metric(d21_at_one)
        for endo in endomorphisms(d21_at_one, gram):
            assert endo.rank == 1
            assert endo.is_self_adjoint(gram)
            assert endo.is_quasi_idempotent()


class TestKohnoProperty:
    """Test check_kohno_group and has_kohno_property"""

    def test_single_member_group(self, non_vee):
        """[rho, rho] = 0"""
        endos = endomorphisms(non_vee, gram_metric(non_vee))
        plane = PlaneGroup(((1, 0, 0), (0, 1, 0)), (0,))
        assert check_kohno_group(endos, plane).satisfied

    @pytest.mark.parametrize("name", ["A2", "B3", "D4", "G2"])
    def test_root_systems(self, name):
        assert has_kohno_property(resolve_builtin(name).build()).holds

    def test_d21(self, d21_at_one):
        assert has_kohno_property(d21_at_one).holds

    def test_non_vee_fails_with_witness(self, non_vee):
        verdict = has_kohno_property(non_vee)
        assert not verdict.holds
        failing = [group for group in verdict.groups if not group.satisfied]
        assert failing
        assert failing[0].commutator is not None

    def test_plane_by_plane_agreement(self, non_vee):
        """Kohno and vee verdicts agree on every plane"""
        report = crosscheck_equivalence(non_vee)
        assert report.vee is False
        assert report.kohno is False
        assert report.agree
        assert report.discrepancies == []

    @pytest.mark.parametrize("name", ["A3", "B2", "D5"])
    def test_equivalence_on_builtins(self, name):
        report = crosscheck_equivalence(resolve_builtin(name).build())
        assert report.vee and report.kohno and report.agree


G12_VALUES = ["2", "3/5", "-7/3", "5", "1/3", "-1", "3", "-2/5", "7/4", "-5/2"]
D21_VALUES = [("2", "3"), ("3/5", "-2/7"), ("5", "1/2"), ("1/3", "4"), ("-5/2", "1/3")]


class TestParametricFamilies:
    """Vee and Kohno verdicts on the families away from their degenerate loci"""

    @pytest.mark.parametrize("t", G12_VALUES)
    def test_g12(self, t):
        system = instantiate(g12(), {"t": Fraction(t)})
        assert len(system) == 13
        report = crosscheck_equivalence(system)
        assert report.vee and report.kohno and report.agree

    @pytest.mark.parametrize("t, s", D21_VALUES)
    def test_d21(self, t, s):
        system = instantiate(d21lambda(), {"t": Fraction(t), "s": Fraction(s)})
        report = crosscheck_equivalence(system)
        assert report.vee and report.kohno and report.agree


class TestRandomSystems:
    """Vee and Kohno verdicts on seeded random systems"""

    def test_verdicts_agree(self):
        """Both checks agree on 100 systems in dimensions 3 to 5"""
        verdicts = set()
        for system in random_systems(make_rng(2024), 100):
            report = crosscheck_equivalence(system)
            assert report.agree, system.to_json()
            verdicts.add(report.vee)
        assert verdicts == {True, False}

    @pytest.mark.parametrize("seed", range(5))
    def test_reproducible(self, seed):
        first = random_system(make_rng(seed), 4)
        second = random_system(make_rng(seed), 4)
        assert first.to_dict() == second.to_dict()

    def test_transformed_root_system_is_vee(self):
        """A change of coordinates preserves the vee conditions"""
        matrix = [[1, 1, 0], [0, 1, 2], [1, 0, 1]]
        system = resolve_builtin("B3").build().transformed(fraction_matrix(matrix))
        assert is_vee_system(system).holds


class TestFlatness:
    """Test check_connection_flatness_at"""

    def test_d21_flat(self, d21_at_one):
        gram = gram_metric(d21_at_one)
        assert check_connection_flatness_at(d21_at_one, gram, (Fraction(3), Fraction(5), Fraction(-7)))

    def test_non_vee_not_flat(self, non_vee):
        gram = gram_metric(non_vee)
        assert not check_connection_flatness_at(non_vee, gram, (Fraction(2), Fraction(3), Fraction(5)))

    def test_planes_shared(self, d21_at_one):
        """The same enumeration feeds both checks"""
        planes = enumerate_planes(d21_at_one)
        assert len(has_kohno_property(d21_at_one, planes).groups) == len(planes)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
