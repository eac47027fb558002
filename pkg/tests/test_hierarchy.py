"""
Unit tests for polynomial Frobenius structures, the principal hierarchy
and the Lenard-Magri chains
"""
import dataclasses
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from core.exceptions import CompatibilityError, UnknownBuiltinError, WDVVFailureError
from frobenius.sampling import make_rng
from hamiltonian.loop_grid import LoopMode, LoopSpec, constant_loop, random_loop
from hierarchy.lenard_magri import (
    involutivity_check,
    lenard_magri_check,
    local_pointwise_identity_check,
    summarize,
)
from hierarchy.poly_frobenius import builtin_poly_frobenius, poly_frobenius
from hierarchy.principal_hierarchy import (
    HierarchyLevel,
    base_level,
    build_hierarchy,
    integrate_hessian,
    prescribed_hessian,
    recursion_step,
    verify_recursion,
)

U1, U2 = sp.symbols("u1 u2")


def _same(poly, expression):
    return sp.expand(poly.as_expr() - expression) == 0


@pytest.fixture
def kdv2d():
    return builtin_poly_frobenius("kdv2d")


@pytest.fixture
def kdv2d_hierarchy(kdv2d):
    return build_hierarchy(kdv2d, 3)


@pytest.fixture
def tampered():
    """kdv2d potential plus u1^3; associativity breaks"""
    potential = sp.Rational(1, 2) * U1**2 * U2 + U2**4 / 24 + U1**3
    return poly_frobenius([[0, 1], [1, 0]], potential, [U1, U2], "tampered", verify=False)


@pytest.fixture
def loop(kdv2d):
    return random_loop(kdv2d, make_rng(0), modes=2, bound=2).to_grid(64)


@pytest.fixture
def wide_loop():
    """Harmonics up to 5: aliased on 32 points, resolved on 128"""
    return LoopSpec(
        loop=[
            LoopMode(coord=0, mean="1", cos=[0, 0, 0.2, 0, 0.3], sin=[0.1]),
            LoopMode(coord=1, mean="2", cos=[0.1], sin=[0, 0, 0, 0.3, 0.2]),
        ]
    )


class TestPolyFrobenius:
    """Test polynomial structures"""

    def test_kdv2d_structure_constants(self, kdv2d):
        """c^1_22 = u2 and c^1_11 = 1"""
        c = kdv2d.structure_polynomials
        assert _same(c[0][1][1], U2)
        assert _same(c[0][0][0], 1)
        assert c[1][0][0].is_zero
        assert kdv2d.degree == 1

    def test_tampered_rejected(self):
        potential = sp.Rational(1, 2) * U1**2 * U2 + U2**4 / 24 + U1**3
        with pytest.raises(WDVVFailureError):
            poly_frobenius([[0, 1], [1, 0]], potential, [U1, U2], "tampered")

    def test_unknown(self):
        with pytest.raises(UnknownBuiltinError):
            builtin_poly_frobenius("kdv3d")


class TestPrincipalHierarchy:
    """Test the recursion and its exact integration"""

    def test_base_level(self, kdv2d):
        """h[p,-1] = eta_pl u^l"""
        assert _same(base_level(kdv2d, 1).density, U2)
        assert _same(base_level(kdv2d, 2).density, U1)

    def test_kdv2d_level_zero(self, kdv2d_hierarchy):
        assert _same(kdv2d_hierarchy[1][1].density, U1 * U2)
        assert _same(kdv2d_hierarchy[2][1].density, U1**2 / 2 + U2**3 / 6)

    def test_density_terms(self, kdv2d_hierarchy):
        assert kdv2d_hierarchy[2][1].density_terms() == {"u1^2": Fraction(1, 2), "u2^3": Fraction(1, 6)}

    def test_levels_present(self, kdv2d_hierarchy):
        assert [level.level for level in kdv2d_hierarchy[1]] == [-1, 0, 1, 2, 3]

    def test_vector_field(self, kdv2d_hierarchy):
        """X = eta^-1 dh swaps the partials for the off-diagonal metric"""
        level = kdv2d_hierarchy[1][1]
        assert _same(level.vector_field[0], U1)
        assert _same(level.vector_field[1], U2)

    def test_trivial1d(self):
        data = builtin_poly_frobenius("trivial1d")
        chain = build_hierarchy(data, 1)[1]
        assert _same(chain[0].density, U1)
        assert _same(chain[1].density, U1**2 / 2)
        assert _same(chain[2].density, U1**3 / 6)

    def test_integrate_hessian(self, kdv2d):
        """h(0) = 0, dh(0) = 0 and the Hessian is reproduced"""
        hessian = prescribed_hessian(kdv2d, base_level(kdv2d, 2).density)
        density = integrate_hessian(kdv2d, hessian)
        assert _same(density, U1**2 / 2 + U2**3 / 6)

    def test_verify_recursion(self, kdv2d, kdv2d_hierarchy):
        checks = verify_recursion(kdv2d, kdv2d_hierarchy)
        assert len(checks) == 2 * 4
        assert all(check.passed and check.closure for check in checks)

    def test_tampered_first_step(self, tampered):
        """The first step only needs symmetric constant Hessians"""
        level = recursion_step(tampered, base_level(tampered, 1))
        assert _same(level.density, 3 * U1**2 + U1 * U2)

    def test_tampered_compatibility(self, tampered):
        with pytest.raises(CompatibilityError):
            build_hierarchy(tampered, 1)


class TestLenardMagri:
    """Test the numeric chain checks on loops"""

    def test_pointwise_identity(self, kdv2d, kdv2d_hierarchy, loop):
        residuals = local_pointwise_identity_check(kdv2d, kdv2d_hierarchy, loop)
        assert len(residuals) == 8
        assert summarize(residuals, 1e-8, "pointwise")

    def test_chains(self, kdv2d, kdv2d_hierarchy, loop):
        residuals = lenard_magri_check(kdv2d, kdv2d_hierarchy, loop)
        assert {entry.chain for entry in residuals} == {"casimir", "even", "odd"}
        assert all(entry.residual < 1e-8 for entry in residuals)

    def test_involutivity(self, kdv2d, kdv2d_hierarchy, loop):
        entries = involutivity_check(kdv2d, kdv2d_hierarchy, loop)
        count = 2 * 5
        assert len(entries) == count * (count + 1) // 2
        assert max(entry.residual for entry in entries) < 1e-8

    def test_constant_loop(self, kdv2d, kdv2d_hierarchy):
        """Every flow vanishes on a constant loop"""
        residuals = lenard_magri_check(kdv2d, kdv2d_hierarchy, constant_loop((1, 2), size=16))
        assert all(entry.residual < 1e-12 for entry in residuals)

    def test_grid_convergence(self, kdv2d, kdv2d_hierarchy, wide_loop):
        """Refining 32 -> 128 points shrinks the residual by four orders"""

        def worst(size):
            residuals = lenard_magri_check(kdv2d, kdv2d_hierarchy, wide_loop.to_grid(size))
            return max(entry.residual for entry in residuals)

        coarse, fine = worst(32), worst(128)
        assert coarse > 0
        assert fine <= 1e-4 * coarse
        assert fine < 1e-8

    def test_mismatched_parity(self, kdv2d, kdv2d_hierarchy, wide_loop):
        """Swapping levels 1 and 2 pairs densities of opposite parity"""
        chain = kdv2d_hierarchy[1]
        relabel = {1: 2, 2: 1}
        swapped = [dataclasses.replace(level, level=relabel.get(level.level, level.level)) for level in chain]
        swapped.sort(key=lambda level: level.level)
        residuals = lenard_magri_check(kdv2d, {1: swapped}, wide_loop.to_grid(64))
        assert max(entry.residual for entry in residuals if entry.chain != "casimir") > 1e-3

    def test_non_conserved_functional(self, kdv2d, kdv2d_hierarchy, wide_loop):
        """u1^3 u2 does not commute with h[1,0] = u1^2/2 + u2^3/6"""
        density = sp.Poly(U1**3 * U2, U1, U2, domain="QQ")
        stranger = HierarchyLevel(9, 0, density, [])
        hierarchy = {1: [kdv2d_hierarchy[1][1]], 9: [stranger]}
        entries = involutivity_check(kdv2d, hierarchy, wide_loop.to_grid(64))
        cross = next(entry for entry in entries if entry.first != entry.second)
        assert cross.residual > 1e-4

    def test_tampered_chain_breaks(self, kdv2d_hierarchy, loop):
        """Densities of one structure fail the chain of another"""
        potential = sp.Rational(1, 2) * U1**2 * U2 + U2**4 / 12
        other = poly_frobenius([[0, 1], [1, 0]], potential, [U1, U2], "other")
        residuals = local_pointwise_identity_check(other, kdv2d_hierarchy, loop)
        assert not summarize(residuals, 1e-8, "pointwise")
        assert np.isfinite([entry.residual for entry in residuals]).all()


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
