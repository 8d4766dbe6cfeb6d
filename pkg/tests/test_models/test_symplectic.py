"""
Tests for symplectic matrices and the Euler parameterization.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats, lists

from gaussdist.core.exceptions import DimensionError, DomainError
from gaussdist.models.symplectic import (
    EulerParams,
    SymplecticMatrix,
    beam_splitter,
    euler_compose,
    is_symplectic,
    orthogonal_symplectic,
    phase_shift,
    random_symplectic,
    sample_euler_params,
    single_mode_squeezer,
    symplectic_defect,
    symplectic_direct_sum,
    symplectic_form,
    two_mode_squeezer,
    u2_unitary,
)

angles = floats(min_value=0.0, max_value=2 * math.pi, allow_nan=False)
squeezings = floats(min_value=0.2, max_value=5.0, allow_nan=False)


class TestSymplecticForm:
    """Test the canonical form and wrapper type."""

    def test_single_mode(self):
        np.testing.assert_array_equal(symplectic_form(1), [[0.0, 1.0], [-1.0, 0.0]])

    def test_block_structure(self):
        """Test sigma is a direct sum of 2x2 blocks."""
        sigma = symplectic_form(3)
        assert sigma.shape == (6, 6)
        np.testing.assert_array_equal(sigma, -sigma.T)
        assert sigma[2, 3] == 1.0 and sigma[0, 3] == 0.0

    def test_zero_modes_rejected(self):
        with pytest.raises(DomainError):
            symplectic_form(0)

    def test_identity_is_symplectic(self):
        assert is_symplectic(SymplecticMatrix.identity(2))

    def test_entries_read_only(self):
        S = SymplecticMatrix.identity(1)
        with pytest.raises(ValueError):
            S.entries[0, 0] = 2.0

    def test_odd_dimension_rejected(self):
        with pytest.raises(DimensionError):
            SymplecticMatrix(np.eye(3))

    def test_from_array_rejects_scaling(self):
        """Test a uniform scaling is not symplectic."""
        with pytest.raises(DomainError, match="S sigma S\\^T = sigma"):
            SymplecticMatrix.from_array(2.0 * np.eye(2))

    def test_composition(self):
        """Test products of symplectic matrices stay symplectic."""
        S = random_symplectic(1) @ random_symplectic(2)
        assert is_symplectic(S)

    def test_composition_size_mismatch(self):
        with pytest.raises(DimensionError):
            SymplecticMatrix.identity(1) @ SymplecticMatrix.identity(2)


class TestStandardGates:
    """Test squeezers, beam splitter and phase shift."""

    def test_single_mode_squeezer(self):
        S = single_mode_squeezer(0.3)
        np.testing.assert_allclose(S.entries, np.diag([math.exp(-0.3), math.exp(0.3)]))
        assert is_symplectic(S)

    def test_two_mode_squeezer_on_vacuum(self):
        """Test S S^T is the symmetric state with a = cosh 2r, c = sinh 2r."""
        r = 0.4
        S = two_mode_squeezer(r).entries
        a, c = math.cosh(2 * r), math.sinh(2 * r)
        expected = np.array(
            [[a, 0, c, 0], [0, a, 0, -c], [c, 0, a, 0], [0, -c, 0, a]]
        )
        np.testing.assert_allclose(S @ S.T, expected, atol=1e-12)
        assert is_symplectic(two_mode_squeezer(r))

    def test_beam_splitter_matches_u2(self):
        """Test beam splitter is the U(2) element with only the mixing angle set."""
        theta = 0.7
        np.testing.assert_allclose(
            beam_splitter(theta).entries, orthogonal_symplectic([0, 0, theta, 0]).entries, atol=1e-15
        )

    def test_beam_splitter_orthogonal(self):
        S = beam_splitter(1.1).entries
        np.testing.assert_allclose(S @ S.T, np.eye(4), atol=1e-14)

    def test_phase_shift_is_rotation(self):
        phi = 0.25
        np.testing.assert_allclose(
            phase_shift(phi).entries,
            [[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]],
        )

    def test_direct_sum(self):
        S = symplectic_direct_sum(random_symplectic(3), random_symplectic(4))
        assert S.n_modes == 4
        assert is_symplectic(S)
        np.testing.assert_array_equal(S.entries[:4, 4:], np.zeros((4, 4)))

    def test_direct_sum_empty(self):
        with pytest.raises(DimensionError):
            symplectic_direct_sum()


class TestU2:
    """Test the U(2) parameterization."""

    def test_zero_is_identity(self):
        np.testing.assert_array_equal(u2_unitary([0, 0, 0, 0]), np.eye(2))

    @given(lists(angles, min_size=4, max_size=4))
    def test_unitary(self, params):
        u = u2_unitary(params)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-12)

    def test_wrong_length(self):
        with pytest.raises(DimensionError):
            u2_unitary([0.0, 1.0])


class TestEulerParams:
    """Test the ten-number Euler parameterization."""

    def test_identity_composes_to_identity(self):
        """Test the identity parameters give exactly the identity."""
        np.testing.assert_array_equal(euler_compose(EulerParams.identity()).entries, np.eye(4))

    def test_vector_layout(self):
        p = EulerParams((1, 2, 3, 4), (0.5, 2.0), (5, 6, 7, 8))
        np.testing.assert_array_equal(p.to_vector(), [1, 2, 3, 4, 0.5, 2.0, 5, 6, 7, 8])
        assert EulerParams.from_vector(p.to_vector()) == p

    def test_search_vector_uses_log_squeezing(self):
        """Test the unconstrained form stores log squeezings."""
        p = EulerParams((0, 0, 0, 0), (math.e, 1.0), (0, 0, 0, 0))
        v = p.to_search_vector()
        assert v[4] == pytest.approx(1.0)
        assert v[5] == 0.0
        restored = EulerParams.from_search_vector(v)
        assert restored.squeezings == pytest.approx((math.e, 1.0))

    @pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
    def test_non_positive_squeezing(self, bad):
        with pytest.raises(DomainError):
            EulerParams((0, 0, 0, 0), (bad, 1.0), (0, 0, 0, 0))

    def test_wrong_vector_length(self):
        with pytest.raises(DimensionError):
            EulerParams.from_vector([1.0] * 9)

    @settings(max_examples=200, deadline=None)
    @given(lists(angles, min_size=8, max_size=8), lists(squeezings, min_size=2, max_size=2))
    def test_composition_is_symplectic(self, phases, squeeze):
        """Test S = V D W preserves sigma for any parameters in range."""
        p = EulerParams(tuple(phases[:4]), tuple(squeeze), tuple(phases[4:]))
        assert symplectic_defect(euler_compose(p)) <= 1e-10


class TestSampling:
    """Test random Euler sampling."""

    def test_thousand_random_symplectics(self):
        """Test 1000 random draws pass S sigma S^T = sigma at 1e-10."""
        worst = max(symplectic_defect(random_symplectic(seed)) for seed in range(1000))
        assert worst <= 1e-10

    def test_ranges(self, rng):
        for _ in range(200):
            p = sample_euler_params(rng, (0.2, 5.0))
            assert all(0.2 - 1e-12 <= d <= 5.0 + 1e-12 for d in p.squeezings)
            assert all(0.0 <= x < 2 * math.pi for x in p.left_orthogonal + p.right_orthogonal)

    def test_deterministic(self):
        np.testing.assert_array_equal(random_symplectic(7).entries, random_symplectic(7).entries)
        assert not np.array_equal(random_symplectic(7).entries, random_symplectic(8).entries)

    def test_unit_squeeze_range_is_orthogonal(self):
        """Test squeeze_range [1, 1] yields passive transformations."""
        S = random_symplectic(11, squeeze_range=(1.0, 1.0)).entries
        np.testing.assert_allclose(S @ S.T, np.eye(4), atol=1e-12)

    @pytest.mark.parametrize("bad_range", [(0.0, 1.0), (3.0, 2.0), (-1.0, 2.0)])
    def test_invalid_range(self, rng, bad_range):
        with pytest.raises(DomainError):
            sample_euler_params(rng, bad_range)
