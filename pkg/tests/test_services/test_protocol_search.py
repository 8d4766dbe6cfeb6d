"""
Tests for the two-copy protocol pipeline, sweep and optimizer.
"""
import math

import numpy as np
import pytest

from gaussdist.core.exceptions import DomainError, InvalidCovarianceError, NumericalError
from gaussdist.models.gaussian_state import PARTY_ORDER, CovMatrix, SymmetricStateParams, two_mode_symmetric
from gaussdist.models.symplectic import EulerParams, SymplecticMatrix, random_symplectic
from gaussdist.services import protocol_search
from gaussdist.services.protocol_search import (
    KEPT_MODES,
    ProtocolInstance,
    final_state,
    identity_deviation,
    map_trials,
    optimize,
    prepare_state,
    random_instance,
    run_protocol,
    sweep,
)


class TestProtocolInstance:
    """Test instance construction and validation."""

    def test_rejects_single_mode_symplectic(self, mixed_params):
        with pytest.raises(DomainError, match="2 modes"):
            ProtocolInstance(mixed_params, SymplecticMatrix.identity(1), SymplecticMatrix.identity(2))

    def test_random_instance_in_range(self):
        for seed in range(50):
            inst = random_instance(seed, a_range=(1.0, 3.0))
            assert 1.0 <= inst.params.a <= 3.0
            assert 0.0 <= inst.params.c <= math.sqrt(inst.params.a**2 - 1.0) + 1e-12

    def test_random_instance_deterministic(self):
        first, second = random_instance(17), random_instance(17)
        assert (first.params.a, first.params.c) == (second.params.a, second.params.c)
        np.testing.assert_array_equal(first.s_a.entries, second.s_a.entries)

    def test_invalid_a_range(self):
        with pytest.raises(DomainError):
            random_instance(0, a_range=(0.5, 2.0))


class TestPipeline:
    """Test the prepare, measure and summarize steps."""

    def test_prepared_layout(self, identity_instance, mixed_state):
        """Test copies are laid out by party with no cross-copy correlations."""
        prepared = prepare_state(identity_instance)
        assert prepared.labels == PARTY_ORDER
        np.testing.assert_array_equal(prepared.block(["A1", "B1"]), mixed_state.entries)
        np.testing.assert_array_equal(prepared.block(["A1"], ["A2"]), np.zeros((2, 2)))

    def test_identity_protocol_is_exact(self, identity_instance, mixed_state, settings):
        """Test the do-nothing protocol returns Gamma0 within 1e-12."""
        final = final_state(identity_instance)
        assert final.labels == KEPT_MODES
        np.testing.assert_allclose(final.entries, mixed_state.entries, atol=settings.identity_exactness_tol)

    def test_identity_record(self, identity_instance):
        """Test (2, 1.5) keeps E_N = 1 under the identity."""
        _, record = run_protocol(identity_instance)
        assert record.en_initial == pytest.approx(1.0)
        assert record.en_final == pytest.approx(1.0)
        assert abs(record.margin) <= 1e-12
        assert record.final_entangled

    def test_determinant_preserved(self, random_instances):
        """Test det Gamma'' = (a^2 - c^2)^2 within relative 1e-6."""
        for inst in random_instances:
            _, record = run_protocol(inst)
            assert record.det_final == pytest.approx(inst.params.determinant, rel=1e-6)

    def test_local_determinants_bounded(self, random_instances):
        """Test det A'' and det B'' never exceed a^2."""
        for inst in random_instances:
            _, record = run_protocol(inst)
            bound = inst.params.a**2
            assert record.det_a <= bound + 1e-8
            assert record.det_b <= bound + 1e-8

    def test_proof_chain(self, random_instances):
        for inst in random_instances:
            _, record = run_protocol(inst)
            assert record.chain_slack >= -1e-9
            assert record.margin <= 1e-7

    def test_seedless_instance_records_zero(self, mixed_params):
        inst = ProtocolInstance(mixed_params, random_symplectic(1), random_symplectic(2))
        _, record = run_protocol(inst)
        assert record.seed == 0

    def test_pure_inputs(self):
        """Test pure inputs c = sqrt(a^2 - 1) keep the proof chain."""
        for seed in range(20):
            t = 0.1 + 0.1 * seed
            params = SymmetricStateParams(math.cosh(t), math.sinh(t))
            inst = ProtocolInstance(params, random_symplectic(seed), random_symplectic(seed + 100), seed)
            _, record = run_protocol(inst)
            assert record.chain_slack >= -1e-9
            assert record.margin <= 1e-7

    def test_invalid_final_state_rejected(self, mocker):
        """Test a measurement result below the uncertainty bound raises."""
        mocker.patch(
            "gaussdist.services.protocol_search.homodyne",
            return_value=CovMatrix.from_array(0.5 * np.eye(4), KEPT_MODES),
        )
        with pytest.raises(InvalidCovarianceError):
            final_state(random_instance(0))


class TestIdentityDeviation:
    """Test the do-nothing protocol check."""

    def test_exact_on_inputs(self, mixed_params, pure_params):
        assert identity_deviation(mixed_params) <= 1e-12
        assert identity_deviation(pure_params) <= 1e-12

    def test_deviation_raises(self, mocker, mixed_params):
        mocker.patch(
            "gaussdist.services.protocol_search.final_state",
            return_value=two_mode_symmetric(SymmetricStateParams(2.0, 1.4)),
        )
        with pytest.raises(NumericalError, match="do-nothing"):
            identity_deviation(mixed_params)

    def test_optimizer_checks_identity(self, mocker, mixed_params):
        spy = mocker.spy(protocol_search, "identity_deviation")
        optimize(mixed_params, restarts=1, seed=0, max_evaluations=20)
        spy.assert_called_once_with(mixed_params)



class TestMapTrials:
    """Test ordered trial execution."""

    def test_serial_and_threaded_agree(self):
        seeds = list(range(30))
        assert map_trials(lambda s: s * s, seeds, 1) == map_trials(lambda s: s * s, seeds, 4)

    def test_uses_thread_pool(self, mocker):
        pool = mocker.patch("gaussdist.services.protocol_search.ThreadPoolExecutor")
        pool.return_value.__enter__.return_value.map.return_value = iter([1, 2])
        assert map_trials(lambda s: s, [5, 6], max_workers=2) == [1, 2]
        pool.assert_called_once_with(max_workers=2)


class TestSweep:
    """Test the randomized no-go sweep."""

    def test_small_sweep_passes(self):
        result = sweep(samples=50, seed=42)
        assert result.summary.trials == 50
        assert result.summary.passed
        assert result.chain_holds
        assert result.passed
        assert result.violations == []

    def test_deterministic(self):
        first = sweep(samples=20, seed=7)
        second = sweep(samples=20, seed=7)
        assert [r.csv_row() for r in first.records] == [r.csv_row() for r in second.records]

    def test_workers_do_not_change_results(self):
        serial = sweep(samples=16, seed=3, max_workers=1)
        threaded = sweep(samples=16, seed=3, max_workers=4)
        assert [r.csv_row() for r in serial.records] == [r.csv_row() for r in threaded.records]

    def test_passive_protocols(self):
        """Test squeeze_range (1, 1) restricts to passive operations."""
        result = sweep(samples=20, seed=5, squeeze_range=(1.0, 1.0))
        assert result.summary.passed

    def test_near_vacuum_inputs(self):
        """Test a_range pinned near the vacuum still passes."""
        result = sweep(a_range=(1.0, 1.2), samples=20, seed=11)
        assert all(r.a <= 1.2 for r in result.records)
        assert result.summary.passed

    def test_vacuum_inputs(self):
        """Test vacuum copies stay exactly separable and keep the proof chain."""
        result = sweep(a_range=(1.0, 1.0), samples=200, seed=3)
        assert result.chain_holds
        assert result.passed
        assert all(r.en_final == 0.0 for r in result.records)
        assert not any(r.final_entangled for r in result.records)

    @pytest.mark.parametrize("samples", [0, -5])

    def test_invalid_samples(self, samples):
        with pytest.raises(DomainError, match="samples >= 1"):
            sweep(samples=samples)

    def test_violation_reported(self, mocker):
        """Test a margin above tolerance fails the summary and is logged."""
        real_run = run_protocol

        def inflated(inst):
            final, record = real_run(inst)
            return final, record.model_copy(update={"margin": 0.5})

        mocker.patch("gaussdist.services.protocol_search.run_protocol", side_effect=inflated)
        warning = mocker.patch("gaussdist.services.protocol_search.logger.warning")
        result = sweep(samples=5, seed=1)
        assert not result.summary.passed
        assert len(result.violations) == 5
        assert warning.called

    @pytest.mark.slow
    def test_full_sweep(self):
        """Test 10^4 samples with seed 42 stay within 1e-7."""
        result = sweep(a_range=(1.0, 5.0), samples=10_000, seed=42)
        assert result.summary.max_margin <= 1e-7
        assert result.min_chain_slack >= -1e-9


class TestOptimize:
    """Test the Nelder-Mead protocol search."""

    def test_single_restart_starts_at_identity(self, mixed_params):
        report = optimize(mixed_params, restarts=1, seed=0, max_evaluations=300)
        assert report.best_restart == 0
        assert report.best_margin <= 1e-5
        assert report.best_margin >= -1e-9
        assert len(report.parameters) == 20
        assert report.passed

    def test_vacuum_has_nothing_to_gain(self):
        report = optimize(SymmetricStateParams(1.0, 0.0), restarts=2, seed=1, max_evaluations=200)
        assert report.record.en_initial == 0.0
        assert report.record.en_final == 0.0
        assert report.best_margin == 0.0
        assert report.record.chain_slack >= -1e-9

    def test_reproducible(self, mixed_params):
        first = optimize(mixed_params, restarts=2, seed=9, max_evaluations=150)
        second = optimize(mixed_params, restarts=2, seed=9, max_evaluations=150)
        assert first.parameters == second.parameters
        assert first.evaluations == second.evaluations

    def test_squeezings_stay_in_range(self, mixed_params):
        report = optimize(mixed_params, restarts=2, seed=4, squeeze_range=(0.5, 2.0), max_evaluations=150)
        for euler in (report.euler_a, report.euler_b):
            assert all(0.5 - 1e-12 <= d <= 2.0 + 1e-12 for d in euler[4:6])

    def test_invalid_restarts(self, mixed_params):
        with pytest.raises(DomainError):
            optimize(mixed_params, restarts=0)

    def test_final_state_of_report(self, mixed_params):
        """Test the reported Euler parameters reproduce the recorded E_N."""
        report = optimize(mixed_params, restarts=1, seed=0, max_evaluations=100)
        inst = ProtocolInstance.from_euler(
            mixed_params, EulerParams.from_vector(report.euler_a), EulerParams.from_vector(report.euler_b)
        )
        _, record = run_protocol(inst)
        assert record.en_final == pytest.approx(report.record.en_final, abs=1e-12)

    @pytest.mark.slow
    def test_fifty_restarts(self, pure_params):
        """Test 50 restarts on (cosh 1, sinh 1) end at the do-nothing value 1/ln 2."""
        report = optimize(pure_params, restarts=50, seed=0)
        assert report.record.en_final == pytest.approx(1.0 / math.log(2.0), abs=1e-5)
        assert report.best_margin <= 1e-7