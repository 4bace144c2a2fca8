"""Unit tests for experiment plans and replicated runs."""

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pytest
from pydantic import ValidationError

from meanfield.diagnostics import (
    ExperimentMode,
    ExperimentPlan,
    MaximaSample,
    ReplicationOutcome,
    ReplicationRunner,
    ReplicationTask,
    plan_tasks,
    run_experiment,
    run_replications,
)
from meanfield.engine import replication_seed
from meanfield.exceptions import ModelError, ReplicationError
from meanfield.extremes import NormalizerSource, normalizers, standard_normalizers

pytestmark = pytest.mark.unit


def _plan(**overrides) -> ExperimentPlan:
    values = dict(
        model_id="bank",
        particle_counts=[20],
        replications=6,
        t_star=0.1,
        dt=0.01,
        base_seed=99,
        law_step=0.01,
    )
    values.update(overrides)
    return ExperimentPlan(**values)


class TestExperimentPlan:
    """Test ExperimentPlan validation."""

    def test_defaults(self):
        """Test default mode and law horizon."""
        plan = _plan(t_star=0.5)
        assert plan.mode is ExperimentMode.INTERACTING
        assert plan.law_horizon == 1.0

    def test_small_population_rejected(self):
        """Test that every N must admit normalizers."""
        with pytest.raises(ValidationError):
            _plan(particle_counts=[4, 20])

    def test_duplicate_population_rejected(self):
        """Test that N values are distinct."""
        with pytest.raises(ValidationError):
            _plan(particle_counts=[20, 20])

    def test_stochastic_mode_needs_bounded_class(self):
        """Test that bank models cannot use stochastic normalizers."""
        with pytest.raises(ValidationError) as exc_info:
            _plan(mode=ExperimentMode.STOCHASTIC_NORM)
        assert "bounded-class" in str(exc_info.value)

    def test_unknown_model(self):
        """Test that the model is resolved at construction."""
        with pytest.raises(ModelError):
            _plan(model_id="nonexistent")

    def test_bounded_class_horizon_covers_clock(self):
        """Test that the law horizon scales with the squared sigma bound ratio."""
        plan = _plan(
            model_id="gaussian_const_vol",
            model_params={"r0": -3.0, "sigma_base": 0.6, "sigma_amp": 0.55},
            t_star=1.0,
        )
        assert plan.law_horizon == pytest.approx((1.15 / 0.05) ** 2)

    def test_narrow_bounds_keep_double_horizon(self):
        """Test that the horizon never drops below 2 t*."""
        plan = _plan(
            model_id="gaussian_const_vol",
            model_params={"sigma_base": 1.0, "sigma_amp": 0.1},
            t_star=0.5,
        )
        assert plan.law_horizon == pytest.approx(1.0)


class TestPlanTasks:
    """Test plan_tasks."""

    def test_order_and_seeds(self):
        """Test grouping by N and derived seeds."""
        plan = _plan(particle_counts=[20, 30], replications=3, replay=2)
        tasks = plan_tasks(plan)
        assert [(t.particle_count, t.replication) for t in tasks] == [
            (20, 0), (20, 1), (20, 2), (30, 0), (30, 1), (30, 2),
        ]
        assert tasks[4].seed == replication_seed(99, 30, 1, 2)

    def test_seeds_unique(self):
        """Test that no two replications share a stream."""
        seeds = [t.seed for t in plan_tasks(_plan(particle_counts=[20, 30], replications=50))]
        assert len(set(seeds)) == len(seeds)


def _failing_runner(task: ReplicationTask) -> ReplicationOutcome:
    if task.replication == 1:
        return ReplicationOutcome(task.particle_count, 1, task.seed, error="boom")
    return ReplicationOutcome(task.particle_count, task.replication, task.seed, float(task.seed))


class TestRunReplications:
    """Test run_replications."""

    def test_serial_order_and_progress(self):
        """Test that outcomes follow task order and progress ticks once per task."""
        tasks = [ReplicationTask(10, j, 100 + j) for j in range(4)]
        ticks = []
        outcomes = run_replications(
            lambda task: ReplicationOutcome(10, task.replication, task.seed, float(task.seed)),
            tasks,
            jobs=1,
            progress=ticks.append,
        )
        assert [o.maximum for o in outcomes] == [100.0, 101.0, 102.0, 103.0]
        assert ticks == [1, 1, 1, 1]

    def test_failure_is_tagged(self):
        """Test that a failed replication names its N and index."""
        tasks = [ReplicationTask(10, j, j) for j in range(3)]
        with pytest.raises(ReplicationError) as exc_info:
            run_replications(_failing_runner, tasks, jobs=1)
        assert exc_info.value.particle_count == 10
        assert exc_info.value.replication == 1
        assert "boom" in str(exc_info.value)

    def test_parallel_failure_cancels_pending(self, mocker):
        """Test that a failure on the pool cancels queued replications."""
        shutdown = mocker.spy(ProcessPoolExecutor, "shutdown")
        tasks = [ReplicationTask(10, j, j) for j in range(8)]
        with pytest.raises(ReplicationError) as exc_info:
            run_replications(_failing_runner, tasks, jobs=2)
        assert exc_info.value.replication == 1
        assert any(call.kwargs.get("cancel_futures") for call in shutdown.call_args_list)

    def test_iid_runner_needs_law(self, bank_model):
        """Test that i.i.d. replications require a law."""
        with pytest.raises(ValueError):
            ReplicationRunner(bank_model, None, ExperimentMode.IID_LIMIT, 1.0, 0.01, "philox")

    def test_simulation_config(self, bank_model):
        """Test the per-replication simulation settings."""
        runner = ReplicationRunner(
            bank_model, None, ExperimentMode.INTERACTING, 0.1, 0.01, "pcg64"
        )
        config = runner.simulation_config(20, seed=5)
        assert config.particle_count == 20
        assert config.step_count == 10
        assert config.seed == 5
        assert config.rng_algorithm == "pcg64"


class TestMaximaSample:
    """Test MaximaSample invariants."""

    def test_lengths_must_agree(self):
        """Test rejection of ragged columns."""
        with pytest.raises(ValueError):
            MaximaSample(
                particle_count=10,
                mode=ExperimentMode.INTERACTING,
                seeds=[1, 2],
                maxima=np.zeros(2),
                normalized=np.zeros(2),
                pit=np.zeros(3),
            )

    def test_pit_range(self):
        """Test rejection of PIT values outside [0, 1]."""
        with pytest.raises(ValueError):
            MaximaSample(
                particle_count=10,
                mode=ExperimentMode.INTERACTING,
                seeds=[1],
                maxima=np.zeros(1),
                normalized=np.zeros(1),
                pit=np.array([1.5]),
            )


class TestRunExperiment:
    """Test run_experiment on small plans."""

    def test_interacting_sample(self):
        """Test shapes, clocks and deterministic constants."""
        samples = run_experiment(_plan())
        sample = samples[20]
        assert sample.replications == 6
        assert sample.tau_n is not None and np.all(sample.tau_n > 0)
        assert np.all((sample.pit >= 0) & (sample.pit <= 1))
        expected = normalizers(20, 0.0, math.exp(0.15))
        assert sample.constants.source is NormalizerSource.DETERMINISTIC
        assert sample.constants.a == pytest.approx(expected.a, rel=1e-12)
        assert sample.constants.b == pytest.approx(expected.b, rel=1e-12)

    def test_normalized_maxima_use_constants(self):
        """Test M = (max - b) / a."""
        sample = run_experiment(_plan())[20]
        a, b = sample.constants.a, sample.constants.b
        np.testing.assert_allclose(sample.normalized, (sample.maxima - b) / a)

    def test_reproducible(self):
        """Test that a plan gives identical maxima on every run."""
        first = run_experiment(_plan())[20]
        second = run_experiment(_plan())[20]
        np.testing.assert_array_equal(first.maxima, second.maxima)
        assert first.seeds == second.seeds

    def test_replay_changes_streams(self):
        """Test that another replay draws other paths."""
        first = run_experiment(_plan())[20]
        second = run_experiment(_plan(replay=1))[20]
        assert not np.array_equal(first.maxima, second.maxima)

    def test_iid_sample(self):
        """Test exact sampling from the limit law."""
        sample = run_experiment(_plan(mode=ExperimentMode.IID_LIMIT, particle_counts=[20, 40]))
        assert list(sample) == [20, 40]
        assert sample[40].tau_n is None
        assert sample[40].mode is ExperimentMode.IID_LIMIT

    def test_unit_normalizers(self):
        """Test the N(0, 1) constants option."""
        sample = run_experiment(_plan(unit_normalizers=True))[20]
        assert sample.constants == standard_normalizers(20)

    def test_stochastic_and_interacting_share_paths(self):
        """Test that both modes see the same maxima and clocks."""
        common = dict(model_id="tanh_vol", model_params={"r0": 1.0}, particle_counts=[25])
        interacting = run_experiment(_plan(**common))[25]
        stochastic = run_experiment(_plan(mode=ExperimentMode.STOCHASTIC_NORM, **common))[25]
        np.testing.assert_array_equal(interacting.maxima, stochastic.maxima)
        np.testing.assert_array_equal(interacting.tau_n, stochastic.tau_n)
        assert stochastic.constants is None
        assert not np.array_equal(interacting.pit, stochastic.pit)

    def test_stochastic_mode_with_wide_sigma_bounds(self):
        """Test that clocks far above tau(2 t*) still invert on the law grid."""
        plan = _plan(
            model_id="gaussian_const_vol",
            model_params={"r0": -3.0, "sigma_base": 0.6, "sigma_amp": 0.55},
            mode=ExperimentMode.STOCHASTIC_NORM,
            particle_counts=[5, 20],
            replications=50,
            t_star=1.0,
        )
        samples = run_experiment(plan)
        for count in (5, 20):
            sample = samples[count]
            assert sample.replications == 50
            assert np.all(np.isfinite(sample.normalized))
            assert np.all((sample.pit >= 0) & (sample.pit <= 1))
