"""Replicated maxima experiments.

Replications are the unit of parallelism. Each one derives its own stream
from (base seed, replay, N, j) and returns only its raw maximum and clock, so
workers never share an ensemble and the parent merges results in
replication order.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
import psutil

from ..engine.models import SimulationConfig
from ..engine.rng import make_rng, replication_seed
from ..engine.simulator import sample_iid_limit, simulate
from ..exceptions import MeanfieldError, ReplicationError
from ..extremes.normalizers import (
    NormalizingConstants,
    normalize_maximum,
    normalizers,
    standard_normalizers,
    stochastic_normalizers,
)
from ..limitlaw.cache import cached_limit_law
from ..limitlaw.solver import LimitLawPath
from ..models.base import ModelSpec
from ..utils.logging import get_logger
from .plan import ExperimentMode, ExperimentPlan, MaximaSample

logger = get_logger(__name__)

ProgressCallback = Callable[[int], None]


@dataclass(frozen=True)
class ReplicationTask:
    """One (N, j) unit of work."""

    particle_count: int
    replication: int
    seed: int


@dataclass(frozen=True)
class ReplicationOutcome:
    """Raw result of one replication; ``error`` is set instead of raising."""

    particle_count: int
    replication: int
    seed: int
    maximum: float = math.nan
    tau_n: Optional[float] = None
    error: Optional[str] = None


class ReplicationRunner:
    """Runs single replications for a fixed model, law and time grid."""

    def __init__(
        self,
        model: ModelSpec,
        law: Optional[LimitLawPath],
        mode: ExperimentMode,
        t_star: float,
        dt: float,
        rng_algorithm: str,
    ):
        if mode is ExperimentMode.IID_LIMIT and law is None:
            raise ValueError("iid_limit replications need a limit law")
        self.model = model
        self.law = law
        self.mode = mode
        self.t_star = t_star
        self.dt = dt
        self.rng_algorithm = rng_algorithm

    def simulation_config(self, particle_count: int, seed: int) -> SimulationConfig:
        """SimulationConfig for one interacting replication."""
        return SimulationConfig(
            particle_count=particle_count,
            dt=self.dt,
            horizon=self.t_star,
            seed=seed,
            rng_algorithm=self.rng_algorithm,
        )

    def __call__(self, task: ReplicationTask) -> ReplicationOutcome:
        try:
            rng = make_rng(task.seed, self.rng_algorithm)
            if self.mode is ExperimentMode.IID_LIMIT:
                positions = sample_iid_limit(self.law, self.t_star, task.particle_count, rng)
                return ReplicationOutcome(
                    task.particle_count, task.replication, task.seed, float(np.max(positions))
                )

            config = self.simulation_config(task.particle_count, task.seed)
            terminal = simulate(self.model, config, rng).terminal
            return ReplicationOutcome(
                task.particle_count,
                task.replication,
                task.seed,
                terminal.maximum,
                terminal.tau_n,
            )
        except MeanfieldError as e:
            return ReplicationOutcome(
                task.particle_count, task.replication, task.seed, error=str(e)
            )


_WORKER_RUNNER: Optional[ReplicationRunner] = None


def _init_worker(runner: ReplicationRunner) -> None:
    global _WORKER_RUNNER
    _WORKER_RUNNER = runner


def _run_in_worker(task: ReplicationTask) -> ReplicationOutcome:
    return _WORKER_RUNNER(task)


def default_jobs() -> int:
    """Logical CPU count, at least 1."""
    return max(1, psutil.cpu_count(logical=True) or 1)


def run_replications(
    runner: ReplicationRunner,
    tasks: Sequence[ReplicationTask],
    jobs: Optional[int] = 1,
    progress: Optional[ProgressCallback] = None,
) -> List[ReplicationOutcome]:
    """
    Execute tasks serially or on a process pool, preserving task order.

    Args:
        runner: Replication runner (shipped once to every worker)
        tasks: Work items
        jobs: Worker count; None means all logical CPUs, 1 runs in-process
        progress: Called with 1 after each completed replication

    Returns:
        List[ReplicationOutcome]: One outcome per task, in task order

    Raises:
        ReplicationError: For the first failed task, tagged with (N, j)
    """
    workers = default_jobs() if jobs is None else max(1, int(jobs))
    workers = min(workers, max(1, len(tasks)))

    if workers == 1:
        results: Iterable[ReplicationOutcome] = map(runner, tasks)
        return _collect(results, progress)

    chunksize = max(1, len(tasks) // (workers * 8))
    logger.debug(f"Dispatching {len(tasks)} replications to {workers} workers (chunk {chunksize})")
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(runner,)
    ) as executor:
        try:
            return _collect(executor.map(_run_in_worker, tasks, chunksize=chunksize), progress)
        except ReplicationError:
            executor.shutdown(wait=False, cancel_futures=True)
            raise


def _collect(
    results: Iterable[ReplicationOutcome], progress: Optional[ProgressCallback]
) -> List[ReplicationOutcome]:
    outcomes = []
    for outcome in results:
        if outcome.error is not None:
            raise ReplicationError(
                outcome.particle_count, outcome.replication, MeanfieldError(outcome.error)
            )
        outcomes.append(outcome)
        if progress is not None:
            progress(1)
    return outcomes


def plan_tasks(plan: ExperimentPlan) -> List[ReplicationTask]:
    """Every (N, j) task of a plan, grouped by N in plan order."""
    return [
        ReplicationTask(
            particle_count=count,
            replication=j,
            seed=replication_seed(plan.base_seed, count, j, plan.replay),
        )
        for count in plan.particle_counts
        for j in range(plan.replications)
    ]


def _deterministic_constants(
    plan: ExperimentPlan, law: LimitLawPath, particle_count: int
) -> NormalizingConstants:
    if plan.unit_normalizers:
        return standard_normalizers(particle_count)
    return normalizers(
        particle_count, law.mean_at(plan.t_star), math.sqrt(law.variance_at(plan.t_star))
    )


def _build_sample(
    plan: ExperimentPlan,
    model: ModelSpec,
    law: LimitLawPath,
    particle_count: int,
    outcomes: Sequence[ReplicationOutcome],
) -> MaximaSample:
    maxima = np.array([o.maximum for o in outcomes], dtype=float)
    normalized = np.empty_like(maxima)
    pit = np.empty_like(maxima)
    constants = None

    if plan.mode is ExperimentMode.STOCHASTIC_NORM:
        for k, outcome in enumerate(outcomes):
            try:
                nc = stochastic_normalizers(outcome.tau_n, law, model, particle_count)
            except MeanfieldError as e:
                raise ReplicationError(particle_count, outcome.replication, e) from e
            normalized[k], pit[k] = normalize_maximum(outcome.maximum, nc)
    else:
        constants = _deterministic_constants(plan, law, particle_count)
        for k, outcome in enumerate(outcomes):
            normalized[k], pit[k] = normalize_maximum(outcome.maximum, constants)

    tau_n = None
    if plan.mode is not ExperimentMode.IID_LIMIT:
        tau_n = np.array([o.tau_n for o in outcomes], dtype=float)

    return MaximaSample(
        particle_count=particle_count,
        mode=plan.mode,
        seeds=[o.seed for o in outcomes],
        maxima=maxima,
        normalized=normalized,
        pit=pit,
        tau_n=tau_n,
        constants=constants,
    )


def run_experiment(
    plan: ExperimentPlan,
    jobs: Optional[int] = 1,
    progress: Optional[ProgressCallback] = None,
) -> Dict[int, MaximaSample]:
    """
    Run every replication of a plan and normalize the maxima.

    INTERACTING and STOCHASTIC_NORM simulate the particle system to t* from
    the same seeds, so their paths coincide and only the normalizers differ.
    IID_LIMIT draws N independent variables from the limit law at t*.

    Args:
        plan: Validated experiment plan
        jobs: Worker count (None for all logical CPUs)
        progress: Optional per-replication callback

    Returns:
        Dict[int, MaximaSample]: Samples keyed by N, in plan order

    Raises:
        ReplicationError: If a replication fails, tagged with (N, j)
    """
    model = plan.build_model()
    law = cached_limit_law(model, plan.law_horizon, plan.law_step, plan.hermite_order)
    logger.info(
        f"Running {plan.mode.value} experiment for {model.name}: "
        f"N={plan.particle_counts}, R={plan.replications}, dt={plan.dt}, "
        f"t*={plan.t_star}, seed={plan.base_seed}, replay={plan.replay}"
    )

    runner = ReplicationRunner(model, law, plan.mode, plan.t_star, plan.dt, plan.rng_algorithm)
    outcomes = run_replications(runner, plan_tasks(plan), jobs, progress)

    samples: Dict[int, MaximaSample] = {}
    for index, count in enumerate(plan.particle_counts):
        block = outcomes[index * plan.replications:(index + 1) * plan.replications]
        samples[count] = _build_sample(plan, model, law, count, block)
        logger.debug(f"Normalized {plan.replications} maxima for N={count}")
    return samples
