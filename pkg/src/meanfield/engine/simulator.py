"""Euler-Maruyama time stepping of the N-particle system.

Both empirical statistics are frozen at the left end of each step and every
particle is then updated from them, so one step costs O(N). The running clock
tau_N accumulates sigma^2 * dt with the same left-endpoint rule.
"""

import math
from typing import Optional, Sequence

import numpy as np

from ..exceptions import CoefficientBlowUpError, MeanfieldError, SimulationError
from ..limitlaw.solver import LimitLawPath
from ..models.base import ModelSpec, compensated_mean, evaluate_fields, mean_field_statistics
from ..utils.logging import get_logger
from .models import ParticleEnsemble, SimulationConfig, SimulationResult, Trajectory
from .rng import make_rng

logger = get_logger(__name__)

# Relative slack before a horizon that is not a multiple of dt is reported
_GRID_WARN_TOLERANCE = 1e-6


def initialize(
    model: ModelSpec, config: SimulationConfig, rng: np.random.Generator
) -> ParticleEnsemble:
    """
    Draw N i.i.d. initial positions from N(m0, s0^2).

    Args:
        model: The model (supplies the initial law)
        config: Simulation settings (supplies N)
        rng: Stream of the replication

    Returns:
        ParticleEnsemble: t = 0, tau_N = 0
    """
    normals = rng.standard_normal(config.particle_count)
    positions = model.initial_mean + math.sqrt(model.initial_variance) * normals
    return ParticleEnsemble(positions=positions, time=0.0, tau_n=0.0)


def em_step_with_increments(
    ensemble: ParticleEnsemble, model: ModelSpec, dt: float, increments: Sequence[float]
) -> ParticleEnsemble:
    """
    One Euler-Maruyama step driven by given Brownian increments.

    Args:
        ensemble: State at the left end of the step
        model: The model
        dt: Step size
        increments: Brownian increments B(t + dt) - B(t), one per particle

    Returns:
        ParticleEnsemble: State at t + dt

    Raises:
        CoefficientBlowUpError: If a statistic, coefficient or position is not finite
    """
    x = ensemble.positions
    t = ensemble.time
    z_r, z_sigma = mean_field_statistics(model, x, t)
    drift, diffusion = evaluate_fields(model, x, z_r, z_sigma, t)
    diffusion = np.broadcast_to(diffusion, x.shape)

    if diffusion.size and np.all(diffusion == diffusion.flat[0]):
        clock_rate = float(diffusion.flat[0]) ** 2
    else:
        clock_rate = compensated_mean(np.square(diffusion))

    updated = x + drift * dt + diffusion * np.asarray(increments, dtype=float)
    bad = ~np.isfinite(updated)
    if np.any(bad):
        raise CoefficientBlowUpError(t, float(updated[bad][0]), "position")

    return ParticleEnsemble(positions=updated, time=t + dt, tau_n=ensemble.tau_n + clock_rate * dt)


def em_step(
    ensemble: ParticleEnsemble, model: ModelSpec, dt: float, rng: np.random.Generator
) -> ParticleEnsemble:
    """
    One Euler-Maruyama step with fresh standard normal increments.

    Args:
        ensemble: State at the left end of the step
        model: The model
        dt: Step size
        rng: Stream of the replication

    Returns:
        ParticleEnsemble: State at t + dt
    """
    increments = math.sqrt(dt) * rng.standard_normal(ensemble.size)
    return em_step_with_increments(ensemble, model, dt, increments)


def simulate(
    model: ModelSpec, config: SimulationConfig, rng: Optional[np.random.Generator] = None
) -> SimulationResult:
    """
    Run round(T / dt) Euler-Maruyama steps from a fresh initial ensemble.

    Args:
        model: The model
        config: Time grid, N and seed
        rng: Optional stream; built from ``config.seed`` when omitted

    Returns:
        SimulationResult: Terminal ensemble and optional trajectory

    Raises:
        SimulationError: Wraps any step failure with its 1-based step index
    """
    if config.grid_mismatch() > _GRID_WARN_TOLERANCE * max(1.0, config.step_count):
        logger.warning(
            f"Horizon {config.horizon} is not a multiple of dt={config.dt}; "
            f"using {config.step_count} steps"
        )

    rng = rng if rng is not None else make_rng(config.seed, config.rng_algorithm)
    ensemble = initialize(model, config, rng)
    trajectory = Trajectory() if config.store_trajectory else None
    if trajectory is not None:
        trajectory.record(ensemble)

    steps = config.step_count
    for step in range(1, steps + 1):
        try:
            ensemble = em_step(ensemble, model, config.dt, rng)
        except MeanfieldError as e:
            raise SimulationError(step, e) from e
        if trajectory is not None and (step % config.trajectory_every == 0 or step == steps):
            trajectory.record(ensemble)

    logger.debug(
        f"Simulated {model.name}: N={config.particle_count}, steps={steps}, "
        f"tau_N={ensemble.tau_n:.6g}"
    )
    return SimulationResult(terminal=ensemble, steps=steps, trajectory=trajectory)


def sample_iid_limit(
    law: LimitLawPath, t: float, particle_count: int, rng: np.random.Generator
) -> np.ndarray:
    """
    N i.i.d. draws from the limiting Gaussian law N(m_t, sigma_t^2).

    No time stepping: the marginal is sampled directly.

    Args:
        law: Solved limit law
        t: Time at which to sample
        particle_count: N (>= 1)
        rng: Stream of the replication

    Returns:
        numpy.ndarray: N positions

    Raises:
        TimeOutOfRangeError: If t is outside the law's grid
    """
    if particle_count < 1:
        raise ValueError("particle_count must be >= 1")
    mean = law.mean_at(t)
    stdev = math.sqrt(law.variance_at(t))
    return mean + stdev * rng.standard_normal(particle_count)
