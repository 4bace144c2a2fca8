"""Euler-Maruyama particle engine."""

from .models import ParticleEnsemble, SimulationConfig, SimulationResult, Trajectory
from .rng import make_rng, replication_seed
from .simulator import em_step, em_step_with_increments, initialize, sample_iid_limit, simulate
from .trajectory import write_trajectory_csv

__all__ = [
    "ParticleEnsemble",
    "SimulationConfig",
    "SimulationResult",
    "Trajectory",
    "em_step",
    "em_step_with_increments",
    "initialize",
    "make_rng",
    "replication_seed",
    "sample_iid_limit",
    "simulate",
    "write_trajectory_csv",
]
