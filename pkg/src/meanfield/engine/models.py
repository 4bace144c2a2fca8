"""Data models for the particle engine."""

import math
from dataclasses import dataclass, field
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import ModelError
from ..utils.constants import DEFAULT_RNG_ALGORITHM


class SimulationConfig(BaseModel):
    """Time grid, population size and random stream of one simulation."""

    model_config = ConfigDict(frozen=True)

    particle_count: int = Field(..., ge=1, description="Number of particles N")
    dt: float = Field(..., gt=0, description="Euler-Maruyama step")
    horizon: float = Field(..., ge=0, description="Terminal time T")
    seed: int = Field(default=0, ge=0, lt=2**64, description="64-bit stream seed")
    store_trajectory: bool = Field(default=False)
    trajectory_every: int = Field(default=1, ge=1, description="Keep every k-th step")
    rng_algorithm: Literal["philox", "pcg64"] = Field(default=DEFAULT_RNG_ALGORITHM)

    @property
    def step_count(self) -> int:
        """round(T / dt)."""
        return int(round(self.horizon / self.dt))

    def grid_mismatch(self) -> float:
        """Distance of T / dt from the integer step count."""
        return abs(self.horizon / self.dt - self.step_count)


@dataclass(frozen=True)
class ParticleEnsemble:
    """Positions of all N particles at time t and the running clock tau_N(t)."""

    positions: np.ndarray
    time: float = 0.0
    tau_n: float = 0.0

    def __post_init__(self):
        positions = np.array(self.positions, dtype=float)
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        if positions.ndim != 1:
            raise ModelError("positions must be one-dimensional")
        if not np.all(np.isfinite(positions)):
            raise ModelError("positions must be finite")
        if self.time < 0 or self.tau_n < 0 or not math.isfinite(self.tau_n):
            raise ModelError(f"invalid ensemble clock: t={self.time}, tau_N={self.tau_n}")

    @property
    def size(self) -> int:
        """Number of particles."""
        return int(self.positions.size)

    @property
    def maximum(self) -> float:
        """Largest position."""
        return float(self.positions.max())


@dataclass
class Trajectory:
    """Stored steps of a simulation: times, clocks and positions."""

    times: List[float] = field(default_factory=list)
    taus: List[float] = field(default_factory=list)
    positions: List[np.ndarray] = field(default_factory=list)

    def record(self, ensemble: ParticleEnsemble) -> None:
        """Append one ensemble snapshot."""
        self.times.append(ensemble.time)
        self.taus.append(ensemble.tau_n)
        self.positions.append(ensemble.positions)

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class SimulationResult:
    """Terminal ensemble plus the trajectory when it was requested."""

    terminal: ParticleEnsemble
    steps: int
    trajectory: Optional[Trajectory] = None
