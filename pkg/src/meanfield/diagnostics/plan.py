"""Experiment plans and their Monte Carlo samples."""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..extremes.normalizers import NormalizingConstants
from ..limitlaw.solver import clock_horizon
from ..models.base import ClassTag, ModelSpec
from ..models.registry import build_model
from ..utils.constants import (
    DEFAULT_BASE_SEED,
    DEFAULT_HERMITE_ORDER,
    DEFAULT_ODE_STEP,
    DEFAULT_RNG_ALGORITHM,
    MIN_NORMALIZER_N,
)


class ExperimentMode(str, Enum):
    """How maxima are produced and normalized."""

    INTERACTING = "interacting"
    IID_LIMIT = "iid_limit"
    STOCHASTIC_NORM = "stochastic_norm"


class ExperimentPlan(BaseModel):
    """Replicated maxima experiment over a list of population sizes."""

    model_config = ConfigDict(frozen=True)

    model_id: str = Field(..., min_length=1)
    model_params: Dict[str, Any] = Field(default_factory=dict)
    mode: ExperimentMode = ExperimentMode.INTERACTING
    particle_counts: List[int] = Field(..., min_length=1)
    replications: int = Field(..., ge=1)
    t_star: float = Field(default=1.0, ge=0)
    dt: float = Field(default=1e-4, gt=0)
    base_seed: int = Field(default=DEFAULT_BASE_SEED, ge=0, lt=2**64)
    replay: int = Field(default=0, ge=0)
    rng_algorithm: Literal["philox", "pcg64"] = DEFAULT_RNG_ALGORITHM
    unit_normalizers: bool = False
    law_step: float = Field(default=DEFAULT_ODE_STEP, gt=0)
    hermite_order: int = Field(default=DEFAULT_HERMITE_ORDER, ge=2)

    @field_validator("particle_counts")
    @classmethod
    def validate_particle_counts(cls, v: List[int]) -> List[int]:
        """Every N must admit Gumbel normalizers."""
        for count in v:
            if count < MIN_NORMALIZER_N:
                raise ValueError(f"every N must be >= {MIN_NORMALIZER_N}, got {count}")
        if len(set(v)) != len(v):
            raise ValueError("N values must be distinct")
        return v

    @model_validator(mode="after")
    def validate_model(self) -> "ExperimentPlan":
        """Resolve the model once so bad ids and parameters fail early."""
        model = self.build_model()
        if self.mode is ExperimentMode.STOCHASTIC_NORM and (
            model.class_tag is not ClassTag.BOUNDED_GAUSSIAN
        ):
            raise ValueError("stochastic_norm mode needs a bounded-class model")
        if model.class_tag is ClassTag.GENERAL:
            raise ValueError(f"model '{self.model_id}' has no limit law to normalize with")
        return self

    def build_model(self) -> ModelSpec:
        """Build the plan's model from the registry."""
        return build_model(self.model_id, self.model_params)

    @property
    def law_horizon(self) -> float:
        """Horizon of the limit law; tau there covers every reachable tau_N(t*)."""
        return clock_horizon(self.build_model(), self.t_star)


@dataclass
class MaximaSample:
    """R normalized maxima for one N, with provenance."""

    particle_count: int
    mode: ExperimentMode
    seeds: List[int]
    maxima: np.ndarray
    normalized: np.ndarray
    pit: np.ndarray
    tau_n: Optional[np.ndarray] = None
    constants: Optional[NormalizingConstants] = None

    def __post_init__(self):
        lengths = {len(self.seeds), self.maxima.size, self.normalized.size, self.pit.size}
        if self.tau_n is not None:
            lengths.add(self.tau_n.size)
        if len(lengths) != 1:
            raise ValueError(f"inconsistent sample lengths: {sorted(lengths)}")
        if np.any((self.pit < 0) | (self.pit > 1)):
            raise ValueError("PIT values must lie in [0, 1]")

    @property
    def replications(self) -> int:
        """R."""
        return len(self.seeds)

    def rows(self):
        """Iterate (rep, seed, M, U, tau_N) rows."""
        for j in range(self.replications):
            tau = float(self.tau_n[j]) if self.tau_n is not None else None
            yield j, self.seeds[j], float(self.normalized[j]), float(self.pit[j]), tau
