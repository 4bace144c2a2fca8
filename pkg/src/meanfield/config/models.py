"""Pydantic models for run configuration and environment settings."""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..diagnostics.plan import ExperimentMode, ExperimentPlan
from ..exceptions import ModelError
from ..models.registry import build_model
from ..utils.constants import (
    DEFAULT_BASE_SEED,
    DEFAULT_BIN_WIDTH,
    DEFAULT_HERMITE_ORDER,
    DEFAULT_ODE_STEP,
    DEFAULT_PROFILE,
    DEFAULT_RNG_ALGORITHM,
    ENV_PREFIX,
    MIN_NORMALIZER_N,
    PROFILE_STEPS,
)


class ModelBlock(BaseModel):
    """The [model] section: a registry id and its parameters."""

    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    params: Dict[str, Any] = Field(default_factory=dict)


class RunConfig(BaseModel):
    """
    One experiment as read from a config file.

    Field aliases are the keys used in files (``N``, ``R``, ``T``, ``seed``).
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)

    experiment: str = Field(..., alias="name", min_length=1)
    model: ModelBlock
    mode: ExperimentMode = ExperimentMode.INTERACTING
    particle_counts: List[int] = Field(..., alias="N", min_length=1)
    replications: int = Field(..., alias="R", ge=1)
    dt: Optional[float] = Field(default=None, gt=0)
    horizon: Optional[float] = Field(default=None, alias="T", ge=0)
    t_star: float = Field(default=1.0, ge=0)
    bin_width: float = Field(default=DEFAULT_BIN_WIDTH, gt=0, le=1)
    base_seed: int = Field(default=DEFAULT_BASE_SEED, alias="seed", ge=0, lt=2**64)
    output_dir: Optional[Path] = Field(default=None, alias="output")
    profile: Literal["paper", "fast"] = DEFAULT_PROFILE
    replays: int = Field(default=1, ge=1)
    unit_normalizers: bool = False
    rng_algorithm: Literal["philox", "pcg64"] = Field(default=DEFAULT_RNG_ALGORITHM, alias="rng")
    jobs: Optional[int] = Field(default=None, ge=1)
    log_dir: Optional[Path] = Field(default=None)
    law_step: float = Field(default=DEFAULT_ODE_STEP, gt=0)
    hermite_order: int = Field(default=DEFAULT_HERMITE_ORDER, ge=2)
    export_law: bool = False

    @field_validator("particle_counts", mode="before")
    @classmethod
    def split_particle_counts(cls, v: Any) -> Any:
        """Accept "100, 141, 173" as well as a list."""
        if isinstance(v, str):
            return [item.strip() for item in v.split(",") if item.strip()]
        if isinstance(v, int):
            return [v]
        return v

    @field_validator("particle_counts")
    @classmethod
    def validate_particle_counts(cls, v: List[int]) -> List[int]:
        """Every N must admit Gumbel normalizers and appear once."""
        for count in v:
            if count < MIN_NORMALIZER_N:
                raise ValueError(f"every N must be >= {MIN_NORMALIZER_N}, got {count}")
        if len(set(v)) != len(v):
            raise ValueError("N values must be distinct")
        return v

    @field_validator("bin_width")
    @classmethod
    def validate_bin_width(cls, v: float) -> float:
        """Bin width must divide 1 evenly."""
        bins = round(1.0 / v)
        if abs(bins * v - 1.0) > 1e-9:
            raise ValueError(f"bin width {v} does not divide 1 evenly")
        return v

    @field_validator("model")
    @classmethod
    def validate_model(cls, v: ModelBlock) -> ModelBlock:
        """The model id and parameters must resolve to a built-in."""
        try:
            build_model(v.id, v.params)
        except ModelError as e:
            raise ValueError(str(e))
        return v

    @model_validator(mode="after")
    def validate_times(self) -> "RunConfig":
        """t* must not exceed T when T is given."""
        if self.horizon is not None and self.t_star > self.horizon:
            raise ValueError(f"t_star ({self.t_star}) exceeds T ({self.horizon})")
        return self

    @property
    def resolved_dt(self) -> float:
        """Explicit dt, else the profile's step."""
        return self.dt if self.dt is not None else PROFILE_STEPS[self.profile]

    @property
    def resolved_horizon(self) -> float:
        """T, defaulting to t*."""
        return self.horizon if self.horizon is not None else self.t_star

    def with_profile(self, profile: str) -> "RunConfig":
        """Copy that uses the given profile's step regardless of dt."""
        if profile not in PROFILE_STEPS:
            raise ValueError(f"unknown profile '{profile}'")
        return self.model_copy(update={"profile": profile, "dt": None})

    def plan(self, replay: int = 0) -> ExperimentPlan:
        """
        The experiment plan of one replay.

        Replay r runs from base seed + r.
        """
        return ExperimentPlan(
            model_id=self.model.id,
            model_params=dict(self.model.params),
            mode=self.mode,
            particle_counts=list(self.particle_counts),
            replications=self.replications,
            t_star=self.t_star,
            dt=self.resolved_dt,
            base_seed=self.base_seed + replay,
            replay=replay,
            rng_algorithm=self.rng_algorithm,
            unit_normalizers=self.unit_normalizers,
            law_step=self.law_step,
            hermite_order=self.hermite_order,
        )


class MeanfieldSettings(BaseSettings):
    """Environment-based settings.

    These can be overridden via environment variables with MEANFIELD_ prefix.
    """

    model_config = SettingsConfigDict(env_prefix=ENV_PREFIX, env_file=".env", extra="ignore")

    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    log_level: str = Field(default="INFO")
    log_format: str = Field(default="text")  # "text" or "json"
    jobs: Optional[int] = Field(default=None, ge=1)
    log_dir: Optional[Path] = Field(default=None)
