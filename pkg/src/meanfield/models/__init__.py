"""Mean-field models: abstraction, built-ins and registry."""

from .base import (
    ClassTag,
    ModelSpec,
    SigmaBounds,
    compensated_mean,
    empirical_statistic,
    evaluate_coefficients,
    evaluate_fields,
    mean_field_statistics,
)
from .builtin import (
    KERNELS,
    bank,
    constant_vol,
    gaussian_const_vol,
    general_model,
    geometric_brownian_motion,
    hybrid_bank,
    tanh_profile_vol,
    tanh_vol,
)
from .registry import ModelRegistry, build_model

__all__ = [
    "ClassTag",
    "ModelSpec",
    "SigmaBounds",
    "KERNELS",
    "ModelRegistry",
    "bank",
    "build_model",
    "compensated_mean",
    "constant_vol",
    "empirical_statistic",
    "evaluate_coefficients",
    "evaluate_fields",
    "gaussian_const_vol",
    "general_model",
    "geometric_brownian_motion",
    "hybrid_bank",
    "mean_field_statistics",
    "tanh_profile_vol",
    "tanh_vol",
]
