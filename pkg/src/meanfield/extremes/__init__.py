"""Gumbel limit machinery for normalized maxima."""

from .gumbel import gumbel_cdf, gumbel_quantile
from .normalizers import (
    NormalizerSource,
    NormalizingConstants,
    gumbel_radicand,
    normalize_and_pit,
    normalize_maximum,
    normalizers,
    standard_normalizers,
    stochastic_normalizers,
)

__all__ = [
    "NormalizerSource",
    "NormalizingConstants",
    "gumbel_cdf",
    "gumbel_quantile",
    "gumbel_radicand",
    "normalize_and_pit",
    "normalize_maximum",
    "normalizers",
    "standard_normalizers",
    "stochastic_normalizers",
]
