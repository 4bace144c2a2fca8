"""Gumbel normalizing constants for Gaussian maxima.

With L = 2 ln N - ln ln N - ln(4 pi), the maximum of N i.i.d. N(m, s^2)
variables satisfies (max - b) / a -> Gumbel for b = s sqrt(L) + m and
a = s / sqrt(L). L is positive only from N = 5 on.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from ..exceptions import EmptyEnsembleError, LimitLawUnavailableError, NormalizerError
from ..limitlaw.solver import LimitLawPath, tau_inverse
from ..models.base import ClassTag, ModelSpec
from ..utils.constants import LOG_4PI, MIN_NORMALIZER_N
from .gumbel import gumbel_cdf


class NormalizerSource(str, Enum):
    """Where the normalizing constants come from."""

    DETERMINISTIC = "deterministic"
    STOCHASTIC = "stochastic"


@dataclass(frozen=True)
class NormalizingConstants:
    """Scale a and location b for a population of N."""

    a: float
    b: float
    particle_count: int
    source: NormalizerSource = NormalizerSource.DETERMINISTIC

    def __post_init__(self):
        if self.particle_count < MIN_NORMALIZER_N:
            raise NormalizerError(self.particle_count)
        if not (self.a > 0 and math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"invalid normalizing constants a={self.a}, b={self.b}")


def gumbel_radicand(particle_count: int) -> float:
    """
    L = 2 ln N - ln ln N - ln(4 pi).

    Raises:
        NormalizerError: For N < 5, where L <= 0
    """
    if particle_count < MIN_NORMALIZER_N:
        raise NormalizerError(particle_count)
    log_n = math.log(particle_count)
    radicand = 2.0 * log_n - math.log(log_n) - LOG_4PI
    if radicand <= 0:
        raise NormalizerError(particle_count)
    return radicand


def normalizers(particle_count: int, mean: float, stdev: float) -> NormalizingConstants:
    """
    Deterministic constants for N i.i.d. N(mean, stdev^2) variables.

    Args:
        particle_count: N (>= 5)
        mean: Gaussian mean
        stdev: Gaussian standard deviation (> 0)

    Returns:
        NormalizingConstants: source DETERMINISTIC
    """
    if not stdev > 0:
        raise ValueError(f"stdev must be > 0, got {stdev}")
    root = math.sqrt(gumbel_radicand(particle_count))
    return NormalizingConstants(
        a=stdev / root,
        b=stdev * root + mean,
        particle_count=particle_count,
        source=NormalizerSource.DETERMINISTIC,
    )


def standard_normalizers(particle_count: int) -> NormalizingConstants:
    """Constants for standard normal variables: b = sqrt(L), a = 1 / b."""
    return normalizers(particle_count, 0.0, 1.0)


def stochastic_normalizers(
    tau_n_value: float, law: LimitLawPath, model: ModelSpec, particle_count: int
) -> NormalizingConstants:
    """
    Constants evaluated at the random time s = tau^{-1}(tau_N(t)).

    The variance at s is s0^2 + tau_N, so only the mean is read off the law.

    Args:
        tau_n_value: Empirical clock tau_N(t) of one replication
        law: Limit law solved for ``model``
        model: Bounded-class model
        particle_count: N (>= 5)

    Returns:
        NormalizingConstants: source STOCHASTIC

    Raises:
        TimeOutOfRangeError: If tau_N lies outside the law's clock range
    """
    if model.class_tag is not ClassTag.BOUNDED_GAUSSIAN:
        raise LimitLawUnavailableError(model.class_tag.value)
    s = tau_inverse(law, tau_n_value)
    deterministic = normalizers(
        particle_count, law.mean_at(s), math.sqrt(model.initial_variance + tau_n_value)
    )
    return NormalizingConstants(
        a=deterministic.a,
        b=deterministic.b,
        particle_count=particle_count,
        source=NormalizerSource.STOCHASTIC,
    )


def normalize_and_pit(
    positions: Sequence[float], constants: NormalizingConstants
) -> Tuple[float, float]:
    """
    Normalized maximum M = (max - b) / a and its Gumbel PIT U = F(M).

    Raises:
        EmptyEnsembleError: If positions is empty
    """
    values = np.asarray(positions, dtype=float)
    if values.size == 0:
        raise EmptyEnsembleError()
    return normalize_maximum(float(values.max()), constants)


def normalize_maximum(maximum: float, constants: NormalizingConstants) -> Tuple[float, float]:
    """(M, U) for an already reduced maximum."""
    normalized = (maximum - constants.b) / constants.a
    return normalized, gumbel_cdf(normalized)
