"""Mean-field model abstraction.

A model is the pair of coefficients r(x, z), sigma(x, z) together with the
kernels g^r, g^sigma whose empirical averages feed the ``z`` argument, and a
Gaussian initial law N(m0, s0^2). Coefficients and kernels are vectorised
over ``x`` (numpy arrays in, numpy arrays out) and pure.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import CoefficientBlowUpError, EmptyEnsembleError, ModelError

Coefficient = Callable[[Any, Any], Any]
Kernel = Callable[[Any], Any]
Clock = Callable[[float], float]

# Spot-check grids for the bounded Gaussian class
_Z_CHECK_GRID = np.linspace(-10.0, 10.0, 81)
_X_CHECK_GRID = np.array([-5.0, -1.0, 0.0, 1.0, 5.0])


class ClassTag(str, Enum):
    """Model classes with different limit-law support."""

    BOUNDED_GAUSSIAN = "bounded_gaussian"
    BANK = "bank"
    HYBRID_BANK = "hybrid_bank"
    GENERAL = "general"


@dataclass(frozen=True)
class SigmaBounds:
    """Declared bounds m^sigma <= sigma(z) <= M^sigma."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (0.0 < self.lower <= self.upper):
            raise ModelError(
                f"sigma bounds must satisfy 0 < lower <= upper, got [{self.lower}, {self.upper}]"
            )

    def contains(self, values: np.ndarray, slack: float = 1e-12) -> bool:
        """Check that every value lies inside the bounds."""
        values = np.asarray(values, dtype=float)
        return bool(np.all(values >= self.lower - slack) and np.all(values <= self.upper + slack))


@dataclass(frozen=True)
class ModelSpec:
    """Immutable description of a mean-field model.

    Attributes:
        name: Registry identifier or a descriptive label
        drift: r(x, z)
        diffusion: sigma(x, z)
        kernel_drift: g^r
        kernel_diffusion: g^sigma
        initial_mean: m0
        initial_variance: s0^2 (strictly positive)
        class_tag: Which limit-law machinery applies
        sigma_bounds: Declared bounds for the bounded Gaussian class
        diffusion_clock: When set, the diffusion is this deterministic
            function of time and the interacting noise is switched off
        bounded_coefficients: False for models outside the boundedness
            assumptions (the bank models)
        parameters: (name, value) pairs the model was built from
    """

    name: str
    drift: Coefficient
    diffusion: Coefficient
    kernel_drift: Kernel
    kernel_diffusion: Kernel
    initial_mean: float
    initial_variance: float
    class_tag: ClassTag = ClassTag.GENERAL
    sigma_bounds: Optional[SigmaBounds] = None
    diffusion_clock: Optional[Clock] = None
    bounded_coefficients: bool = True
    parameters: Tuple[Tuple[str, Any], ...] = ()

    def __post_init__(self):
        if not math.isfinite(self.initial_mean):
            raise ModelError(f"initial_mean must be finite, got {self.initial_mean}")
        if not (math.isfinite(self.initial_variance) and self.initial_variance > 0):
            raise ModelError(f"initial_variance must be > 0, got {self.initial_variance}")
        if self.class_tag is ClassTag.BOUNDED_GAUSSIAN:
            self._check_bounded_gaussian()

    def _check_bounded_gaussian(self) -> None:
        if self.sigma_bounds is None:
            raise ModelError(f"{self.name}: bounded Gaussian class requires sigma_bounds")

        r0 = self.drift(0.0, 0.0)
        for x in _X_CHECK_GRID:
            drift_values = np.asarray(self.drift(x, _Z_CHECK_GRID), dtype=float)
            if not np.allclose(drift_values, r0, rtol=0.0, atol=1e-12):
                raise ModelError(f"{self.name}: drift must be constant in both arguments")

        reference = np.asarray(self.diffusion(0.0, _Z_CHECK_GRID), dtype=float)
        for x in _X_CHECK_GRID:
            values = np.asarray(self.diffusion(x, _Z_CHECK_GRID), dtype=float)
            if not np.allclose(values, reference, rtol=0.0, atol=1e-12):
                raise ModelError(f"{self.name}: diffusion must not depend on x")

        if not self.sigma_bounds.contains(reference):
            raise ModelError(
                f"{self.name}: sigma leaves [{self.sigma_bounds.lower}, "
                f"{self.sigma_bounds.upper}] on the check grid"
            )

    @property
    def drift_constant(self) -> float:
        """r0 for the bounded Gaussian class."""
        return float(self.drift(0.0, 0.0))

    def sigma_of(self, z: Any) -> Any:
        """sigma(z) for models whose diffusion ignores x."""
        return self.diffusion(0.0, z)

    def diffusion_at(self, x: Any, z: float, t: float) -> Any:
        """Diffusion value at time t, honouring a deterministic clock."""
        if self.diffusion_clock is not None:
            return np.zeros_like(np.asarray(x, dtype=float)) + self.diffusion_clock(t)
        return self.diffusion(x, z)

    def parameter(self, key: str, default: Any = None) -> Any:
        """Look up a construction parameter."""
        return dict(self.parameters).get(key, default)


def empirical_statistic(kernel: Kernel, positions: Sequence[float]) -> float:
    """
    Average of ``kernel`` over the empirical measure of ``positions``.

    Uses ``math.fsum`` so the sum is exact before the single division.

    Args:
        kernel: Vectorised function of one real
        positions: Particle positions

    Returns:
        float: (1/N) * sum kernel(x_i)

    Raises:
        EmptyEnsembleError: If there are no positions
    """
    values = np.asarray(positions, dtype=float)
    if values.size == 0:
        raise EmptyEnsembleError()
    mapped = np.broadcast_to(np.asarray(kernel(values), dtype=float), values.shape)
    return math.fsum(mapped.ravel().tolist()) / values.size


def compensated_mean(values: np.ndarray) -> float:
    """Compensated mean of an array (identity kernel)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyEnsembleError()
    return math.fsum(values.ravel().tolist()) / values.size


def mean_field_statistics(model: ModelSpec, positions: np.ndarray, t: float) -> Tuple[float, float]:
    """
    The two empirical statistics (z_r, z_sigma) of an ensemble.

    Raises:
        CoefficientBlowUpError: If either statistic is not finite
    """
    z_r = empirical_statistic(model.kernel_drift, positions)
    z_sigma = empirical_statistic(model.kernel_diffusion, positions)
    for label, value in (("drift statistic", z_r), ("diffusion statistic", z_sigma)):
        if not math.isfinite(value):
            raise CoefficientBlowUpError(t, value, label)
    return z_r, z_sigma


def evaluate_fields(
    model: ModelSpec, x: np.ndarray, z_r: float, z_sigma: float, t: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Drift and diffusion for every position given frozen statistics.

    Raises:
        CoefficientBlowUpError: On the first non-finite value
    """
    drift = np.asarray(model.drift(x, z_r), dtype=float)
    diffusion = np.asarray(model.diffusion_at(x, z_sigma, t), dtype=float)
    for label, values in (("drift", drift), ("diffusion", diffusion)):
        bad = ~np.isfinite(values)
        if np.any(bad):
            raise CoefficientBlowUpError(t, float(values[bad].flat[0]), label)
    return drift, diffusion


def evaluate_coefficients(
    model: ModelSpec, x: float, positions: Sequence[float], t: float
) -> Tuple[float, float]:
    """
    Evaluate r(x, <g^r, mu^N>) and sigma(x, <g^sigma, mu^N>) for one particle.

    Args:
        model: The model
        x: Position of the particle being updated
        positions: The whole ensemble (defines the empirical measure)
        t: Current time (only used by clock-driven diffusions)

    Returns:
        Tuple[float, float]: (drift_value, diffusion_value)

    Raises:
        EmptyEnsembleError: If positions is empty
        CoefficientBlowUpError: If any intermediate is not finite
    """
    z_r, z_sigma = mean_field_statistics(model, np.asarray(positions, dtype=float), t)
    drift, diffusion = evaluate_fields(model, np.asarray(x, dtype=float), z_r, z_sigma, t)
    return float(drift), float(diffusion)
