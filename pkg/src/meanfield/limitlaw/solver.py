"""McKean-Vlasov limit law, deterministic time change and time-changed law.

For the bounded Gaussian class the limit is X_t ~ N(m_t, sigma_t^2) with
m_t = m0 + r0 t and sigma_t^2 = s0^2 + tau(t), where tau(t) is the integral of
sigma^2(E[g^sigma(X_s)]). The variance ODE is advanced with forward Euler on a
grid of step h; the bank models use closed forms. On every grid node
variance = s0^2 + tau.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
from scipy.optimize import bisect

from ..exceptions import LimitLawUnavailableError, ModelError, TimeOutOfRangeError
from ..models.base import ClassTag, ModelSpec
from ..utils.constants import DEFAULT_HERMITE_ORDER, DEFAULT_ODE_STEP
from ..utils.logging import get_logger
from .quadrature import gaussian_expectation, hermite_is_converged

logger = get_logger(__name__)


@dataclass(frozen=True)
class LimitLawPath:
    """Gaussian limit law on a time grid.

    Attributes:
        grid: Increasing times 0 = t_0 < ... < t_K = T
        mean: m_t on the grid
        variance: sigma_t^2 on the grid
        tau: Deterministic time change, tau_0 = 0
        kernel_mean: E[g^sigma(X_t)] on the grid
        initial_variance: s0^2
        model_name: Label of the model the law was solved for
    """

    grid: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    tau: np.ndarray
    kernel_mean: np.ndarray
    initial_variance: float
    model_name: str = ""

    def __post_init__(self):
        for name in ("grid", "mean", "variance", "tau", "kernel_mean"):
            array = np.array(getattr(self, name), dtype=float)
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def horizon(self) -> float:
        """Last grid time T."""
        return float(self.grid[-1])

    @property
    def tau_horizon(self) -> float:
        """tau(T)."""
        return float(self.tau[-1])

    @cached_property
    def clock_increasing(self) -> bool:
        """tau is strictly increasing on the grid."""
        return bool(np.all(np.diff(self.tau) > 0))

    def _check_time(self, t: float) -> float:
        slack = 1e-12 * (1.0 + self.horizon)
        if not (-slack <= t <= self.horizon + slack):
            raise TimeOutOfRangeError(t, 0.0, self.horizon)
        return min(max(t, 0.0), self.horizon)

    def _interp(self, t: float, values: np.ndarray) -> float:
        t = self._check_time(t)
        return float(np.interp(t, self.grid, values))

    def mean_at(self, t: float) -> float:
        """m_t by linear interpolation."""
        return self._interp(t, self.mean)

    def variance_at(self, t: float) -> float:
        """sigma_t^2 by linear interpolation."""
        return self._interp(t, self.variance)

    def kernel_mean_at(self, t: float) -> float:
        """E[g^sigma(X_t)] by linear interpolation."""
        return self._interp(t, self.kernel_mean)

    def rows(self):
        """Iterate (t, m, sigma2, tau) rows."""
        return zip(
            self.grid.tolist(), self.mean.tolist(), self.variance.tolist(), self.tau.tolist()
        )


def _time_grid(horizon: float, h: float) -> np.ndarray:
    if horizon == 0:
        return np.zeros(1)
    steps = max(1, int(round(horizon / h)))
    return np.linspace(0.0, horizon, steps + 1)


def _solve_bounded_class(
    model: ModelSpec, grid: np.ndarray, hermite_order: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    r0 = model.drift_constant
    kernel = model.kernel_diffusion
    mean = model.initial_mean + r0 * grid
    variance = np.empty_like(grid)
    kernel_mean = np.empty_like(grid)
    variance[0] = model.initial_variance

    if not hermite_is_converged(kernel, mean[0], variance[0], hermite_order):
        raise ModelError(
            f"{model.name}: Gauss-Hermite order {hermite_order} is not converged on the initial law"
        )

    steps = np.diff(grid)
    for k in range(grid.size):
        kernel_mean[k] = gaussian_expectation(kernel, mean[k], variance[k], hermite_order)
        if k + 1 < grid.size:
            sigma = float(model.sigma_of(kernel_mean[k]))
            variance[k + 1] = variance[k] + steps[k] * sigma * sigma
    return mean, variance, kernel_mean


def _bank_variance(kappa: float, initial_variance: float, grid: np.ndarray) -> np.ndarray:
    return initial_variance * np.exp((2.0 * kappa + 1.0) * grid)


def _hybrid_variance(kappa: float, initial_variance: float, grid: np.ndarray) -> np.ndarray:
    # dV/dt = 2 kappa V + e^{3t}
    if math.isclose(kappa, 1.5):
        return np.exp(3.0 * grid) * (initial_variance + grid)
    decay = np.exp(2.0 * kappa * grid)
    return initial_variance * decay + (np.exp(3.0 * grid) - decay) / (3.0 - 2.0 * kappa)


def solve_limit_law(
    model: ModelSpec,
    horizon: float,
    h: float = DEFAULT_ODE_STEP,
    hermite_order: int = DEFAULT_HERMITE_ORDER,
) -> LimitLawPath:
    """
    Solve the limiting Gaussian law of a model on [0, T].

    Args:
        model: Bounded-class, bank or hybrid bank model
        horizon: T (>= 0; T = 0 gives a single node)
        h: ODE step for the bounded class
        hermite_order: Gauss-Hermite nodes for E[g^sigma(X_t)]

    Returns:
        LimitLawPath: The solved law

    Raises:
        LimitLawUnavailableError: For GENERAL models
    """
    if horizon < 0 or h <= 0:
        raise ValueError(f"need T >= 0 and h > 0, got T={horizon}, h={h}")

    grid = _time_grid(horizon, h)
    tag = model.class_tag

    if tag is ClassTag.BOUNDED_GAUSSIAN:
        mean, variance, kernel_mean = _solve_bounded_class(model, grid, hermite_order)
    elif tag in (ClassTag.BANK, ClassTag.HYBRID_BANK):
        kappa = float(model.parameter("kappa", 1.0))
        if tag is ClassTag.BANK:
            variance = _bank_variance(kappa, model.initial_variance, grid)
        else:
            variance = _hybrid_variance(kappa, model.initial_variance, grid)
        mean = np.zeros_like(grid)
        kernel_mean = variance.copy()
    else:
        raise LimitLawUnavailableError(tag.value)

    logger.debug(
        f"Solved limit law for {model.name}: T={horizon}, nodes={grid.size}, "
        f"sigma_T^2={variance[-1]:.6g}"
    )
    return LimitLawPath(
        grid=grid,
        mean=mean,
        variance=variance,
        tau=variance - model.initial_variance,
        kernel_mean=kernel_mean,
        initial_variance=model.initial_variance,
        model_name=model.name,
    )


def clock_horizon(model: ModelSpec, t_star: float) -> float:
    """
    Law horizon T whose tau(T) covers every tau_N(t_star) a simulation can reach.

    For the bounded class tau_N(t*) <= (M^sigma)^2 t* and tau(T) >= (m^sigma)^2 T,
    so T = max(2, (M^sigma / m^sigma)^2) t*. Other classes use 2 t*.
    """
    factor = 2.0
    bounds = model.sigma_bounds
    if model.class_tag is ClassTag.BOUNDED_GAUSSIAN and bounds is not None:
        factor = max(factor, (bounds.upper / bounds.lower) ** 2)
    return factor * t_star


def tau_of(law: LimitLawPath, t: float) -> float:
    """
    tau(t) by linear interpolation of the grid.

    Raises:
        TimeOutOfRangeError: If t is outside [0, T]
    """
    return law._interp(t, law.tau)


def tau_inverse(law: LimitLawPath, u: float) -> float:
    """
    Solve tau(s) = u by monotone bisection.

    Args:
        law: Solved limit law
        u: Clock value in [0, tau(T)]

    Returns:
        float: s with |s - tau^{-1}(u)| <= 1e-12 (1 + T)

    Raises:
        ModelError: If tau is not strictly increasing on the grid
        TimeOutOfRangeError: If u is outside [0, tau(T)]
    """
    if not law.clock_increasing:
        raise ModelError(f"{law.model_name}: tau is not strictly increasing and has no inverse")
    horizon = law.horizon
    upper = law.tau_horizon
    slack = 1e-12 * (1.0 + upper)
    if not (-slack <= u <= upper + slack):
        raise TimeOutOfRangeError(u, 0.0, upper)
    if u <= 0.0:
        return 0.0
    if u >= upper:
        return horizon
    return float(
        bisect(lambda s: tau_of(law, s) - u, 0.0, horizon, xtol=1e-12 * (1.0 + horizon))
    )


def y_law(law: LimitLawPath, model: ModelSpec, t: float) -> Tuple[float, float]:
    """
    Mean and variance of the time-changed process Y_t = X_{tau^{-1}(t)}.

    The variance is s0^2 + t. The mean is m0 + r0 * integral_0^t
    sigma^{-2}(E[g^sigma(Y_s)]) ds, where the law of Y_s is read off the X-law
    at tau^{-1}(s). The integral uses a left-endpoint rule whose nodes are the
    law's own clock values tau_k.

    Args:
        law: Law solved for ``model``
        model: Bounded-class model
        t: Clock value in [0, tau(T)]

    Returns:
        Tuple[float, float]: (mean, variance)

    Raises:
        LimitLawUnavailableError: For models outside the bounded class
        TimeOutOfRangeError: If t is outside [0, tau(T)]
    """
    if model.class_tag is not ClassTag.BOUNDED_GAUSSIAN:
        raise LimitLawUnavailableError(model.class_tag.value)
    upper = law.tau_horizon
    slack = 1e-12 * (1.0 + upper)
    if not (-slack <= t <= upper + slack):
        raise TimeOutOfRangeError(t, 0.0, upper)
    t = min(max(t, 0.0), upper)

    variance = model.initial_variance + t
    r0 = model.drift_constant
    if r0 == 0.0 or law.grid.size == 1:
        return model.initial_mean, variance

    sigma = np.asarray(model.sigma_of(law.kernel_mean[:-1]), dtype=float)
    weights = 1.0 / np.square(sigma)
    lengths = np.diff(law.tau)
    cumulative = np.concatenate(([0.0], np.cumsum(weights * lengths)))

    k = int(np.searchsorted(law.tau, t, side="right")) - 1
    k = min(max(k, 0), weights.size - 1)
    integral = cumulative[k] + weights[k] * (t - law.tau[k])
    return model.initial_mean + r0 * float(integral), variance
