"""Built-in models.

Every coefficient is a module-level function (or a ``functools.partial`` of
one) so models pickle cleanly into worker processes.
"""

import math
from functools import partial
from typing import Any, Callable, Dict, Optional

import numpy as np

from ..exceptions import ModelError
from .base import ClassTag, ModelSpec, SigmaBounds

# Lipschitz kernels selectable by name from configuration
KERNELS: Dict[str, Callable[[Any], Any]] = {
    "identity": np.positive,
    "tanh": np.tanh,
    "sin": np.sin,
    "arctan": np.arctan,
}


def _square(x: Any) -> Any:
    return np.square(x)


def _constant_drift(r0: float, x: Any, z: Any) -> Any:
    shape = np.broadcast(np.asarray(x, dtype=float), np.asarray(z, dtype=float)).shape
    return np.full(shape, float(r0))


def _sigma_of_z(sigma_fn: Callable[[Any], Any], x: Any, z: Any) -> Any:
    return np.asarray(sigma_fn(z), dtype=float) + np.zeros_like(np.asarray(x, dtype=float))


def _tanh_profile(base: float, amplitude: float, z: Any) -> Any:
    return base + amplitude * np.tanh(z)


def _reverting_drift(kappa: float, x: Any, z: Any) -> Any:
    return kappa * (np.asarray(x, dtype=float) - z)


def _root_second_moment(x: Any, z: Any) -> Any:
    return np.sqrt(z) + np.zeros_like(np.asarray(x, dtype=float))


def _exponential_clock(rate: float, t: float) -> float:
    return math.exp(rate * t)


def _proportional(coefficient: float, x: Any, z: Any) -> Any:
    return coefficient * np.asarray(x, dtype=float)


def gaussian_const_vol(
    r0: float,
    sigma_fn: Callable[[Any], Any],
    kernel_diffusion: Callable[[Any], Any],
    sigma_bounds: SigmaBounds,
    initial_mean: float = 0.0,
    initial_variance: float = 1.0,
    name: str = "gaussian_const_vol",
    parameters: tuple = (),
) -> ModelSpec:
    """
    Constant drift r0, diffusion sigma(<g^sigma, mu>) independent of x.

    Args:
        r0: Constant drift
        sigma_fn: Smooth bounded function of z (vectorised)
        kernel_diffusion: Lipschitz kernel g^sigma
        sigma_bounds: Declared m^sigma, M^sigma
        initial_mean: m0
        initial_variance: s0^2
        name: Model label
        parameters: Provenance pairs

    Returns:
        ModelSpec: A bounded-class model
    """
    return ModelSpec(
        name=name,
        drift=partial(_constant_drift, float(r0)),
        diffusion=partial(_sigma_of_z, sigma_fn),
        kernel_drift=np.positive,
        kernel_diffusion=kernel_diffusion,
        initial_mean=float(initial_mean),
        initial_variance=float(initial_variance),
        class_tag=ClassTag.BOUNDED_GAUSSIAN,
        sigma_bounds=sigma_bounds,
        parameters=parameters,
    )


def tanh_profile_vol(
    r0: float = 0.0,
    sigma_base: float = 1.0,
    sigma_amp: float = 0.5,
    kernel: str = "identity",
    initial_mean: float = 0.0,
    initial_variance: float = 1.0,
    name: str = "gaussian_const_vol",
) -> ModelSpec:
    """
    Bounded-class model with sigma(z) = sigma_base + sigma_amp * tanh(z).

    Raises:
        ModelError: If the kernel name is unknown or sigma is not bounded below
    """
    if kernel not in KERNELS:
        raise ModelError(f"Unknown kernel '{kernel}'. Supported: {', '.join(sorted(KERNELS))}")
    sigma_base = float(sigma_base)
    sigma_amp = float(sigma_amp)
    if sigma_base - abs(sigma_amp) <= 0:
        raise ModelError(
            f"sigma_base ({sigma_base}) must exceed |sigma_amp| ({abs(sigma_amp)})"
        )
    parameters = (
        ("r0", float(r0)),
        ("sigma_base", sigma_base),
        ("sigma_amp", sigma_amp),
        ("kernel", kernel),
        ("initial_mean", float(initial_mean)),
        ("initial_variance", float(initial_variance)),
    )
    return gaussian_const_vol(
        r0=r0,
        sigma_fn=partial(_tanh_profile, sigma_base, sigma_amp),
        kernel_diffusion=KERNELS[kernel],
        sigma_bounds=SigmaBounds(sigma_base - abs(sigma_amp), sigma_base + abs(sigma_amp)),
        initial_mean=initial_mean,
        initial_variance=initial_variance,
        name=name,
        parameters=parameters,
    )


def tanh_vol(
    r0: float = 0.0, initial_mean: float = 0.0, initial_variance: float = 1.0
) -> ModelSpec:
    """sigma(z) = 1 + tanh(z)/2 with g^sigma the identity; bounds [1/2, 3/2]."""
    return tanh_profile_vol(
        r0=r0,
        sigma_base=1.0,
        sigma_amp=0.5,
        kernel="identity",
        initial_mean=initial_mean,
        initial_variance=initial_variance,
        name="tanh_vol",
    )


def constant_vol(
    sigma: float, r0: float = 0.0, initial_mean: float = 0.0, initial_variance: float = 1.0
) -> ModelSpec:
    """Bounded-class model with sigma identically equal to ``sigma``."""
    return tanh_profile_vol(
        r0=r0,
        sigma_base=sigma,
        sigma_amp=0.0,
        kernel="identity",
        initial_mean=initial_mean,
        initial_variance=initial_variance,
        name="constant_vol",
    )


def bank(kappa: float = 1.0, initial_variance: float = 1.0) -> ModelSpec:
    """
    Interbank reserves: dX = kappa (X - mean) dt + sqrt(second moment) dB, X0 ~ N(0, s0^2).

    The simulated system uses kappa = +1. The lending narrative of the model
    suggests a negative kappa; it is kept as a parameter so both readings can
    be run, but only kappa = +1 reproduces Var(X_t) = e^{3t}.
    For kappa <= -1/2 the limit variance does not grow, tau is not
    increasing and tau_inverse raises ModelError.
    """
    kappa = float(kappa)
    return ModelSpec(
        name="bank",
        drift=partial(_reverting_drift, kappa),
        diffusion=_root_second_moment,
        kernel_drift=np.positive,
        kernel_diffusion=_square,
        initial_mean=0.0,
        initial_variance=float(initial_variance),
        class_tag=ClassTag.BANK,
        bounded_coefficients=False,
        parameters=(("kappa", kappa), ("initial_variance", float(initial_variance))),
    )


def hybrid_bank(kappa: float = 1.0, initial_variance: float = 1.0) -> ModelSpec:
    """
    Bank drift with the interacting volatility replaced by its limit e^{3t/2}.

    The noise no longer depends on the ensemble; only the drift interacts.
    """
    kappa = float(kappa)
    return ModelSpec(
        name="hybrid_bank",
        drift=partial(_reverting_drift, kappa),
        diffusion=_root_second_moment,
        kernel_drift=np.positive,
        kernel_diffusion=_square,
        initial_mean=0.0,
        initial_variance=float(initial_variance),
        class_tag=ClassTag.HYBRID_BANK,
        diffusion_clock=partial(_exponential_clock, 1.5),
        bounded_coefficients=False,
        parameters=(("kappa", kappa), ("initial_variance", float(initial_variance))),
    )


def general_model(
    drift: Callable[[Any, Any], Any],
    diffusion: Callable[[Any, Any], Any],
    kernel_drift: Optional[Callable[[Any], Any]] = None,
    kernel_diffusion: Optional[Callable[[Any], Any]] = None,
    initial_mean: float = 0.0,
    initial_variance: float = 1.0,
    name: str = "general",
) -> ModelSpec:
    """Arbitrary coefficients; simulation only, no limit law."""
    return ModelSpec(
        name=name,
        drift=drift,
        diffusion=diffusion,
        kernel_drift=kernel_drift or np.positive,
        kernel_diffusion=kernel_diffusion or np.positive,
        initial_mean=float(initial_mean),
        initial_variance=float(initial_variance),
        class_tag=ClassTag.GENERAL,
    )


def geometric_brownian_motion(mu: float = 1.0, sigma: float = 1.0, x0: float = 1.0) -> ModelSpec:
    """dX = mu X dt + sigma X dB, no interaction; used to measure the EM strong order."""
    return ModelSpec(
        name="geometric_brownian_motion",
        drift=partial(_proportional, float(mu)),
        diffusion=partial(_proportional, float(sigma)),
        kernel_drift=np.positive,
        kernel_diffusion=np.positive,
        initial_mean=float(x0),
        initial_variance=1.0,
        class_tag=ClassTag.GENERAL,
        parameters=(("mu", float(mu)), ("sigma", float(sigma)), ("x0", float(x0))),
    )
