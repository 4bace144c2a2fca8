"""Standard Gumbel distribution."""

from typing import Any

import numpy as np
from scipy.optimize import bisect

# exp(-exp(-x)) is 0 or 1 to double precision outside this bracket
_QUANTILE_BRACKET = (-40.0, 40.0)


def gumbel_cdf(x: Any) -> Any:
    """
    F(x) = exp(-exp(-x)), elementwise.

    Args:
        x: Scalar or array

    Returns:
        Probability (float for scalar input)
    """
    with np.errstate(over="ignore"):
        values = np.exp(-np.exp(-np.asarray(x, dtype=float)))
    if np.ndim(values) == 0:
        return float(values)
    return values


def gumbel_quantile(p: float, xtol: float = 1e-13) -> float:
    """
    Numeric inverse of ``gumbel_cdf`` by bisection.

    Args:
        p: Probability strictly inside (0, 1)
        xtol: Absolute tolerance on x

    Returns:
        float: x with gumbel_cdf(x) = p
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {p}")
    low, high = _QUANTILE_BRACKET
    return float(bisect(lambda x: gumbel_cdf(x) - p, low, high, xtol=xtol, maxiter=200))
