"""Gauss-Hermite expectations under Gaussian laws."""

import math
from typing import Any, Callable, Tuple

import numpy as np
from cachetools import LRUCache, cached
from scipy.special import roots_hermitenorm

from ..utils.constants import (
    DEFAULT_HERMITE_ORDER,
    HERMITE_CHECK_ORDER,
    HERMITE_CHECK_TOLERANCE,
)
from ..utils.logging import get_logger

logger = get_logger(__name__)

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@cached(cache=LRUCache(maxsize=8))
def hermite_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Probabilists' Gauss-Hermite nodes and weights normalised to N(0, 1).

    Args:
        order: Number of nodes

    Returns:
        Tuple[ndarray, ndarray]: (nodes, weights) with weights summing to 1
    """
    nodes, weights = roots_hermitenorm(order)
    weights = weights / _SQRT_2PI
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gaussian_expectation(
    fn: Callable[[Any], Any], mean: float, variance: float, order: int = DEFAULT_HERMITE_ORDER
) -> float:
    """
    E[fn(X)] for X ~ N(mean, variance).

    Args:
        fn: Vectorised integrand
        mean: Gaussian mean
        variance: Gaussian variance (>= 0)
        order: Number of quadrature nodes

    Returns:
        float: Quadrature value (exact for polynomials of degree < 2 * order)
    """
    nodes, weights = hermite_rule(order)
    values = np.asarray(fn(mean + math.sqrt(variance) * nodes), dtype=float)
    return float(np.dot(weights, np.broadcast_to(values, nodes.shape)))


def hermite_discrepancy(
    fn: Callable[[Any], Any],
    mean: float,
    variance: float,
    order: int = DEFAULT_HERMITE_ORDER,
    check_order: int = HERMITE_CHECK_ORDER,
) -> float:
    """Absolute difference between two quadrature orders."""
    return abs(
        gaussian_expectation(fn, mean, variance, order)
        - gaussian_expectation(fn, mean, variance, check_order)
    )


def hermite_is_converged(
    fn: Callable[[Any], Any],
    mean: float,
    variance: float,
    order: int = DEFAULT_HERMITE_ORDER,
    tolerance: float = HERMITE_CHECK_TOLERANCE,
) -> bool:
    """Check ``order`` against the reference order on one Gaussian law."""
    gap = hermite_discrepancy(fn, mean, variance, order)
    if gap > tolerance:
        logger.warning(f"Gauss-Hermite order {order} differs from reference by {gap:.3e}")
        return False
    return True
