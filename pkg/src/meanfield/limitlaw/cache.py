"""Memoised limit-law solutions shared by experiments and studies."""

from typing import Hashable, Tuple

from cachetools import LRUCache

from ..models.base import ModelSpec
from ..utils.constants import DEFAULT_HERMITE_ORDER, DEFAULT_ODE_STEP, LAW_CACHE_SIZE
from ..utils.logging import get_logger
from .solver import LimitLawPath, solve_limit_law

logger = get_logger(__name__)

_LAW_CACHE: LRUCache = LRUCache(maxsize=LAW_CACHE_SIZE)


def _cache_key(model: ModelSpec, horizon: float, h: float, order: int) -> Tuple[Hashable, ...]:
    return (model.name, model.class_tag, model.parameters, float(horizon), float(h), int(order))


def cached_limit_law(
    model: ModelSpec,
    horizon: float,
    h: float = DEFAULT_ODE_STEP,
    hermite_order: int = DEFAULT_HERMITE_ORDER,
) -> LimitLawPath:
    """
    Solve a law once per (model, T, h, order).

    Models without construction parameters are not cached since their name
    alone does not identify their coefficients.
    """
    if not model.parameters:
        return solve_limit_law(model, horizon, h, hermite_order)

    key = _cache_key(model, horizon, h, hermite_order)
    law = _LAW_CACHE.get(key)
    if law is None:
        law = solve_limit_law(model, horizon, h, hermite_order)
        _LAW_CACHE[key] = law
    else:
        logger.debug(f"Limit law cache hit for {model.name} (T={horizon}, h={h})")
    return law


def clear_law_cache() -> None:
    """Drop every memoised law."""
    _LAW_CACHE.clear()
