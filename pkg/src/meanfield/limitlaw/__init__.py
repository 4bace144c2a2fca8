"""McKean-Vlasov limit laws and time changes."""

from .cache import cached_limit_law, clear_law_cache
from .export import LAW_COLUMNS, write_law_csv
from .quadrature import (
    gaussian_expectation,
    hermite_discrepancy,
    hermite_is_converged,
    hermite_rule,
)
from .solver import (
    LimitLawPath,
    clock_horizon,
    solve_limit_law,
    tau_inverse,
    tau_of,
    y_law,
)

__all__ = [
    "LAW_COLUMNS",
    "LimitLawPath",
    "cached_limit_law",
    "clear_law_cache",
    "clock_horizon",
    "gaussian_expectation",
    "hermite_discrepancy",
    "hermite_is_converged",
    "hermite_rule",
    "solve_limit_law",
    "tau_inverse",
    "tau_of",
    "write_law_csv",
    "y_law",
]
