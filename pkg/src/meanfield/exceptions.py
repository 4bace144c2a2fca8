"""Custom exceptions for meanfield.

This module defines a hierarchy of custom exceptions for better
error handling and debugging throughout the library.
"""

from typing import Optional


class MeanfieldError(Exception):
    """Base exception for all meanfield errors."""

    pass


class ConfigurationError(MeanfieldError):
    """Raised when a run configuration is invalid or cannot be loaded."""

    def __init__(self, field: str, reason: str, line: Optional[int] = None):
        self.field = field
        self.reason = reason
        self.line = line
        location = f"line {line}, " if line is not None else ""
        message = f"Invalid configuration ({location}field '{field}'): {reason}"
        super().__init__(message)


class ModelError(MeanfieldError):
    """Raised when a model cannot be constructed or resolved."""

    pass


class EmptyEnsembleError(MeanfieldError):
    """Raised when a statistic is requested over zero particles."""

    def __init__(self):
        super().__init__("empty ensemble")


class CoefficientBlowUpError(MeanfieldError):
    """Raised when a drift or diffusion evaluation is not finite."""

    def __init__(self, t: float, value: float, quantity: str = "coefficient"):
        self.t = t
        self.value = value
        self.quantity = quantity
        super().__init__(f"coefficient blow-up at t={t:.6g}: {quantity} = {value!r}")


class SimulationError(MeanfieldError):
    """Raised when time stepping fails; carries the failing step index."""

    def __init__(self, step: int, cause: Exception):
        self.step = step
        self.cause = cause
        super().__init__(f"Simulation failed at step {step}: {cause}")


class ReplicationError(MeanfieldError):
    """Raised when one replication of an experiment fails."""

    def __init__(self, particle_count: int, replication: int, cause: Exception):
        self.particle_count = particle_count
        self.replication = replication
        self.cause = cause
        super().__init__(f"Replication {replication} at N={particle_count} failed: {cause}")


class LimitLawUnavailableError(MeanfieldError):
    """Raised when no closed-form or ODE limit law exists for a model."""

    def __init__(self, class_tag: str):
        self.class_tag = class_tag
        super().__init__(f"no limit law available for model class {class_tag}")


class TimeOutOfRangeError(MeanfieldError):
    """Raised when a time (or clock value) falls outside a law's grid."""

    def __init__(self, value: float, lower: float, upper: float):
        self.value = value
        self.lower = lower
        self.upper = upper
        super().__init__(f"time out of range: {value!r} not in [{lower!r}, {upper!r}]")


class NormalizerError(MeanfieldError):
    """Raised when the Gumbel normalizing constants are undefined."""

    def __init__(self, particle_count: int):
        self.particle_count = particle_count
        super().__init__(
            f"normalizer undefined: radicand nonpositive for N={particle_count} (need N >= 5)"
        )


class VerificationError(MeanfieldError):
    """Raised when a verification suite does not meet its pass criteria."""

    def __init__(self, suite: str, reason: str):
        self.suite = suite
        self.reason = reason
        super().__init__(f"Verification suite '{suite}' failed: {reason}")
