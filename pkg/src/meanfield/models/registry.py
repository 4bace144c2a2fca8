"""Name-based construction of the built-in models."""

from typing import Any, Callable, Dict, List, Mapping, Optional

from ..exceptions import ModelError
from ..utils.logging import get_logger
from .base import ModelSpec
from .builtin import bank, hybrid_bank, tanh_profile_vol, tanh_vol

logger = get_logger(__name__)

# String-valued parameters; every other parameter is coerced to float
_TEXT_PARAMETERS = {"kernel"}


class ModelRegistry:
    """Registry mapping configuration identifiers to model builders."""

    BUILDERS: Dict[str, Callable[..., ModelSpec]] = {
        "tanh_vol": tanh_vol,
        "bank": bank,
        "hybrid_bank": hybrid_bank,
        "gaussian_const_vol": tanh_profile_vol,
    }

    @classmethod
    def build(cls, model_id: str, params: Optional[Mapping[str, Any]] = None) -> ModelSpec:
        """Build a model from its identifier and parameters.

        Args:
            model_id: One of the registered identifiers
            params: Keyword parameters for the builder

        Returns:
            ModelSpec: The constructed model

        Raises:
            ModelError: On unknown identifiers or parameters
        """
        builder = cls.BUILDERS.get(model_id)
        if builder is None:
            raise ModelError(
                f"Unknown model '{model_id}'. Supported: {', '.join(cls.list_supported())}"
            )

        kwargs = {key: cls._coerce(key, value) for key, value in (params or {}).items()}
        try:
            model = builder(**kwargs)
        except TypeError as e:
            raise ModelError(f"Invalid parameters for model '{model_id}': {e}") from e

        logger.debug(f"Built model {model_id} with {kwargs}")
        return model

    @classmethod
    def list_supported(cls) -> List[str]:
        """List all registered model identifiers."""
        return sorted(cls.BUILDERS)

    @staticmethod
    def _coerce(key: str, value: Any) -> Any:
        if key in _TEXT_PARAMETERS:
            return str(value)
        try:
            return float(value)
        except (TypeError, ValueError) as e:
            raise ModelError(f"Parameter '{key}' must be numeric, got {value!r}") from e


def build_model(model_id: str, params: Optional[Mapping[str, Any]] = None) -> ModelSpec:
    """Convenience function to build a registered model."""
    return ModelRegistry.build(model_id, params)
