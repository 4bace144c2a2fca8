"""Configuration management for meanfield."""

from .manager import ConfigManager, load_run_config
from .models import MeanfieldSettings, ModelBlock, RunConfig
from .validator import ConfigValidator

__all__ = [
    "ConfigManager",
    "ConfigValidator",
    "MeanfieldSettings",
    "ModelBlock",
    "RunConfig",
    "load_run_config",
]
