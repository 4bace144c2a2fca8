"""Configuration loading for meanfield runs."""

import configparser
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml
from pydantic import ValidationError

from ..exceptions import ConfigurationError
from ..utils.logging import LoggerMixin
from .models import MeanfieldSettings, RunConfig
from .validator import ConfigValidator

EXPERIMENT_SECTION = "experiment"
MODEL_SECTION = "model"
YAML_SUFFIXES = {".yaml", ".yml"}


class ConfigManager(LoggerMixin):
    """Reads, merges and validates one run configuration file."""

    def __init__(self, config_path: Path, settings: Optional[MeanfieldSettings] = None):
        """
        Initialize configuration manager.

        Args:
            config_path: INI (.cfg/.ini) or YAML file
            settings: Environment settings (read from MEANFIELD_* when omitted)
        """
        self.config_path = Path(config_path)
        self.settings = settings if settings is not None else MeanfieldSettings()
        self.validator = ConfigValidator()
        self.lines: Dict[Tuple[str, str], int] = {}

    def load(self) -> RunConfig:
        """
        Load and validate the configuration.

        MEANFIELD_SEED, when set, replaces the file's base seed.

        Returns:
            RunConfig: Validated configuration

        Raises:
            ConfigurationError: On unreadable, malformed or invalid files
        """
        if not self.config_path.is_file():
            raise ConfigurationError("config", f"file not found: {self.config_path}")

        text = self.config_path.read_text(encoding="utf-8")
        if self.config_path.suffix.lower() in YAML_SUFFIXES:
            raw = self._parse_yaml(text)
            self.lines = self.validator.index_yaml_lines(text)
        else:
            raw = self._parse_ini(text)
            self.lines = self.validator.index_ini_lines(text)

        data = self._flatten(raw)
        if self.settings.seed is not None:
            self.logger.info(f"Base seed overridden by environment: {self.settings.seed}")
            data["seed"] = self.settings.seed

        try:
            config = RunConfig.model_validate(data)
        except ValidationError as e:
            raise self.validator.from_validation_error(e, self.lines) from e

        self.logger.info(f"Configuration loaded from {self.config_path}")
        return config

    def _parse_ini(self, text: str) -> Dict[str, Dict[str, Any]]:
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        parser.optionxform = str
        try:
            parser.read_string(text, source=str(self.config_path))
        except configparser.MissingSectionHeaderError as e:
            raise ConfigurationError("config", "key outside a section", e.lineno) from e
        except configparser.ParsingError as e:
            errors = getattr(e, "errors", None)
            line = errors[0][0] if errors else None
            raise ConfigurationError("config", "malformed line", line) from e
        except configparser.DuplicateOptionError as e:
            raise ConfigurationError(e.option, "duplicate key", e.lineno) from e
        except configparser.Error as e:
            reason = str(e).splitlines()[0]
            raise ConfigurationError("config", reason, getattr(e, "lineno", None)) from e
        return {section: dict(parser.items(section)) for section in parser.sections()}

    def _parse_yaml(self, text: str) -> Dict[str, Dict[str, Any]]:
        try:
            raw = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            line = mark.line + 1 if mark is not None else None
            raise ConfigurationError("config", "malformed YAML", line) from e
        if not isinstance(raw, dict):
            raise ConfigurationError("config", "top level must be a mapping")
        for section, values in raw.items():
            if not isinstance(values, dict):
                raise ConfigurationError(str(section), "section must be a mapping")
        return raw

    def _flatten(self, raw: Dict[str, Dict[str, Any]]) -> Dict[str, Any]:
        unknown = set(raw) - {EXPERIMENT_SECTION, MODEL_SECTION}
        if unknown:
            section = sorted(unknown)[0]
            raise ConfigurationError(
                section, "unknown section", self.lines.get((section.lower(), ""))
            )
        if EXPERIMENT_SECTION not in raw:
            raise ConfigurationError(EXPERIMENT_SECTION, "section missing")
        if MODEL_SECTION not in raw:
            raise ConfigurationError(MODEL_SECTION, "section missing")

        data = {_normalize_key(key): value for key, value in raw[EXPERIMENT_SECTION].items()}
        model = dict(raw[MODEL_SECTION])
        model_id = model.pop("id", None)
        data["model"] = {"params": model}
        if model_id is not None:
            data["model"]["id"] = model_id
        return data


def _normalize_key(key: str) -> str:
    return "t_star" if key in ("t*", "tstar") else key


def load_run_config(path: Path, settings: Optional[MeanfieldSettings] = None) -> RunConfig:
    """Load a run configuration file."""
    return ConfigManager(path, settings).load()
