"""Turn validation failures into located configuration errors."""

import re
from typing import Dict, Optional, Tuple

from pydantic import ValidationError

from ..exceptions import ConfigurationError

_INI_SECTION = re.compile(r"^\s*\[([^\]]+)\]\s*$")
_INI_KEY = re.compile(r"^\s*([^#;=:\s][^=:]*?)\s*[=:]")
_YAML_KEY = re.compile(r"^(\s*)([A-Za-z_*][\w*]*)\s*:")


class ConfigValidator:
    """Locates keys in config text and formats validation errors."""

    @staticmethod
    def index_ini_lines(text: str) -> Dict[Tuple[str, str], int]:
        """
        Map (section, key) to its 1-based line in an INI document.

        Keys are lower-cased the way configparser stores them.
        """
        lines: Dict[Tuple[str, str], int] = {}
        section = ""
        for number, line in enumerate(text.splitlines(), 1):
            header = _INI_SECTION.match(line)
            if header:
                section = header.group(1).strip().lower()
                lines.setdefault((section, ""), number)
                continue
            key = _INI_KEY.match(line)
            if key:
                lines.setdefault((section, key.group(1).strip().lower()), number)
        return lines

    @staticmethod
    def index_yaml_lines(text: str) -> Dict[Tuple[str, str], int]:
        """Map (section, key) to its 1-based line in a two-level YAML mapping."""
        lines: Dict[Tuple[str, str], int] = {}
        section = ""
        for number, line in enumerate(text.splitlines(), 1):
            match = _YAML_KEY.match(line)
            if not match:
                continue
            indent, key = match.groups()
            if not indent:
                section = key.lower()
                lines.setdefault((section, ""), number)
            else:
                lines.setdefault((section, key.lower()), number)
        return lines

    @staticmethod
    def locate(
        lines: Dict[Tuple[str, str], int], field: str, default_section: str = "experiment"
    ) -> Optional[int]:
        """Line of a flattened field name such as "R" or "model.kappa"."""
        if "." in field:
            section, key = field.split(".", 1)
        else:
            section, key = default_section, field
        section, key = section.lower(), key.lower()
        if (section, key) in lines:
            return lines[(section, key)]
        return lines.get((key, ""))

    @classmethod
    def from_validation_error(
        cls, error: ValidationError, lines: Optional[Dict[Tuple[str, str], int]] = None
    ) -> ConfigurationError:
        """
        First pydantic error as a ConfigurationError naming field and line.

        Args:
            error: Raised by RunConfig validation
            lines: Key index of the source file

        Returns:
            ConfigurationError
        """
        first = error.errors()[0]
        location = [str(part) for part in first.get("loc", ()) if not isinstance(part, int)]
        field = ".".join(location) or "config"
        if location[:1] == ["model"]:
            key = location[-1] if len(location) > 1 else "id"
            line = cls.locate(lines or {}, f"model.{key}")
        else:
            line = cls.locate(lines or {}, location[0]) if location else None
        reason = first.get("msg", "invalid value")
        if first.get("type") == "missing":
            reason = "field required"
        return ConfigurationError(field, reason, line)
