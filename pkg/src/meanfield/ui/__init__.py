"""Terminal user interface helpers."""

from .display import Display, format_cell

__all__ = ["Display", "format_cell"]
