"""Terminal output for meanfield using Rich."""

from typing import Any, Dict, Optional, Sequence

from rich import box
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from ..utils.constants import (
    COLOR_ERROR,
    COLOR_HEADING,
    COLOR_INFO,
    COLOR_SUCCESS,
    COLOR_WARNING,
    SYMBOL_FAIL,
    SYMBOL_PASS,
    SYMBOL_WARNING,
)
from ..utils.helpers import format_value


def format_cell(value: Any, digits: int = 6) -> str:
    """Compact table cell: floats to ``digits`` significant figures."""
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    if isinstance(value, bool):
        return SYMBOL_PASS if value else SYMBOL_FAIL
    return format_value(value)


class Display:
    """Handles terminal display formatting using Rich."""

    def __init__(self, console: Optional[Console] = None, quiet: bool = False):
        """
        Initialize display handler.

        Args:
            console: Console to print to (stdout by default)
            quiet: Suppress progress bars
        """
        self.console = console or Console()
        self.quiet = quiet

    def success(self, message: str) -> None:
        """Print success message."""
        self.console.print(f"{SYMBOL_PASS} {message}", style=COLOR_SUCCESS)

    def error(self, message: str) -> None:
        """Print error message."""
        self.console.print(f"{SYMBOL_FAIL} {message}", style=COLOR_ERROR)

    def warning(self, message: str) -> None:
        """Print warning message."""
        self.console.print(f"{SYMBOL_WARNING} {message}", style=COLOR_WARNING)

    def info(self, message: str) -> None:
        """Print info message."""
        self.console.print(f"ℹ {message}", style=COLOR_INFO)

    def heading(self, text: str, style: str = COLOR_HEADING) -> None:
        """Print heading."""
        self.console.print(f"\n{text}", style=style)

    def table(
        self,
        title: Optional[str] = None,
        columns: Optional[Sequence[str]] = None,
        rows: Optional[Sequence[Sequence[Any]]] = None,
        show_header: bool = True,
    ) -> Table:
        """
        Create and display a table.

        Args:
            title: Table title
            columns: Column headers
            rows: Table rows; non-string cells are formatted with format_cell
            show_header: Whether to show header row

        Returns:
            Table: Rich Table object
        """
        table = Table(title=title, show_header=show_header, box=box.ROUNDED)

        for col in columns or ():
            table.add_column(col, style="cyan", justify="right")

        for row in rows or ():
            table.add_row(*(cell if isinstance(cell, str) else format_cell(cell) for cell in row))

        self.console.print(table)
        return table

    def key_value(
        self, key: str, value: Any, key_style: str = "cyan", value_style: Optional[str] = None
    ) -> None:
        """Display key-value pair."""
        self.console.print(f"  {key}: ", style=key_style, end="")
        self.console.print(format_cell(value), style=value_style)

    def summary(self, data: Dict[str, Any], title: str) -> None:
        """Heading followed by key-value lines."""
        self.heading(title)
        for key, value in data.items():
            self.key_value(key, value)

    def verdict(self, passed: bool, message: str) -> None:
        """Pass/fail line for a criterion."""
        if passed:
            self.success(message)
        else:
            self.error(message)

    def progress_bar(self) -> Progress:
        """
        Create a progress bar for replication counts.

        Returns:
            Progress: Rich Progress object (disabled when quiet)
        """
        return Progress(
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=self.console,
            disable=self.quiet,
            transient=True,
        )

