"""CSV export of solved limit laws."""

from pathlib import Path

from ..utils.helpers import write_csv_file
from .solver import LimitLawPath

LAW_COLUMNS = ("t", "m", "sigma2", "tau")


def write_law_csv(path: Path, law: LimitLawPath) -> Path:
    """
    Write the law with columns t, m, sigma2, tau.

    Args:
        path: Output file
        law: Solved law

    Returns:
        Path: The written file
    """
    return write_csv_file(path, LAW_COLUMNS, law.rows())
