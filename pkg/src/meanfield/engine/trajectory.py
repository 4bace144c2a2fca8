"""CSV export of stored trajectories."""

from pathlib import Path

from ..utils.helpers import write_csv_file
from .models import Trajectory


def write_trajectory_csv(path: Path, trajectory: Trajectory) -> Path:
    """
    Write one row per stored step: t, tau_N, then the N positions.

    Args:
        path: Output file
        trajectory: Recorded trajectory

    Returns:
        Path: The written file
    """
    particle_count = trajectory.positions[0].size if trajectory.positions else 0
    header = ["t", "tau_N"] + [f"x{i}" for i in range(1, particle_count + 1)]
    rows = (
        [t, tau] + positions.tolist()
        for t, tau, positions in zip(trajectory.times, trajectory.taus, trajectory.positions)
    )
    return write_csv_file(path, header, rows)
