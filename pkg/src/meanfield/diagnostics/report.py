"""PIT histograms, Kolmogorov-Smirnov scores and report files."""

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from ..extremes.gumbel import gumbel_quantile
from ..extremes.normalizers import NormalizingConstants
from ..utils.constants import (
    DEFAULT_BIN_WIDTH,
    KS_CRIT_COEFF_1,
    KS_CRIT_COEFF_5,
    REPORT_SCHEMA_VERSION,
)
from ..utils.helpers import write_csv_file, write_json_file
from .plan import MaximaSample

HISTOGRAM_COLUMNS = ("bin_lo", "bin_hi", "count")
SUMMARY_COLUMNS = ("replay", "N", "R", "ks", "ks_crit_5", "ks_crit_1", "p_value")


@dataclass(frozen=True)
class ErrorBudget:
    """Discretization bound and worst-case per-bin LLN bound."""

    discretization: float
    lln_per_bin: float


@dataclass
class HistogramReport:
    """Uniformity summary of one sample of PIT values."""

    bin_width: float
    counts: List[int]
    ks_statistic: float
    ks_critical_5: float
    ks_critical_1: float
    ks_p_value: float
    replications: int
    error_budget: ErrorBudget
    particle_count: Optional[int] = None
    mode: Optional[str] = None
    edges: List[float] = field(default_factory=list)
    gumbel_edges: List[float] = field(default_factory=list)
    maximum_edges: Optional[List[float]] = None

    def __post_init__(self):
        if sum(self.counts) != self.replications:
            raise ValueError(
                f"bin counts sum to {sum(self.counts)}, expected {self.replications}"
            )
        if not self.edges:
            bins = len(self.counts)
            self.edges = [k / bins for k in range(bins + 1)]

    @property
    def bin_count(self) -> int:
        """Number of bins, 1 / bin_width."""
        return len(self.counts)

    @property
    def expected_per_bin(self) -> float:
        """R * bin_width, the count of a perfectly uniform sample."""
        return self.replications * self.bin_width

    def rejects_at_5(self) -> bool:
        """Whether D exceeds the asymptotic 5% critical value."""
        return self.ks_statistic > self.ks_critical_5

    def rejects_at_1(self) -> bool:
        """Whether D exceeds the asymptotic 1% critical value."""
        return self.ks_statistic > self.ks_critical_1

    def histogram_rows(self):
        """Iterate (bin_lo, bin_hi, count)."""
        for k, count in enumerate(self.counts):
            yield self.edges[k], self.edges[k + 1], count

    def to_dict(self) -> Dict[str, Any]:
        """Plain-Python view for JSON output."""
        data = asdict(self)
        data["expected_per_bin"] = self.expected_per_bin
        data["rejects_at_5"] = self.rejects_at_5()
        data["rejects_at_1"] = self.rejects_at_1()
        return data


def _bin_count(bin_width: float) -> int:
    if not 0 < bin_width <= 1:
        raise ValueError(f"bin width must lie in (0, 1], got {bin_width}")
    bins = int(round(1.0 / bin_width))
    if abs(bins * bin_width - 1.0) > 1e-9:
        raise ValueError(f"bin width {bin_width} does not divide 1 evenly")
    return bins


def histogram_counts(pit: Sequence[float], bin_width: float = DEFAULT_BIN_WIDTH) -> List[int]:
    """
    Counts over half-open bins [k w, (k + 1) w); the last bin is closed.

    Args:
        pit: Values in [0, 1]
        bin_width: Bin width w dividing 1

    Returns:
        List[int]: 1 / w counts
    """
    bins = _bin_count(bin_width)
    values = np.asarray(pit, dtype=float)
    index = np.clip(np.floor(values * bins).astype(int), 0, bins - 1)
    return [int(c) for c in np.bincount(index, minlength=bins)]


def ks_statistic(pit: Sequence[float]) -> float:
    """
    One-sample KS distance to the uniform law.

    D = max_i max(i / R - U_(i), U_(i) - (i - 1) / R) over the sorted sample.
    """
    values = np.sort(np.asarray(pit, dtype=float))
    size = values.size
    if size == 0:
        raise ValueError("KS statistic needs at least one value")
    ranks = np.arange(1, size + 1, dtype=float)
    upper = np.max(ranks / size - values)
    lower = np.max(values - (ranks - 1.0) / size)
    return float(max(upper, lower))


def ks_critical_values(replications: int):
    """Asymptotic (5%, 1%) critical values of D."""
    root = math.sqrt(replications)
    return KS_CRIT_COEFF_5 / root, KS_CRIT_COEFF_1 / root


def ks_p_value(statistic: float, replications: int) -> float:
    """Exact finite-R Kolmogorov survival probability of D."""
    return float(stats.kstwo.sf(statistic, replications))


def error_budget(dt: float, particle_count: int, replications: int) -> ErrorBudget:
    """
    Discretization bound sqrt(dt) * sqrt(2 ln N) and LLN bound 0.5 / sqrt(R).

    Args:
        dt: Time step (0 for exact sampling)
        particle_count: N (>= 1)
        replications: R (>= 1)

    Returns:
        ErrorBudget
    """
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    if particle_count < 1 or replications < 1:
        raise ValueError("N and R must be >= 1")
    return ErrorBudget(
        discretization=math.sqrt(dt) * math.sqrt(2.0 * math.log(particle_count)),
        lln_per_bin=0.5 / math.sqrt(replications),
    )


def bin_edges_in_gumbel_scale(
    bin_width: float, constants: Optional[NormalizingConstants] = None
) -> List[float]:
    """
    Interior PIT bin edges k w (k = 1..K-1) mapped back through the Gumbel quantile.

    The outer edges are -inf and +inf and are not listed. Without constants
    the edges are on the normalized scale M; with constants (a, b) they are
    on the scale of the raw maximum, b + a F^{-1}(k w).
    """
    bins = _bin_count(bin_width)
    edges = [gumbel_quantile(k / bins) for k in range(1, bins)]
    if constants is not None:
        edges = [constants.b + constants.a * edge for edge in edges]
    return edges


def uniformity_report(
    sample: MaximaSample, bin_width: float = DEFAULT_BIN_WIDTH, dt: Optional[float] = None
) -> HistogramReport:
    """
    Histogram and KS score of a sample's PIT values.

    Args:
        sample: Maxima sample (R >= 1)
        bin_width: Bin width dividing 1
        dt: Time step of the simulation; None for exact i.i.d. sampling

    Returns:
        HistogramReport
    """
    replications = sample.replications
    statistic = ks_statistic(sample.pit)
    critical_5, critical_1 = ks_critical_values(replications)
    return HistogramReport(
        bin_width=bin_width,
        counts=histogram_counts(sample.pit, bin_width),
        ks_statistic=statistic,
        ks_critical_5=critical_5,
        ks_critical_1=critical_1,
        ks_p_value=ks_p_value(statistic, replications),
        replications=replications,
        error_budget=error_budget(dt or 0.0, sample.particle_count, replications),
        particle_count=sample.particle_count,
        mode=sample.mode.value,
        gumbel_edges=bin_edges_in_gumbel_scale(bin_width),
        maximum_edges=(
            None
            if sample.constants is None
            else bin_edges_in_gumbel_scale(bin_width, sample.constants)
        ),
    )


def summary_row(report: HistogramReport, replay: int = 0) -> tuple:
    """One summary.csv row for a report."""
    return (
        replay,
        report.particle_count,
        report.replications,
        report.ks_statistic,
        report.ks_critical_5,
        report.ks_critical_1,
        report.ks_p_value,
    )


def write_report_json(
    path: Path,
    report: HistogramReport,
    sample: MaximaSample,
    context: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Full JSON report with schema version, histogram and normalizers.

    Args:
        path: Output file
        report: Uniformity report
        sample: The sample the report was built from
        context: Extra run metadata (experiment, model, seeds)

    Returns:
        Path: The written file
    """
    constants = None
    if sample.constants is not None:
        constants = {
            "a": sample.constants.a,
            "b": sample.constants.b,
            "source": sample.constants.source.value,
        }
    data = {
        "schema_version": REPORT_SCHEMA_VERSION,
        **(context or {}),
        "particle_count": sample.particle_count,
        "mode": sample.mode.value,
        "normalizers": constants,
        "report": report.to_dict(),
    }
    return write_json_file(path, data)


def write_histogram_csv(path: Path, report: HistogramReport) -> Path:
    """histogram.csv with columns bin_lo, bin_hi, count."""
    return write_csv_file(path, HISTOGRAM_COLUMNS, report.histogram_rows())


def write_maxima_csv(path: Path, sample: MaximaSample) -> Path:
    """maxima.csv with columns rep, seed, M, U and tau_N when recorded."""
    if sample.tau_n is None:
        header = ("rep", "seed", "M", "U")
        rows = (row[:4] for row in sample.rows())
    else:
        header = ("rep", "seed", "M", "U", "tau_N")
        rows = sample.rows()
    return write_csv_file(path, header, rows)


def write_summary_csv(path: Path, rows: Sequence[tuple]) -> Path:
    """summary.csv of KS scores across N and replays."""
    return write_csv_file(path, SUMMARY_COLUMNS, rows)
