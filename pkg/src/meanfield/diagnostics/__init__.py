"""Replicated experiments, uniformity reports and convergence studies."""

from .chart import render_histogram_svg, write_chart_svg
from .experiment import (
    ReplicationOutcome,
    ReplicationRunner,
    ReplicationTask,
    default_jobs,
    plan_tasks,
    run_experiment,
    run_replications,
)
from .plan import ExperimentMode, ExperimentPlan, MaximaSample
from .report import (
    ErrorBudget,
    HistogramReport,
    bin_edges_in_gumbel_scale,
    error_budget,
    histogram_counts,
    ks_critical_values,
    ks_p_value,
    ks_statistic,
    summary_row,
    uniformity_report,
    write_histogram_csv,
    write_maxima_csv,
    write_report_json,
    write_summary_csv,
)
from .studies import (
    MomentBoundCheck,
    NormalizerRatioStudy,
    StrongOrderStudy,
    TauConvergenceStudy,
    moment_bound_check,
    normalizer_ratio_study,
    strong_order_study,
    tau_convergence_study,
)

__all__ = [
    "ErrorBudget",
    "ExperimentMode",
    "ExperimentPlan",
    "HistogramReport",
    "MaximaSample",
    "MomentBoundCheck",
    "NormalizerRatioStudy",
    "ReplicationOutcome",
    "ReplicationRunner",
    "ReplicationTask",
    "StrongOrderStudy",
    "TauConvergenceStudy",
    "default_jobs",
    "bin_edges_in_gumbel_scale",
    "error_budget",
    "histogram_counts",
    "ks_critical_values",
    "ks_p_value",
    "ks_statistic",
    "moment_bound_check",
    "plan_tasks",
    "normalizer_ratio_study",
    "render_histogram_svg",
    "run_experiment",
    "run_replications",
    "strong_order_study",
    "summary_row",
    "tau_convergence_study",
    "uniformity_report",
    "write_chart_svg",
    "write_histogram_csv",
    "write_maxima_csv",
    "write_report_json",
    "write_summary_csv",
]
