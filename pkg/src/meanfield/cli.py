"""Main CLI entry point for meanfield."""

import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click
from pydantic import ValidationError

from .__version__ import __version__
from .config import ConfigManager, ConfigValidator, MeanfieldSettings, RunConfig
from .diagnostics import (
    ExperimentMode,
    ExperimentPlan,
    HistogramReport,
    MaximaSample,
    default_jobs,
    moment_bound_check,
    normalizer_ratio_study,
    run_experiment,
    strong_order_study,
    summary_row,
    tau_convergence_study,
    uniformity_report,
    write_chart_svg,
    write_histogram_csv,
    write_maxima_csv,
    write_report_json,
    write_summary_csv,
)
from .exceptions import ConfigurationError, MeanfieldError, ModelError, VerificationError
from .limitlaw import cached_limit_law, solve_limit_law, write_law_csv
from .models import build_model, tanh_vol
from .ui.display import Display
from .utils.constants import (
    APP_FULL_NAME,
    DEFAULT_BASE_SEED,
    DEFAULT_ODE_STEP,
    EXIT_CONFIG_ERROR,
    EXIT_CRITERIA_FAILED,
    EXIT_OK,
    EXIT_RUNTIME_ERROR,
    MOMENT_STUDY_SIZES,
    PROFILE_STEPS,
    RATIO_STUDY_SIZES,
    RATIO_THRESHOLD,
    STRONG_ORDER_RATIO_BAND,
    TAU_SLOPE_BAND,
    TAU_STUDY_SIZES,
)
from .utils.logging import get_logger, setup_logging

VERIFY_SUITES = ("tau", "moments", "ratio", "strong-order")
SUMMARY_HEADER = ["replay", "N", "R", "KS", "crit 5%", "crit 1%", "p-value"]


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging")
@click.option(
    "--log-format",
    type=click.Choice(["text", "json"]),
    default=None,
    help="Log record format (default: MEANFIELD_LOG_FORMAT or text)",
)
@click.version_option(__version__, prog_name="meanfield")
@click.pass_context
def main(ctx, verbose, log_format):
    """meanfield - Mean-field maxima Monte Carlo

    Simulates interacting particle systems, normalizes their maxima with
    Gumbel constants and checks the result for uniformity.
    """
    display = Display()
    try:
        settings = MeanfieldSettings()
    except ValidationError as e:
        error = ConfigValidator.from_validation_error(e)
        display.error(f"Invalid MEANFIELD_* environment: {error}")
        sys.exit(EXIT_CONFIG_ERROR)

    log_options = {
        "log_level": settings.log_level,
        "verbose": verbose,
        "log_format": log_format or settings.log_format,
    }
    setup_logging(log_dir=settings.log_dir, **log_options)

    ctx.ensure_object(dict)
    ctx.obj["settings"] = settings
    ctx.obj["display"] = display
    ctx.obj["log_options"] = log_options
    ctx.obj["logger"] = get_logger("CLI")


def _load_run(
    config_path: Path, settings: MeanfieldSettings, profile: Optional[str]
) -> Tuple[RunConfig, List[ExperimentPlan]]:
    manager = ConfigManager(config_path, settings)
    config = manager.load()
    if profile:
        config = config.with_profile(profile)
    try:
        plans = [config.plan(replay) for replay in range(config.replays)]
    except ValidationError as e:
        raise ConfigValidator.from_validation_error(e, manager.lines) from e
    return config, plans


def _artifact_dir(root: Path, config: RunConfig, replay: int, particle_count: int) -> Path:
    target = root
    if config.replays > 1:
        target = target / f"replay{replay}"
    if len(config.particle_counts) > 1:
        target = target / f"N{particle_count}"
    return target


def _write_artifacts(
    target: Path,
    config: RunConfig,
    plan: ExperimentPlan,
    sample: MaximaSample,
) -> HistogramReport:
    dt = None if plan.mode is ExperimentMode.IID_LIMIT else plan.dt
    report = uniformity_report(sample, config.bin_width, dt)
    context: Dict[str, Any] = {
        "experiment": config.experiment,
        "model": {"id": config.model.id, "params": dict(config.model.params)},
        "base_seed": plan.base_seed,
        "replay": plan.replay,
        "replications": plan.replications,
        "dt": dt,
        "t_star": plan.t_star,
        "rng_algorithm": plan.rng_algorithm,
        "unit_normalizers": plan.unit_normalizers,
    }
    write_maxima_csv(target / "maxima.csv", sample)
    write_histogram_csv(target / "histogram.csv", report)
    write_report_json(target / "report.json", report, sample, context)
    title = f"{config.experiment}: N={sample.particle_count}, R={sample.replications}"
    write_chart_svg(target / "chart.svg", report, title)
    return report


def _uniformity_verdict(report: HistogramReport, replay: int) -> Tuple[bool, str]:
    label = f"replay {replay}, N={report.particle_count}"
    if report.rejects_at_1():
        return False, f"{label}: uniformity rejected at 1%"
    if report.rejects_at_5():
        return False, f"{label}: uniformity rejected at 5%"
    return True, f"{label}: uniformity not rejected at 5%"


@main.command()
@click.option(
    "--config", "-c", "config_path", required=True, type=click.Path(path_type=Path),
    help="Experiment config file (.cfg/.ini or .yaml)",
)
@click.option(
    "--jobs", "-j", type=click.IntRange(min=1), help="Worker processes (default: all CPUs)"
)
@click.option(
    "--profile",
    type=click.Choice(sorted(PROFILE_STEPS)),
    help="Force the profile's time step over the file's dt",
)
@click.option("--out", "-o", type=click.Path(path_type=Path), help="Output directory")
@click.pass_context
def run(ctx, config_path, jobs, profile, out):
    """Run a replicated maxima experiment and write its artifacts."""
    display: Display = ctx.obj["display"]
    settings: MeanfieldSettings = ctx.obj["settings"]
    logger = ctx.obj["logger"]

    try:
        config, plans = _load_run(config_path, settings, profile)
    except ConfigurationError as e:
        display.error(str(e))
        sys.exit(EXIT_CONFIG_ERROR)

    if config.log_dir is not None and settings.log_dir is None:
        setup_logging(log_dir=config.log_dir, **ctx.obj["log_options"])

    out_dir = out or config.output_dir or Path("results") / config.experiment
    workers = jobs or config.jobs or settings.jobs or default_jobs()
    display.heading(f"{APP_FULL_NAME}: {config.experiment}")
    display.key_value("model", config.model.id)
    display.key_value("mode", config.mode.value)
    exact = config.mode is ExperimentMode.IID_LIMIT
    display.key_value("dt", "exact" if exact else config.resolved_dt)
    display.key_value("workers", workers)

    summary: List[tuple] = []
    verdicts: List[Tuple[bool, str]] = []
    try:
        for plan in plans:
            total = len(plan.particle_counts) * plan.replications
            with display.progress_bar() as progress:
                task = progress.add_task(f"replay {plan.replay}", total=total)
                samples = run_experiment(
                    plan, jobs=workers, progress=lambda n: progress.advance(task, n)
                )
            for count, sample in samples.items():
                target = _artifact_dir(out_dir, config, plan.replay, count)
                report = _write_artifacts(target, config, plan, sample)
                summary.append(summary_row(report, plan.replay))
                verdicts.append(_uniformity_verdict(report, plan.replay))
                logger.info(f"Wrote artifacts for N={count} to {target}")

        if config.export_law:
            model = build_model(config.model.id, config.model.params)
            law = cached_limit_law(
                model, config.resolved_horizon, config.law_step, config.hermite_order
            )
            write_law_csv(out_dir / "law.csv", law)
        if len(summary) > 1:
            write_summary_csv(out_dir / "summary.csv", summary)
    except (MeanfieldError, OSError) as e:
        logger.error(f"Run failed: {e}")
        display.error(str(e))
        sys.exit(EXIT_RUNTIME_ERROR)

    display.table(title="Uniformity of U = F(M)", columns=SUMMARY_HEADER, rows=summary)
    for passed, message in verdicts:
        display.verdict(passed, message)
    display.success(f"Artifacts written to {out_dir}")
    sys.exit(EXIT_OK)


def _parse_params(pairs: Sequence[str]) -> Dict[str, str]:
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError("param", f"expected key=value, got '{pair}'")
        params[key.strip()] = value.strip()
    return params


@main.command()
@click.argument("model_id")
@click.option("--T", "horizon", type=float, default=1.0, show_default=True, help="Horizon T")
@click.option(
    "--h", "step", type=float, default=DEFAULT_ODE_STEP, show_default=True, help="ODE step"
)
@click.option(
    "--out", "-o", type=click.Path(path_type=Path), default=Path("law.csv"), show_default=True,
    help="Output CSV",
)
@click.option("--param", "-p", multiple=True, help="Model parameter as key=value (repeatable)")
@click.pass_context
def law(ctx, model_id, horizon, step, out, param):
    """Export the limit law (t, m, sigma2, tau) of a built-in model."""
    display: Display = ctx.obj["display"]

    try:
        if not (math.isfinite(horizon) and horizon >= 0):
            raise ConfigurationError("T", f"must be >= 0, got {horizon}")
        if not (math.isfinite(step) and step > 0):
            raise ConfigurationError("h", f"must be > 0, got {step}")
        model = build_model(model_id, _parse_params(param))
    except ModelError as e:
        display.error(str(e))
        sys.exit(EXIT_CONFIG_ERROR)
    except ConfigurationError as e:
        display.error(str(e))
        sys.exit(EXIT_CONFIG_ERROR)

    try:
        path = solve_limit_law(model, horizon, step)
    except MeanfieldError as e:
        display.error(str(e))
        sys.exit(EXIT_RUNTIME_ERROR)

    try:
        write_law_csv(out, path)
    except OSError as e:
        display.error(f"Cannot write {out}: {e}")
        sys.exit(EXIT_RUNTIME_ERROR)

    display.summary(
        {
            "rows": len(path.grid),
            "T": path.horizon,
            "m(T)": float(path.mean[-1]),
            "sigma2(T)": float(path.variance[-1]),
            "tau(T)": float(path.tau[-1]),
        },
        title=f"Limit law of {model.name}",
    )
    display.success(f"Law written to {out}")
    sys.exit(EXIT_OK)


def _parse_sizes(text: Optional[str], default: Sequence[int]) -> List[int]:
    if not text:
        return list(default)
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{text}'")


def _verify_tau(display, sizes, replications, seed, jobs) -> None:
    dt = PROFILE_STEPS["fast"]
    study = tau_convergence_study(
        tanh_vol(r0=1.0), _parse_sizes(sizes, TAU_STUDY_SIZES), replications or 200,
        t_star=1.0, dt=dt, base_seed=seed, jobs=jobs,
    )
    display.table(
        title=f"E|tau_N(1) - tau(1)|, tau(1) = {study.tau_limit:.6g}",
        columns=["N", "mean |error|", "stdev"],
        rows=[(r.particle_count, r.mean_abs_error, r.stdev) for r in study.rows],
    )
    display.key_value("log-log slope", "n/a" if study.slope is None else study.slope)
    if not study.passes():
        raise VerificationError("tau", f"slope outside {list(TAU_SLOPE_BAND)}")


def _verify_moments(display, sizes, replications, seed, jobs) -> None:
    counts = _parse_sizes(sizes, MOMENT_STUDY_SIZES)
    checks = [
        moment_bound_check(tanh_vol(r0=1.0), count, replications or 1000, base_seed=seed)
        for count in counts
    ]
    rows = [
        (check.particle_count, row.p, row.moment, row.standard_error, row.k_estimate, row.satisfied)
        for check in checks
        for row in check.rows
    ]
    display.table(
        title="Moments of the centred kernel mean",
        columns=["N", "p", "moment", "std err", "K_p", "within ref K"],
        rows=rows,
    )
    for check in checks:
        display.key_value(
            f"N={check.particle_count}",
            f"{check.message} (reference K {check.reference_k:.6g}, fitted K "
            f"{'n/a' if check.fitted_k is None else format(check.fitted_k, '.6g')})",
        )
    failed = [check.particle_count for check in checks if not check.passed]
    if failed:
        raise VerificationError("moments", f"p = 1 bound fails for N={failed}")


def _verify_ratio(display, sizes, replications, seed, jobs) -> None:
    study = normalizer_ratio_study(
        tanh_vol(r0=1.0), _parse_sizes(sizes, RATIO_STUDY_SIZES), replications or 200,
        t_star=1.0, dt=PROFILE_STEPS["fast"], base_seed=seed, jobs=jobs,
    )
    display.table(
        title="Stochastic vs deterministic normalizers",
        columns=["N", "mean |a_s/a_d - 1|", "mean |b_s - b_d|/a_d"],
        rows=[(r.particle_count, r.a_discrepancy, r.b_discrepancy) for r in study.rows],
    )
    if not study.passes():
        raise VerificationError(
            "ratio", f"discrepancies not decreasing or a-gap >= {RATIO_THRESHOLD} at largest N"
        )


def _verify_strong_order(display, sizes, replications, seed, jobs) -> None:
    study = strong_order_study(paths=replications or 1000, seed=seed)
    ratios = [math.nan] + study.ratios
    display.table(
        title="Euler-Maruyama strong error on geometric Brownian motion",
        columns=["dt", "RMS error", "ratio"],
        rows=[(r.dt, r.rms_error, ratio) for r, ratio in zip(study.rows, ratios)],
    )
    display.key_value("mean ratio", study.mean_ratio)
    if not study.passes():
        raise VerificationError(
            "strong-order", f"mean ratio outside {list(STRONG_ORDER_RATIO_BAND)}"
        )


_SUITES = {
    "tau": _verify_tau,
    "moments": _verify_moments,
    "ratio": _verify_ratio,
    "strong-order": _verify_strong_order,
}


@main.command()
@click.argument("suite", type=click.Choice(VERIFY_SUITES))
@click.option(
    "--jobs", "-j", type=click.IntRange(min=1), help="Worker processes (default: all CPUs)"
)
@click.option(
    "--replications", "-R", type=click.IntRange(min=1), help="Override R (paths for strong-order)"
)
@click.option("--sizes", help="Override the N list, e.g. 50,200,800")
@click.pass_context
def verify(ctx, suite, jobs, replications, sizes):
    """Run a convergence study with the fast profile; exit 1 if it fails."""
    display: Display = ctx.obj["display"]
    settings: MeanfieldSettings = ctx.obj["settings"]
    seed = settings.seed if settings.seed is not None else DEFAULT_BASE_SEED
    workers = jobs or settings.jobs or default_jobs()

    display.heading(f"Verification suite: {suite}")
    try:
        _SUITES[suite](display, sizes, replications, seed, workers)
    except VerificationError as e:
        display.error(str(e))
        sys.exit(EXIT_CRITERIA_FAILED)
    except MeanfieldError as e:
        display.error(str(e))
        sys.exit(EXIT_RUNTIME_ERROR)

    display.success(f"{suite}: criteria hold")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
