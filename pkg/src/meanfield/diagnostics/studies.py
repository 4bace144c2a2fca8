"""Convergence studies behind the extreme-value results.

Each study returns a small table plus a pass criterion so the CLI can print
it and turn it into an exit status.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..engine.models import ParticleEnsemble
from ..engine.rng import make_rng, replication_seed
from ..engine.simulator import em_step_with_increments, sample_iid_limit
from ..exceptions import LimitLawUnavailableError
from ..extremes.normalizers import normalizers, stochastic_normalizers
from ..limitlaw.cache import cached_limit_law
from ..limitlaw.quadrature import gaussian_expectation
from ..limitlaw.solver import LimitLawPath, clock_horizon, tau_of
from ..models.base import ClassTag, ModelSpec
from ..models.builtin import geometric_brownian_motion
from ..utils.constants import (
    DEFAULT_BASE_SEED,
    DEFAULT_HERMITE_ORDER,
    DEFAULT_ODE_STEP,
    DEFAULT_RNG_ALGORITHM,
    RATIO_THRESHOLD,
    STRONG_ORDER_RATIO_BAND,
    TAU_SLOPE_BAND,
)
from ..utils.helpers import log_log_slope
from ..utils.logging import get_logger
from .experiment import ReplicationRunner, ReplicationTask, run_replications
from .plan import ExperimentMode

logger = get_logger(__name__)

# Errors below this (relative to 1 + tau) are rounding, not Monte Carlo error
_EXACT_TOLERANCE = 1e-12
MAX_MOMENT_ORDER = 3


def _require_bounded_class(model: ModelSpec) -> None:
    if model.class_tag is not ClassTag.BOUNDED_GAUSSIAN:
        raise LimitLawUnavailableError(model.class_tag.value)


def _clock_samples(
    model: ModelSpec,
    law: LimitLawPath,
    particle_count: int,
    replications: int,
    t_star: float,
    dt: float,
    base_seed: int,
    jobs: Optional[int],
    rng_algorithm: str,
) -> np.ndarray:
    runner = ReplicationRunner(
        model, law, ExperimentMode.INTERACTING, t_star, dt, rng_algorithm
    )
    tasks = [
        ReplicationTask(particle_count, j, replication_seed(base_seed, particle_count, j))
        for j in range(replications)
    ]
    outcomes = run_replications(runner, tasks, jobs)
    return np.array([o.tau_n for o in outcomes], dtype=float)


@dataclass(frozen=True)
class TauStudyRow:
    """Monte Carlo error of the empirical clock for one N."""

    particle_count: int
    mean_abs_error: float
    stdev: float


@dataclass
class TauConvergenceStudy:
    """E|tau_N(t*) - tau(t*)| across N with its log-log slope."""

    tau_limit: float
    rows: List[TauStudyRow]
    slope: Optional[float] = None

    def passes(self, band: Tuple[float, float] = TAU_SLOPE_BAND) -> bool:
        """Slope inside the band (a study without a slope does not pass)."""
        return self.slope is not None and band[0] <= self.slope <= band[1]


def tau_convergence_study(
    model: ModelSpec,
    particle_counts: Sequence[int],
    replications: int,
    t_star: float = 1.0,
    dt: float = 1e-3,
    base_seed: int = DEFAULT_BASE_SEED,
    jobs: Optional[int] = 1,
    rng_algorithm: str = DEFAULT_RNG_ALGORITHM,
    hermite_order: int = DEFAULT_HERMITE_ORDER,
) -> TauConvergenceStudy:
    """
    Estimate E|tau_N(t*) - tau(t*)| per N and fit ln(error) against ln(N).

    The limit law is solved with step dt so the reference clock carries the
    same left-endpoint rule as the simulated one.

    Args:
        model: Bounded-class model
        particle_counts: N values
        replications: R per N
        t_star: Evaluation time
        dt: Simulation (and ODE) step
        base_seed: Seed for replication streams
        jobs: Worker count
        rng_algorithm: Bit generator name
        hermite_order: Quadrature order of the law

    Returns:
        TauConvergenceStudy: Table and slope (None for fewer than two N or
        when every error is at rounding level)
    """
    _require_bounded_class(model)
    law = cached_limit_law(model, t_star, dt, hermite_order)
    tau_limit = tau_of(law, t_star)
    logger.info(
        f"tau convergence study for {model.name}: N={list(particle_counts)}, "
        f"R={replications}, t*={t_star}, dt={dt}"
    )

    rows = []
    for count in particle_counts:
        taus = _clock_samples(
            model, law, count, replications, t_star, dt, base_seed, jobs, rng_algorithm
        )
        errors = np.abs(taus - tau_limit)
        rows.append(
            TauStudyRow(
                particle_count=count,
                mean_abs_error=float(np.mean(errors)),
                stdev=float(np.std(errors, ddof=1)) if errors.size > 1 else 0.0,
            )
        )

    slope = None
    floor = _EXACT_TOLERANCE * (1.0 + abs(tau_limit))
    if len(rows) >= 2 and all(row.mean_abs_error > floor for row in rows):
        slope = log_log_slope(
            [row.particle_count for row in rows], [row.mean_abs_error for row in rows]
        )
    return TauConvergenceStudy(tau_limit=tau_limit, rows=rows, slope=slope)


@dataclass(frozen=True)
class MomentRow:
    """Empirical 2p-th moment of the centred kernel mean."""

    p: int
    moment: float
    standard_error: float
    k_estimate: float
    satisfied: bool


@dataclass
class MomentBoundCheck:
    """Moment bounds E[d^(2p)] <= p! K^p / N^p over p = 1..p_max."""

    particle_count: int
    replications: int
    reference_k: float
    rows: List[MomentRow] = field(default_factory=list)
    fitted_k: Optional[float] = None
    passed: bool = False
    message: str = ""


def moment_bound_check(
    model: ModelSpec,
    particle_count: int,
    replications: int,
    t_star: float = 1.0,
    p_max: int = MAX_MOMENT_ORDER,
    base_seed: int = DEFAULT_BASE_SEED,
    rng_algorithm: str = DEFAULT_RNG_ALGORITHM,
    law_step: float = DEFAULT_ODE_STEP,
    hermite_order: int = DEFAULT_HERMITE_ORDER,
) -> MomentBoundCheck:
    """
    Check the moment bounds on R i.i.d. ensembles drawn from the limit law.

    d = mean g^sigma(X^i) - E g^sigma(X_t*). Each order yields
    K_p = N (mu_p / p!)^(1/p); the fitted K is the largest of them. Rows are
    flagged against the reference K = Var g^sigma(X_t*) and the check fails
    only when the p = 1 moment exceeds K / N by more than three standard
    errors.

    Args:
        model: Bounded-class model
        particle_count: N
        replications: R ensembles (at least 2 for a fit)
        t_star: Evaluation time
        p_max: Highest order, 1 to 3
        base_seed: Seed for ensemble streams
        rng_algorithm: Bit generator name
        law_step: ODE step of the law
        hermite_order: Quadrature order

    Returns:
        MomentBoundCheck
    """
    if not 1 <= p_max <= MAX_MOMENT_ORDER:
        raise ValueError(f"p_max must lie in [1, {MAX_MOMENT_ORDER}], got {p_max}")
    _require_bounded_class(model)

    law = cached_limit_law(model, t_star, law_step, hermite_order)
    mean, variance = law.mean_at(t_star), law.variance_at(t_star)
    kernel = model.kernel_diffusion
    target = law.kernel_mean_at(t_star)
    second = gaussian_expectation(
        lambda x: np.square(kernel(x)), mean, variance, hermite_order
    )
    reference_k = max(second - target * target, 0.0)

    check = MomentBoundCheck(
        particle_count=particle_count, replications=replications, reference_k=reference_k
    )
    if replications < 2:
        check.message = "insufficient replications"
        return check

    deviations = np.empty(replications)
    for j in range(replications):
        rng = make_rng(replication_seed(base_seed, particle_count, j), rng_algorithm)
        positions = sample_iid_limit(law, t_star, particle_count, rng)
        deviations[j] = np.mean(kernel(positions)) - target

    for p in range(1, p_max + 1):
        powers = deviations ** (2 * p)
        moment = float(np.mean(powers))
        standard_error = float(np.std(powers, ddof=1) / math.sqrt(replications))
        bound = math.factorial(p) * (reference_k / particle_count) ** p
        check.rows.append(
            MomentRow(
                p=p,
                moment=moment,
                standard_error=standard_error,
                k_estimate=particle_count * (moment / math.factorial(p)) ** (1.0 / p),
                satisfied=moment <= bound + 3.0 * standard_error,
            )
        )

    check.fitted_k = max(row.k_estimate for row in check.rows)
    check.passed = check.rows[0].satisfied
    check.message = "bound holds" if check.passed else "p = 1 bound exceeded"
    return check


@dataclass(frozen=True)
class RatioRow:
    """Mean discrepancy between stochastic and deterministic normalizers."""

    particle_count: int
    a_discrepancy: float
    b_discrepancy: float


@dataclass
class NormalizerRatioStudy:
    """Normalizer discrepancies across N."""

    rows: List[RatioRow]

    def decreasing(self) -> bool:
        """Both discrepancies strictly decrease as N grows."""
        ordered = sorted(self.rows, key=lambda row: row.particle_count)
        return all(
            later.a_discrepancy < earlier.a_discrepancy
            and later.b_discrepancy < earlier.b_discrepancy
            for earlier, later in zip(ordered, ordered[1:])
        )

    def passes(self, threshold: float = RATIO_THRESHOLD) -> bool:
        """Decreasing, and the a-discrepancy at the largest N below threshold."""
        if not self.rows:
            return False
        largest = max(self.rows, key=lambda row: row.particle_count)
        return self.decreasing() and largest.a_discrepancy < threshold


def normalizer_ratio_study(
    model: ModelSpec,
    particle_counts: Sequence[int],
    replications: int,
    t_star: float = 1.0,
    dt: float = 1e-3,
    base_seed: int = DEFAULT_BASE_SEED,
    jobs: Optional[int] = 1,
    use_limit_clock: bool = False,
    rng_algorithm: str = DEFAULT_RNG_ALGORITHM,
    hermite_order: int = DEFAULT_HERMITE_ORDER,
) -> NormalizerRatioStudy:
    """
    Mean |a_stoch / a_det - 1| and |(b_stoch - b_det) / a_det| per N.

    Args:
        model: Bounded-class model
        particle_counts: N values (each >= 5)
        replications: R per N
        t_star: Evaluation time
        dt: Simulation (and ODE) step
        base_seed: Seed for replication streams
        jobs: Worker count
        use_limit_clock: Feed tau(t*) instead of tau_N(t*); no simulation
        rng_algorithm: Bit generator name
        hermite_order: Quadrature order

    Returns:
        NormalizerRatioStudy
    """
    _require_bounded_class(model)
    law = cached_limit_law(model, clock_horizon(model, t_star), dt, hermite_order)
    tau_limit = tau_of(law, t_star)
    mean, stdev = law.mean_at(t_star), math.sqrt(law.variance_at(t_star))

    rows = []
    for count in particle_counts:
        deterministic = normalizers(count, mean, stdev)
        if use_limit_clock:
            taus = np.array([tau_limit])
        else:
            taus = _clock_samples(
                model, law, count, replications, t_star, dt, base_seed, jobs, rng_algorithm
            )
        a_gaps, b_gaps = [], []
        for tau_value in taus:
            stochastic = stochastic_normalizers(float(tau_value), law, model, count)
            a_gaps.append(abs(stochastic.a / deterministic.a - 1.0))
            b_gaps.append(abs((stochastic.b - deterministic.b) / deterministic.a))
        rows.append(
            RatioRow(
                particle_count=count,
                a_discrepancy=float(np.mean(a_gaps)),
                b_discrepancy=float(np.mean(b_gaps)),
            )
        )
        logger.debug(f"Normalizer discrepancies for N={count}: {rows[-1]}")
    return NormalizerRatioStudy(rows=rows)


@dataclass(frozen=True)
class StrongOrderRow:
    """RMS terminal error of EM at one step size."""

    dt: float
    rms_error: float


@dataclass
class StrongOrderStudy:
    """EM error against the exact GBM solution on shared Brownian paths."""

    rows: List[StrongOrderRow]

    @property
    def ratios(self) -> List[float]:
        """error(dt) / error(dt / 2) for consecutive rows."""
        return [
            coarse.rms_error / fine.rms_error for coarse, fine in zip(self.rows, self.rows[1:])
        ]

    @property
    def mean_ratio(self) -> float:
        """Geometric mean of the halving ratios."""
        ratios = self.ratios
        return float(np.exp(np.mean(np.log(ratios)))) if ratios else math.nan

    def passes(self, band: Tuple[float, float] = STRONG_ORDER_RATIO_BAND) -> bool:
        """Mean halving ratio inside the band."""
        return band[0] <= self.mean_ratio <= band[1]


def strong_order_study(
    paths: int = 1000,
    coarsest_steps: int = 64,
    levels: int = 5,
    horizon: float = 1.0,
    mu: float = 1.0,
    sigma: float = 1.0,
    x0: float = 1.0,
    seed: int = DEFAULT_BASE_SEED,
    rng_algorithm: str = DEFAULT_RNG_ALGORITHM,
) -> StrongOrderStudy:
    """
    RMS error of EM for geometric Brownian motion at successively halved steps.

    One set of Brownian increments is drawn on the finest grid; coarser
    levels use their block sums, and the exact solution
    x0 exp((mu - sigma^2 / 2) T + sigma W_T) uses the same paths.

    Args:
        paths: Number of sample paths
        coarsest_steps: Steps at the coarsest level
        levels: Number of step sizes, each half the previous
        horizon: T
        mu: Drift rate
        sigma: Volatility
        x0: Initial value
        seed: Stream seed
        rng_algorithm: Bit generator name

    Returns:
        StrongOrderStudy: Rows from coarsest to finest dt
    """
    if levels < 2 or coarsest_steps < 1 or paths < 1:
        raise ValueError("need paths >= 1, coarsest_steps >= 1 and levels >= 2")

    model = geometric_brownian_motion(mu, sigma, x0)
    finest_steps = coarsest_steps * 2 ** (levels - 1)
    fine_dt = horizon / finest_steps
    rng = make_rng(seed, rng_algorithm)
    fine = math.sqrt(fine_dt) * rng.standard_normal((finest_steps, paths))
    exact = x0 * np.exp((mu - 0.5 * sigma**2) * horizon + sigma * fine.sum(axis=0))
    logger.info(
        f"Strong order study: {paths} paths, dt from {horizon / coarsest_steps} to {fine_dt}"
    )

    rows = []
    for level in range(levels):
        steps = coarsest_steps * 2**level
        dt = horizon / steps
        increments = fine.reshape(steps, finest_steps // steps, paths).sum(axis=1)
        ensemble = ParticleEnsemble(positions=np.full(paths, float(x0)), time=0.0, tau_n=0.0)
        for k in range(steps):
            ensemble = em_step_with_increments(ensemble, model, dt, increments[k])
        rms = math.sqrt(float(np.mean((ensemble.positions - exact) ** 2)))
        rows.append(StrongOrderRow(dt=dt, rms_error=rms))
    return StrongOrderStudy(rows=rows)
