"""Purely sequential fixed-width confidence intervals for the HCWE rate.

Given a target half-width ``d`` and level ``alpha``, the optimal fixed
sample size is ``n* = (z_{alpha/2}/d)**2 * sigma**2`` with ``sigma**2`` the
asymptotic variance of the rate MLE.  Since ``sigma**2`` depends on the
unknown rate, sampling is terminated by the plug-in stopping rule

    N = first n >= m with n >= (z_{alpha/2}/d)**2 / I(lambda_hat_n)

where ``I`` is the Fisher information and ``m`` a pilot size.  The rate
interval ``(lambda_hat_N - d, lambda_hat_N + d)`` is then chained through
the monotone maps ``arctan(1/lambda)`` (mean direction) and the inverse
regression model (drying time).

The variance plug-in ``1/I(lambda_hat_n)`` is isolated in
:func:`mle_asymptotic_variance` so alternative variance estimators can be
swapped in for sensitivity analysis.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .droplet import PolynomialModel, angle_to_time_model, drying_time
from .errors import (
    DegenerateIntervalError,
    DomainError,
    InsufficientDataError,
    NoInteriorMleError,
    OutOfValidityError,
    ParameterError,
)
from .hcwe import (
    PI,
    _fisher_information,
    _mle_from_mean,
    hcwe_fisher_information,
    hcwe_mean_direction,
    hcwe_sample,
    validate_angles,
    _validate_rate,
)

#: default seed for the seeded subsample analysis and the CLI
DEFAULT_SEED = 1729

#: default half-width grid for the sequential analysis
DEFAULT_WIDTH_GRID = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6)


@dataclass(frozen=True)
class StoppingConfig:
    """Pilot size ``m``, level ``alpha``, half-width ``d``, optional cap."""

    m: int
    alpha: float
    d: float
    max_n: int | None = None

    def __post_init__(self):
        if self.m < 2:
            raise ParameterError("pilot sample size m must be >= 2")
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError("alpha must lie in (0, 1)")
        if not self.d > 0.0:
            raise ParameterError("half-width d must be positive")
        if self.max_n is not None and self.max_n < self.m:
            raise ParameterError("max_n must be >= m")


@dataclass(frozen=True)
class SequentialResult:
    """Stopping time, terminal estimate, and the chained intervals.

    ``ci_drying_time`` is ``None`` when the mean-direction interval leaves
    the validity range of the inverse regression model (which happens when
    the lambda interval's lower endpoint is nonpositive and the upper
    mean-direction endpoint is capped at pi/2).
    """

    n_stop: int
    lambda_hat: float
    ci_lambda: tuple
    ci_mu0: tuple
    ci_drying_time: tuple | None
    truncated: bool
    mu0_capped: bool = False


@dataclass(frozen=True)
class CoverageReport:
    """Monte Carlo summary of the stopping rule at one configuration."""

    lambda_true: float
    d: float
    alpha: float
    m: int
    replications: int
    empirical_coverage: float
    mean_stop_time: float
    optimal_n: float
    efficiency_ratio: float


def normal_quantile(p: float) -> float:
    """Standard normal quantile via scipy's inverse normal CDF."""
    if not 0.0 < p < 1.0:
        raise ParameterError("quantile level must lie in (0, 1)")
    return float(ndtri(p))


def mle_asymptotic_variance(lam) -> float:
    """Asymptotic variance of the rate MLE: ``1/I(lam)``.

    This is the variance plug-in used by the stopping rule.
    """
    return 1.0 / hcwe_fisher_information(lam)


def fixed_sample_size_for_variance(sigma_sq: float, d: float, alpha: float) -> float:
    """Fixed sample size ``(z_{alpha/2}/d)**2 * sigma_sq`` for a known variance.

    Exposed separately from :func:`optimal_sample_size` because no HCWE
    rate attains ``sigma_sq`` below ``12/pi**2``; this is the pure
    normal-approximation formula for any externally supplied variance.
    """
    if sigma_sq <= 0.0:
        raise ParameterError("variance must be positive")
    if d <= 0.0:
        raise ParameterError("half-width d must be positive")
    if not 0.0 < alpha < 1.0:
        raise ParameterError("alpha must lie in (0, 1)")
    z = normal_quantile(1.0 - alpha / 2.0)
    return (z / d) ** 2 * sigma_sq


def optimal_sample_size(lam, d: float, alpha: float) -> float:
    """Optimal fixed sample size ``n*`` for a +/- ``d`` interval at ``lam``."""
    return fixed_sample_size_for_variance(mle_asymptotic_variance(lam), d, alpha)


def fixed_width_interval(lambda_hat: float, d: float) -> tuple:
    """The interval ``(lambda_hat - d, lambda_hat + d)``.

    The lower endpoint may be negative; downstream transforms cap it.
    """
    if d <= 0.0:
        raise ParameterError("half-width d must be positive")
    lambda_hat = float(lambda_hat)
    return (lambda_hat - d, lambda_hat + d)


def mean_direction_interval(ci_lambda) -> tuple:
    """Map a rate interval through ``arctan(1/lambda)`` (decreasing).

    Returns ``(arctan(1/upper), arctan(1/lower))``.  A nonpositive lower
    endpoint caps the upper mean-direction endpoint at ``pi/2`` (the
    supremum of the map on positive rates).

    Raises
    ------
    DegenerateIntervalError
        If the upper rate endpoint is nonpositive, where no part of the
        interval intersects the parameter space.
    """
    lo, hi = (float(ci_lambda[0]), float(ci_lambda[1]))
    if hi < lo:
        raise ParameterError("interval endpoints are out of order")
    if hi <= 0.0:
        raise DegenerateIntervalError(
            f"rate interval ({lo:.6g}, {hi:.6g}) lies entirely outside lambda > 0"
        )
    mu_lower = hcwe_mean_direction(hi)
    mu_upper = PI / 2.0 if lo <= 0.0 else hcwe_mean_direction(lo)
    return (mu_lower, mu_upper)


def drying_time_interval(ci_mu0, model: PolynomialModel | None = None) -> tuple:
    """Map a mean-direction interval through the inverse regression model.

    The inverse model is decreasing in the angle, so the endpoints swap:
    ``(drying_time(mu_upper), drying_time(mu_lower))``.

    Raises
    ------
    OutOfValidityError
        If an endpoint falls outside the inverse model's validity range.
    """
    mu_lo, mu_hi = (float(ci_mu0[0]), float(ci_mu0[1]))
    if mu_hi < mu_lo:
        raise ParameterError("interval endpoints are out of order")
    return (drying_time(mu_hi, model), drying_time(mu_lo, model))


def _chain_intervals(lambda_hat, d, inverse_model):
    ci_lambda = fixed_width_interval(lambda_hat, d)
    ci_mu0 = mean_direction_interval(ci_lambda)
    capped = ci_lambda[0] <= 0.0
    try:
        ci_dry = drying_time_interval(ci_mu0, inverse_model)
    except OutOfValidityError:
        ci_dry = None
    return ci_lambda, ci_mu0, ci_dry, capped


def stopping_rule(
    stream,
    config: StoppingConfig,
    inverse_model: PolynomialModel | None = None,
) -> SequentialResult:
    """Consume angles one at a time until the fixed-width criterion holds.

    Pilot observations are drawn first (``config.m`` of them), then the
    criterion ``n >= (z_{alpha/2}/d)**2 / I(lambda_hat_n)`` is checked
    after every draw.  While the running mean angle admits no interior
    MLE (mean >= pi/2) the criterion is declared unmet and sampling
    simply continues.  An exhausted stream or a ``max_n`` cap yields a
    result flagged ``truncated=True`` at the current state.

    Raises
    ------
    InsufficientDataError
        If the stream ends before the pilot sample is complete.
    NoInteriorMleError
        If the stream ends while the running mean still admits no MLE,
        so there is no state to report.
    """
    z = normal_quantile(1.0 - config.alpha / 2.0)
    target = (z / config.d) ** 2
    it = iter(stream)
    total = 0.0
    n = 0
    lam_hat = None
    truncated = False
    while True:
        if n >= config.m:
            theta_bar = total / n
            if 0.0 < theta_bar < PI / 2.0:
                lam_hat = _mle_from_mean(theta_bar)
                if n >= target / _fisher_information(lam_hat):
                    break
            else:
                lam_hat = None
            if config.max_n is not None and n >= config.max_n:
                truncated = True
                break
        try:
            x = float(next(it))
        except StopIteration:
            if n < config.m:
                raise InsufficientDataError(
                    f"stream ended after {n} observations; pilot size is {config.m}"
                ) from None
            truncated = True
            break
        if not 0.0 <= x < PI:
            raise DomainError(f"stream value {x!r} is outside [0, pi)")
        total += x
        n += 1
    if lam_hat is None:
        raise NoInteriorMleError(
            "stream exhausted while the running mean angle admits no interior MLE"
        )
    ci_lambda, ci_mu0, ci_dry, capped = _chain_intervals(lam_hat, config.d, inverse_model)
    return SequentialResult(
        n_stop=n,
        lambda_hat=lam_hat,
        ci_lambda=ci_lambda,
        ci_mu0=ci_mu0,
        ci_drying_time=ci_dry,
        truncated=truncated,
        mu0_capped=capped,
    )


def hcwe_stream(lam, rng, block: int = 512):
    """Infinite generator of HCWE(``lam``) draws from ``rng`` in blocks."""
    lam = _validate_rate(lam)
    while True:
        for x in hcwe_sample(block, lam, rng):
            yield float(x)


def run_sequential_analysis(
    data,
    d_grid=DEFAULT_WIDTH_GRID,
    m: int = 5,
    alpha: float = 0.05,
    subsample_size: int = 250,
    seed: int = DEFAULT_SEED,
    inverse_model: PolynomialModel | None = None,
) -> list:
    """Seeded subsample-and-sort sequential analysis over a half-width grid.

    For each ``d`` the same seeded subsample (without replacement, sorted
    ascending) is fed through :func:`stopping_rule`, so the stopping
    times are comparable across the grid: replaying one stream makes N
    nonincreasing in ``d`` by construction.
    """
    data = validate_angles(data)
    d_grid = [float(d) for d in d_grid]
    if not d_grid:
        raise ParameterError("d_grid must be nonempty")
    if subsample_size < 1 or subsample_size > data.size:
        raise ParameterError(
            f"subsample size must lie in [1, {data.size}], got {subsample_size}"
        )
    # one generator seeding per d with the same seed is equivalent to
    # drawing the subsample once and replaying it
    sub = np.sort(np.random.default_rng(seed).choice(data, size=subsample_size, replace=False))
    results = []
    for d in d_grid:
        config = StoppingConfig(m=m, alpha=alpha, d=d)
        results.append(stopping_rule(sub, config, inverse_model))
    return results


def monte_carlo_coverage(
    lambda_true,
    config: StoppingConfig,
    replications: int,
    seed: int = DEFAULT_SEED,
) -> CoverageReport:
    """Empirical coverage and efficiency of the stopping rule.

    Each replication uses an independently derived generator
    (``seed + replication index``), simulates an HCWE stream, runs the
    stopping rule, and records whether the rate interval covers
    ``lambda_true``.  ``efficiency_ratio`` is ``mean N / n*``.
    """
    lambda_true = _validate_rate(lambda_true)
    if replications < 1:
        raise ParameterError("replications must be >= 1")
    covered = 0
    total_n = 0
    for i in range(replications):
        rng = np.random.default_rng(seed + i)
        result = stopping_rule(hcwe_stream(lambda_true, rng), config)
        if result.ci_lambda[0] <= lambda_true <= result.ci_lambda[1]:
            covered += 1
        total_n += result.n_stop
    mean_n = total_n / replications
    n_star = optimal_sample_size(lambda_true, config.d, config.alpha)
    return CoverageReport(
        lambda_true=lambda_true,
        d=config.d,
        alpha=config.alpha,
        m=config.m,
        replications=replications,
        empirical_coverage=covered / replications,
        mean_stop_time=mean_n,
        optimal_n=n_star,
        efficiency_ratio=mean_n / n_star,
    )


# ---------------------------------------------------------------------------
# CSV serialization
# ---------------------------------------------------------------------------

_SEQUENTIAL_HEADER = [
    "d", "N", "lambda_lower", "lambda_upper", "mu0_lower", "mu0_upper",
    "drying_lower_s", "drying_upper_s", "truncated",
]


def write_sequential_csv(results, d_grid, path) -> None:
    """Write one row per half-width: the stopping time and all intervals.

    Drying-time fields are written as ``nan`` when the interval is
    undefined (capped mean-direction interval).
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_SEQUENTIAL_HEADER)
        for d, r in zip(d_grid, results):
            dry = r.ci_drying_time if r.ci_drying_time is not None else (math.nan, math.nan)
            writer.writerow([
                f"{float(d):.17g}",
                r.n_stop,
                f"{r.ci_lambda[0]:.17g}",
                f"{r.ci_lambda[1]:.17g}",
                f"{r.ci_mu0[0]:.17g}",
                f"{r.ci_mu0[1]:.17g}",
                f"{dry[0]:.17g}",
                f"{dry[1]:.17g}",
                str(bool(r.truncated)).lower(),
            ])


_COVERAGE_HEADER = [
    "lambda_true", "d", "alpha", "m", "replications", "coverage",
    "mean_N", "optimal_n", "efficiency_ratio",
]


def write_coverage_csv(reports, path) -> None:
    """Write one row per coverage report."""
    if isinstance(reports, CoverageReport):
        reports = [reports]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_COVERAGE_HEADER)
        for r in reports:
            writer.writerow([
                f"{r.lambda_true:.17g}",
                f"{r.d:.17g}",
                f"{r.alpha:.17g}",
                r.m,
                r.replications,
                f"{r.empirical_coverage:.17g}",
                f"{r.mean_stop_time:.17g}",
                f"{r.optimal_n:.17g}",
                f"{r.efficiency_ratio:.17g}",
            ])
