"""Goodness of fit: one-sample Kolmogorov-Smirnov test and model comparison."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .competitors import (
    CompetitorModel,
    ModelKind,
    competitor_cdf,
    fit_competitor,
    log_likelihood,
)
from .errors import ContractError, DomainError, FitFailureError, NoInteriorMleError
from .hcwe import HcweModel, hcwe_cdf, hcwe_mle, validate_angles

#: model identifiers in the order compare_models fits them
MODEL_IDS = ("hcwe", "we", "twe", "wl", "vonmises")


def kolmogorov_sf(x: float) -> float:
    """Survival function of the Kolmogorov distribution.

    Two complementary series are used: the standard alternating sum for
    moderate-to-large ``x`` and the Jacobi-theta form for small ``x``,
    where the alternating sum converges slowly.
    """
    x = float(x)
    if x <= 0.0:
        return 1.0
    if x < 1.0:
        # Q(x) = 1 - sqrt(2*pi)/x * sum_{k odd} exp(-k^2 pi^2 / (8 x^2))
        w = math.pi * math.pi / (8.0 * x * x)
        total = 0.0
        for k in range(1, 20, 2):
            term = math.exp(-k * k * w)
            total += term
            if term < 1e-18 * max(total, 1.0):
                break
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / x * total))
    total = 0.0
    for k in range(1, 40):
        term = math.exp(-2.0 * k * k * x * x)
        total += term if k % 2 else -term
        if term < 1e-18:
            break
    return min(1.0, max(0.0, 2.0 * total))


def ks_test(sample, cdf) -> tuple:
    """One-sample KS test of ``sample`` against a distribution function.

    Parameters
    ----------
    sample : array_like
        Observations (any support; the cdf defines the null).
    cdf : callable
        Vectorized distribution function.  Its values at the sorted
        sample must be nondecreasing and within [0, 1]; anything else
        raises :class:`ContractError`.

    Returns
    -------
    (ks_statistic, p_value) : tuple of float
        The exact statistic ``sup |F_n - F|`` from the order statistics
        and the asymptotic p-value ``Q(sqrt(n) * D)``.
    """
    sample = np.sort(np.asarray(sample, dtype=float))
    n = sample.size
    if n == 0:
        raise DomainError("cannot test an empty sample")
    f = np.asarray(cdf(sample), dtype=float)
    if f.shape != sample.shape:
        raise ContractError("cdf must return one value per sample point")
    if np.any(~np.isfinite(f)) or np.any(f < -1e-12) or np.any(f > 1.0 + 1e-12):
        raise ContractError("cdf values must lie in [0, 1]")
    if np.any(np.diff(f) < -1e-12):
        raise ContractError("cdf is not monotone on the sample")
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    d = float(max(d_plus, d_minus))
    return d, kolmogorov_sf(math.sqrt(n) * d)


@dataclass(frozen=True)
class FitReport:
    """One model's comparison row: fit, likelihood, AIC and KS summary."""

    model_id: str
    params: tuple
    log_likelihood: float
    aic: float
    ks_statistic: float
    ks_p_value: float
    n: int
    error: str | None = None

    @property
    def k(self) -> int:
        return len(self.params)

    @property
    def failed(self) -> bool:
        return self.error is not None


def _aic(k: int, loglik: float) -> float:
    return 2.0 * k - 2.0 * loglik


def _failed_report(model_id: str, n: int, exc: Exception) -> FitReport:
    return FitReport(
        model_id=model_id,
        params=(),
        log_likelihood=math.nan,
        aic=math.nan,
        ks_statistic=math.nan,
        ks_p_value=math.nan,
        n=n,
        error=f"{type(exc).__name__}: {exc}",
    )


def compare_models(theta) -> list:
    """Fit the HCWE and all four competitors, ranked by ascending AIC.

    Angles must lie in [0, pi) so that every family under comparison is
    applicable.  A model whose fit fails is flagged in its report (with
    NaN summaries) and sorted last rather than aborting the comparison.
    """
    theta = validate_angles(theta)
    n = int(theta.size)
    reports = []

    try:
        lam = hcwe_mle(theta)
        model = HcweModel(lam)
        ll = model.log_likelihood(theta)
        d, p = ks_test(theta, model.cdf)
        reports.append(FitReport("hcwe", (lam,), ll, _aic(1, ll), d, p, n))
    except (NoInteriorMleError, DomainError) as exc:
        reports.append(_failed_report("hcwe", n, exc))

    for kind in ModelKind:
        try:
            model = fit_competitor(kind, theta)
            ll = log_likelihood(model, theta)
            d, p = ks_test(theta, lambda x: competitor_cdf(model, x))
            reports.append(
                FitReport(kind.value, model.params, ll,
                          _aic(len(model.params), ll), d, p, n)
            )
        except (FitFailureError, DomainError) as exc:
            reports.append(_failed_report(kind.value, n, exc))

    reports.sort(key=lambda r: (r.failed, r.aic if not r.failed else 0.0))
    return reports


_REPORT_HEADER = ["model_id", "k", "params", "log_likelihood", "aic",
                  "ks_statistic", "ks_p_value"]


def write_fit_reports_csv(reports, path) -> None:
    """Write comparison rows; ``params`` entries are joined with ';'."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_REPORT_HEADER)
        for r in reports:
            writer.writerow([
                r.model_id,
                r.k,
                ";".join(f"{p:.17g}" for p in r.params),
                f"{r.log_likelihood:.17g}",
                f"{r.aic:.17g}",
                f"{r.ks_statistic:.17g}",
                f"{r.ks_p_value:.17g}",
            ])
