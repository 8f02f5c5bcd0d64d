"""Competing circular models benchmarked against the HCWE.

All four families live on the full circle ``[0, 2*pi)``:

* ``we``        wrapped exponential
* ``twe``       transmuted wrapped exponential (quadratic rank transmutation
                of the wrapped exponential; shape parameter ``beta``)
* ``wl``        wrapped Lindley
* ``vonmises``  von Mises

Fitting uses numerical likelihood maximization (scipy) except for the von
Mises, whose MLE has the standard resultant-based form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import optimize, special, stats

from .errors import DomainError, FitFailureError, ParameterError
from .hcwe import validate_angles

TWO_PI = 2.0 * math.pi


class ModelKind(str, Enum):
    WRAPPED_EXPONENTIAL = "we"
    TRANSMUTED_WRAPPED_EXPONENTIAL = "twe"
    WRAPPED_LINDLEY = "wl"
    VON_MISES = "vonmises"


#: number of free parameters per family
PARAM_COUNT = {
    ModelKind.WRAPPED_EXPONENTIAL: 1,
    ModelKind.TRANSMUTED_WRAPPED_EXPONENTIAL: 2,
    ModelKind.WRAPPED_LINDLEY: 1,
    ModelKind.VON_MISES: 2,
}


@dataclass(frozen=True)
class CompetitorModel:
    """A member of one of the competitor families with fixed parameters."""

    kind: ModelKind
    params: tuple

    def __post_init__(self):
        kind = ModelKind(self.kind)
        object.__setattr__(self, "kind", kind)
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if len(params) != PARAM_COUNT[kind]:
            raise ParameterError(
                f"{kind.value} takes {PARAM_COUNT[kind]} parameter(s), got {len(params)}"
            )
        if any(not math.isfinite(p) for p in params):
            raise ParameterError(f"parameters must be finite, got {params}")
        if kind is ModelKind.VON_MISES:
            if params[1] < 0.0:
                raise ParameterError("von Mises concentration must be >= 0")
        else:
            if params[0] <= 0.0:
                raise ParameterError(f"{kind.value} rate must be > 0")
        if kind is ModelKind.TRANSMUTED_WRAPPED_EXPONENTIAL:
            if not -1.0 <= params[1] <= 1.0:
                raise ParameterError("transmutation parameter must lie in [-1, 1]")


# ---------------------------------------------------------------------------
# densities and distribution functions
# ---------------------------------------------------------------------------

def _we_log_pdf(theta, lam):
    return math.log(lam) - lam * theta - math.log(-math.expm1(-TWO_PI * lam))


def _we_cdf(theta, lam):
    return np.expm1(-lam * theta) / np.expm1(-TWO_PI * lam)


def _twe_log_pdf(theta, lam, beta):
    # quadratic rank transmutation: f_T = f * ((1 + beta) - 2*beta*F)
    factor = (1.0 + beta) - 2.0 * beta * _we_cdf(theta, lam)
    with np.errstate(divide="ignore"):
        return _we_log_pdf(theta, lam) + np.log(factor)


def _twe_cdf(theta, lam, beta):
    f = _we_cdf(theta, lam)
    return (1.0 + beta) * f - beta * f * f


def _wl_log_pdf(theta, lam):
    q = math.exp(-TWO_PI * lam)
    c = TWO_PI * q / (1.0 - q) ** 2
    return (
        2.0 * math.log(lam)
        - math.log1p(lam)
        - lam * theta
        + np.log((1.0 + theta) / (1.0 - q) + c)
    )


def _wl_cdf(theta, lam):
    q = math.exp(-TWO_PI * lam)
    c = TWO_PI * q / (1.0 - q) ** 2
    em = -np.expm1(-lam * theta)  # 1 - exp(-lam*theta)
    part = em / lam + (1.0 - np.exp(-lam * theta) * (1.0 + lam * theta)) / lam**2
    return lam * lam / (1.0 + lam) * (part / (1.0 - q) + c * em / lam)


def _vm_log_pdf(theta, mu, kappa):
    # i0e is exp(-kappa)*I0(kappa), so this stays finite for large kappa
    return kappa * (np.cos(theta - mu) - 1.0) - math.log(TWO_PI * special.i0e(kappa))


def _vm_cdf(theta, mu, kappa):
    dist = stats.vonmises(kappa, loc=mu)
    return dist.cdf(theta) - dist.cdf(0.0)


def competitor_log_pdf(model: CompetitorModel, theta):
    """Log density of ``model`` at ``theta`` (radians in ``[0, 2*pi)``)."""
    theta = validate_angles(theta, upper=TWO_PI)
    kind = model.kind
    if kind is ModelKind.WRAPPED_EXPONENTIAL:
        out = _we_log_pdf(theta, *model.params)
    elif kind is ModelKind.TRANSMUTED_WRAPPED_EXPONENTIAL:
        out = _twe_log_pdf(theta, *model.params)
    elif kind is ModelKind.WRAPPED_LINDLEY:
        out = _wl_log_pdf(theta, *model.params)
    else:
        out = _vm_log_pdf(theta, *model.params)
    out = np.asarray(out)
    return out if out.ndim else float(out)


def competitor_pdf(model: CompetitorModel, theta):
    """Density of ``model`` at ``theta``."""
    return np.exp(competitor_log_pdf(model, theta))


def competitor_cdf(model: CompetitorModel, theta):
    """Distribution function of ``model`` on ``[0, 2*pi]``."""
    theta = np.asarray(theta, dtype=float)
    if theta.size and (np.any(theta < 0.0) or np.any(theta > TWO_PI)):
        raise DomainError("cdf argument must lie in [0, 2*pi]")
    kind = model.kind
    if kind is ModelKind.WRAPPED_EXPONENTIAL:
        out = _we_cdf(theta, *model.params)
    elif kind is ModelKind.TRANSMUTED_WRAPPED_EXPONENTIAL:
        out = _twe_cdf(theta, *model.params)
    elif kind is ModelKind.WRAPPED_LINDLEY:
        out = _wl_cdf(theta, *model.params)
    else:
        out = _vm_cdf(theta, *model.params)
    out = np.asarray(out)
    return out if out.ndim else float(out)


def log_likelihood(model: CompetitorModel, theta) -> float:
    """Total log likelihood of ``theta`` under ``model``."""
    return float(np.sum(competitor_log_pdf(model, theta)))


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def _fit_rate_only(kind: ModelKind, theta: np.ndarray) -> CompetitorModel:
    log_pdf = _we_log_pdf if kind is ModelKind.WRAPPED_EXPONENTIAL else _wl_log_pdf

    def nll(x):
        val = np.sum(log_pdf(theta, math.exp(x)))
        return -val if math.isfinite(val) else 1e300

    x0 = math.log(1.0 / max(float(np.mean(theta)), 1e-12))
    res = optimize.minimize_scalar(nll, bracket=(x0 - 1.0, x0 + 1.0), method="brent")
    if not res.success or not math.isfinite(res.x):
        raise FitFailureError(f"{kind.value} likelihood maximization failed: {res}")
    return CompetitorModel(kind, (math.exp(res.x),))


def _fit_twe(theta: np.ndarray) -> CompetitorModel:
    we = _fit_rate_only(ModelKind.WRAPPED_EXPONENTIAL, theta)

    def nll(v):
        lam, beta = math.exp(v[0]), v[1]
        if not -1.0 <= beta <= 1.0:
            return 1e300
        val = np.sum(_twe_log_pdf(theta, lam, beta))
        return -val if math.isfinite(val) else 1e300

    res = optimize.minimize(
        nll,
        x0=[math.log(we.params[0]), 0.0],
        method="Nelder-Mead",
        options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 10_000},
    )
    if not res.success:
        raise FitFailureError(f"twe likelihood maximization failed: {res.message}")
    lam, beta = math.exp(res.x[0]), float(np.clip(res.x[1], -1.0, 1.0))
    return CompetitorModel(ModelKind.TRANSMUTED_WRAPPED_EXPONENTIAL, (lam, beta))


def _fit_vonmises(theta: np.ndarray) -> CompetitorModel:
    c_bar = float(np.mean(np.cos(theta)))
    s_bar = float(np.mean(np.sin(theta)))
    r_bar = math.hypot(c_bar, s_bar)
    mu = math.atan2(s_bar, c_bar) % TWO_PI
    if r_bar < 1e-12:
        return CompetitorModel(ModelKind.VON_MISES, (mu, 0.0))
    if r_bar >= 1.0 - 1e-14:
        raise FitFailureError("degenerate sample: resultant length ~ 1, kappa diverges")

    def bessel_ratio_gap(k):
        return special.i1e(k) / special.i0e(k) - r_bar

    hi = 1.0
    while bessel_ratio_gap(hi) < 0.0:
        hi *= 2.0
        if hi > 1e14:
            raise FitFailureError("von Mises concentration solve did not bracket")
    kappa = optimize.brentq(bessel_ratio_gap, 1e-14, hi, xtol=1e-12, rtol=1e-14)
    return CompetitorModel(ModelKind.VON_MISES, (mu, kappa))


def fit_competitor(kind, theta) -> CompetitorModel:
    """Fit one competitor family to ``theta`` by maximum likelihood.

    Parameters
    ----------
    kind : ModelKind or str
        One of ``"we"``, ``"twe"``, ``"wl"``, ``"vonmises"``.
    theta : array_like
        Angles in radians, each in ``[0, 2*pi)``.

    Raises
    ------
    FitFailureError
        If the optimizer fails to converge or the sample is degenerate.
    """
    kind = ModelKind(kind)
    theta = validate_angles(theta, upper=TWO_PI)
    if theta.size == 0:
        raise DomainError("cannot fit an empty sample")
    if kind in (ModelKind.WRAPPED_EXPONENTIAL, ModelKind.WRAPPED_LINDLEY):
        return _fit_rate_only(kind, theta)
    if kind is ModelKind.TRANSMUTED_WRAPPED_EXPONENTIAL:
        return _fit_twe(theta)
    return _fit_vonmises(theta)
