"""Half-circular wrapped exponential (HCWE) distribution.

The HCWE is an exponential law truncated to the half circle ``[0, pi)``:

    f(theta) = lam * exp(-lam * theta) / (1 - exp(-pi * lam))

It arises as a model for sessile-droplet contact angles, which live on
the upper half circle by construction.  This module provides the density,
distribution function, quantiles, sampling, maximum likelihood estimation
and the Fisher information, plus scalar fast paths used by the sequential
estimation loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoInteriorMleError, ParameterError

PI = math.pi

# exp(x) overflows near x = 709; beyond this the truncation correction
# exp(-pi*lam) is exactly 0.0 in double precision anyway.
_EXP_ARG_MAX = 700.0


def _validate_rate(lam) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0.0:
        raise ParameterError(f"rate must be a positive finite number, got {lam!r}")
    return lam


def validate_angles(theta, upper: float = PI) -> np.ndarray:
    """Return ``theta`` as a float array, checking it lies in ``[0, upper)``.

    Raises
    ------
    DomainError
        If any value falls outside the support.
    """
    arr = np.asarray(theta, dtype=float)
    if arr.size and (np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr >= upper)):
        bad = arr[~(np.isfinite(arr) & (arr >= 0.0) & (arr < upper))]
        raise DomainError(
            f"angles must lie in [0, {upper:.6g}); offending value {bad.flat[0]!r}"
        )
    return arr


def _log_norm(lam: float) -> float:
    """log(1 - exp(-pi*lam)), the log normalizing denominator."""
    return math.log(-math.expm1(-PI * lam))


def hcwe_log_pdf(theta, lam):
    """Log density of the HCWE distribution on ``[0, pi)``."""
    lam = _validate_rate(lam)
    theta = validate_angles(theta)
    out = math.log(lam) - lam * theta - _log_norm(lam)
    return out if np.ndim(theta) else float(out)


def hcwe_pdf(theta, lam):
    """Density ``lam * exp(-lam*theta) / (1 - exp(-pi*lam))`` on ``[0, pi)``.

    Parameters
    ----------
    theta : float or array_like
        Angles in radians, each in ``[0, pi)``.
    lam : float
        Positive decay rate.
    """
    return np.exp(hcwe_log_pdf(theta, lam))


def hcwe_cdf(theta, lam):
    """Distribution function of the HCWE on ``[0, pi]``.

    Accepts ``theta = pi`` (where the cdf equals 1) so that closed
    intervals can be evaluated.
    """
    lam = _validate_rate(lam)
    theta = np.asarray(theta, dtype=float)
    if theta.size and (np.any(~np.isfinite(theta)) or np.any(theta < 0.0) or np.any(theta > PI)):
        raise DomainError("cdf argument must lie in [0, pi]")
    out = np.expm1(-lam * theta) / np.expm1(-PI * lam)
    return out if out.ndim else float(out)


def hcwe_quantile(u, lam):
    """Inverse cdf: the angle ``theta`` with ``hcwe_cdf(theta, lam) = u``.

    ``u`` must lie in ``[0, 1)``; the support is half open so ``u = 1``
    has no preimage.
    """
    lam = _validate_rate(lam)
    u = np.asarray(u, dtype=float)
    if u.size and (np.any(~np.isfinite(u)) or np.any(u < 0.0) or np.any(u >= 1.0)):
        raise DomainError("quantile level must lie in [0, 1)")
    out = -np.log1p(u * np.expm1(-PI * lam)) / lam
    return out if out.ndim else float(out)


def hcwe_sample(n: int, lam, seed=None) -> np.ndarray:
    """Draw ``n`` HCWE variates by inverting the cdf at uniform levels.

    ``seed`` may be an int, ``None``, or a ``numpy.random.Generator``.
    A fixed integer seed gives bit-identical output across calls.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    lam = _validate_rate(lam)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return hcwe_quantile(rng.random(n), lam)


def hcwe_characteristic_fn(p, lam):
    """Characteristic function ``phi(p) = 1 / (1 - i p / lam)``."""
    lam = _validate_rate(lam)
    p = np.asarray(p)
    out = 1.0 / (1.0 - 1j * p / lam)
    return out if out.ndim else complex(out)


def hcwe_mean_direction(lam) -> float:
    """Mean direction ``mu0 = arctan(1 / lam)`` of the HCWE."""
    lam = _validate_rate(lam)
    return math.atan(1.0 / lam)


def hcwe_exact_mean_direction(lam) -> float:
    """Mean direction computed from the closed-form trigonometric moments.

    E[cos] and E[sin] share the factor
    ``lam * (1 + exp(-pi*lam)) / ((lam**2 + 1) * (1 - exp(-pi*lam)))``,
    with E[cos] carrying one extra power of ``lam``, so
    ``atan2(E[sin], E[cos])`` collapses to ``arctan(1/lam)`` exactly.
    Both routes are kept so the identity is testable.
    """
    lam = _validate_rate(lam)
    common = (1.0 + math.exp(-PI * lam)) / ((lam * lam + 1.0) * -math.expm1(-PI * lam))
    e_cos = lam * lam * common
    e_sin = lam * common
    return math.atan2(e_sin, e_cos)


def _expected_angle(lam: float) -> float:
    """E[theta] = 1/lam - pi / (exp(pi*lam) - 1), the score-equation mean."""
    x = PI * lam
    tail = 0.0 if x > _EXP_ARG_MAX else PI / math.expm1(x)
    return 1.0 / lam - tail


def hcwe_expected_angle(lam) -> float:
    """Mean angle E[theta] under the HCWE; decreases from pi/2 to 0."""
    return _expected_angle(_validate_rate(lam))


def _fisher_information(lam: float) -> float:
    """I(lam) = 1/lam**2 - pi**2 * exp(-pi*lam) / (1 - exp(-pi*lam))**2.

    Equals Var[theta] and also -d/dlam E[theta].  Bounded above by
    pi**2 / 12 (the uniform-limit variance as lam -> 0).
    """
    x = PI * lam
    if x > _EXP_ARG_MAX:
        return 1.0 / (lam * lam)
    return 1.0 / (lam * lam) - PI * PI * math.exp(-x) / math.expm1(-x) ** 2


def hcwe_fisher_information(lam) -> float:
    """Fisher information of the rate parameter (per observation)."""
    return _fisher_information(_validate_rate(lam))


def _mle_from_mean(theta_bar: float, tol: float = 1e-10) -> float:
    """Solve E[theta; lam] = theta_bar for lam by bisection.

    The mean function is strictly decreasing with range (0, pi/2), so a
    root exists and is unique iff 0 < theta_bar < pi/2.  Bisection is
    preferred over Newton steps: the score is flat for large lam and
    Newton can escape the admissible region.
    """
    if not 0.0 < theta_bar < PI / 2.0:
        raise NoInteriorMleError(
            f"no interior MLE: sample mean angle {theta_bar!r} is outside (0, pi/2)"
        )
    lo = 1e-8
    while _expected_angle(lo) <= theta_bar:
        lo *= 0.5
        if lo < 1e-300:
            raise NoInteriorMleError("sample mean angle is indistinguishable from pi/2")
    hi = max(2.0 * lo, 1.0)
    while _expected_angle(hi) > theta_bar:
        hi *= 2.0
        if hi > 1e15:
            raise NoInteriorMleError("sample mean angle is indistinguishable from 0")
    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if _expected_angle(mid) > theta_bar:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def hcwe_mle(theta) -> float:
    """Maximum likelihood estimate of the HCWE rate.

    Solves the score equation ``1/lam - pi/(exp(pi*lam) - 1) = mean(theta)``.

    Raises
    ------
    NoInteriorMleError
        If the sample mean angle is 0 or >= pi/2, where the likelihood
        is maximized only in the limit (no finite stationary point).
    """
    theta = validate_angles(theta)
    if theta.size == 0:
        raise DomainError("cannot fit an empty sample")
    return _mle_from_mean(float(np.mean(theta)))


@dataclass(frozen=True)
class HcweModel:
    """A fitted (or specified) HCWE distribution with rate ``lam``."""

    lam: float

    def __post_init__(self):
        _validate_rate(self.lam)

    @classmethod
    def fit(cls, theta) -> "HcweModel":
        return cls(hcwe_mle(theta))

    def pdf(self, theta):
        return hcwe_pdf(theta, self.lam)

    def log_pdf(self, theta):
        return hcwe_log_pdf(theta, self.lam)

    def cdf(self, theta):
        return hcwe_cdf(theta, self.lam)

    def quantile(self, u):
        return hcwe_quantile(u, self.lam)

    def sample(self, n: int, seed=None) -> np.ndarray:
        return hcwe_sample(n, self.lam, seed)

    def log_likelihood(self, theta) -> float:
        return float(np.sum(hcwe_log_pdf(np.asarray(theta, dtype=float), self.lam)))

    def characteristic_fn(self, p):
        return hcwe_characteristic_fn(p, self.lam)

    @property
    def mean_direction(self) -> float:
        return hcwe_mean_direction(self.lam)

    @property
    def fisher_information(self) -> float:
        return hcwe_fisher_information(self.lam)
