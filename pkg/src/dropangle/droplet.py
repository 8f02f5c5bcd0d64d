"""Contact-angle series handling, polynomial regression and drying times.

The toolkit ships a 20-point reference dataset of sessile-droplet contact
angles (radians) against time (seconds), together with two reference cubic
models: a forward model time -> angle used to generate a dense pseudo
dataset, and an inverse model angle -> time used to convert angles into
drying times.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, asdict
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polyutils

from .errors import (
    DomainError,
    InsufficientDataError,
    OutOfValidityError,
    ParameterError,
    SingularFitError,
)

PI = math.pi

#: reference cubic time -> angle (radians), coefficients in ascending powers
REFERENCE_ANGLE_COEFFS = (0.985, -8.45e-3, 2.34e-5, -2.05e-8)

#: reference cubic angle -> time (seconds), coefficients in ascending powers
REFERENCE_TIME_COEFFS = (266.96, -872.293, 1329.892, -763.05)

# (time_s, angle_rad) pairs of the embedded reference dataset
_REFERENCE_POINTS = (
    (10.0, 0.811), (25.0, 0.794), (55.0, 0.689), (58.75, 0.654),
    (66.25, 0.593), (77.25, 0.471), (83.15, 0.436), (88.75, 0.379),
    (100.0, 0.261), (118.75, 0.218), (137.5, 0.157), (175.0, 0.109),
    (212.5, 0.052), (250.0, 0.035), (287.5, 0.034), (325.0, 0.031),
    (381.25, 0.028), (437.5, 0.026), (493.75, 0.023), (550.0, 0.020),
)


class Direction(str, Enum):
    """Which way a polynomial model maps between time and angle."""

    TIME_TO_ANGLE = "time_to_angle"
    ANGLE_TO_TIME = "angle_to_time"


@dataclass(frozen=True)
class PolynomialModel:
    """A polynomial regression model with its goodness-of-fit summary.

    ``coefficients`` are in ascending powers.  ``r_squared`` is the plain
    coefficient of determination; ``adjusted_r_squared`` additionally
    penalizes the number of predictors.
    """

    coefficients: tuple
    direction: Direction
    r_squared: float
    adjusted_r_squared: float

    def __post_init__(self):
        coefs = tuple(float(c) for c in self.coefficients)
        if not coefs or any(not math.isfinite(c) for c in coefs):
            raise ParameterError("coefficients must be a nonempty finite sequence")
        object.__setattr__(self, "coefficients", coefs)
        object.__setattr__(self, "direction", Direction(self.direction))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def predict(self, x):
        out = np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), self.coefficients)
        return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class ContactAngleSeries:
    """A time-ordered series of contact angles (radians)."""

    times: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        times = np.atleast_1d(np.asarray(self.times, dtype=float))
        angles = np.atleast_1d(np.asarray(self.angles, dtype=float))
        if times.ndim != 1 or angles.ndim != 1 or times.size != angles.size:
            raise ParameterError("times and angles must be 1-D arrays of equal length")
        if times.size == 0:
            raise ParameterError("series must contain at least one observation")
        if np.any(~np.isfinite(times)) or np.any(np.diff(times) <= 0.0):
            raise ParameterError("times must be finite and strictly increasing")
        if np.any(~np.isfinite(angles)) or np.any(angles < 0.0) or np.any(angles >= PI):
            raise DomainError("angles must lie in [0, pi)")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "angles", angles)

    @property
    def n(self) -> int:
        return int(self.times.size)


@dataclass(frozen=True)
class ExperimentConditions:
    """Experimental conditions attached to the reference dataset.

    Defaults describe the evaporation experiment the reference series was
    extracted from: a 10 nL droplet at 50% relative humidity and 30 C,
    saliva molality 0.154 mol/kg, surfactant parameter 10, and an initial
    contact angle of 50 degrees.
    """

    relative_humidity_pct: float = 50.0
    initial_volume_nl: float = 10.0
    molality_mol_kg: float = 0.154
    temperature_c: float = 30.0
    surfactant_parameter: float = 10.0
    initial_angle_deg: float = 50.0

    def __post_init__(self):
        if not 0.0 <= self.relative_humidity_pct <= 100.0:
            raise ParameterError("relative humidity must be a percentage in [0, 100]")
        for name in ("initial_volume_nl", "molality_mol_kg", "surfactant_parameter"):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{name} must be positive")
        if self.temperature_c <= -273.15:
            raise ParameterError("temperature must be above absolute zero")
        if not 0.0 < self.initial_angle_deg < 180.0:
            raise ParameterError("initial contact angle must lie in (0, 180) degrees")

    def to_dict(self) -> dict:
        return asdict(self)


def reference_dataset() -> ContactAngleSeries:
    """The embedded 20-point contact-angle dataset."""
    pts = np.array(_REFERENCE_POINTS)
    return ContactAngleSeries(pts[:, 0], pts[:, 1])


def _r_squared(y, y_hat, n_predictors):
    y = np.asarray(y, dtype=float)
    resid = y - np.asarray(y_hat, dtype=float)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    n = y.size
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - n_predictors - 1)
    return r2, adj


def fit_polynomial(x, y, degree: int = 3, direction=Direction.TIME_TO_ANGLE) -> PolynomialModel:
    """Least-squares polynomial fit with R^2 and adjusted R^2.

    Parameters
    ----------
    x, y : array_like
        Predictor and response, equal length, at least ``degree + 2``
        points (so the adjusted R^2 is defined).
    degree : int
        Polynomial degree, >= 1.
    direction : Direction
        Semantic tag recording which way the model maps.

    Raises
    ------
    SingularFitError
        If the design matrix is rank deficient (for example duplicated
        x values leaving fewer distinct points than coefficients).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ParameterError("x and y must be 1-D arrays of equal length")
    if degree < 1:
        raise ParameterError("degree must be >= 1")
    if x.size < degree + 2:
        raise InsufficientDataError(
            f"need at least {degree + 2} points for a degree-{degree} fit, got {x.size}"
        )
    with warnings.catch_warnings():
        warnings.simplefilter("error", polyutils.RankWarning)
        try:
            # fit in a scaled window for conditioning, then map back
            series = Polynomial.fit(x, y, deg=degree)
        except polyutils.RankWarning as exc:
            raise SingularFitError(f"rank-deficient polynomial fit: {exc}") from exc
    coefs = tuple(series.convert().coef)
    y_hat = np.polynomial.polynomial.polyval(x, coefs)
    r2, adj = _r_squared(y, y_hat, degree)
    return PolynomialModel(coefs, Direction(direction), r2, adj)


@lru_cache(maxsize=1)
def time_to_angle_model() -> PolynomialModel:
    """The reference forward cubic, scored against the embedded dataset."""
    data = reference_dataset()
    y_hat = np.polynomial.polynomial.polyval(data.times, REFERENCE_ANGLE_COEFFS)
    r2, adj = _r_squared(data.angles, y_hat, 3)
    return PolynomialModel(REFERENCE_ANGLE_COEFFS, Direction.TIME_TO_ANGLE, r2, adj)


@lru_cache(maxsize=1)
def angle_to_time_model() -> PolynomialModel:
    """The reference inverse cubic, scored against the default pseudo data."""
    data = generate_pseudo_data()
    t_hat = np.polynomial.polynomial.polyval(data.angles, REFERENCE_TIME_COEFFS)
    r2, adj = _r_squared(data.times, t_hat, 3)
    return PolynomialModel(REFERENCE_TIME_COEFFS, Direction.ANGLE_TO_TIME, r2, adj)


def predict_contact_angle(t, model: PolynomialModel | None = None):
    """Contact angle (radians) predicted at time ``t`` (seconds).

    Raises
    ------
    OutOfValidityError
        If the prediction leaves ``(0, pi)``, which signals extrapolation
        beyond the model's validity range.
    """
    if model is None:
        model = time_to_angle_model()
    if model.direction is not Direction.TIME_TO_ANGLE:
        raise ParameterError("model must map time to angle")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~np.isfinite(t_arr)) or np.any(t_arr < 0.0):
        raise ParameterError("time must be finite and >= 0")
    pred = np.polynomial.polynomial.polyval(t_arr, model.coefficients)
    bad = (pred <= 0.0) | (pred >= PI)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise OutOfValidityError(
            f"predicted angle {pred[i]:.6g} at t={t_arr[i]:.6g} s is outside (0, pi); "
            "the model is being evaluated outside its validity range"
        )
    return pred if np.ndim(t) else float(pred[0])


def drying_time(ca, model: PolynomialModel | None = None):
    """Time (seconds) at which the contact angle decays to ``ca`` radians.

    Uses the reference inverse cubic by default.  The inverse model is
    strictly decreasing in the angle, so smaller angles map to later
    times; ``drying_time(0.0)`` is the predicted full drying time.

    Raises
    ------
    OutOfValidityError
        If the predicted time is negative (angle above the validity range).
    """
    if model is None:
        model = angle_to_time_model()
    if model.direction is not Direction.ANGLE_TO_TIME:
        raise ParameterError("model must map angle to time")
    ca_arr = np.atleast_1d(np.asarray(ca, dtype=float))
    if np.any(~np.isfinite(ca_arr)) or np.any(ca_arr < 0.0):
        raise DomainError("contact angle must be finite and >= 0")
    pred = np.polynomial.polynomial.polyval(ca_arr, model.coefficients)
    if np.any(pred < 0.0):
        i = int(np.argmax(pred < 0.0))
        raise OutOfValidityError(
            f"predicted drying time {pred[i]:.6g} s at angle {ca_arr[i]:.6g} is negative; "
            "the angle lies outside the model's validity range"
        )
    return pred if np.ndim(ca) else float(pred[0])


def generate_pseudo_data(
    model: PolynomialModel | None = None,
    t_start: float = 5.0,
    t_end: float = 300.0,
    step: float = 1.0,
) -> ContactAngleSeries:
    """Evaluate a time -> angle model on a regular grid (endpoints inclusive).

    The defaults produce the dense 296-point pseudo dataset used
    throughout: times 5, 6, ..., 300 s under the reference forward cubic.
    Output is deterministic and bit-identical across calls.
    """
    if model is None:
        model = time_to_angle_model()
    if step <= 0.0:
        raise ParameterError("step must be positive")
    if t_end < t_start:
        raise ParameterError("t_end must be >= t_start")
    count = int(math.floor((t_end - t_start) / step + 1e-9)) + 1
    times = t_start + step * np.arange(count)
    angles = predict_contact_angle(times, model)
    return ContactAngleSeries(times, angles)


# ---------------------------------------------------------------------------
# CSV I/O
# ---------------------------------------------------------------------------

_SERIES_HEADER = ["time_s", "angle_rad"]


def write_series_csv(series: ContactAngleSeries, path) -> None:
    """Write a series as ``time_s,angle_rad`` with 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_SERIES_HEADER)
        for t, a in zip(series.times, series.angles):
            writer.writerow([f"{t:.17g}", f"{a:.17g}"])


def read_series_csv(path) -> ContactAngleSeries:
    """Read a ``time_s,angle_rad`` CSV written by :func:`write_series_csv`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != _SERIES_HEADER:
            raise ValueError(f"expected header {','.join(_SERIES_HEADER)!r} in {path}")
        times, angles = [], []
        for i, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: line {i}: expected 2 fields, got {len(row)}")
            try:
                times.append(float(row[0]))
                angles.append(float(row[1]))
            except ValueError as exc:
                raise ValueError(f"{path}: line {i}: {exc}") from exc
    return ContactAngleSeries(np.array(times), np.array(angles))


def read_angles_csv(path) -> np.ndarray:
    """Read the ``angle_rad`` column from any CSV that has one."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValueError(f"{path}: empty file")
        cols = [h.strip() for h in header]
        if "angle_rad" not in cols:
            raise ValueError(f"{path}: no angle_rad column in header {cols}")
        idx = cols.index("angle_rad")
        out = []
        for i, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                out.append(float(row[idx]))
            except (IndexError, ValueError) as exc:
                raise ValueError(f"{path}: line {i}: {exc}") from exc
    if not out:
        raise ValueError(f"{path}: no data rows")
    return np.array(out)
