"""dropangle: circular statistics and sequential inference for contact angles.

The package implements the half-circular wrapped exponential (HCWE)
distribution for sessile-droplet contact angles, benchmarks it against
four competitor circular models, and provides a purely sequential
fixed-width confidence-interval procedure for the decay rate, the mean
contact-angle direction, and the droplet drying time.  An embedded
reference dataset and cubic regression models make every analysis
reproducible offline.
"""

__version__ = "0.1.0"

from .competitors import (
    CompetitorModel,
    ModelKind,
    competitor_cdf,
    competitor_log_pdf,
    competitor_pdf,
    fit_competitor,
)
from .droplet import (
    ContactAngleSeries,
    Direction,
    ExperimentConditions,
    PolynomialModel,
    angle_to_time_model,
    drying_time,
    fit_polynomial,
    generate_pseudo_data,
    predict_contact_angle,
    read_angles_csv,
    read_series_csv,
    reference_dataset,
    time_to_angle_model,
    write_series_csv,
)
from .errors import (
    ContractError,
    DegenerateIntervalError,
    DomainError,
    FitFailureError,
    InsufficientDataError,
    NoInteriorMleError,
    OutOfValidityError,
    ParameterError,
    SingularFitError,
)
from .gof import FitReport, compare_models, kolmogorov_sf, ks_test, write_fit_reports_csv
from .hcwe import (
    HcweModel,
    hcwe_cdf,
    hcwe_characteristic_fn,
    hcwe_exact_mean_direction,
    hcwe_expected_angle,
    hcwe_fisher_information,
    hcwe_log_pdf,
    hcwe_mean_direction,
    hcwe_mle,
    hcwe_pdf,
    hcwe_quantile,
    hcwe_sample,
    validate_angles,
)
from .sequential import (
    DEFAULT_SEED,
    DEFAULT_WIDTH_GRID,
    CoverageReport,
    SequentialResult,
    StoppingConfig,
    drying_time_interval,
    fixed_sample_size_for_variance,
    fixed_width_interval,
    hcwe_stream,
    mean_direction_interval,
    mle_asymptotic_variance,
    monte_carlo_coverage,
    normal_quantile,
    optimal_sample_size,
    run_sequential_analysis,
    stopping_rule,
    write_coverage_csv,
    write_sequential_csv,
)

__all__ = [
    "__version__",
    # hcwe
    "HcweModel", "hcwe_pdf", "hcwe_log_pdf", "hcwe_cdf", "hcwe_quantile",
    "hcwe_sample", "hcwe_characteristic_fn", "hcwe_mean_direction",
    "hcwe_exact_mean_direction", "hcwe_expected_angle", "hcwe_mle",
    "hcwe_fisher_information", "validate_angles",
    # competitors
    "CompetitorModel", "ModelKind", "competitor_log_pdf", "competitor_pdf",
    "competitor_cdf", "fit_competitor",
    # goodness of fit
    "FitReport", "ks_test", "kolmogorov_sf", "compare_models",
    "write_fit_reports_csv",
    # droplet data
    "ContactAngleSeries", "PolynomialModel", "Direction", "ExperimentConditions",
    "reference_dataset", "fit_polynomial", "predict_contact_angle",
    "generate_pseudo_data", "drying_time", "time_to_angle_model",
    "angle_to_time_model", "write_series_csv", "read_series_csv",
    "read_angles_csv",
    # sequential
    "StoppingConfig", "SequentialResult", "CoverageReport", "stopping_rule",
    "optimal_sample_size", "fixed_sample_size_for_variance",
    "mle_asymptotic_variance", "fixed_width_interval",
    "mean_direction_interval", "drying_time_interval", "hcwe_stream",
    "run_sequential_analysis", "monte_carlo_coverage", "normal_quantile",
    "write_sequential_csv", "write_coverage_csv",
    "DEFAULT_SEED", "DEFAULT_WIDTH_GRID",
    # errors
    "DomainError", "ParameterError", "NoInteriorMleError", "FitFailureError",
    "ContractError", "OutOfValidityError", "InsufficientDataError",
    "DegenerateIntervalError", "SingularFitError",
]
