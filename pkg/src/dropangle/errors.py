"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An observation lies outside the support of the distribution."""


class ParameterError(ValueError):
    """A distribution or configuration parameter is out of range."""


class NoInteriorMleError(ValueError):
    """The likelihood has no interior maximum for the given sample.

    For the half-circular wrapped exponential this happens exactly when
    the sample mean angle is zero or at/above pi/2.
    """


class FitFailureError(RuntimeError):
    """A numerical optimizer failed to converge."""


class ContractError(ValueError):
    """A user-supplied callable violated its stated contract."""


class OutOfValidityError(ValueError):
    """A regression model was evaluated outside its validity range."""


class InsufficientDataError(ValueError):
    """A sample or stream is too short for the requested operation."""


class DegenerateIntervalError(ValueError):
    """A confidence interval cannot be transformed (upper endpoint <= 0)."""


class SingularFitError(ValueError):
    """The regression design matrix is rank deficient."""
