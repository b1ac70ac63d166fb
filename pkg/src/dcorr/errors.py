"""Exception taxonomy shared by the library and the CLI.

Exit codes group the failures the way the CLI reports them:
1 = usage / configuration, 2 = data, 3 = numerical.
"""


class DcorrError(Exception):
    exit_code = 1


class ConfigError(DcorrError):
    """Invalid parameter, option, or spec string."""

    exit_code = 1


class LagError(DcorrError):
    """Requested lag outside the admissible range."""

    exit_code = 1


class OrderError(DcorrError):
    """Autoregressive order incompatible with the sample size."""

    exit_code = 1


class IoError(DcorrError):
    """Unreadable or unparseable input data."""

    exit_code = 2


class ShapeError(DcorrError):
    """Mismatched input lengths."""

    exit_code = 2


class TooFewObservations(DcorrError):
    exit_code = 2


class DegenerateSeries(DcorrError):
    """Zero distance variance (constant input where variation is required)."""

    exit_code = 2


class NumericalError(DcorrError):
    """A quantity violated an analytic bound by more than fp noise."""

    exit_code = 3


class SingularFit(DcorrError):
    exit_code = 3


class NonCausalError(DcorrError):
    exit_code = 3


class DomainError(DcorrError):
    """Argument outside the mathematical domain of a formula."""

    exit_code = 3


class AdmissibilityWarning(UserWarning):
    """The weight measure does not satisfy the integrability condition
    required for residual diagnostics; quantile envelopes may not settle."""
