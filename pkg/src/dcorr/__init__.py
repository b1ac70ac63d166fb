"""Distance-correlation analysis of stationary time series.

Lagged distance covariance/correlation under pluggable weight measures,
AR(p) fitting with residual diagnostics, and permutation / bootstrap
quantile envelopes for dependence testing.
"""

__version__ = "0.1.0"

from .ar import (
    ArModel,
    fit_ar_ls,
    fit_ar_yw,
    is_causal,
    residuals,
    select_order_aicc,
    simulate_ar,
)
from .dcov import (
    KernelMatrix,
    LagCurve,
    acf,
    adcf,
    adcv,
    cdcf,
    dcor,
    dcov_v,
    kernel_matrix,
)
from .errors import (
    AdmissibilityWarning,
    ConfigError,
    DcorrError,
    DegenerateSeries,
    DomainError,
    IoError,
    LagError,
    NonCausalError,
    NumericalError,
    OrderError,
    ShapeError,
    SingularFit,
    TooFewObservations,
)
from .io import Series, read_csv
from .measures import (
    Admissibility,
    WeightMeasure,
    admissibility,
    kernel_eval,
    parse_measure,
)
from .noise import NoiseGen, ecf_quadrature_dcov, gaussian_adcv_closed_form, parse_noise
from .resample import (
    Envelope,
    iid_bootstrap_envelope,
    parametric_bootstrap_envelope,
    permutation_envelope,
)

__all__ = [
    "Admissibility",
    "AdmissibilityWarning",
    "ArModel",
    "ConfigError",
    "DcorrError",
    "DegenerateSeries",
    "DomainError",
    "Envelope",
    "IoError",
    "KernelMatrix",
    "LagCurve",
    "LagError",
    "NoiseGen",
    "NonCausalError",
    "NumericalError",
    "OrderError",
    "Series",
    "ShapeError",
    "SingularFit",
    "TooFewObservations",
    "WeightMeasure",
    "acf",
    "adcf",
    "adcv",
    "admissibility",
    "cdcf",
    "dcor",
    "dcov_v",
    "ecf_quadrature_dcov",
    "fit_ar_ls",
    "fit_ar_yw",
    "gaussian_adcv_closed_form",
    "iid_bootstrap_envelope",
    "is_causal",
    "kernel_eval",
    "kernel_matrix",
    "parametric_bootstrap_envelope",
    "parse_measure",
    "parse_noise",
    "permutation_envelope",
    "read_csv",
    "residuals",
    "select_order_aicc",
    "simulate_ar",
]
