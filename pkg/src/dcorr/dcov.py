"""Distance covariance / correlation statistics and their lagged variants.

All estimators are plug-in V-statistics: with a_jk = k1(x_j - x_k) and
b_jk = k2(y_j - y_k) over an m-point sample,

    S1 = (1/m^2) sum_jk a_jk b_jk
    S2 = ((1/m^2) sum a) * ((1/m^2) sum b)
    S3 = (1/m^3) sum_j rowsum_a(j) rowsum_b(j)
    dcov = S1 + S2 - 2*S3

which equals the squared weighted L2 distance between the joint empirical
characteristic function and the product of the marginal ones, and is
therefore nonnegative up to rounding for every supported weight measure.

Lag-h statistics are the same quantities on the (n-h) pairs
(x_j, x_{j+h}); each lag is normalized by its own pair count m = n - h,
and the "scaled" variant multiplies by the full sample size n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    DegenerateSeries,
    LagError,
    NumericalError,
    ShapeError,
    TooFewObservations,
)
from .measures import WeightMeasure, kernel_eval, pairwise_kernel

ADCV = "adcv"
ADCF = "adcf"
CDCV = "cdcv"
CDCF = "cdcf"
SCALED_ADCF = "scaled_adcf"
ACF = "acf"

_CLAMP_SLACK = 1e-9


@dataclass(frozen=True)
class KernelMatrix:
    """Pairwise kernel evaluations of one margin, with cached sums."""

    entries: np.ndarray
    row_sums: np.ndarray
    grand_sum: float


@dataclass(frozen=True)
class LagCurve:
    """Per-lag values of one statistic under one weight measure."""

    lags: list
    values: np.ndarray
    statistic: str
    measure: WeightMeasure | None = None

    def to_dict(self) -> dict:
        return {
            "lags": [int(h) for h in self.lags],
            "values": [float(v) for v in self.values],
            "statistic": self.statistic,
            "measure": self.measure.label() if self.measure else None,
        }


def _as_vector(x, minimum: int = 2) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ShapeError(f"expected a 1-d vector, got shape {v.shape}")
    if v.size < minimum:
        raise TooFewObservations(f"need at least {minimum} observations, got {v.size}")
    return v


def _clamp_correlation(r: float) -> float:
    if r < -_CLAMP_SLACK:
        raise NumericalError(
            f"distance correlation {r} below -{_CLAMP_SLACK}; "
            "V-statistic nonnegativity violated"
        )
    if r < 0.0:
        return 0.0
    return min(r, 1.0)


def kernel_matrix(x, measure: WeightMeasure) -> KernelMatrix:
    """Pairwise kernel matrix of a vector, with row sums and grand sum."""
    v = _as_vector(x)
    entries = pairwise_kernel(v, measure)
    row_sums = entries.sum(axis=1)
    return KernelMatrix(entries=entries, row_sums=row_sums, grand_sum=float(row_sums.sum()))


def _vstat(a: np.ndarray, b: np.ndarray) -> float:
    m = a.shape[0]
    ra = a.mean(axis=1)
    rb = b.mean(axis=1)
    s1 = float(np.mean(a * b))
    s2 = float(ra.mean()) * float(rb.mean())
    s3 = float(ra @ rb) / m
    return s1 + s2 - 2.0 * s3


def dcov_v(x, y, measure: WeightMeasure, low_memory: bool = False) -> float:
    """Empirical distance covariance of two equal-length vectors.

    ``low_memory=True`` streams over rows in O(m) memory instead of
    materializing the two m*m kernel matrices; both paths agree to 1e-12.
    """
    xv = _as_vector(x)
    yv = _as_vector(y)
    if xv.size != yv.size:
        raise ShapeError(f"length mismatch: {xv.size} vs {yv.size}")
    if low_memory:
        return _dcov_streaming(xv, yv, measure)
    a = pairwise_kernel(xv, measure)
    b = pairwise_kernel(yv, measure)
    return _vstat(a, b)


def _dcov_streaming(x: np.ndarray, y: np.ndarray, measure: WeightMeasure) -> float:
    m = x.size
    s1 = 0.0
    sum_a = 0.0
    sum_b = 0.0
    s3 = 0.0
    for j in range(m):
        a_row = kernel_eval(measure, x[j] - x)
        b_row = kernel_eval(measure, y[j] - y)
        s1 += float(a_row @ b_row)
        ra = float(a_row.sum())
        rb = float(b_row.sum())
        sum_a += ra
        sum_b += rb
        s3 += ra * rb
    return s1 / m**2 + (sum_a / m**2) * (sum_b / m**2) - 2.0 * s3 / m**3


def dcor(x, y, measure: WeightMeasure) -> float:
    """Empirical distance correlation, clamped to [0, 1].

    Raises :class:`DegenerateSeries` when either margin has zero distance
    variance (a constant vector).
    """
    xv = _as_vector(x)
    yv = _as_vector(y)
    if xv.size != yv.size:
        raise ShapeError(f"length mismatch: {xv.size} vs {yv.size}")
    a = pairwise_kernel(xv, measure)
    b = pairwise_kernel(yv, measure)
    vxy = _vstat(a, b)
    vxx = _vstat(a, a)
    vyy = _vstat(b, b)
    if vxx <= 0.0 or vyy <= 0.0:
        raise DegenerateSeries("zero distance variance in one of the margins")
    return _clamp_correlation(vxy / math.sqrt(vxx * vyy))


def adcf_from_kernel(
    K: np.ndarray,
    max_lag: int,
    row_tot: np.ndarray | None = None,
    grand_sq: float | None = None,
) -> np.ndarray:
    """Lag 1..max_lag distance autocorrelations of the series whose full
    pairwise kernel matrix is ``K``.

    This is the O(n^2)-per-lag workhorse shared by :func:`adcf` and the
    resampling envelopes (a permuted or resampled series has kernel matrix
    ``K[idx][:, idx]``, so replicates never re-evaluate the kernel).  The
    totals of the nested lag submatrices follow one-rim recurrences from
    the full-matrix row sums, so only the cross term S1 costs a full pass
    per lag.  ``row_tot`` and ``grand_sq`` may be supplied when known
    (both are invariant under joint permutation of rows and columns).
    """
    n = K.shape[0]
    if row_tot is None:
        row_tot = K.sum(axis=1)
    grand = float(row_tot.sum())
    if grand_sq is None:
        grand_sq = float(np.einsum("ij,ij->", K, K))

    # Running totals of K and K*K over the leading (m x m) and trailing
    # ((n-h) x (n-h)) principal submatrices, updated one rim at a time.
    g_lead = grand
    q_lead = grand_sq
    g_trail = grand
    q_trail = grand_sq

    out = np.empty(max_lag)
    for h in range(1, max_lag + 1):
        m = n - h
        # drop row/col m from the leading block
        lead_rim = float(row_tot[m]) - float(K[m, m:].sum())
        g_lead -= 2.0 * lead_rim + float(K[m, m])
        q_lead -= 2.0 * float(K[m, :m] @ K[m, :m]) + float(K[m, m]) ** 2
        # drop row/col h-1 from the trailing block
        r = h - 1
        trail_rim = float(row_tot[r]) - float(K[r, : h].sum())
        g_trail -= 2.0 * trail_rim + float(K[r, r])
        q_trail -= 2.0 * float(K[r, h:] @ K[r, h:]) + float(K[r, r]) ** 2

        ra = (row_tot[:m] - K[:m, m:].sum(axis=1)) / m
        rb = (row_tot[h:] - K[h:, :h].sum(axis=1)) / m
        mean_a = g_lead / (m * m)
        mean_b = g_trail / (m * m)

        s1 = float(np.einsum("ij,ij->", K[:m, :m], K[h:, h:])) / (m * m)
        vxy = s1 + mean_a * mean_b - 2.0 * float(ra @ rb) / m
        vxx = q_lead / (m * m) + mean_a * mean_a - 2.0 * float(ra @ ra) / m
        vyy = q_trail / (m * m) + mean_b * mean_b - 2.0 * float(rb @ rb) / m
        if vxx <= 0.0 or vyy <= 0.0:
            raise DegenerateSeries(f"zero distance variance in the lag-{h} margins")
        out[h - 1] = _clamp_correlation(vxy / math.sqrt(vxx * vyy))
    return out


def _check_max_lag(n: int, max_lag: int) -> None:
    if not 1 <= max_lag <= n - 2:
        raise LagError(f"max_lag must be in [1, {n - 2}], got {max_lag}")


def adcf(x, max_lag: int, measure: WeightMeasure, scaled: bool = False) -> LagCurve:
    """Distance autocorrelation at lags 1..max_lag.

    Each lag uses the (n-h) pairs (x_j, x_{j+h}) and is the distance
    correlation of that pair sample.  ``scaled=True`` multiplies every
    value by the sample size n, the scale on which the iid null statistic
    has a nondegenerate limit.
    """
    v = _as_vector(x, minimum=3)
    _check_max_lag(v.size, max_lag)
    K = pairwise_kernel(v, measure)
    values = adcf_from_kernel(K, max_lag)
    if scaled:
        values = values * v.size
    return LagCurve(
        lags=list(range(1, max_lag + 1)),
        values=values,
        statistic=SCALED_ADCF if scaled else ADCF,
        measure=measure,
    )


def adcv(x, max_lag: int, measure: WeightMeasure) -> LagCurve:
    """Distance autocovariance at lags 0..max_lag (unstandardized)."""
    v = _as_vector(x, minimum=3)
    _check_max_lag(v.size, max_lag)
    n = v.size
    values = np.empty(max_lag + 1)
    values[0] = dcov_v(v, v, measure)
    for h in range(1, max_lag + 1):
        values[h] = dcov_v(v[: n - h], v[h:], measure)
    return LagCurve(
        lags=list(range(0, max_lag + 1)), values=values, statistic=ADCV, measure=measure
    )


def cdcf(x, y, lags, measure: WeightMeasure) -> LagCurve:
    """Cross-distance correlation at the given (possibly negative) lags.

    Lag h >= 0 pairs (x_j, y_{j+h}); lag h < 0 pairs (x_{j+|h|}, y_j).
    A large value at positive h therefore signals x leading y by h steps.
    Lag 0 is the plain distance correlation of the two series.
    """
    xv = _as_vector(x)
    yv = _as_vector(y)
    if xv.size != yv.size:
        raise ShapeError(f"length mismatch: {xv.size} vs {yv.size}")
    n = xv.size
    lag_list = [int(h) for h in lags]
    values = np.empty(len(lag_list))
    for i, h in enumerate(lag_list):
        if abs(h) > n - 2:
            raise LagError(f"|lag| must be <= {n - 2}, got {h}")
        if h >= 0:
            xs, ys = xv[: n - h], yv[h:]
        else:
            xs, ys = xv[-h:], yv[: n + h]
        values[i] = dcor(xs, ys, measure)
    return LagCurve(lags=lag_list, values=values, statistic=CDCF, measure=measure)


def acf(x, max_lag: int, transform: str = "identity") -> LagCurve:
    """Classical sample autocorrelation of x, x^2, or |x|.

    Mean-corrected with denominator n, so the values match the standard
    correlogram convention; lag 0 is omitted (it is identically 1).
    """
    v = _as_vector(x, minimum=3)
    _check_max_lag(v.size, max_lag)
    if transform == "identity":
        w = v
    elif transform == "square":
        w = v * v
    elif transform == "abs":
        w = np.abs(v)
    else:
        raise ConfigError(f"unknown transform {transform!r}")
    w = w - w.mean()
    denom = float(w @ w)
    if denom <= 0.0:
        raise DegenerateSeries("zero sample variance")
    n = w.size
    values = np.array([float(w[: n - h] @ w[h:]) / denom for h in range(1, max_lag + 1)])
    return LagCurve(
        lags=list(range(1, max_lag + 1)), values=values, statistic=ACF, measure=None
    )
