"""Shared test oracles and Monte Carlo harnesses.

The brute-force routines here are deliberately independent of the library
internals: the triple-sum estimator evaluates the defining three-term
average by explicit loops, and the quantile harness recomputes scaled lag
statistics replication by replication.
"""

import numpy as np

from dcorr import WeightMeasure, fit_ar_ls, kernel_eval, simulate_ar
from dcorr.dcov import adcf_from_kernel
from dcorr.measures import pairwise_kernel
from dcorr.resample import empirical_quantile_index

ALL_MEASURES = (
    WeightMeasure.szekely_power(1.0),
    WeightMeasure.szekely_power(0.6),
    WeightMeasure.gaussian_cf(0.5),
    WeightMeasure.gaussian_cf(2.0),
    WeightMeasure.stable_cf(beta=1.0, scale=1.0),
    WeightMeasure.stable_cf(beta=1.5, scale=0.7),
)

AR10_PHI = np.array(
    [-0.140, 0.038, 0.304, 0.078, 0.069, 0.013, 0.019, 0.039, 0.148, -0.062]
)


def triple_sum_dcov(x, y, measure):
    """O(m^3) brute-force evaluation of the three-term V-statistic."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = x.size
    a = np.empty((m, m))
    b = np.empty((m, m))
    for j in range(m):
        for k in range(m):
            a[j, k] = kernel_eval(measure, x[j] - x[k])
            b[j, k] = kernel_eval(measure, y[j] - y[k])
    s1 = 0.0
    for j in range(m):
        for k in range(m):
            s1 += a[j, k] * b[j, k]
    s1 /= m**2
    s2 = (a.sum() / m**2) * (b.sum() / m**2)
    s3 = 0.0
    for j in range(m):
        for k in range(m):
            for l in range(m):
                s3 += a[j, k] * b[j, l]
    s3 /= m**3
    return s1 + s2 - 2.0 * s3


def scaled_adcf(values, max_lag, measure):
    """Scaled per-lag statistic of a vector (scale = its own length)."""
    values = np.asarray(values, dtype=float)
    K = pairwise_kernel(values, measure)
    return adcf_from_kernel(K, max_lag) * values.size


def ceiling_quantile(stats, level):
    """Per-lag ceiling-index empirical quantile of a (R, L) matrix."""
    stats = np.asarray(stats)
    ordered = np.sort(stats, axis=0)
    return ordered[empirical_quantile_index(level, stats.shape[0])]


def residual_stat_replications(phi, noise, n, max_lag, measure, R, seed0):
    """Scaled residual statistics over R independent model realizations."""
    p = len(phi)
    rows = np.empty((R, max_lag))
    for r in range(R):
        x = simulate_ar(phi, noise, n, seed=seed0 + r)
        model = fit_ar_ls(x, p)
        rows[r] = scaled_adcf(model.residuals, max_lag, measure)
    return rows


def iid_stat_replications(noise, n, max_lag, measure, R, seed0):
    """Scaled statistics of iid noise samples over R replications."""
    rows = np.empty((R, max_lag))
    for r in range(R):
        z = noise.draw(n, seed0 + r)
        rows[r] = scaled_adcf(z, max_lag, measure)
    return rows
