"""Quantile envelopes for scaled distance-autocorrelation statistics.

Three schemes:

* ``permutation`` -- random permutations of the observed series; targets
  the iid null of the raw data.
* ``iid_bootstrap`` -- draws with replacement from a residual vector;
  the naive approximation to the residual null.
* ``parametric_bootstrap`` -- re-simulates the fitted AR model from its
  own (centered, resampled) residuals, refits, and takes the scaled
  statistic of the refitted residuals; this tracks the adjusted null of
  residual diagnostics.

Replicate b of a run with seed s uses the RNG stream keyed by (s, b), so
envelopes are reproducible bit for bit regardless of the thread count.
Quantiles are ceiling-index order statistics: the reported level-q value
is the ceil(q*B)-th smallest replicate value.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ar import (
    LEAST_SQUARES,
    ArModel,
    ar_recursion,
    default_burn_in,
    fit_ar_ls,
    fit_ar_yw,
    is_causal,
)
from .dcov import SCALED_ADCF, _as_vector, _check_max_lag, adcf_from_kernel
from .errors import AdmissibilityWarning, ConfigError, NonCausalError, SingularFit
from .measures import WeightMeasure, admissibility, pairwise_kernel

PERMUTATION = "permutation"
IID_BOOTSTRAP = "iid_bootstrap"
PARAMETRIC_BOOTSTRAP = "parametric_bootstrap"

DEFAULT_LEVELS = (0.05, 0.50, 0.95)

_MIN_REPLICATES = 100


@dataclass(frozen=True)
class Envelope:
    """Per-lag resampling quantiles of the scaled statistic."""

    lags: list
    quantiles: dict
    method: str
    B: int
    seed: int
    statistic: str = SCALED_ADCF

    def to_dict(self) -> dict:
        return {
            "lags": [int(h) for h in self.lags],
            "quantiles": {
                f"{level:g}": [float(v) for v in values]
                for level, values in self.quantiles.items()
            },
            "method": self.method,
            "B": self.B,
            "seed": self.seed,
            "statistic": self.statistic,
        }


def empirical_quantile_index(level: float, B: int) -> int:
    """0-based order-statistic index for the ceiling-index convention."""
    k = math.ceil(level * B - 1e-9)
    return min(max(k, 1), B) - 1


def _check_levels(levels) -> list:
    out = sorted(float(v) for v in levels)
    if not out:
        raise ConfigError("need at least one quantile level")
    for v in out:
        if not 0.0 < v < 1.0:
            raise ConfigError(f"quantile levels must lie in (0, 1), got {v}")
    return out


def _replicate_rng(seed: int, b: int) -> np.random.Generator:
    return np.random.default_rng((int(seed), int(b)))


def _run_replicates(replicate, B: int, threads: int) -> np.ndarray:
    """Evaluate replicate(b) for b = 0..B-1, optionally across threads.

    Results land in a position indexed by b, so the aggregate does not
    depend on completion order.
    """
    if threads is None or threads <= 1:
        rows = [replicate(b) for b in range(B)]
        return np.vstack(rows)
    out = [None] * B
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for b, row in zip(range(B), pool.map(replicate, range(B))):
            out[b] = row
    return np.vstack(out)


def _aggregate(stats: np.ndarray, lags, levels, method: str, B: int, seed: int) -> Envelope:
    ordered = np.sort(stats, axis=0)
    quantiles = {
        level: ordered[empirical_quantile_index(level, B)].copy() for level in levels
    }
    return Envelope(
        lags=list(lags), quantiles=quantiles, method=method, B=B, seed=seed
    )


def permutation_envelope(
    x,
    max_lag: int,
    measure: WeightMeasure,
    B: int = 1000,
    levels=DEFAULT_LEVELS,
    seed: int = 0,
    threads: int = 1,
) -> Envelope:
    """Quantiles of the scaled lag statistic over random permutations.

    The kernel matrix of the data is built once; a permuted series has
    kernel matrix K[p][:, p], so replicates only reindex it.
    """
    v = _as_vector(x, minimum=3)
    _check_max_lag(v.size, max_lag)
    if B < _MIN_REPLICATES:
        raise ConfigError(f"need at least {_MIN_REPLICATES} replicates, got {B}")
    levels = _check_levels(levels)
    n = v.size
    K = pairwise_kernel(v, measure)
    row_tot = K.sum(axis=1)
    grand_sq = float(np.einsum("ij,ij->", K, K))

    def replicate(b: int) -> np.ndarray:
        perm = _replicate_rng(seed, b).permutation(n)
        Kp = K[np.ix_(perm, perm)]
        # row sums and the squared grand total survive joint permutation
        return adcf_from_kernel(Kp, max_lag, row_tot[perm], grand_sq) * n

    stats = _run_replicates(replicate, B, threads)
    return _aggregate(stats, range(1, max_lag + 1), levels, PERMUTATION, B, seed)


def iid_bootstrap_envelope(
    z,
    max_lag: int,
    measure: WeightMeasure,
    B: int = 1000,
    levels=DEFAULT_LEVELS,
    seed: int = 0,
    threads: int = 1,
) -> Envelope:
    """Quantiles of the scaled lag statistic over draws with replacement."""
    v = _as_vector(z, minimum=3)
    _check_max_lag(v.size, max_lag)
    if B < _MIN_REPLICATES:
        raise ConfigError(f"need at least {_MIN_REPLICATES} replicates, got {B}")
    levels = _check_levels(levels)
    n = v.size
    K = pairwise_kernel(v, measure)

    def replicate(b: int) -> np.ndarray:
        idx = _replicate_rng(seed, b).integers(0, n, n)
        Kb = K[np.ix_(idx, idx)]
        return adcf_from_kernel(Kb, max_lag) * n

    stats = _run_replicates(replicate, B, threads)
    return _aggregate(stats, range(1, max_lag + 1), levels, IID_BOOTSTRAP, B, seed)


RESAMPLE_RESIDUALS = "resample_residuals"
FITTED_GAUSSIAN = "fitted_gaussian"


def parametric_bootstrap_envelope(
    model: ArModel,
    n: int,
    max_lag: int,
    measure: WeightMeasure,
    B: int = 1000,
    levels=DEFAULT_LEVELS,
    seed: int = 0,
    noise_source: str = RESAMPLE_RESIDUALS,
    threads: int = 1,
) -> Envelope:
    """Quantiles of the scaled residual statistic under the fitted model.

    Each replicate simulates a length-n series from ``model`` (noise drawn
    from the centered residual distribution, or fitted Gaussian), refits
    an AR of the same order by the same method, and takes the scaled lag
    statistic of the new residuals.  Replicates whose refit is singular
    are discarded; more than 1% of them fails the call.

    Emits :class:`AdmissibilityWarning` when the weight measure violates
    the residual integrability condition (the envelope is still computed,
    but its quantiles need not stabilize as B grows).
    """
    if not is_causal(model.phi):
        raise NonCausalError("bootstrap model is not causal")
    if B < _MIN_REPLICATES:
        raise ConfigError(f"need at least {_MIN_REPLICATES} replicates, got {B}")
    if noise_source not in (RESAMPLE_RESIDUALS, FITTED_GAUSSIAN):
        raise ConfigError(f"unknown noise source {noise_source!r}")
    levels = _check_levels(levels)
    _check_max_lag(n - model.p, max_lag)
    if not admissibility(measure).satisfies_int_res:
        warnings.warn(
            f"weight measure {measure.label()} violates the residual "
            "integrability condition; parametric-bootstrap quantiles may "
            "not stabilize",
            AdmissibilityWarning,
            stacklevel=2,
        )
    centered = model.residuals - model.residuals.mean()
    sigma = math.sqrt(max(model.noise_variance, 0.0))
    burn = default_burn_in(model.p)
    refit = fit_ar_ls if model.method == LEAST_SQUARES else fit_ar_yw

    def replicate(b: int) -> np.ndarray:
        rng = _replicate_rng(seed, b)
        if noise_source == RESAMPLE_RESIDUALS:
            shocks = rng.choice(centered, size=n + burn, replace=True)
        else:
            shocks = rng.normal(0.0, sigma, n + burn)
        sim = ar_recursion(model.phi, shocks)[burn:] + model.mean
        try:
            new_model = refit(sim, model.p)
        except SingularFit:
            return np.full(max_lag, np.nan)
        resid = new_model.residuals
        K = pairwise_kernel(resid, measure)
        return adcf_from_kernel(K, max_lag) * resid.size

    with warnings.catch_warnings():
        # refits of simulated series may warn about marginal causality;
        # only their residuals matter here
        warnings.simplefilter("ignore", UserWarning)
        warnings.simplefilter("always", AdmissibilityWarning)
        stats = _run_replicates(replicate, B, threads)
    bad = np.isnan(stats[:, 0])
    discarded = int(bad.sum())
    if discarded > 0.01 * B:
        raise SingularFit(
            f"{discarded} of {B} bootstrap refits were singular (> 1% allowance)"
        )
    if discarded:
        stats = stats[~bad]
    kept = stats.shape[0]
    ordered = np.sort(stats, axis=0)
    quantiles = {
        level: ordered[empirical_quantile_index(level, kept)].copy()
        for level in levels
    }
    return Envelope(
        lags=list(range(1, max_lag + 1)),
        quantiles=quantiles,
        method=PARAMETRIC_BOOTSTRAP,
        B=B,
        seed=seed,
    )
