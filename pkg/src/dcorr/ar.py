"""Causal AR(p) fitting, order selection, residuals, and simulation.

Fitting removes the sample mean first (models are zero-mean; data rarely
are) and regresses each value on its p predecessors.  The regression
centers the response and every lag column over the fitted range, which is
equivalent to including an intercept: residuals therefore average to zero
exactly.  Residuals for t <= p are dropped, not zero-padded, so the
residual vector has length n - p and lag statistics on it use that length
as their sample size.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import NonCausalError, OrderError, ShapeError, SingularFit
from .noise import NoiseGen

LEAST_SQUARES = "least_squares"
YULE_WALKER = "yule_walker"

_CAUSALITY_MARGIN = 1e-10


@dataclass(frozen=True)
class ArModel:
    """A fitted AR(p) model.

    ``phi`` are the lag coefficients, ``noise_variance`` the residual
    variance RSS/(n-p), ``mean`` the sample mean removed before fitting,
    and ``residuals`` the n-p fitted residuals.  With infinite-variance
    noise the coefficients remain consistent but ``noise_variance`` is not
    meaningful.
    """

    p: int
    phi: np.ndarray
    noise_variance: float
    mean: float
    method: str
    residuals: np.ndarray


def is_causal(phi) -> bool:
    """True iff all roots of 1 - phi_1 z - ... - phi_p z^p lie strictly
    outside the closed unit disk (with a small numerical margin)."""
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if phi.size == 0:
        return True
    roots = np.roots(np.concatenate((-phi[::-1], [1.0])))
    if roots.size == 0:
        return True
    return bool(np.min(np.abs(roots)) > 1.0 + _CAUSALITY_MARGIN)


def _lag_design(w: np.ndarray, p: int):
    """Response w_t and design [w_{t-1}, ..., w_{t-p}] for t = p+1..n."""
    n = w.size
    resp = w[p:]
    design = np.column_stack([w[p - k : n - k] for k in range(1, p + 1)])
    return resp, design


def _centered_residuals(phi: np.ndarray, w: np.ndarray, p: int) -> np.ndarray:
    """Residuals of the centered regression for given coefficients.

    Column-centering the design and response reproduces the intercept-
    including least-squares residuals, and makes the residual mean zero
    for any coefficient vector.
    """
    resp, design = _lag_design(w, p)
    resp = resp - resp.mean()
    design = design - design.mean(axis=0)
    return resp - design @ phi


def fit_ar_ls(x, p: int) -> ArModel:
    """Least-squares AR(p) fit.

    Raises :class:`OrderError` when the sample is too short for the order
    and :class:`SingularFit` when the lag design is rank-deficient.  Emits
    a warning if the fitted polynomial is not causal.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if p < 1:
        raise OrderError(f"least-squares fit needs p >= 1, got {p}")
    if n < p + 2:
        raise OrderError(f"need at least p + 2 = {p + 2} observations, got {n}")
    mean = float(x.mean())
    w = x - mean
    resp, design = _lag_design(w, p)
    resp_c = resp - resp.mean()
    design_c = design - design.mean(axis=0)
    phi, _, rank, _ = np.linalg.lstsq(design_c, resp_c, rcond=None)
    if rank < p:
        raise SingularFit(f"lag design has rank {rank} < {p}")
    resid = resp_c - design_c @ phi
    sigma2 = float(resid @ resid) / (n - p)
    model = ArModel(
        p=p,
        phi=phi,
        noise_variance=sigma2,
        mean=mean,
        method=LEAST_SQUARES,
        residuals=resid,
    )
    _warn_if_noncausal(model)
    return model


def fit_ar_yw(x, p: int) -> ArModel:
    """Yule-Walker AR(p) fit from sample autocovariances (denominator n)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if p < 1:
        raise OrderError(f"Yule-Walker fit needs p >= 1, got {p}")
    if n < p + 2:
        raise OrderError(f"need at least p + 2 = {p + 2} observations, got {n}")
    mean = float(x.mean())
    w = x - mean
    gamma = np.array([float(w[: n - k] @ w[k:]) / n for k in range(p + 1)])
    if gamma[0] <= 0.0:
        raise SingularFit("zero sample variance")
    toeplitz = np.array([[gamma[abs(i - j)] for j in range(p)] for i in range(p)])
    try:
        phi = np.linalg.solve(toeplitz, gamma[1:])
    except np.linalg.LinAlgError:
        raise SingularFit("singular Yule-Walker system")
    resid = _centered_residuals(phi, w, p)
    sigma2 = float(resid @ resid) / (n - p)
    model = ArModel(
        p=p,
        phi=phi,
        noise_variance=sigma2,
        mean=mean,
        method=YULE_WALKER,
        residuals=resid,
    )
    _warn_if_noncausal(model)
    return model


def _warn_if_noncausal(model: ArModel) -> None:
    if not is_causal(model.phi):
        warnings.warn(
            f"fitted AR({model.p}) coefficients are not causal", stacklevel=3
        )


def _aicc(n: int, p: int, sigma2: float) -> float:
    return n * np.log(sigma2) + 2.0 * (p + 1) * n / (n - p - 2)


def select_order_aicc(x, p_max: int) -> int:
    """Order in 0..p_max minimizing the corrected information criterion.

    Uses least-squares fits; ties break toward the smaller order.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if p_max < 0 or p_max > n / 10:
        raise OrderError(f"p_max must be in [0, n/10] = [0, {n / 10:g}], got {p_max}")
    w = x - x.mean()
    best_p = None
    best_crit = np.inf
    for p in range(p_max + 1):
        if p == 0:
            sigma2 = float(w @ w) / n
        else:
            try:
                sigma2 = fit_ar_ls(x, p).noise_variance
            except SingularFit:
                continue
        if sigma2 <= 0.0:
            continue
        crit = _aicc(n, p, sigma2)
        if crit < best_crit:
            best_crit = crit
            best_p = p
    if best_p is None:
        raise SingularFit("no AR order produced a nonsingular fit")
    return best_p


def residuals(model: ArModel, x) -> np.ndarray:
    """Recompute the fitted residuals of ``model`` on the series ``x``."""
    x = np.asarray(x, dtype=float)
    expected = model.p + model.residuals.size
    if x.size != expected:
        raise ShapeError(f"series length {x.size} incompatible with fit on {expected}")
    return _centered_residuals(model.phi, x - model.mean, model.p)


def ar_recursion(phi, shocks) -> np.ndarray:
    """Run x_t = sum_k phi_k x_{t-k} + z_t from zero initial conditions."""
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    shocks = np.asarray(shocks, dtype=float)
    if phi.size == 0:
        return shocks.copy()
    return lfilter([1.0], np.concatenate(([1.0], -phi)), shocks)


def default_burn_in(p: int) -> int:
    return 10 * p + 100


def simulate_ar(phi, noise: NoiseGen, n: int, burn_in: int | None = None, seed: int = 0) -> np.ndarray:
    """Simulate n values of a causal AR process driven by ``noise``.

    The recursion starts from zero initial conditions and discards
    ``burn_in`` values (default 10*p + 100) so the retained stretch is
    close to stationarity.  Deterministic given the seed.
    """
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if not is_causal(phi):
        raise NonCausalError(f"AR polynomial with phi={phi.tolist()} is not causal")
    if n < 1:
        raise OrderError(f"need n >= 1, got {n}")
    if burn_in is None:
        burn_in = default_burn_in(phi.size)
    if burn_in < 0:
        raise OrderError(f"burn_in must be >= 0, got {burn_in}")
    shocks = noise.draw(n + burn_in, seed)
    return ar_recursion(phi, shocks)[burn_in:]
