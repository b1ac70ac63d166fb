"""Seedable noise generators and two analytic test oracles.

The generators cover the three simulation regimes used throughout the
package: Gaussian noise, heavy-tailed Student t (infinite variance for
df < 2), and a symmetric gamma whose density is unbounded at the origin
for shape < 1/2.

The oracles are independent routes to the same quantities the estimators
compute: a closed form for the distance autocovariance of a stationary
Gaussian series under the Gaussian weight with kernel exp(-x^2), and a
direct quadrature of the defining characteristic-function integral for
finite Gaussian weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

GAUSSIAN = "gaussian"
STUDENT_T = "student_t"
SYMMETRIC_GAMMA = "symmetric_gamma"


@dataclass(frozen=True)
class NoiseGen:
    """An iid noise distribution with a seeded sampler."""

    kind: str
    sigma: float | None = None
    df: float | None = None
    delta: float | None = None
    beta_rate: float | None = None

    def __post_init__(self):
        if self.kind == GAUSSIAN:
            if self.sigma is None or self.sigma <= 0.0:
                raise ConfigError(f"Gaussian noise needs sigma > 0, got {self.sigma}")
        elif self.kind == STUDENT_T:
            if self.df is None or self.df <= 0.0:
                raise ConfigError(f"Student t noise needs df > 0, got {self.df}")
        elif self.kind == SYMMETRIC_GAMMA:
            if self.delta is None or self.delta <= 0.0:
                raise ConfigError(f"symmetric gamma needs delta > 0, got {self.delta}")
            if self.beta_rate is None or self.beta_rate <= 0.0:
                raise ConfigError(
                    f"symmetric gamma needs rate beta > 0, got {self.beta_rate}"
                )
        else:
            raise ConfigError(f"unknown noise kind {self.kind!r}")

    @classmethod
    def gaussian(cls, sigma: float = 1.0) -> "NoiseGen":
        return cls(GAUSSIAN, sigma=float(sigma))

    @classmethod
    def student_t(cls, df: float) -> "NoiseGen":
        return cls(STUDENT_T, df=float(df))

    @classmethod
    def symmetric_gamma(cls, delta: float, beta_rate: float) -> "NoiseGen":
        return cls(SYMMETRIC_GAMMA, delta=float(delta), beta_rate=float(beta_rate))

    def label(self) -> str:
        if self.kind == GAUSSIAN:
            return f"gauss:sigma={self.sigma:g}"
        if self.kind == STUDENT_T:
            return f"t:df={self.df:g}"
        return f"sgamma:delta={self.delta:g},beta={self.beta_rate:g}"

    def draw(self, n: int, seed: int) -> np.ndarray:
        """n iid draws, deterministic given the seed."""
        if n < 1:
            raise ConfigError(f"need n >= 1, got {n}")
        rng = np.random.default_rng(seed)
        if self.kind == GAUSSIAN:
            return self.sigma * rng.standard_normal(n)
        if self.kind == STUDENT_T:
            return rng.standard_t(self.df, n)
        magnitude = rng.gamma(self.delta, 1.0 / self.beta_rate, n)
        signs = rng.integers(0, 2, n) * 2.0 - 1.0
        return signs * magnitude


def parse_noise(text: str) -> NoiseGen:
    """Parse a noise spec string: ``gauss:sigma=1``, ``t:df=1.5``,
    ``sgamma:delta=0.2,beta=0.5``."""
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    params = {}
    if rest:
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise ConfigError(f"bad noise parameter {item!r} in {text!r}")
            try:
                params[key.strip().lower()] = float(value)
            except ValueError:
                raise ConfigError(f"bad noise parameter {item!r} in {text!r}")
    if kind == "gauss":
        gen = NoiseGen.gaussian(params.pop("sigma", 1.0))
    elif kind == "t":
        if "df" not in params:
            raise ConfigError("t noise requires df, e.g. t:df=1.5")
        gen = NoiseGen.student_t(params.pop("df"))
    elif kind == "sgamma":
        if "delta" not in params or "beta" not in params:
            raise ConfigError("sgamma noise requires delta and beta")
        gen = NoiseGen.symmetric_gamma(params.pop("delta"), params.pop("beta"))
    else:
        raise ConfigError(f"unknown noise kind {kind!r}")
    if params:
        raise ConfigError(f"unknown parameter(s) {sorted(params)} for noise {kind!r}")
    return gen


def gaussian_adcv_closed_form(sigma2: float, gamma_h: float) -> float:
    """Distance autocovariance of a stationary Gaussian series at one lag.

    Valid for the Gaussian weight whose kernel is exp(-x^2), i.e. weight
    variance 2.  ``sigma2`` is the series variance and ``gamma_h`` its
    autocovariance at the lag; for |gamma_h| -> 0 the value behaves like
    4 * gamma_h^2 / (1 + 4 * sigma2)^3.
    """
    if abs(gamma_h) > sigma2:
        raise DomainError(
            f"|gamma_h| = {abs(gamma_h)} exceeds the variance {sigma2}"
        )
    if gamma_h == 0.0:
        # the three terms coincide algebraically; avoid rounding residue
        return 0.0
    t1 = ((1.0 + 4.0 * (sigma2 - gamma_h)) * (1.0 + 4.0 * (sigma2 + gamma_h))) ** -0.5
    t2 = 1.0 / (1.0 + 4.0 * sigma2)
    t3 = (
        (1.0 + 4.0 * (sigma2 - gamma_h / 2.0)) * (1.0 + 4.0 * (sigma2 + gamma_h / 2.0))
    ) ** -0.5
    return t1 + t2 - 2.0 * t3


def ecf_quadrature_dcov(
    x,
    y,
    variance: float,
    grid_half_width: float,
    grid_points: int,
) -> float:
    """Distance covariance by direct quadrature of the defining integral.

    Integrates |C_n(s, t)|^2 against the product of two N(0, variance)
    densities on a uniform tensor grid over [-w, w]^2, where C_n is the
    difference between the joint empirical characteristic function and the
    product of the marginal ones.  A test oracle: it converges to the
    kernel-based estimator as the grid refines.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise ConfigError(f"length mismatch: {x.size} vs {y.size}")
    if grid_points < 64:
        raise ConfigError(f"need at least 64 grid points, got {grid_points}")
    if grid_half_width < 6.0 * math.sqrt(variance):
        raise ConfigError(
            f"grid half-width {grid_half_width} covers fewer than 6 standard "
            f"deviations of the weight (needs >= {6.0 * math.sqrt(variance):g})"
        )
    n = x.size
    s = np.linspace(-grid_half_width, grid_half_width, grid_points)
    ex = np.exp(1j * np.outer(s, x))
    ey = np.exp(1j * np.outer(s, y))
    phi_x = ex.mean(axis=1)
    phi_y = ey.mean(axis=1)
    joint = (ex @ ey.T) / n
    c = joint - np.outer(phi_x, phi_y)
    density = np.exp(-0.5 * s * s / variance) / math.sqrt(2.0 * math.pi * variance)
    integrand = (c.real**2 + c.imag**2) * np.outer(density, density)
    return float(np.trapezoid(np.trapezoid(integrand, s, axis=1), s))
