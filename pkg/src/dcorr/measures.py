"""Weight measures and their scalar kernels.

Every distance-covariance statistic in this package integrates the squared
difference of characteristic functions against a product weight measure.
For the supported measures that integral collapses to a three-term average
of a scalar kernel of pairwise differences:

* ``szekely`` -- the infinite power-law weight with exponent ``alpha``;
  its kernel is ``|x| ** alpha``.
* ``gauss`` -- a centered Gaussian probability weight with per-coordinate
  variance ``variance``; its kernel is the real characteristic function
  ``exp(-variance * x**2 / 2)``.
* ``stable`` -- a symmetric-stable probability weight; kernel
  ``exp(-(scale * |x|) ** beta)``.

Only univariate component measures are supported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

SZEKELY_POWER = "szekely"
GAUSSIAN_CF = "gauss"
STABLE_CF = "stable"

_KINDS = (SZEKELY_POWER, GAUSSIAN_CF, STABLE_CF)


@dataclass(frozen=True)
class WeightMeasure:
    """Tagged description of a product weight measure.

    Exactly the fields relevant to ``kind`` are set; the rest stay ``None``.
    Instances are immutable and safe to share between threads.
    """

    kind: str
    alpha: float | None = None
    variance: float | None = None
    beta: float | None = None
    scale: float | None = None

    def __post_init__(self):
        if self.kind == SZEKELY_POWER:
            if self.alpha is None or not 0.0 < self.alpha < 2.0:
                raise ConfigError(
                    f"power weight needs 0 < alpha < 2, got {self.alpha}"
                )
        elif self.kind == GAUSSIAN_CF:
            if self.variance is None or self.variance <= 0.0:
                raise ConfigError(
                    f"Gaussian weight needs variance > 0, got {self.variance}"
                )
        elif self.kind == STABLE_CF:
            if self.beta is None or not 0.0 < self.beta <= 2.0:
                raise ConfigError(
                    f"stable weight needs 0 < beta <= 2, got {self.beta}"
                )
            if self.scale is None or self.scale <= 0.0:
                raise ConfigError(
                    f"stable weight needs scale > 0, got {self.scale}"
                )
        else:
            raise ConfigError(f"unknown weight measure kind {self.kind!r}")

    @classmethod
    def szekely_power(cls, alpha: float = 1.0) -> "WeightMeasure":
        return cls(SZEKELY_POWER, alpha=float(alpha))

    @classmethod
    def gaussian_cf(cls, variance: float = 0.5) -> "WeightMeasure":
        return cls(GAUSSIAN_CF, variance=float(variance))

    @classmethod
    def stable_cf(cls, beta: float = 1.0, scale: float = 1.0) -> "WeightMeasure":
        return cls(STABLE_CF, beta=float(beta), scale=float(scale))

    def label(self) -> str:
        """Spec string round-trippable through :func:`parse_measure`."""
        if self.kind == SZEKELY_POWER:
            return f"szekely:alpha={self.alpha:g}"
        if self.kind == GAUSSIAN_CF:
            return f"gauss:var={self.variance:g}"
        return f"stable:beta={self.beta:g},scale={self.scale:g}"


@dataclass(frozen=True)
class Admissibility:
    """Static classification of a weight measure.

    ``satisfies_lemma1``: a finite distance covariance exists provided the
    data carry ``required_moment`` absolute moments (no data condition at
    all for the finite probability weights).

    ``satisfies_int_res``: the second-moment integrability condition needed
    for the residual-diagnostic limit to be finite.  It holds for the
    probability weights and fails for the power weight.
    """

    satisfies_lemma1: bool
    satisfies_int_res: bool
    required_moment: float


def kernel_eval(measure: WeightMeasure, x):
    """Evaluate the scalar kernel of ``measure`` at ``x``.

    ``x`` may be a scalar or an ndarray; the result has the same shape.
    Kernels are even functions of ``x``; the characteristic-function
    kernels take values in (0, 1].
    """
    arr = np.asarray(x, dtype=float)
    if measure.kind == SZEKELY_POWER:
        out = np.abs(arr)
        if measure.alpha != 1.0:
            out **= measure.alpha
    elif measure.kind == GAUSSIAN_CF:
        out = np.exp(-0.5 * measure.variance * arr * arr)
    else:
        out = np.exp(-((measure.scale * np.abs(arr)) ** measure.beta))
    if np.ndim(x) == 0:
        return float(out)
    return out


def pairwise_kernel(x: np.ndarray, measure: WeightMeasure) -> np.ndarray:
    """Kernel evaluated at all pairwise differences of a vector.

    Returns the symmetric (m, m) matrix k(x_j - x_k).  The buffer is built
    in place to keep one m*m allocation.
    """
    x = np.asarray(x, dtype=float)
    d = np.subtract.outer(x, x)
    if measure.kind == SZEKELY_POWER:
        np.abs(d, out=d)
        if measure.alpha != 1.0:
            np.power(d, measure.alpha, out=d)
        return d
    if measure.kind == GAUSSIAN_CF:
        np.multiply(d, d, out=d)
        d *= -0.5 * measure.variance
        np.exp(d, out=d)
        return d
    np.abs(d, out=d)
    d *= measure.scale
    if measure.beta != 1.0:
        np.power(d, measure.beta, out=d)
    np.negative(d, out=d)
    np.exp(d, out=d)
    return d


def admissibility(measure: WeightMeasure) -> Admissibility:
    """Classify the existence and residual-diagnostic conditions.

    The power weight requires ``alpha`` absolute moments of the data and
    fails the residual integrability condition; the finite probability
    weights are admissible for any data distribution and satisfy it.
    """
    if measure.kind == SZEKELY_POWER:
        return Admissibility(
            satisfies_lemma1=True,
            satisfies_int_res=False,
            required_moment=float(measure.alpha),
        )
    return Admissibility(
        satisfies_lemma1=True, satisfies_int_res=True, required_moment=0.0
    )


def parse_measure(text: str) -> WeightMeasure:
    """Parse a measure spec string like ``szekely:alpha=1.0``.

    Accepted forms: ``szekely[:alpha=A]``, ``gauss[:var=V]``,
    ``stable[:beta=B][,scale=S]``.  Omitted parameters take the defaults
    alpha=1, var=0.5, beta=1, scale=1.
    """
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    params = {}
    if rest:
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise ConfigError(f"bad measure parameter {item!r} in {text!r}")
            try:
                params[key.strip().lower()] = float(value)
            except ValueError:
                raise ConfigError(f"bad measure parameter {item!r} in {text!r}")
    if kind == SZEKELY_POWER:
        measure = WeightMeasure.szekely_power(params.pop("alpha", 1.0))
    elif kind == GAUSSIAN_CF:
        measure = WeightMeasure.gaussian_cf(params.pop("var", 0.5))
    elif kind == STABLE_CF:
        measure = WeightMeasure.stable_cf(
            params.pop("beta", 1.0), params.pop("scale", 1.0)
        )
    else:
        raise ConfigError(f"unknown weight measure {kind!r}")
    if params:
        raise ConfigError(
            f"unknown parameter(s) {sorted(params)} for measure {kind!r}"
        )
    return measure
