"""Continuous univariate distributions with exact CDF and quantile functions.

Every function accepts a scalar or a numpy array and returns the same shape.
Scalar input gives a Python ``float`` back.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.special import ndtr

__all__ = ["Kind", "DistributionSpec", "cdf", "quantile", "normal_ppf"]


class Kind(str, enum.Enum):
    CAUCHY = "cauchy"
    NORMAL = "normal"
    LOGISTIC = "logistic"
    WEIBULL = "weibull"
    UNIFORM = "uniform"


# (names of the parameters, in the order they appear in ``params``)
PARAM_NAMES: dict[Kind, tuple[str, str]] = {
    Kind.CAUCHY: ("location", "scale"),
    Kind.NORMAL: ("mean", "sd"),
    Kind.LOGISTIC: ("location", "scale"),
    Kind.WEIBULL: ("scale", "shape"),
    Kind.UNIFORM: ("lower", "upper"),
}


@dataclass(frozen=True)
class DistributionSpec:
    """A parameterised continuous distribution.

    ``params`` follows :data:`PARAM_NAMES`, e.g. ``(x0, gamma)`` for Cauchy and
    ``(lambda, k)`` for Weibull. Parameters are checked here once so that the
    sampling hot path can skip validation.
    """

    kind: Kind
    params: tuple[float, ...]

    def __post_init__(self) -> None:
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        params = tuple(float(v) for v in self.params)
        object.__setattr__(self, "params", params)
        names = PARAM_NAMES[kind]
        if len(params) != len(names):
            raise ValueError(
                f"{kind.value} takes {len(names)} parameters {names}, got {len(params)}"
            )
        if not all(math.isfinite(v) for v in params):
            raise ValueError(f"{kind.value} parameters must be finite, got {params}")
        if kind is Kind.UNIFORM:
            if not params[0] < params[1]:
                raise ValueError(f"uniform needs lower < upper, got {params}")
        else:
            if kind is Kind.WEIBULL:
                bad = [n for n, v in zip(names, params) if v <= 0]
            else:
                bad = [names[1]] if params[1] <= 0 else []
            if bad:
                raise ValueError(f"{kind.value} {', '.join(bad)} must be > 0, got {params}")

    @classmethod
    def cauchy(cls, x0: float, gamma: float) -> DistributionSpec:
        return cls(Kind.CAUCHY, (x0, gamma))

    @classmethod
    def normal(cls, mu: float, sigma: float) -> DistributionSpec:
        return cls(Kind.NORMAL, (mu, sigma))

    @classmethod
    def logistic(cls, mu: float, s: float) -> DistributionSpec:
        return cls(Kind.LOGISTIC, (mu, s))

    @classmethod
    def weibull(cls, scale: float, shape: float) -> DistributionSpec:
        return cls(Kind.WEIBULL, (scale, shape))

    @classmethod
    def uniform(cls, a: float, b: float) -> DistributionSpec:
        return cls(Kind.UNIFORM, (a, b))

    def cdf(self, x: Any) -> Any:
        return cdf(self, x)

    def quantile(self, p: Any) -> Any:
        return quantile(self, p)

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "params": list(self.params)}


def _result(values: np.ndarray) -> Any:
    return float(values) if values.ndim == 0 else values


def cdf(d: DistributionSpec, x: Any) -> Any:
    """Evaluate ``P(X <= x)``. Infinite ``x`` is allowed, NaN raises ``ValueError``."""
    x = np.asarray(x, dtype=float)
    if np.isnan(x).any():
        raise ValueError("cdf is undefined at NaN")
    return _result(_cdf(d, x))


def quantile(d: DistributionSpec, p: Any) -> Any:
    """Inverse CDF on the open interval (0, 1); endpoints raise ``ValueError``."""
    p = np.asarray(p, dtype=float)
    if not ((p > 0.0) & (p < 1.0)).all():
        raise ValueError("quantile requires 0 < p < 1")
    return _result(_ppf(d, p))


def _cdf(d: DistributionSpec, x: np.ndarray) -> np.ndarray:
    kind = d.kind
    loc, scale = d.params
    if kind is Kind.NORMAL:
        return ndtr((x - loc) / scale)
    if kind is Kind.CAUCHY:
        z = (x - loc) / scale
        # arctan(1/|z|)/pi avoids cancellation of 0.5 + arctan(z)/pi in the lower tail
        with np.errstate(divide="ignore"):
            lower = np.arctan2(1.0, -z) / np.pi
        return np.where(z < 0, lower, 0.5 + np.arctan(z) / np.pi)
    if kind is Kind.LOGISTIC:
        z = (x - loc) / scale
        with np.errstate(over="ignore"):
            return 1.0 / (1.0 + np.exp(-z))
    if kind is Kind.WEIBULL:
        lam, k = loc, scale
        t = np.where(x > 0, x, 0.0) / lam
        return -np.expm1(-(t**k))
    lo, hi = loc, scale
    return np.clip((x - lo) / (hi - lo), 0.0, 1.0)


def _ppf(d: DistributionSpec, p: np.ndarray) -> np.ndarray:
    """Unchecked quantile; callers guarantee 0 < p < 1."""
    kind = d.kind
    loc, scale = d.params
    if kind is Kind.NORMAL:
        return loc + scale * normal_ppf(p)
    if kind is Kind.CAUCHY:
        # 1/tan(pi*q) on the near tail keeps relative accuracy for small q
        upper = p > 0.5
        q = np.where(upper, 1.0 - p, p)
        z = 1.0 / np.tan(np.pi * q)
        return loc + scale * np.where(upper, z, -z)
    if kind is Kind.LOGISTIC:
        return loc + scale * (np.log(p) - np.log1p(-p))
    if kind is Kind.WEIBULL:
        lam, k = loc, scale
        return lam * (-np.log1p(-p)) ** (1.0 / k)
    lo, hi = loc, scale
    return lo + (hi - lo) * p


# Wichura (1988), algorithm AS241 PPND16.
_A = (3.387132872796366608, 133.14166789178437745, 1971.5909503065514427,
      13731.693765509461125, 45921.953931549871457, 67265.770927008700853,
      33430.575583588128105, 2509.0809287301226727)
_B = (1.0, 42.313330701600911252, 687.1870074920579083, 5394.1960214247511077,
      21213.794301586595867, 39307.89580009271061, 28729.085735721942674,
      5226.495278852854561)
_C = (1.42343711074968357734, 4.6303378461565452959, 5.7694972214606914055,
      3.64784832476320460504, 1.27045825245236838258, 0.24178072517745061177,
      0.0227238449892691845833, 7.7454501427834140764e-4)
_D = (1.0, 2.05319162663775882187, 1.6763848301838038494, 0.68976733498510000455,
      0.14810397642748007459, 0.0151986665636164571966, 5.475938084995344946e-4,
      1.05075007164441684324e-9)
_E = (6.6579046435011037772, 5.4637849111641143699, 1.7848265399172913358,
      0.29656057182850489123, 0.026532189526576123093, 0.0012426609473880784386,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 0.59983220655588793769, 0.13692988092273580531, 0.014875361290850615025,
      7.868691311456132591e-4, 1.8463183175100546818e-5, 1.4215117583164458887e-7,
      2.04426310338993978564e-15)

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _poly(coef: tuple[float, ...], r: np.ndarray) -> np.ndarray:
    out = np.full_like(r, coef[-1])
    for c in coef[-2::-1]:
        out = out * r + c
    return out


def normal_ppf(p: np.ndarray) -> np.ndarray:
    """Standard normal quantile: AS241 followed by one Newton step on ``ndtr``.

    The Newton step runs on the lower tail (``min(p, 1 - p)``) where ``ndtr``
    has full relative accuracy, then the sign is restored.
    """
    p = np.asarray(p, dtype=float)
    q = p - 0.5
    central = np.abs(q) <= 0.425
    tail = np.minimum(p, 1.0 - p)

    r = 0.180625 - q * q
    z_central = q * _poly(_A, r) / _poly(_B, r)

    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.sqrt(-np.log(np.where(central, 0.5, tail)))
    near = s <= 5.0
    s1 = np.where(near, s - 1.6, s - 5.0)
    z_tail = np.where(near, _poly(_C, s1) / _poly(_D, s1), _poly(_E, s1) / _poly(_F, s1))
    # z_tail is |z|; the tail branch is refined as a negative deviate
    z = np.where(central, -np.abs(z_central), -z_tail)

    dens = _INV_SQRT_2PI * np.exp(-0.5 * z * z)
    ok = dens > 1e-300
    with np.errstate(divide="ignore", invalid="ignore"):
        step = (ndtr(z) - tail) / dens
    z = np.where(ok, z - step, z)
    return np.where(q > 0, -z, z)
