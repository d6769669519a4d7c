"""The bounded order-statistic problem and its JSON document format.

A problem document looks like::

    {"distributions": [{"kind": "cauchy", "params": [5, 1]}, ...],
     "k": 3,
     "bounds": {"lower": 3, "upper": 8}}

Unbounded sides are written as the strings ``"-inf"`` / ``"inf"``.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from ostrunc.distributions import PARAM_NAMES, DistributionSpec, Kind, _cdf
from ostrunc.errors import SpecError

__all__ = ["Problem", "SpecError", "parse_spec", "load_spec", "dump_spec"]


@dataclass(frozen=True)
class Problem:
    """N distributions, the order index ``k`` (1 = minimum) and bounds ``lower < Y < upper``.

    ``a[i]`` and ``b[i]`` are the distribution-``i`` CDF values at the two bounds.
    """

    dists: tuple[DistributionSpec, ...]
    k: int
    lower: float = -math.inf
    upper: float = math.inf
    a: np.ndarray = field(init=False, repr=False, compare=False)
    b: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        dists = tuple(self.dists)
        object.__setattr__(self, "dists", dists)
        n = len(dists)
        if n < 1:
            raise SpecError("distributions: need at least one distribution")
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)):
            raise SpecError(f"k: must be an integer, got {self.k!r}")
        if not 1 <= self.k <= n:
            raise SpecError(f"k out of range: k={self.k} but N={n}")
        lower, upper = float(self.lower), float(self.upper)
        if math.isnan(lower) or math.isnan(upper):
            raise SpecError("bounds: NaN is not a valid bound")
        if not lower < upper:
            raise SpecError(f"bounds: need lower < upper, got [{lower}, {upper}]")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        a = np.array([float(_cdf(d, np.asarray(lower))) for d in dists])
        b = np.array([float(_cdf(d, np.asarray(upper))) for d in dists])
        # a_i <= b_i must hold exactly; guard against rounding in the cdf
        b = np.maximum(a, b)
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.dists)

    def with_bounds(self, lower: float | None = None, upper: float | None = None) -> Problem:
        return Problem(
            self.dists,
            self.k,
            self.lower if lower is None else lower,
            self.upper if upper is None else upper,
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "distributions": [d.to_json() for d in self.dists],
            "k": self.k,
            "bounds": {"lower": _bound_out(self.lower), "upper": _bound_out(self.upper)},
        }


def _bound_out(v: float) -> float | str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _bound_in(value: Any, name: str) -> float:
    if isinstance(value, str):
        token = value.strip().lower()
        if token in ("inf", "+inf", "infinity"):
            return math.inf
        if token in ("-inf", "-infinity"):
            return -math.inf
        raise SpecError(f"bounds.{name}: unrecognised value {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"bounds.{name}: expected a number or 'inf'/'-inf', got {value!r}")
    return float(value)


def _check_keys(obj: Any, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise SpecError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise SpecError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise SpecError(f"{where}: missing field(s) {sorted(missing)}")


def _parse_dist(entry: Any, i: int) -> DistributionSpec:
    where = f"distributions[{i}]"
    _check_keys(entry, {"kind", "params"}, {"kind", "params"}, where)
    try:
        kind = Kind(str(entry["kind"]).lower())
    except ValueError:
        known = ", ".join(k.value for k in Kind)
        raise SpecError(f"{where}.kind: unknown kind {entry['kind']!r} (known: {known})") from None
    params = entry["params"]
    if not isinstance(params, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in params
    ):
        raise SpecError(f"{where}.params: expected a list of numbers {PARAM_NAMES[kind]}")
    try:
        return DistributionSpec(kind, tuple(params))
    except ValueError as exc:
        raise SpecError(f"{where}.params: {exc}") from None


def parse_spec(doc: str | dict[str, Any]) -> Problem:
    """Build a :class:`Problem` from a JSON string or an already decoded mapping."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SpecError(f"not valid JSON: {exc}") from None
    _check_keys(doc, {"distributions", "k", "bounds"}, {"distributions", "k", "bounds"}, "spec")
    entries = doc["distributions"]
    if not isinstance(entries, list) or not entries:
        raise SpecError("distributions: expected a non-empty list")
    dists = [_parse_dist(e, i) for i, e in enumerate(entries)]
    bounds = doc["bounds"]
    _check_keys(bounds, {"lower", "upper"}, {"lower", "upper"}, "bounds")
    lower = _bound_in(bounds["lower"], "lower")
    upper = _bound_in(bounds["upper"], "upper")
    return Problem(tuple(dists), doc["k"], lower, upper)


def load_spec(path: str | os.PathLike[str]) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def dump_spec(problem: Problem, path: str | os.PathLike[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem.to_json(), fh, indent=2)
        fh.write("\n")


def benchmark_problem(lower: float = 3.0, upper: float = 8.0) -> Problem:
    """Five mixed distributions with k=3; the reference problem for validation and benchmarks."""
    dists: Sequence[DistributionSpec] = (
        DistributionSpec.cauchy(5, 1),
        DistributionSpec.normal(6, 2),
        DistributionSpec.logistic(3, 2),
        DistributionSpec.weibull(10, 1.5),
        DistributionSpec.uniform(-5, 20),
    )
    return Problem(tuple(dists), 3, lower, upper)
