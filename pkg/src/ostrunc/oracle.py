"""Analytic ground truth for the bounded order statistic.

``Y = X_(k) <= y`` exactly when at least ``k`` of the indicators ``X_i <= y``
fire. The indicators are independent Bernoulli(``F_i(y)``), so the count has a
Poisson-binomial law and ``F_Y(y)`` is its upper tail from ``k``.

Nothing here is shared with the region or sampler code; the checks stay
independent of what they check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

import numpy as np

from ostrunc.distributions import _cdf
from ostrunc.errors import CapacityError, InfeasibleError
from ostrunc.problem import Problem

__all__ = [
    "PoissonBinomialTable",
    "BruteRegion",
    "poisson_binomial",
    "poisson_binomial_exhaustive",
    "order_stat_cdf",
    "order_stat_sf",
    "order_stat_cdf_exhaustive",
    "truncated_cdf",
    "bound_mass",
    "brute_force_regions",
    "in_restricted_region",
]

BRUTE_FORCE_MAX_N = 8
EXHAUSTIVE_MAX_N = 15


@dataclass(frozen=True, eq=False)
class PoissonBinomialTable:
    probs: np.ndarray
    count_dist: np.ndarray  # count_dist[j] = P(exactly j successes)


def _count_dist(probs: np.ndarray) -> np.ndarray:
    """Count distribution along the last axis; ``probs`` has shape ``(..., N)``."""
    n = probs.shape[-1]
    q = np.zeros(probs.shape[:-1] + (n + 1,))
    q[..., 0] = 1.0
    for i in range(n):
        p = probs[..., i : i + 1]
        q[..., 1 : i + 2] = q[..., 1 : i + 2] * (1.0 - p) + q[..., : i + 1] * p
        q[..., 0:1] *= 1.0 - p
    return q


def poisson_binomial(probs: Sequence[float]) -> PoissonBinomialTable:
    probs = np.asarray(probs, dtype=float)
    return PoissonBinomialTable(probs=probs, count_dist=_count_dist(probs))


def poisson_binomial_exhaustive(probs: Sequence[float]) -> np.ndarray:
    """Count distribution by summing over all 2^N success patterns."""
    probs = [float(p) for p in probs]
    n = len(probs)
    if n > EXHAUSTIVE_MAX_N:
        raise CapacityError(f"exhaustive enumeration limited to N <= {EXHAUSTIVE_MAX_N}")
    out = [[] for _ in range(n + 1)]
    for pattern in itertools.product((0, 1), repeat=n):
        term = math.prod(p if hit else 1.0 - p for p, hit in zip(probs, pattern))
        out[sum(pattern)].append(term)
    return np.array([math.fsum(terms) for terms in out])


def _indicator_probs(problem: Problem, y: Any) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return np.stack([_cdf(d, y) for d in problem.dists], axis=-1)


def _result(values: np.ndarray) -> Any:
    return float(values) if values.ndim == 0 else values


def _tails(problem: Problem, y: Any) -> tuple[np.ndarray, np.ndarray]:
    # whichever tail is below 1/2 is summed directly, the other is its complement
    q = _count_dist(_indicator_probs(problem, y))
    upper = q[..., problem.k :].sum(axis=-1)
    lower = q[..., : problem.k].sum(axis=-1)
    cdf = np.where(upper <= 0.5, upper, 1.0 - lower)
    sf = np.where(lower <= 0.5, lower, 1.0 - upper)
    return cdf, sf


def order_stat_cdf(problem: Problem, y: Any) -> Any:
    """``P(X_(k) <= y)`` by the O(N^2) Poisson-binomial recursion."""
    return _result(_tails(problem, y)[0])


def order_stat_sf(problem: Problem, y: Any) -> Any:
    """``P(X_(k) > y)``; accurate near 0 in the upper tail."""
    return _result(_tails(problem, y)[1])


def order_stat_cdf_exhaustive(problem: Problem, y: float) -> float:
    probs = _indicator_probs(problem, y)
    return math.fsum(poisson_binomial_exhaustive(probs)[problem.k :])


def bound_mass(problem: Problem) -> float:
    """``P(A < Y < B)``, the normaliser of the truncated law."""
    fa = order_stat_cdf(problem, problem.lower)
    if fa <= 0.5:
        return order_stat_cdf(problem, problem.upper) - fa
    return order_stat_sf(problem, problem.lower) - order_stat_sf(problem, problem.upper)


def truncated_cdf(problem: Problem, y: Any) -> Any:
    """CDF of ``Y`` conditioned on ``A < Y < B``, clamped to [0, 1]."""
    mass = bound_mass(problem)
    if not mass > 0:
        raise InfeasibleError(
            f"P(A<Y<B) = 0 under the given bounds (A={problem.lower}, B={problem.upper})"
        )
    y = np.asarray(y, dtype=float)
    fa = order_stat_cdf(problem, problem.lower)
    if fa <= 0.5:
        num = np.asarray(order_stat_cdf(problem, y)) - fa
    else:
        num = order_stat_sf(problem, problem.lower) - np.asarray(order_stat_sf(problem, y))
    return _result(np.clip(num / mass, 0.0, 1.0))


class BruteRegion(NamedTuple):
    assignment: tuple[int, ...]  # 0 = below A, 1 = between, 2 = above B
    volume: float


def brute_force_regions(problem: Problem) -> list[BruteRegion]:
    """Filter all 3^N labelings, in lexicographic order, keeping the admissible ones."""
    n, k = problem.n, problem.k
    if n > BRUTE_FORCE_MAX_N:
        raise CapacityError(f"brute force limited to N <= {BRUTE_FORCE_MAX_N}, got N={n}")
    a = [float(v) for v in problem.a]
    b = [float(v) for v in problem.b]
    out = []
    for labels in itertools.product((0, 1, 2), repeat=n):
        below = labels.count(0)
        between = labels.count(1)
        if below > k - 1 or below + between < k:
            continue
        sides = []
        for j, lab in enumerate(labels):
            if lab == 0:
                sides.append(a[j])
            elif lab == 1:
                sides.append(b[j] - a[j])
            else:
                sides.append(1.0 - b[j])
        out.append(BruteRegion(labels, math.prod(sides)))
    return out


def in_restricted_region(problem: Problem, u_prime: np.ndarray) -> np.ndarray:
    """Whether mapped points put the k-th smallest variate strictly inside the bounds.

    That happens when at least ``k`` coordinates sit under ``b_j`` and at least
    ``N - k + 1`` sit over ``a_j``. Rows of ``u_prime`` are points.
    """
    u_prime = np.atleast_2d(u_prime)
    under_b = (u_prime < problem.b).sum(axis=1)
    over_a = (u_prime > problem.a).sum(axis=1)
    return (under_b >= problem.k) & (over_a >= problem.n - problem.k + 1)
