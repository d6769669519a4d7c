from __future__ import annotations

import math

import numpy as np
import pytest

from ostrunc.analysis import bounds_for_area
from ostrunc.distributions import DistributionSpec
from ostrunc.problem import Problem, benchmark_problem
from ostrunc.regions import Region, enumerate_regions

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def uniform_example(lower: float = 0.5, upper: float = 0.8) -> Problem:
    """min of two Uniform(0,1) under (0.5, 0.8): region volumes 0.06, 0.09, 0.06."""
    u = DistributionSpec.uniform(0.0, 1.0)
    return Problem((u, u), 1, lower, upper)


def listed_order(problem: Problem, codes: list[str]) -> list[Region]:
    """Regions re-ordered to follow ``codes`` (strings over B/M/A)."""
    by_code = {r.code: r for r in enumerate_regions(problem)}
    assert sorted(by_code) == sorted(codes)
    return [by_code[c] for c in codes]


def random_dist(rng: np.random.Generator) -> DistributionSpec:
    kind = rng.integers(5)
    loc = rng.uniform(-10, 10)
    scale = rng.uniform(0.2, 5)
    if kind == 0:
        return DistributionSpec.cauchy(loc, scale)
    if kind == 1:
        return DistributionSpec.normal(loc, scale)
    if kind == 2:
        return DistributionSpec.logistic(loc, scale)
    if kind == 3:
        return DistributionSpec.weibull(rng.uniform(0.5, 10), rng.uniform(0.5, 4))
    return DistributionSpec.uniform(loc, loc + rng.uniform(0.5, 20))


def random_problem(rng: np.random.Generator, max_n: int = 8) -> Problem:
    """A feasible random problem; bounds are placed by target order-statistic mass."""
    n = int(rng.integers(1, max_n + 1))
    k = int(rng.integers(1, n + 1))
    free = Problem(tuple(random_dist(rng) for _ in range(n)), k)
    center = rng.uniform(0.05, 0.95)
    area = math.exp(rng.uniform(math.log(1e-4), math.log(1.9 * min(center, 1 - center))))
    lower, upper = bounds_for_area(free, area, center)
    roll = rng.random()
    if roll < 0.1:
        lower = -math.inf
    elif roll < 0.2:
        upper = math.inf
    return free.with_bounds(lower, upper)


@pytest.fixture
def bench_problem() -> Problem:
    return benchmark_problem(3.0, 8.0)


@pytest.fixture
def uniform_problem() -> Problem:
    return uniform_example()
