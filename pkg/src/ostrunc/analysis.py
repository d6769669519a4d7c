"""Statistical validation gates and the mapped-vs-rejection timing harness."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from ostrunc import oracle
from ostrunc.errors import BudgetExceeded, InfeasibleError
from ostrunc.problem import Problem
from ostrunc.regions import acceptance_probability, build_table
from ostrunc.sampler import DEFAULT_BUDGET, make_rng, sample_mapped, sample_rejection

__all__ = [
    "EcdfSummary",
    "BenchRow",
    "Gate",
    "KS_C_01",
    "ks_critical",
    "dkw_bound",
    "ks_two_sample",
    "ks_against_cdf",
    "bounds_for_area",
    "bench_compare",
    "validate",
]

# asymptotic two-sample Kolmogorov-Smirnov coefficient c(alpha) at alpha = 0.01
KS_C_01 = 1.628
ALPHA = 0.01


def ks_critical(n: int, m: int, c: float = KS_C_01) -> float:
    return c * math.sqrt((n + m) / (n * m))


def dkw_bound(n: int, alpha: float = ALPHA) -> float:
    """Half-width of the Dvoretzky-Kiefer-Wolfowitz band holding with prob. 1 - alpha."""
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


@dataclass(frozen=True, eq=False)
class EcdfSummary:
    values: np.ndarray
    n: int

    @classmethod
    def of(cls, sample: Sequence[float] | np.ndarray) -> EcdfSummary:
        values = np.sort(np.asarray(sample, dtype=float).ravel())
        if values.size == 0:
            raise ValueError("an ECDF needs at least one value")
        values.setflags(write=False)
        return cls(values, int(values.size))

    def __call__(self, y: float | np.ndarray) -> float | np.ndarray:
        """Right-continuous ECDF evaluated at ``y``."""
        out = np.searchsorted(self.values, y, side="right") / self.n
        return float(out) if np.ndim(out) == 0 else out


def _as_ecdf(x: EcdfSummary | Sequence[float] | np.ndarray) -> EcdfSummary:
    return x if isinstance(x, EcdfSummary) else EcdfSummary.of(x)


def ks_two_sample(x, y) -> tuple[float, float]:
    """Two-sample KS distance and its alpha = 0.01 critical value."""
    ex, ey = _as_ecdf(x), _as_ecdf(y)
    grid = np.concatenate((ex.values, ey.values))
    d = float(np.max(np.abs(ex(grid) - ey(grid))))
    return d, ks_critical(ex.n, ey.n)


def ks_against_cdf(x, problem: Problem) -> float:
    """One-sample KS distance between a sample and the oracle's truncated CDF."""
    ex = _as_ecdf(x)
    f = np.asarray(oracle.truncated_cdf(problem, ex.values))
    i = np.arange(1, ex.n + 1)
    return float(max(np.max(i / ex.n - f), np.max(f - (i - 1) / ex.n)))


def bounds_for_area(problem: Problem, area: float, center: float = 0.5) -> tuple[float, float]:
    """Bounds ``(A, B)`` with ``F_Y(A) = center - area/2`` and ``F_Y(B) = center + area/2``.

    Each endpoint is solved on the oracle CDF of the unbounded problem.
    """
    if not 0 < area < 1 or not area / 2 < center < 1 - area / 2:
        raise ValueError(f"area {area} does not fit around centre {center}")
    free = problem.with_bounds(-math.inf, math.inf)

    def solve(target: float) -> float:
        lo, hi = -1.0, 1.0
        while oracle.order_stat_cdf(free, lo) > target:
            lo *= 2.0
        while oracle.order_stat_cdf(free, hi) < target:
            hi *= 2.0
        return brentq(lambda y: oracle.order_stat_cdf(free, y) - target, lo, hi,
                      xtol=1e-13, rtol=1e-14)

    return solve(center - area / 2), solve(center + area / 2)


@dataclass
class BenchRow:
    bounds: str
    pdf_area: float
    n: int
    method: str
    total_s: float
    per_draw_s: float
    attempts_mean: float
    status: str = "ok"
    table_s: float = field(default=0.0, repr=False)

    CSV_HEADER = ("bounds", "pdf_area", "n", "method", "total_s", "per_draw_s",
                  "attempts_mean", "status")

    def csv_fields(self) -> list[object]:
        return [self.bounds, self.pdf_area, self.n, self.method, self.total_s,
                self.per_draw_s, self.attempts_mean, self.status]


def _label(lower: float, upper: float) -> str:
    return f"({lower:.6g},{upper:.6g})"


def bench_compare(
    problem: Problem,
    bounds_list: Sequence[tuple[float, float]],
    n_list: Sequence[int],
    seed: int,
    repeats: int = 3,
    warmup: int = 100,
    budget: int = DEFAULT_BUDGET,
) -> list[BenchRow]:
    """Time both methods for every (bounds, n) cell.

    Only the draw loop is timed (best of ``repeats``, after ``warmup`` draws).
    Table construction is timed once per bounds and stored on the mapped rows
    as ``table_s``. Infeasible bounds and exhausted rejection budgets become
    flagged rows instead of stopping the sweep.
    """
    rows: list[BenchRow] = []
    for lower, upper in bounds_list:
        label = _label(lower, upper)
        p = problem.with_bounds(lower, upper)
        t0 = time.perf_counter()
        try:
            table = build_table(p)
        except InfeasibleError:
            for n in n_list:
                for method in ("mapped", "rejection"):
                    rows.append(BenchRow(label, 0.0, n, method, math.nan, math.nan,
                                         math.nan, "infeasible"))
            continue
        table_s = time.perf_counter() - t0
        area = acceptance_probability(table)

        sample_mapped(p, table, warmup, make_rng(seed))
        try:
            sample_rejection(p, warmup, make_rng(seed), budget)
            rejection_ok = True
        except BudgetExceeded:
            rejection_ok = False

        for n in n_list:
            best = math.inf
            for _ in range(repeats):
                rng = make_rng(seed)
                t0 = time.perf_counter()
                sample_mapped(p, table, n, rng)
                best = min(best, time.perf_counter() - t0)
            rows.append(BenchRow(label, area, n, "mapped", best, best / n, 1.0, "ok", table_s))

            if not rejection_ok:
                rows.append(BenchRow(label, area, n, "rejection", math.nan, math.nan,
                                     math.nan, "incomplete"))
                continue
            best = math.inf
            attempts = math.nan
            status = "ok"
            for _ in range(repeats):
                rng = make_rng(seed)
                t0 = time.perf_counter()
                try:
                    batch = sample_rejection(p, n, rng, budget)
                except BudgetExceeded:
                    status = "incomplete"
                    break
                best = min(best, time.perf_counter() - t0)
                attempts = batch.attempts_mean
            if status != "ok":
                best = math.nan
            rows.append(BenchRow(label, area, n, "rejection", best, best / n, attempts, status))
    return rows


@dataclass(frozen=True)
class Gate:
    name: str
    value: float
    threshold: float
    passed: bool
    note: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name}: {self.value:.6g} (limit {self.threshold:.6g}){' ' + self.note if self.note else ''}"


def validate(problem: Problem, n: int, seed: int, budget: int = DEFAULT_BUDGET) -> list[Gate]:
    """Run the statistical gates on one problem at alpha = 0.01.

    The mapped sample uses ``seed`` and the rejection sample ``seed + 1`` so
    the two are independent.
    """
    table = build_table(problem)
    area = acceptance_probability(table)
    mapped = sample_mapped(problem, table, n, make_rng(seed))
    gates = []
    violations = int(np.count_nonzero(~((mapped.y > problem.lower) & (mapped.y < problem.upper))))
    gates.append(Gate("bound violations (mapped)", violations, 0, violations == 0))
    oracle_mass = oracle.bound_mass(problem)
    gap = abs(oracle_mass - area)
    gates.append(Gate("acceptance probability vs oracle", gap, 1e-10, gap <= 1e-10))
    dkw = dkw_bound(n)
    d = ks_against_cdf(mapped.y, problem)
    gates.append(Gate("KS mapped vs oracle CDF", d, dkw, d <= dkw))
    try:
        rejected = sample_rejection(problem, n, make_rng(seed + 1), budget)
    except BudgetExceeded as exc:
        gates.append(Gate("rejection sample", exc.attempts, budget, False, str(exc)))
        return gates
    d2, crit = ks_two_sample(mapped.y, rejected.y)
    gates.append(Gate("KS mapped vs rejection", d2, crit, d2 < crit))
    d3 = ks_against_cdf(rejected.y, problem)
    gates.append(Gate("KS rejection vs oracle CDF", d3, dkw, d3 <= dkw))
    expected = 1.0 / area
    rel = abs(rejected.attempts_mean - expected) / expected
    gates.append(Gate("rejection attempts vs 1/area (rel. error)", rel, 0.2, rel <= 0.2))
    return gates
