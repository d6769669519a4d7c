"""Draw bounded order-statistic samples by mapping uniform points into the restricted cube.

The mapped method spends exactly N uniforms per sample: the last coordinate
picks a region slab and is then rescaled to a fresh uniform inside that slab,
every coordinate is stretched affinely onto its interval of the region's box,
and the inverse CDFs turn the mapped point into variates. The rejection method
draws unrestricted variates until the k-th smallest lands inside the bounds.

Both methods read uniforms row by row from one generator, so a batch of n
samples is identical to n consecutive single draws from the same stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Literal

import numpy as np

from ostrunc.distributions import _ppf
from ostrunc.errors import BudgetExceeded
from ostrunc.problem import Problem
from ostrunc.regions import RegionTable, build_table, locate_region

__all__ = [
    "BudgetExceeded",
    "SampleRecord",
    "SampleBatch",
    "DEFAULT_BUDGET",
    "make_rng",
    "map_point",
    "map_points",
    "draw",
    "sample_mapped",
    "sample_rejection",
    "rejection_draw",
    "draw_many",
]

Method = Literal["mapped", "rejection"]

DEFAULT_BUDGET = 10**8
CHUNK_ROWS = 1 << 16
# smallest positive uniform we let reach a quantile function
_TINY = 2.0**-54


def make_rng(seed: int | None) -> np.random.Generator:
    """Seeded PCG64 generator; the same seed always yields the same stream."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True, eq=False)
class SampleRecord:
    """One draw. ``region`` is ``None`` for rejection samples."""

    u: np.ndarray
    region: int | None
    u_prime: np.ndarray
    x: np.ndarray
    y: float
    attempts: int = 1


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Column-oriented collection of draws; indexing yields :class:`SampleRecord`.

    ``region`` is -1 throughout for rejection batches.
    """

    method: str
    u: np.ndarray
    region: np.ndarray
    u_prime: np.ndarray
    x: np.ndarray
    y: np.ndarray
    attempts: np.ndarray

    def __len__(self) -> int:
        return len(self.y)

    def __getitem__(self, i: int) -> SampleRecord:
        region = int(self.region[i])
        return SampleRecord(
            u=self.u[i],
            region=None if region < 0 else region,
            u_prime=self.u_prime[i],
            x=self.x[i],
            y=float(self.y[i]),
            attempts=int(self.attempts[i]),
        )

    def __iter__(self) -> Iterator[SampleRecord]:
        for i in range(len(self)):
            yield self[i]

    @cached_property
    def attempts_mean(self) -> float:
        return float(self.attempts.mean())


def map_points(table: RegionTable, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map rows of ``u`` (shape ``(m, N)``, values in [0, 1)) into the restricted cube.

    Returns the slab index of each row and the mapped points, which lie strictly
    inside the open intervals of their region.
    """
    last = u[:, -1]
    s = np.atleast_1d(locate_region(table, last))
    t = u.copy()
    t[:, -1] = (last - table.starts[s]) / table.slab_widths[s]
    up = table.lo[s] + table.widths[s] * t
    np.clip(up, table.open_lo[s], table.open_hi[s], out=up)
    return s, up


def map_point(table: RegionTable, problem: Problem, u: np.ndarray) -> tuple[int, np.ndarray]:
    """Single-point form of :func:`map_points`."""
    u = np.asarray(u, dtype=float)
    if u.shape != (problem.n,):
        raise ValueError(f"expected a point of length {problem.n}, got shape {u.shape}")
    s, up = map_points(table, u[None, :])
    return int(s[0]), up[0]


def _variates(problem: Problem, up: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.empty_like(up)
    for j, d in enumerate(problem.dists):
        x[:, j] = _ppf(d, up[:, j])
    k = problem.k - 1
    y = np.partition(x, k, axis=1)[:, k]
    return x, y


def draw(problem: Problem, table: RegionTable, rng: np.random.Generator) -> SampleRecord:
    u = rng.random((1, problem.n))
    s, up = map_points(table, u)
    x, y = _variates(problem, up)
    return SampleRecord(u=u[0], region=int(s[0]), u_prime=up[0], x=x[0], y=float(y[0]))


def sample_mapped(
    problem: Problem, table: RegionTable, n: int, rng: np.random.Generator
) -> SampleBatch:
    """``n`` mapped draws, consuming exactly ``n * N`` uniforms from ``rng``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    N = problem.n
    us, ss, ups, xs, ys = [], [], [], [], []
    left = n
    while left:
        m = min(left, CHUNK_ROWS)
        u = rng.random((m, N))
        s, up = map_points(table, u)
        x, y = _variates(problem, up)
        us.append(u)
        ss.append(s)
        ups.append(up)
        xs.append(x)
        ys.append(y)
        left -= m
    return SampleBatch(
        method="mapped",
        u=np.concatenate(us),
        region=np.concatenate(ss),
        u_prime=np.concatenate(ups),
        x=np.concatenate(xs),
        y=np.concatenate(ys),
        attempts=np.ones(n, dtype=np.int64),
    )


def _accepts(problem: Problem, y: np.ndarray) -> np.ndarray:
    return (y > problem.lower) & (y < problem.upper)


def rejection_draw(
    problem: Problem, rng: np.random.Generator, budget: int = DEFAULT_BUDGET
) -> tuple[SampleRecord, int]:
    """Draw unrestricted samples until one satisfies the bounds.

    Returns the accepted record and the number of attempts it took.
    """
    for attempt in range(1, budget + 1):
        u = rng.random((1, problem.n))
        up = np.maximum(u, _TINY)
        x, y = _variates(problem, up)
        if _accepts(problem, y)[0]:
            rec = SampleRecord(
                u=u[0], region=None, u_prime=up[0], x=x[0], y=float(y[0]), attempts=attempt
            )
            return rec, attempt
    raise BudgetExceeded(budget, budget)


def sample_rejection(
    problem: Problem, n: int, rng: np.random.Generator, budget: int = DEFAULT_BUDGET
) -> SampleBatch:
    """``n`` rejection draws, evaluated in vectorised chunks.

    Candidates are read from ``rng`` in the same order as repeated
    :func:`rejection_draw` calls, so the accepted samples match exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    N = problem.n
    us, ups, xs, ys, att = [], [], [], [], []
    accepted = 0
    tried = 0
    pending = 0  # attempts spent on the sample currently being searched for
    while accepted < n:
        need = n - accepted
        rate = accepted / tried if accepted else 1.0 / max(tried, 1)
        m = int(min(max(need / max(rate, 1e-12) * 1.1 + 16, 16), CHUNK_ROWS))
        u = rng.random((m, N))
        up = np.maximum(u, _TINY)
        x, y = _variates(problem, up)
        hit = np.flatnonzero(_accepts(problem, y))[:need]
        tried += m
        if len(hit):
            gaps = np.diff(hit, prepend=-1)
            gaps[0] += pending
            over = np.flatnonzero(gaps > budget)
            if len(over):
                raise BudgetExceeded(int(gaps[over[0]]), budget, accepted + int(over[0]))
            us.append(u[hit])
            ups.append(up[hit])
            xs.append(x[hit])
            ys.append(y[hit])
            att.append(gaps)
            accepted += len(hit)
            pending = m - 1 - int(hit[-1])
        else:
            pending += m
        if pending >= budget and accepted < n:
            raise BudgetExceeded(pending, budget, accepted)
    return SampleBatch(
        method="rejection",
        u=np.concatenate(us),
        region=np.full(n, -1, dtype=np.intp),
        u_prime=np.concatenate(ups),
        x=np.concatenate(xs),
        y=np.concatenate(ys),
        attempts=np.concatenate(att).astype(np.int64),
    )


def draw_many(
    problem: Problem,
    n: int,
    seed: int | None,
    method: Method = "mapped",
    table: RegionTable | None = None,
    budget: int = DEFAULT_BUDGET,
) -> SampleBatch:
    """``n`` draws with a fresh generator seeded by ``seed``.

    ``table`` may be passed to skip rebuilding it; it must come from ``problem``.
    """
    rng = make_rng(seed)
    if method == "mapped":
        if table is None:
            table = build_table(problem)
        return sample_mapped(problem, table, n, rng)
    if method == "rejection":
        return sample_rejection(problem, n, rng, budget)
    raise ValueError(f"unknown method {method!r}; expected 'mapped' or 'rejection'")
