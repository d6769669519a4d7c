"""Partition of the bound-restricted unit hypercube into axis-aligned boxes.

Each coordinate ``u'_j`` of an admissible point lies in one of three intervals:
``(0, a_j)`` (BELOW, the variate falls under the lower bound), ``(a_j, b_j)``
(MID, inside the bounds) or ``(b_j, 1)`` (ABOVE). A region is one assignment
of these labels with at most ``k - 1`` BELOW coordinates and at least ``k``
coordinates that are BELOW or MID; those are exactly the boxes on which the
k-th smallest variate lands strictly between the bounds.

The region table slices the last source coordinate into consecutive slabs
whose widths are the normalised region volumes.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from ostrunc.errors import CapacityError, InfeasibleError
from ostrunc.problem import Problem

__all__ = [
    "BELOW",
    "MID",
    "ABOVE",
    "Region",
    "RegionTable",
    "CapacityError",
    "InfeasibleError",
    "max_n",
    "enumerate_regions",
    "build_table",
    "locate_region",
    "acceptance_probability",
]

BELOW, MID, ABOVE = 0, 1, 2
LABELS = "BMA"

DEFAULT_MAX_N = 12


@dataclass(frozen=True)
class Region:
    assignment: tuple[int, ...]
    volume: float

    @property
    def code(self) -> str:
        """Assignment as a string over ``B``/``M``/``A``."""
        return "".join(LABELS[v] for v in self.assignment)


def max_n() -> int:
    """Largest N allowed; ``OSTRUNC_MAX_N`` overrides the default of 12."""
    raw = os.environ.get("OSTRUNC_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise CapacityError(f"OSTRUNC_MAX_N must be an integer, got {raw!r}") from None
    if value < 1:
        raise CapacityError(f"OSTRUNC_MAX_N must be >= 1, got {value}")
    return value


def _check_capacity(n: int, cap: int | None) -> None:
    cap = max_n() if cap is None else cap
    if n > cap:
        raise CapacityError(
            f"N={n} exceeds the region cap of {cap} (up to 3^{n} = {3**n:,} regions); "
            "raise OSTRUNC_MAX_N to allow it"
        )


def _assignments(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Admissible assignments in lexicographic order (BELOW < MID < ABOVE)."""
    out = [0] * n

    def rec(j: int, below: int, in_bounds: int) -> Iterator[tuple[int, ...]]:
        # in_bounds counts BELOW + MID so far
        if j == n:
            yield tuple(out)
            return
        remaining = n - j - 1
        if below < k - 1:
            out[j] = BELOW
            yield from rec(j + 1, below + 1, in_bounds + 1)
        out[j] = MID
        yield from rec(j + 1, below, in_bounds + 1)
        if in_bounds + remaining >= k:
            out[j] = ABOVE
            yield from rec(j + 1, below, in_bounds)

    return rec(0, 0, 0)


def _interval_bounds(problem: Problem, assignments: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b = problem.a, problem.b
    lo = np.choose(assignments, [np.zeros_like(a), a, b])
    hi = np.choose(assignments, [a, b, np.ones_like(b)])
    return lo, hi


def _volumes(problem: Problem, assignments: np.ndarray) -> np.ndarray:
    lo, hi = _interval_bounds(problem, assignments)
    return np.prod(hi - lo, axis=1)


def enumerate_regions(problem: Problem, cap: int | None = None) -> list[Region]:
    """All admissible regions in canonical order, zero-volume ones included."""
    _check_capacity(problem.n, cap)
    codes = list(_assignments(problem.n, problem.k))
    vols = _volumes(problem, np.array(codes, dtype=np.int8).reshape(len(codes), problem.n))
    regions = []
    for code, vol in zip(codes, vols):
        assert code.count(MID) >= 1
        regions.append(Region(code, float(vol)))
    return regions


def _running_sums(values: np.ndarray) -> np.ndarray:
    """Prefix sums with Neumaier compensation."""
    out = np.empty(len(values))
    total = 0.0
    comp = 0.0
    for i, v in enumerate(values.tolist()):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        out[i] = total + comp
    return out


@dataclass(frozen=True, eq=False)
class RegionTable:
    """Positive-volume regions with their slab positions on the last source axis.

    ``cumulative[s]`` is the right edge of slab ``s``; slab ``s`` covers
    ``[cumulative[s-1], cumulative[s])`` with an implicit left edge of 0 for
    the first slab. ``lo``/``hi`` hold the interval ends of each region's box
    in the restricted cube, one row per region.
    """

    assignments: np.ndarray
    volumes: np.ndarray
    fractions: np.ndarray
    cumulative: np.ndarray
    total_volume: float
    lo: np.ndarray
    hi: np.ndarray

    def __len__(self) -> int:
        return len(self.volumes)

    @property
    def regions(self) -> list[Region]:
        return [
            Region(tuple(int(v) for v in row), float(vol))
            for row, vol in zip(self.assignments, self.volumes)
        ]

    @cached_property
    def starts(self) -> np.ndarray:
        """Left slab edges."""
        return np.concatenate(([0.0], self.cumulative[:-1]))

    @cached_property
    def slab_widths(self) -> np.ndarray:
        return self.cumulative - self.starts

    @cached_property
    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    @cached_property
    def open_lo(self) -> np.ndarray:
        """``lo`` moved one representable step up, so mapped points never touch it."""
        return np.nextafter(self.lo, np.inf)

    @cached_property
    def open_hi(self) -> np.ndarray:
        return np.nextafter(self.hi, -np.inf)

    def codes(self) -> list[str]:
        return ["".join(LABELS[v] for v in row) for row in self.assignments]


def build_table(
    problem: Problem,
    regions: Sequence[Region] | None = None,
    cap: int | None = None,
) -> RegionTable:
    """Prune zero-volume regions and lay the rest out as slabs.

    ``total_volume`` is the exact sum over every positive-volume region. Regions
    too small to own a representable slab (fraction below about 1e-16) are
    dropped from the table; they could never be selected.

    ``regions`` may supply a different (complete) ordering of the admissible
    set; any fixed order gives a valid sampler. The default is the canonical
    order from :func:`enumerate_regions`.
    """
    if regions is None:
        regions = enumerate_regions(problem, cap)
    n = problem.n
    codes = np.array([r.assignment for r in regions], dtype=np.int8).reshape(len(regions), n)
    vols = _volumes(problem, codes)
    keep = vols > 0
    if not keep.any():
        raise InfeasibleError(
            f"P(A<Y<B) = 0 under the given bounds (A={problem.lower}, B={problem.upper})"
        )
    codes, vols = codes[keep], vols[keep]
    total = math.fsum(vols.tolist())
    cumulative = _running_sums(vols) / total
    cumulative[-1] = 1.0
    # a region whose slab rounds to zero width can never be selected
    reachable = np.diff(cumulative, prepend=0.0) > 0
    if not reachable.all():
        codes, vols, cumulative = codes[reachable], vols[reachable], cumulative[reachable]
    lo, hi = _interval_bounds(problem, codes)
    for arr in (codes, vols, cumulative, lo, hi):
        arr.setflags(write=False)
    fractions = vols / total
    fractions.setflags(write=False)
    return RegionTable(
        assignments=codes,
        volumes=vols,
        fractions=fractions,
        cumulative=cumulative,
        total_volume=total,
        lo=lo,
        hi=hi,
    )


def locate_region(table: RegionTable, u_last: float | np.ndarray) -> int | np.ndarray:
    """Index of the slab containing ``u_last`` (binary search, half-open slabs).

    A value on a slab boundary belongs to the slab on its right. ``u_last >= 1``
    falls into the last slab.
    """
    idx = np.searchsorted(table.cumulative, u_last, side="right")
    idx = np.minimum(idx, len(table.cumulative) - 1)
    return int(idx) if np.ndim(idx) == 0 else idx


def acceptance_probability(table: RegionTable) -> float:
    """``P(A < Y < B)``: the volume of the restricted region."""
    return table.total_volume
