"""Exact sampling of bounded order statistics of non-identical random variables."""

from ostrunc.distributions import DistributionSpec, Kind, cdf, quantile
from ostrunc.errors import BudgetExceeded, CapacityError, InfeasibleError, SpecError
from ostrunc.problem import Problem, load_spec, parse_spec
from ostrunc.regions import (
    Region,
    RegionTable,
    acceptance_probability,
    build_table,
    enumerate_regions,
    locate_region,
)
from ostrunc.sampler import (
    SampleBatch,
    SampleRecord,
    draw,
    draw_many,
    make_rng,
    map_point,
    rejection_draw,
)

__all__ = [
    "BudgetExceeded",
    "CapacityError",
    "DistributionSpec",
    "InfeasibleError",
    "Kind",
    "Problem",
    "Region",
    "RegionTable",
    "SampleBatch",
    "SampleRecord",
    "SpecError",
    "acceptance_probability",
    "build_table",
    "cdf",
    "draw",
    "draw_many",
    "enumerate_regions",
    "load_spec",
    "locate_region",
    "make_rng",
    "map_point",
    "parse_spec",
    "quantile",
    "rejection_draw",
]

__version__ = "0.1.0"
