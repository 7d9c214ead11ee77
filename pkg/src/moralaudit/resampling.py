"""Percentile-bootstrap confidence intervals with full seeded determinism.

Resample r draws its indices from a generator seeded by the pair (seed, r),
so results are independent of evaluation order or parallelism. Percentiles
use the nearest-rank rule on the sorted resample statistics, which makes the
bounds bit-reproducible and monotone in the confidence level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, TypeVar

import numpy as np

from .errors import ValidationError

T = TypeVar("T")

DEFAULT_N_RESAMPLES = 1000
DEFAULT_LEVEL = 0.95


@dataclass(frozen=True)
class BootstrapSpec:
    n_resamples: int = DEFAULT_N_RESAMPLES
    level: float = DEFAULT_LEVEL
    seed: int = 0

    def __post_init__(self):
        if self.n_resamples < 1:
            raise ValidationError(f"n_resamples must be >= 1: {self.n_resamples}")
        if not (0.0 < self.level < 1.0):
            raise ValidationError(f"confidence level must be in (0,1): {self.level}")


@dataclass(frozen=True)
class IntervalEstimate:
    point: float
    lo: float
    hi: float


def resample_indices(n: int, spec: BootstrapSpec, r: int) -> np.ndarray:
    """Index array for resample r; deterministic in (seed, r)."""
    rng = np.random.default_rng([spec.seed, r])
    return rng.integers(0, n, size=n)


def _nearest_rank(sorted_stats: Sequence[float], q: float) -> float:
    # 1-based rank ceil(q*n), clamped to [1, n]
    n = len(sorted_stats)
    rank = min(max(math.ceil(q * n), 1), n)
    return sorted_stats[rank - 1]


def percentile_interval(stats: Sequence[float], level: float) -> tuple[float, float]:
    ordered = sorted(stats)
    alpha = 1.0 - level
    return _nearest_rank(ordered, alpha / 2.0), _nearest_rank(ordered, 1.0 - alpha / 2.0)


def bootstrap_ci(
    statistic: Callable[[list[T]], Optional[float]],
    records: Sequence[T],
    spec: BootstrapSpec,
) -> IntervalEstimate:
    """Percentile bootstrap CI for a scalar statistic of a record list.

    The statistic may return None on a degenerate resample; such resamples
    are skipped. If every resample is undefined, this is an error.
    """
    results = bootstrap_ci_many({"stat": statistic}, records, spec)
    return results["stat"]


def bootstrap_ci_many(
    statistics: dict[str, Callable[[list[T]], Optional[float]]],
    records: Sequence[T],
    spec: BootstrapSpec,
) -> dict[str, IntervalEstimate]:
    """Bootstrap several statistics over one shared stream of resamples."""
    records = list(records)
    if not records:
        raise ValidationError("cannot bootstrap an empty record list")
    n = len(records)

    points = {name: fn(records) for name, fn in statistics.items()}
    values: dict[str, list[float]] = {name: [] for name in statistics}
    for r in range(spec.n_resamples):
        idx = resample_indices(n, spec, r)
        sample = [records[i] for i in idx]
        for name, fn in statistics.items():
            v = fn(sample)
            if v is not None:
                values[name].append(v)

    out = {}
    for name in statistics:
        if not values[name]:
            raise ValidationError(
                f"statistic {name!r} was undefined on every bootstrap resample"
            )
        lo, hi = percentile_interval(values[name], spec.level)
        point = points[name]
        if point is None:
            raise ValidationError(f"statistic {name!r} is undefined on the full sample")
        out[name] = IntervalEstimate(point=float(point), lo=float(lo), hi=float(hi))
    return out
