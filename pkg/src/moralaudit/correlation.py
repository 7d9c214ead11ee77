"""Spearman rank correlation with exact-permutation and asymptotic p-values,
used to validate the consistency metric against the baseline metrics.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Optional, Sequence

import numpy as np
from scipy import stats as sps

from .errors import ValidationError

BASELINE_METRICS = ("f1", "precision", "recall", "dp", "eo")

MODE_PER_LABEL = "per_label"
MODE_BOOTSTRAP_POOLED = "bootstrap_pooled"

_EXACT_MAX_N = 9  # 9! = 362880 permutations; enough for per-label use (n=5)


@dataclass
class CorrelationEntry:
    rho: Optional[float]
    p_value: Optional[float]
    n: int


@dataclass
class CorrelationReport:
    mode: str
    entries: dict[str, CorrelationEntry]


def _ranks(x: Sequence[float]) -> np.ndarray:
    return sps.rankdata(x, method="average")


def spearman(x: Sequence[float], y: Sequence[float]) -> Optional[float]:
    """Pearson correlation of average ranks. Returns None when either vector
    is constant (the coefficient is undefined, never silently 0)."""
    if len(x) != len(y):
        raise ValidationError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise ValidationError(f"need at least 3 points, got {len(x)}")
    rx, ry = _ranks(x), _ranks(y)
    if np.ptp(rx) == 0 or np.ptp(ry) == 0:
        return None
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    return float(rx @ ry / np.sqrt((rx @ rx) * (ry @ ry)))


@lru_cache(maxsize=8)
def _exact_null_distribution(n: int) -> tuple[float, ...]:
    """|rho| under the null, over all n! permutations of untied ranks."""
    base = np.arange(1, n + 1, dtype=float)
    base_c = base - base.mean()
    denom = base_c @ base_c
    rhos = []
    for perm in permutations(range(n)):
        p = base_c[list(perm)]
        rhos.append(abs(float(base_c @ p / denom)))
    return tuple(rhos)


def spearman_p(rho: float, n: int, mode: str = "exact") -> float:
    """Two-sided p-value for an observed Spearman rho.

    exact: fraction of all n! rank permutations with |rho| at least as large
    (required for small n). asymptotic: t-approximation with n-2 dof.
    """
    if n < 3:
        raise ValidationError(f"need n >= 3, got {n}")
    if mode == "exact":
        if n > _EXACT_MAX_N:
            raise ValidationError(f"exact permutation p limited to n <= {_EXACT_MAX_N}")
        null = _exact_null_distribution(n)
        tol = 1e-12
        return sum(1 for r in null if r >= abs(rho) - tol) / len(null)
    if mode == "asymptotic":
        if abs(rho) >= 1.0:
            return 0.0
        t = rho * np.sqrt((n - 2) / (1.0 - rho * rho))
        return float(2.0 * sps.t.sf(abs(t), df=n - 2))
    raise ValidationError(f"unknown p-value mode {mode!r}")


def validate_mfc(
    per_label_metrics: dict[str, Sequence[float]], mode: str = MODE_PER_LABEL
) -> CorrelationReport:
    """Correlate the consistency metric vector against each baseline metric.

    per_label mode expects the five per-label values for each metric and uses
    exact permutation p-values; bootstrap_pooled expects vectors pooled over
    bootstrap resamples and uses the asymptotic approximation.
    """
    if mode not in (MODE_PER_LABEL, MODE_BOOTSTRAP_POOLED):
        raise ValidationError(f"unknown correlation mode {mode!r}")
    if "mfc" not in per_label_metrics:
        raise ValidationError("missing metric vector 'mfc'")
    mfc_vec = list(per_label_metrics["mfc"])

    entries: dict[str, CorrelationEntry] = {}
    for name in BASELINE_METRICS:
        if name not in per_label_metrics:
            raise ValidationError(f"missing metric vector {name!r}")
        vec = list(per_label_metrics[name])
        rho = spearman(mfc_vec, vec)
        if rho is None:
            entries[name] = CorrelationEntry(rho=None, p_value=None, n=len(vec))
            continue
        p_mode = "exact" if mode == MODE_PER_LABEL else "asymptotic"
        entries[name] = CorrelationEntry(
            rho=rho, p_value=spearman_p(rho, len(vec), p_mode), n=len(vec)
        )
    return CorrelationReport(mode=mode, entries=entries)
