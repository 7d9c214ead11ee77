"""Group fairness metrics over the platform attribute, plus the cross-domain
Moral Fairness Consistency score.

Undefined rates (empty conditioning sets) are an explicit state (None), never
a silent zero, and propagate through the difference metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import ValidationError
from .labels import LABELS, Platform
from .predio import PredictionRecord


@dataclass
class LabelRates:
    positive_rate: Optional[float]
    tpr: Optional[float]
    fpr: Optional[float]


@dataclass
class GroupRates:
    """Per-group, per-label conditional frequencies."""

    rates: dict[Platform, dict[str, LabelRates]]

    def get(self, group: Platform, label: str) -> LabelRates:
        return self.rates[group][label]


def group_rates(records: list[PredictionRecord]) -> GroupRates:
    out: dict[Platform, dict[str, LabelRates]] = {}
    for group in Platform:
        subset = [r for r in records if r.group == group]
        per_label: dict[str, LabelRates] = {}
        for i, name in enumerate(LABELS):
            if not subset:
                per_label[name] = LabelRates(None, None, None)
                continue
            preds = [r.predicted[i] for r in subset]
            golds = [r.gold[i] for r in subset]
            n_pos = sum(golds)
            n_neg = len(subset) - n_pos
            tp = sum(p for p, g in zip(preds, golds) if g)
            fpc = sum(p for p, g in zip(preds, golds) if not g)
            per_label[name] = LabelRates(
                positive_rate=sum(preds) / len(subset),
                tpr=tp / n_pos if n_pos else None,
                fpr=fpc / n_neg if n_neg else None,
            )
        out[group] = per_label
    return GroupRates(rates=out)


def dp_difference(rates: GroupRates, label: str) -> Optional[tuple[float, float]]:
    """Signed and absolute gap in predicted-positive rate, twitter minus
    reddit. None when either group's rate is undefined."""
    tw = rates.get(Platform.TWITTER, label).positive_rate
    rd = rates.get(Platform.REDDIT, label).positive_rate
    if tw is None or rd is None:
        return None
    signed = tw - rd
    return signed, abs(signed)


def eo_difference(rates: GroupRates, label: str) -> Optional[float]:
    """max(|TPR gap|, |FPR gap|) across the two groups; None if any of the
    four component rates is undefined."""
    tw = rates.get(Platform.TWITTER, label)
    rd = rates.get(Platform.REDDIT, label)
    if None in (tw.tpr, rd.tpr, tw.fpr, rd.fpr):
        return None
    return max(abs(tw.tpr - rd.tpr), abs(tw.fpr - rd.fpr))


def mfc(per_direction_rates: dict[str, dict[str, float]]) -> tuple[dict[str, float], float]:
    """Moral Fairness Consistency from per-direction detection rates.

    Input maps each cross-domain direction tag to its per-label
    predicted-positive rate. Per-label score is 1 - |rate gap| between the
    two directions; the aggregate is the mean over the 5 labels.
    """
    if len(per_direction_rates) != 2:
        raise ValidationError(
            f"MFC needs exactly two cross-domain directions, got {sorted(per_direction_rates)}"
        )
    (rates_a, rates_b) = per_direction_rates.values()
    per_label: dict[str, float] = {}
    for name in LABELS:
        if name not in rates_a or name not in rates_b:
            raise ValidationError(f"MFC: missing rate for label {name!r}")
        diff = abs(rates_a[name] - rates_b[name])
        per_label[name] = 1.0 - diff
    aggregate = sum(per_label.values()) / len(LABELS)
    return per_label, aggregate


@dataclass
class LabelFairness:
    dp_signed: Optional[float] = None
    dp_abs: Optional[float] = None
    eo: Optional[float] = None
    mfc: Optional[float] = None
    dp_abs_ci: Optional[tuple[float, float]] = None
    eo_ci: Optional[tuple[float, float]] = None
    mfc_ci: Optional[tuple[float, float]] = None


@dataclass
class FairnessReport:
    per_label: dict[str, LabelFairness] = field(default_factory=dict)
    mfc_aggregate: Optional[float] = None
    mfc_aggregate_ci: Optional[tuple[float, float]] = None


def direction_rates(records: list[PredictionRecord]) -> dict[str, float]:
    """Per-label predicted-positive rate over one direction's prediction set."""
    if not records:
        raise ValidationError("cannot compute detection rates on an empty record list")
    n = len(records)
    return {
        name: sum(r.predicted[i] for r in records) / n for i, name in enumerate(LABELS)
    }


def fairness_report(
    pooled_records: list[PredictionRecord],
    per_direction: dict[str, list[PredictionRecord]],
) -> FairnessReport:
    """Point estimates for DP, EO, and MFC (no intervals; the report layer
    attaches bootstrap CIs)."""
    rates = group_rates(pooled_records)
    dir_rates = {tag: direction_rates(recs) for tag, recs in per_direction.items()}
    mfc_per_label, mfc_agg = mfc(dir_rates)

    report = FairnessReport(mfc_aggregate=mfc_agg)
    for name in LABELS:
        lf = LabelFairness(mfc=mfc_per_label[name])
        dp = dp_difference(rates, name)
        if dp is not None:
            lf.dp_signed, lf.dp_abs = dp
        lf.eo = eo_difference(rates, name)
        report.per_label[name] = lf
    return report
