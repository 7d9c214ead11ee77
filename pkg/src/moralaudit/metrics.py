"""Performance metrics for multi-label prediction sets: BCE-with-logits loss,
micro-F1, Exact Match Ratio, and per-label precision/recall/F1.

Zero-denominator conventions: every ratio whose denominator is 0 is defined
as 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .labels import LABELS, N_LABELS, LabelSet
from .predio import PredictionRecord


@dataclass
class ConfusionCounts:
    """Per-label TP/FP/FN/TN over a record list."""

    tp: dict[str, int]
    fp: dict[str, int]
    fn: dict[str, int]
    tn: dict[str, int]
    n_records: int

    def totals(self) -> tuple[int, int, int, int]:
        return (
            sum(self.tp.values()),
            sum(self.fp.values()),
            sum(self.fn.values()),
            sum(self.tn.values()),
        )


@dataclass
class MetricReport:
    loss: float | None
    micro_f1: float
    emr: float
    per_label: dict[str, tuple[float, float, float]]  # label -> (precision, recall, f1)


def confusion(records: list[PredictionRecord]) -> ConfusionCounts:
    if not records:
        raise ValidationError("cannot compute confusion counts for an empty record list")
    tp = {name: 0 for name in LABELS}
    fp = dict(tp)
    fn = dict(tp)
    tn = dict(tp)
    for rec in records:
        for name, g, p in zip(LABELS, rec.gold.bits, rec.predicted.bits):
            if g and p:
                tp[name] += 1
            elif not g and p:
                fp[name] += 1
            elif g and not p:
                fn[name] += 1
            else:
                tn[name] += 1
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn, n_records=len(records))


def micro_f1(counts: ConfusionCounts) -> float:
    tp, fp, fn, _ = counts.totals()
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def exact_match_ratio(records: list[PredictionRecord]) -> float:
    if not records:
        raise ValidationError("cannot compute EMR for an empty record list")
    hits = sum(1 for rec in records if rec.predicted.bits == rec.gold.bits)
    return hits / len(records)


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def per_label_prf(counts: ConfusionCounts) -> dict[str, tuple[float, float, float]]:
    return {
        name: _prf(counts.tp[name], counts.fp[name], counts.fn[name]) for name in LABELS
    }


def bce_with_logits(logits: list[tuple[float, ...]], golds: list[LabelSet]) -> float:
    """Mean over records of the per-record BCE loss averaged over the 5 labels,
    in the numerically stable softplus form:

        elementwise loss = y * softplus(-z) + (1 - y) * softplus(z)
    """
    if len(logits) != len(golds):
        raise ValidationError("logits and golds are not aligned")
    if not logits:
        raise ValidationError("cannot compute loss on an empty list")
    for i, z in enumerate(logits):
        if z is None:
            raise ValidationError(f"record {i}: missing logits")
    z = np.asarray(logits, dtype=float)
    y = np.asarray([g.bits for g in golds], dtype=float)
    if z.shape != (len(golds), N_LABELS):
        raise ValidationError(f"bad logits shape {z.shape}")
    # softplus(x) = log(1 + e^x) computed as logaddexp(0, x)
    elem = y * np.logaddexp(0.0, -z) + (1.0 - y) * np.logaddexp(0.0, z)
    return float(elem.mean(axis=1).mean())


def degradation(in_domain_f1: float, cross_domain_f1: float) -> float:
    """Micro-F1 drop from in-domain to cross-domain, in absolute percentage
    points: (in - cross) * 100."""
    return (in_domain_f1 - cross_domain_f1) * 100.0


def metric_report(records: list[PredictionRecord]) -> MetricReport:
    counts = confusion(records)
    loss = None
    if all(rec.logits is not None for rec in records):
        loss = bce_with_logits([rec.logits for rec in records], [rec.gold for rec in records])
    return MetricReport(
        loss=loss,
        micro_f1=micro_f1(counts),
        emr=exact_match_ratio(records),
        per_label=per_label_prf(counts),
    )
