"""Synthetic prediction sets with analytically known group rates.

Serves as a brute-force oracle for the fairness metrics and as demo input
when no trained model is available. Labels are generated independently per
record; gold bits follow the base rate, predicted bits follow TPR (gold 1)
or FPR (gold 0).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .labels import LABELS, N_LABELS, LabelSet, Platform
from .predio import PredictionRecord, PredictionSet

POOLED_DIRECTION = "MFRC<->MFTC"


@dataclass(frozen=True)
class GroupLabelRates:
    base: float
    tpr: float
    fpr: float

    def __post_init__(self):
        for name in ("base", "tpr", "fpr"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValidationError(f"{name} must be in [0,1]: {v}")


@dataclass(frozen=True)
class SynthConfig:
    # rates[group][label] -> GroupLabelRates
    rates: dict[Platform, dict[str, GroupLabelRates]]
    n_per_group: int
    seed: int

    def __post_init__(self):
        if self.n_per_group < 1:
            raise ValidationError(f"n_per_group must be >= 1: {self.n_per_group}")
        for group in Platform:
            if group not in self.rates:
                raise ValidationError(f"missing rates for group {group.value}")
            for name in LABELS:
                if name not in self.rates[group]:
                    raise ValidationError(f"missing rates for {group.value}/{name}")

    @classmethod
    def uniform(cls, base: float, tpr: float, fpr: float, n_per_group: int, seed: int):
        rates = {
            group: {name: GroupLabelRates(base, tpr, fpr) for name in LABELS}
            for group in Platform
        }
        return cls(rates=rates, n_per_group=n_per_group, seed=seed)

    @classmethod
    def from_json(cls, path) -> "SynthConfig":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        try:
            rates = {
                Platform(group): {
                    name: GroupLabelRates(**spec) for name, spec in labels.items()
                }
                for group, labels in doc["rates"].items()
            }
            return cls(rates=rates, n_per_group=int(doc["n_per_group"]), seed=int(doc["seed"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad synth config {path}: {exc}") from exc


def generate(config: SynthConfig) -> PredictionSet:
    """Deterministic single-stream generation; same seed, same bytes."""
    rng = np.random.default_rng(config.seed)
    records: list[PredictionRecord] = []
    for group in Platform:  # fixed iteration order: twitter then reddit
        spec = config.rates[group]
        base = np.array([spec[name].base for name in LABELS])
        tpr = np.array([spec[name].tpr for name in LABELS])
        fpr = np.array([spec[name].fpr for name in LABELS])
        n = config.n_per_group
        gold = (rng.random((n, N_LABELS)) < base).astype(int)
        u = rng.random((n, N_LABELS))
        pred = np.where(gold == 1, (u < tpr).astype(int), (u < fpr).astype(int))
        for i in range(n):
            records.append(
                PredictionRecord(
                    id=f"synth-{group.value}-{i:06d}",
                    group=group,
                    gold=LabelSet(tuple(int(b) for b in gold[i])),
                    predicted=LabelSet(tuple(int(b) for b in pred[i])),
                )
            )
    return PredictionSet(
        records=records,
        model="synthgen",
        direction=POOLED_DIRECTION,
        seed=str(config.seed),
    )


def generate_direction_sets(config: SynthConfig) -> dict[str, PredictionSet]:
    """The pooled synthetic set split into the two cross-domain directions:
    twitter records play the MFRC->MFTC evaluation, reddit the MFTC->MFRC."""
    pooled = generate(config)
    by_dir = {
        "MFRC->MFTC": [r for r in pooled.records if r.group == Platform.TWITTER],
        "MFTC->MFRC": [r for r in pooled.records if r.group == Platform.REDDIT],
    }
    return {
        tag: PredictionSet(records=recs, model="synthgen", direction=tag, seed=str(config.seed))
        for tag, recs in by_dir.items()
    }


@dataclass
class ExpectedLabelMetrics:
    positive_rate: dict[Platform, float]
    tpr: dict[Platform, float]
    fpr: dict[Platform, float]
    dp_signed: float
    dp_abs: float
    eo: float


def expected_metrics(config: SynthConfig) -> dict[str, ExpectedLabelMetrics]:
    """Closed-form expectations per label: positive rate by total probability,
    DP as the twitter-reddit gap, EO as max(|TPR gap|, |FPR gap|)."""
    out: dict[str, ExpectedLabelMetrics] = {}
    for name in LABELS:
        pos, tpr, fpr = {}, {}, {}
        for group in Platform:
            r = config.rates[group][name]
            pos[group] = r.base * r.tpr + (1.0 - r.base) * r.fpr
            tpr[group] = r.tpr
            fpr[group] = r.fpr
        signed = pos[Platform.TWITTER] - pos[Platform.REDDIT]
        eo = max(
            abs(tpr[Platform.TWITTER] - tpr[Platform.REDDIT]),
            abs(fpr[Platform.TWITTER] - fpr[Platform.REDDIT]),
        )
        out[name] = ExpectedLabelMetrics(
            positive_rate=pos, tpr=tpr, fpr=fpr, dp_signed=signed, dp_abs=abs(signed), eo=eo
        )
    return out
