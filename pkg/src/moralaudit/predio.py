"""Prediction-file wire format linking classifiers to the audit core.

Tab-delimited, one record per line, with a single header line:

    #moralaudit-predictions<TAB>v=1<TAB>model=...<TAB>direction=MFRC->MFTC
        <TAB>threshold=0.5<TAB>seed=...

Record lines: id, group, gold bits (5 chars of 0/1 in fixed label order),
predicted bits, and optionally the 5 comma-separated raw logits. Floats are
serialized with repr() so a read-back reproduces the set bit-exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConsistencyError, ParseError, ValidationError
from .labels import N_LABELS, LabelSet, Platform

FORMAT_VERSION = 1
_MAGIC = "#moralaudit-predictions"

# Source and target corpus must both be stated; "<->" marks a pooled set
# holding records from both cross-domain directions.
_DIRECTION_RE = re.compile(r"^(MFTC|MFRC)(->|<->)(MFTC|MFRC)$")


def validate_direction(tag: str) -> None:
    m = _DIRECTION_RE.match(tag)
    if not m:
        raise ValidationError(
            f"bad direction tag {tag!r}: expected SOURCE->TARGET over MFTC/MFRC"
        )
    if m.group(2) == "<->" and m.group(1) == m.group(3):
        raise ValidationError(f"pooled direction tag {tag!r} must name both corpora")


def sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


@dataclass(frozen=True)
class PredictionRecord:
    id: str
    group: Platform
    gold: LabelSet
    predicted: LabelSet
    logits: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.logits is not None and len(self.logits) != N_LABELS:
            raise ValidationError(f"record {self.id!r}: logits arity {len(self.logits)}")

    def check_threshold_consistency(self, threshold: float) -> None:
        """Predicted bits must equal elementwise sigmoid(logit) >= threshold."""
        if self.logits is None:
            return
        for i, (z, p) in enumerate(zip(self.logits, self.predicted.bits)):
            want = 1 if sigmoid(z) >= threshold else 0
            if p != want:
                raise ConsistencyError(
                    f"record {self.id!r}: predicted bit {i} is {p} but logit {z!r} "
                    f"implies {want} at threshold {threshold}"
                )


@dataclass
class PredictionSet:
    records: list[PredictionRecord]
    model: str
    direction: str
    threshold: float = 0.5
    seed: Optional[int] = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not self.records:
            raise ValidationError("prediction set must contain at least one record")
        validate_direction(self.direction)
        if not (0.0 < self.threshold < 1.0):
            raise ValidationError(f"threshold must be in (0,1): {self.threshold}")
        seen: set[str] = set()
        for rec in self.records:
            if rec.id in seen:
                raise ValidationError(f"duplicate record id {rec.id!r}")
            seen.add(rec.id)
            rec.check_threshold_consistency(self.threshold)


def _parse_bits(token: str, line_no: int, name: str) -> LabelSet:
    if len(token) != N_LABELS or any(c not in "01" for c in token):
        raise ParseError(f"line {line_no}: {name} arity {len(token)}")
    return LabelSet.from_bitstring(token)


def read_predictions(path) -> PredictionSet:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        fields = header.split("\t")
        if not fields or fields[0] != _MAGIC:
            raise ParseError(f"{path}: not a prediction file (bad magic)")
        meta = {}
        for tok in fields[1:]:
            if "=" not in tok:
                raise ParseError(f"{path}: malformed header field {tok!r}")
            key, _, value = tok.partition("=")
            meta[key] = value
        for key in ("v", "model", "direction", "threshold"):
            if key not in meta:
                raise ParseError(f"{path}: header missing field {key!r}")
        if int(meta["v"]) != FORMAT_VERSION:
            raise ParseError(f"{path}: unsupported format version {meta['v']}")
        seed = None
        if "seed" in meta:
            try:
                seed = int(meta["seed"])
            except ValueError:
                raise ParseError(f"{path}: non-integer seed {meta['seed']!r}")

        records = []
        for ln, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) not in (4, 5):
                raise ParseError(f"line {ln}: expected 4 or 5 fields, got {len(parts)}")
            rid, group, gold_s, pred_s = parts[:4]
            try:
                platform = Platform(group)
            except ValueError:
                raise ParseError(f"line {ln}: group must be twitter/reddit, got {group!r}")
            gold = _parse_bits(gold_s, ln, "gold")
            pred = _parse_bits(pred_s, ln, "predicted")
            logits = None
            if len(parts) == 5:
                toks = parts[4].split(",")
                if len(toks) != N_LABELS:
                    raise ParseError(f"line {ln}: logits arity {len(toks)}")
                try:
                    logits = tuple(float(t) for t in toks)
                except ValueError:
                    raise ParseError(f"line {ln}: non-numeric logit")
            records.append(
                PredictionRecord(id=rid, group=platform, gold=gold, predicted=pred, logits=logits)
            )

    return PredictionSet(
        records=records,
        model=meta["model"],
        direction=meta["direction"],
        threshold=float(meta["threshold"]),
        seed=seed,
    )


def write_predictions(pset: PredictionSet, path) -> None:
    pset.validate()
    header = [
        _MAGIC,
        f"v={FORMAT_VERSION}",
        f"model={pset.model}",
        f"direction={pset.direction}",
        f"threshold={pset.threshold!r}",
    ]
    if pset.seed is not None:
        header.append(f"seed={pset.seed}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\t".join(header) + "\n")
        for rec in pset.records:
            parts = [rec.id, rec.group.value, rec.gold.bitstring(), rec.predicted.bitstring()]
            if rec.logits is not None:
                parts.append(",".join(repr(z) for z in rec.logits))
            fh.write("\t".join(parts) + "\n")
