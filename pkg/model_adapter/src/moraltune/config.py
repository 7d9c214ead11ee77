"""Run configuration for fine-tuning.

Defaults follow the published training recipe: AdamW at 2e-5 for five epochs
with a multi-label BCE objective. Sequence length and batch size are not
pinned by that recipe; the defaults here (256 / 32) are recorded in every
training log so runs stay comparable.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .errors import AdapterError

# model family -> pretrained checkpoint name
FAMILIES = {
    "compact-encoder": "distilbert-base-uncased",
    "full-encoder": "bert-base-uncased",
}


@dataclass(frozen=True)
class EncoderSize:
    """Dimensions for a randomly initialised encoder.

    When set, the run skips the pretrained checkpoint entirely and builds a
    word-level vocabulary from the training set -- meant for offline smoke
    runs, not for reproducing published numbers.
    """

    hidden_size: int = 32
    num_layers: int = 2
    num_heads: int = 2
    intermediate_size: int = 64

    def __post_init__(self):
        for field in dataclasses.fields(self):
            if getattr(self, field.name) < 1:
                raise AdapterError(f"encoder size {field.name} must be positive")
        if self.hidden_size % self.num_heads != 0:
            raise AdapterError("hidden_size must be divisible by num_heads")


@dataclass(frozen=True)
class TrainConfig:
    family: str = "compact-encoder"
    learning_rate: float = 2e-5
    epochs: int = 5
    seed: int = 0
    max_seq_length: int = 256
    batch_size: int = 32
    encoder_size: EncoderSize | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise AdapterError(
                f"unknown model family {self.family!r}; expected one of {sorted(FAMILIES)}"
            )
        if self.learning_rate <= 0:
            raise AdapterError("learning rate must be positive")
        if self.epochs < 1:
            raise AdapterError("epochs must be at least 1")
        if self.max_seq_length < 8:
            raise AdapterError("max sequence length must be at least 8")
        if self.batch_size < 1:
            raise AdapterError("batch size must be at least 1")

    def to_dict(self) -> dict:
        doc = dataclasses.asdict(self)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "TrainConfig":
        doc = dict(doc)
        size = doc.pop("encoder_size", None)
        if size is not None:
            size = EncoderSize(**size)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise AdapterError(f"unknown config keys: {sorted(unknown)}")
        return cls(encoder_size=size, **doc)

    @classmethod
    def from_json(cls, path) -> "TrainConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise AdapterError(f"{path}: cannot read config: {exc}")
        if not isinstance(doc, dict):
            raise AdapterError(f"{path}: config must be a JSON object")
        return cls.from_dict(doc)
