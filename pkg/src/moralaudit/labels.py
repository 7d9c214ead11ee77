"""The harmonized 5-label moral schema and the LabelSet presence vector.

Label order is fixed and alphabetical everywhere in the toolkit:
authority, care, fairness, loyalty, non-moral.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import ValidationError

LABELS: tuple[str, ...] = ("authority", "care", "fairness", "loyalty", "non-moral")
N_LABELS = len(LABELS)

_LABEL_INDEX = {name: i for i, name in enumerate(LABELS)}


class Platform(str, Enum):
    TWITTER = "twitter"
    REDDIT = "reddit"


# Corpus name <-> platform, used by prediction-file direction tags.
CORPUS_PLATFORM = {"MFTC": Platform.TWITTER, "MFRC": Platform.REDDIT}
PLATFORM_CORPUS = {v: k for k, v in CORPUS_PLATFORM.items()}


@dataclass(frozen=True)
class LabelSet:
    """Fixed-order binary presence vector over the 5 harmonized labels."""

    bits: tuple[int, int, int, int, int]

    def __post_init__(self):
        if len(self.bits) != N_LABELS:
            raise ValidationError(f"label vector arity {len(self.bits)}, expected {N_LABELS}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValidationError(f"label vector must be binary, got {self.bits}")

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "LabelSet":
        bits = [0] * N_LABELS
        for name in names:
            if name not in _LABEL_INDEX:
                raise ValidationError(f"unknown harmonized label {name!r}")
            bits[_LABEL_INDEX[name]] = 1
        return cls(tuple(bits))

    @classmethod
    def from_bitstring(cls, s: str) -> "LabelSet":
        if len(s) != N_LABELS or any(c not in "01" for c in s):
            raise ValidationError(f"bad label bitstring {s!r}")
        return cls(tuple(int(c) for c in s))

    def names(self) -> list[str]:
        """Label names present, in alphabetical (= fixed) order."""
        return [name for name, b in zip(LABELS, self.bits) if b]

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)

    def is_empty(self) -> bool:
        return not any(self.bits)

    def __getitem__(self, i: int) -> int:
        return self.bits[i]
