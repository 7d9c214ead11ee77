"""Corpus ingestion: parse the two raw moral-foundation corpora, aggregate
annotator votes, clean text, harmonize labels onto the shared 5-label schema,
and produce canonical datasets with deterministic splits.

The Twitter corpus arrives as nested JSON (corpora of tweets, each tweet with
a list of annotations); the Reddit corpus as a tabular file with one row per
(text, annotator) pair. Both are reduced to the same canonical record shape.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Optional

import numpy as np

from .errors import ParseError, ValidationError
from .labels import LABELS, LabelSet, Platform

# ---------------------------------------------------------------------------
# Source label schemas (normalized to lowercase)

MFTC_SCHEMA = frozenset(
    {
        "non-moral",
        "care",
        "harm",
        "fairness",
        "cheating",
        "loyalty",
        "betrayal",
        "authority",
        "subversion",
        "purity",
        "degradation",
    }
)
# Stray annotation tokens that occur in the wild but are not part of the
# declared schema; retained at parse stage, dropped at harmonization.
MFTC_NON_SCHEMA = frozenset({"nm", "nh"})

MFRC_SCHEMA = frozenset(
    {
        "non-moral",
        "thin morality",
        "care",
        "equality",
        "authority",
        "proportionality",
        "loyalty",
        "purity",
    }
)
MFRC_NON_SCHEMA: frozenset[str] = frozenset()

# Harmonization onto the shared 5-label target. Keys absent from the map and
# from the drop set are unknown and rejected loudly.
_SHARED_IDENTITY = {name: name for name in LABELS}
HARMONIZE_MAP = {
    Platform.TWITTER: dict(_SHARED_IDENTITY),
    Platform.REDDIT: {
        **_SHARED_IDENTITY,
        "equality": "fairness",
        "proportionality": "fairness",
    },
}
HARMONIZE_DROP = {
    Platform.TWITTER: frozenset(
        {"harm", "cheating", "betrayal", "subversion", "degradation", "purity"}
    )
    | MFTC_NON_SCHEMA,
    Platform.REDDIT: frozenset({"thin morality", "purity"}),
}

DEFAULT_AGREEMENT_THRESHOLD = 0.5


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class RawAnnotation:
    """One annotator's label assignment for one text."""

    text_id: str
    annotator_id: str
    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValidationError(
                f"annotation for {self.text_id!r} by {self.annotator_id!r} has no labels"
            )


@dataclass
class ParsedText:
    text_id: str
    text: str
    annotations: list[RawAnnotation]


@dataclass
class ParseResult:
    """Parsed corpus plus bookkeeping for the ingestion report."""

    texts: list[ParsedText]
    platform: Platform
    non_schema_labels: Counter = field(default_factory=Counter)
    warnings: list[str] = field(default_factory=list)

    @property
    def n_texts(self) -> int:
        return len(self.texts)

    @property
    def n_annotations(self) -> int:
        return sum(len(t.annotations) for t in self.texts)


@dataclass(frozen=True)
class CanonicalInstance:
    id: str
    platform: Platform
    text: str
    gold: LabelSet
    n_annotators: int

    def __post_init__(self):
        if not self.text:
            raise ValidationError(f"instance {self.id!r}: empty text")
        if self.gold.is_empty():
            raise ValidationError(f"instance {self.id!r}: empty gold label set")


@dataclass(frozen=True)
class Exclusion:
    id: str
    reason: str


@dataclass(frozen=True)
class SplitSpec:
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1)
    seed: int = 0

    def __post_init__(self):
        if len(self.ratios) != 3 or any(not (0.0 < r < 1.0) for r in self.ratios):
            raise ValidationError(f"split ratios must each lie in (0,1): {self.ratios}")
        if abs(sum(self.ratios) - 1.0) > 1e-9:
            raise ValidationError(f"split ratios must sum to 1: {self.ratios}")


@dataclass
class CorpusStats:
    n_instances: int
    label_counts: dict[str, int]
    word_count_min: Optional[int]
    word_count_median: Optional[float]
    word_count_mean: Optional[float]
    word_count_max: Optional[int]


# ---------------------------------------------------------------------------
# Parsing


def _normalize_label(raw: str) -> str:
    return raw.strip().lower()


def _decode(raw) -> str:
    if isinstance(raw, (bytes, bytearray)):
        return raw.decode("utf-8")
    if hasattr(raw, "read"):
        data = raw.read()
        return data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    return raw


def _check_duplicates(text_id: str, annotations: list[RawAnnotation]) -> None:
    seen = set()
    for ann in annotations:
        key = (ann.text_id, ann.annotator_id)
        if key in seen:
            raise ValidationError(
                f"duplicate annotation by {ann.annotator_id!r} for text {text_id!r}"
            )
        seen.add(key)


def parse_mftc(raw: bytes | str | BinaryIO) -> ParseResult:
    """Parse the nested Twitter corpus (list of corpora, each holding tweets
    with per-annotator annotations; labels comma-separated per annotation)."""
    text = _decode(raw)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed Twitter corpus JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise ParseError("Twitter corpus: expected a top-level list of corpus objects")

    result = ParseResult(texts=[], platform=Platform.TWITTER)
    for ci, corpus in enumerate(doc):
        if not isinstance(corpus, dict) or "Tweets" not in corpus:
            raise ParseError(f"Twitter corpus: corpus[{ci}] missing 'Tweets'")
        for ti, tweet in enumerate(corpus["Tweets"]):
            where = f"corpus[{ci}].Tweets[{ti}]"
            if not isinstance(tweet, dict):
                raise ParseError(f"Twitter corpus: {where} is not an object")
            try:
                text_id = str(tweet["tweet_id"])
                tweet_text = str(tweet["tweet_text"])
                ann_list = tweet["annotations"]
            except KeyError as exc:
                raise ParseError(f"Twitter corpus: {where} missing field {exc}") from exc
            annotations = []
            for ai, ann in enumerate(ann_list):
                if not isinstance(ann, dict) or "annotator" not in ann or "annotation" not in ann:
                    raise ParseError(
                        f"Twitter corpus: {where}.annotations[{ai}] missing annotator/annotation"
                    )
                labels = tuple(
                    _normalize_label(tok)
                    for tok in str(ann["annotation"]).split(",")
                    if tok.strip()
                )
                if not labels:
                    raise ParseError(
                        f"Twitter corpus: {where}.annotations[{ai}] has empty annotation"
                    )
                for lab in labels:
                    if lab not in MFTC_SCHEMA:
                        result.non_schema_labels[lab] += 1
                annotations.append(
                    RawAnnotation(text_id=text_id, annotator_id=str(ann["annotator"]), labels=labels)
                )
            _check_duplicates(text_id, annotations)
            result.texts.append(ParsedText(text_id=text_id, text=tweet_text, annotations=annotations))
    return result


MFRC_REQUIRED_COLUMNS = ("text", "annotator", "annotation")


def _mfrc_text_id(text: str) -> str:
    return "mfrc-" + hashlib.sha1(text.encode("utf-8")).hexdigest()[:12]


def parse_mfrc(raw: bytes | str | BinaryIO) -> ParseResult:
    """Parse the tabular Reddit corpus (one row per text-annotator pair).

    Rows are grouped by text; a stable id is derived from the text when the
    file carries no explicit text_id column.
    """
    text = _decode(raw)
    result = ParseResult(texts=[], platform=Platform.REDDIT)
    if not text.strip():
        result.warnings.append("Reddit corpus file is empty")
        return result

    reader = csv.DictReader(io.StringIO(text))
    fields = reader.fieldnames or []
    for col in MFRC_REQUIRED_COLUMNS:
        if col not in fields:
            raise ValidationError(f"Reddit corpus: missing required column {col!r}")

    by_id: dict[str, ParsedText] = {}
    for ri, row in enumerate(reader, start=2):
        body = row["text"]
        if body is None:
            raise ParseError(f"Reddit corpus: line {ri}: truncated row")
        text_id = row.get("text_id") or _mfrc_text_id(body)
        labels = tuple(
            _normalize_label(tok) for tok in (row["annotation"] or "").split(",") if tok.strip()
        )
        if not labels:
            raise ParseError(f"Reddit corpus: line {ri}: empty annotation")
        for lab in labels:
            if lab not in MFRC_SCHEMA:
                result.non_schema_labels[lab] += 1
        ann = RawAnnotation(text_id=text_id, annotator_id=str(row["annotator"]), labels=labels)
        entry = by_id.get(text_id)
        if entry is None:
            entry = ParsedText(text_id=text_id, text=body, annotations=[])
            by_id[text_id] = entry
            result.texts.append(entry)
        entry.annotations.append(ann)

    for entry in result.texts:
        _check_duplicates(entry.text_id, entry.annotations)
    return result


# ---------------------------------------------------------------------------
# Cleaning, aggregation, harmonization

# Retained character class: letters, digits, space, and . , ' ? !
_STRIP_RE = re.compile(r"[^a-z0-9 .,'?!]+")
_WS_RE = re.compile(r"\s+")


def clean_text(s: str) -> str:
    """Lowercase, collapse whitespace, drop characters outside the retained
    class. Idempotent; may return an empty string (caller decides exclusion).
    No stemming or lemmatization."""
    s = _WS_RE.sub(" ", s.lower())
    s = _STRIP_RE.sub("", s)
    return _WS_RE.sub(" ", s).strip()


def aggregate_annotations(
    annotations: Iterable[RawAnnotation], threshold: float = DEFAULT_AGREEMENT_THRESHOLD
) -> set[str]:
    """Vote aggregation: a source label survives iff at least `threshold`
    of the annotators assigned it (>= comparison, so exactly 50% passes)."""
    annotations = list(annotations)
    if not annotations:
        raise ValidationError("cannot aggregate an empty annotation list")
    if not (0.0 < threshold <= 1.0):
        raise ValidationError(f"agreement threshold must be in (0,1]: {threshold}")
    n = len(annotations)
    votes: Counter = Counter()
    for ann in annotations:
        for lab in set(ann.labels):
            votes[lab] += 1
    return {lab for lab, v in votes.items() if v / n >= threshold}


EXCLUDED = None  # sentinel: harmonized label set came out empty


def harmonize_labels(source_labels: Iterable[str], platform: Platform) -> Optional[LabelSet]:
    """Map a source-schema label set onto the shared 5-label schema.

    Returns None (Excluded) when nothing survives. Unknown label names raise;
    dropping is reserved for labels the schema declares droppable.
    """
    mapping = HARMONIZE_MAP[platform]
    drop = HARMONIZE_DROP[platform]
    out: set[str] = set()
    for lab in source_labels:
        lab = _normalize_label(lab)
        if lab in mapping:
            out.add(mapping[lab])
        elif lab in drop:
            continue
        else:
            raise ValidationError(f"unknown label {lab!r} for platform {platform.value}")
    if not out:
        return EXCLUDED
    return LabelSet.from_names(out)


def build_canonical(
    parsed: ParseResult, threshold: float = DEFAULT_AGREEMENT_THRESHOLD
) -> tuple[list[CanonicalInstance], list[Exclusion]]:
    """Full per-text pipeline: clean, aggregate, harmonize. Texts whose
    cleaned body or harmonized label set is empty go to the exclusion list."""
    instances: list[CanonicalInstance] = []
    exclusions: list[Exclusion] = []
    for entry in parsed.texts:
        cleaned = clean_text(entry.text)
        if not cleaned:
            exclusions.append(Exclusion(entry.text_id, "empty-text-after-cleaning"))
            continue
        agreed = aggregate_annotations(entry.annotations, threshold)
        if not agreed:
            exclusions.append(Exclusion(entry.text_id, "no-label-reached-agreement"))
            continue
        gold = harmonize_labels(agreed, parsed.platform)
        if gold is EXCLUDED:
            dropped = ",".join(sorted(agreed))
            exclusions.append(Exclusion(entry.text_id, f"empty-after-harmonization:{dropped}"))
            continue
        instances.append(
            CanonicalInstance(
                id=entry.text_id,
                platform=parsed.platform,
                text=cleaned,
                gold=gold,
                n_annotators=len(entry.annotations),
            )
        )
    return instances, exclusions


# ---------------------------------------------------------------------------
# Splits


def split_in_domain(
    dataset: list[CanonicalInstance], spec: SplitSpec
) -> tuple[list[CanonicalInstance], list[CanonicalInstance], list[CanonicalInstance]]:
    """Deterministic train/val/test partition.

    Instances are ordered by id, shuffled with a seeded PCG64 generator, and
    cut at floor(n*ratio) for val and test with the remainder going to train.
    """
    if len(dataset) < 3:
        raise ValidationError(f"dataset of size {len(dataset)} is too small to split")
    n = len(dataset)
    n_val = math.floor(n * spec.ratios[1])
    n_test = math.floor(n * spec.ratios[2])
    n_train = n - n_val - n_test

    ordered = sorted(dataset, key=lambda inst: inst.id)
    rng = np.random.default_rng(spec.seed)
    perm = rng.permutation(n)
    shuffled = [ordered[i] for i in perm]
    return (
        shuffled[:n_train],
        shuffled[n_train : n_train + n_val],
        shuffled[n_train + n_val :],
    )


# ---------------------------------------------------------------------------
# Stats


def corpus_stats(dataset: list[CanonicalInstance]) -> CorpusStats:
    counts = {name: 0 for name in LABELS}
    for inst in dataset:
        for name in inst.gold.names():
            counts[name] += 1
    if not dataset:
        return CorpusStats(0, counts, None, None, None, None)
    words = np.array([len(inst.text.split()) for inst in dataset])
    return CorpusStats(
        n_instances=len(dataset),
        label_counts=counts,
        word_count_min=int(words.min()),
        word_count_median=float(np.median(words)),
        word_count_mean=float(words.mean()),
        word_count_max=int(words.max()),
    )


# ---------------------------------------------------------------------------
# Canonical dataset serialization (tab-delimited, one instance per line)

_CANONICAL_HEADER = ["id", "platform", "text", "gold", "n_annotators"]


def write_canonical(instances: list[CanonicalInstance], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\t".join(_CANONICAL_HEADER) + "\n")
        for inst in instances:
            fh.write(
                "\t".join(
                    [
                        inst.id,
                        inst.platform.value,
                        inst.text,
                        ",".join(inst.gold.names()),
                        str(inst.n_annotators),
                    ]
                )
                + "\n"
            )


def read_canonical(path) -> list[CanonicalInstance]:
    instances = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header != _CANONICAL_HEADER:
            raise ParseError(f"{path}: unexpected canonical header {header}")
        for ln, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != len(_CANONICAL_HEADER):
                raise ParseError(f"{path}: line {ln}: expected {len(_CANONICAL_HEADER)} fields")
            iid, platform, text, gold, n_ann = parts
            instances.append(
                CanonicalInstance(
                    id=iid,
                    platform=Platform(platform),
                    text=text,
                    gold=LabelSet.from_names(gold.split(",")),
                    n_annotators=int(n_ann),
                )
            )
    return instances


def write_exclusions(exclusions: list[Exclusion], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("id\treason\n")
        for exc in exclusions:
            fh.write(f"{exc.id}\t{exc.reason}\n")
