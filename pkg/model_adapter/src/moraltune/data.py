"""Canonical dataset I/O and tokenisation.

The canonical TSV layout (id / platform / text / gold / n_annotators, with
gold as comma-joined label names) is the input wire format shared with the
audit toolkit; this module parses it without importing that package.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch

from .errors import AdapterError

# fixed alphabetical label order -- the shared wire-format contract
LABELS = ("authority", "care", "fairness", "loyalty", "non-moral")
PLATFORMS = ("twitter", "reddit")

_HEADER = ["id", "platform", "text", "gold", "n_annotators"]


@dataclass(frozen=True)
class Instance:
    id: str
    platform: str
    text: str
    gold: tuple[int, ...]  # 5 bits in label order


def read_canonical(path) -> list[Instance]:
    instances = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header != _HEADER:
            raise AdapterError(f"{path}: unexpected canonical header {header}")
        for ln, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != len(_HEADER):
                raise AdapterError(f"{path}: line {ln}: expected {len(_HEADER)} fields")
            iid, platform, text, gold, _ = parts
            if platform not in PLATFORMS:
                raise AdapterError(f"{path}: line {ln}: unknown platform {platform!r}")
            names = gold.split(",")
            bad = [n for n in names if n not in LABELS]
            if bad:
                raise AdapterError(f"{path}: line {ln}: unknown labels {bad}")
            bits = tuple(1 if name in names else 0 for name in LABELS)
            instances.append(Instance(id=iid, platform=platform, text=text, gold=bits))
    return instances


def build_word_tokenizer(texts: list[str]):
    """Word-level tokenizer over the training vocabulary, for randomly
    initialised smoke runs where no pretrained checkpoint is wanted."""
    from tokenizers import Tokenizer, models, pre_tokenizers, processors
    from transformers import PreTrainedTokenizerFast

    vocab = {"[PAD]": 0, "[UNK]": 1, "[CLS]": 2, "[SEP]": 3}
    for text in texts:
        for word in text.split():
            if word not in vocab:
                vocab[word] = len(vocab)
    tok = Tokenizer(models.WordLevel(vocab, unk_token="[UNK]"))
    tok.pre_tokenizer = pre_tokenizers.WhitespaceSplit()
    tok.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    return PreTrainedTokenizerFast(
        tokenizer_object=tok,
        pad_token="[PAD]",
        unk_token="[UNK]",
        cls_token="[CLS]",
        sep_token="[SEP]",
    )


def encode_batch(tokenizer, instances: list[Instance], max_seq_length: int) -> dict:
    enc = tokenizer(
        [inst.text for inst in instances],
        padding=True,
        truncation=True,
        max_length=max_seq_length,
        return_tensors="pt",
    )
    enc["labels"] = torch.tensor([inst.gold for inst in instances], dtype=torch.float32)
    return enc
