"""Fine-tuning loop: AdamW, BCE-with-logits over the 5-label head, fixed
epoch count with no early stopping. The validation set is only scored, never
used to pick a checkpoint."""

from __future__ import annotations

import json
import random
from pathlib import Path

import numpy as np
import torch
from torch.optim import AdamW

from . import __version__
from .config import FAMILIES, TrainConfig
from .data import LABELS, Instance, build_word_tokenizer, encode_batch, read_canonical
from .errors import AdapterError

LOG_NAME = "training_log.json"


def _seed_everything(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed % 2**32)
    torch.manual_seed(seed)


def _build_model_and_tokenizer(config: TrainConfig, train_texts: list[str]):
    from transformers import BertConfig, BertForSequenceClassification

    if config.encoder_size is not None:
        tokenizer = build_word_tokenizer(train_texts)
        size = config.encoder_size
        model_config = BertConfig(
            vocab_size=len(tokenizer),
            hidden_size=size.hidden_size,
            num_hidden_layers=size.num_layers,
            num_attention_heads=size.num_heads,
            intermediate_size=size.intermediate_size,
            max_position_embeddings=config.max_seq_length + 2,
            num_labels=len(LABELS),
            problem_type="multi_label_classification",
            pad_token_id=tokenizer.pad_token_id,
        )
        model = BertForSequenceClassification(model_config)
        return model, tokenizer

    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    checkpoint = FAMILIES[config.family]
    tokenizer = AutoTokenizer.from_pretrained(checkpoint)
    model = AutoModelForSequenceClassification.from_pretrained(
        checkpoint,
        num_labels=len(LABELS),
        problem_type="multi_label_classification",
    )
    return model, tokenizer


def _batches(instances: list[Instance], batch_size: int, order=None):
    idx = list(range(len(instances))) if order is None else list(order)
    for start in range(0, len(idx), batch_size):
        yield [instances[i] for i in idx[start : start + batch_size]]


def _epoch_loss(model, tokenizer, instances, config, optimizer=None, rng=None) -> float:
    """One pass over the data; trains when an optimizer is given."""
    loss_fn = torch.nn.BCEWithLogitsLoss()
    training = optimizer is not None
    model.train(training)
    order = None
    if training:
        order = list(range(len(instances)))
        rng.shuffle(order)
    total, count = 0.0, 0
    for batch in _batches(instances, config.batch_size, order):
        enc = encode_batch(tokenizer, batch, config.max_seq_length)
        labels = enc.pop("labels")
        with torch.set_grad_enabled(training):
            logits = model(**enc).logits
            loss = loss_fn(logits, labels)
        if training:
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
        total += loss.item() * len(batch)
        count += len(batch)
    return total / count


def train(train_path, val_path, config: TrainConfig, out_dir) -> Path:
    """Fine-tune on a canonical training file and save the artifact directory
    (weights + tokenizer + training log)."""
    train_set = read_canonical(train_path)
    if not train_set:
        raise AdapterError(f"{train_path}: training set is empty")
    val_set = read_canonical(val_path) if val_path is not None else []

    _seed_everything(config.seed)
    model, tokenizer = _build_model_and_tokenizer(config, [i.text for i in train_set])
    optimizer = AdamW(model.parameters(), lr=config.learning_rate)
    shuffle_rng = random.Random(config.seed)

    log = {
        "tool_version": __version__,
        "config": config.to_dict(),
        "pretrained": config.encoder_size is None,
        "n_train": len(train_set),
        "n_val": len(val_set),
        "epochs": [],
    }
    for epoch in range(config.epochs):
        train_loss = _epoch_loss(model, tokenizer, train_set, config, optimizer, shuffle_rng)
        entry = {"epoch": epoch + 1, "train_loss": train_loss}
        if val_set:
            entry["val_loss"] = _epoch_loss(model, tokenizer, val_set, config)
        log["epochs"].append(entry)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    (out_dir / LOG_NAME).write_text(json.dumps(log, indent=2, sort_keys=True) + "\n")
    return out_dir
