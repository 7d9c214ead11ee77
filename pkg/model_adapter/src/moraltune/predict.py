"""Run a trained artifact over a canonical eval set and emit a prediction
file in the audit toolkit's wire format.

Record layout: id, group, gold bits, predicted bits, comma-joined logits; a
predicted bit is 1 exactly when sigmoid(logit) >= threshold, so the emitted
file always satisfies the consistency rule the reader enforces.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import torch

from .data import Instance, encode_batch, read_canonical
from .errors import AdapterError
from .train import LOG_NAME

_MAGIC = "#moralaudit-predictions"
_FORMAT_VERSION = 1
_DIRECTION_RE = re.compile(r"^(MFTC|MFRC)(->|<->)(MFTC|MFRC)$")


def load_artifact(artifact_dir):
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    artifact_dir = Path(artifact_dir)
    log_path = artifact_dir / LOG_NAME
    if not log_path.exists():
        raise AdapterError(f"{artifact_dir}: not a training artifact (missing {LOG_NAME})")
    log = json.loads(log_path.read_text())
    model = AutoModelForSequenceClassification.from_pretrained(artifact_dir)
    tokenizer = AutoTokenizer.from_pretrained(artifact_dir)
    model.eval()
    return model, tokenizer, log


def _logits_for(model, tokenizer, instances, max_seq_length, batch_size) -> list[list[float]]:
    out = []
    with torch.no_grad():
        for start in range(0, len(instances), batch_size):
            batch = instances[start : start + batch_size]
            enc = encode_batch(tokenizer, batch, max_seq_length)
            enc.pop("labels")
            out.extend(model(**enc).logits.double().tolist())
    return out


def predict(artifact_dir, eval_path, direction: str, out_path, threshold: float = 0.5) -> int:
    """Write predictions for every instance in the eval file; returns the
    record count."""
    if not _DIRECTION_RE.match(direction) or "<->" in direction:
        raise AdapterError(f"bad direction tag {direction!r}; expected e.g. MFTC->MFRC")
    if not (0.0 < threshold < 1.0):
        raise AdapterError(f"threshold must be in (0,1): {threshold}")
    model, tokenizer, log = load_artifact(artifact_dir)
    instances = read_canonical(eval_path)
    if not instances:
        raise AdapterError(f"{eval_path}: eval set is empty")

    config = log["config"]
    logits = _logits_for(
        model, tokenizer, instances, config["max_seq_length"], config["batch_size"]
    )
    model_name = config["family"] + ("" if log["pretrained"] else "-random-init")
    header = [
        _MAGIC,
        f"v={_FORMAT_VERSION}",
        f"model={model_name}",
        f"direction={direction}",
        f"threshold={threshold!r}",
        f"seed={config['seed']}",
    ]
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\t".join(header) + "\n")
        for inst, zs in zip(instances, logits):
            bits = "".join("1" if _sigmoid(z) >= threshold else "0" for z in zs)
            gold = "".join(str(b) for b in inst.gold)
            fh.write(
                "\t".join(
                    [inst.id, inst.platform, gold, bits, ",".join(repr(z) for z in zs)]
                )
                + "\n"
            )
    return len(instances)


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)
