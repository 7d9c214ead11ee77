"""Command-line surface: train a classifier on a canonical dataset, then emit
prediction files the audit toolkit can consume."""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from . import __version__
from .config import TrainConfig
from .errors import AdapterError


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except AdapterError as exc:
            raise click.ClickException(str(exc))

    return wrapper


@click.group()
@click.version_option(__version__)
def main():
    """Fine-tuning adapter for the moral-sentiment audit toolkit."""


@main.command()
@click.option("--train", "train_path", type=click.Path(exists=True, path_type=Path), required=True,
              help="Canonical training set (TSV).")
@click.option("--val", "val_path", type=click.Path(exists=True, path_type=Path),
              help="Canonical validation set, scored once per epoch.")
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path),
              help="TrainConfig overrides as JSON; defaults used when omitted.")
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Artifact directory.")
@_handle_errors
def train(train_path, val_path, config_path, out):
    """Fine-tune a classifier and save the model artifact."""
    from .train import train as run_train

    config = TrainConfig.from_json(config_path) if config_path else TrainConfig()
    run_train(train_path, val_path, config, out)
    click.echo(f"artifact written to {out}")


@main.command()
@click.option("--artifact", type=click.Path(exists=True, path_type=Path), required=True,
              help="Training artifact directory.")
@click.option("--eval", "eval_path", type=click.Path(exists=True, path_type=Path), required=True,
              help="Canonical eval set (TSV).")
@click.option("--direction", required=True, help="Direction tag, e.g. MFTC->MFRC.")
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Prediction file.")
@click.option("--threshold", type=float, default=0.5, show_default=True)
@_handle_errors
def predict(artifact, eval_path, direction, out, threshold):
    """Emit a prediction file for an eval set."""
    from .predict import predict as run_predict

    n = run_predict(artifact, eval_path, direction, out, threshold)
    click.echo(f"wrote {n} records to {out}")


if __name__ == "__main__":
    sys.exit(main())
