"""Command-line surface: ingest corpora, audit prediction files, and render
reports plus figures.

Commands: ingest, audit, fairness, mfc, correlate, synth, stats.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import __version__
from .corpus import (
    SplitSpec,
    build_canonical,
    corpus_stats,
    parse_mfrc,
    parse_mftc,
    read_canonical,
    split_in_domain,
    write_canonical,
    write_exclusions,
)
from .correlation import MODE_BOOTSTRAP_POOLED, MODE_PER_LABEL
from .errors import MoralAuditError
from .fairness import direction_rates, mfc as mfc_metric
from .labels import LABELS
from .predio import read_predictions, write_predictions
from .report import (
    CROSS_SCENARIOS,
    FORMATS,
    build_audit_report,
    file_sha256,
    render,
)
from .resampling import BootstrapSpec
from .synthgen import SynthConfig, generate

_CORR_MODES = {"per-label": MODE_PER_LABEL, "bootstrap-pooled": MODE_BOOTSTRAP_POOLED}


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except MoralAuditError as exc:
            raise click.ClickException(str(exc))

    return wrapper


def _boot_options(fn):
    fn = click.option("--seed", type=int, default=0, show_default=True, help="Bootstrap seed.")(fn)
    fn = click.option("--boot-n", type=int, default=1000, show_default=True, help="Bootstrap resamples.")(fn)
    fn = click.option("--boot-level", type=float, default=0.95, show_default=True, help="CI level.")(fn)
    return fn


@click.group()
@click.version_option(__version__)
def main():
    """Fairness audit toolkit for cross-platform moral sentiment classifiers."""


@main.command()
@click.option("--mftc", type=click.Path(exists=True, path_type=Path), help="Raw Twitter corpus (nested JSON).")
@click.option("--mfrc", type=click.Path(exists=True, path_type=Path), help="Raw Reddit corpus (tabular).")
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Output directory.")
@click.option("--seed", type=int, default=0, show_default=True, help="Split shuffle seed.")
@click.option("--ratios", default="0.8,0.1,0.1", show_default=True, help="Train/val/test fractions.")
@click.option("--agreement", type=float, default=0.5, show_default=True, help="Annotator agreement threshold.")
@click.option("--no-split", is_flag=True, help="Skip writing the train/val/test split files.")
@_handle_errors
def ingest(mftc, mfrc, out, seed, ratios, agreement, no_split):
    """Parse raw corpora into canonical datasets, exclusion sidecars, and
    deterministic splits."""
    if mftc is None and mfrc is None:
        raise click.ClickException("provide at least one of --mftc / --mfrc")
    out.mkdir(parents=True, exist_ok=True)
    spec = SplitSpec(ratios=tuple(float(r) for r in ratios.split(",")), seed=seed)

    meta = {"tool_version": __version__, "seed": seed, "ratios": spec.ratios, "agreement": agreement, "corpora": {}}
    jobs = []
    if mftc is not None:
        jobs.append(("mftc", mftc, parse_mftc))
    if mfrc is not None:
        jobs.append(("mfrc", mfrc, parse_mfrc))
    for name, path, parser in jobs:
        with open(path, "rb") as fh:
            parsed = parser(fh)
        for warning in parsed.warnings:
            click.echo(f"warning: {warning}", err=True)
        instances, exclusions = build_canonical(parsed, agreement)
        write_canonical(instances, out / f"{name}_canonical.tsv")
        write_exclusions(exclusions, out / f"{name}_exclusions.tsv")
        if not no_split:
            train, val, test = split_in_domain(instances, spec)
            for part, data in (("train", train), ("val", val), ("test", test)):
                write_canonical(data, out / f"{name}_{part}.tsv")
        meta["corpora"][name] = {
            "input": str(path),
            "input_sha256": file_sha256(path),
            "n_texts": parsed.n_texts,
            "n_annotations": parsed.n_annotations,
            "n_canonical": len(instances),
            "n_excluded": len(exclusions),
            "non_schema_labels": dict(sorted(parsed.non_schema_labels.items())),
        }
        click.echo(
            f"{name}: {parsed.n_texts} texts, {parsed.n_annotations} annotations -> "
            f"{len(instances)} canonical, {len(exclusions)} excluded"
        )
    (out / "ingest_meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _load_prediction_sets(paths):
    sets, hashes = {}, {}
    for path in paths:
        pset = read_predictions(path)
        if pset.direction in sets:
            raise click.ClickException(f"duplicate scenario direction {pset.direction!r}")
        sets[pset.direction] = pset
        hashes[str(path)] = file_sha256(path)
    return sets, hashes


@main.command()
@click.option("--pred", "preds", type=click.Path(exists=True, path_type=Path), multiple=True, required=True,
              help="Prediction file (repeat for each scenario).")
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Report directory.")
@click.option("--corr-mode", type=click.Choice(sorted(_CORR_MODES)), default="per-label", show_default=True)
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="csv", show_default=True,
              help="Delimited rendering written next to the structured report.")
@click.option("--figures/--no-figures", default=True, show_default=True)
@_boot_options
@_handle_errors
def audit(preds, out, corr_mode, fmt, figures, seed, boot_n, boot_level):
    """Full audit: performance tables, degradation, fairness, MFC, and the
    correlation validation, with bootstrap CIs."""
    sets, hashes = _load_prediction_sets(preds)
    boot = BootstrapSpec(n_resamples=boot_n, level=boot_level, seed=seed)
    report = build_audit_report(sets, boot, _CORR_MODES[corr_mode], hashes)

    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_bytes(render(report, "structured"))
    ext = {"csv": "csv", "markdown-table": "md", "structured": "json"}[fmt]
    if fmt != "structured":
        (out / f"report.{ext}").write_bytes(render(report, fmt))
    if figures:
        from . import figures as figmod

        if report["scenarios"]:
            figmod.degradation_figure(report, out / "micro_f1_by_scenario.png")
        if report["fairness"] is not None:
            figmod.fairness_figure(report, out / "fairness_gaps.png")
            figmod.mfc_figure(report, out / "mfc_by_label.png")
    for gap in report["gaps"]:
        click.echo(f"note: scenario {gap} absent from input; section marked as gap", err=True)
    click.echo(f"report written to {out}")


def _cross_sets_or_fail(sets):
    missing = [tag for tag in CROSS_SCENARIOS if tag not in sets]
    if missing:
        raise click.ClickException(f"missing cross-domain prediction files for: {', '.join(missing)}")
    return {tag: sets[tag] for tag in CROSS_SCENARIOS}


@main.command()
@click.option("--pred", "preds", type=click.Path(exists=True, path_type=Path), multiple=True, required=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="csv", show_default=True)
@click.option("--figures/--no-figures", default=True, show_default=True)
@_boot_options
@_handle_errors
def fairness(preds, out, fmt, figures, seed, boot_n, boot_level):
    """Fairness-only report (DP, EO, MFC) from the two cross-domain files."""
    sets, hashes = _load_prediction_sets(preds)
    cross = _cross_sets_or_fail(sets)
    boot = BootstrapSpec(n_resamples=boot_n, level=boot_level, seed=seed)
    report = build_audit_report(cross, boot, MODE_PER_LABEL, hashes)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_bytes(render(report, "structured"))
    if fmt != "structured":
        ext = "md" if fmt == "markdown-table" else "csv"
        (out / f"report.{ext}").write_bytes(render(report, fmt))
    if figures:
        from . import figures as figmod

        figmod.fairness_figure(report, out / "fairness_gaps.png")
        figmod.mfc_figure(report, out / "mfc_by_label.png")
    click.echo(f"fairness report written to {out}")


@main.command()
@click.option("--pred", "preds", type=click.Path(exists=True, path_type=Path), multiple=True, required=True)
@_handle_errors
def mfc(preds):
    """Print per-label MFC and the aggregate from two cross-domain files."""
    sets, _ = _load_prediction_sets(preds)
    cross = _cross_sets_or_fail(sets)
    rates = {tag: direction_rates(p.records) for tag, p in cross.items()}
    per_label, aggregate = mfc_metric(rates)
    for name in LABELS:
        click.echo(f"{name}\t{per_label[name]:.4f}")
    click.echo(f"aggregate\t{aggregate:.4f}")


@main.command()
@click.option("--pred", "preds", type=click.Path(exists=True, path_type=Path), multiple=True, required=True)
@click.option("--corr-mode", type=click.Choice(sorted(_CORR_MODES)), default="per-label", show_default=True)
@_boot_options
@_handle_errors
def correlate(preds, corr_mode, seed, boot_n, boot_level):
    """Spearman correlation of MFC against the baseline metrics."""
    from .report import _correlation_section

    sets, _ = _load_prediction_sets(preds)
    cross = _cross_sets_or_fail(sets)
    boot = BootstrapSpec(n_resamples=boot_n, level=boot_level, seed=seed)
    section = _correlation_section(cross, boot, _CORR_MODES[corr_mode])
    click.echo(f"mode: {section['mode']}")
    for name, entry in section["baselines"].items():
        rho = "n/a" if entry["rho"] is None else f"{entry['rho']:+.4f}"
        p = "n/a" if entry["p_value"] is None else f"{entry['p_value']:.4f}"
        click.echo(f"{name}\trho={rho}\tp={p}\tn={entry['n']}")


@main.command()
@click.option("--config", type=click.Path(exists=True, path_type=Path), required=True,
              help="Synthetic generator config (JSON).")
@click.option("--out", type=click.Path(path_type=Path), required=True, help="Output prediction file.")
@_handle_errors
def synth(config, out):
    """Generate a synthetic prediction set with known group rates."""
    cfg = SynthConfig.from_json(config)
    pset = generate(cfg)
    write_predictions(pset, out)
    click.echo(f"wrote {len(pset.records)} records to {out}")


@main.command()
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True,
              help="Canonical dataset file.")
@click.option("--out", type=click.Path(path_type=Path), help="Optional directory for stats + figure.")
@_handle_errors
def stats(data, out):
    """Per-label counts and word-count summary for a canonical dataset."""
    dataset = read_canonical(data)
    st = corpus_stats(dataset)
    doc = {
        "n_instances": st.n_instances,
        "label_counts": st.label_counts,
        "word_counts": {
            "min": st.word_count_min,
            "median": st.word_count_median,
            "mean": st.word_count_mean,
            "max": st.word_count_max,
        },
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    click.echo(text)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "stats.json").write_text(text + "\n")
        from .figures import label_counts_figure

        label_counts_figure(st, out / "label_counts.png", title=f"Label distribution ({data.name})")


if __name__ == "__main__":
    sys.exit(main())
