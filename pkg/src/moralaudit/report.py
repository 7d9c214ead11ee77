"""Audit report assembly: ties metrics, fairness, bootstrap, and correlation
together over the four experiment scenarios and renders the result as a
structured document, delimited tables, or markdown.

The structured (JSON) form is the source of truth; every number in a rendered
table maps to a field in it. Undefined values render as "n/a", never 0.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json

import numpy as np

from . import __version__
from .correlation import (
    BASELINE_METRICS,
    MODE_BOOTSTRAP_POOLED,
    MODE_PER_LABEL,
    spearman,
    spearman_p,
    validate_mfc,
)
from .errors import ValidationError
from .fairness import direction_rates, dp_difference, eo_difference, group_rates, mfc
from .labels import LABELS
from .metrics import confusion, exact_match_ratio, metric_report, micro_f1, per_label_prf
from .predio import PredictionSet
from .resampling import BootstrapSpec, bootstrap_ci_many, percentile_interval, resample_indices

SCENARIOS = ("MFTC->MFTC", "MFRC->MFRC", "MFRC->MFTC", "MFTC->MFRC")
CROSS_SCENARIOS = ("MFRC->MFTC", "MFTC->MFRC")
# in-domain scenario -> the cross-domain scenario sharing its training corpus
DEGRADATION_PAIRS = {"MFTC": ("MFTC->MFTC", "MFTC->MFRC"), "MFRC": ("MFRC->MFRC", "MFRC->MFTC")}


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _interval(est) -> dict:
    return {"point": est.point, "lo": est.lo, "hi": est.hi}


def _scenario_section(pset: PredictionSet, boot: BootstrapSpec) -> dict:
    base = metric_report(pset.records)
    stats = {
        "micro_f1": lambda recs: micro_f1(confusion(recs)),
        "emr": exact_match_ratio,
    }
    for i, name in enumerate(LABELS):
        def make(idx):
            def f1_stat(recs):
                c = confusion(recs)
                return per_label_prf(c)[LABELS[idx]][2]

            return f1_stat

        stats[f"f1:{name}"] = make(i)
    cis = bootstrap_ci_many(stats, pset.records, boot)

    per_label = {}
    for name in LABELS:
        p, r, f1 = base.per_label[name]
        per_label[name] = {
            "precision": p,
            "recall": r,
            "f1": _interval(cis[f"f1:{name}"]),
        }
    return {
        "model": pset.model,
        "n_records": len(pset.records),
        "loss": base.loss,
        "micro_f1": _interval(cis["micro_f1"]),
        "emr": _interval(cis["emr"]),
        "per_label": per_label,
    }


def _mfc_bootstrap(
    per_direction: dict[str, list], boot: BootstrapSpec
) -> tuple[dict[str, tuple[float, float]], tuple[float, float]]:
    """CIs for per-label MFC and the aggregate; each direction's records are
    resampled independently with per-(resample, direction) sub-seeds."""
    tags = sorted(per_direction)
    per_label_vals: dict[str, list[float]] = {name: [] for name in LABELS}
    agg_vals: list[float] = []
    for r in range(boot.n_resamples):
        dir_rates = {}
        for k, tag in enumerate(tags):
            recs = per_direction[tag]
            rng = np.random.default_rng([boot.seed, r, k])
            idx = rng.integers(0, len(recs), size=len(recs))
            dir_rates[tag] = direction_rates([recs[i] for i in idx])
        per_label, agg = mfc(dir_rates)
        for name in LABELS:
            per_label_vals[name].append(per_label[name])
        agg_vals.append(agg)
    label_cis = {
        name: percentile_interval(per_label_vals[name], boot.level) for name in LABELS
    }
    return label_cis, percentile_interval(agg_vals, boot.level)


def _fairness_section(
    cross_sets: dict[str, PredictionSet], boot: BootstrapSpec
) -> dict:
    pooled = [rec for tag in sorted(cross_sets) for rec in cross_sets[tag].records]
    per_direction = {tag: pset.records for tag, pset in cross_sets.items()}
    rates = group_rates(pooled)
    dir_rates = {tag: direction_rates(recs) for tag, recs in per_direction.items()}
    mfc_per_label, mfc_agg = mfc(dir_rates)

    # DP/EO bootstrap over the pooled records; undefined resamples skipped
    stats = {}
    for i, name in enumerate(LABELS):
        def make_dp(lbl):
            def dp_stat(recs):
                d = dp_difference(group_rates(recs), lbl)
                return None if d is None else d[1]

            return dp_stat

        def make_eo(lbl):
            def eo_stat(recs):
                return eo_difference(group_rates(recs), lbl)

            return eo_stat

        dp0 = dp_difference(rates, name)
        if dp0 is not None:
            stats[f"dp:{name}"] = make_dp(name)
        if eo_difference(rates, name) is not None:
            stats[f"eo:{name}"] = make_eo(name)
    cis = bootstrap_ci_many(stats, pooled, boot) if stats else {}
    mfc_cis, mfc_agg_ci = _mfc_bootstrap(per_direction, boot)

    per_label = {}
    for name in LABELS:
        dp = dp_difference(rates, name)
        eo = eo_difference(rates, name)
        entry = {
            "dp_signed": None if dp is None else dp[0],
            "dp_abs": None if dp is None else _with_ci(dp[1], cis.get(f"dp:{name}")),
            "eo": None if eo is None else _with_ci(eo, cis.get(f"eo:{name}")),
            "mfc": {
                "point": mfc_per_label[name],
                "lo": mfc_cis[name][0],
                "hi": mfc_cis[name][1],
            },
        }
        per_label[name] = entry
    return {
        "per_label": per_label,
        "mfc_aggregate": {"point": mfc_agg, "lo": mfc_agg_ci[0], "hi": mfc_agg_ci[1]},
        "directions": sorted(cross_sets),
    }


def _with_ci(point, est) -> dict:
    if est is None:
        return {"point": point, "lo": None, "hi": None}
    return {"point": point, "lo": est.lo, "hi": est.hi}


def _per_label_metric_vectors(cross_records: dict[str, list]) -> dict[str, list[float]]:
    """The six per-label 5-vectors (mfc, f1, precision, recall, dp, eo) that
    feed the correlation analysis, computed from the pooled cross-domain pool."""
    pooled = [rec for tag in sorted(cross_records) for rec in cross_records[tag]]
    counts = confusion(pooled)
    prf = per_label_prf(counts)
    rates = group_rates(pooled)
    dir_rates = {tag: direction_rates(recs) for tag, recs in cross_records.items()}
    mfc_per_label, _ = mfc(dir_rates)

    vectors: dict[str, list[float]] = {
        "mfc": [],
        "f1": [],
        "precision": [],
        "recall": [],
        "dp": [],
        "eo": [],
    }
    for name in LABELS:
        p, r, f1 = prf[name]
        dp = dp_difference(rates, name)
        eo = eo_difference(rates, name)
        if dp is None or eo is None:
            raise ValidationError(
                f"label {name!r}: undefined fairness rate; correlation needs both groups"
            )
        vectors["mfc"].append(mfc_per_label[name])
        vectors["f1"].append(f1)
        vectors["precision"].append(p)
        vectors["recall"].append(r)
        vectors["dp"].append(dp[1])
        vectors["eo"].append(eo)
    return vectors


def _pooled_correlation(
    cross_sets: dict[str, PredictionSet], boot: BootstrapSpec
) -> dict[str, list[float]]:
    """Per-label metric values recomputed on each bootstrap resample and
    pooled into long vectors (5 labels x n_resamples points)."""
    tags = sorted(cross_sets)
    vectors: dict[str, list[float]] = {k: [] for k in ("mfc", "f1", "precision", "recall", "dp", "eo")}
    for r in range(boot.n_resamples):
        resampled = {}
        for k, tag in enumerate(tags):
            recs = cross_sets[tag].records
            rng = np.random.default_rng([boot.seed, r, k])
            idx = rng.integers(0, len(recs), size=len(recs))
            resampled[tag] = [recs[i] for i in idx]
        try:
            vecs = _per_label_metric_vectors(resampled)
        except ValidationError:
            continue  # resample lost a conditioning set; skip it
        for key in vectors:
            vectors[key].extend(vecs[key])
    if not vectors["mfc"]:
        raise ValidationError("every bootstrap resample had undefined fairness rates")
    return vectors


def _correlation_section(
    cross_sets: dict[str, PredictionSet], boot: BootstrapSpec, mode: str
) -> dict:
    if mode == MODE_PER_LABEL:
        vectors = _per_label_metric_vectors({tag: p.records for tag, p in cross_sets.items()})
    elif mode == MODE_BOOTSTRAP_POOLED:
        vectors = _pooled_correlation(cross_sets, boot)
    else:
        raise ValidationError(f"unknown correlation mode {mode!r}")
    rep = validate_mfc(vectors, mode)
    return {
        "mode": rep.mode,
        "baselines": {
            name: {"rho": e.rho, "p_value": e.p_value, "n": e.n}
            for name, e in rep.entries.items()
        },
    }


def build_audit_report(
    sets: dict[str, PredictionSet],
    boot: BootstrapSpec,
    corr_mode: str = MODE_PER_LABEL,
    input_hashes: dict[str, str] | None = None,
) -> dict:
    """Assemble the full audit report from prediction sets keyed by their
    direction tag. Missing scenarios leave explicit gaps, never silent zeros."""
    for tag in sets:
        if tag not in SCENARIOS:
            raise ValidationError(f"unexpected scenario direction {tag!r}")

    report: dict = {
        "metadata": {
            "tool_version": __version__,
            "bootstrap": {"n_resamples": boot.n_resamples, "level": boot.level, "seed": boot.seed},
            "thresholds": {tag: sets[tag].threshold for tag in sorted(sets)},
            "input_hashes": dict(sorted((input_hashes or {}).items())),
            "corr_mode": corr_mode,
        },
        "gaps": sorted(set(SCENARIOS) - set(sets)),
        "scenarios": {},
    }
    for tag in SCENARIOS:
        if tag in sets:
            report["scenarios"][tag] = _scenario_section(sets[tag], boot)

    deg = {}
    for corpus, (in_tag, cross_tag) in DEGRADATION_PAIRS.items():
        if in_tag in sets and cross_tag in sets:
            in_f1 = report["scenarios"][in_tag]["micro_f1"]["point"]
            cross_f1 = report["scenarios"][cross_tag]["micro_f1"]["point"]
            deg[f"{in_tag} vs {cross_tag}"] = (in_f1 - cross_f1) * 100.0
    report["degradation_pp"] = deg

    cross_sets = {tag: sets[tag] for tag in CROSS_SCENARIOS if tag in sets}
    if len(cross_sets) == 2:
        report["fairness"] = _fairness_section(cross_sets, boot)
        report["correlation"] = _correlation_section(cross_sets, boot, corr_mode)
    else:
        report["fairness"] = None
        report["correlation"] = None
    return report


# ---------------------------------------------------------------------------
# Rendering

FORMATS = ("structured", "csv", "markdown-table")


def _fmt(v) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def _rows(report: dict):
    """Flatten the report into (section, scenario_or_label, metric, value, lo, hi)."""
    for tag, sec in report["scenarios"].items():
        yield ("performance", tag, "loss", sec["loss"], None, None)
        for key in ("micro_f1", "emr"):
            yield ("performance", tag, key, sec[key]["point"], sec[key]["lo"], sec[key]["hi"])
        for name, vals in sec["per_label"].items():
            yield ("per_label", f"{tag}/{name}", "precision", vals["precision"], None, None)
            yield ("per_label", f"{tag}/{name}", "recall", vals["recall"], None, None)
            yield (
                "per_label",
                f"{tag}/{name}",
                "f1",
                vals["f1"]["point"],
                vals["f1"]["lo"],
                vals["f1"]["hi"],
            )
    for pair, pp in report["degradation_pp"].items():
        yield ("degradation", pair, "micro_f1_drop_pp", pp, None, None)
    if report["fairness"] is not None:
        for name, entry in report["fairness"]["per_label"].items():
            yield ("fairness", name, "dp_signed", entry["dp_signed"], None, None)
            for key in ("dp_abs", "eo", "mfc"):
                v = entry[key]
                if v is None:
                    yield ("fairness", name, key, None, None, None)
                else:
                    yield ("fairness", name, key, v["point"], v["lo"], v["hi"])
        agg = report["fairness"]["mfc_aggregate"]
        yield ("fairness", "aggregate", "mfc", agg["point"], agg["lo"], agg["hi"])
    if report["correlation"] is not None:
        for name, entry in report["correlation"]["baselines"].items():
            yield ("correlation", name, "rho", entry["rho"], None, None)
            yield ("correlation", name, "p_value", entry["p_value"], None, None)
    for gap in report["gaps"]:
        yield ("gap", gap, "missing_scenario", None, None, None)


def render(report: dict, fmt: str) -> bytes:
    if fmt == "structured":
        return (json.dumps(report, indent=2, sort_keys=True) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["section", "subject", "metric", "value", "lo", "hi"])
        for section, subject, metric, value, lo, hi in _rows(report):
            writer.writerow([section, subject, metric, _fmt(value), _fmt(lo), _fmt(hi)])
        return buf.getvalue().encode("utf-8")
    if fmt == "markdown-table":
        return _render_markdown(report).encode("utf-8")
    raise ValidationError(f"unknown render format {fmt!r}")


def _md_table(headers: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(headers) + " |", "|" + "---|" * len(headers)]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines)


def _ci_cell(v) -> str:
    if v is None:
        return "n/a"
    if v["lo"] is None:
        return _fmt(v["point"])
    return f"{_fmt(v['point'])} ({_fmt(v['lo'])}-{_fmt(v['hi'])})"


def _render_markdown(report: dict) -> str:
    parts = ["# Moral fairness audit", ""]
    if report["scenarios"]:
        rows = []
        for tag, sec in report["scenarios"].items():
            rows.append(
                [tag, _fmt(sec["loss"]), _ci_cell(sec["micro_f1"]), _ci_cell(sec["emr"])]
            )
        parts += ["## Overall performance", "", _md_table(["Scenario", "Loss", "Micro-F1", "EMR"], rows), ""]
    if report["degradation_pp"]:
        rows = [[pair, _fmt(pp)] for pair, pp in report["degradation_pp"].items()]
        parts += ["## Micro-F1 degradation (percentage points)", "", _md_table(["Pair", "Drop"], rows), ""]
    if report["fairness"] is not None:
        rows = []
        for name, entry in report["fairness"]["per_label"].items():
            rows.append(
                [name, _ci_cell(entry["dp_abs"]), _ci_cell(entry["eo"]), _ci_cell(entry["mfc"])]
            )
        rows.append(["aggregate", "", "", _ci_cell(report["fairness"]["mfc_aggregate"])])
        parts += [
            "## Fairness by label",
            "",
            _md_table(["Label", "DP difference", "EO difference", "MFC"], rows),
            "",
        ]
    if report["correlation"] is not None:
        rows = []
        for name, entry in report["correlation"]["baselines"].items():
            rows.append([name, _fmt(entry["rho"]), _fmt(entry["p_value"]), str(entry["n"])])
        parts += [
            f"## MFC correlation ({report['correlation']['mode']})",
            "",
            _md_table(["Baseline", "rho", "p-value", "n"], rows),
            "",
        ]
    if report["gaps"]:
        parts += ["## Missing scenarios", ""] + [f"- {g}" for g in report["gaps"]] + [""]
    return "\n".join(parts)
