"""Result containers and their serialized forms.

The JSON form is canonical: keys sorted, cells sorted by (approach,
fold), floats at full precision, and no wall-clock content, so two runs
with the same seed produce byte-identical files. Timing goes into a
separate sidecar. Tables (CSV, markdown) round floats to 4 decimals.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from .errors import InvalidConfig

SCHEMA = "metaselect-report-v1"
FORMATS = ("json", "csv", "markdown")


@dataclass(frozen=True)
class CellResult:
    """One approach evaluated on one fold's test set."""

    approach: str
    fold: int
    par10: float | None
    npar10: float | None
    n_timeouts: int | None
    n_test: int
    error: str | None = None


@dataclass(frozen=True)
class FoldBaselines:
    """Reference values for one fold: the algorithm-level bounds plus,
    when plain selectors were evaluated, the selector-level ones."""

    fold: int
    oracle_par10: float
    sbs_algorithm: str
    sbs_par10: float
    as_oracle_par10: float | None = None
    sbas_selector: str | None = None
    sbas_par10: float | None = None


@dataclass(frozen=True)
class ApproachSummary:
    approach: str
    n_folds_evaluated: int
    mean_par10: float | None
    mean_npar10: float | None
    median_npar10: float | None
    avg_rank: float | None
    wins: int | None = None    # plain selectors with strictly worse mean nPAR10
    losses: int | None = None  # plain selectors with strictly better mean nPAR10


@dataclass(frozen=True)
class EvaluationReport:
    scenario_name: str
    n_instances: int
    n_algorithms: int
    n_features: int
    cutoff: float
    seed: int
    folds: tuple[int, ...]
    approaches: tuple[str, ...]
    cells: tuple[CellResult, ...]
    baselines: tuple[FoldBaselines, ...]
    summary: tuple[ApproachSummary, ...]


def report_to_dict(report: EvaluationReport) -> dict:
    return {
        "schema": SCHEMA,
        "scenario": {
            "name": report.scenario_name,
            "n_instances": report.n_instances,
            "n_algorithms": report.n_algorithms,
            "n_features": report.n_features,
            "cutoff": report.cutoff,
        },
        "seed": report.seed,
        "folds": list(report.folds),
        "approaches": list(report.approaches),
        "cells": [asdict(c) for c in sorted(report.cells, key=lambda c: (c.approach, c.fold))],
        "baselines": [asdict(b) for b in sorted(report.baselines, key=lambda b: b.fold)],
        "summary": [asdict(s) for s in sorted(report.summary, key=lambda s: s.approach)],
    }


def canonical_json(report: EvaluationReport) -> str:
    return json.dumps(report_to_dict(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _fmt4(value) -> str:
    return "" if value is None else f"{value:.4f}"


def _csv_string(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def cells_csv(report: EvaluationReport) -> str:
    rows = [
        (
            c.approach,
            c.fold,
            _fmt4(c.par10),
            _fmt4(c.npar10),
            "" if c.n_timeouts is None else c.n_timeouts,
            c.n_test,
            c.error or "",
        )
        for c in sorted(report.cells, key=lambda c: (c.approach, c.fold))
    ]
    return _csv_string(
        ["approach", "fold", "par10", "npar10", "n_timeouts", "n_test", "error"], rows
    )


def summary_csv(report: EvaluationReport) -> str:
    rows = [
        (
            s.approach,
            s.n_folds_evaluated,
            _fmt4(s.mean_par10),
            _fmt4(s.mean_npar10),
            _fmt4(s.median_npar10),
            _fmt4(s.avg_rank),
            "" if s.wins is None else s.wins,
            "" if s.losses is None else s.losses,
        )
        for s in sorted(report.summary, key=lambda s: s.approach)
    ]
    return _csv_string(
        [
            "approach",
            "n_folds_evaluated",
            "mean_par10",
            "mean_npar10",
            "median_npar10",
            "avg_rank",
            "wins",
            "losses",
        ],
        rows,
    )


def baselines_csv(report: EvaluationReport) -> str:
    rows = [
        (
            b.fold,
            _fmt4(b.oracle_par10),
            b.sbs_algorithm,
            _fmt4(b.sbs_par10),
            _fmt4(b.as_oracle_par10),
            b.sbas_selector or "",
            _fmt4(b.sbas_par10),
        )
        for b in sorted(report.baselines, key=lambda b: b.fold)
    ]
    return _csv_string(
        [
            "fold",
            "oracle_par10",
            "sbs_algorithm",
            "sbs_par10",
            "as_oracle_par10",
            "sbas_selector",
            "sbas_par10",
        ],
        rows,
    )


def markdown_summary(report: EvaluationReport) -> str:
    """Per-approach table; the row with the best mean nPAR10 is bolded."""
    ordered = sorted(
        report.summary,
        key=lambda s: (s.mean_npar10 is None, s.mean_npar10, s.approach),
    )
    best = None
    for s in ordered:
        if s.mean_npar10 is not None:
            best = s.approach
            break
    lines = [
        "| Scenario | Approach | Mean nPAR10 | Median nPAR10 | Avg. Rank |",
        "| --- | --- | --- | --- | --- |",
    ]
    for s in ordered:
        name = f"**{s.approach}**" if s.approach == best else s.approach
        mean = "-" if s.mean_npar10 is None else f"{s.mean_npar10:.4f}"
        if s.wins is not None:
            mean = f"{mean} ({s.wins}/{s.losses})"
        median = "-" if s.median_npar10 is None else f"{s.median_npar10:.4f}"
        rank = "-" if s.avg_rank is None else f"{s.avg_rank:.4f}"
        lines.append(f"| {report.scenario_name} | {name} | {mean} | {median} | {rank} |")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SweepRow:
    """One voting composition's cross-fold quality."""

    members: tuple[int, ...]  # indices into SweepReport.member_specs
    spec: str                 # the equivalent voting approach string
    mean_par10: float
    mean_npar10: float | None
    fold_npar10: tuple[float | None, ...]


@dataclass(frozen=True)
class SweepReport:
    scenario_name: str
    aggregation: str
    member_specs: tuple[str, ...]
    folds: tuple[int, ...]
    seed: int
    rows: tuple[SweepRow, ...]
    best_members: tuple[int, ...]
    best_spec: str


def sweep_to_dict(sweep: SweepReport) -> dict:
    return {
        "schema": "metaselect-sweep-v1",
        "scenario": sweep.scenario_name,
        "aggregation": sweep.aggregation,
        "member_specs": list(sweep.member_specs),
        "folds": list(sweep.folds),
        "seed": sweep.seed,
        "rows": [
            {
                "members": list(r.members),
                "spec": r.spec,
                "mean_par10": r.mean_par10,
                "mean_npar10": r.mean_npar10,
                "fold_npar10": list(r.fold_npar10),
            }
            for r in sweep.rows
        ],
        "best": {"members": list(sweep.best_members), "spec": sweep.best_spec},
    }


def sweep_json(sweep: SweepReport) -> str:
    return json.dumps(sweep_to_dict(sweep), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def sweep_csv(sweep: SweepReport) -> str:
    header = ["members", "size", "spec", "mean_par10", "mean_npar10"]
    header += [f"npar10_fold_{f}" for f in sweep.folds]
    rows = []
    for r in sweep.rows:
        rows.append(
            [
                "+".join(str(i) for i in r.members),
                len(r.members),
                r.spec,
                _fmt4(r.mean_par10),
                _fmt4(r.mean_npar10),
                *[_fmt4(v) for v in r.fold_npar10],
            ]
        )
    return _csv_string(header, rows)


def sweep_markdown(sweep: SweepReport) -> str:
    lines = [
        "| Members | Size | Mean nPAR10 | Mean PAR10 |",
        "| --- | --- | --- | --- |",
    ]
    for r in sweep.rows:
        name = "+".join(str(i) for i in r.members)
        if r.members == sweep.best_members:
            name = f"**{name}**"
        mean = "-" if r.mean_npar10 is None else f"{r.mean_npar10:.4f}"
        lines.append(f"| {name} | {len(r.members)} | {mean} | {r.mean_par10:.4f} |")
    return "\n".join(lines) + "\n"


def emit_sweep(sweep: SweepReport, out_base, formats=("json",)) -> list[Path]:
    out_base = Path(out_base)
    out_base.parent.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        if fmt == "json":
            path = out_base.with_name(out_base.name + ".json")
            path.write_text(sweep_json(sweep), encoding="utf-8")
        elif fmt == "csv":
            path = out_base.with_name(out_base.name + ".csv")
            path.write_text(sweep_csv(sweep), encoding="utf-8")
        elif fmt == "markdown":
            path = out_base.with_name(out_base.name + ".md")
            path.write_text(sweep_markdown(sweep), encoding="utf-8")
        else:
            raise InvalidConfig(f"unknown report format {fmt!r}")
        written.append(path)
    return written


def emit_report(
    report: EvaluationReport,
    out_base,
    formats=("json",),
    timings: dict | None = None,
) -> list[Path]:
    """Write the report in the requested formats next to `out_base`.

    `out_base` is a path without extension; each format appends its own.
    Timing data, when given, always lands in a `.timings.json` sidecar
    so the canonical report stays reproducible byte for byte.
    """
    out_base = Path(out_base)
    out_base.parent.mkdir(parents=True, exist_ok=True)
    written = []

    def _write(suffix, text):
        path = out_base.with_name(out_base.name + suffix)
        path.write_text(text, encoding="utf-8")
        written.append(path)

    for fmt in formats:
        if fmt == "json":
            _write(".json", canonical_json(report))
        elif fmt == "csv":
            _write(".cells.csv", cells_csv(report))
            _write(".summary.csv", summary_csv(report))
            _write(".baselines.csv", baselines_csv(report))
        elif fmt == "markdown":
            _write(".md", markdown_summary(report))
        else:
            raise InvalidConfig(f"unknown report format {fmt!r}")
    if timings is not None:
        _write(".timings.json", json.dumps(timings, sort_keys=True, indent=2) + "\n")
    return written
