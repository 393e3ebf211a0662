"""Reporting: ranked risk tables, quadrant distributions, and plot-series
data matching the analysis figures. Emits data, never rendered images.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyBatchError, UnknownSeriesError
from .scoring import rrs_band

HISTOGRAM_BINS = 20
PLOT_SERIES = ("lts_hist", "sem_struct_scatter", "multisignal_bars", "model_consistency")


@dataclass
class PlotSeries:
    name: str
    kind: str  # "histogram" | "scatter" | "grouped_bars"
    x: list
    y: list
    metadata: dict = field(default_factory=dict)


def emit_rank_report(scores, top_k: int) -> list[dict]:
    """Rows sorted by rrs descending, pair_id ascending on ties."""
    if not scores:
        raise EmptyBatchError("no scores to rank")
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    ranked = sorted(scores, key=lambda s: (-s.rrs, s.pair_id))[:top_k]
    return [
        {
            "rank": i + 1,
            "pair_id": s.pair_id,
            "rrs": s.rrs,
            "band": rrs_band(s.rrs),
            "quadrant": s.quadrant,
            "mean_sem": s.mean_sem,
            "struct_sim": s.struct_sim,
            "cross_var": s.cross_var,
            "agree": s.agree,
        }
        for i, s in enumerate(ranked)
    ]


def emit_plot_data(scores, which: str) -> PlotSeries:
    """Deterministic series for one of the supported figures."""
    if not scores:
        raise EmptyBatchError("no scores to plot")
    if which == "lts_hist":
        values = np.array([s.struct_sim for s in scores], dtype=np.float64)
        counts, edges = np.histogram(values, bins=HISTOGRAM_BINS, range=(0.0, 1.0))
        return PlotSeries(
            name=which, kind="histogram",
            x=[float(e) for e in edges[:-1]],
            y=[int(c) for c in counts],
            metadata={
                "bin_width": 1.0 / HISTOGRAM_BINS,
                "mean": float(np.mean(values)),
                "median": float(np.median(values)),
            },
        )
    if which == "sem_struct_scatter":
        ordered = sorted(scores, key=lambda s: s.pair_id)
        return PlotSeries(
            name=which, kind="scatter",
            x=[s.mean_sem for s in ordered],
            y=[s.struct_sim for s in ordered],
            metadata={"pair_ids": [s.pair_id for s in ordered],
                      "rrs": [s.rrs for s in ordered]},
        )
    if which == "multisignal_bars":
        ordered = sorted(scores, key=lambda s: s.pair_id)
        return PlotSeries(
            name=which, kind="grouped_bars",
            x=[s.pair_id for s in ordered],
            y=[[s.mean_sem for s in ordered],
               [s.struct_sim for s in ordered],
               [s.agree for s in ordered]],
            metadata={"series_names": ["mean_sem", "struct_sim", "agree"]},
        )
    if which == "model_consistency":
        models: list[str] = []
        for s in scores:
            for m in s.per_model:
                if m.model_id not in models:
                    models.append(m.model_id)
        models.sort()
        ordered = sorted(scores, key=lambda s: s.pair_id)
        rows = []
        for model_id in models:
            rows.append([next((m.cosine for m in s.per_model if m.model_id == model_id),
                              float("nan"))
                         for s in ordered])
        return PlotSeries(
            name=which, kind="grouped_bars",
            x=[s.pair_id for s in ordered],
            y=rows,
            metadata={"series_names": models},
        )
    raise UnknownSeriesError(f"unknown plot series {which!r}")


def write_plot_csv(series: PlotSeries, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        if series.kind == "grouped_bars":
            names = series.metadata.get("series_names", [])
            handle.write("x," + ",".join(names) + "\n")
            for i, x in enumerate(series.x):
                row = [str(x)] + [repr(col[i]) for col in series.y]
                handle.write(",".join(row) + "\n")
        else:
            handle.write("x,y\n")
            for x, y in zip(series.x, series.y):
                handle.write(f"{x!r},{y!r}\n")


def quadrant_table(scores) -> list[dict]:
    """Quadrant counts/percentages in the four-row shape of the analysis table."""
    total = len(scores)
    interpretations = {
        "I": "minor change, residual-risk candidates",
        "II": "structural change, embedding blind spot",
        "III": "cosmetic or lexical change",
        "IV": "major change, likely mitigated",
    }
    rows = []
    for quadrant in ("I", "II", "III", "IV"):
        members = [s for s in scores if s.quadrant == quadrant]
        rows.append({
            "quadrant": quadrant,
            "pairs": len(members),
            "pct": 100.0 * len(members) / total if total else 0.0,
            "interpretation": interpretations[quadrant],
        })
    return rows


def render_markdown_summary(scores, ctx, top_k: int = 10) -> str:
    """Deterministic Markdown run summary with quadrant and ranking tables."""
    lines = ["# Residual risk report", ""]
    lines.append(f"Pairs scored: {len(scores)}")
    lines.append(f"Median semantic similarity: {ctx.median_e:.6f}")
    lines.append(f"Median structural similarity: {ctx.median_a:.6f}")
    lines.append(f"Max cross-model spread: {ctx.sigma_max:.6f}")
    lines.append("")
    lines.append("## Quadrants")
    lines.append("")
    lines.append("| Quadrant | Pairs | % | Interpretation |")
    lines.append("|---|---|---|---|")
    for row in quadrant_table(scores):
        lines.append(f"| {row['quadrant']} | {row['pairs']} | "
                     f"{row['pct']:.1f}% | {row['interpretation']} |")
    lines.append("")
    lines.append(f"## Top {top_k} by residual risk")
    lines.append("")
    lines.append("| Rank | Pair | RRS | Band | Quadrant | Sem | Struct | Agree |")
    lines.append("|---|---|---|---|---|---|---|---|")
    for row in emit_rank_report(scores, top_k):
        lines.append(
            f"| {row['rank']} | {row['pair_id']} | {row['rrs']:.6f} | {row['band']} "
            f"| {row['quadrant']} | {row['mean_sem']:.6f} | {row['struct_sim']:.6f} "
            f"| {row['agree']:.6f} |")
    lines.append("")
    return "\n".join(lines)


def write_json_report(rows, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(rows, handle, indent=2, sort_keys=True)
        handle.write("\n")
