"""Render the standard figures from a results CSV.

The input is the evaluation schema produced by `clusterdisco simulate`
(columns study..runtime_ms, one row per algorithm x instance).  All figures
aggregate by the arithmetic mean over rows sharing the same series and
x-axis value; rendering returns the aggregated series so callers can verify
exactly what was drawn.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

KINDS = ("prec_recall", "metrics_by_clusters", "shd_by_clusters",
         "ci_by_clusters", "ci_ratio_by_edges")

REQUIRED_COLUMNS = ("study", "config_id", "seed", "algorithm", "n_nodes",
                    "n_edges", "n_clusters", "alpha", "distribution",
                    "graph_method", "adj_precision", "adj_recall", "adj_f1",
                    "arrow_precision", "arrow_recall", "arrow_f1", "shd",
                    "ci_total", "ci_unique", "runtime_ms")

_NUMERIC = {"n_nodes", "n_edges", "n_clusters", "alpha", "adj_precision",
            "adj_recall", "adj_f1", "arrow_precision", "arrow_recall",
            "arrow_f1", "shd", "ci_total", "ci_unique", "runtime_ms"}


class PlotError(ValueError):
    pass


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    kind: str
    out_path: str
    metric_family: str = "adj"                     # adj or arrow
    group_by: tuple[str, ...] = ("algorithm",)     # series-defining columns

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PlotError(f"unknown figure kind {self.kind!r}; "
                            f"choose one of {KINDS}")
        if self.metric_family not in ("adj", "arrow"):
            raise PlotError("metric_family must be adj or arrow")


def load_rows(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise PlotError(f"CSV is missing required columns: {missing}")
        rows = []
        for raw in reader:
            row = dict(raw)
            for col in _NUMERIC:
                row[col] = float(raw[col])
            rows.append(row)
    if not rows:
        raise PlotError("CSV contains no data rows")
    return rows


def _mean(rows, column):
    vals = [r[column] for r in rows]
    return sum(vals) / len(vals)


def _group(rows, keys):
    out: dict[tuple, list[dict]] = {}
    for r in rows:
        out.setdefault(tuple(r[k] for k in keys), []).append(r)
    return dict(sorted(out.items()))


def _series_label(keys, values) -> str:
    if keys == ("algorithm",):
        return str(values[0])
    return ", ".join(f"{k}={v}" for k, v in zip(keys, values))


def render(spec: PlotSpec) -> dict:
    """Render one figure; returns {series_label: [(x, y), ...]} of exactly
    the aggregated values drawn (prec_recall returns (recall, precision)
    points keyed by alpha)."""
    rows = load_rows(spec.csv_path)
    fam = spec.metric_family
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    series: dict[str, list[tuple[float, float]]] = {}

    if spec.kind == "prec_recall":
        for key, grp in _group(rows, spec.group_by).items():
            pts = []
            for (alpha,), sub in _group(grp, ("alpha",)).items():
                pts.append((alpha, _mean(sub, f"{fam}_recall"),
                            _mean(sub, f"{fam}_precision")))
            label = _series_label(spec.group_by, key)
            series[label] = [(r, p) for _, r, p in pts]
            ax.plot([r for _, r, _ in pts], [p for _, _, p in pts],
                    marker="o", label=label)
            for alpha, r, p in pts:
                ax.annotate(f"{alpha:g}", (r, p), fontsize=7,
                            textcoords="offset points", xytext=(4, 3))
        ax.set_xlabel(f"{fam} recall")
        ax.set_ylabel(f"{fam} precision")
        ax.set_title("Precision vs. recall across significance levels")

    elif spec.kind == "metrics_by_clusters":
        styles = {"precision": "-", "recall": "--", "f1": ":"}
        for key, grp in _group(rows, spec.group_by).items():
            base = _series_label(spec.group_by, key)
            for metric, style in styles.items():
                pts = [(c, _mean(sub, f"{fam}_{metric}"))
                       for (c,), sub in _group(grp, ("n_clusters",)).items()]
                label = f"{base} {metric}"
                series[label] = pts
                ax.plot([x for x, _ in pts], [y for _, y in pts], style,
                        marker="o", label=label)
        ax.set_xlabel("number of clusters")
        ax.set_ylabel(f"{fam} metric value")
        ax.set_title("Precision, recall and F1 by cluster count")

    elif spec.kind in ("shd_by_clusters", "ci_by_clusters"):
        column = "shd" if spec.kind == "shd_by_clusters" else "ci_total"
        for key, grp in _group(rows, spec.group_by).items():
            pts = [(c, _mean(sub, column))
                   for (c,), sub in _group(grp, ("n_clusters",)).items()]
            label = _series_label(spec.group_by, key)
            series[label] = pts
            ax.plot([x for x, _ in pts], [y for _, y in pts],
                    marker="o", label=label)
        ax.set_xlabel("number of clusters")
        ax.set_ylabel("SHD" if column == "shd" else "CI tests")
        ax.set_title(("Structural Hamming distance"
                      if column == "shd" else "CI tests") + " by cluster count")

    elif spec.kind == "ci_ratio_by_edges":
        algos = {r["algorithm"] for r in rows}
        if not {"pc", "cpc"} <= algos:
            raise PlotError("ci_ratio_by_edges needs both pc and cpc rows")
        for (n_clusters,), grp in _group(rows, ("n_clusters",)).items():
            pts = []
            for (n_edges,), sub in _group(grp, ("n_edges",)).items():
                pc_rows = [r for r in sub if r["algorithm"] == "pc"]
                cpc_rows = [r for r in sub if r["algorithm"] == "cpc"]
                if not pc_rows or not cpc_rows:
                    continue
                pts.append((n_edges,
                            _mean(pc_rows, "ci_total") / _mean(cpc_rows, "ci_total")))
            if pts:
                label = f"{int(n_clusters)} clusters"
                series[label] = pts
                ax.plot([x for x, _ in pts], [y for _, y in pts],
                        marker="o", label=label)
        ax.set_xlabel("number of edges")
        ax.set_ylabel("CI tests PC / C-PC")
        ax.set_title("CI-test savings across graph density")

    if not series:
        plt.close(fig)
        raise PlotError("selection is empty; nothing to plot")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    out = Path(spec.out_path)
    fig.savefig(out)
    plt.close(fig)
    return series
