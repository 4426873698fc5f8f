"""Render mean-evaluations-versus-a curves with deviation bands.

Consumes the aggregate CSV produced by the experiment harness:

    scenario,algo,mutation,param,a,n,runs,mean_p1,sdpct_p1,mean_p2,
    sdpct_p2,mean_total,sdpct_total,bound_total

One curve per mutation operator, points sorted by a, solid line with a
per-operator marker, plus dotted lines at mean plus/minus one sample
deviation (reconstructed from the percent column).  Plotted values are the
CSV values verbatim; no smoothing or aggregation happens here.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

REQUIRED_COLUMNS = {"mutation", "a", "n", "mean_total", "sdpct_total"}

MARKERS = {"unit": "D", "geom": "d", "powerlaw": "^"}
LABELS = {"unit": "unit step", "geom": "exponential tail", "powerlaw": "power law"}
COLORS = {"unit": "#8c510a", "geom": "#2166ac", "powerlaw": "#b2182b"}
OPERATOR_ORDER = ("unit", "geom", "powerlaw")


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple[str, ...]
    output: str
    n_filter: Optional[int] = None
    log_y: bool = False


@dataclass(frozen=True)
class CurvePoint:
    mutation: str
    a: int
    n: int
    mean_total: float
    sd_total: float


def load_aggregate_rows(path: str | Path) -> list[CurvePoint]:
    """Parse the columns this tool needs, erroring on missing ones."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty file, expected a header row")
        missing = REQUIRED_COLUMNS - set(reader.fieldnames)
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        points = []
        for rec in reader:
            mean_total = float(rec["mean_total"])
            sd = float(rec["sdpct_total"]) * mean_total / 100.0
            points.append(
                CurvePoint(
                    mutation=rec["mutation"],
                    a=int(rec["a"]),
                    n=int(rec["n"]),
                    mean_total=mean_total,
                    sd_total=sd,
                )
            )
    return points


def plot_scaling(spec: PlotSpec):
    """Draw the figure and write it to ``spec.output``; returns the Figure."""
    points: list[CurvePoint] = []
    for path in spec.inputs:
        points.extend(load_aggregate_rows(path))
    if spec.n_filter is not None:
        points = [p for p in points if p.n == spec.n_filter]
    if not points:
        raise ValueError("no rows left to plot after filtering")

    operators = [
        m for m in OPERATOR_ORDER if any(p.mutation == m for p in points)
    ] + sorted({p.mutation for p in points} - set(OPERATOR_ORDER))

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for op in operators:
        series = sorted((p for p in points if p.mutation == op), key=lambda p: p.a)
        xs = [p.a for p in series]
        ys = [p.mean_total for p in series]
        upper = [p.mean_total + p.sd_total for p in series]
        lower = [p.mean_total - p.sd_total for p in series]
        color = COLORS.get(op)
        ax.plot(xs, ys, marker=MARKERS.get(op, "o"), color=color,
                label=LABELS.get(op, op))
        ax.plot(xs, upper, linestyle=":", color=color, linewidth=1)
        ax.plot(xs, lower, linestyle=":", color=color, linewidth=1)
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel("a")
    ax.set_ylabel("function evaluations")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output)
    return fig
