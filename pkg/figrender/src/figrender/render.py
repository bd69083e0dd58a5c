"""Render experiment CSVs to figures.

The numerical content comes entirely from the CSVs; this module only reads
and draws.  Solid lines carry the closed-form (analytic) values, dashed
lines with markers the Monte Carlo estimates.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .spec import FigureSpec, SpecError, read_csv_columns

ACF_COLUMNS = ["lag", "analytic_db", "mc_db", "mc_stderr"]
SWEEP_COLUMNS = [
    "scheme",
    "axis",
    "axis_value",
    "eisl_db_analytic",
    "eisl_db_mc",
    "eisl_stderr_db",
]


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _acf_figure(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    labels = spec.labels or [_stem(p) for p in spec.inputs]
    for path, label, color in zip(
        spec.inputs, labels, plt.rcParams["axes.prop_cycle"].by_key()["color"] * 8
    ):
        cols = read_csv_columns(path, ACF_COLUMNS)
        lag = np.array([float(v) for v in cols["lag"]])
        ana = np.array([float(v) for v in cols["analytic_db"]])
        mc = np.array([float(v) for v in cols["mc_db"]])
        if lag.size == 0:
            raise SpecError(f"no rows in {path}")
        ax.plot(lag, ana, "-", color=color, linewidth=1.4, label=label)
        every = max(1, lag.size // 40)
        ax.plot(
            lag, mc, "--", color=color, linewidth=0.9, alpha=0.8,
            marker="o", markersize=2.5, markevery=every, label=f"{label} (MC)",
        )
    ax.set_xlabel(spec.xlabel or "lag")
    ax.set_ylabel(spec.ylabel or "normalized expected squared correlation (dB)")
    return fig, ax


def _sweep_figure(spec: FigureSpec):
    rows: list[dict] = []
    for path in spec.inputs:
        cols = read_csv_columns(path, SWEEP_COLUMNS + spec.group_by + list(spec.where))
        n = len(cols["axis_value"])
        for i in range(n):
            rows.append({key: values[i] for key, values in cols.items()})
    for column, wanted in spec.where.items():
        rows = [r for r in rows if r[column] == wanted]
        if not rows:
            raise SpecError(
                f"no rows left after filter {column}={wanted} "
                f"in {', '.join(spec.inputs)}"
            )
    axes_seen = sorted({r["axis"] for r in rows})
    categorical = axes_seen == ["modulation"]
    if categorical:
        order = list(dict.fromkeys(r["axis_value"] for r in rows))
        position = {v: i for i, v in enumerate(order)}

    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault(tuple(row[c] for c in spec.group_by), []).append(row)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"] * 8
    for (key, members), color in zip(sorted(groups.items()), colors):
        label = ", ".join(f"{c}={v}" for c, v in zip(spec.group_by, key))
        if categorical:
            x = np.array([position[r["axis_value"]] for r in members], dtype=float)
        else:
            x = np.array([float(r["axis_value"]) for r in members])
        order_idx = np.argsort(x, kind="stable")
        x = x[order_idx]
        ana = np.array([float(r["eisl_db_analytic"]) for r in members])[order_idx]
        mc = np.array([float(r["eisl_db_mc"]) for r in members])[order_idx]
        err = np.array([float(r["eisl_stderr_db"]) for r in members])[order_idx]
        ax.plot(x, ana, "-", color=color, linewidth=1.4, label=label)
        ax.errorbar(
            x, mc, yerr=err, color=color, linestyle="--", linewidth=0.9,
            marker="o", markersize=3.5, capsize=2, alpha=0.8, label=f"{label} (MC)",
        )
    if categorical:
        ax.set_xticks(range(len(order)))
        ax.set_xticklabels(order)
    ax.set_xlabel(spec.xlabel or " / ".join(axes_seen))
    ax.set_ylabel(spec.ylabel or "EISL (dB)")
    return fig, ax


def build_figure(spec: FigureSpec):
    """Build the matplotlib figure for a spec (no file written)."""
    if spec.kind == "acf-profile":
        fig, ax = _acf_figure(spec)
    else:
        fig, ax = _sweep_figure(spec)
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8, ncols=2 if len(ax.get_lines()) > 8 else 1)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Render the spec to its output image; returns the written path."""
    fig = build_figure(spec)
    parent = os.path.dirname(spec.out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    fig.savefig(spec.out, dpi=150)
    plt.close(fig)
    return spec.out
