"""Figure specification files: the same flat ``key = value`` format the
experiment CLI uses.

Keys
----
kind      acf-profile | eisl-sweep            (required)
inputs    comma-separated CSV paths            (required)
out       output image path, .png or .svg      (required)
group_by  comma-separated column names forming one series per value
          combination (eisl-sweep only; default: scheme)
where     comma-separated column=value row filters (eisl-sweep only)
labels    comma-separated series labels, one per input (acf-profile only;
          default: file stems)
xlabel, ylabel, title   axis/figure text (optional)
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

KINDS = ("acf-profile", "eisl-sweep")


class SpecError(ValueError):
    """A figure spec is malformed or inconsistent with its CSVs."""


@dataclass
class FigureSpec:
    kind: str
    inputs: list[str]
    out: str
    group_by: list[str] = field(default_factory=lambda: ["scheme"])
    where: dict[str, str] = field(default_factory=dict)
    labels: list[str] | None = None
    xlabel: str | None = None
    ylabel: str | None = None
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"kind must be one of {KINDS}, got '{self.kind}'")
        if not self.inputs:
            raise SpecError("inputs must name at least one CSV file")
        if not self.out:
            raise SpecError("out must name the output image path")
        if self.labels is not None and len(self.labels) != len(self.inputs):
            raise SpecError("labels must match inputs one-to-one")


def parse_figure_spec(path: str) -> FigureSpec:
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise SpecError(f"cannot read '{path}': {exc}") from None
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise SpecError(f"{path}:{lineno}: not 'key = value': '{text}'")
        key, _, value = text.partition("=")
        values[key.strip()] = value.strip()

    def split_list(key):
        return [item.strip() for item in values.get(key, "").split(",") if item.strip()]

    where = {}
    for clause in split_list("where"):
        if "=" not in clause:
            raise SpecError(f"where clause '{clause}' is not column=value")
        column, _, value = clause.partition("=")
        where[column.strip()] = value.strip()

    # relative paths resolve against the working directory, like the
    # experiment CLI's out_prefix
    return FigureSpec(
        kind=values.get("kind", ""),
        inputs=split_list("inputs"),
        out=values.get("out", ""),
        group_by=split_list("group_by") or ["scheme"],
        where=where,
        labels=split_list("labels") or None,
        xlabel=values.get("xlabel"),
        ylabel=values.get("ylabel"),
        title=values.get("title"),
    )


def read_csv_columns(path: str, required: list[str]) -> dict[str, list[str]]:
    """Read a CSV into column lists, checking the required columns exist."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for column in required:
                if column not in header:
                    raise SpecError(f"column '{column}' missing from {path}")
            rows = list(reader)
    except OSError as exc:
        raise SpecError(f"cannot read '{path}': {exc}") from None
    return {column: [row[column] for row in rows] for column in header}
