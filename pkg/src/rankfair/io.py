"""CSV ingestion, dataset roles, and artifact emission.

Input files are header-first CSVs with one row per scored sample; column names
are remappable. Within a dataset exactly two group tags must appear, and one
of them is designated the anchor (group a, scores never modified) while the
other is the adjusted group (group b). All emitted floating values carry 17
significant digits so a parse round-trip reproduces the exact doubles.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, EmptyClass, GroupCountError, ParseError
from .metrics import ScoredSample, compute_prf

__all__ = [
    "ColumnMap",
    "DEFAULT_COLUMNS",
    "Dataset",
    "ingest_csv",
    "resolve_roles",
    "split_dataset",
    "write_samples_csv",
    "write_json",
    "write_report_csv",
    "write_curve_csv",
    "fmt_float",
]


def fmt_float(x: float) -> str:
    """17 significant digits: enough to reparse the exact double."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class ColumnMap:
    id: str = "id"
    group: str = "group"
    label: str = "label"
    score: str = "score"
    adjusted: str = "adjusted_score"


DEFAULT_COLUMNS = ColumnMap()


@dataclass(frozen=True)
class Dataset:
    """Scored samples plus the anchor/adjusted role assignment of its two groups."""

    samples: tuple[ScoredSample, ...]
    group_a: str
    group_b: str
    source: str | None = None

    @property
    def group_values(self) -> tuple[str, str]:
        return (self.group_a, self.group_b)

    def scores(self) -> np.ndarray:
        return np.array([s.score for s in self.samples], dtype=np.float64)

    def subset(self, indices: Sequence[int]) -> "Dataset":
        picked = tuple(self.samples[i] for i in indices)
        return replace(self, samples=picked)

    def with_scores(self, scores: Sequence[float]) -> "Dataset":
        if len(scores) != len(self.samples):
            raise ValueError("score vector length does not match the dataset")
        swapped = tuple(
            replace(s, score=float(v)) for s, v in zip(self.samples, scores)
        )
        return replace(self, samples=swapped)


def resolve_roles(samples: Sequence[ScoredSample], anchor_group: str = "auto") -> tuple[str, str]:
    """Pick (anchor, adjusted) group tags.

    'auto' anchors the group with the higher positive-ranking rate, so the
    disadvantaged group is the one whose scores get adjusted. When that rate
    is unavailable (a group without positives, or no negatives at all) the
    roles fall back to sorted tag order, with a warning.
    """
    tags = sorted({s.group for s in samples})
    if len(tags) != 2:
        raise GroupCountError(f"expected exactly 2 group tags, found {len(tags)}: {tags}")
    if anchor_group != "auto":
        if anchor_group not in tags:
            raise ConfigError(f"anchor group {anchor_group!r} not among groups {tags}")
        other = tags[0] if tags[1] == anchor_group else tags[1]
        return anchor_group, other
    try:
        prf = {t: compute_prf(samples, t) for t in tags}
    except EmptyClass:
        warnings.warn(
            "cannot rank groups by positive-ranking rate on this data; "
            "using sorted tag order for anchor selection",
            UserWarning,
            stacklevel=2,
        )
        return tags[0], tags[1]
    if prf[tags[0]] == prf[tags[1]]:
        return tags[0], tags[1]
    ordered = sorted(tags, key=lambda t: -prf[t])
    return ordered[0], ordered[1]


def ingest_csv(
    path: str | Path,
    columns: ColumnMap = DEFAULT_COLUMNS,
    anchor_group: str = "auto",
) -> Dataset:
    """Parse a header CSV into a Dataset, rejecting bad rows with line numbers."""
    score_col = columns.score
    samples: list[ScoredSample] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError(1, "header", "file is empty")
        for col in (columns.id, columns.group, columns.label, score_col):
            if col not in reader.fieldnames:
                raise ParseError(1, col, "column missing from header")
        for row in reader:
            line = reader.line_num

            def cell(col: str) -> str:
                value = row.get(col)
                if value is None or value == "":
                    raise ParseError(line, col, "missing value")
                return value

            raw_label = cell(columns.label).strip()
            if raw_label not in ("0", "1"):
                raise ParseError(line, columns.label, f"label out of domain: {raw_label!r}")
            raw_score = cell(score_col).strip()
            try:
                score = float(raw_score)
            except ValueError:
                raise ParseError(line, score_col, f"not a number: {raw_score!r}") from None
            if not math.isfinite(score):
                raise ParseError(line, score_col, f"score not finite: {raw_score!r}")
            samples.append(
                ScoredSample(
                    id=cell(columns.id),
                    group=cell(columns.group),
                    label=int(raw_label),
                    score=score,
                )
            )
    group_a, group_b = resolve_roles(samples, anchor_group)
    return Dataset(
        samples=tuple(samples), group_a=group_a, group_b=group_b, source=str(path)
    )


def split_dataset(dataset: Dataset, frac: float, seed: int) -> tuple[Dataset, Dataset]:
    """Reproducible train/test split; row order within splits follows the file."""
    if not 0.0 < frac < 1.0:
        raise ConfigError(f"split fraction must be in (0, 1), got {frac!r}")
    n = len(dataset.samples)
    n_train = int(round(frac * n))
    if n_train == 0 or n_train == n:
        raise ConfigError(f"split {frac} leaves an empty side for n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    train_idx = np.sort(perm[:n_train])
    test_idx = np.sort(perm[n_train:])
    return dataset.subset(train_idx.tolist()), dataset.subset(test_idx.tolist())


def write_samples_csv(
    path: str | Path,
    dataset: Dataset,
    adjusted: Sequence[float] | None = None,
    columns: ColumnMap = DEFAULT_COLUMNS,
) -> None:
    """Emit the dataset in its input schema, optionally plus an adjusted column."""
    header = [columns.id, columns.group, columns.label, columns.score]
    if adjusted is not None:
        if len(adjusted) != len(dataset.samples):
            raise ValueError("adjusted score vector length does not match the dataset")
        header.append(columns.adjusted)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i, s in enumerate(dataset.samples):
            row = [s.id, s.group, str(s.label), fmt_float(s.score)]
            if adjusted is not None:
                row.append(fmt_float(adjusted[i]))
            writer.writerow(row)


def write_json(path: str | Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _flatten(prefix: str, value, out: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], out)
    elif isinstance(value, float):
        out.append((prefix, fmt_float(value)))
    else:
        out.append((prefix, "" if value is None else str(value)))


def write_report_csv(path: str | Path, payload: dict) -> None:
    """Flat key,value rendering of a report dict (dotted keys for nesting)."""
    rows: list[tuple[str, str]] = []
    _flatten("", payload, rows)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["key", "value"])
        writer.writerows(rows)


def write_curve_csv(path: str | Path, rows: Sequence[dict]) -> None:
    """Trade-off curve: lambda,split,auc,delta_xauc,delta_prf."""

    def cell(value) -> str:
        return "" if value is None else fmt_float(value)

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["lambda", "split", "auc", "delta_xauc", "delta_prf"])
        for row in rows:
            writer.writerow(
                [
                    row["lambda"],
                    row["split"],
                    cell(row["auc"]),
                    cell(row["delta_xauc"]),
                    cell(row["delta_prf"]),
                ]
            )
