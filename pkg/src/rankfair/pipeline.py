"""End-to-end runs: report, adjust-and-transfer, and trade-off sweeps.

All result metrics are computed from concrete score vectors (original or
adjusted), so any emitted artifact can be re-reported and reproduce the
summary numbers exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .io import Dataset
from .metrics import FairnessReport, fairness_report
from .optimize import (
    DEFAULT_CELL_BUDGET,
    DisparityMetric,
    ObjectiveConfig,
    TradeoffCurve,
    optimize_ordering,
    sweep_lambda,
)
from .ordering import (
    CrossGroupOrdering,
    RankedGroup,
    metrics_from_ordering,
    rank_within_group,
)
from .transfer import ScoreMapping, build_score_mapping, transfer_test_scores

__all__ = [
    "RunConfig",
    "SplitOutcome",
    "AdjustResult",
    "CurveRow",
    "SweepResult",
    "rank_dataset",
    "dataset_report",
    "apply_mapping",
    "run_adjust",
    "run_sweep",
    "auto_lambda_grid",
]


@dataclass(frozen=True)
class RunConfig:
    """Algorithmic knobs shared by the adjust and sweep entry points."""

    metric: DisparityMetric = DisparityMetric.XAUC
    lambda_: float | None = None
    grid: tuple[float, ...] | None = None
    disparity_only: bool = False
    anchor_group: str = "auto"
    seed: int = 0
    out_format: str = "json"
    cell_budget: int = DEFAULT_CELL_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "metric", DisparityMetric(self.metric))

    def objective(self) -> ObjectiveConfig:
        if self.disparity_only:
            return ObjectiveConfig(metric=self.metric, disparity_only=True)
        if self.lambda_ is None:
            raise ConfigError("either lambda_ or disparity_only must be set")
        return ObjectiveConfig(lambda_=self.lambda_, metric=self.metric)


@dataclass(frozen=True)
class SplitOutcome:
    """Before/after reports for one split plus its adjusted score vector."""

    before: FairnessReport
    after: FairnessReport
    adjusted: np.ndarray


@dataclass(frozen=True)
class AdjustResult:
    config: RunConfig
    ordering: CrossGroupOrdering
    ordering_report: FairnessReport
    mapping: ScoreMapping
    train: SplitOutcome
    test: SplitOutcome | None


@dataclass(frozen=True)
class CurveRow:
    kind: str  # unadjusted | lambda | disparity_only
    lambda_: float | None
    split: str  # train | test
    report: FairnessReport

    def lambda_label(self) -> str:
        if self.kind == "unadjusted":
            return "unadjusted"
        if self.kind == "disparity_only":
            return "inf"
        return format(self.lambda_, ".17g")


@dataclass(frozen=True)
class SweepResult:
    config: RunConfig
    grid: tuple[float, ...]
    curve: TradeoffCurve
    rows: tuple[CurveRow, ...]


def rank_dataset(dataset: Dataset) -> tuple[RankedGroup, RankedGroup]:
    return (
        rank_within_group(dataset.samples, dataset.group_a),
        rank_within_group(dataset.samples, dataset.group_b),
    )


def dataset_report(dataset: Dataset) -> FairnessReport:
    return fairness_report(dataset.samples, dataset.group_a, dataset.group_b)


def _check_schema(train: Dataset, test: Dataset) -> None:
    if set(test.group_values) != set(train.group_values):
        raise ConfigError(
            f"test groups {sorted(test.group_values)} do not match train groups "
            f"{sorted(train.group_values)}"
        )


def apply_mapping(dataset: Dataset, mapping: ScoreMapping) -> np.ndarray:
    """Adjusted score vector for a dataset: anchors pass through unchanged."""
    scores = dataset.scores()
    b_rows = np.array(
        [i for i, s in enumerate(dataset.samples) if s.group == mapping.adjusted_group],
        dtype=np.int64,
    )
    if b_rows.size:
        scores[b_rows] = transfer_test_scores(mapping, scores[b_rows])
    return scores


def _outcome(dataset: Dataset, adjusted: np.ndarray) -> SplitOutcome:
    before = dataset_report(dataset)
    after = fairness_report(
        dataset.with_scores(adjusted).samples, dataset.group_a, dataset.group_b
    )
    return SplitOutcome(before=before, after=after, adjusted=adjusted)


def run_adjust(
    train: Dataset, test: Dataset | None, config: RunConfig, margin: float | None = None
) -> AdjustResult:
    """Optimize the train ordering, rearrange train scores, transfer to test."""
    ranked_a, ranked_b = rank_dataset(train)
    ordering = optimize_ordering(
        ranked_a, ranked_b, config.objective(), cell_budget=config.cell_budget
    )
    mapping = build_score_mapping(ordering, ranked_a, ranked_b, margin=margin)

    train_adjusted = train.scores()
    train_adjusted[ranked_b.order] = mapping.train_adj
    train_outcome = _outcome(train, train_adjusted)

    test_outcome = None
    if test is not None:
        _check_schema(train, test)
        aligned = test
        if test.group_a != train.group_a:
            aligned = replace(test, group_a=train.group_a, group_b=train.group_b)
        test_outcome = _outcome(aligned, apply_mapping(aligned, mapping))

    return AdjustResult(
        config=config,
        ordering=ordering,
        ordering_report=metrics_from_ordering(ordering, ranked_a, ranked_b),
        mapping=mapping,
        train=train_outcome,
        test=test_outcome,
    )


def run_sweep(
    train: Dataset,
    test: Dataset | None,
    config: RunConfig,
    margin: float | None = None,
) -> SweepResult:
    """One adjust per grid weight plus the disparity-only endpoint and baseline.

    Every emitted row is recomputed from concrete (adjusted) scores so it can
    be re-verified by reporting on the corresponding emitted file.
    """
    if not config.grid:
        raise ConfigError("sweep needs a lambda grid")
    if test is not None:
        _check_schema(train, test)
        if test.group_a != train.group_a:
            test = replace(test, group_a=train.group_a, group_b=train.group_b)
    ranked_a, ranked_b = rank_dataset(train)
    curve = sweep_lambda(
        ranked_a,
        ranked_b,
        config.grid,
        metric=config.metric,
        include_disparity_only=True,
        cell_budget=config.cell_budget,
    )
    rows: list[CurveRow] = []
    rows.append(CurveRow("unadjusted", None, "train", dataset_report(train)))
    if test is not None:
        rows.append(CurveRow("unadjusted", None, "test", dataset_report(test)))
    for point in curve.points:
        if point.kind == "unadjusted":
            continue
        mapping = build_score_mapping(point.ordering, ranked_a, ranked_b, margin=margin)
        train_adjusted = train.scores()
        train_adjusted[ranked_b.order] = mapping.train_adj
        train_report = fairness_report(
            train.with_scores(train_adjusted).samples, train.group_a, train.group_b
        )
        rows.append(CurveRow(point.kind, point.lambda_, "train", train_report))
        if test is not None:
            test_report = fairness_report(
                test.with_scores(apply_mapping(test, mapping)).samples,
                test.group_a,
                test.group_b,
            )
            rows.append(CurveRow(point.kind, point.lambda_, "test", test_report))
    return SweepResult(config=config, grid=tuple(config.grid), curve=curve, rows=tuple(rows))


def auto_lambda_grid(
    train: Dataset,
    metric: DisparityMetric = DisparityMetric.XAUC,
    base: float = 0.25,
    factor: float = 2.0,
    tolerance: float = 1e-4,
    patience: int = 2,
    max_steps: int = 12,
    cell_budget: int = DEFAULT_CELL_BUDGET,
) -> tuple[float, ...]:
    """Grow a weight grid geometrically until the train disparity stalls.

    Starts at zero and multiplies by `factor`, stopping once the disparity of
    the optimized ordering drops below `tolerance` or fails to improve for
    `patience` consecutive steps.
    """
    if base <= 0 or factor <= 1:
        raise ConfigError("auto grid needs base > 0 and factor > 1")
    metric = DisparityMetric(metric)
    ranked_a, ranked_b = rank_dataset(train)
    grid: list[float] = []
    best = math.inf
    stalled = 0
    lam = 0.0
    for _ in range(max_steps):
        ordering = optimize_ordering(
            ranked_a, ranked_b, ObjectiveConfig(lambda_=lam, metric=metric), cell_budget
        )
        report = metrics_from_ordering(ordering, ranked_a, ranked_b)
        disparity = report.disparity(metric.value)
        grid.append(lam)
        if disparity is not None and disparity < tolerance:
            break
        if disparity is not None and disparity < best:
            best = disparity
            stalled = 0
        else:
            stalled += 1
            if stalled >= patience:
                break
        lam = base if lam == 0.0 else lam * factor
    return tuple(grid)
