"""Search for cross-group orderings that trade ranking utility against disparity.

The central routine fills an (n_a + 1) x (n_b + 1) decision lattice: cell
(i, j) holds the best merge of the top-i samples of group a with the top-j of
group b, scored by the partial objective obtained when the path is completed
by appending both remaining suffixes. Appending a sample updates the two
cross-group win counts in O(1):

  * appending an a-positive adds the b-negatives still unplaced to c_ab,
  * appending a b-positive adds the a-negatives still unplaced to c_ba,
  * appending any negative changes neither count.

With a zero trade-off weight the lattice recursion is exact and the recovered
ordering maximizes AUC globally; with the disparity-only objective the final
disparity is bounded by max(1/n1_a, 1/n1_b) for the cross-group metric (and
the analogous bound for the positive-ranking metric). Intermediate weights
give a locally optimal path, which is all the recursion can promise.

Two constructions back the search up: a single-pass greedy minimizer with the
same disparity bound, and an all-of-one-group insertion that realizes the
existence bound min(max(1/n1_b, 1/n0_b), max(1/n1_a, 1/n0_a)). A brute-force
enumerator over all valid interleavings serves as the exactness oracle.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import _dp
from .errors import CapacityExceeded, ConfigError, EmptyClass, EmptyGroup
from .metrics import FairnessReport, GroupCounts
from .ordering import (
    TAKE_A,
    TAKE_B,
    CrossGroupOrdering,
    RankedGroup,
    metrics_from_ordering,
    ordering_from_scores,
    positional_iauc_num,
)

__all__ = [
    "DisparityMetric",
    "ObjectiveConfig",
    "PathCell",
    "TradeoffPoint",
    "TradeoffCurve",
    "DEFAULT_CELL_BUDGET",
    "DEFAULT_PATH_BUDGET",
    "optimize_ordering",
    "greedy_forward",
    "insertion_baseline",
    "brute_force_optimal",
    "sweep_lambda",
    "partial_objective",
    "replay_path",
]

DEFAULT_CELL_BUDGET = 10**9
DEFAULT_PATH_BUDGET = 10**6


class DisparityMetric(str, Enum):
    XAUC = "xauc"
    PRF = "prf"


@dataclass(frozen=True)
class ObjectiveConfig:
    """Weighted utility-disparity objective: AUC - lambda * disparity.

    disparity_only means the infinite-weight limit: the utility term is
    dropped and the search minimizes the disparity alone, with comparisons
    done in exact integer arithmetic.
    """

    lambda_: float = 0.0
    metric: DisparityMetric = DisparityMetric.XAUC
    disparity_only: bool = False

    def __post_init__(self):
        object.__setattr__(self, "metric", DisparityMetric(self.metric))
        if not math.isfinite(self.lambda_) or self.lambda_ < 0:
            raise ConfigError(f"lambda must be finite and >= 0, got {self.lambda_!r}")


@dataclass(frozen=True)
class PathCell:
    """One visited lattice cell: prefix sizes, win counts, partial objective."""

    i: int
    j: int
    c_ab: int
    c_ba: int
    ghat: float


@dataclass(frozen=True)
class TradeoffPoint:
    """One sweep result; kind is 'unadjusted', 'lambda' or 'disparity_only'."""

    kind: str
    lambda_: float | None
    ordering: CrossGroupOrdering
    report: FairnessReport

    @property
    def auc(self) -> float | None:
        return self.report.auc

    @property
    def delta_xauc(self) -> float | None:
        return self.report.delta_xauc

    @property
    def delta_prf(self) -> float | None:
        return self.report.delta_prf


@dataclass(frozen=True)
class TradeoffCurve:
    """Baseline point plus one point per trade-off weight, weights ascending."""

    metric: DisparityMetric
    points: tuple[TradeoffPoint, ...]

    @property
    def baseline(self) -> TradeoffPoint:
        return self.points[0]


def _counts(ranked_a: RankedGroup, ranked_b: RankedGroup) -> GroupCounts:
    return GroupCounts(
        n1_a=ranked_a.n1, n0_a=ranked_a.n0, n1_b=ranked_b.n1, n0_b=ranked_b.n0
    )


def _require_disparity_classes(counts: GroupCounts) -> None:
    if counts.n1_a == 0 or counts.n1_b == 0 or counts.n0_a == 0 or counts.n0_b == 0:
        raise EmptyClass(
            "disparity objectives need positives and negatives in both groups, got "
            f"n1_a={counts.n1_a} n0_a={counts.n0_a} n1_b={counts.n1_b} n0_b={counts.n0_b}"
        )


def _disparity_coeffs(
    counts: GroupCounts, metric: DisparityMetric, iauc_a_num: int, iauc_b_num: int
) -> tuple[int, int, int]:
    """Integer (alpha, beta, gamma) so the disparity sign/magnitude is that of
    alpha*c_ab - beta*c_ba + gamma, on a metric-dependent common denominator."""
    if metric is DisparityMetric.XAUC:
        return counts.k_ba, counts.k_ab, 0
    return (
        counts.n1_b,
        counts.n1_a,
        counts.n1_b * iauc_a_num - counts.n1_a * iauc_b_num,
    )


def _disparity_scale(counts: GroupCounts, metric: DisparityMetric) -> int:
    """Denominator that turns the integer disparity of _disparity_coeffs into a rate."""
    if metric is DisparityMetric.XAUC:
        return counts.k_ab * counts.k_ba
    return counts.n1_a * counts.n1_b * counts.n0


def partial_objective(
    c_ab: int,
    c_ba: int,
    counts: GroupCounts,
    config: ObjectiveConfig,
    iauc_a_num: int = 0,
    iauc_b_num: int = 0,
) -> float:
    """Objective value of a path prefix completed by both remaining suffixes."""
    if not config.disparity_only and config.lambda_ == 0:
        return float(c_ab + c_ba)  # penalty inactive; denominators may be zero
    if config.metric is DisparityMetric.XAUC:
        disparity = c_ab / counts.k_ab - c_ba / counts.k_ba
    else:
        disparity = (c_ab + iauc_a_num) / (counts.n1_a * counts.n0) - (
            c_ba + iauc_b_num
        ) / (counts.n1_b * counts.n0)
    if config.disparity_only:
        return -abs(disparity)
    return c_ab + c_ba - config.lambda_ * counts.k * abs(disparity)


def optimize_ordering(
    ranked_a: RankedGroup,
    ranked_b: RankedGroup,
    config: ObjectiveConfig,
    cell_budget: int = DEFAULT_CELL_BUDGET,
) -> CrossGroupOrdering:
    """Lattice search for the best-scoring cross-group ordering.

    Boundary paths are forced; an interior cell extends whichever predecessor
    scores strictly higher when continued with its group's next sample, with
    ties resolved toward group b. Runs in O(n_a * n_b) time and one byte of
    backpointer per four cells.
    """
    if ranked_a.n == 0 or ranked_b.n == 0:
        raise EmptyGroup("both groups must be nonempty")
    if ranked_a.n * ranked_b.n > cell_budget:
        raise CapacityExceeded(
            f"lattice of {ranked_a.n} x {ranked_b.n} cells exceeds budget {cell_budget}"
        )
    counts = _counts(ranked_a, ranked_b)
    needs_disparity = config.disparity_only or config.lambda_ > 0
    if needs_disparity:
        _require_disparity_classes(counts)
    ia = ib = 0
    if config.metric is DisparityMetric.PRF and needs_disparity:
        ia = positional_iauc_num(ranked_a)
        ib = positional_iauc_num(ranked_b)
    if config.disparity_only:
        alpha, beta, gamma = _disparity_coeffs(counts, config.metric, ia, ib)
        back, _, _ = _dp.fill_int(
            ranked_a.labels, ranked_b.labels,
            ranked_a.suffix_neg, ranked_b.suffix_neg,
            alpha, beta, gamma,
        )
    else:
        if needs_disparity:
            if config.metric is DisparityMetric.XAUC:
                u, v, w = counts.k_ab, counts.k_ba, 0.0
            else:
                u = counts.n1_a * counts.n0
                v = counts.n1_b * counts.n0
                w = ia / u - ib / v
        else:
            u, v, w = 1, 1, 0.0  # penalty weight is zero; dodge 0/0
        back, _, _ = _dp.fill_float(
            ranked_a.labels, ranked_b.labels,
            ranked_a.suffix_neg, ranked_b.suffix_neg,
            config.lambda_ * counts.k, u, v, w,
        )
    steps = _dp.walk_back(back, ranked_a.n, ranked_b.n)
    return CrossGroupOrdering(steps)


def replay_path(
    ordering: CrossGroupOrdering,
    ranked_a: RankedGroup,
    ranked_b: RankedGroup,
    config: ObjectiveConfig,
) -> list[PathCell]:
    """Walk an ordering through the lattice, reproducing every cell it visits."""
    ordering.check_compatible(ranked_a, ranked_b)
    counts = _counts(ranked_a, ranked_b)
    ia = positional_iauc_num(ranked_a)
    ib = positional_iauc_num(ranked_b)
    la, lb = ranked_a.labels, ranked_b.labels
    sna, snb = ranked_a.suffix_neg, ranked_b.suffix_neg
    i = j = 0
    c_ab = c_ba = 0
    cells = [PathCell(0, 0, 0, 0, partial_objective(0, 0, counts, config, ia, ib))]
    for step in ordering.steps:
        if step == TAKE_A:
            c_ab += int(la[i]) * int(snb[j])
            i += 1
        else:
            c_ba += int(lb[j]) * int(sna[i])
            j += 1
        cells.append(
            PathCell(i, j, c_ab, c_ba, partial_objective(c_ab, c_ba, counts, config, ia, ib))
        )
    return cells


def greedy_forward(
    ranked_a: RankedGroup,
    ranked_b: RankedGroup,
    metric: DisparityMetric = DisparityMetric.XAUC,
) -> CrossGroupOrdering:
    """Single forward pass minimizing the disparity one step at a time.

    At every step the sample whose one-step continuation scores at least as
    well is appended, with ties going to group a. Achieves the same terminal
    disparity bound as the full disparity-only lattice search, in O(n) time.
    """
    if ranked_a.n == 0 or ranked_b.n == 0:
        raise EmptyGroup("both groups must be nonempty")
    counts = _counts(ranked_a, ranked_b)
    _require_disparity_classes(counts)
    metric = DisparityMetric(metric)
    ia = positional_iauc_num(ranked_a) if metric is DisparityMetric.PRF else 0
    ib = positional_iauc_num(ranked_b) if metric is DisparityMetric.PRF else 0
    alpha, beta, gamma = _disparity_coeffs(counts, metric, ia, ib)
    la = ranked_a.labels.tolist()
    lb = ranked_b.labels.tolist()
    sna = ranked_a.suffix_neg.tolist()
    snb = ranked_b.suffix_neg.tolist()
    na, nb = ranked_a.n, ranked_b.n
    steps = np.empty(na + nb, dtype=np.uint8)
    i = j = 0
    c_ab = c_ba = 0
    for t in range(na + nb):
        take_a = False
        if i < na and j < nb:
            d_a = alpha * (c_ab + la[i] * snb[j]) - beta * c_ba + gamma
            d_b = alpha * c_ab - beta * (c_ba + lb[j] * sna[i]) + gamma
            take_a = abs(d_a) <= abs(d_b)
        elif i < na:
            take_a = True
        if take_a:
            c_ab += la[i] * snb[j]
            steps[t] = TAKE_A
            i += 1
        else:
            c_ba += lb[j] * sna[i]
            steps[t] = TAKE_B
            j += 1
    return CrossGroupOrdering(steps)


def insertion_baseline(
    ranked_a: RankedGroup,
    ranked_b: RankedGroup,
    metric: DisparityMetric = DisparityMetric.XAUC,
) -> CrossGroupOrdering:
    """Insert one group wholesale into the other at the disparity sign change.

    The signed disparity of the insert-all-of-b-after-position-i ordering is
    monotone increasing in i, so the crossing position bounds the achieved
    disparity by one insertion step. Both directions are tried and the one
    with the smaller exact disparity wins (ties prefer inserting b into a).
    """
    if ranked_a.n == 0 or ranked_b.n == 0:
        raise EmptyGroup("both groups must be nonempty")
    counts = _counts(ranked_a, ranked_b)
    _require_disparity_classes(counts)
    metric = DisparityMetric(metric)
    ia = positional_iauc_num(ranked_a) if metric is DisparityMetric.PRF else 0
    ib = positional_iauc_num(ranked_b) if metric is DisparityMetric.PRF else 0
    alpha, beta, gamma = _disparity_coeffs(counts, metric, ia, ib)

    def crossing(d: np.ndarray) -> tuple[int, int]:
        # d is monotone in the insertion position, so the smallest magnitude
        # sits at the sign change; argmin takes the earliest position on ties
        magnitude = np.abs(d)
        pos = int(np.argmin(magnitude))
        return pos, int(magnitude[pos])

    # direction 1: all of b between a[pos] and a[pos + 1]
    d1 = alpha * (ranked_a.prefix_pos * counts.n0_b) - beta * (
        counts.n1_b * ranked_a.suffix_neg
    ) + gamma
    pos_a, disp_a = crossing(d1)
    # direction 2: all of a between b[pos] and b[pos + 1]
    d2 = alpha * (counts.n1_a * ranked_b.suffix_neg) - beta * (
        ranked_b.prefix_pos * counts.n0_a
    ) + gamma
    pos_b, disp_b = crossing(d2)

    if disp_a <= disp_b:
        parts = [TAKE_A] * pos_a + [TAKE_B] * ranked_b.n + [TAKE_A] * (ranked_a.n - pos_a)
    else:
        parts = [TAKE_B] * pos_b + [TAKE_A] * ranked_a.n + [TAKE_B] * (ranked_b.n - pos_b)
    return CrossGroupOrdering(np.array(parts, dtype=np.uint8))


def brute_force_optimal(
    ranked_a: RankedGroup,
    ranked_b: RankedGroup,
    config: ObjectiveConfig,
    path_budget: int = DEFAULT_PATH_BUDGET,
) -> CrossGroupOrdering:
    """Enumerate every valid interleaving and return an exact maximizer.

    The objective is evaluated in integer arithmetic (the trade-off weight is
    expanded to an exact ratio), and ties break to the lexicographically
    earliest step sequence with take-a ordered before take-b. Test oracle;
    cost grows as C(n_a + n_b, n_a).
    """
    if ranked_a.n == 0 or ranked_b.n == 0:
        raise EmptyGroup("both groups must be nonempty")
    na, nb = ranked_a.n, ranked_b.n
    n_paths = math.comb(na + nb, na)
    if n_paths > path_budget:
        raise CapacityExceeded(f"{n_paths} interleavings exceed budget {path_budget}")
    counts = _counts(ranked_a, ranked_b)
    needs_disparity = config.disparity_only or config.lambda_ > 0
    if needs_disparity:
        _require_disparity_classes(counts)
    ia = positional_iauc_num(ranked_a)
    ib = positional_iauc_num(ranked_b)
    alpha, beta, gamma = (
        _disparity_coeffs(counts, config.metric, ia, ib) if needs_disparity else (0, 0, 0)
    )
    scale = _disparity_scale(counts, config.metric) if needs_disparity else 1
    lam_num, lam_den = config.lambda_.as_integer_ratio() if not config.disparity_only else (0, 1)

    la = ranked_a.labels.tolist()
    lb = ranked_b.labels.tolist()
    sna = ranked_a.suffix_neg.tolist()
    snb = ranked_b.suffix_neg.tolist()

    best_key: int | None = None
    best_steps: list[int] | None = None
    steps: list[int] = []

    def leaf_key(c_ab: int, c_ba: int) -> int:
        if config.disparity_only:
            return -abs(alpha * c_ab - beta * c_ba + gamma)
        # J * (k * lam_den * scale): exact integer comparison key for
        # AUC - lambda * disparity with all paths sharing the denominators
        utility = (ia + ib + c_ab + c_ba) * lam_den * scale
        if needs_disparity:
            utility -= lam_num * counts.k * abs(alpha * c_ab - beta * c_ba + gamma)
        return utility

    def explore(i: int, j: int, c_ab: int, c_ba: int) -> None:
        nonlocal best_key, best_steps
        if i == na and j == nb:
            key = leaf_key(c_ab, c_ba)
            if best_key is None or key > best_key:
                best_key = key
                best_steps = steps.copy()
            return
        if i < na:
            steps.append(TAKE_A)
            explore(i + 1, j, c_ab + la[i] * snb[j], c_ba)
            steps.pop()
        if j < nb:
            steps.append(TAKE_B)
            explore(i, j + 1, c_ab, c_ba + lb[j] * sna[i])
            steps.pop()

    explore(0, 0, 0, 0)
    assert best_steps is not None
    return CrossGroupOrdering(np.array(best_steps, dtype=np.uint8))


def sweep_lambda(
    ranked_a: RankedGroup,
    ranked_b: RankedGroup,
    lambda_grid: Sequence[float],
    metric: DisparityMetric = DisparityMetric.XAUC,
    include_disparity_only: bool = True,
    cell_budget: int = DEFAULT_CELL_BUDGET,
    workers: int | None = None,
) -> TradeoffCurve:
    """Optimize once per trade-off weight and collect the induced metrics.

    The curve always starts with the unadjusted score-merged baseline and, by
    default, ends with the disparity-only point. Each point keeps its ordering
    so its metrics can be reproduced from scratch. The independent searches
    fan out over a thread pool (the lattice kernels release the GIL) and are
    collected in grid order, so results are deterministic regardless of
    worker count; workers=1 forces a sequential run.
    """
    metric = DisparityMetric(metric)
    grid = [float(v) for v in lambda_grid]
    if not grid:
        raise ConfigError("lambda grid must be nonempty")
    if any(not math.isfinite(v) or v < 0 for v in grid):
        raise ConfigError("lambda grid values must be finite and >= 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("lambda grid must be strictly increasing")

    kinds: list[tuple[str, float | None, ObjectiveConfig]] = [
        ("lambda", lam, ObjectiveConfig(lambda_=lam, metric=metric)) for lam in grid
    ]
    if include_disparity_only:
        kinds.append(
            ("disparity_only", math.inf, ObjectiveConfig(metric=metric, disparity_only=True))
        )
    if workers is None:
        workers = min(len(kinds), os.cpu_count() or 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            orderings = list(
                pool.map(
                    lambda cfg: optimize_ordering(
                        ranked_a, ranked_b, cfg, cell_budget=cell_budget
                    ),
                    [cfg for _, _, cfg in kinds],
                )
            )
    else:
        orderings = [
            optimize_ordering(ranked_a, ranked_b, cfg, cell_budget=cell_budget)
            for _, _, cfg in kinds
        ]

    baseline = ordering_from_scores(ranked_a, ranked_b)
    points = [
        TradeoffPoint(
            kind="unadjusted",
            lambda_=None,
            ordering=baseline,
            report=metrics_from_ordering(baseline, ranked_a, ranked_b),
        )
    ]
    for (kind, lam, _), ordering in zip(kinds, orderings):
        points.append(
            TradeoffPoint(
                kind=kind,
                lambda_=lam,
                ordering=ordering,
                report=metrics_from_ordering(ordering, ranked_a, ranked_b),
            )
        )
    return TradeoffCurve(metric=metric, points=tuple(points))
