"""Exact pair-counting utility and fairness metrics for two-group ranking scores.

Every metric here is a strictly-counted pair probability: a positive sample
"wins" against a negative sample only when its score is strictly greater, so
tied pairs contribute nothing (this deviates from the tie-splitting convention
of most AUC implementations on purpose). Numerators are kept as exact integers
and rates are formed as double-precision quotients at the very end, which lets
the decomposition identities between AUC, within-group AUC, cross-group AUC
and positive-ranking rates hold exactly on the integer numerators.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyClass, GroupCountError, ScoreRangeWarning

__all__ = [
    "ScoredSample",
    "GroupCounts",
    "PairCounts",
    "FairnessReport",
    "compute_auc",
    "compute_xauc",
    "compute_iauc",
    "compute_prf",
    "cross_pair_wins",
    "fairness_report",
    "build_report",
]


@dataclass(frozen=True)
class ScoredSample:
    """One individual: opaque id, group tag, binary outcome, finite ranking score."""

    id: str
    group: str
    label: int
    score: float

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")
        if not math.isfinite(self.score):
            raise ValueError(f"score must be finite, got {self.score!r}")


@dataclass(frozen=True)
class GroupCounts:
    """Positive/negative counts per group plus the derived pair-count denominators."""

    n1_a: int
    n0_a: int
    n1_b: int
    n0_b: int

    @property
    def n1(self) -> int:
        return self.n1_a + self.n1_b

    @property
    def n0(self) -> int:
        return self.n0_a + self.n0_b

    @property
    def n_a(self) -> int:
        return self.n1_a + self.n0_a

    @property
    def n_b(self) -> int:
        return self.n1_b + self.n0_b

    @property
    def n(self) -> int:
        return self.n_a + self.n_b

    @property
    def k(self) -> int:
        return self.n1 * self.n0

    @property
    def k_a(self) -> int:
        return self.n1_a * self.n0_a

    @property
    def k_b(self) -> int:
        return self.n1_b * self.n0_b

    @property
    def k_ab(self) -> int:
        return self.n1_a * self.n0_b

    @property
    def k_ba(self) -> int:
        return self.n1_b * self.n0_a


@dataclass(frozen=True)
class PairCounts:
    """Integer numerators behind every rate in a FairnessReport."""

    auc: int
    iauc_a: int
    iauc_b: int
    xauc_ab: int
    xauc_ba: int
    prf_a: int
    prf_b: int


@dataclass(frozen=True)
class FairnessReport:
    """All utility and fairness rates for one scored two-group dataset.

    A rate is None when its denominator is zero (the class it needs is absent);
    such partial reports list the absent metrics in :meth:`missing`.
    """

    group_a: str
    group_b: str
    counts: GroupCounts
    pair_counts: PairCounts
    auc: float | None
    iauc_a: float | None
    iauc_b: float | None
    xauc_ab: float | None
    xauc_ba: float | None
    delta_xauc: float | None
    prf_a: float | None
    prf_b: float | None
    delta_prf: float | None

    def missing(self) -> list[str]:
        """Names of metrics that could not be computed on this data."""
        fields = (
            "auc", "iauc_a", "iauc_b", "xauc_ab", "xauc_ba",
            "delta_xauc", "prf_a", "prf_b", "delta_prf",
        )
        return [f for f in fields if getattr(self, f) is None]

    def disparity(self, metric: str) -> float | None:
        """Return delta_xauc or delta_prf by metric name ('xauc' or 'prf')."""
        if metric == "xauc":
            return self.delta_xauc
        if metric == "prf":
            return self.delta_prf
        raise ValueError(f"unknown disparity metric {metric!r}")

    def as_dict(self) -> dict:
        c = self.counts
        p = self.pair_counts
        return {
            "group_a": self.group_a,
            "group_b": self.group_b,
            "auc": self.auc,
            "iauc_a": self.iauc_a,
            "iauc_b": self.iauc_b,
            "xauc_ab": self.xauc_ab,
            "xauc_ba": self.xauc_ba,
            "delta_xauc": self.delta_xauc,
            "prf_a": self.prf_a,
            "prf_b": self.prf_b,
            "delta_prf": self.delta_prf,
            "counts": {
                "n1_a": c.n1_a, "n0_a": c.n0_a,
                "n1_b": c.n1_b, "n0_b": c.n0_b,
            },
            "pair_counts": {
                "auc": p.auc,
                "iauc_a": p.iauc_a, "iauc_b": p.iauc_b,
                "xauc_ab": p.xauc_ab, "xauc_ba": p.xauc_ba,
                "prf_a": p.prf_a, "prf_b": p.prf_b,
            },
        }


def _as_arrays(samples: Sequence[ScoredSample]):
    groups = np.array([s.group for s in samples])
    labels = np.fromiter((s.label for s in samples), dtype=np.int64, count=len(samples))
    scores = np.fromiter((s.score for s in samples), dtype=np.float64, count=len(samples))
    if scores.size and (scores.min() < 0.0 or scores.max() > 1.0):
        warnings.warn(
            "scores outside [0, 1]; metrics depend only on ordering, continuing",
            ScoreRangeWarning,
            stacklevel=3,
        )
    return groups, labels, scores


def _wins(pos_scores: np.ndarray, neg_scores: np.ndarray) -> int:
    """Number of (positive, negative) pairs with strictly greater positive score."""
    if pos_scores.size == 0 or neg_scores.size == 0:
        return 0
    neg_sorted = np.sort(neg_scores)
    return int(np.searchsorted(neg_sorted, pos_scores, side="left").sum())


def _rate(num: int, den: int) -> float | None:
    return num / den if den > 0 else None


def compute_auc(samples: Sequence[ScoredSample]) -> float:
    """Probability that a random positive outscores a random negative (strict ties lose)."""
    _, labels, scores = _as_arrays(samples)
    pos, neg = scores[labels == 1], scores[labels == 0]
    if pos.size == 0 or neg.size == 0:
        raise EmptyClass("AUC needs at least one positive and one negative sample")
    return _wins(pos, neg) / (pos.size * neg.size)


def cross_pair_wins(
    samples: Sequence[ScoredSample], from_group: str, to_group: str
) -> tuple[int, int]:
    """Integer (numerator, denominator) for positives of from_group vs negatives of to_group."""
    groups, labels, scores = _as_arrays(samples)
    pos = scores[(groups == from_group) & (labels == 1)]
    neg = scores[(groups == to_group) & (labels == 0)]
    if pos.size == 0:
        raise EmptyClass(f"group {from_group!r} has no positive samples")
    if neg.size == 0:
        raise EmptyClass(f"group {to_group!r} has no negative samples")
    return _wins(pos, neg), pos.size * neg.size


def compute_xauc(samples: Sequence[ScoredSample], from_group: str, to_group: str) -> float:
    """Probability a random positive of from_group outscores a random negative of to_group."""
    num, den = cross_pair_wins(samples, from_group, to_group)
    return num / den


def compute_iauc(samples: Sequence[ScoredSample], group: str) -> float:
    """Within-group AUC of one group, by strict pair counting."""
    groups, labels, scores = _as_arrays(samples)
    mask = groups == group
    pos, neg = scores[mask & (labels == 1)], scores[mask & (labels == 0)]
    if pos.size == 0 or neg.size == 0:
        raise EmptyClass(f"group {group!r} needs both a positive and a negative sample")
    return _wins(pos, neg) / (pos.size * neg.size)


def compute_prf(samples: Sequence[ScoredSample], group: str) -> float:
    """Probability a random positive of the group outscores a random negative of either group."""
    groups, labels, scores = _as_arrays(samples)
    pos = scores[(groups == group) & (labels == 1)]
    neg = scores[labels == 0]
    if pos.size == 0:
        raise EmptyClass(f"group {group!r} has no positive samples")
    if neg.size == 0:
        raise EmptyClass("dataset has no negative samples")
    return _wins(pos, neg) / (pos.size * neg.size)


def build_report(
    group_a: str,
    group_b: str,
    counts: GroupCounts,
    iauc_a_num: int,
    iauc_b_num: int,
    xauc_ab_num: int,
    xauc_ba_num: int,
) -> FairnessReport:
    """Assemble a FairnessReport from the four independent pair numerators.

    The AUC and positive-ranking numerators are derived, never recounted, so the
    decomposition identities hold exactly by construction and any recounting bug
    surfaces in the component numerators themselves.
    """
    auc_num = iauc_a_num + iauc_b_num + xauc_ab_num + xauc_ba_num
    prf_a_num = iauc_a_num + xauc_ab_num
    prf_b_num = iauc_b_num + xauc_ba_num
    pair_counts = PairCounts(
        auc=auc_num,
        iauc_a=iauc_a_num,
        iauc_b=iauc_b_num,
        xauc_ab=xauc_ab_num,
        xauc_ba=xauc_ba_num,
        prf_a=prf_a_num,
        prf_b=prf_b_num,
    )
    xauc_ab = _rate(xauc_ab_num, counts.k_ab)
    xauc_ba = _rate(xauc_ba_num, counts.k_ba)
    prf_a = _rate(prf_a_num, counts.n1_a * counts.n0)
    prf_b = _rate(prf_b_num, counts.n1_b * counts.n0)
    return FairnessReport(
        group_a=group_a,
        group_b=group_b,
        counts=counts,
        pair_counts=pair_counts,
        auc=_rate(auc_num, counts.k),
        iauc_a=_rate(iauc_a_num, counts.k_a),
        iauc_b=_rate(iauc_b_num, counts.k_b),
        xauc_ab=xauc_ab,
        xauc_ba=xauc_ba,
        delta_xauc=abs(xauc_ab - xauc_ba) if xauc_ab is not None and xauc_ba is not None else None,
        prf_a=prf_a,
        prf_b=prf_b,
        delta_prf=abs(prf_a - prf_b) if prf_a is not None and prf_b is not None else None,
    )


def fairness_report(
    samples: Sequence[ScoredSample],
    group_a: str | None = None,
    group_b: str | None = None,
) -> FairnessReport:
    """Compute every metric for a two-group dataset in one O(n log n) pass.

    Roles default to sorted group-tag order when not given. Metrics whose
    denominator is zero come back as None rather than raising, so degenerate
    data still yields a partial report.
    """
    groups, labels, scores = _as_arrays(samples)
    if group_a is None or group_b is None:
        tags = sorted(set(groups.tolist()))
        if len(tags) != 2:
            raise GroupCountError(f"expected exactly two groups, found {tags!r}")
        group_a, group_b = tags
    mask_a = groups == group_a
    mask_b = groups == group_b
    pos_a, neg_a = scores[mask_a & (labels == 1)], scores[mask_a & (labels == 0)]
    pos_b, neg_b = scores[mask_b & (labels == 1)], scores[mask_b & (labels == 0)]
    counts = GroupCounts(
        n1_a=pos_a.size, n0_a=neg_a.size, n1_b=pos_b.size, n0_b=neg_b.size
    )
    return build_report(
        group_a,
        group_b,
        counts,
        iauc_a_num=_wins(pos_a, neg_a),
        iauc_b_num=_wins(pos_b, neg_b),
        xauc_ab_num=_wins(pos_a, neg_b),
        xauc_ba_num=_wins(pos_b, neg_a),
    )
