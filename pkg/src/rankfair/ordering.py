"""Within-group rankings and cross-group merge orderings.

A two-group dataset is reduced to two descending per-group rankings; any merge
of those rankings that preserves each group's internal order is a cross-group
ordering, represented as a step sequence over {take-from-a, take-from-b}. All
ranking metrics can be evaluated directly on such an ordering by treating the
merged position as the rank, with no ties by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyGroup
from .metrics import FairnessReport, GroupCounts, ScoredSample, build_report

__all__ = [
    "TAKE_A",
    "TAKE_B",
    "RankedGroup",
    "CrossGroupOrdering",
    "rank_within_group",
    "ordering_from_scores",
    "metrics_from_ordering",
    "positional_iauc_num",
]

TAKE_A = 0
TAKE_B = 1


@dataclass(frozen=True)
class RankedGroup:
    """One group's samples sorted by descending score (ties by original index).

    prefix_pos[i] counts positives among the first i ranked samples;
    suffix_neg[i] / suffix_pos[i] count negatives / positives strictly after
    rank position i. All three arrays have length n + 1.
    """

    group: str
    order: np.ndarray
    scores: np.ndarray
    labels: np.ndarray
    prefix_pos: np.ndarray
    suffix_neg: np.ndarray
    suffix_pos: np.ndarray

    @property
    def n(self) -> int:
        return int(self.labels.size)

    @property
    def n1(self) -> int:
        return int(self.prefix_pos[-1])

    @property
    def n0(self) -> int:
        return int(self.suffix_neg[0])


@dataclass(frozen=True)
class CrossGroupOrdering:
    """A merge path over two ranked groups, highest rank first.

    steps[t] is TAKE_A or TAKE_B: which group supplies the sample at merged
    position t + 1. Restricting the merge to either group reproduces that
    group's ranking by construction.
    """

    steps: np.ndarray

    def __post_init__(self):
        steps = np.asarray(self.steps, dtype=np.uint8)
        if steps.ndim != 1:
            raise ValueError("steps must be a flat sequence")
        if steps.size and not np.isin(steps, (TAKE_A, TAKE_B)).all():
            raise ValueError("steps may only contain TAKE_A and TAKE_B")
        object.__setattr__(self, "steps", steps)

    @property
    def n_a(self) -> int:
        return int((self.steps == TAKE_A).sum())

    @property
    def n_b(self) -> int:
        return int((self.steps == TAKE_B).sum())

    def merged_indices(self, ranked_a: RankedGroup, ranked_b: RankedGroup) -> np.ndarray:
        """Dataset-level sample indices in merged rank order."""
        self.check_compatible(ranked_a, ranked_b)
        out = np.empty(self.steps.size, dtype=ranked_a.order.dtype)
        mask = self.steps == TAKE_A
        out[mask] = ranked_a.order
        out[~mask] = ranked_b.order
        return out

    def check_compatible(self, ranked_a: RankedGroup, ranked_b: RankedGroup) -> None:
        if self.n_a != ranked_a.n or self.n_b != ranked_b.n:
            raise ValueError(
                f"ordering holds ({self.n_a}, {self.n_b}) samples but groups have "
                f"({ranked_a.n}, {ranked_b.n})"
            )


def rank_within_group(samples: Sequence[ScoredSample], group: str) -> RankedGroup:
    """Sort one group's samples by descending score, stably, with count arrays."""
    idx = np.array([i for i, s in enumerate(samples) if s.group == group], dtype=np.int64)
    if idx.size == 0:
        raise EmptyGroup(f"group {group!r} has no samples")
    scores = np.array([samples[i].score for i in idx], dtype=np.float64)
    labels = np.array([samples[i].label for i in idx], dtype=np.int64)
    order = np.argsort(-scores, kind="stable")
    scores, labels, idx = scores[order], labels[order], idx[order]
    prefix_pos = np.concatenate(([0], np.cumsum(labels)))
    prefix_neg = np.arange(labels.size + 1) - prefix_pos
    n1, n0 = int(prefix_pos[-1]), int(prefix_neg[-1])
    return RankedGroup(
        group=group,
        order=idx,
        scores=scores,
        labels=labels,
        prefix_pos=prefix_pos.astype(np.int64),
        suffix_neg=(n0 - prefix_neg).astype(np.int64),
        suffix_pos=(n1 - prefix_pos).astype(np.int64),
    )


def ordering_from_scores(ranked_a: RankedGroup, ranked_b: RankedGroup) -> CrossGroupOrdering:
    """Merge by descending score; cross-group ties go to group a.

    This is the unadjusted baseline ordering: on all-distinct scores it induces
    exactly the metrics of the raw scores.
    """
    na, nb = ranked_a.n, ranked_b.n
    steps = np.empty(na + nb, dtype=np.uint8)
    i = j = 0
    sa, sb = ranked_a.scores, ranked_b.scores
    for t in range(na + nb):
        if i < na and (j >= nb or sa[i] >= sb[j]):
            steps[t] = TAKE_A
            i += 1
        else:
            steps[t] = TAKE_B
            j += 1
    return CrossGroupOrdering(steps)


def positional_iauc_num(ranked: RankedGroup) -> int:
    """Within-group win count induced by rank position (ties already broken)."""
    # positive at position t beats every negative placed after it
    return int((ranked.labels * ranked.suffix_neg[1:]).sum())


def metrics_from_ordering(
    ordering: CrossGroupOrdering, ranked_a: RankedGroup, ranked_b: RankedGroup
) -> FairnessReport:
    """Evaluate every metric induced by a cross-group ordering.

    The merged position acts as the rank (earlier = higher), so the ordering is
    a total order and no tied pairs exist. Within-group numerators come from
    the input rankings' positions and are invariant across orderings.
    """
    ordering.check_compatible(ranked_a, ranked_b)
    la, lb = ranked_a.labels, ranked_b.labels
    rem_neg_a, rem_neg_b = ranked_a.n0, ranked_b.n0
    xab = xba = 0
    i = j = 0
    for step in ordering.steps:
        if step == TAKE_A:
            if la[i]:
                xab += rem_neg_b
            else:
                rem_neg_a -= 1
            i += 1
        else:
            if lb[j]:
                xba += rem_neg_a
            else:
                rem_neg_b -= 1
            j += 1
    counts = GroupCounts(
        n1_a=ranked_a.n1, n0_a=ranked_a.n0, n1_b=ranked_b.n1, n0_b=ranked_b.n0
    )
    return build_report(
        ranked_a.group,
        ranked_b.group,
        counts,
        iauc_a_num=positional_iauc_num(ranked_a),
        iauc_b_num=positional_iauc_num(ranked_b),
        xauc_ab_num=xab,
        xauc_ba_num=xba,
    )
