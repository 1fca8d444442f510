"""Carry a learned training ordering to scores, and onward to unseen samples.

The anchor group keeps its scores untouched. Each run of adjusted-group
samples sitting between two anchor samples receives equally spaced scores
strictly inside the anchors' score interval; runs beyond the first or last
anchor use a synthetic anchor one margin away. The (original, adjusted) score
pairs of the training data then define a monotone piecewise-linear map, and a
test score is placed so its relative position inside its bracketing original
segment is preserved inside the corresponding adjusted segment.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAnchorWarning, DegenerateSegmentWarning, EmptyMapping
from .ordering import TAKE_B, CrossGroupOrdering, RankedGroup

__all__ = [
    "ScoreMapping",
    "rearrange_training_scores",
    "build_score_mapping",
    "transfer_test_scores",
]

# epsilon factor for samples squeezed between tied anchors
_TIE_EPS = 2.0 ** -32


@dataclass(frozen=True)
class ScoreMapping:
    """Aligned descending (original, adjusted) training scores of the adjusted group."""

    anchor_group: str
    adjusted_group: str
    train_orig: np.ndarray
    train_adj: np.ndarray
    scheme: str = "proportional"

    def __post_init__(self):
        orig = np.asarray(self.train_orig, dtype=np.float64)
        adj = np.asarray(self.train_adj, dtype=np.float64)
        if orig.size == 0 or adj.size == 0:
            raise EmptyMapping("score mapping needs at least one knot")
        if orig.shape != adj.shape:
            raise ValueError("original and adjusted sequences must align")
        if np.any(np.diff(orig) > 0) or np.any(np.diff(adj) > 0):
            raise ValueError("mapping sequences must be non-increasing")
        object.__setattr__(self, "train_orig", orig)
        object.__setattr__(self, "train_adj", adj)


def _default_margin(anchor_scores: np.ndarray) -> float:
    """Median positive gap between consecutive anchors; 0.1 when none exists."""
    gaps = -np.diff(anchor_scores)
    gaps = gaps[gaps > 0]
    return float(np.median(gaps)) if gaps.size else 0.1


def rearrange_training_scores(
    ordering: CrossGroupOrdering,
    ranked_a: RankedGroup,
    ranked_b: RankedGroup,
    margin: float | None = None,
) -> np.ndarray:
    """Adjusted scores for the b-group training samples, in b-rank order.

    A run of m samples between anchors scoring hi > lo gets
    hi - t * (hi - lo) / (m + 1) for t = 1..m. Runs before the first anchor
    use a synthetic upper anchor hi = first + margin; runs after the last use
    lo = last - margin. Tied anchors earn the shared value minus a tiny
    per-rank epsilon, with a warning, so the merge order stays realizable.
    """
    ordering.check_compatible(ranked_a, ranked_b)
    sa = ranked_a.scores
    if margin is None:
        margin = _default_margin(sa)
    all_scores = np.concatenate([sa, ranked_b.scores])
    span = float(all_scores.max() - all_scores.min()) if all_scores.size else 0.0
    tie_eps = _TIE_EPS * (span if span > 0 else 1.0)

    adjusted = np.empty(ranked_b.n, dtype=np.float64)
    tied_anchors = False

    def assign(start: int, m: int, hi: float, lo: float) -> bool:
        if hi > lo:
            t = np.arange(1, m + 1, dtype=np.float64)
            adjusted[start : start + m] = hi - t * (hi - lo) / (m + 1)
            return False
        t = np.arange(1, m + 1, dtype=np.float64)
        adjusted[start : start + m] = hi - t * tie_eps
        return True

    i = 0            # anchors consumed
    next_b = 0       # b samples assigned
    run_len = 0
    prev_a: float | None = None
    for step in ordering.steps:
        if step == TAKE_B:
            run_len += 1
            continue
        if run_len:
            lo = float(sa[i])
            hi = float(prev_a) if prev_a is not None else lo + margin
            tied_anchors |= assign(next_b, run_len, hi, lo)
            next_b += run_len
            run_len = 0
        prev_a = float(sa[i])
        i += 1
    if run_len:
        hi = float(prev_a)  # an anchor always exists: ranked_a is nonempty
        tied_anchors |= assign(next_b, run_len, hi, hi - margin)
    if tied_anchors:
        warnings.warn(
            "tied adjacent anchor scores; enclosed samples spaced by epsilon",
            DegenerateAnchorWarning,
            stacklevel=2,
        )
    return adjusted


def build_score_mapping(
    ordering: CrossGroupOrdering,
    ranked_a: RankedGroup,
    ranked_b: RankedGroup,
    margin: float | None = None,
) -> ScoreMapping:
    """Pair the b group's original ranking scores with their adjusted values."""
    adjusted = rearrange_training_scores(ordering, ranked_a, ranked_b, margin=margin)
    return ScoreMapping(
        anchor_group=ranked_a.group,
        adjusted_group=ranked_b.group,
        train_orig=ranked_b.scores.copy(),
        train_adj=adjusted,
    )


def transfer_test_scores(mapping: ScoreMapping, test_scores) -> np.ndarray:
    """Map test scores through the training (original -> adjusted) relation.

    Inside a bracketing segment the relative position is preserved exactly;
    a score equal to a training knot maps to that knot's adjusted value.
    Scores beyond the training range extrapolate with the nearest segment's
    slope and are clamped so the map stays monotone. Repeated original scores
    with differing adjusted values map to the midpoint, with a warning.
    """
    s = np.asarray(test_scores, dtype=np.float64)
    out = np.empty_like(s)
    xo = mapping.train_orig[::-1]  # ascending originals
    ya = mapping.train_adj[::-1]   # ascending adjusted
    n = xo.size

    def edge_slope(k: int) -> float:
        with np.errstate(over="ignore"):
            slope = (ya[k] - ya[k - 1]) / (xo[k] - xo[k - 1])
        return slope if np.isfinite(slope) else 1.0  # guard denormal-width segments

    widths = np.diff(xo)
    rising = np.flatnonzero(widths > 0)
    if rising.size:
        slope_lo = edge_slope(int(rising[0]) + 1)
        slope_hi = edge_slope(int(rising[-1]) + 1)
    else:
        slope_lo = slope_hi = 1.0  # single or fully tied knots

    left = np.searchsorted(xo, s, side="left")
    right = np.searchsorted(xo, s, side="right")

    exact = left < right
    single = exact & (right - left == 1)
    out[single] = ya[left[single]]
    multi = exact & ~single
    if np.any(multi):
        out[multi] = (ya[left[multi]] + ya[right[multi] - 1]) / 2.0
        warnings.warn(
            "test scores hit repeated training scores; mapped to the adjusted midpoint",
            DegenerateSegmentWarning,
            stacklevel=2,
        )

    below = ~exact & (left == 0)
    out[below] = np.minimum(ya[0] - slope_lo * (xo[0] - s[below]), ya[0])
    above = ~exact & (left == n)
    out[above] = np.maximum(ya[-1] + slope_hi * (s[above] - xo[-1]), ya[-1])

    inner = ~exact & (left > 0) & (left < n)
    k = left[inner]
    frac = (xo[k] - s[inner]) / (xo[k] - xo[k - 1])
    out[inner] = ya[k] - (ya[k] - ya[k - 1]) * frac
    return out
