"""Independent oracles shared across the test suite.

Everything here is deliberately naive: O(n^2) double loops and full
enumerations. The package must agree with these, never the other way round.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from rankfair.metrics import ScoredSample
from rankfair.ordering import TAKE_A, TAKE_B, rank_within_group


def brute_pair_nums(samples, group_a, group_b):
    """All strict-win numerators by explicit double loops over sample pairs."""
    def wins(pos, neg):
        return sum(1 for p in pos for q in neg if p.score > q.score)

    pos_a = [s for s in samples if s.group == group_a and s.label == 1]
    neg_a = [s for s in samples if s.group == group_a and s.label == 0]
    pos_b = [s for s in samples if s.group == group_b and s.label == 1]
    neg_b = [s for s in samples if s.group == group_b and s.label == 0]
    pos = pos_a + pos_b
    neg = neg_a + neg_b
    return {
        "auc": wins(pos, neg),
        "iauc_a": wins(pos_a, neg_a),
        "iauc_b": wins(pos_b, neg_b),
        "xauc_ab": wins(pos_a, neg_b),
        "xauc_ba": wins(pos_b, neg_a),
        "prf_a": wins(pos_a, neg),
        "prf_b": wins(pos_b, neg),
    }


def random_samples(rng, n, groups=("a", "b"), tie_grid=None):
    """Random two-group samples; tie_grid quantizes scores to force ties."""
    out = []
    for i in range(n):
        score = float(rng.random())
        if tie_grid:
            score = round(score * tie_grid) / tie_grid
        out.append(
            ScoredSample(
                id=f"s{i}",
                group=str(rng.choice(groups)),
                label=int(rng.integers(0, 2)),
                score=score,
            )
        )
    return out


def groups_from_labels(labels_a, labels_b, scores_a=None, scores_b=None):
    """Build one dataset plus its two rankings from explicit label patterns.

    Scores default to distinct descending values so the rankings follow the
    given label order exactly.
    """
    na, nb = len(labels_a), len(labels_b)
    if scores_a is None:
        scores_a = [1.0 - (i + 1) / (na + 1) for i in range(na)]
    if scores_b is None:
        scores_b = [1.0 - (j + 1) / (nb + 1) for j in range(nb)]
    samples = [
        ScoredSample(id=f"a{i}", group="a", label=int(labels_a[i]), score=float(scores_a[i]))
        for i in range(na)
    ] + [
        ScoredSample(id=f"b{j}", group="b", label=int(labels_b[j]), score=float(scores_b[j]))
        for j in range(nb)
    ]
    return samples, rank_within_group(samples, "a"), rank_within_group(samples, "b")


def random_label_groups(rng, na, nb, force_classes=False):
    """Random label patterns (optionally with every class present) as rankings."""
    while True:
        labels_a = rng.integers(0, 2, size=na)
        labels_b = rng.integers(0, 2, size=nb)
        if not force_classes:
            break
        if 0 < labels_a.sum() < na and 0 < labels_b.sum() < nb:
            break
    return groups_from_labels(labels_a.tolist(), labels_b.tolist())


def merged_pair_nums(steps, labels_a, labels_b):
    """Pair numerators induced by merged position, by explicit enumeration."""
    seq = []
    i = j = 0
    for step in steps:
        if step == TAKE_A:
            seq.append(("a", int(labels_a[i])))
            i += 1
        else:
            seq.append(("b", int(labels_b[j])))
            j += 1
    nums = {"iauc_a": 0, "iauc_b": 0, "xauc_ab": 0, "xauc_ba": 0}
    for t, (g1, y1) in enumerate(seq):
        if y1 != 1:
            continue
        for g0, y0 in seq[t + 1 :]:
            if y0 != 0:
                continue
            if g1 == "a" and g0 == "a":
                nums["iauc_a"] += 1
            elif g1 == "b" and g0 == "b":
                nums["iauc_b"] += 1
            elif g1 == "a":
                nums["xauc_ab"] += 1
            else:
                nums["xauc_ba"] += 1
    nums["auc"] = sum(nums.values())
    return nums


def recount_partial(steps, labels_a, labels_b, upto):
    """Direct recount of the two partial cross-group win counts at path step `upto`.

    The prefix of `upto` steps is completed by the untaken remainder of the
    other group, exactly as the partial objective defines it.
    """
    prefix = list(steps[:upto])
    i = sum(1 for s in prefix if s == TAKE_A)
    j = upto - i
    na, nb = len(labels_a), len(labels_b)

    completed_ab = []
    ii = jj = 0
    for s in prefix:
        if s == TAKE_A:
            completed_ab.append(("a", int(labels_a[ii])))
            ii += 1
        else:
            completed_ab.append(("b", int(labels_b[jj])))
            jj += 1
    completed_ab += [("b", int(labels_b[h])) for h in range(j, nb)]
    c_ab = 0
    for t, (g1, y1) in enumerate(completed_ab):
        if g1 == "a" and y1 == 1:
            c_ab += sum(
                1 for g0, y0 in completed_ab[t + 1 :] if g0 == "b" and y0 == 0
            )

    seq = []
    ii = jj = 0
    for s in prefix:
        if s == TAKE_A:
            seq.append(("a", int(labels_a[ii])))
            ii += 1
        else:
            seq.append(("b", int(labels_b[jj])))
            jj += 1
    seq += [("a", int(labels_a[h])) for h in range(i, na)]
    c_ba = 0
    for t, (g1, y1) in enumerate(seq):
        if g1 == "b" and y1 == 1:
            c_ba += sum(1 for g0, y0 in seq[t + 1 :] if g0 == "a" and y0 == 0)
    return c_ab, c_ba


def all_interleavings(na, nb):
    """Every step sequence merging na a-steps with nb b-steps, lexicographic."""
    for a_positions in combinations(range(na + nb), na):
        steps = np.full(na + nb, TAKE_B, dtype=np.uint8)
        steps[list(a_positions)] = TAKE_A
        yield steps


def exhaustive_best_auc_num(labels_a, labels_b):
    """Max ordering-induced AUC numerator over all interleavings, by enumeration."""
    best = -1
    for steps in all_interleavings(len(labels_a), len(labels_b)):
        nums = merged_pair_nums(steps, labels_a, labels_b)
        best = max(best, nums["auc"])
    return best
