from fractions import Fraction

import pytest

from rankfair.errors import ConfigError
from rankfair.io import Dataset
from rankfair.metrics import ScoredSample, fairness_report
from rankfair.pipeline import (
    RunConfig,
    auto_lambda_grid,
    dataset_report,
    run_adjust,
    run_sweep,
)
from rankfair.synth import SynthSpec, make_train_test


@pytest.fixture(scope="module")
def pair():
    spec = SynthSpec(
        n_a=220, n_b=180, pos_rate_a=0.5, pos_rate_b=0.45,
        bias_b=1.2, n_test_a=110, n_test_b=90,
    )
    return make_train_test(spec, 31)


def test_run_adjust_lambda_zero_never_hurts_auc(pair):
    train, _ = pair
    result = run_adjust(train, None, RunConfig(lambda_=0.0))
    assert result.train.after.auc >= result.train.before.auc
    assert result.test is None


def test_run_adjust_disparity_only_hits_bound_and_keeps_anchors(pair):
    train, test = pair
    result = run_adjust(train, test, RunConfig(disparity_only=True))
    report = result.train.after
    c, p = report.counts, report.pair_counts
    achieved = abs(Fraction(p.xauc_ab, c.k_ab) - Fraction(p.xauc_ba, c.k_ba))
    assert achieved <= max(Fraction(1, c.n1_a), Fraction(1, c.n1_b))
    # anchor scores pass through bit-identical on both splits
    for dataset, outcome in ((train, result.train), (test, result.test)):
        for sample, adj in zip(dataset.samples, outcome.adjusted):
            if sample.group == dataset.group_a:
                assert adj == sample.score
    # transfer reduces the held-out disparity
    assert result.test.after.delta_xauc < result.test.before.delta_xauc


def test_run_adjust_requires_objective(pair):
    train, _ = pair
    with pytest.raises(ConfigError):
        run_adjust(train, None, RunConfig())


def test_run_adjust_rejects_mismatched_groups(pair):
    train, _ = pair
    other = Dataset(
        samples=(
            ScoredSample("x1", "p", 1, 0.9),
            ScoredSample("x2", "q", 0, 0.1),
        ),
        group_a="p",
        group_b="q",
    )
    with pytest.raises(ConfigError):
        run_adjust(train, other, RunConfig(lambda_=0.0))


def test_run_adjust_realigns_test_roles(pair):
    train, test = pair
    flipped = Dataset(
        samples=test.samples, group_a=test.group_b, group_b=test.group_a
    )
    result = run_adjust(train, flipped, RunConfig(disparity_only=True))
    assert result.test.before.group_a == train.group_a


def test_run_sweep_rows_reproduce_from_emitted_scores(pair):
    train, test = pair
    config = RunConfig(grid=(0.0, 1.0, 8.0))
    result = run_sweep(train, test, config)
    kinds = [(r.kind, r.split) for r in result.rows]
    assert kinds[0] == ("unadjusted", "train") and kinds[1] == ("unadjusted", "test")
    assert len(result.rows) == 2 + 2 * 4  # baseline + (3 lambdas + endpoint) x 2 splits
    # spot-check: each train row's report equals a fresh report on its scores
    for row in result.rows:
        if row.split != "train" or row.kind != "lambda":
            continue
        point = next(
            p for p in result.curve.points
            if p.kind == "lambda" and p.lambda_ == row.lambda_
        )
        from rankfair.pipeline import rank_dataset
        from rankfair.transfer import build_score_mapping

        ra, rb = rank_dataset(train)
        mapping = build_score_mapping(point.ordering, ra, rb)
        scores = train.scores()
        scores[rb.order] = mapping.train_adj
        fresh = fairness_report(train.with_scores(scores).samples, train.group_a, train.group_b)
        assert fresh == row.report


def test_run_sweep_disparity_endpoint_reduces_test_disparity(pair):
    train, test = pair
    result = run_sweep(train, test, RunConfig(grid=(0.0,)))
    rows = {(r.kind, r.split): r for r in result.rows}
    adjusted = rows[("disparity_only", "test")].report.delta_xauc
    baseline = rows[("unadjusted", "test")].report.delta_xauc
    assert adjusted < baseline


def test_auto_lambda_grid_grows_until_stall(pair):
    train, _ = pair
    grid = auto_lambda_grid(train, max_steps=8)
    assert grid[0] == 0.0
    assert all(b > a for a, b in zip(grid, grid[1:]))
    assert len(grid) <= 8


def test_dataset_report_uses_dataset_roles(pair):
    train, _ = pair
    report = dataset_report(train)
    assert (report.group_a, report.group_b) == (train.group_a, train.group_b)
    # group b was engineered to be disadvantaged
    assert report.xauc_ab > report.xauc_ba
