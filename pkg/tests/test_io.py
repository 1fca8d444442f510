import numpy as np
import pytest

from rankfair.errors import ConfigError, GroupCountError, ParseError
from rankfair.io import (
    ColumnMap,
    Dataset,
    fmt_float,
    ingest_csv,
    resolve_roles,
    split_dataset,
    write_samples_csv,
)
from rankfair.metrics import ScoredSample
from rankfair.synth import SynthSpec, generate_synthetic, make_train_test, parse_spec


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


BASIC = "id,group,label,score\nr1,a,1,0.9\nr2,a,0,0.4\nr3,b,1,0.7\nr4,b,0,0.2\n"


def test_ingest_basic(tmp_path):
    dataset = ingest_csv(write(tmp_path, "d.csv", BASIC))
    assert len(dataset.samples) == 4
    assert dataset.samples[0] == ScoredSample("r1", "a", 1, 0.9)
    assert set(dataset.group_values) == {"a", "b"}


def test_ingest_three_groups(tmp_path):
    text = BASIC + "r5,c,0,0.5\n"
    with pytest.raises(GroupCountError):
        ingest_csv(write(tmp_path, "d.csv", text))


def test_ingest_label_out_of_domain_line_number(tmp_path):
    text = (
        "id,group,label,score\n"
        "r1,a,1,0.9\nr2,a,0,0.4\nr3,b,1,0.7\nr4,b,0,0.2\nr5,b,0,0.1\nr6,b,2,0.3\n"
    )
    with pytest.raises(ParseError) as err:
        ingest_csv(write(tmp_path, "d.csv", text))
    assert err.value.line == 7
    assert err.value.column == "label"


def test_ingest_bad_and_missing_values(tmp_path):
    with pytest.raises(ParseError) as err:
        ingest_csv(write(tmp_path, "d.csv", "id,group,label,score\nr1,a,1,oops\n"))
    assert err.value.column == "score" and err.value.line == 2
    with pytest.raises(ParseError):
        ingest_csv(write(tmp_path, "d.csv", "id,group,label,score\nr1,a,1,nan\n"))
    with pytest.raises(ParseError):
        ingest_csv(write(tmp_path, "d.csv", "id,group,label,score\nr1,a,1\n"))
    with pytest.raises(ParseError):
        ingest_csv(write(tmp_path, "d.csv", "id,group,score\nr1,a,0.4\n"))


def test_ingest_column_remap(tmp_path):
    text = "pk,cohort,y,s\nr1,a,1,0.9\nr2,a,0,0.4\nr3,b,1,0.7\nr4,b,0,0.2\n"
    columns = ColumnMap(id="pk", group="cohort", label="y", score="s")
    dataset = ingest_csv(write(tmp_path, "d.csv", text), columns)
    assert dataset.samples[2].group == "b"


def test_roles_auto_prefers_low_prf_as_adjusted():
    samples = [
        ScoredSample("1", "hi", 1, 0.9),
        ScoredSample("2", "hi", 0, 0.5),
        ScoredSample("3", "lo", 1, 0.4),  # positives rank below every negative
        ScoredSample("4", "lo", 0, 0.6),
    ]
    a, b = resolve_roles(samples, "auto")
    assert (a, b) == ("hi", "lo")
    # explicit anchor wins
    assert resolve_roles(samples, "lo") == ("lo", "hi")
    with pytest.raises(ConfigError):
        resolve_roles(samples, "nope")


def test_roles_fallback_when_prf_unavailable():
    samples = [
        ScoredSample("1", "a", 0, 0.9),  # no positives in a
        ScoredSample("2", "a", 0, 0.5),
        ScoredSample("3", "b", 1, 0.4),
        ScoredSample("4", "b", 0, 0.6),
    ]
    with pytest.warns(UserWarning):
        assert resolve_roles(samples, "auto") == ("a", "b")


def test_round_trip_emit_ingest(tmp_path):
    rng = np.random.default_rng(3)
    samples = tuple(
        ScoredSample(f"r{i}", "a" if i % 2 else "b", int(rng.integers(0, 2)), float(rng.random()))
        for i in range(20)
    )
    dataset = Dataset(samples=samples, group_a="a", group_b="b")
    path = tmp_path / "out.csv"
    write_samples_csv(path, dataset)
    back = ingest_csv(path, anchor_group="a")
    assert back.samples == dataset.samples


def test_fmt_float_reparses_exactly():
    rng = np.random.default_rng(9)
    for _ in range(200):
        x = float(rng.random() * rng.choice([1e-9, 1.0, 1e9]))
        assert float(fmt_float(x)) == x


def test_split_dataset_partition_and_determinism():
    samples = tuple(
        ScoredSample(f"r{i}", "a" if i % 2 else "b", i % 2, i / 40.0) for i in range(40)
    )
    dataset = Dataset(samples=samples, group_a="a", group_b="b")
    train1, test1 = split_dataset(dataset, 0.7, seed=11)
    train2, test2 = split_dataset(dataset, 0.7, seed=11)
    assert train1.samples == train2.samples and test1.samples == test2.samples
    assert len(train1.samples) == 28 and len(test1.samples) == 12
    assert set(s.id for s in train1.samples) | set(s.id for s in test1.samples) == set(
        s.id for s in samples
    )
    other, _ = split_dataset(dataset, 0.7, seed=12)
    assert other.samples != train1.samples
    with pytest.raises(ConfigError):
        split_dataset(dataset, 1.5, seed=1)


# ------------------------------------------------------------------ synthesis


def test_synth_deterministic():
    spec = SynthSpec(n_a=10, n_b=10, pos_rate_a=0.5, pos_rate_b=0.5)
    assert generate_synthetic(spec, 7) == generate_synthetic(spec, 7)
    assert generate_synthetic(spec, 7) != generate_synthetic(spec, 8)


def test_synth_rejects_bad_parameters():
    with pytest.raises(ConfigError):
        SynthSpec(n_a=10, n_b=10, pos_rate_a=1.0)
    with pytest.raises(ConfigError):
        SynthSpec(n_a=0, n_b=10)
    with pytest.raises(ConfigError):
        SynthSpec(n_a=10, n_b=10, noise=0.0)
    with pytest.raises(ConfigError):
        SynthSpec(n_a=10, n_b=10, shift=-1.0)


def test_parse_spec():
    spec = parse_spec("n_a=20,n_b=30,bias_b=1.5,pos_rate_b=0.25")
    assert spec == SynthSpec(n_a=20, n_b=30, bias_b=1.5, pos_rate_b=0.25)
    with pytest.raises(ConfigError):
        parse_spec("n_a=20")
    with pytest.raises(ConfigError):
        parse_spec("n_a=20,n_b=30,bogus=1")
    with pytest.raises(ConfigError):
        parse_spec("n_a=x,n_b=30")


def test_zero_shift_pair_matches_distributions():
    from scipy.stats import ks_2samp

    spec = SynthSpec(n_a=100, n_b=10_000, n_test_a=100, n_test_b=10_000, bias_b=0.8)
    train, test = make_train_test(spec, 99)
    b_train = np.array([s.score for s in train.samples if s.group == "b"])
    b_test = np.array([s.score for s in test.samples if s.group == "b"])
    stat = ks_2samp(b_train, b_test).statistic
    assert stat < 0.05


def test_shift_warps_test_scores_monotonically():
    spec = SynthSpec(n_a=50, n_b=400, n_test_a=50, n_test_b=400, shift=1.0)
    _, warped = make_train_test(spec, 4)
    unshifted = SynthSpec(n_a=50, n_b=400, n_test_a=50, n_test_b=400, shift=0.0)
    _, plain = make_train_test(unshifted, 4)
    sw = np.array([s.score for s in warped.samples if s.group == "b"])
    sp = np.array([s.score for s in plain.samples if s.group == "b"])
    # same draws, warped pointwise downward but order preserved
    assert (sw < sp).all()
    assert (np.argsort(sw) == np.argsort(sp)).all()
