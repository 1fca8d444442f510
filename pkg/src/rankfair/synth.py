"""Deterministic synthetic two-group ranking datasets.

Scores are logistic-squashed normal draws: positives sit one separation above
negatives on the latent scale, and the whole b group can be biased downward to
engineer a cross-group disparity. A monotone power warp on the test-side b
scores simulates a train/test score-distribution mismatch; the warp preserves
the b-internal ordering but moves the scores other methods would rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .io import Dataset
from .metrics import ScoredSample

__all__ = ["SynthSpec", "generate_synthetic", "make_train_test", "parse_spec"]


@dataclass(frozen=True)
class SynthSpec:
    """Generation parameters; shift only affects the test side of a pair."""

    n_a: int
    n_b: int
    pos_rate_a: float = 0.5
    pos_rate_b: float = 0.5
    sep_a: float = 2.0
    sep_b: float = 2.0
    bias_b: float = 0.0
    noise: float = 1.0
    shift: float = 0.0
    n_test_a: int = 0
    n_test_b: int = 0

    def __post_init__(self):
        if self.n_a < 1 or self.n_b < 1:
            raise ConfigError("group sizes must be at least 1")
        if self.n_test_a < 0 or self.n_test_b < 0:
            raise ConfigError("test group sizes must be nonnegative")
        for name in ("pos_rate_a", "pos_rate_b"):
            rate = getattr(self, name)
            if not 0.0 < rate < 1.0:
                raise ConfigError(f"{name} must lie strictly inside (0, 1), got {rate!r}")
        if self.noise <= 0:
            raise ConfigError("noise must be positive")
        if self.sep_a < 0 or self.sep_b < 0:
            raise ConfigError("separations must be nonnegative")
        if self.shift < 0:
            raise ConfigError("shift must be nonnegative")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


def _group_rows(rng, tag, prefix, n, pos_rate, sep, bias, noise, warp):
    n1 = int(round(pos_rate * n))
    labels = np.zeros(n, dtype=np.int64)
    labels[:n1] = 1
    centers = np.where(labels == 1, sep / 2.0, -sep / 2.0) - bias
    scores = _sigmoid(rng.normal(centers, noise))
    if warp > 0:
        scores = scores ** (1.0 + warp)
    return [
        ScoredSample(id=f"{prefix}{tag}{i:06d}", group=tag, label=int(labels[i]), score=float(scores[i]))
        for i in range(n)
    ]


def _generate(spec: SynthSpec, seed: int, n_a: int, n_b: int, prefix: str, warp: float) -> Dataset:
    rng = np.random.default_rng(seed)
    rows = _group_rows(rng, "a", prefix, n_a, spec.pos_rate_a, spec.sep_a, 0.0, spec.noise, 0.0)
    rows += _group_rows(rng, "b", prefix, n_b, spec.pos_rate_b, spec.sep_b, spec.bias_b, spec.noise, warp)
    perm = rng.permutation(len(rows))
    return Dataset(
        samples=tuple(rows[i] for i in perm),
        group_a="a",
        group_b="b",
        source=f"synthetic(seed={seed})",
    )


def generate_synthetic(spec: SynthSpec, seed: int) -> Dataset:
    """One dataset of spec-sized groups; identical spec and seed, identical data."""
    return _generate(spec, seed, spec.n_a, spec.n_b, "", 0.0)


def make_train_test(spec: SynthSpec, seed: int) -> tuple[Dataset, Dataset]:
    """A train/test pair; the test b scores get the spec's monotone warp."""
    if spec.n_test_a < 1 or spec.n_test_b < 1:
        raise ConfigError("make_train_test needs n_test_a and n_test_b >= 1")
    train = _generate(spec, seed, spec.n_a, spec.n_b, "tr-", 0.0)
    test = _generate(spec, seed + 1, spec.n_test_a, spec.n_test_b, "te-", spec.shift)
    return train, test


_SPEC_FIELDS = {
    "n_a": int, "n_b": int, "n_test_a": int, "n_test_b": int,
    "pos_rate_a": float, "pos_rate_b": float,
    "sep_a": float, "sep_b": float, "bias_b": float,
    "noise": float, "shift": float,
}


def parse_spec(text: str) -> SynthSpec:
    """Parse 'key=value,key=value' generation parameters (n_a and n_b required)."""
    kwargs = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ConfigError(f"bad spec fragment {part!r}; expected key=value")
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in _SPEC_FIELDS:
            raise ConfigError(f"unknown spec key {key!r}; known: {sorted(_SPEC_FIELDS)}")
        try:
            kwargs[key] = _SPEC_FIELDS[key](value.strip())
        except ValueError:
            raise ConfigError(f"bad value for {key!r}: {value!r}") from None
    if "n_a" not in kwargs or "n_b" not in kwargs:
        raise ConfigError("spec must set n_a and n_b")
    return SynthSpec(**kwargs)
