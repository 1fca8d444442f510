"""Utility and fairness metrics for two-group ranking scores, plus order-based
post-processing: optimize the cross-group ordering, rearrange training scores,
and transfer the adjustment to held-out data by score interpolation."""

from .errors import (
    CapacityExceeded,
    ConfigError,
    DegenerateAnchorWarning,
    DegenerateSegmentWarning,
    EmptyClass,
    EmptyGroup,
    EmptyMapping,
    GroupCountError,
    ParseError,
    RankfairError,
    ScoreRangeWarning,
)
from .io import ColumnMap, Dataset, ingest_csv, resolve_roles, split_dataset
from .metrics import (
    FairnessReport,
    GroupCounts,
    PairCounts,
    ScoredSample,
    compute_auc,
    compute_iauc,
    compute_prf,
    compute_xauc,
    fairness_report,
)
from .optimize import (
    DisparityMetric,
    ObjectiveConfig,
    TradeoffCurve,
    TradeoffPoint,
    brute_force_optimal,
    greedy_forward,
    insertion_baseline,
    optimize_ordering,
    sweep_lambda,
)
from .ordering import (
    CrossGroupOrdering,
    RankedGroup,
    metrics_from_ordering,
    ordering_from_scores,
    rank_within_group,
)
from .pipeline import RunConfig, auto_lambda_grid, run_adjust, run_sweep
from .synth import SynthSpec, generate_synthetic, make_train_test
from .transfer import (
    ScoreMapping,
    build_score_mapping,
    rearrange_training_scores,
    transfer_test_scores,
)

__version__ = "0.1.0"
