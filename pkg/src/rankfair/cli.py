"""Command line interface.

Subcommands:
  report   metrics and pair counts for one scored CSV
  adjust   optimize the train ordering, rearrange scores, transfer to test
  sweep    trade-off curve over a grid of utility/disparity weights
  oracle   exhaustive interleaving search checked against the lattice optimizer
  synth    deterministic synthetic dataset generation

Exit codes: 0 success, 2 parse/config error, 3 capacity exceeded,
4 degenerate data (a required class or group is empty).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import (
    CapacityExceeded,
    ConfigError,
    EmptyClass,
    EmptyGroup,
    EmptyMapping,
    GroupCountError,
    ParseError,
)
from .io import (
    ColumnMap,
    Dataset,
    ingest_csv,
    split_dataset,
    write_curve_csv,
    write_json,
    write_report_csv,
    write_samples_csv,
)
from .metrics import FairnessReport
from .optimize import (
    DEFAULT_CELL_BUDGET,
    DEFAULT_PATH_BUDGET,
    ObjectiveConfig,
    brute_force_optimal,
    optimize_ordering,
)
from .ordering import metrics_from_ordering
from .pipeline import (
    RunConfig,
    auto_lambda_grid,
    dataset_report,
    rank_dataset,
    run_adjust,
    run_sweep,
)
from .synth import generate_synthetic, make_train_test, parse_spec

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_DEGENERATE = 4


def _add_column_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--id-col", default="id", help="id column name")
    parser.add_argument("--group-col", default="group", help="group column name")
    parser.add_argument("--label-col", default="label", help="label column name")
    parser.add_argument("--score-col", default="score", help="score column name")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    _add_column_flags(parser)
    parser.add_argument(
        "--anchor-group",
        default="auto",
        help="group whose scores stay fixed; 'auto' anchors the higher-PRF group",
    )
    parser.add_argument("--out", default="rankfair_out", help="output directory")
    parser.add_argument(
        "--format", choices=("json", "csv"), default="json",
        help="also write a csv rendering of the summary when 'csv'",
    )
    parser.add_argument(
        "--no-plot", action="store_true", help="skip figure rendering"
    )


def _add_objective_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--metric", choices=("xauc", "prf"), default="xauc")
    parser.add_argument(
        "--cell-budget", type=int, default=DEFAULT_CELL_BUDGET,
        help="abort when the lattice would exceed this many cells",
    )


def _columns(args) -> ColumnMap:
    return ColumnMap(
        id=args.id_col, group=args.group_col, label=args.label_col, score=args.score_col
    )


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _group_scores(dataset: Dataset, scores=None) -> dict[str, np.ndarray]:
    values = dataset.scores() if scores is None else np.asarray(scores, dtype=float)
    return {
        tag: np.array([v for s, v in zip(dataset.samples, values) if s.group == tag])
        for tag in dataset.group_values
    }


def _report_payload(report: FairnessReport) -> dict:
    return report.as_dict()


def _maybe_report_csv(args, out: Path, name: str, payload: dict) -> None:
    if args.format == "csv":
        write_report_csv(out / f"{name}.csv", payload)


def _cmd_report(args) -> int:
    dataset = ingest_csv(args.input, _columns(args), anchor_group=args.anchor_group)
    report = dataset_report(dataset)
    out = _outdir(args)
    payload = {
        "command": "report",
        "input": str(args.input),
        "score_column": args.score_col,
        "report": _report_payload(report),
    }
    write_json(out / "report.json", payload)
    _maybe_report_csv(args, out, "report", payload)
    if not args.no_plot:
        from .plots import plot_score_distributions

        plot_score_distributions(
            {"scores": _group_scores(dataset)}, str(out / "score_distributions.png")
        )
    auc = "n/a" if report.auc is None else f"{report.auc:.4f}"
    dx = "n/a" if report.delta_xauc is None else f"{report.delta_xauc:.4f}"
    print(f"report: auc={auc} delta_xauc={dx} -> {out / 'report.json'}")
    return EXIT_OK


def _load_train_test(args) -> tuple[Dataset, Dataset | None]:
    columns = _columns(args)
    train = ingest_csv(args.train, columns, anchor_group=args.anchor_group)
    test = None
    if args.test is not None:
        if args.split is not None:
            raise ConfigError("--split cannot be combined with --test")
        test = ingest_csv(args.test, columns, anchor_group=args.anchor_group)
    elif args.split is not None:
        train, test = split_dataset(train, args.split, args.seed)
    return train, test


def _run_config(args, need_objective: bool) -> RunConfig:
    lambda_ = getattr(args, "lambda_", None)
    disparity_only = bool(getattr(args, "disparity_only", False))
    if need_objective and lambda_ is None and not disparity_only:
        raise ConfigError("exactly one of --lambda or --disparity-only is required")
    return RunConfig(
        metric=args.metric,
        lambda_=lambda_,
        disparity_only=disparity_only,
        anchor_group=args.anchor_group,
        seed=args.seed,
        out_format=args.format,
        cell_budget=args.cell_budget,
    )


def _split_payload(outcome) -> dict:
    return {
        "before": _report_payload(outcome.before),
        "after": _report_payload(outcome.after),
    }


def _cmd_adjust(args) -> int:
    train, test = _load_train_test(args)
    config = _run_config(args, need_objective=True)
    result = run_adjust(train, test, config, margin=args.margin)
    out = _outdir(args)
    write_samples_csv(
        out / "adjusted_train.csv", train, adjusted=result.train.adjusted,
        columns=_columns(args),
    )
    payload = {
        "command": "adjust",
        "metric": config.metric.value,
        "lambda": config.lambda_,
        "disparity_only": config.disparity_only,
        "anchor_group": result.mapping.anchor_group,
        "adjusted_group": result.mapping.adjusted_group,
        "interpolation": result.mapping.scheme,
        "train": _split_payload(result.train),
        "test": None,
    }
    if test is not None and result.test is not None:
        write_samples_csv(
            out / "adjusted_test.csv", test, adjusted=result.test.adjusted,
            columns=_columns(args),
        )
        payload["test"] = _split_payload(result.test)
    write_json(out / "report.json", payload)
    _maybe_report_csv(args, out, "report", payload)
    if not args.no_plot:
        from .plots import plot_score_distributions

        plot_score_distributions(
            {
                "original": _group_scores(train),
                "adjusted": _group_scores(train, result.train.adjusted),
            },
            str(out / "score_distributions.png"),
        )
    def fmt(x):
        return "n/a" if x is None else f"{x:.4f}"

    before = result.train.before.disparity(config.metric.value)
    after = result.train.after.disparity(config.metric.value)
    print(
        f"adjust: train delta_{config.metric.value} {fmt(before)} -> {fmt(after)}; "
        f"artifacts in {out}"
    )
    return EXIT_OK


def _cmd_sweep(args) -> int:
    train, test = _load_train_test(args)
    config = _run_config(args, need_objective=False)
    if args.grid is not None and args.auto_grid:
        raise ConfigError("--grid and --auto-grid are mutually exclusive")
    if args.grid is not None:
        try:
            grid = tuple(float(v) for v in args.grid.split(","))
        except ValueError:
            raise ConfigError(f"bad --grid value {args.grid!r}") from None
    elif args.auto_grid:
        grid = auto_lambda_grid(
            train, metric=config.metric, cell_budget=config.cell_budget
        )
    else:
        raise ConfigError("sweep needs --grid or --auto-grid")
    config = RunConfig(
        metric=config.metric,
        grid=grid,
        anchor_group=config.anchor_group,
        seed=config.seed,
        out_format=config.out_format,
        cell_budget=config.cell_budget,
    )
    result = run_sweep(train, test, config, margin=args.margin)
    out = _outdir(args)
    rows = [
        {
            "lambda": row.lambda_label(),
            "split": row.split,
            "auc": row.report.auc,
            "delta_xauc": row.report.delta_xauc,
            "delta_prf": row.report.delta_prf,
        }
        for row in result.rows
    ]
    write_curve_csv(out / "curve.csv", rows)
    payload = {
        "command": "sweep",
        "metric": config.metric.value,
        "grid": list(result.grid),
        "anchor_group": train.group_a,
        "adjusted_group": train.group_b,
        "splits": sorted({row.split for row in result.rows}),
    }
    write_json(out / "sweep.json", payload)
    if not args.no_plot:
        from .plots import plot_tradeoff

        plot_tradeoff(result.rows, config.metric.value, str(out / "tradeoff.png"))
    print(f"sweep: {len(result.rows)} curve rows -> {out / 'curve.csv'}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    dataset = ingest_csv(args.input, _columns(args), anchor_group=args.anchor_group)
    ranked_a, ranked_b = rank_dataset(dataset)
    if args.disparity_only:
        objective = ObjectiveConfig(metric=args.metric, disparity_only=True)
    elif args.lambda_ is not None:
        objective = ObjectiveConfig(lambda_=args.lambda_, metric=args.metric)
    else:
        raise ConfigError("exactly one of --lambda or --disparity-only is required")
    brute = brute_force_optimal(ranked_a, ranked_b, objective, path_budget=args.path_budget)
    lattice = optimize_ordering(ranked_a, ranked_b, objective, cell_budget=args.cell_budget)

    def describe(ordering) -> dict:
        report = metrics_from_ordering(ordering, ranked_a, ranked_b)
        disparity = report.disparity(args.metric)
        if args.disparity_only:
            value = -disparity
        elif objective.lambda_ > 0:
            value = report.auc - objective.lambda_ * disparity
        else:
            value = report.auc  # penalty inactive; disparity may be undefined
        return {
            "auc": report.auc,
            f"delta_{args.metric}": disparity,
            "objective": value,
            "steps": "".join("ab"[int(s)] for s in ordering.steps),
        }

    brute_info = describe(brute)
    lattice_info = describe(lattice)
    payload = {
        "command": "oracle",
        "metric": args.metric,
        "lambda": None if args.disparity_only else args.lambda_,
        "disparity_only": args.disparity_only,
        "exhaustive": brute_info,
        "lattice": lattice_info,
        "lattice_matches_optimum": lattice_info["objective"] == brute_info["objective"],
    }
    out = _outdir(args)
    write_json(out / "oracle.json", payload)
    _maybe_report_csv(args, out, "oracle", payload)
    print(
        f"oracle: optimum {brute_info['objective']:.6f}, "
        f"lattice {lattice_info['objective']:.6f} "
        f"({'match' if payload['lattice_matches_optimum'] else 'gap'})"
    )
    return EXIT_OK


def _cmd_synth(args) -> int:
    spec = parse_spec(args.spec)
    out = _outdir(args)
    columns = ColumnMap()
    if args.pair:
        train, test = make_train_test(spec, args.seed)
        write_samples_csv(out / "train.csv", train, columns=columns)
        write_samples_csv(out / "test.csv", test, columns=columns)
        print(f"synth: wrote {out / 'train.csv'} and {out / 'test.csv'}")
    else:
        dataset = generate_synthetic(spec, args.seed)
        write_samples_csv(out / "synthetic.csv", dataset, columns=columns)
        print(f"synth: wrote {out / 'synthetic.csv'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankfair",
        description="Bipartite-ranking utility and fairness metrics with order-based post-processing",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_report = sub.add_parser("report", help="metrics for one scored CSV")
    p_report.add_argument("input")
    _add_common_flags(p_report)
    p_report.set_defaults(func=_cmd_report)

    p_adjust = sub.add_parser("adjust", help="optimize ordering, adjust scores, transfer")
    p_adjust.add_argument("train")
    p_adjust.add_argument("--test", default=None, help="held-out CSV to transfer onto")
    p_adjust.add_argument("--lambda", dest="lambda_", type=float, default=None)
    p_adjust.add_argument("--disparity-only", action="store_true")
    p_adjust.add_argument("--split", type=float, default=None,
                          help="train fraction when no --test file is given")
    p_adjust.add_argument("--seed", type=int, default=0)
    p_adjust.add_argument("--margin", type=float, default=None,
                          help="synthetic anchor margin for boundary runs")
    _add_objective_flags(p_adjust)
    _add_common_flags(p_adjust)
    p_adjust.set_defaults(func=_cmd_adjust)

    p_sweep = sub.add_parser("sweep", help="trade-off curve over a weight grid")
    p_sweep.add_argument("train")
    p_sweep.add_argument("--test", default=None)
    p_sweep.add_argument("--grid", default=None, help="comma separated weights")
    p_sweep.add_argument("--auto-grid", action="store_true",
                         help="grow the grid until the disparity stalls")
    p_sweep.add_argument("--split", type=float, default=None)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--margin", type=float, default=None)
    _add_objective_flags(p_sweep)
    _add_common_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="exhaustive search on small instances")
    p_oracle.add_argument("input")
    p_oracle.add_argument("--lambda", dest="lambda_", type=float, default=None)
    p_oracle.add_argument("--disparity-only", action="store_true")
    p_oracle.add_argument("--path-budget", type=int, default=DEFAULT_PATH_BUDGET)
    _add_objective_flags(p_oracle)
    _add_common_flags(p_oracle)
    p_oracle.set_defaults(func=_cmd_oracle)

    p_synth = sub.add_parser("synth", help="generate synthetic datasets")
    p_synth.add_argument("--spec", required=True,
                         help="key=value list, e.g. n_a=200,n_b=200,bias_b=1.0")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--pair", action="store_true",
                         help="write train.csv and test.csv (needs n_test_a/n_test_b)")
    p_synth.add_argument("--out", default="rankfair_out")
    p_synth.set_defaults(func=_cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, GroupCountError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (EmptyClass, EmptyGroup, EmptyMapping) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
