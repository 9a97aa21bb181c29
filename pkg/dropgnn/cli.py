"""Command-line entry point (``dropgnn`` command)."""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any

import pandas as pd

from dropgnn.errors import DropGNNError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ACCEPTANCE = 2

DEFAULT_METHODS = ("gin", "gin_ports", "gin_ids", "gin_random", "dropgin")
DEFAULT_DATASETS = ("limits1", "limits2", "four_cycles", "lcc", "triangles", "skip_circles")

# Exact outcomes of the three analytic example networks.
EXAMPLE1_VALUES = ([5.0, 5.0, 7.0], [5.0, 5.0, 8.0, 8.0])
EXAMPLE2_COUNTS = ({1: 1, 2: 2, 3: 1}, {1: 0, 2: 2, 3: 0})
EXAMPLE3_P = 0.25
EXAMPLE3_PROBABILITIES = (3.0 / 16.0, 15.0 / 256.0)


class AcceptanceFailure(Exception):
    """A ``--check`` criterion did not hold; maps to exit code 2."""


# ── Helpers ───────────────────────────────────────────────────────────────────


def _out_dir(args: argparse.Namespace, *parts: str) -> Path:
    from dropgnn.utils.file_utils import default_out_dir, run_dir

    return Path(run_dir(args.out_dir or default_out_dir(), *parts))


def _compose(
    args: argparse.Namespace,
    dataset: str | None = None,
    method: str | None = None,
    updates: dict[str, Any] | None = None,
):
    """Compose conf/ for a training command; ``--set`` overrides are applied last."""
    from dropgnn.config.hydra_utils import apply_overrides, compose_config

    groups = []
    if dataset is not None:
        groups.append(f"dataset={dataset}")
    if method is not None:
        groups.append(f"method={method}")
    cfg = compose_config(groups + list(args.set or []))
    values = {"run.seed": args.seed, "run.out_dir": args.out_dir}
    values.update(updates or {})
    return apply_overrides(cfg, values)


def _experiment(cfg):
    from dropgnn.config.hydra_utils import experiment_from_cfg

    return experiment_from_cfg(cfg)


def _seed(args: argparse.Namespace) -> int:
    return 0 if args.seed is None else args.seed


def _load_dataset(source: str, seed: int, count: int | None = None):
    """A dataset directory written by ``dataset gen``, or a family name to generate."""
    from dropgnn.datasets.storage import load_dataset
    from dropgnn.datasets.synthetic import generate

    if Path(source).is_dir():
        return load_dataset(source)
    return generate(source, seed, count)


def _check(args: argparse.Namespace, failures: list[str]) -> None:
    if failures:
        for failure in failures:
            log.warning("check failed: %s", failure)
        if args.check:
            raise AcceptanceFailure("; ".join(failures))


def _emit(text: str, path: Path) -> None:
    path.write_text(text)
    print(text, end="" if text.endswith("\n") else "\n")


# ── Dataset / training commands ───────────────────────────────────────────────


def _cmd_dataset_gen(args: argparse.Namespace) -> None:
    from dropgnn.datasets.storage import save_dataset
    from dropgnn.datasets.synthetic import generate

    seed = _seed(args)
    dataset = generate(args.family, seed, args.count)
    target = _out_dir(args, "datasets", f"{args.family}_seed{seed}")
    save_dataset(dataset, target)
    print(f"==> {args.family}: {len(dataset.graphs)} graphs, {dataset.total_nodes} nodes")
    print(f"==> Saved to {target}")


def _cmd_train(args: argparse.Namespace) -> None:
    from dropgnn.config.hydra_utils import save_config, to_plain
    from dropgnn.engine.checkpoint import save_checkpoint
    from dropgnn.experiments import prepare
    from dropgnn.training.loop import train
    from dropgnn.utils.tables import write_csv

    seed = _seed(args)
    dataset = _load_dataset(args.dataset, seed)
    updates = {"train.epochs": args.epochs, "train.seed": seed}
    cfg = _compose(args, dataset=dataset.name, method=args.method, updates=updates)
    experiment = _experiment(cfg)

    prepared = prepare(experiment, seed, dataset)
    result = train(prepared.model, prepared.train_set, experiment.train, prepared.test_set)

    target = _out_dir(args, "train", f"{dataset.name}_{args.method}_seed{seed}")
    save_checkpoint(result.model, target / "checkpoint.json")
    write_csv(result.history, target / "metrics.csv", "metrics")
    save_config(to_plain(cfg), target / "config.yaml")
    print(f"==> {dataset.name} / {args.method}: p={prepared.dropout_p:.4f}")
    print(f"==> train accuracy {result.train_acc:.4f}, test accuracy {result.test_acc:.4f}")
    print(f"==> Wrote {target}")


def _cmd_eval(args: argparse.Namespace) -> None:
    from dropgnn.dropout.sampling import derive_seed
    from dropgnn.engine.checkpoint import load_checkpoint
    from dropgnn.experiments import augment_for
    from dropgnn.training.loop import evaluate

    seed = _seed(args)
    model = load_checkpoint(args.checkpoint)
    dataset = _load_dataset(args.dataset, seed)
    dataset = augment_for(model, dataset, derive_seed(seed, "augment", "eval"))
    accuracy = evaluate(model, dataset, derive_seed(seed, "eval"), args.runs)
    runs = args.runs or model.run_count
    print(f"==> {model.name} on {dataset.name} with r={runs}: accuracy {accuracy:.4f}")


# ── Experiments ───────────────────────────────────────────────────────────────


def _cmd_table1(args: argparse.Namespace) -> None:
    from dropgnn.config.hydra_utils import save_config, to_plain
    from dropgnn.experiments import acceptance_failures, table1
    from dropgnn.utils.reports import render
    from dropgnn.utils.tables import write_csv

    updates = {"run.seeds": args.seeds, "train.epochs": args.epochs}
    cfgs = [
        _compose(args, dataset=d, method=m, updates=updates)
        for d in args.datasets
        for m in args.methods
    ]
    configs = [_experiment(cfg) for cfg in cfgs]
    target = _out_dir(args)
    save_config(to_plain(cfgs[0]), target / "table1_config.yaml")

    _, summary = table1(configs, target, jobs=configs[0].run.jobs)
    failures = acceptance_failures(summary)
    write_csv(summary, target / "table1.csv", "table1")
    rows = [
        {**row, "status": "ok" if row["passed"] else "FAIL"}
        for row in summary.to_dict(orient="records")
    ]
    text = render(
        "table1.txt.jinja2",
        {"seeds": configs[0].run.seeds, "rows": rows, "failures": failures},
    )
    _emit(text, target / "table1.txt")
    _check(args, failures)


def _sweep_report(
    args: argparse.Namespace, name: str, title: str, x: str, result, log_x: bool
) -> None:
    from dropgnn.utils.plotting import sweep_plot
    from dropgnn.utils.reports import render
    from dropgnn.utils.tables import write_csv

    target = _out_dir(args)
    csv_path = write_csv(result.frame, target / f"{name}.csv", name)
    svg_path = sweep_plot(
        result.frame,
        x,
        target / f"{name}.svg",
        log_x=log_x,
        title=f"{title} ({args.dataset})",
        reference=result.reference,
    )
    rows = [
        {"x": r[x], "mean": r["test_acc_mean"], "std": r["test_acc_std"]}
        for r in result.frame.to_dict(orient="records")
    ]
    trend = "n/a (flat)" if math.isnan(result.trend) else f"{result.trend:.3f}"
    text = render(
        "sweep.txt.jinja2",
        {
            "title": title,
            "dataset": args.dataset,
            "rows": rows,
            "trend": trend,
            "reference": result.reference,
            "failures": result.failures,
            "csv_path": csv_path,
            "svg_path": svg_path,
        },
    )
    _emit(text, target / f"{name}.txt")
    _check(args, result.failures)


def _cmd_sweep_runs(args: argparse.Namespace) -> None:
    from dropgnn.experiments import sweep_runs

    updates = {"run.seeds": args.seeds, "train.epochs": args.epochs}
    experiment = _experiment(_compose(args, args.dataset, "dropgin", updates))
    result = sweep_runs(experiment, args.r_values, args.tests)
    _sweep_report(args, "sweep_runs", "Accuracy vs evaluation runs", "runs", result, True)


def _cmd_sweep_p(args: argparse.Namespace) -> None:
    from dropgnn.experiments import sweep_p

    updates = {"run.seeds": args.seeds, "train.epochs": args.epochs}
    experiment = _experiment(_compose(args, args.dataset, "dropgin", updates))
    result = sweep_p(experiment, args.p_values)
    _sweep_report(args, "sweep_p", "Accuracy vs dropout probability", "p", result, True)


# ── Dropout math ──────────────────────────────────────────────────────────────


def _cmd_bounds(args: argparse.Namespace) -> None:
    from dropgnn.dropout.probability import (
        expected_one,
        optimal_p,
        runs_k_separated,
        runs_one_complete,
    )
    from dropgnn.utils.reports import render
    from dropgnn.utils.tables import write_csv

    context = {
        "gamma": args.gamma,
        "delta": args.delta,
        "t": args.t,
        "nodes": args.nodes,
        "p": optimal_p(args.gamma),
        "e1": expected_one(args.gamma, optimal_p(args.gamma), 1),
        "one_complete": runs_one_complete(args.gamma, args.delta, args.t, args.nodes),
        "k_separated": runs_k_separated(args.gamma, args.delta, args.t, args.nodes),
    }
    target = _out_dir(args)
    write_csv(pd.DataFrame([context]), target / "bounds.csv", "bounds")
    _emit(render("bounds.txt.jinja2", context), target / "bounds.txt")


def _cmd_distribution(args: argparse.Namespace) -> None:
    from dropgnn.dropout.probability import empirical_distribution, exact_distribution, optimal_p
    from dropgnn.dropout.sampling import sample_masks
    from dropgnn.graphs.core import d_hop_neighborhood
    from dropgnn.graphs.io import load_graph
    from dropgnn.utils.reports import render
    from dropgnn.utils.tables import write_csv

    g = load_graph(args.graph)
    hood = d_hop_neighborhood(g, args.u, args.depth)
    p = optimal_p(hood.gamma) if args.p is None else args.p
    if args.runs:
        batch = sample_masks(g, p, args.runs, _seed(args))
        dist = empirical_distribution(batch.masks, args.u, hood.others, p, args.max_k)
    else:
        dist = exact_distribution(hood.gamma, p, args.max_k)

    target = _out_dir(args)
    csv_path = write_csv(dist.to_frame(), target / "distribution.csv", "distribution")
    context = {
        "u": args.u,
        "depth": args.depth,
        "gamma": hood.gamma,
        "p": p,
        "subsets": len(dist.entries),
        "max_k": dist.max_k,
        "enumerated": dist.enumerated_mass,
        "residual": dist.residual_mass,
        "total": dist.total_mass,
        "runs": args.runs,
        "runs_with_center": dist.runs_with_center,
        "csv_path": csv_path,
    }
    _emit(render("distribution.txt.jinja2", context), target / "distribution.txt")


# ── Verify ────────────────────────────────────────────────────────────────────


def _verify_theorem3(args: argparse.Namespace, target: Path) -> tuple[dict, list[str]]:
    from dropgnn.errors import EnumerationLimitError
    from dropgnn.graphs.wl import isomorphic_small
    from dropgnn.lab.theorem3 import dropout_equivalent, theorem3_pair
    from dropgnn.utils.tables import write_csv

    g1, g2, hub = theorem3_pair(args.l)
    report = dropout_equivalent(g1, g2, hub, hub, args.depth, args.max_k)
    try:
        isomorphic: bool | None = isomorphic_small(g1, g2)
    except EnumerationLimitError:
        log.info("pair with %d nodes is too large for the isomorphism check", g1.node_count)
        isomorphic = None
    csv_path = write_csv(report.to_frame(), target / "theorem3.csv", "theorem3")
    cases = []
    for k in sorted(report.counts1):
        count1, count2 = report.case_counts(k)
        cases.append({"k": k, "count1": count1, "count2": count2})

    failures = []
    if not report.equivalent:
        failures.append(f"separated at k={report.witness.k}")
    if isomorphic:
        failures.append("the two graphs are isomorphic")
    context = {
        "length": args.l,
        "depth": args.depth,
        "isomorphic": isomorphic,
        "gamma1": report.gamma1,
        "gamma2": report.gamma2,
        "cases": cases,
        "equivalent": report.equivalent,
        "max_k": args.max_k,
        "witness": report.witness,
        "csv_path": csv_path,
    }
    return context, failures


def _verify_ports(args: argparse.Namespace, target: Path) -> tuple[dict, list[str]]:
    from dropgnn.graphs.wl import isomorphic_small
    from dropgnn.lab.ports import reconstruction_trials, reconstructions
    from dropgnn.lab.theorem3 import theorem3_pair
    from dropgnn.utils.tables import write_csv

    seed = _seed(args)
    outcomes = reconstruction_trials(args.trials, seed, d=args.depth)
    g1, g2, hub = theorem3_pair(args.l)
    left, right = reconstructions([g1, g2], hub, args.depth, seed)
    separated = not isomorphic_small(left, right)
    frame = pd.DataFrame({"trial": range(len(outcomes)), "isomorphic": outcomes})
    write_csv(frame, target / "ports.csv", "ports")

    matched = sum(outcomes)
    failures = []
    if matched != args.trials:
        failures.append(f"{args.trials - matched} reconstructions differ")
    if not separated:
        failures.append(f"hub pair with {args.l}-cycles not separated under ports")
    context = {
        "depth": args.depth,
        "matched": matched,
        "trials": args.trials,
        "length": args.l,
        "separated": separated,
    }
    return context, failures


def _verify_mean_sep(args: argparse.Namespace, target: Path) -> tuple[dict, list[str]]:
    from dropgnn.lab.mean import UNSEPARATED, max_aggregation_gap, mean_separator
    from dropgnn.utils.tables import write_csv

    separator = mean_separator(args.s1, args.s2)
    failures = []
    gap = 0.0
    row: dict[str, Any] = {"s1": str(args.s1), "s2": str(args.s2), "separated": False}
    if separator == UNSEPARATED:
        separator = None
    else:
        gap = separator.gap(args.s1, args.s2)
        row.update(separated=True, p=separator.p, tau=separator.tau, gap=gap)
        row.update(direction=separator.direction, bound=separator.bound)
        if gap < separator.bound - 1e-12:
            failures.append(f"gap {gap:.6g} below bound {separator.bound:.6g}")

    max_gap = None
    if len(args.s1) == len(args.s2):
        max_gap = max_aggregation_gap(args.s1, args.s2, args.p)
        row["max_gap"] = max_gap.probability
        if max_gap.expected is not None and not max_gap.matches:
            failures.append(
                f"max gap {max_gap.probability:.6g} differs from {max_gap.expected:.6g}"
            )
    write_csv(pd.DataFrame([row]), target / "mean_sep.csv", "mean_sep")
    context = {
        "s1": args.s1,
        "s2": args.s2,
        "separator": separator,
        "gap": gap,
        "max_gap": max_gap,
    }
    return context, failures


def _verify_mean_counter(args: argparse.Namespace, target: Path) -> tuple[dict, list[str]]:
    from dropgnn.lab.mean import mean_counterexample
    from dropgnn.utils.tables import write_csv

    report = mean_counterexample(args.l, args.p)
    write_csv(pd.DataFrame([report.to_dict()]), target / "mean_counter.csv", "mean_counter")
    failures = []
    if not report.zero_equal:
        failures.append("P(mean=0) differs between the multisets")
    if not report.nonzero_means_equal:
        failures.append("1-dropout means differ beyond 0")
    if not report.gap_matches:
        failures.append(f"gap {report.one_gap:.6g} != {report.expected_gap:.6g}")
    context = {
        "report": report,
        "means1": sorted(report.one_dropout_means[0]),
        "means2": sorted(report.one_dropout_means[1]),
    }
    return context, failures


def _verify_chernoff(args: argparse.Namespace, target: Path) -> tuple[dict, list[str]]:
    from dropgnn.dropout.chernoff import Regime, RunBudget, chernoff_validate
    from dropgnn.utils.tables import write_csv

    regime = Regime(args.regime)
    if args.runs is None:
        budget = RunBudget.from_bound(args.gamma, args.delta, args.t, regime)
    else:
        budget = RunBudget(r=args.runs, delta=args.delta, t=args.t, regime=regime)
    report = chernoff_validate(args.gamma, budget, args.trials, _seed(args), args.p)
    write_csv(pd.DataFrame([report.to_dict()]), target / "chernoff.csv", "chernoff")
    failures = []
    if not report.passed:
        failures.append(
            f"pass fraction {report.pass_fraction:.4f} < {report.required_fraction:.4f}"
        )
    return {"r": report}, failures


def _verify_examples(args: argparse.Namespace, target: Path) -> tuple[dict, list[str]]:
    from dropgnn.engine.analytic import analytic_example1, analytic_example3
    from dropgnn.lab.examples import (
        cycle_dropouts,
        dropout_values,
        example_pair,
        output_distribution,
    )
    from dropgnn.utils.tables import write_csv

    model1 = analytic_example1()
    g1, g2, u = example_pair(1)
    example1 = tuple(sorted(v for _, v in dropout_values(model1, g, u, 2, 1)) for g in (g1, g2))

    g1, g2, u = example_pair(2)
    found = [cycle_dropouts(g, u, max_k=3) for g in (g1, g2)]
    example2 = tuple({k: len(subsets) for k, subsets in f.items()} for f in found)

    model3 = analytic_example3()
    g1, g2, u = example_pair(3)
    example3 = tuple(
        output_distribution(model3, g, u, EXAMPLE3_P, 1).get(1.0, 0.0) for g in (g1, g2)
    )

    rows = [{"example": 1, "graph": i, "value": str(v)} for i, v in enumerate(example1)]
    rows += [{"example": 2, "graph": i, "value": str(c)} for i, c in enumerate(example2)]
    rows += [{"example": 3, "graph": i, "value": repr(p)} for i, p in enumerate(example3)]
    write_csv(pd.DataFrame(rows), target / "examples.csv", "examples")

    failures = []
    if tuple(example1) != EXAMPLE1_VALUES:
        failures.append(f"example 1 values {example1} != {EXAMPLE1_VALUES}")
    if tuple(example2) != EXAMPLE2_COUNTS:
        failures.append(f"example 2 counts {example2} != {EXAMPLE2_COUNTS}")
    for got, want in zip(example3, EXAMPLE3_PROBABILITIES):
        if not math.isclose(got, want, rel_tol=0.0, abs_tol=1e-12):
            failures.append(f"example 3 probability {got!r} != {want!r}")
    context = {
        "example1": example1,
        "example2_sizes": sorted(example2[0]),
        "example2": example2,
        "p3": EXAMPLE3_P,
        "example3": example3,
    }
    return context, failures


_VERIFIERS = {
    "theorem3": _verify_theorem3,
    "ports": _verify_ports,
    "mean_sep": _verify_mean_sep,
    "mean_counter": _verify_mean_counter,
    "chernoff": _verify_chernoff,
    "examples": _verify_examples,
}


def _cmd_verify(args: argparse.Namespace) -> None:
    from dropgnn.utils.reports import render

    target = _out_dir(args, "verify")
    context, failures = _VERIFIERS[args.which](args, target)
    _emit(render(f"{args.which}.txt.jinja2", context), target / f"{args.which}.txt")
    _check(args, failures)


# ── Parser ────────────────────────────────────────────────────────────────────


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    common.add_argument(
        "--out-dir", default=None, help="output directory (default $DROPGNN_OUT_DIR or outputs)"
    )
    common.add_argument(
        "--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"]
    )
    common.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Hydra override for the training commands (repeatable)",
    )
    return common


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="dropgnn",
        description="Dropout runs for graph neural networks: datasets, training and oracles",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Examples:\n"
            "  dropgnn dataset gen --family limits1 --seed 0\n"
            "  dropgnn train --dataset limits1 --method dropgin --epochs 200\n"
            "  dropgnn table1 --datasets limits1 limits2 --seeds 3 --check\n"
            "  dropgnn bounds --gamma 15 --delta 0.5 --t 10\n"
            "  dropgnn verify theorem3 --l 5 --max-k 2 --check\n"
            "  dropgnn verify mean_sep --s1 1,2,3 --s2 2,2,2\n"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    dataset = sub.add_parser("dataset", help="synthetic dataset tools")
    dataset_sub = dataset.add_subparsers(dest="action", required=True)
    gen = dataset_sub.add_parser("gen", parents=[common], help="generate and save a dataset")
    gen.add_argument("--family", required=True, choices=DEFAULT_DATASETS)
    gen.add_argument("--count", type=int, default=None, help="graph count (four_cycles, lcc)")
    gen.set_defaults(func=_cmd_dataset_gen)

    tr = sub.add_parser("train", parents=[common], help="train one model")
    tr.add_argument("--dataset", required=True, help="family name or dataset directory")
    tr.add_argument("--method", required=True, choices=DEFAULT_METHODS)
    tr.add_argument("--epochs", type=int, default=None)
    tr.set_defaults(func=_cmd_train)

    ev = sub.add_parser("eval", parents=[common], help="evaluate a checkpoint")
    ev.add_argument("--checkpoint", required=True)
    ev.add_argument("--dataset", required=True, help="family name or dataset directory")
    ev.add_argument("--runs", type=int, default=None, help="override the run count")
    ev.set_defaults(func=_cmd_eval)

    t1 = sub.add_parser("table1", parents=[common], help="accuracy grid over datasets/methods")
    t1.add_argument("--datasets", nargs="+", default=list(DEFAULT_DATASETS))
    t1.add_argument("--methods", nargs="+", default=list(DEFAULT_METHODS))
    t1.add_argument("--seeds", type=int, default=None)
    t1.add_argument("--epochs", type=int, default=None)
    t1.add_argument("--check", action="store_true", help="exit 2 outside the acceptance bands")
    t1.set_defaults(func=_cmd_table1)

    sr = sub.add_parser("sweep-runs", parents=[common], help="accuracy vs evaluation runs")
    sr.add_argument("--dataset", required=True, choices=DEFAULT_DATASETS)
    sr.add_argument("--r-values", type=int, nargs="+", default=[1, 2, 5, 10, 20, 50])
    sr.add_argument("--tests", type=int, default=None)
    sr.add_argument("--seeds", type=int, default=None)
    sr.add_argument("--epochs", type=int, default=None)
    sr.add_argument("--check", action="store_true")
    sr.set_defaults(func=_cmd_sweep_runs)

    sp = sub.add_parser("sweep-p", parents=[common], help="accuracy vs dropout probability")
    sp.add_argument("--dataset", required=True, choices=DEFAULT_DATASETS)
    sp.add_argument(
        "--p-values",
        type=float,
        nargs="+",
        default=[0.0, 0.01, 0.02, 0.04, 0.08, 0.16, 0.32, 0.64, 0.95],
    )
    sp.add_argument("--seeds", type=int, default=None)
    sp.add_argument("--epochs", type=int, default=None)
    sp.add_argument("--check", action="store_true")
    sp.set_defaults(func=_cmd_sweep_p)

    bd = sub.add_parser("bounds", parents=[common], help="run-count bounds")
    bd.add_argument("--gamma", type=int, required=True)
    bd.add_argument("--delta", type=float, required=True)
    bd.add_argument("--t", type=float, required=True)
    bd.add_argument("--nodes", type=int, default=1)
    bd.set_defaults(func=_cmd_bounds)

    ds = sub.add_parser("distribution", parents=[common], help="dropout subset distribution")
    ds.add_argument("--graph", required=True, help="graph JSON file")
    ds.add_argument("--u", type=int, required=True)
    ds.add_argument("--p", type=float, default=None, help="default 1/(1+gamma)")
    ds.add_argument("--max-k", type=int, default=None)
    ds.add_argument("--depth", type=int, default=1)
    ds.add_argument("--runs", type=int, default=None, help="also sample this many runs")
    ds.set_defaults(func=_cmd_distribution)

    vf = sub.add_parser("verify", help="exact and Monte-Carlo oracles")
    vf_sub = vf.add_subparsers(dest="which", required=True)
    th = vf_sub.add_parser("theorem3", parents=[common])
    th.add_argument("--l", type=int, default=5)
    th.add_argument("--max-k", type=int, default=2)
    th.add_argument("--depth", type=int, default=2)
    po = vf_sub.add_parser("ports", parents=[common])
    po.add_argument("--trials", type=int, default=50)
    po.add_argument("--depth", type=int, default=3)
    po.add_argument("--l", type=int, default=5)
    ms = vf_sub.add_parser("mean_sep", parents=[common])
    ms.add_argument("--s1", type=_floats, required=True, help="comma-separated values")
    ms.add_argument("--s2", type=_floats, required=True, help="comma-separated values")
    ms.add_argument("--p", type=float, default=0.25, help="p for the max-aggregation gap")
    mc = vf_sub.add_parser("mean_counter", parents=[common])
    mc.add_argument("--l", type=int, default=4)
    mc.add_argument("--p", type=float, default=0.1)
    ch = vf_sub.add_parser("chernoff", parents=[common])
    ch.add_argument("--gamma", type=int, default=5)
    ch.add_argument("--delta", type=float, default=0.9)
    ch.add_argument("--t", type=float, default=5.0)
    ch.add_argument("--trials", type=int, default=500)
    ch.add_argument("--regime", choices=["one_complete", "k_separated"], default="one_complete")
    ch.add_argument("--runs", type=int, default=None, help="default: the closed-form bound")
    ch.add_argument("--p", type=float, default=None, help="default 1/(1+gamma)")
    vf_sub.add_parser("examples", parents=[common])
    for verifier in vf_sub.choices.values():
        verifier.add_argument("--check", action="store_true", help="exit 2 on failure")
        verifier.set_defaults(func=_cmd_verify)
    return parser


# ── Entry point ───────────────────────────────────────────────────────────────


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        args.func(args)
    except AcceptanceFailure as e:
        print(f"CHECK FAILED: {e}")
        sys.exit(EXIT_ACCEPTANCE)
    except (DropGNNError, ValueError, FileNotFoundError) as e:
        print(f"ERROR: {e}")
        sys.exit(EXIT_ERROR)
    return EXIT_OK


if __name__ == "__main__":
    main()
