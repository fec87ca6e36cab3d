"""teamform command line.

Exit status: 0 on success, 1 when verification fails, 2 on invalid input or any
teamform error.
"""

import argparse
import csv
import io
import json
import logging
import statistics
import sys
from dataclasses import fields
from typing import Any, Dict, Optional, Sequence

from .common import ConfigError, ParseError, TeamformError
from .config import Settings, load_settings, read_config_file
from .counterexample import expected_exit_time
from .dynamics import trajectory_to_csv
from .experiments import load_experiment_spec
from .lab import TeamLab
from .matching import dumps_matching
from .models.experiment import ExperimentSpec
from .models.simulation import StopRule
from .utils.textformat import parse_value

logger = logging.getLogger(__name__)

SETTINGS_FIELDS = {spec.name for spec in fields(Settings)}
SPEC_FIELDS = {spec.name for spec in fields(ExperimentSpec)}


def _list(text: str) -> Any:
    try:
        value = parse_value(text, 0)
    except ParseError as e:
        raise argparse.ArgumentTypeError(str(e))
    return value if isinstance(value, list) else [value]


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--max-rounds", type=int, default=None)
    common.add_argument("--p", type=float, default=None, help="leader activation probability")
    common.add_argument("--q", type=float, default=None, help="request acceptance probability")
    common.add_argument("--config", default=None, help="key = value config file")
    common.add_argument("--env-file", default=None)
    common.add_argument("--log-level", default=None)
    common.add_argument("--out", default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="teamform", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", parents=[common], help="generate a network")
    gen.add_argument("kind", choices=["counterexample", "random"])
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, default=None)
    gen.add_argument("--rho", type=float, default=0.04)
    gen.add_argument("--constraint-rule", default="capped_ratio")
    gen.add_argument("--max-degree", type=int, default=None)

    oracle = commands.add_parser("oracle", parents=[common], help="best matching and d*")
    oracle.add_argument("network")

    run = commands.add_parser("run", parents=[common], help="simulate the protocol")
    run.add_argument("network")
    run.add_argument("--initial", default=None, help="matching file (default: empty matching)")
    run.add_argument("--stop", default="stable", help="stable | below:<x> | best:<eps> | fixed")

    for name in ("fig4", "fig5"):
        sweep = commands.add_parser(name, parents=[common], help=f"{name} experiment")
        sweep.add_argument("--workers", type=int, default=None)
        sweep.add_argument("--time-budget", type=float, default=None)
        sweep.add_argument("--networks", type=int, default=None, help="networks per point")
        sweep.add_argument("--runs", type=int, default=None, help="runs per network")
        if name == "fig4":
            sweep.add_argument("--n-values", type=_list, default=None)
            sweep.add_argument("--initial", choices=["empty", "counterexample"], default=None)
        else:
            sweep.add_argument("--pairs", type=_list, default=None, help="n:m,n:m,...")
            sweep.add_argument("--rho", type=float, default=None)
            sweep.add_argument("--eps", type=_list, default=None)
            sweep.add_argument("--max-degree", type=int, default=None)

    count = commands.add_parser("count", parents=[common], help="deficit-1 matchings of G_n by height")
    count.add_argument("--n", type=int, required=True)
    count.add_argument("--gamma", type=float, default=None)

    tree = commands.add_parser("tree", parents=[common], help="random walks on T*_m")
    tree.add_argument("--m", type=int, required=True)
    tree.add_argument("--walks", type=int, default=1000)

    verify = commands.add_parser("verify", parents=[common], help="run the verification suites")
    verify.add_argument("--full", action="store_true")
    verify.add_argument("--suite", action="append", default=None)

    chart = commands.add_parser("chart", parents=[common], help="SVG chart of an experiment CSV")
    chart.add_argument("csv")
    chart.add_argument("--log", action="store_true")
    return parser


def _settings(args: argparse.Namespace, file_values: Dict[str, Any]) -> Settings:
    overrides = {key: value for key, value in file_values.items() if key in SETTINGS_FIELDS}
    flags = {
        "seed": args.seed,
        "max_rounds": args.max_rounds,
        "p": args.p,
        "q": args.q,
        "workers": getattr(args, "workers", None),
        "log_level": args.log_level,
    }
    overrides.update({key: value for key, value in flags.items() if value is not None})
    return load_settings(args.env_file, overrides)


def _experiment(lab: TeamLab, kind: str, file_values: Dict[str, Any], flags: Dict[str, Any]) -> ExperimentSpec:
    unknown = sorted(set(file_values) - SETTINGS_FIELDS - SPEC_FIELDS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}", {"keys": unknown})
    settings = lab.settings
    defaults = {key: value for key, value in file_values.items() if key in SPEC_FIELDS}
    defaults.update(
        seed=settings.seed, max_rounds=settings.max_rounds, p=settings.p, q=settings.q, workers=settings.workers
    )
    return load_experiment_spec(None, dict(flags, kind=kind), **defaults)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _stop_rule(text: str, lab: TeamLab, net) -> StopRule:
    if text == "stable":
        return StopRule.stable()
    if text == "fixed":
        return StopRule.fixed_rounds()
    kind, _, value = text.partition(":")
    try:
        number = float(value)
    except ValueError:
        raise ConfigError(f"bad stop rule {text!r}")
    if kind == "below":
        return StopRule.deficit_below(number)
    if kind == "best":
        return StopRule.approx_best(number, lab.oracle.best(net).d_star)
    raise ConfigError(f"unknown stop rule {text!r}; use stable, below:<x>, best:<eps> or fixed")


def _dispatch(args: argparse.Namespace, lab: TeamLab, file_values: Dict[str, Any]) -> int:
    command = args.command
    if command == "gen":
        if args.kind == "counterexample":
            net = lab.networks.counterexample(args.n)
        else:
            if args.m is None:
                raise ConfigError("gen random needs --m")
            net = lab.networks.random(args.n, args.m, args.rho, None, args.constraint_rule, args.max_degree)
        _emit(lab.networks.dumps(net), args.out)
        return 0

    if command == "oracle":
        net = lab.networks.load(args.network)
        result = lab.oracle.best(net)
        sys.stdout.write(f"d_star {result.d_star}\nstable_exists {str(result.stable_exists).lower()}\n")
        _emit(dumps_matching(result.witness), args.out)
        return 0

    if command == "run":
        net = lab.networks.load(args.network)
        initial = lab.matchings.load(net, args.initial) if args.initial else None
        trajectory = lab.dynamics.run(net, initial, stop_rule=_stop_rule(args.stop, lab, net))
        logger.info("run done rounds=%d reason=%s", trajectory.rounds_elapsed, trajectory.stop_reason)
        _emit(trajectory_to_csv(trajectory), args.out)
        return 0

    if command == "fig4":
        flags = {
            "n_values": args.n_values,
            "initial": args.initial,
            "time_budget_s": args.time_budget,
            "networks_per_point": args.networks,
            "runs_per_network": args.runs,
            "out": args.out,
        }
        text = lab.experiments.fig4(_experiment(lab, "fig4_counterexample", file_values, flags))
        if not args.out:
            sys.stdout.write(text)
        return 0

    if command == "fig5":
        flags = {
            "pairs": args.pairs,
            "rho": args.rho,
            "eps": args.eps,
            "max_degree": args.max_degree,
            "time_budget_s": args.time_budget,
            "networks_per_point": args.networks,
            "runs_per_network": args.runs,
            "out": args.out,
        }
        text = lab.experiments.fig5(_experiment(lab, "fig5_random_sweep", file_values, flags))
        if not args.out:
            sys.stdout.write(text)
        return 0

    if command == "count":
        lines = [f"{j},{value}" for j, value in lab.counterexample.table(args.n).items()]
        lines.append(f"# total={lab.counterexample.count(args.n)}")
        if args.gamma is not None:
            fraction = lab.counterexample.low_fraction(args.n, args.gamma)
            lines.append(f"# gamma={args.gamma:g} low_height_fraction={fraction:.6g}")
        _emit("j,count\n" + "\n".join(lines) + "\n", args.out)
        return 0

    if command == "tree":
        if args.walks < 1:
            raise ConfigError(f"--walks must be >= 1, got {args.walks}")
        samples = lab.counterexample.walks(args.m, args.walks)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["walk", "steps"])
        writer.writerows(enumerate(samples, start=1))
        buffer.write(
            f"# m={args.m} nodes={len(lab.counterexample.tree(args.m))} "
            f"mean_hitting_time={statistics.fmean(samples):.6g} expected_exit_time={expected_exit_time(args.m)}\n"
        )
        _emit(buffer.getvalue(), args.out)
        return 0

    if command == "verify":
        flags = {"size": "full" if args.full else "quick", "out": args.out}
        report = lab.experiments.verify(_experiment(lab, "verify_suite", file_values, flags), args.suite)
        if not args.out:
            print(json.dumps(report, indent=2))
        return 0 if report["passed"] else 1

    if command == "chart":
        svg = lab.experiments.chart(args.csv, log=args.log, out=args.out)
        if not args.out:
            sys.stdout.write(svg)
        return 0

    raise ConfigError(f"unknown command {command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = read_config_file(args.config) if args.config else {}
        settings = _settings(args, file_values)
        logging.basicConfig(level=settings.log_level.upper(), format="%(levelname)s %(name)s %(message)s")
        return _dispatch(args, TeamLab(settings), file_values)
    except TeamformError as e:
        logger.error("command failed command=%s error=%s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
