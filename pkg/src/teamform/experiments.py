"""Experiment harness: the counterexample sweep, the random-network sweep and verify.

Replication seeds are derived with ``numpy.random.SeedSequence`` from the spec seed and
the grid coordinates, so results do not depend on the worker count or on task order.
"""

import csv
import hashlib
import io
import json
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, TypeVar, Union

import numpy as np

from .charts import emit_chart
from .common import ConfigError, TeamformError
from .config import read_config_file
from .counterexample import canonical_bad_matching
from .dynamics import run, tau, tau_best
from .models.experiment import ExperimentSpec, SuiteResult, VerifyReport
from .models.matching import UNMATCHED, Matching, empty_matching
from .models.simulation import SimConfig, StopRule
from .network import gen_counterexample, gen_random, parse_constraint_rule
from .oracle import best_matching

logger = logging.getLogger(__name__)

FIG4_METRICS = ("approx_0.9", "stable", "followers_matched", "followers_ever_matched")
FIG4_HEADER = ["n", "metric", "mean_rounds", "replications"]
FIG5_HEADER = ["n", "m", "eps", "mean_rounds", "replications"]

T = TypeVar("T")
R = TypeVar("R")

__all__ = [
    "FIG4_METRICS",
    "emit_chart",
    "fig4_means",
    "fig5_means",
    "load_experiment_spec",
    "run_fig4",
    "run_fig5",
    "run_verify",
    "spec_hash",
]


def derive_seed(base: int, *coordinates: int) -> int:
    return int(np.random.SeedSequence(entropy=base, spawn_key=coordinates).generate_state(1)[0])


def spec_hash(spec: ExperimentSpec) -> str:
    """sha256 of the canonical JSON form of the spec; ``out`` and ``workers`` do not affect results."""
    data = spec.to_dict()
    data.pop("out", None)
    data.pop("workers", None)
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


_LIST_FIELDS = {"n_values", "pairs", "eps"}


def load_experiment_spec(
    path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None, **defaults: Any
) -> ExperimentSpec:
    """Build an ExperimentSpec from ``defaults``, then a config file, then non-None overrides.

    Raises:
        ConfigError: Unknown keys or invalid values.
        ParseError: Malformed config file lines.
    """
    known = {spec.name for spec in fields(ExperimentSpec)}
    values: Dict[str, Any] = dict(defaults)
    if path is not None:
        values.update(read_config_file(path))
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"unknown experiment keys: {', '.join(unknown)}", {"keys": unknown})
    for key in _LIST_FIELDS & set(values):
        value = values[key]
        if isinstance(value, (int, float)) or (key == "pairs" and isinstance(value, tuple)):
            values[key] = [value]
    return ExperimentSpec(**values)


def _map(function: Callable[[T], R], tasks: Sequence[T], workers: int) -> List[R]:
    if workers <= 1 or len(tasks) <= 1:
        return [function(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, tasks))


def _fig4_replication(task: Tuple[int, int, str, float, float, int]) -> Dict[str, Tuple[int, bool]]:
    """One run on G_n; each metric maps to (rounds, truncated)."""
    n, seed, initial, p, q, max_rounds = task
    net = gen_counterexample(n)
    start = empty_matching(net) if initial == "empty" else canonical_bad_matching(n)
    seen: Set[int] = set()
    ever: List[Optional[int]] = [None]

    def watch(t: int, matching: Matching) -> None:
        if ever[0] is None:
            seen.update(f for f, leader in enumerate(matching.slots, start=1) if leader != UNMATCHED)
            if len(seen) == net.num_followers:
                ever[0] = t

    trajectory = run(net, start, SimConfig(p=p, q=q, seed=seed, max_rounds=max_rounds), observer=watch)
    hits = {
        "approx_0.9": tau(trajectory, 0.1, n),
        "stable": trajectory.rounds_elapsed if trajectory.stopped else None,
        "followers_matched": next(
            (record.round for record in trajectory.records if record.matched_followers == net.num_followers), None
        ),
        "followers_ever_matched": ever[0],
    }
    return {metric: (max_rounds, True) if value is None else (value, False) for metric, value in hits.items()}


Fig5Task = Tuple[int, int, int, float, str, Optional[int], Tuple[float, ...], int, float, float, int, int]


def _fig5_network(task: Fig5Task) -> Tuple[int, Dict[float, List[Tuple[int, bool]]]]:
    """All runs on one random network; returns {eps: [(rounds, truncated), ...]}."""
    n, m, network_seed, rho, rule, max_degree, eps_values, runs, p, q, max_rounds, resample_limit = task
    net = gen_random(n, m, rho, network_seed, parse_constraint_rule(rule), max_degree, resample_limit)
    d_star = best_matching(net).d_star
    stop = StopRule.approx_best(min(eps_values), d_star)
    found: Dict[float, List[Tuple[int, bool]]] = {eps: [] for eps in eps_values}
    for r in range(runs):
        config = SimConfig(p=p, q=q, seed=derive_seed(network_seed, r), max_rounds=max_rounds, stop_rule=stop)
        trajectory = run(net, empty_matching(net), config)
        for eps in eps_values:
            hit = tau_best(trajectory, eps, m, d_star)
            found[eps].append((max_rounds, True) if hit is None else (hit, False))
    return d_star, found


def _out_of_time(started: float, budget: Optional[float]) -> bool:
    return budget is not None and time.monotonic() - started > budget


def _metadata(spec: ExperimentSpec, truncated_runs: int, budget_hit: bool) -> List[str]:
    lines = [f"# spec_hash={spec_hash(spec)} kind={spec.kind} seed={spec.seed} prng=numpy.PCG64"]
    if truncated_runs:
        lines.append(f"# truncated_runs={truncated_runs} counted_as=max_rounds={spec.max_rounds}")
    if budget_hit:
        lines.append("# truncated=time_budget")
    return lines


def _write(rows: Iterable[Sequence[Any]], header: List[str], metadata: List[str], out: Optional[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    for line in metadata:
        buffer.write(line + "\n")
    text = buffer.getvalue()
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info("experiment written path=%s rows=%d", out, len(text.splitlines()) - 1 - len(metadata))
    return text


def fig4_means(spec: ExperimentSpec) -> Tuple[List[Tuple[int, str, float, int]], int, bool]:
    """Rows (n, metric, mean_rounds, replications), truncated run count, budget flag."""
    started = time.monotonic()
    replications = spec.networks_per_point * spec.runs_per_network
    rows: List[Tuple[int, str, float, int]] = []
    truncated = 0
    budget_hit = False
    for n in spec.n_values:
        if _out_of_time(started, spec.time_budget_s):
            budget_hit = True
            logger.warning("fig4 budget exhausted n=%d budget_s=%s", n, spec.time_budget_s)
            break
        tasks = [
            (n, derive_seed(spec.seed, n, r), spec.initial, spec.p, spec.q, spec.max_rounds)
            for r in range(replications)
        ]
        results = _map(_fig4_replication, tasks, spec.workers)
        for metric in FIG4_METRICS:
            values = [result[metric] for result in results]
            truncated += sum(1 for _, capped in values if capped)
            rows.append((n, metric, statistics.fmean(v for v, _ in values), len(values)))
        logger.info("fig4 point n=%d replications=%d", n, replications)
    return rows, truncated, budget_hit


def run_fig4(spec: ExperimentSpec) -> str:
    """Mean rounds on G_n for τ(0.1), stability and all-followers-matched.

    Columns ``n,metric,mean_rounds,replications`` followed by ``#`` metadata lines.
    Runs that hit max_rounds count as max_rounds and are reported in the metadata.
    """
    if spec.kind != "fig4_counterexample":
        raise ConfigError(f"run_fig4 needs kind fig4_counterexample, got {spec.kind}")
    rows, truncated, budget_hit = fig4_means(spec)
    if truncated:
        logger.warning("fig4 truncated runs=%d max_rounds=%d", truncated, spec.max_rounds)
    formatted = [(n, metric, f"{mean:.6g}", count) for n, metric, mean, count in rows]
    return _write(formatted, FIG4_HEADER, _metadata(spec, truncated, budget_hit), spec.out)


def _fig5_rows(spec: ExperimentSpec) -> Tuple[List[Tuple[int, int, float, float, int]], int, bool]:
    started = time.monotonic()
    eps_values = tuple(sorted(spec.eps, reverse=True))
    rows: List[Tuple[int, int, float, float, int]] = []
    truncated = 0
    budget_hit = False
    for n, m in spec.pairs:
        if _out_of_time(started, spec.time_budget_s):
            budget_hit = True
            logger.warning("fig5 budget exhausted n=%d m=%d budget_s=%s", n, m, spec.time_budget_s)
            break
        tasks = [
            (
                n,
                m,
                derive_seed(spec.seed, n, m, i),
                spec.rho,
                spec.constraint_rule,
                spec.max_degree,
                eps_values,
                spec.runs_per_network,
                spec.p,
                spec.q,
                spec.max_rounds,
                100,
            )
            for i in range(spec.networks_per_point)
        ]
        results = _map(_fig5_network, tasks, spec.workers)
        for eps in eps_values:
            values = [value for _, found in results for value in found[eps]]
            truncated += sum(1 for _, capped in values if capped)
            rows.append((n, m, eps, statistics.fmean(v for v, _ in values), len(values)))
        logger.info("fig5 point n=%d m=%d d_star_max=%d", n, m, max(d for d, _ in results))
    return rows, truncated, budget_hit


def fig5_means(spec: ExperimentSpec) -> Dict[Tuple[int, int, float], float]:
    rows, _, _ = _fig5_rows(spec)
    return {(n, m, eps): mean for n, m, eps, mean, _ in rows}


def run_fig5(spec: ExperimentSpec) -> str:
    """Mean rounds to a (1 − ε)-approximate best matching on seeded G(n, m, ρ) networks.

    Columns ``n,m,eps,mean_rounds,replications``; d* of every network comes from the oracle.
    """
    if spec.kind != "fig5_random_sweep":
        raise ConfigError(f"run_fig5 needs kind fig5_random_sweep, got {spec.kind}")
    rows, truncated, budget_hit = _fig5_rows(spec)
    if truncated:
        logger.warning("fig5 truncated runs=%d max_rounds=%d", truncated, spec.max_rounds)
    formatted = [(n, m, f"{eps:g}", f"{mean:.6g}", count) for n, m, eps, mean, count in rows]
    return _write(formatted, FIG5_HEADER, _metadata(spec, truncated, budget_hit), spec.out)


def run_verify(spec: ExperimentSpec, only: Optional[Sequence[str]] = None) -> VerifyReport:
    """Run every verification suite (or the ``only`` subset) and collect a JSON-ready report.

    A suite that raises any TeamformError is recorded as failed with the message as detail.
    """
    from .verification import SUITES

    names = list(SUITES) if only is None else list(only)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suites: {', '.join(unknown)}", {"suites": unknown})

    suites: List[SuiteResult] = []
    for index, name in enumerate(names):
        seed = derive_seed(spec.seed, index)
        started = time.monotonic()
        try:
            detail = SUITES[name](seed, spec.size)
            passed = True
        except TeamformError as e:
            detail = f"{e}; {json.dumps(e.details, default=str, sort_keys=True)}" if e.details else str(e)
            passed = False
        elapsed = time.monotonic() - started
        log = logger.info if passed else logger.warning
        log("verify suite=%s passed=%s seconds=%.1f", name, passed, elapsed)
        suites.append(SuiteResult(name=name, passed=passed, seed=seed, detail=detail))

    report = VerifyReport(passed=all(s["passed"] for s in suites), size=spec.size, suites=suites)
    if spec.out:
        Path(spec.out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return report
