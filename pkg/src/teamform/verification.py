"""Property suites behind ``teamform verify``.

Each suite takes a seed and a size ("quick" or "full") and returns a one-line detail
string; failures raise ``SuiteFailure``. ``full`` uses the acceptance sizes.
"""

import logging
import math
import statistics
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Tuple

import numpy as np

from .common import TeamformError
from .counterexample import (
    build_tree,
    canonical_bad_matching,
    check_structure,
    count_all,
    count_by_height,
    enumerate_heights,
    height_table,
    index_set,
    ks_statistic,
    matching_from_index_set,
    omega,
    reachable_set,
    sample_escape_rounds,
    sample_hitting_times,
    single_round_successors,
    transition_distribution,
)
from .dynamics import deficit_drop_probability, leader_stage, make_rng, run, theorem1_bound
from .matching import deficit, max_follower_disjoint_dd_paths, shortest_dd_path
from .models.matching import Matching, empty_matching
from .models.network import BipartiteNetwork, build_network
from .models.simulation import SimConfig, StopRule
from .models.tree import IndexSet
from .network import gen_counterexample, gen_random
from .oracle import best_matching, enumerate_matchings, min_deficit_by_enumeration

logger = logging.getLogger(__name__)

SHORT_PATH_EPS = [Fraction(1, 5), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)]
TRANSITION_STATES = [(2, 4, 6), (3, 6), (4, 5, 6), (5, 6), (2, 3, 5)]


class SuiteFailure(TeamformError):
    """A verification suite found a counterexample to the property it checks."""


def _require(condition: bool, message: str, **details) -> None:
    if not condition:
        raise SuiteFailure(message, details)


def _pick(size: str, quick, full):
    return full if size == "full" else quick


def random_small_network(rng: np.random.Generator, max_side: int, max_constraint: int = 2) -> BipartiteNetwork:
    """Network with n, m in [1, max_side], mixed edge density and constraints in [1, max_constraint]."""
    n = int(rng.integers(1, max_side + 1))
    m = int(rng.integers(1, max_side + 1))
    rho = float(rng.choice([0.2, 0.4, 0.6, 0.8]))
    mask = rng.random((n, m)) < rho
    edges = [(i + 1, j + 1) for i in range(n) for j in range(m) if mask[i, j]]
    constraints = {i: int(rng.integers(1, max_constraint + 1)) for i in range(1, n + 1)}
    return build_network(n, m, edges, constraints)


def stable_family(seed: int, count: int, max_side: int = 5, max_constraint: int = 2) -> List[BipartiteNetwork]:
    """Seeded stable-admitting networks with n, m ≤ max_side and constraints ≤ max_constraint."""
    rng = make_rng(seed)
    family: List[BipartiteNetwork] = []
    while len(family) < count:
        net = random_small_network(rng, max_side, max_constraint=max_constraint)
        if best_matching(net).stable_exists:
            family.append(net)
    return family


def oracle_exactness(seed: int, size: str) -> str:
    rng = make_rng(seed)
    count = _pick(size, 40, 200)
    for index in range(count):
        net = random_small_network(rng, 6)
        result = best_matching(net)
        brute = min_deficit_by_enumeration(net)
        _require(result.d_star == brute, "flow and enumeration disagree", index=index, flow=result.d_star, brute=brute)
        _require(deficit(result.witness).total == result.d_star, "witness deficit differs from d*", index=index)
    return f"{count} networks, flow d* == enumeration minimum"


def gn_structure(seed: int, size: str) -> str:
    top = _pick(size, 6, 8)
    for n in range(1, top + 1):
        net = gen_counterexample(n)
        _require(best_matching(net).d_star == 0, "G_n has no stable matching", n=n)
        stable = enumerate_matchings(net, predicate=lambda mt: mt.total_deficit == 0, max_deficit=0)
        _require(len(stable) == 1, "stable matching of G_n is not unique", n=n, count=len(stable))
        _require(stable[0].pairs() == [(i, i) for i in range(1, n + 1)], "stable matching is not horizontal", n=n)
    return f"G_1..G_{top}: unique horizontal stable matching"


def deficit_monotonicity(seed: int, size: str) -> str:
    rng = make_rng(seed)
    target = _pick(size, 4_000, 12_000)
    rounds = 0
    runs = 0
    while rounds < target:
        net = random_small_network(rng, 8, max_constraint=3)
        p = float(rng.choice([0.3, 0.6, 1.0]))
        q = float(rng.choice([0.3, 0.6, 1.0]))
        config = SimConfig(p=p, q=q, seed=int(rng.integers(2**31)), max_rounds=200, stop_rule=StopRule.fixed_rounds())
        trajectory = run(net, empty_matching(net), config)
        deficits = trajectory.deficits
        violations = sum(1 for a, b in zip(deficits, deficits[1:]) if b > a)
        _require(violations == 0, "deficit increased", run=runs, seed=config.seed)
        rounds += trajectory.rounds_elapsed
        runs += 1
    return f"{rounds} rounds over {runs} runs, zero increases"


def _exhaustive(seed: int, size: str, check: Callable[[Matching, Matching], int]) -> Tuple[int, int]:
    family = stable_family(seed, _pick(size, 30, 120), max_side=_pick(size, 4, 5), max_constraint=3)
    checked = 0
    for net in family:
        stable = best_matching(net).witness
        for matching in enumerate_matchings(net):
            checked += check(matching, stable)
    return len(family), checked


def short_paths(seed: int, size: str) -> str:
    def check(matching, stable) -> int:
        total = matching.total_deficit
        if total == 0:
            return 0
        path = shortest_dd_path(matching)
        _require(path is not None, "no deficit-decreasing path in a stable-admitting network")
        m = matching.network.num_followers
        done = 0
        for eps in SHORT_PATH_EPS:
            if total >= eps * m:
                bound = 2 * math.floor(1 / eps) - 1
                _require(path.length <= bound, "shortest path too long", eps=str(eps), length=path.length)
                done += 1
        return done

    networks, checked = _exhaustive(seed, size, check)
    return f"{checked} (matching, eps) cases over {networks} networks"


def disjoint_paths(seed: int, size: str) -> str:
    def check(matching, stable) -> int:
        report = deficit(matching)
        family = max_follower_disjoint_dd_paths(matching, stable)
        _require(family.count >= report.total, "too few follower-disjoint paths", count=family.count)
        wanted = {leader: report.per_leader[leader] for leader in report.poor_leaders}
        _require(family.starts == wanted, "witness does not start d_l paths at each poor leader")
        followers = [f for path in family.paths for f in path.followers]
        _require(len(followers) == len(set(followers)), "witness paths share a follower")
        return 1

    networks, checked = _exhaustive(seed, size, check)
    return f"{checked} matchings over {networks} networks"


def round_bound(seed: int, size: str) -> str:
    runs = _pick(size, 20, 100)
    eps = 0.5
    reached = 0
    margins = []
    for i in range(runs):
        net = gen_random(20, 40, 0.1, seed + i, "capped_ratio", max_degree=4)
        d_star = best_matching(net).d_star
        bound, _ = theorem1_bound(net.m, net.max_degree, 1.0, 1.0, eps)
        config = SimConfig(seed=seed + i, max_rounds=math.ceil(bound), stop_rule=StopRule.approx_best(eps, d_star))
        trajectory = run(net, empty_matching(net), config)
        if trajectory.stopped:
            reached += 1
            margins.append(bound / max(trajectory.rounds_elapsed, 1))
    _require(reached * 100 >= 99 * runs, "too many runs missed the round bound", reached=reached, runs=runs)
    return f"{reached}/{runs} within bound, median margin {statistics.median(margins):.0f}x"


def stabilisation_growth(seed: int, size: str) -> str:
    sizes = _pick(size, [6, 8, 10], [8, 10, 12, 14, 16])
    seeds = _pick(size, 15, 50)
    medians: Dict[int, float] = {}
    for n in sizes:
        net = gen_counterexample(n)
        start = canonical_bad_matching(n)
        rounds = [
            run(net, start, SimConfig(seed=seed + k, stop_rule=StopRule.stable())).rounds_elapsed for k in range(seeds)
        ]
        medians[n] = statistics.median(rounds)
    for low, high in zip(sizes, sizes[1:]):
        _require(medians[high] >= 1.5 * medians[low], "stabilisation time does not grow", n=low, medians=medians)
    return "medians " + ", ".join(f"n={n}:{value:g}" for n, value in medians.items())


def index_transitions(seed: int, size: str) -> str:
    trials = _pick(size, 2_000, 10_000)
    for offset, state in enumerate(TRANSITION_STATES):
        start = IndexSet(6, state)
        expected = transition_distribution(start)
        counts = single_round_successors(start, trials, seed + offset * trials)
        _require(set(counts) <= set(expected), "successor outside the predicted support", state=str(start))
        for successor, probability in expected.items():
            sigma = math.sqrt(probability * (1 - probability) / trials)
            observed = counts.get(successor, 0) / trials
            _require(
                abs(observed - probability) <= 3 * sigma + 1e-12,
                "successor frequency off",
                state=str(start),
                successor=str(successor),
                observed=observed,
            )
    return f"{len(TRANSITION_STATES)} states x {trials} rounds"


def counting(seed: int, size: str) -> str:
    top = _pick(size, 9, 12)
    for n in range(1, top + 1):
        brute = enumerate_heights(n)
        _require(brute == height_table(n), "closed form N(j) differs from enumeration", n=n)
        _require(sum(brute.values()) == count_all(n), "N differs from 2^n - 1", n=n)
    for n in range(1, 31):
        _require(sum(count_by_height(n, j) for j in range(n)) == 2**n - 1, "sum N(j) != 2^n - 1", n=n)
    return f"enumeration agrees for n <= {top}, identity for n <= 30"


def tree_equivalence(seed: int, size: str) -> str:
    samples = _pick(size, 2_000, 10_000)
    start = IndexSet(8, (7, 8))
    tree = build_tree(7)
    node = omega(start, start, tree)
    rounds = sample_escape_rounds(start, samples, seed)
    walks = sample_hitting_times(tree, node, samples, seed + 1)
    statistic = ks_statistic(rounds, walks)
    threshold = max(0.03, 1.63 * math.sqrt(2 / samples))
    _require(statistic < threshold, "escape rounds and tree walk disagree", ks=statistic, threshold=threshold)
    return f"KS={statistic:.4f} < {threshold:.4f} over {samples} samples"


def index_bijection(seed: int, size: str) -> str:
    top = _pick(size, 8, 12)
    for n in range(1, top + 1):
        for k in range(n + 1):
            for subset in combinations(range(1, n + 1), k):
                indexes = IndexSet(n, subset)
                _require(index_set(matching_from_index_set(indexes)) == indexes, "round trip failed", set=str(indexes))
        for matching in enumerate_matchings(gen_counterexample(n), max_deficit=1):
            _require(matching_from_index_set(index_set(matching)) == matching, "matching round trip failed", n=n)
    return f"bijection holds for n <= {top}"


def deficit_one_structure(seed: int, size: str) -> str:
    top = _pick(size, 7, 10)
    checked = 0
    for n in range(1, top + 1):
        for matching in enumerate_matchings(
            gen_counterexample(n), predicate=lambda mt: mt.total_deficit == 1, max_deficit=1
        ):
            check_structure(matching)
            checked += 1
    return f"{checked} deficit-1 matchings"


def omega_bijection(seed: int, size: str) -> str:
    top = _pick(size, 7, 10)
    for h in range(1, top + 1):
        reference = IndexSet(h + 1, (h, h + 1))
        tree = build_tree(h)
        states = reachable_set(reference)
        nodes = {state: omega(reference, state, tree) for state in states}
        _require(len(set(nodes.values())) == len(states) == len(tree), "omega is not a bijection", h=h)
        for state in states:
            if len(state) < 2:
                continue
            successors = transition_distribution(state)
            _require(len(successors) == tree.degree(nodes[state]), "degree mismatch", h=h, state=str(state))
            for successor in successors:
                _require(tree.adjacent(nodes[state], nodes[successor]), "transition to a non-neighbour", h=h)
    return f"h <= {top}"


def deficit_drop(seed: int, size: str) -> str:
    trials = _pick(size, 2_000, 10_000)
    net = build_network(3, 4, [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 4)], {1: 1, 2: 1, 3: 2})
    start = empty_matching(net).with_assignment({2: 1, 3: 2})
    config = SimConfig(p=0.8, q=0.7, seed=seed)
    estimate, bound, sigma = deficit_drop_probability(net, start, config, trials)
    _require(estimate >= bound - 3 * sigma, "deficit drops less often than the bound", estimate=estimate, bound=bound)
    return f"drop probability {estimate:.3f} >= bound {bound:.4f}"


def self_stabilization(seed: int, size: str) -> str:
    rng = make_rng(seed)
    checked = 0
    for net in stable_family(seed, _pick(size, 10, 40), max_side=6):
        matching = best_matching(net).witness
        for _ in range(5):
            _require(not leader_stage(net, matching, 1.0, rng), "requests sent from a stable matching")
        trajectory = run(net, matching, SimConfig(seed=seed, max_rounds=20, stop_rule=StopRule.fixed_rounds()))
        _require(trajectory.final == matching, "stable matching changed")
        checked += 1
    return f"{checked} stable matchings stay silent"


def random_sweep_shape(seed: int, size: str) -> str:
    # Imported here: experiments imports this module for run_verify.
    from .experiments import fig5_means
    from .models.experiment import ExperimentSpec

    if size == "full":
        spec = ExperimentSpec(
            kind="fig5_random_sweep", eps=[0.9, 0.7, 0.5], networks_per_point=5, runs_per_network=5, seed=seed
        )
    else:
        spec = ExperimentSpec(
            kind="fig5_random_sweep",
            pairs=[(20, 40), (20, 60)],
            rho=0.2,
            eps=[0.9, 0.7, 0.5],
            networks_per_point=2,
            runs_per_network=2,
            seed=seed,
        )
    means = fig5_means(spec)
    for pair in spec.pairs:
        curve = [means[(pair[0], pair[1], eps)] for eps in sorted(spec.eps)]
        _require(all(a >= b for a, b in zip(curve, curve[1:])), "mean rounds increase with eps", pair=list(pair))
    if size == "full":
        for eps in spec.eps:
            row = [means[(n, m, eps)] for n, m in sorted(spec.pairs, key=lambda pair: pair[1])]
            _require(all(a <= b for a, b in zip(row, row[1:])), "mean rounds decrease with m", eps=eps)
    return f"{len(spec.pairs)} curves x {len(spec.eps)} eps"


SUITES: Dict[str, Callable[[int, str], str]] = {
    "oracle_exactness": oracle_exactness,
    "gn_structure": gn_structure,
    "deficit_monotonicity": deficit_monotonicity,
    "short_paths": short_paths,
    "disjoint_paths": disjoint_paths,
    "round_bound": round_bound,
    "stabilisation_growth": stabilisation_growth,
    "index_transitions": index_transitions,
    "counting": counting,
    "tree_equivalence": tree_equivalence,
    "random_sweep_shape": random_sweep_shape,
    "index_bijection": index_bijection,
    "deficit_one_structure": deficit_one_structure,
    "omega_bijection": omega_bijection,
    "deficit_drop": deficit_drop,
    "self_stabilization": self_stabilization,
}
