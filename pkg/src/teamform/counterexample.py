"""Deficit-1 matchings of G_n as index sets, heights, the tree T*_m and its random walk.

Every matching of G_n with deficit at most one is identified by the sorted set of
indexes j whose horizontal edge (ℓ_j, f_j) is missing. With p = q = 1 the protocol
moves that set like a random walk on T*_{h(M)}, where h(M) is the second-largest index.
"""

import logging
import math
from collections import Counter
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from .common import ConfigError, MatchingError
from .dynamics import make_rng, run
from .models.matching import Matching, matching_from_pairs
from .models.simulation import SimConfig, StopRule
from .models.tree import IndexSet, LabeledTree
from .network import gen_counterexample
from .oracle import DEFAULT_ENUMERATION_LIMIT, enumerate_matchings

logger = logging.getLogger(__name__)


def _order(matching: Matching) -> int:
    net = matching.network
    if net != gen_counterexample(net.num_leaders):
        raise MatchingError("matching does not belong to a counterexample network G_n")
    return net.num_leaders


def stable_matching(n: int) -> Matching:
    """M*_n = {(ℓ_i, f_i)}."""
    return matching_from_pairs(gen_counterexample(n), [(i, i) for i in range(1, n + 1)])


def canonical_bad_matching(n: int) -> Matching:
    """M'_n = {(ℓ_i, f_{i−1}) : 2 ≤ i ≤ n}."""
    return matching_from_pairs(gen_counterexample(n), [(i, i - 1) for i in range(2, n + 1)])


def index_set(matching: Matching) -> IndexSet:
    """𝓘(M): sorted j with (ℓ_j, f_j) ∉ M, for matchings of G_n with d(M) ≤ 1."""
    n = _order(matching)
    if matching.total_deficit > 1:
        raise MatchingError(
            f"index sets describe matchings with deficit <= 1, got {matching.total_deficit}",
            {"deficit": matching.total_deficit},
        )
    slots = matching.slots
    return IndexSet(n, tuple(j for j in range(1, n + 1) if slots[j - 1] != j))


def matching_from_index_set(indexes: IndexSet, n: Optional[int] = None) -> Matching:
    """Inverse of index_set: chain edges (ℓ_{i_{k+1}}, f_{i_k}) plus horizontal edges outside the set."""
    size = indexes.n if n is None else n
    if size != indexes.n:
        raise MatchingError(f"index set belongs to G_{indexes.n}, not G_{size}")
    chain = list(indexes)
    pairs = [(chain[k + 1], chain[k]) for k in range(len(chain) - 1)]
    pairs += [(k, k) for k in range(1, size + 1) if k not in indexes]
    return matching_from_pairs(gen_counterexample(size), pairs)


def height(item: Union[Matching, IndexSet]) -> int:
    indexes = item if isinstance(item, IndexSet) else index_set(item)
    if indexes.is_empty:
        raise MatchingError("the stable matching has no height")
    return indexes.height


def poor_leader_index(matching: Matching) -> int:
    return index_set(matching).min()


def unmatched_follower_index(matching: Matching) -> int:
    return index_set(matching).max()


def check_structure(matching: Matching) -> None:
    """Raise MatchingError unless a deficit-1 matching of G_n has the chained structure:
    one poor leader ℓ_{min I}, one unmatched follower f_{max I}, horizontal edges outside
    [min I, max I], and chain edges (ℓ_{j_{k+1}}, f_{j_k})."""
    n = _order(matching)
    if matching.total_deficit != 1:
        raise MatchingError("structure check applies to deficit-1 matchings")
    indexes = index_set(matching)
    poor = [leader for leader in range(1, n + 1) if matching.team_size(leader) == 0]
    unmatched = matching.unmatched_followers()
    if poor != [indexes.min()] or unmatched != [indexes.max()]:
        raise MatchingError("poor leader or unmatched follower does not match the index set", {"set": str(indexes)})
    for k in range(1, n + 1):
        if (k < indexes.min() or k > indexes.max()) and matching.leader_of(k) != k:
            raise MatchingError(f"horizontal edge ({k}, {k}) missing outside the index range")
    chain = list(indexes)
    for k in range(len(chain) - 1):
        if matching.leader_of(chain[k]) != chain[k + 1]:
            raise MatchingError(f"chain edge ({chain[k + 1]}, {chain[k]}) missing", {"set": str(indexes)})


def lowered_matching(item: Union[Matching, IndexSet]) -> Matching:
    """𝓛(M) = {(ℓ_j, f_j) : j ≠ max 𝓘(M)}."""
    indexes = item if isinstance(item, IndexSet) else index_set(item)
    if indexes.is_empty:
        raise MatchingError("the stable matching has no lowered matching")
    return matching_from_index_set(IndexSet(indexes.n, (indexes.max(),)))


def reachable_set(item: Union[Matching, IndexSet]) -> List[IndexSet]:
    """ℛ(M): {max I} together with A ∪ {h, max I} for every A ⊆ {1, …, h − 1}."""
    indexes = item if isinstance(item, IndexSet) else index_set(item)
    if len(indexes) < 2:
        raise MatchingError("reachable sets are defined for index sets with at least two entries")
    top, h = indexes.max(), indexes.height
    found = [IndexSet(indexes.n, (top,))]
    below = range(1, h)
    for size in range(h):
        for subset in combinations(below, size):
            found.append(IndexSet(indexes.n, subset + (h, top)))
    return found


def build_tree(m: int) -> LabeledTree:
    """T*_m: root labeled m + 1 whose only child roots a copy of T_m."""
    if m < 1:
        raise ConfigError(f"T*_m needs m >= 1, got {m}", {"m": m})
    return _cached_tree(m)


@lru_cache(maxsize=16)
def _cached_tree(m: int) -> LabeledTree:
    return LabeledTree(m)


def tree_node_by_path(tree: LabeledTree, labels: Sequence[int]) -> int:
    """Node reached from the root's child by following child labels; ``labels[0]`` is that child's label."""
    return tree.node_by_path(labels)


def node_path(tree: LabeledTree, node: int) -> Tuple[int, ...]:
    return tree.path_of(node)


def omega(
    reference: Union[Matching, IndexSet], target: Union[Matching, IndexSet], tree: Optional[LabeledTree] = None
) -> int:
    """Node of T*_{h(M)} standing for a matching reachable from M.

    𝓛(M) maps to the root; any other reachable M′ maps to the node whose path from
    the root carries the labels of 𝓘(M′) ∖ {max} in decreasing order.
    """
    start = reference if isinstance(reference, IndexSet) else index_set(reference)
    current = target if isinstance(target, IndexSet) else index_set(target)
    if len(start) < 2:
        raise MatchingError("omega needs a reference matching of positive height")
    h, top = start.height, start.max()
    if tree is None:
        tree = build_tree(h)
    elif tree.m != h:
        raise MatchingError(f"tree is T*_{tree.m}, reference height is {h}")
    inside = (
        current.n == start.n
        and not current.is_empty
        and current.max() == top
        and (len(current) == 1 or (current.height == h and all(i < h for i in current.indexes[:-2])))
    )
    if not inside:
        raise MatchingError(f"{current} is not reachable from {start}", {"reference": str(start)})
    if len(current) == 1:
        return tree.root
    return tree.node_by_path(reversed(current.indexes[:-1]))


def transition_distribution(indexes: IndexSet, p: float = 1.0, q: float = 1.0) -> Dict[IndexSet, float]:
    """One-round successor law of 𝓘(t) under p = q = 1.

    From |I| > 1 each of I ∪ {k} (k < min I) and I ∖ {min I} has probability 1/min I;
    a singleton moves to the empty set; the empty set is absorbing.
    """
    if p != 1 or q != 1:
        raise ConfigError("the index-set transition law is only available for p = q = 1", {"p": p, "q": q})
    if indexes.is_empty:
        return {indexes: 1.0}
    if len(indexes) == 1:
        return {IndexSet(indexes.n, ()): 1.0}
    low = indexes.min()
    successors = [indexes.with_index(k) for k in range(1, low)] + [indexes.without_min()]
    return {successor: 1.0 / low for successor in successors}


def walk_hitting_time(tree: LabeledTree, start: int, rng: Union[int, np.integer, np.random.Generator]) -> int:
    """Steps of a uniform random walk from ``start`` until it first visits the root r*."""
    generator = make_rng(int(rng)) if isinstance(rng, (int, np.integer)) else rng
    neighbors = tree.neighbors
    node, steps = start, 0
    while node != tree.root:
        for u in generator.random(256):
            options = neighbors[node]
            node = options[int(u * len(options))]
            steps += 1
            if node == tree.root:
                break
    return steps


def sample_hitting_times(tree: LabeledTree, start: int, count: int, seed: int) -> List[int]:
    generator = make_rng(seed)
    return [walk_hitting_time(tree, start, generator) for _ in range(count)]


def expected_exit_time(i: int) -> int:
    """Mean steps for a walk started at the root of a T_i copy to reach its parent: 2|T_i| − 1."""
    return 2**i - 1


def sample_escape_rounds(start: IndexSet, count: int, seed: int, max_rounds: int = 10**8) -> List[int]:
    """τ(M) samples: rounds for the protocol (p = q = 1) to go from M to 𝓛(M); run i uses seed + i."""
    initial = matching_from_index_set(start)
    target = lowered_matching(start)
    net = initial.network
    samples = []
    for i in range(count):
        config = SimConfig(p=1.0, q=1.0, seed=seed + i, max_rounds=max_rounds, stop_rule=StopRule.reach(target))
        trajectory = run(net, initial, config)
        if not trajectory.stopped:
            raise ConfigError(f"escape run {i} hit max_rounds={max_rounds}", {"seed": seed + i})
        samples.append(trajectory.rounds_elapsed)
    return samples


def single_round_successors(start: IndexSet, trials: int, seed: int) -> Counter:
    """Empirical successor counts of 𝓘 after one protocol round with p = q = 1."""
    initial = matching_from_index_set(start)
    net = initial.network
    counts: Counter = Counter()
    for i in range(trials):
        config = SimConfig(p=1.0, q=1.0, seed=seed + i, max_rounds=1, stop_rule=StopRule.fixed_rounds())
        counts[index_set(run(net, initial, config).final)] += 1
    return counts


def ks_statistic(first: Sequence[float], second: Sequence[float]) -> float:
    """Two-sample Kolmogorov–Smirnov statistic."""
    return float(stats.ks_2samp(first, second).statistic)


def count_by_height(n: int, j: int) -> int:
    """N(j): deficit-1 matchings of G_n with height j; N(0) = n, N(j) = (n − j)2^{j−1}."""
    if n < 1 or not 0 <= j <= n - 1:
        raise ConfigError(f"need 0 <= j <= n - 1, got n={n}, j={j}", {"n": n, "j": j})
    if j == 0:
        return n
    return (n - j) * 2 ** (j - 1)


def count_all(n: int) -> int:
    """N = 2^n − 1 deficit-1 matchings of G_n."""
    if n < 1:
        raise ConfigError(f"need n >= 1, got {n}")
    return 2**n - 1


def low_height_fraction(n: int, gamma: float) -> float:
    """N_γ / N with N_γ = Σ_{j < ⌈γn⌉} N(j)."""
    if not 0 < gamma < 1:
        raise ConfigError(f"gamma must lie in (0, 1), got {gamma}", {"gamma": gamma})
    if n < 1:
        raise ConfigError(f"need n >= 1, got {n}")
    cutoff = min(math.ceil(gamma * n), n)
    low = sum(count_by_height(n, j) for j in range(cutoff))
    return low / count_all(n)


def height_table(n: int) -> Dict[int, int]:
    return {j: count_by_height(n, j) for j in range(n)}


def enumerate_heights(n: int, limit: int = DEFAULT_ENUMERATION_LIMIT) -> Dict[int, int]:
    """Brute-force N(j): enumerate the deficit-1 matchings of G_n and group by height."""
    found = enumerate_matchings(
        gen_counterexample(n), predicate=lambda matching: matching.total_deficit == 1, limit=limit, max_deficit=1
    )
    counts = Counter(height(matching) for matching in found)
    return {j: counts.get(j, 0) for j in range(n)}
