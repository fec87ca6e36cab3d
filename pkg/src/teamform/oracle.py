"""Exact best matchings by maximum flow, and a brute-force matching enumerator."""

import logging
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from .common import EnumerationLimitError
from .models.matching import UNMATCHED, Matching, matching_from_pairs
from .models.network import BipartiteNetwork

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_LIMIT = 2_000_000

MatchingPredicate = Callable[[Matching], bool]


@dataclass(frozen=True)
class OracleResult:
    d_star: int
    witness: Matching
    stable_exists: bool


def best_matching(net: BipartiteNetwork) -> OracleResult:
    """Best matching via max flow: source → leader (c_ℓ), leader → follower (1), follower → sink (1).

    d* = Σ c_ℓ − F where F is the maximum flow value.
    """
    graph = nx.DiGraph()
    graph.add_node("s")
    graph.add_node("t")
    for leader in net.leaders():
        graph.add_edge("s", ("l", leader), capacity=net.constraint(leader))
    for leader, follower in net.edges():
        graph.add_edge(("l", leader), ("f", follower), capacity=1)
    for follower in net.followers():
        graph.add_edge(("f", follower), "t", capacity=1)

    value, flow = nx.maximum_flow(graph, "s", "t", flow_func=edmonds_karp)
    pairs = [
        (leader, follower)
        for leader, follower in net.edges()
        if flow[("l", leader)].get(("f", follower), 0) >= 1
    ]
    witness = matching_from_pairs(net, pairs)
    d_star = net.total_constraint - int(value)
    logger.debug("best_matching leaders=%d followers=%d d_star=%d", net.n, net.m, d_star)
    return OracleResult(d_star=d_star, witness=witness, stable_exists=d_star == 0)


def stable_exists(net: BipartiteNetwork) -> bool:
    return best_matching(net).d_star == 0


def _walk(
    net: BipartiteNetwork, limit: int, max_deficit: Optional[int]
) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    # Depth-first over followers: each one stays unmatched or joins a neighbour with room.
    n, m = net.num_leaders, net.num_followers
    total = net.total_constraint
    # remaining[l][j]: neighbours of leader l+1 among followers j+1..m
    remaining = [[0] * (m + 1) for _ in range(n)]
    for leader in range(n):
        adjacent = set(net.leader_neighbors(leader + 1))
        for j in range(m - 1, -1, -1):
            remaining[leader][j] = remaining[leader][j + 1] + (1 if j + 1 in adjacent else 0)

    slots = [UNMATCHED] * m
    sizes = [0] * n
    visited = 0

    def lower_bound(j: int, matched: int) -> int:
        by_followers = total - matched - (m - j)
        by_leaders = 0
        for leader in range(n):
            missing = net.constraints[leader] - sizes[leader] - remaining[leader][j]
            if missing > 0:
                by_leaders += missing
        return max(by_followers, by_leaders)

    def descend(j: int, matched: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        nonlocal visited
        if max_deficit is not None and lower_bound(j, matched) > max_deficit:
            return
        if j == m:
            visited += 1
            if visited > limit:
                raise EnumerationLimitError(
                    f"more than {limit} matchings enumerated", {"limit": limit, "leaders": n, "followers": m}
                )
            yield tuple(slots), tuple(sizes)
            return
        yield from descend(j + 1, matched)
        for leader in net.follower_neighbors(j + 1):
            if sizes[leader - 1] < net.constraints[leader - 1]:
                slots[j] = leader
                sizes[leader - 1] += 1
                yield from descend(j + 1, matched + 1)
                sizes[leader - 1] -= 1
                slots[j] = UNMATCHED

    yield from descend(0, 0)


def enumerate_matchings(
    net: BipartiteNetwork,
    predicate: Optional[MatchingPredicate] = None,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    max_deficit: Optional[int] = None,
) -> List[Matching]:
    """Every matching of the network satisfying ``predicate``.

    With ``max_deficit`` set, branches that cannot finish at deficit ≤ max_deficit are
    pruned. ``limit`` caps the number of matchings visited.

    Raises:
        EnumerationLimitError: when more than ``limit`` matchings are visited.
    """
    found = []
    for slots, sizes in _walk(net, limit, max_deficit):
        candidate = Matching._trusted(net, slots, sizes)
        if predicate is None or predicate(candidate):
            found.append(candidate)
    return found


def min_deficit_by_enumeration(net: BipartiteNetwork, limit: int = DEFAULT_ENUMERATION_LIMIT) -> int:
    total = net.total_constraint
    return min(total - sum(sizes) for _, sizes in _walk(net, limit, None))
