"""Deficits, deficit-decreasing paths and the matching text format."""

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Literal, Optional, Union

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from .common import MatchingError, ParseError
from .models.matching import DDPath, DeficitReport, Matching, empty_matching, matching_from_pairs
from .models.network import BipartiteNetwork, Edge, LeaderId
from .utils.textformat import iter_records, parse_int, read_lines

logger = logging.getLogger(__name__)

ApproxStatus = Literal["stable", "approx_stable", "approx_best", "neither"]

__all__ = [
    "ApproxStatus",
    "DisjointPathFamily",
    "all_dd_paths",
    "approx_status",
    "deficit",
    "dumps_matching",
    "empty_matching",
    "load_matching",
    "matching_from_pairs",
    "max_follower_disjoint_dd_paths",
    "parse_matching",
    "save_matching",
    "shortest_dd_path",
    "solve_dd_path",
    "symmetric_difference",
    "validate_dd_path",
]


def deficit(matching: Matching) -> DeficitReport:
    net = matching.network
    per_leader = {
        leader: net.constraint(leader) - size for leader, size in zip(net.leaders(), matching.team_sizes)
    }
    return DeficitReport(
        per_leader=per_leader,
        total=sum(per_leader.values()),
        poor_leaders=[leader for leader, value in per_leader.items() if value > 0],
        unmatched_followers=matching.unmatched_followers(),
    )


def _poor(matching: Matching) -> List[LeaderId]:
    net = matching.network
    return [leader for leader in net.leaders() if matching.team_size(leader) < net.constraint(leader)]


def shortest_dd_path(matching: Matching) -> Optional[DDPath]:
    """Minimum-length deficit-decreasing path over all poor leaders, or None.

    Distances to the nearest unmatched follower are found by a breadth-first search
    run backwards from the unmatched followers over the alternating graph (non-matching
    edges leave leaders, matching edges leave followers). Ties are broken towards the
    lexicographically smallest node sequence.
    """
    net = matching.network
    slots = matching.slots
    to_leader: Dict[int, int] = {}
    to_follower: Dict[int, int] = {}
    queue: deque = deque()
    for follower in matching.unmatched_followers():
        to_follower[follower] = 0
        queue.append(("f", follower))

    while queue:
        side, node = queue.popleft()
        if side == "f":
            for leader in net.follower_neighbors(node):
                if slots[node - 1] != leader and leader not in to_leader:
                    to_leader[leader] = to_follower[node] + 1
                    queue.append(("l", leader))
        else:
            for follower in net.leader_neighbors(node):
                if slots[follower - 1] == node and follower not in to_follower:
                    to_follower[follower] = to_leader[node] + 1
                    queue.append(("f", follower))

    reachable = [leader for leader in _poor(matching) if leader in to_leader]
    if not reachable:
        return None
    best = min(to_leader[leader] for leader in reachable)
    leader = min(leader for leader in reachable if to_leader[leader] == best)

    nodes = [leader]
    remaining = best
    while True:
        follower = min(
            f
            for f in net.leader_neighbors(leader)
            if slots[f - 1] != leader and to_follower.get(f) == remaining - 1
        )
        nodes.append(follower)
        remaining -= 1
        if remaining == 0:
            return DDPath(tuple(nodes))
        leader = slots[follower - 1]
        nodes.append(leader)
        remaining -= 1


def all_dd_paths(matching: Matching) -> Iterator[DDPath]:
    """Every cycle-free deficit-decreasing path relative to the matching (small networks only)."""
    net = matching.network
    slots = matching.slots

    def extend(nodes: List[int], leaders: set, followers: set) -> Iterator[DDPath]:
        leader = nodes[-1]
        for follower in net.leader_neighbors(leader):
            owner = slots[follower - 1]
            if owner == leader or follower in followers:
                continue
            if owner == 0:
                yield DDPath(tuple(nodes + [follower]))
            elif owner not in leaders:
                yield from extend(nodes + [follower, owner], leaders | {owner}, followers | {follower})

    for start in _poor(matching):
        yield from extend([start], {start}, set())


def validate_dd_path(matching: Matching, path: DDPath) -> None:
    """Raise MatchingError unless the path is deficit-decreasing relative to the matching."""
    net = matching.network
    nodes = path.nodes
    if len(nodes) < 2 or len(nodes) % 2 != 0:
        raise MatchingError("a deficit-decreasing path alternates leader, follower and ends at a follower")
    leaders, followers = path.leaders, path.followers
    if len(set(leaders)) != len(leaders) or len(set(followers)) != len(followers):
        raise MatchingError("path repeats a node", {"path": str(path)})
    for leader in leaders:
        if not 1 <= leader <= net.num_leaders:
            raise MatchingError(f"leader {leader} is not in the network", {"leader": leader})
    for follower in followers:
        if not 1 <= follower <= net.num_followers:
            raise MatchingError(f"follower {follower} is not in the network", {"follower": follower})
    first = leaders[0]
    if matching.team_size(first) >= net.constraint(first):
        raise MatchingError(f"first leader {first} is not poor", {"leader": first})
    if matching.is_matched(followers[-1]):
        raise MatchingError(f"last follower {followers[-1]} is matched", {"follower": followers[-1]})
    for i, follower in enumerate(followers):
        if not net.has_edge(leaders[i], follower):
            raise MatchingError(f"({leaders[i]}, {follower}) is not an edge", {"path": str(path)})
        if matching.leader_of(follower) == leaders[i]:
            raise MatchingError(f"({leaders[i]}, {follower}) is already matched", {"path": str(path)})
        if i + 1 < len(leaders) and matching.leader_of(follower) != leaders[i + 1]:
            raise MatchingError(f"({leaders[i + 1]}, {follower}) is not a matching edge", {"path": str(path)})


def solve_dd_path(matching: Matching, path: DDPath) -> Matching:
    """Flip every edge of the path: f_i joins ℓ_{i−1}; deficit drops by one."""
    validate_dd_path(matching, path)
    changes = {follower: path.leaders[i] for i, follower in enumerate(path.followers)}
    solved = matching.with_assignment(changes)
    logger.debug("solve_dd_path length=%d deficit=%d", path.length, solved.total_deficit)
    return solved


def symmetric_difference(first: Matching, second: Matching) -> FrozenSet[Edge]:
    if first.network != second.network:
        raise MatchingError("matchings belong to different networks")
    return first.edge_set() ^ second.edge_set()


@dataclass(frozen=True)
class DisjointPathFamily:
    count: int
    paths: List[DDPath]
    starts: Dict[LeaderId, int]


def max_follower_disjoint_dd_paths(matching: Matching, stable: Matching) -> DisjointPathFamily:
    """Largest follower-disjoint family of deficit-decreasing paths inside M ⊕ N.

    Poor leaders are sources with capacity d_ℓ(M); followers are split into an
    in/out pair of capacity 1; non-matching edges of N ∖ M run leader → follower and
    matching edges of M ∖ N run follower → leader; unmatched followers drain to the
    sink. A maximum flow is decomposed into one witness path per unit.
    """
    if matching.network != stable.network:
        raise MatchingError("matchings belong to different networks")
    if not stable.is_stable:
        raise MatchingError("reference matching is not stable", {"deficit": stable.total_deficit})

    report = deficit(matching)
    own = matching.edge_set()
    other = stable.edge_set()
    graph = nx.DiGraph()
    graph.add_node("s")
    graph.add_node("t")
    for leader in report.poor_leaders:
        graph.add_edge("s", ("l", leader), capacity=report.per_leader[leader])
    for leader, follower in other - own:
        graph.add_edge(("l", leader), ("fi", follower), capacity=1)
        graph.add_edge(("fi", follower), ("fo", follower), capacity=1)
        if not matching.is_matched(follower):
            graph.add_edge(("fo", follower), "t", capacity=1)
    for leader, follower in own - other:
        graph.add_edge(("fo", follower), ("l", leader))

    value, flow = nx.maximum_flow(graph, "s", "t", flow_func=edmonds_karp)
    paths = _decompose(flow, report.poor_leaders)
    for path in paths:
        validate_dd_path(matching, path)
    starts: Dict[LeaderId, int] = {}
    for path in paths:
        starts[path.leaders[0]] = starts.get(path.leaders[0], 0) + 1
    logger.debug("disjoint_paths value=%d deficit=%d", value, report.total)
    return DisjointPathFamily(count=int(value), paths=paths, starts=starts)


def _decompose(flow: Dict, sources: List[LeaderId]) -> List[DDPath]:
    residual = {u: {v: f for v, f in targets.items() if f > 0} for u, targets in flow.items()}

    def step(node) -> object:
        targets = residual[node]
        nxt = min(targets, key=lambda v: (isinstance(v, str), v))
        targets[nxt] -= 1
        if targets[nxt] == 0:
            del targets[nxt]
        return nxt

    paths = []
    for leader in sources:
        while residual["s"].get(("l", leader), 0) > 0:
            residual["s"][("l", leader)] -= 1
            if residual["s"][("l", leader)] == 0:
                del residual["s"][("l", leader)]
            nodes: List[int] = [leader]
            node: object = ("l", leader)
            while True:
                follower_in = step(node)
                follower_out = step(follower_in)
                follower = follower_in[1]  # type: ignore[index]
                nodes.append(follower)
                nxt = step(follower_out)
                if nxt == "t":
                    break
                owner = nxt[1]  # type: ignore[index]
                if owner in nodes[0::2]:
                    # Drop the loop that returned to an earlier leader.
                    cut = nodes[0::2].index(owner) * 2
                    nodes = nodes[: cut + 1]
                else:
                    nodes.append(owner)
                node = nxt
            paths.append(DDPath(tuple(nodes)))
    return paths


def approx_status(matching: Matching, eps: Union[float, Fraction], d_star: int) -> ApproxStatus:
    """Classify with the strict inequalities d(M) < εm (stable case) and d(M) − d* < εm."""
    if not 0 <= eps <= 1:
        raise MatchingError(f"eps must lie in [0, 1], got {eps}")
    total = matching.total_deficit
    budget = eps * matching.network.num_followers
    if total == 0:
        return "stable"
    if d_star == 0 and total < budget:
        return "approx_stable"
    if total - d_star < budget:
        return "approx_best"
    return "neither"


def dumps_matching(matching: Matching) -> str:
    return "".join(f"match {leader} {follower}\n" for leader, follower in matching.pairs())


def parse_matching(net: BipartiteNetwork, lines: Iterable[str]) -> Matching:
    pairs: List[Edge] = []
    seen = set()
    for number, tokens in iter_records(lines):
        if tokens[0] != "match" or len(tokens) != 3:
            raise ParseError("expected 'match <leader_id> <follower_id>'", line=number)
        pair = (parse_int(tokens[1], number, "leader id"), parse_int(tokens[2], number, "follower id"))
        if pair in seen:
            raise ParseError(f"duplicate pair {pair}", line=number)
        seen.add(pair)
        pairs.append(pair)
    return matching_from_pairs(net, pairs)


def load_matching(net: BipartiteNetwork, path: Union[str, Path]) -> Matching:
    return parse_matching(net, read_lines(path))


def save_matching(matching: Matching, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_matching(matching), encoding="utf-8")
