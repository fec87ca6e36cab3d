from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Tuple

from ..common import NetworkError

LeaderId = int
FollowerId = int
Edge = Tuple[LeaderId, FollowerId]


@dataclass(frozen=True)
class BipartiteNetwork:
    """Leaders with team-size constraints, followers, and the edges between them.

    Ids are 1-based on both sides. ``constraints[i - 1]`` is c_ℓ for leader ``i`` and
    ``neighbors[i - 1]`` is the sorted tuple of followers adjacent to leader ``i``.
    Instances are validated on construction and never change afterwards.
    """

    num_leaders: int
    num_followers: int
    constraints: Tuple[int, ...]
    neighbors: Tuple[Tuple[FollowerId, ...], ...]
    _reverse: Tuple[Tuple[LeaderId, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.num_leaders < 1 or self.num_followers < 1:
            raise NetworkError(
                "a network needs at least one leader and one follower",
                {"leaders": self.num_leaders, "followers": self.num_followers},
            )
        if len(self.constraints) != self.num_leaders or len(self.neighbors) != self.num_leaders:
            raise NetworkError("constraints and adjacency must list every leader")

        reverse: List[List[LeaderId]] = [[] for _ in range(self.num_followers)]
        for leader, (limit, adjacent) in enumerate(zip(self.constraints, self.neighbors), start=1):
            if limit < 1:
                raise NetworkError(f"leader {leader} has constraint {limit}; must be >= 1", {"leader": leader})
            if list(adjacent) != sorted(set(adjacent)):
                raise NetworkError(
                    f"adjacency of leader {leader} must be sorted and duplicate-free", {"leader": leader}
                )
            for follower in adjacent:
                if not 1 <= follower <= self.num_followers:
                    raise NetworkError(
                        f"edge ({leader}, {follower}) references a missing follower",
                        {"leader": leader, "follower": follower},
                    )
                reverse[follower - 1].append(leader)
        object.__setattr__(self, "_reverse", tuple(tuple(r) for r in reverse))

    @property
    def n(self) -> int:
        return self.num_leaders

    @property
    def m(self) -> int:
        return self.num_followers

    def leaders(self) -> range:
        return range(1, self.num_leaders + 1)

    def followers(self) -> range:
        return range(1, self.num_followers + 1)

    def constraint(self, leader: LeaderId) -> int:
        return self.constraints[leader - 1]

    def leader_neighbors(self, leader: LeaderId) -> Tuple[FollowerId, ...]:
        """N_ℓ, sorted."""
        return self.neighbors[leader - 1]

    def follower_neighbors(self, follower: FollowerId) -> Tuple[LeaderId, ...]:
        return self._reverse[follower - 1]

    def degree(self, leader: LeaderId) -> int:
        return len(self.neighbors[leader - 1])

    def has_edge(self, leader: LeaderId, follower: FollowerId) -> bool:
        return (leader, follower) in self.edge_set

    def edges(self) -> Iterator[Edge]:
        for leader, adjacent in enumerate(self.neighbors, start=1):
            for follower in adjacent:
                yield leader, follower

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges())

    @cached_property
    def num_edges(self) -> int:
        return sum(len(adjacent) for adjacent in self.neighbors)

    @cached_property
    def max_degree(self) -> int:
        """Δ = max over leaders of |N_ℓ|."""
        return max(len(adjacent) for adjacent in self.neighbors)

    @cached_property
    def quotas(self) -> Tuple[int, ...]:
        """min(c_ℓ, |N_ℓ|) per leader: the team size at which a leader stops recruiting."""
        return tuple(min(c, len(adj)) for c, adj in zip(self.constraints, self.neighbors))

    def quota(self, leader: LeaderId) -> int:
        return self.quotas[leader - 1]

    @cached_property
    def total_constraint(self) -> int:
        return sum(self.constraints)

    def __repr__(self) -> str:
        return f"BipartiteNetwork(leaders={self.num_leaders}, followers={self.num_followers}, edges={self.num_edges})"


def build_network(
    n: int,
    m: int,
    edges: Iterable[Edge],
    constraints: Mapping[LeaderId, int],
) -> BipartiteNetwork:
    """Validate raw ids and build an immutable network.

    Raises:
        NetworkError: on out-of-range ids, duplicate edges, or a missing/zero constraint.
    """
    if n < 1 or m < 1:
        raise NetworkError("a network needs at least one leader and one follower", {"leaders": n, "followers": m})

    adjacency: Dict[LeaderId, List[FollowerId]] = {leader: [] for leader in range(1, n + 1)}
    seen = set()
    for leader, follower in edges:
        if not 1 <= leader <= n:
            raise NetworkError(f"edge ({leader}, {follower}) references leader {leader} of {n}", {"leader": leader})
        if not 1 <= follower <= m:
            raise NetworkError(
                f"edge ({leader}, {follower}) references follower {follower} of {m}", {"follower": follower}
            )
        if (leader, follower) in seen:
            raise NetworkError(f"duplicate edge ({leader}, {follower})", {"leader": leader, "follower": follower})
        seen.add((leader, follower))
        adjacency[leader].append(follower)

    extra = sorted(set(constraints) - set(adjacency))
    if extra:
        raise NetworkError(f"constraint given for unknown leader {extra[0]}", {"leader": extra[0]})
    limits = []
    for leader in range(1, n + 1):
        if leader not in constraints:
            raise NetworkError(f"missing constraint for leader {leader}", {"leader": leader})
        if constraints[leader] < 1:
            raise NetworkError(
                f"leader {leader} has constraint {constraints[leader]}; must be >= 1", {"leader": leader}
            )
        limits.append(int(constraints[leader]))

    return BipartiteNetwork(
        num_leaders=n,
        num_followers=m,
        constraints=tuple(limits),
        neighbors=tuple(tuple(sorted(adjacency[leader])) for leader in range(1, n + 1)),
    )
