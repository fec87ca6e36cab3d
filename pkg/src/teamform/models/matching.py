from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..common import MatchingError
from .network import BipartiteNetwork, Edge, FollowerId, LeaderId

UNMATCHED = 0


class Matching:
    """A many-to-one assignment of followers to leaders of one network.

    Value-semantic: every update returns a new instance. The assignment is kept as a
    tuple indexed by ``follower - 1`` holding the leader id, or ``UNMATCHED`` (0).
    """

    __slots__ = ("_network", "_assignment", "_sizes", "_hash")

    def __init__(self, network: BipartiteNetwork, assignment: Mapping[FollowerId, Optional[LeaderId]]):
        slots = [UNMATCHED] * network.num_followers
        for follower, leader in assignment.items():
            if not 1 <= follower <= network.num_followers:
                raise MatchingError(f"follower {follower} is not in the network", {"follower": follower})
            if leader is None or leader == UNMATCHED:
                continue
            slots[follower - 1] = leader
        self._set(network, tuple(slots))
        self._validate()

    @classmethod
    def _trusted(cls, network: BipartiteNetwork, slots: Tuple[int, ...], sizes: Tuple[int, ...]) -> "Matching":
        instance = cls.__new__(cls)
        instance._network = network
        instance._assignment = slots
        instance._sizes = sizes
        instance._hash = None
        return instance

    def _set(self, network: BipartiteNetwork, slots: Tuple[int, ...]) -> None:
        sizes = [0] * network.num_leaders
        for leader in slots:
            if leader != UNMATCHED:
                if not 1 <= leader <= network.num_leaders:
                    raise MatchingError(f"leader {leader} is not in the network", {"leader": leader})
                sizes[leader - 1] += 1
        self._network = network
        self._assignment = slots
        self._sizes = tuple(sizes)
        self._hash = None

    def _validate(self) -> None:
        net = self._network
        for follower, leader in enumerate(self._assignment, start=1):
            if leader != UNMATCHED and not net.has_edge(leader, follower):
                raise MatchingError(
                    f"pair ({leader}, {follower}) is not an edge of the network",
                    {"leader": leader, "follower": follower},
                )
        for leader, size in enumerate(self._sizes, start=1):
            if size > net.constraint(leader):
                raise MatchingError(
                    f"leader {leader} has {size} followers, above its constraint {net.constraint(leader)}",
                    {"leader": leader},
                )

    @property
    def network(self) -> BipartiteNetwork:
        return self._network

    @property
    def slots(self) -> Tuple[int, ...]:
        """Raw assignment tuple, ``slots[f - 1]`` is the leader of f or 0."""
        return self._assignment

    @property
    def team_sizes(self) -> Tuple[int, ...]:
        return self._sizes

    def leader_of(self, follower: FollowerId) -> Optional[LeaderId]:
        leader = self._assignment[follower - 1]
        return None if leader == UNMATCHED else leader

    def is_matched(self, follower: FollowerId) -> bool:
        return self._assignment[follower - 1] != UNMATCHED

    def team(self, leader: LeaderId) -> FrozenSet[FollowerId]:
        """T_ℓ(M)."""
        return frozenset(f for f, owner in enumerate(self._assignment, start=1) if owner == leader)

    def team_size(self, leader: LeaderId) -> int:
        return self._sizes[leader - 1]

    def teams(self) -> Dict[LeaderId, FrozenSet[FollowerId]]:
        grouped: Dict[LeaderId, set] = {leader: set() for leader in self._network.leaders()}
        for follower, leader in enumerate(self._assignment, start=1):
            if leader != UNMATCHED:
                grouped[leader].add(follower)
        return {leader: frozenset(members) for leader, members in grouped.items()}

    def pairs(self) -> List[Edge]:
        """Matched (leader, follower) pairs sorted by leader then follower."""
        return sorted((leader, f) for f, leader in enumerate(self._assignment, start=1) if leader != UNMATCHED)

    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.pairs())

    def unmatched_followers(self) -> List[FollowerId]:
        return [f for f, leader in enumerate(self._assignment, start=1) if leader == UNMATCHED]

    @property
    def size(self) -> int:
        return sum(self._sizes)

    @property
    def total_deficit(self) -> int:
        """d(M) = Σ_ℓ (c_ℓ − |T_ℓ(M)|)."""
        return self._network.total_constraint - sum(self._sizes)

    @property
    def is_stable(self) -> bool:
        return self.total_deficit == 0

    def with_assignment(self, changes: Mapping[FollowerId, Optional[LeaderId]]) -> "Matching":
        """Return a validated copy with the given followers reassigned (None unmatches)."""
        merged = {f: self.leader_of(f) for f in self._network.followers()}
        merged.update(changes)
        return Matching(self._network, merged)

    def _reassigned(self, changes: Mapping[FollowerId, LeaderId]) -> "Matching":
        # Trusted commit for the dynamics: callers guarantee edges and capacities.
        slots = list(self._assignment)
        sizes = list(self._sizes)
        for follower, leader in changes.items():
            previous = slots[follower - 1]
            if previous != UNMATCHED:
                sizes[previous - 1] -= 1
            slots[follower - 1] = leader
            sizes[leader - 1] += 1
        return Matching._trusted(self._network, tuple(slots), tuple(sizes))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self._assignment == other._assignment and self._network == other._network

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._assignment)
        return self._hash

    def __repr__(self) -> str:
        return f"Matching(pairs={len(self.pairs())}, deficit={self.total_deficit})"


def matching_from_pairs(network: BipartiteNetwork, pairs: Iterable[Edge]) -> Matching:
    """Build a matching from (leader, follower) pairs; a follower may appear once."""
    assignment: Dict[FollowerId, LeaderId] = {}
    for leader, follower in pairs:
        if follower in assignment:
            raise MatchingError(f"follower {follower} appears in more than one pair", {"follower": follower})
        assignment[follower] = leader
    return Matching(network, assignment)


def empty_matching(network: BipartiteNetwork) -> Matching:
    """All followers unmatched, d(M) = Σ c_ℓ."""
    return Matching._trusted(network, (UNMATCHED,) * network.num_followers, (0,) * network.num_leaders)


@dataclass(frozen=True)
class DeficitReport:
    per_leader: Dict[LeaderId, int]
    total: int
    poor_leaders: List[LeaderId]
    unmatched_followers: List[FollowerId]


@dataclass(frozen=True)
class DDPath:
    """Alternating sequence ℓ_0, f_1, ℓ_1, ..., f_k of a deficit-decreasing path."""

    nodes: Tuple[int, ...]

    @property
    def leaders(self) -> Tuple[LeaderId, ...]:
        return self.nodes[0::2]

    @property
    def followers(self) -> Tuple[FollowerId, ...]:
        return self.nodes[1::2]

    @property
    def k(self) -> int:
        return len(self.nodes) // 2

    @property
    def length(self) -> int:
        """Number of edges, 2k − 1."""
        return len(self.nodes) - 1

    def edges(self) -> List[Edge]:
        """Path edges as (leader, follower) pairs in path order."""
        result: List[Edge] = []
        for i in range(1, len(self.nodes)):
            if i % 2 == 1:
                result.append((self.nodes[i - 1], self.nodes[i]))
            else:
                result.append((self.nodes[i], self.nodes[i - 1]))
        return result

    @classmethod
    def of(cls, nodes: Sequence[int]) -> "DDPath":
        return cls(tuple(nodes))

    def __str__(self) -> str:
        return ",".join(("l" if i % 2 == 0 else "f") + str(node) for i, node in enumerate(self.nodes))
