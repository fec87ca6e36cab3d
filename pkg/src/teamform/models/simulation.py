from dataclasses import dataclass, field
from typing import Dict, List, Literal, NamedTuple, Optional

from ..common import ConfigError
from .matching import Matching
from .network import FollowerId, LeaderId

PRNG_NAME = "numpy.PCG64"

StopKind = Literal["stable", "deficit_below", "fixed_rounds", "approx_best", "reach"]


@dataclass(frozen=True)
class StopRule:
    """When a run stops, tested against M(t) at the beginning of every round.

    - ``stable``: d(M) = 0
    - ``deficit_below``: d(M) < x·m
    - ``fixed_rounds``: never fires; the run lasts ``max_rounds``
    - ``approx_best``: d(M) − d* < ε·m
    - ``reach``: M(t) equals ``target``
    """

    kind: StopKind = "stable"
    x: Optional[float] = None
    d_star: int = 0
    target: Optional[Matching] = None

    @classmethod
    def stable(cls) -> "StopRule":
        return cls("stable")

    @classmethod
    def deficit_below(cls, x: float) -> "StopRule":
        if not 0 < x <= 1:
            raise ConfigError(f"deficit_below needs 0 < x <= 1, got {x}")
        return cls("deficit_below", x=x)

    @classmethod
    def fixed_rounds(cls) -> "StopRule":
        return cls("fixed_rounds")

    @classmethod
    def approx_best(cls, eps: float, d_star: int) -> "StopRule":
        if not 0 < eps <= 1:
            raise ConfigError(f"approx_best needs 0 < eps <= 1, got {eps}")
        return cls("approx_best", x=eps, d_star=d_star)

    @classmethod
    def reach(cls, target: Matching) -> "StopRule":
        return cls("reach", target=target)

    def fires(self, matching: Matching) -> bool:
        if self.kind == "stable":
            return matching.total_deficit == 0
        if self.kind == "deficit_below":
            return matching.total_deficit < self.x * matching.network.num_followers  # type: ignore[operator]
        if self.kind == "approx_best":
            return matching.total_deficit - self.d_star < self.x * matching.network.num_followers  # type: ignore
        if self.kind == "reach":
            return matching == self.target
        return False

    def describe(self) -> str:
        if self.kind in ("deficit_below", "approx_best"):
            return f"{self.kind}({self.x})"
        return self.kind


@dataclass(frozen=True)
class SimConfig:
    """Protocol parameters for one run.

    ``p`` is the leader activation probability; ``q`` the per-request acceptance
    probability; ``q_matched`` optionally overrides ``q`` for requests reaching
    followers that are matched at the start of the round.
    """

    p: float = 1.0
    q: float = 1.0
    seed: int = 0
    max_rounds: int = 10**8
    stop_rule: StopRule = field(default_factory=StopRule.stable)
    q_matched: Optional[float] = None
    check_invariants: bool = True

    def __post_init__(self) -> None:
        for name in ("p", "q"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ConfigError(f"{name} must lie in (0, 1], got {value}", {name: value})
        if self.q_matched is not None and not 0 < self.q_matched <= 1:
            raise ConfigError(f"q_matched must lie in (0, 1], got {self.q_matched}")
        if self.max_rounds < 0:
            raise ConfigError(f"max_rounds must be >= 0, got {self.max_rounds}")

    @property
    def acceptance_matched(self) -> float:
        return self.q if self.q_matched is None else self.q_matched


class RoundRecord(NamedTuple):
    round: int
    deficit: int
    poor_leaders: int
    matched_followers: int


@dataclass
class RoundRequests:
    """Matching requests of one round, grouped by target follower."""

    by_follower: Dict[FollowerId, List[LeaderId]] = field(default_factory=dict)

    def add(self, leader: LeaderId, follower: FollowerId) -> None:
        self.by_follower.setdefault(follower, []).append(leader)

    def senders(self) -> List[LeaderId]:
        return sorted(leader for leaders in self.by_follower.values() for leader in leaders)

    def __len__(self) -> int:
        return sum(len(leaders) for leaders in self.by_follower.values())

    def __bool__(self) -> bool:
        return bool(self.by_follower)


StopReason = Literal["stop_rule", "max_rounds"]


@dataclass
class Trajectory:
    """Per-round record of a run; ``records[t]`` describes M(t) at the start of round t."""

    records: List[RoundRecord]
    final: Matching
    rounds_elapsed: int
    stop_reason: StopReason
    seed: int
    stop_rule: str = "stable"
    prng: str = PRNG_NAME

    @property
    def deficits(self) -> List[int]:
        return [record.deficit for record in self.records]

    @property
    def stopped(self) -> bool:
        return self.stop_reason == "stop_rule"
