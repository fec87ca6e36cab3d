"""The two-stage round protocol: leaders send requests, then followers answer.

Both stages read the matching as it stood at the beginning of the round and every
change is committed at once at the end of the follower stage. Random draws happen in
a fixed order so that a seed fully determines a run:

1. leaders in ascending id order: activation draw, then (if active) the target draw;
2. followers in ascending id order: one acceptance draw per request in ascending
   requesting-leader order, then (if any request survived) the uniform pick.
"""

import csv
import io
import logging
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .common import ConfigError, DynamicsError
from .models.matching import UNMATCHED, Matching
from .models.network import BipartiteNetwork, FollowerId, LeaderId
from .models.simulation import RoundRecord, RoundRequests, SimConfig, StopRule, Trajectory

logger = logging.getLogger(__name__)

TRAJECTORY_HEADER = ["round", "deficit", "poor_leaders", "matched_followers"]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def leader_stage(net: BipartiteNetwork, matching: Matching, p: float, rng: np.random.Generator) -> RoundRequests:
    """Request step of every leader against the round-start snapshot.

    A leader with |T_ℓ| < min(c_ℓ, |N_ℓ|) activates with probability p and requests one
    follower: uniformly among its unmatched neighbours if any, else uniformly among
    N_ℓ ∖ T_ℓ.
    """
    requests = RoundRequests()
    slots = matching.slots
    sizes = matching.team_sizes
    for index, quota in enumerate(net.quotas):
        if sizes[index] >= quota:
            continue
        if rng.random() >= p:
            continue
        leader = index + 1
        adjacent = net.neighbors[index]
        candidates = [f for f in adjacent if slots[f - 1] == UNMATCHED]
        if not candidates:
            candidates = [f for f in adjacent if slots[f - 1] != leader]
        requests.add(leader, candidates[int(rng.integers(len(candidates)))])
    return requests


def _resolve(
    matching: Matching, requests: RoundRequests, q: float, q_matched: float, rng: np.random.Generator
) -> Dict[FollowerId, LeaderId]:
    slots = matching.slots
    moves: Dict[FollowerId, LeaderId] = {}
    for follower in sorted(requests.by_follower):
        acceptance = q_matched if slots[follower - 1] != UNMATCHED else q
        survivors = [leader for leader in sorted(requests.by_follower[follower]) if rng.random() < acceptance]
        if not survivors:
            continue
        chosen = survivors[int(rng.integers(len(survivors)))]
        if chosen != slots[follower - 1]:
            moves[follower] = chosen
    return moves


def follower_stage(
    net: BipartiteNetwork,
    matching: Matching,
    requests: RoundRequests,
    q: float,
    rng: np.random.Generator,
    q_matched: Optional[float] = None,
) -> Matching:
    """Answer step: each request survives with probability q, one survivor is picked
    uniformly, and all moves are applied simultaneously."""
    if matching.network is not net and matching.network != net:
        raise DynamicsError("matching belongs to a different network")
    moves = _resolve(matching, requests, q, q if q_matched is None else q_matched, rng)
    if not moves:
        return matching
    return matching._reassigned(moves)


def _record(t: int, matching: Matching) -> RoundRecord:
    net = matching.network
    sizes = matching.team_sizes
    poor = sum(1 for c, size in zip(net.constraints, sizes) if size < c)
    return RoundRecord(t, matching.total_deficit, poor, sum(sizes))


def _check_round(before: Matching, after: Matching, requests: RoundRequests, t: int) -> None:
    if after.total_deficit > before.total_deficit:
        raise DynamicsError(
            f"deficit increased in round {t}",
            {"round": t, "before": before.total_deficit, "after": after.total_deficit},
        )
    senders = requests.senders()
    if len(senders) != len(set(senders)):
        raise DynamicsError(f"a leader sent more than one request in round {t}", {"round": t})
    constraints = after.network.constraints
    for index, size in enumerate(after.team_sizes):
        if size > constraints[index]:
            raise DynamicsError(f"leader {index + 1} exceeded its constraint in round {t}", {"round": t})


def run(
    net: BipartiteNetwork,
    initial: Matching,
    config: SimConfig,
    observer: Optional[Callable[[int, Matching], None]] = None,
    warn_truncated: bool = True,
) -> Trajectory:
    """Iterate rounds until the stop rule fires at a round start or max_rounds elapse.

    ``records[t]`` describes M(t) for t = 0..rounds_elapsed; ``observer(t, M(t))`` is
    called for the same matchings. Callers that use max_rounds as an observation window
    pass ``warn_truncated=False`` so truncation is logged at DEBUG.
    """
    if initial.network != net:
        raise DynamicsError("initial matching belongs to a different network")
    rng = make_rng(config.seed)
    rule = config.stop_rule
    matching = initial
    records = [_record(0, matching)]
    if observer is not None:
        observer(0, matching)
    t = 0
    reason = "max_rounds"
    q_matched = config.acceptance_matched
    while True:
        if rule.fires(matching):
            reason = "stop_rule"
            break
        if t >= config.max_rounds:
            break
        requests = leader_stage(net, matching, config.p, rng)
        if requests:
            moves = _resolve(matching, requests, config.q, q_matched, rng)
            following = matching._reassigned(moves) if moves else matching
        else:
            following = matching
        if config.check_invariants:
            _check_round(matching, following, requests, t)
        matching = following
        t += 1
        records.append(_record(t, matching))
        if observer is not None:
            observer(t, matching)

    if reason == "max_rounds" and rule.kind != "fixed_rounds" and warn_truncated:
        logger.warning("run truncated rounds=%d stop_rule=%s seed=%d", t, rule.describe(), config.seed)
    else:
        logger.debug("run finished rounds=%d reason=%s seed=%d", t, reason, config.seed)
    return Trajectory(
        records=records,
        final=matching,
        rounds_elapsed=t,
        stop_reason=reason,  # type: ignore[arg-type]
        seed=config.seed,
        stop_rule=rule.describe(),
    )


def first_round(trajectory: Trajectory, predicate: Callable[[RoundRecord], bool]) -> Optional[int]:
    for record in trajectory.records:
        if predicate(record):
            return record.round
    return None


def tau(trajectory: Trajectory, x: float, m: int) -> Optional[int]:
    """τ(x) = min{t ≥ 0 : d(M(t)) < x·m}, or None if never reached in the record."""
    if not 0 < x <= 1:
        raise ConfigError(f"tau needs 0 < x <= 1, got {x}")
    return first_round(trajectory, lambda record: record.deficit < x * m)


def tau_best(trajectory: Trajectory, eps: float, m: int, d_star: int) -> Optional[int]:
    """First round whose matching is a (1 − ε)-approximate best matching."""
    return first_round(trajectory, lambda record: record.deficit - d_star < eps * m)


def theorem1_bound(m: int, delta: int, p: float, q: float, eps: float) -> Tuple[float, float]:
    """Round bound c⌊1/ε⌋(Δ/pq)^{⌊1/ε⌋}m and success probability 1 − e^{−cmε²/2},
    with the smallest admissible c = 1 + 1/(m(1 − ε))."""
    if not 0 < eps < 1:
        raise ConfigError(f"eps must lie in (0, 1), got {eps}", {"eps": eps})
    if m < 1 or delta < 1:
        raise ConfigError("m and delta must be positive")
    if not (0 < p <= 1 and 0 < q <= 1):
        raise ConfigError("p and q must lie in (0, 1]")
    phases = math.floor(1 / eps)
    c = 1 + 1 / (m * (1 - eps))
    rounds = c * phases * (delta / (p * q)) ** phases * m
    probability = 1 - math.exp(-c * m * eps * eps / 2)
    return rounds, probability


def deficit_drop_probability(
    net: BipartiteNetwork, initial: Matching, config: SimConfig, trials: int
) -> Tuple[float, float, float]:
    """Fraction of trials whose deficit drops within ⌊1/ε′⌋ rounds, ε′ = d(M)/m.

    Returns (estimate, lower bound (pq/Δ)^{⌊1/ε′⌋}, binomial standard deviation at the bound).
    Trial ``i`` uses seed ``config.seed + i``.
    """
    start = initial.total_deficit
    if start == 0:
        raise ConfigError("the initial matching is already stable")
    window = math.floor(net.num_followers / start)
    hits = 0
    for i in range(trials):
        trial = SimConfig(
            p=config.p,
            q=config.q,
            seed=config.seed + i,
            max_rounds=window,
            stop_rule=StopRule("deficit_below", x=start / net.num_followers),
            q_matched=config.q_matched,
        )
        if run(net, initial, trial, warn_truncated=False).stopped:
            hits += 1
    bound = (config.p * config.q / net.max_degree) ** window
    sigma = math.sqrt(bound * (1 - bound) / trials)
    return hits / trials, bound, sigma


def trajectory_to_csv(trajectory: Trajectory) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TRAJECTORY_HEADER)
    writer.writerows(trajectory.records)
    buffer.write(
        f"# stop_reason={trajectory.stop_reason} rounds={trajectory.rounds_elapsed} "
        f"seed={trajectory.seed} stop_rule={trajectory.stop_rule} prng={trajectory.prng}\n"
    )
    return buffer.getvalue()


def write_trajectory_csv(trajectory: Trajectory, path: Union[str, Path]) -> None:
    Path(path).write_text(trajectory_to_csv(trajectory), encoding="utf-8")


def read_trajectory_deficits(text: str) -> List[int]:
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    reader = csv.DictReader(rows)
    return [int(row["deficit"]) for row in reader]
