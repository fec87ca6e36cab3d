"""Network generators and the line-oriented network text format.

Format (UTF-8, ``#`` starts a comment)::

    leaders 6
    followers 6
    constraint 1 1
    edge 1 1
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Literal, Optional, Set, Tuple, Union

import numpy as np

from .common import NetworkError, ParseError
from .models.network import BipartiteNetwork, Edge, build_network
from .utils.textformat import iter_records, parse_int, read_lines

logger = logging.getLogger(__name__)

ConstraintRule = Union[Literal["capped_ratio"], Tuple[Literal["fixed"], int]]


@lru_cache(maxsize=64)
def gen_counterexample(n: int) -> BipartiteNetwork:
    """G_n: leader ℓ_i is adjacent to f_1..f_i, every constraint is 1."""
    if n < 1:
        raise NetworkError(f"G_n needs n >= 1, got {n}", {"n": n})
    edges = [(i, j) for i in range(1, n + 1) for j in range(1, i + 1)]
    return build_network(n, n, edges, {i: 1 for i in range(1, n + 1)})


def parse_constraint_rule(text: str) -> ConstraintRule:
    """``capped_ratio`` or ``fixed:<c>``."""
    if text == "capped_ratio":
        return "capped_ratio"
    if text.startswith("fixed:"):
        try:
            value = int(text.split(":", 1)[1])
        except ValueError:
            raise NetworkError(f"bad constraint rule {text!r}")
        if value < 1:
            raise NetworkError(f"fixed constraint must be >= 1, got {value}")
        return ("fixed", value)
    raise NetworkError(f"unknown constraint rule {text!r}; use capped_ratio or fixed:<c>")


def _sample_adjacency(
    n: int, m: int, rho: float, rng: np.random.Generator, max_degree: Optional[int]
) -> List[List[int]]:
    mask = rng.random((n, m)) < rho
    adjacency = []
    for row in mask:
        followers = np.flatnonzero(row) + 1
        if max_degree is not None and len(followers) > max_degree:
            followers = np.sort(rng.choice(followers, size=max_degree, replace=False))
        adjacency.append([int(f) for f in followers])
    return adjacency


def gen_random(
    n: int,
    m: int,
    rho: float,
    seed: int,
    constraint_rule: ConstraintRule = "capped_ratio",
    max_degree: Optional[int] = None,
    resample_limit: int = 100,
) -> BipartiteNetwork:
    """Seeded G(n, m, ρ): every leader-follower edge present independently with probability ρ.

    Under ``capped_ratio`` each c_ℓ = min(⌊m/n⌋, |N_ℓ|) and draws with an isolated
    leader are resampled, at most ``resample_limit`` times. Under ``("fixed", c)``
    every c_ℓ = c and isolated leaders are kept.
    """
    if not 0 <= rho <= 1:
        raise NetworkError(f"rho must lie in [0, 1], got {rho}", {"rho": rho})
    if n < 1 or m < 1:
        raise NetworkError("a network needs at least one leader and one follower", {"leaders": n, "followers": m})
    if max_degree is not None and max_degree < 1:
        raise NetworkError(f"max_degree must be >= 1, got {max_degree}")

    rng = np.random.default_rng(seed)
    if constraint_rule == "capped_ratio":
        ratio = m // n
        if ratio < 1:
            raise NetworkError(f"capped_ratio needs m >= n, got n={n}, m={m}", {"leaders": n, "followers": m})
        for attempt in range(resample_limit + 1):
            adjacency = _sample_adjacency(n, m, rho, rng, max_degree)
            if all(adjacency):
                constraints = {i: min(ratio, len(adj)) for i, adj in enumerate(adjacency, start=1)}
                return _assemble(n, m, adjacency, constraints)
            logger.debug("gen_random resample attempt=%d reason=isolated_leader", attempt)
        raise NetworkError(
            f"no draw without isolated leaders after {resample_limit} resamples",
            {"leaders": n, "followers": m, "rho": rho},
        )

    kind, value = constraint_rule
    if kind != "fixed":
        raise NetworkError(f"unknown constraint rule {constraint_rule!r}")
    adjacency = _sample_adjacency(n, m, rho, rng, max_degree)
    return _assemble(n, m, adjacency, {i: value for i in range(1, n + 1)})


def _assemble(n: int, m: int, adjacency: List[List[int]], constraints: Dict[int, int]) -> BipartiteNetwork:
    edges = [(leader, f) for leader, followers in enumerate(adjacency, start=1) for f in followers]
    return build_network(n, m, edges, constraints)


def dumps_network(net: BipartiteNetwork) -> str:
    lines = [f"leaders {net.num_leaders}", f"followers {net.num_followers}"]
    lines += [f"constraint {leader} {net.constraint(leader)}" for leader in net.leaders()]
    lines += [f"edge {leader} {follower}" for leader, follower in net.edges()]
    return "\n".join(lines) + "\n"


def parse_network(lines: Iterable[str]) -> BipartiteNetwork:
    """Parse the network text format; errors carry the offending line number."""
    header: Dict[str, int] = {}
    constraints: Dict[int, int] = {}
    edges: List[Edge] = []
    seen_edges: Set[Edge] = set()
    last_line = 0

    for number, tokens in iter_records(lines):
        last_line = number
        keyword = tokens[0]
        if keyword in ("leaders", "followers"):
            if len(tokens) != 2:
                raise ParseError(f"'{keyword}' takes one value", line=number)
            if keyword in header:
                raise ParseError(f"duplicate '{keyword}' line", line=number)
            header[keyword] = parse_int(tokens[1], number, keyword)
        elif keyword == "constraint":
            if len(tokens) != 3:
                raise ParseError("'constraint' takes a leader id and a value", line=number)
            leader = parse_int(tokens[1], number, "leader id")
            if leader in constraints:
                raise ParseError(f"duplicate constraint for leader {leader}", line=number)
            _check_range(leader, header.get("leaders"), "leader", number)
            constraints[leader] = parse_int(tokens[2], number, "constraint")
            if constraints[leader] < 1:
                raise ParseError(f"constraint of leader {leader} must be >= 1", line=number, details={"leader": leader})
        elif keyword == "edge":
            if len(tokens) != 3:
                raise ParseError("'edge' takes a leader id and a follower id", line=number)
            edge = (parse_int(tokens[1], number, "leader id"), parse_int(tokens[2], number, "follower id"))
            if edge in seen_edges:
                raise ParseError(f"duplicate edge {edge}", line=number)
            _check_range(edge[0], header.get("leaders"), "leader", number)
            _check_range(edge[1], header.get("followers"), "follower", number)
            seen_edges.add(edge)
            edges.append(edge)
        else:
            raise ParseError(f"unknown keyword {keyword!r}", line=number)

    for keyword in ("leaders", "followers"):
        if keyword not in header:
            raise ParseError(f"missing '{keyword}' line", line=last_line or None)
    n = header["leaders"]
    for leader in range(1, n + 1):
        if leader not in constraints:
            raise ParseError(f"missing constraint line for leader {leader}", details={"leader": leader})
    for leader in constraints:
        _check_range(leader, n, "leader", None)
    for leader, follower in edges:
        _check_range(leader, n, "leader", None)
        _check_range(follower, header["followers"], "follower", None)
    return build_network(n, header["followers"], edges, constraints)


def _check_range(value: int, upper: Optional[int], what: str, line: Optional[int]) -> None:
    if upper is not None and not 1 <= value <= upper:
        raise ParseError(f"{what} {value} is out of range 1..{upper}", line=line, details={what: value})


def load_network(path: Union[str, Path]) -> BipartiteNetwork:
    return parse_network(read_lines(path))


def save_network(net: BipartiteNetwork, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_network(net), encoding="utf-8")
