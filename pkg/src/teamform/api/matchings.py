from pathlib import Path
from typing import Iterable, List, Optional, Union

from ..matching import (
    DisjointPathFamily,
    all_dd_paths,
    approx_status,
    deficit,
    load_matching,
    max_follower_disjoint_dd_paths,
    save_matching,
    shortest_dd_path,
    solve_dd_path,
    validate_dd_path,
)
from ..models.matching import DDPath, DeficitReport, Matching, empty_matching, matching_from_pairs
from ..models.network import BipartiteNetwork, Edge
from .base import BaseAPI


class MatchingsAPI(BaseAPI):
    """Matchings, deficits and deficit-decreasing paths.

    Example:
        >>> net = lab.networks.counterexample(3)
        >>> matching = lab.matchings.from_pairs(net, [(2, 1), (3, 2)])
        >>> lab.matchings.deficit(matching).total
        1
        >>> path = lab.matchings.shortest_path(matching)
        >>> lab.matchings.solve(matching, path).is_stable
        True
    """

    def from_pairs(self, net: BipartiteNetwork, pairs: Iterable[Edge]) -> Matching:
        return matching_from_pairs(net, pairs)

    def empty(self, net: BipartiteNetwork) -> Matching:
        return empty_matching(net)

    def deficit(self, matching: Matching) -> DeficitReport:
        """Per-leader and total deficit of ``matching``."""
        return deficit(matching)

    def shortest_path(self, matching: Matching) -> Optional[DDPath]:
        """Shortest deficit-decreasing path by BFS from the poor leaders.

        Returns:
            Optional[DDPath]: None when ``matching`` already attains d*.
        """
        return shortest_dd_path(matching)

    def all_paths(self, matching: Matching) -> List[DDPath]:
        return list(all_dd_paths(matching))

    def validate_path(self, matching: Matching, path: DDPath) -> None:
        """Check every condition of a deficit-decreasing path.

        Raises:
            MatchingError: ``path`` is not deficit-decreasing relative to ``matching``.
        """
        validate_dd_path(matching, path)

    def solve(self, matching: Matching, path: DDPath) -> Matching:
        """Apply a deficit-decreasing path; the result has deficit one lower.

        Raises:
            MatchingError: The path is not deficit-decreasing relative to ``matching``.
        """
        return solve_dd_path(matching, path)

    def disjoint_paths(self, matching: Matching, stable: Matching) -> DisjointPathFamily:
        """Largest family of follower-disjoint deficit-decreasing paths towards ``stable``.

        Args:
            matching: The matching to improve.
            stable: A stable matching of the same network.

        Returns:
            DisjointPathFamily: The path count, one witness path per unit and the start count per leader.

        Raises:
            MatchingError: The matchings belong to different networks, or ``stable`` has a deficit.
        """
        return max_follower_disjoint_dd_paths(matching, stable)

    def status(self, matching: Matching, eps: float, d_star: Optional[int] = None) -> str:
        """Approximation class of ``matching``; d* is computed with the oracle when omitted."""
        if d_star is None:
            d_star = self.lab.oracle.best(matching.network).d_star
        return approx_status(matching, eps, d_star)

    def load(self, net: BipartiteNetwork, path: Union[str, Path]) -> Matching:
        """Read a ``match <leader> <follower>`` file against ``net``.

        Raises:
            ParseError: A malformed or undecodable line; the error names the line.
        """
        return load_matching(net, path)

    def save(self, matching: Matching, path: Union[str, Path]) -> None:
        save_matching(matching, path)
