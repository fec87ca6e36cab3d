from typing import List, Optional

from ..models.matching import Matching
from ..models.network import BipartiteNetwork
from ..oracle import MatchingPredicate, OracleResult, best_matching, enumerate_matchings, min_deficit_by_enumeration
from .base import BaseAPI


class OracleAPI(BaseAPI):
    """Exact best matchings and brute-force enumeration, bounded by the lab's enumeration limit."""

    def best(self, net: BipartiteNetwork) -> OracleResult:
        """Best matching of ``net`` by max flow.

        Args:
            net: The network.

        Returns:
            OracleResult: d*, whether a stable matching exists, and a witness attaining d*.
        """
        return best_matching(net)

    def stable_exists(self, net: BipartiteNetwork) -> bool:
        return best_matching(net).stable_exists

    def enumerate(
        self,
        net: BipartiteNetwork,
        predicate: Optional[MatchingPredicate] = None,
        max_deficit: Optional[int] = None,
        limit: Optional[int] = None,
    ) -> List[Matching]:
        """Every matching satisfying ``predicate``.

        Raises:
            EnumerationLimitError: More than ``limit`` (default: settings.enumeration_limit)
                matchings were visited.
        """
        cap = self.lab.settings.enumeration_limit if limit is None else limit
        return enumerate_matchings(net, predicate=predicate, limit=cap, max_deficit=max_deficit)

    def min_deficit(self, net: BipartiteNetwork) -> int:
        """d* by brute force; only for small networks.

        Raises:
            EnumerationLimitError: The enumeration exceeded settings.enumeration_limit.
        """
        return min_deficit_by_enumeration(net, self.lab.settings.enumeration_limit)
