from typing import Dict, List, Optional, Union

from ..counterexample import (
    build_tree,
    canonical_bad_matching,
    count_all,
    count_by_height,
    height,
    height_table,
    index_set,
    low_height_fraction,
    matching_from_index_set,
    omega,
    reachable_set,
    sample_escape_rounds,
    sample_hitting_times,
    stable_matching,
    transition_distribution,
)
from ..models.matching import Matching
from ..models.tree import IndexSet, LabeledTree
from .base import BaseAPI


class CounterexampleAPI(BaseAPI):
    """The G_n family: index sets, heights, the tree T*_m and counting.

    Example:
        >>> bad = lab.counterexample.bad_matching(8)
        >>> lab.counterexample.index_set(bad)
        IndexSet(n=8, indexes=(1, 2, 3, 4, 5, 6, 7, 8))
        >>> lab.counterexample.height(bad)
        7
    """

    def stable(self, n: int) -> Matching:
        return stable_matching(n)

    def bad_matching(self, n: int) -> Matching:
        return canonical_bad_matching(n)

    def index_set(self, matching: Matching) -> IndexSet:
        return index_set(matching)

    def matching(self, indexes: IndexSet) -> Matching:
        return matching_from_index_set(indexes)

    def height(self, item: Union[Matching, IndexSet]) -> int:
        """Height of a deficit-1 matching of G_n.

        Raises:
            MatchingError: ``item`` is the stable matching or not a G_n matching.
        """
        return height(item)

    def reachable(self, item: Union[Matching, IndexSet]) -> List[IndexSet]:
        return reachable_set(item)

    def tree(self, m: int) -> LabeledTree:
        return build_tree(m)

    def omega(self, reference: Union[Matching, IndexSet], target: Union[Matching, IndexSet]) -> int:
        """Node of T*_{h} standing for ``target``, a matching reachable from ``reference``."""
        return omega(reference, target)

    def transitions(self, indexes: IndexSet) -> Dict[IndexSet, float]:
        """One-round successor probabilities of ``indexes`` under p = q = 1."""
        return transition_distribution(indexes)

    def walks(self, m: int, count: int, start: Optional[int] = None, seed: Optional[int] = None) -> List[int]:
        """Hitting times of r* for walks on T*_m, started at the root's child by default."""
        tree = build_tree(m)
        node = tree.node_by_path((m,)) if start is None else start
        return sample_hitting_times(tree, node, count, self.lab.settings.seed if seed is None else seed)

    def escape_rounds(self, start: IndexSet, count: int, seed: Optional[int] = None) -> List[int]:
        """Rounds the protocol (p = q = 1) takes to lower ``start`` by one height, one sample per run.

        Args:
            start: Index set of the starting deficit-1 matching.
            count: Number of runs.
            seed: Base seed. Defaults to the lab seed.

        Returns:
            List[int]: Rounds per run, capped at settings.max_rounds.
        """
        settings = self.lab.settings
        return sample_escape_rounds(start, count, settings.seed if seed is None else seed, settings.max_rounds)

    def count(self, n: int, j: Optional[int] = None) -> int:
        """N(j) when ``j`` is given, else N = 2^n − 1."""
        return count_all(n) if j is None else count_by_height(n, j)

    def table(self, n: int) -> Dict[int, int]:
        return height_table(n)

    def low_fraction(self, n: int, gamma: float) -> float:
        return low_height_fraction(n, gamma)
