from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

from ..models.network import BipartiteNetwork, Edge, build_network
from ..network import (
    dumps_network,
    gen_counterexample,
    gen_random,
    load_network,
    parse_constraint_rule,
    save_network,
)
from .base import BaseAPI


class NetworksAPI(BaseAPI):
    """Building, generating and storing bipartite leader-follower networks.

    Example:
        >>> lab = TeamLab()
        >>> g6 = lab.networks.counterexample(6)
        >>> net = lab.networks.random(20, 40, rho=0.2)
        >>> lab.networks.save(net, "net.txt")
    """

    def build(self, n: int, m: int, edges: Iterable[Edge], constraints: Mapping[int, int]) -> BipartiteNetwork:
        """Network from explicit edges and per-leader constraints.

        Raises:
            NetworkError: Ids out of range, duplicate edges, or a missing or non-positive constraint.
        """
        return build_network(n, m, edges, constraints)

    def counterexample(self, n: int) -> BipartiteNetwork:
        """G_n: ℓ_i adjacent to f_1..f_i, all constraints 1."""
        return gen_counterexample(n)

    def random(
        self,
        n: int,
        m: int,
        rho: float,
        seed: Optional[int] = None,
        constraint_rule: str = "capped_ratio",
        max_degree: Optional[int] = None,
    ) -> BipartiteNetwork:
        """Seeded G(n, m, ρ) network.

        Args:
            n: Number of leaders.
            m: Number of followers.
            rho: Edge probability in [0, 1].
            seed: Generator seed. Defaults to the lab's seed.
            constraint_rule: ``capped_ratio`` or ``fixed:<c>``.
            max_degree: Optional cap on every leader's degree.

        Returns:
            BipartiteNetwork: The generated network.

        Raises:
            NetworkError: Invalid arguments, or no draw without isolated leaders within
                the lab's resample limit.
        """
        settings = self.lab.settings
        return gen_random(
            n,
            m,
            rho,
            settings.seed if seed is None else seed,
            parse_constraint_rule(constraint_rule),
            max_degree,
            settings.resample_limit,
        )

    def dumps(self, net: BipartiteNetwork) -> str:
        return dumps_network(net)

    def load(self, path: Union[str, Path]) -> BipartiteNetwork:
        """Read a network file.

        Raises:
            ParseError: A malformed or undecodable line; the error names the line.
        """
        return load_network(path)

    def save(self, net: BipartiteNetwork, path: Union[str, Path]) -> None:
        save_network(net, path)
