from pathlib import Path
from typing import Optional, Tuple, Union

from ..dynamics import deficit_drop_probability, run, tau, tau_best, theorem1_bound, write_trajectory_csv
from ..models.matching import Matching, empty_matching
from ..models.network import BipartiteNetwork
from ..models.simulation import SimConfig, StopRule, Trajectory
from .base import BaseAPI


class DynamicsAPI(BaseAPI):
    """Runs of the distributed protocol with parameters defaulted from the lab settings.

    Example:
        >>> net = lab.networks.counterexample(6)
        >>> trajectory = lab.dynamics.run(net, seed=3)
        >>> trajectory.stopped, trajectory.final.is_stable
        (True, True)
    """

    def config(
        self,
        p: Optional[float] = None,
        q: Optional[float] = None,
        seed: Optional[int] = None,
        max_rounds: Optional[int] = None,
        stop_rule: Optional[StopRule] = None,
        q_matched: Optional[float] = None,
    ) -> SimConfig:
        """SimConfig with every omitted field taken from the lab settings.

        The stop rule defaults to stopping at the first stable matching.
        """
        settings = self.lab.settings
        return SimConfig(
            p=settings.p if p is None else p,
            q=settings.q if q is None else q,
            seed=settings.seed if seed is None else seed,
            max_rounds=settings.max_rounds if max_rounds is None else max_rounds,
            stop_rule=StopRule.stable() if stop_rule is None else stop_rule,
            q_matched=q_matched,
        )

    def run(
        self,
        net: BipartiteNetwork,
        initial: Optional[Matching] = None,
        config: Optional[SimConfig] = None,
        **overrides,
    ) -> Trajectory:
        """Run the protocol from ``initial`` (empty matching by default).

        Args:
            net: The network.
            initial: Starting matching M(0).
            config: Full run configuration; when omitted one is built from ``overrides``
                (p, q, seed, max_rounds, stop_rule, q_matched) and the lab settings.

        Returns:
            Trajectory: Per-round records, the final matching and the stop reason.
        """
        start = empty_matching(net) if initial is None else initial
        return run(net, start, config if config is not None else self.config(**overrides))

    def tau(self, trajectory: Trajectory, x: float, m: int) -> Optional[int]:
        """First round whose deficit is below ``x * m``, or None if the record never gets there.

        Raises:
            ConfigError: ``x`` is outside (0, 1].
        """
        return tau(trajectory, x, m)

    def tau_best(self, trajectory: Trajectory, eps: float, m: int, d_star: int) -> Optional[int]:
        return tau_best(trajectory, eps, m, d_star)

    def bound(self, m: int, delta: int, eps: float, p: Optional[float] = None, q: Optional[float] = None):
        """Round bound and success probability for reaching a (1 − ε)-approximate best matching.

        Args:
            m: Number of followers.
            delta: Maximum follower degree.
            eps: Approximation slack in (0, 1).
            p: Leader request probability. Defaults to the lab setting.
            q: Follower acceptance probability. Defaults to the lab setting.

        Returns:
            Tuple[float, float]: (round bound, probability of finishing within it).

        Raises:
            ConfigError: Any argument is out of range.
        """
        settings = self.lab.settings
        return theorem1_bound(m, delta, settings.p if p is None else p, settings.q if q is None else q, eps)

    def drop_probability(
        self, net: BipartiteNetwork, initial: Matching, trials: int, **overrides
    ) -> Tuple[float, float, float]:
        """Estimate how often the deficit drops within its phase window.

        Returns:
            Tuple[float, float, float]: (estimate, lower bound, binomial standard deviation at the bound).

        Raises:
            ConfigError: ``initial`` is already stable.
        """
        return deficit_drop_probability(net, initial, self.config(**overrides), trials)

    def save(self, trajectory: Trajectory, path: Union[str, Path]) -> None:
        """Write the per-round CSV with its stop_reason footer."""
        write_trajectory_csv(trajectory, path)
