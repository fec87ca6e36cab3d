"""Teamform lab

The main entry point for library users. The lab holds the settings and exposes every
operation through specialised endpoint objects, filling seeds, round caps, acceptance
probabilities and limits from the settings when a call leaves them out.
"""

import logging
from typing import Optional

import numpy as np

from .api.counterexample import CounterexampleAPI
from .api.dynamics import DynamicsAPI
from .api.experiments import ExperimentsAPI
from .api.matchings import MatchingsAPI
from .api.networks import NetworksAPI
from .api.oracle import OracleAPI
from .config import Settings, load_settings
from .dynamics import make_rng

logger = logging.getLogger(__name__)


class TeamLab:
    """Facade over networks, matchings, the oracle, the protocol and the experiments.

    Attributes:
        settings (Settings): Defaults applied to every endpoint call.
        networks (NetworksAPI): Network construction, generation and text I/O.
        matchings (MatchingsAPI): Deficits, deficit-decreasing paths, matching I/O.
        oracle (OracleAPI): Max-flow best matchings and brute-force enumeration.
        dynamics (DynamicsAPI): Protocol runs and hitting times.
        counterexample (CounterexampleAPI): G_n index sets, the tree T*_m and counting.
        experiments (ExperimentsAPI): fig4, fig5, verify and charts.

    Example:
        >>> from teamform import TeamLab, Settings
        >>>
        >>> lab = TeamLab(Settings(seed=7))
        >>> net = lab.networks.random(20, 40, rho=0.2)
        >>> d_star = lab.oracle.best(net).d_star
        >>> trajectory = lab.dynamics.run(net)
        >>> lab.dynamics.tau_best(trajectory, 0.5, net.m, d_star)
    """

    def __init__(self, settings: Optional[Settings] = None):
        """Create a lab.

        Args:
            settings (Optional[Settings], optional): Lab defaults. When omitted they are
                read from ``.env`` and ``TEAMFORM_*`` variables via ``load_settings()``.

        Raises:
            ConfigError: An environment variable holds a malformed or out-of-range value.
        """
        self.settings = settings if settings is not None else load_settings()
        self.networks = NetworksAPI(self)
        self.matchings = MatchingsAPI(self)
        self.oracle = OracleAPI(self)
        self.dynamics = DynamicsAPI(self)
        self.counterexample = CounterexampleAPI(self)
        self.experiments = ExperimentsAPI(self)
        logger.debug("lab created seed=%d", self.settings.seed)

    def rng(self, offset: int = 0) -> np.random.Generator:
        """PCG64 generator seeded with ``settings.seed + offset``."""
        return make_rng(self.settings.seed + offset)
