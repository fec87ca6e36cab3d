"""Teamform

Distributed leader-follower team formation on bipartite networks. Exposes the
TeamLab facade, the domain models and the error types.
"""

from .common import (
    ConfigError,
    DynamicsError,
    EnumerationLimitError,
    MatchingError,
    NetworkError,
    ParseError,
    TeamformError,
)
from .config import Settings, load_settings
from .lab import TeamLab
from .models.experiment import ExperimentSpec
from .models.matching import DDPath, DeficitReport, Matching
from .models.network import BipartiteNetwork
from .models.simulation import SimConfig, StopRule, Trajectory
from .models.tree import IndexSet, LabeledTree

__all__ = [
    "TeamLab",
    "Settings",
    "load_settings",
    "TeamformError",
    "NetworkError",
    "ParseError",
    "MatchingError",
    "EnumerationLimitError",
    "DynamicsError",
    "ConfigError",
    "BipartiteNetwork",
    "Matching",
    "DeficitReport",
    "DDPath",
    "SimConfig",
    "StopRule",
    "Trajectory",
    "IndexSet",
    "LabeledTree",
    "ExperimentSpec",
]
