from .counterexample import CounterexampleAPI
from .dynamics import DynamicsAPI
from .experiments import ExperimentsAPI
from .matchings import MatchingsAPI
from .networks import NetworksAPI
from .oracle import OracleAPI

__all__ = [
    "NetworksAPI",
    "MatchingsAPI",
    "OracleAPI",
    "DynamicsAPI",
    "CounterexampleAPI",
    "ExperimentsAPI",
]
