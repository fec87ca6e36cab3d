from .experiment import ExperimentSpec, SuiteResult, VerifyReport
from .matching import DDPath, DeficitReport, Matching, empty_matching, matching_from_pairs
from .network import BipartiteNetwork, Edge, FollowerId, LeaderId, build_network
from .simulation import RoundRecord, RoundRequests, SimConfig, StopRule, Trajectory
from .tree import IndexSet, LabeledTree, TreeNode

__all__ = [
    "BipartiteNetwork",
    "DDPath",
    "DeficitReport",
    "Edge",
    "ExperimentSpec",
    "FollowerId",
    "IndexSet",
    "LabeledTree",
    "LeaderId",
    "Matching",
    "RoundRecord",
    "RoundRequests",
    "SimConfig",
    "StopRule",
    "SuiteResult",
    "Trajectory",
    "TreeNode",
    "VerifyReport",
    "build_network",
    "empty_matching",
    "matching_from_pairs",
]
