from dataclasses import asdict, dataclass, field
from typing import List, Literal, Optional, Tuple, TypedDict

from ..common import ConfigError

ExperimentKind = Literal["fig4_counterexample", "fig5_random_sweep", "verify_suite"]
InitialKind = Literal["empty", "counterexample"]

FIG5_PAIRS: List[Tuple[int, int]] = [(100, 200), (100, 300), (150, 450), (200, 600)]


@dataclass
class ExperimentSpec:
    """Parameter grid, replication counts and outputs of one experiment."""

    kind: ExperimentKind = "fig4_counterexample"
    n_values: List[int] = field(default_factory=lambda: list(range(2, 11)))
    pairs: List[Tuple[int, int]] = field(default_factory=lambda: list(FIG5_PAIRS))
    rho: float = 0.04
    eps: List[float] = field(default_factory=lambda: [0.9, 0.7, 0.5, 0.3, 0.1])
    p: float = 1.0
    q: float = 1.0
    networks_per_point: int = 20
    runs_per_network: int = 20
    seed: int = 0
    max_rounds: int = 10**8
    initial: InitialKind = "empty"
    constraint_rule: str = "capped_ratio"
    max_degree: Optional[int] = None
    time_budget_s: Optional[float] = None
    workers: int = 1
    size: Literal["quick", "full"] = "quick"
    out: Optional[str] = None

    def __post_init__(self) -> None:
        if self.networks_per_point < 1 or self.runs_per_network < 1:
            raise ConfigError("replication counts must be >= 1")
        for eps in self.eps:
            if not 0 < eps < 1:
                raise ConfigError(f"eps values must lie in (0, 1), got {eps}", {"eps": eps})
        if not 0 <= self.rho <= 1:
            raise ConfigError(f"rho must lie in [0, 1], got {self.rho}")
        if self.initial not in ("empty", "counterexample"):
            raise ConfigError(f"unknown initial matching {self.initial!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        self.pairs = [tuple(pair) for pair in self.pairs]  # type: ignore[misc]

    def to_dict(self) -> dict:
        data = asdict(self)
        data["pairs"] = [list(pair) for pair in self.pairs]
        return data


class SuiteResult(TypedDict):
    """One entry of the verification report."""

    name: str
    passed: bool
    seed: int
    detail: str


class VerifyReport(TypedDict):
    passed: bool
    size: str
    suites: List[SuiteResult]
