from pathlib import Path
from typing import Any, Optional, Sequence, Union

from ..experiments import emit_chart, load_experiment_spec, run_fig4, run_fig5, run_verify, spec_hash
from ..models.experiment import ExperimentSpec, VerifyReport
from .base import BaseAPI


class ExperimentsAPI(BaseAPI):
    """Experiment runners. Seeds, round caps and worker counts default to the lab settings."""

    def spec(self, path: Optional[Union[str, Path]] = None, **overrides: Any) -> ExperimentSpec:
        """Experiment spec from the lab settings, an optional config file, then ``overrides``.

        Args:
            path: Optional ``key = value`` config file.
            **overrides: Spec fields; None values are ignored.

        Returns:
            ExperimentSpec: The merged, validated spec.

        Raises:
            ConfigError: Unknown keys or invalid values.
            ParseError: A malformed config file line.
        """
        settings = self.lab.settings
        return load_experiment_spec(
            path,
            overrides,
            seed=settings.seed,
            max_rounds=settings.max_rounds,
            workers=settings.workers,
            p=settings.p,
            q=settings.q,
        )

    def fig4(self, spec: Optional[ExperimentSpec] = None, **overrides: Any) -> str:
        """Mean rounds on G_n per metric, as CSV text with a spec_hash footer."""
        return run_fig4(spec or self.spec(kind="fig4_counterexample", **overrides))

    def fig5(self, spec: Optional[ExperimentSpec] = None, **overrides: Any) -> str:
        return run_fig5(spec or self.spec(kind="fig5_random_sweep", **overrides))

    def verify(
        self, spec: Optional[ExperimentSpec] = None, only: Optional[Sequence[str]] = None, **overrides: Any
    ) -> VerifyReport:
        """Run the verification suites, or the ``only`` subset.

        Raises:
            ConfigError: ``only`` names an unknown suite.
        """
        return run_verify(spec or self.spec(kind="verify_suite", **overrides), only)

    def chart(self, source: Union[str, Path], log: bool = False, out: Optional[Union[str, Path]] = None) -> str:
        """Render an experiment CSV as SVG; written to ``out`` when given, returned either way."""
        return emit_chart(source, "log_lines" if log else "lines", out)

    def hash(self, spec: ExperimentSpec) -> str:
        return spec_hash(spec)
