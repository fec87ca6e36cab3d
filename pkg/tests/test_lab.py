import tempfile
from pathlib import Path

from src.teamform import ConfigError, EnumerationLimitError, Settings, TeamLab
from src.teamform.models.simulation import StopRule

from .test_base_setup import TestBase


class TestNetworksEndpoint(TestBase):
    def test_random_uses_lab_seed(self):
        """Test that random networks default to the lab seed."""
        first = self.lab.networks.random(10, 30, 0.2)
        self.assertEqual(first, self.lab.networks.random(10, 30, 0.2, seed=self.settings.seed))
        self.assertEqual(first, TeamLab(self.settings).networks.random(10, 30, 0.2))

    def test_fixed_rule_from_text(self):
        net = self.lab.networks.random(3, 3, 1.0, seed=1, constraint_rule="fixed:2")
        self.assertEqual(net.constraints, (2, 2, 2))

    def test_save_and_load(self):
        net = self.lab.networks.counterexample(5)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "g5.txt"
            self.lab.networks.save(net, path)
            self.assertEqual(self.lab.networks.load(path), net)
        self.assertTrue(self.lab.networks.dumps(net).startswith("leaders 5\nfollowers 5\n"))


class TestMatchingsEndpoint(TestBase):
    def test_solve_bad_matching(self):
        bad = self.lab.counterexample.bad_matching(3)
        path = self.lab.matchings.shortest_path(bad)
        self.assertTrue(self.lab.matchings.solve(bad, path).is_stable)

    def test_status_computes_d_star(self):
        """Test that the approximation status calls the oracle when d* is omitted."""
        net = self.lab.networks.build(2, 1, [(1, 1), (2, 1)], {1: 1, 2: 1})
        matching = self.lab.matchings.from_pairs(net, [(1, 1)])
        self.assertEqual(self.lab.matchings.status(matching, 0.5), "approx_best")
        self.assertEqual(self.lab.matchings.status(matching, 0.5, d_star=0), "neither")


class TestOracleEndpoint(TestBase):
    def test_enumeration_limit_from_settings(self):
        """Test that enumeration honours the limit from the settings."""
        lab = TeamLab(Settings(enumeration_limit=10))
        with self.assertRaises(EnumerationLimitError):
            lab.oracle.enumerate(lab.networks.counterexample(5))
        self.assertEqual(len(lab.oracle.enumerate(lab.networks.counterexample(5), limit=10**6, max_deficit=0)), 1)

    def test_best_and_min_deficit_agree(self):
        net = self.lab.networks.random(4, 6, 0.5, seed=3)
        self.assertEqual(self.lab.oracle.best(net).d_star, self.lab.oracle.min_deficit(net))


class TestDynamicsEndpoint(TestBase):
    def test_run_defaults(self):
        net = self.lab.networks.counterexample(6)
        trajectory = self.lab.dynamics.run(net)
        self.assertTrue(trajectory.stopped)
        self.assertEqual(trajectory.seed, 0)
        self.assertTrue(trajectory.final.is_stable)

    def test_overrides(self):
        net = self.lab.networks.counterexample(6)
        trajectory = self.lab.dynamics.run(net, seed=4, max_rounds=2, stop_rule=StopRule.fixed_rounds())
        self.assertEqual((trajectory.seed, trajectory.rounds_elapsed), (4, 2))

    def test_invalid_override(self):
        with self.assertRaises(ConfigError):
            self.lab.dynamics.config(p=2.0)

    def test_bound_and_save(self):
        rounds, _ = self.lab.dynamics.bound(10, 2, 0.5)
        self.assertAlmostEqual(rounds, 96.0)
        trajectory = self.lab.dynamics.run(self.lab.networks.counterexample(3))
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "run.csv"
            self.lab.dynamics.save(trajectory, path)
            self.assertTrue(path.read_text(encoding="utf-8").startswith("round,deficit"))


class TestCounterexampleEndpoint(TestBase):
    def test_walks_default_start(self):
        self.assertEqual(self.lab.counterexample.walks(1, 5), [1] * 5)

    def test_counts(self):
        self.assertEqual(self.lab.counterexample.count(6), 63)
        self.assertEqual(self.lab.counterexample.count(6, 2), 8)
        self.assertEqual(self.lab.counterexample.height(self.lab.counterexample.bad_matching(8)), 7)


class TestExperimentsEndpoint(TestBase):
    def test_spec_defaults_from_settings(self):
        """Test that experiment specs inherit the seed, round cap, p and q of the lab."""
        spec = self.lab.experiments.spec(kind="fig4_counterexample", n_values=[2])
        self.assertEqual((spec.seed, spec.max_rounds, spec.p, spec.q), (0, 10**6, 1.0, 1.0))
        self.assertEqual(spec.n_values, [2])

    def test_fig4_with_overrides(self):
        text = self.lab.experiments.fig4(n_values=[2], networks_per_point=1, runs_per_network=1)
        self.assertTrue(text.startswith("n,metric,mean_rounds,replications\n"))

    def test_verify_subset(self):
        report = self.lab.experiments.verify(only=["gn_structure"])
        self.assertTrue(report["passed"])

    def test_chart(self):
        text = self.lab.experiments.fig4(n_values=[2, 3], networks_per_point=1, runs_per_network=1)
        self.assertIn("<svg", self.lab.experiments.chart(text, log=True))
