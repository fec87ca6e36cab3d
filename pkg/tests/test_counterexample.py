"""Test cases for index sets, the tree T*_m and the deficit-1 counting formulas."""

import statistics
import unittest

import numpy as np

from src.teamform.common import ConfigError, MatchingError
from src.teamform.counterexample import (
    build_tree,
    canonical_bad_matching,
    check_structure,
    count_all,
    count_by_height,
    enumerate_heights,
    expected_exit_time,
    height,
    height_table,
    index_set,
    ks_statistic,
    low_height_fraction,
    lowered_matching,
    matching_from_index_set,
    node_path,
    omega,
    reachable_set,
    sample_escape_rounds,
    sample_hitting_times,
    single_round_successors,
    stable_matching,
    transition_distribution,
    tree_node_by_path,
    walk_hitting_time,
)
from src.teamform.models.matching import empty_matching, matching_from_pairs
from src.teamform.models.network import build_network
from src.teamform.models.tree import IndexSet
from src.teamform.network import gen_counterexample


def two_step_matching():
    return matching_from_pairs(gen_counterexample(6), [(1, 1), (3, 3), (4, 2), (5, 5), (6, 4)])


class TestIndexSets(unittest.TestCase):
    def test_bad_matching_misses_every_horizontal_edge(self):
        """Test that the canonical bad matching uses every index."""
        indexes = index_set(canonical_bad_matching(6))
        self.assertEqual(indexes.indexes, (1, 2, 3, 4, 5, 6))
        self.assertEqual(height(indexes), 5)

    def test_two_step_chain(self):
        matching = two_step_matching()
        indexes = index_set(matching)
        self.assertEqual(str(indexes), "{2,4,6}")
        self.assertEqual(height(matching), 4)
        self.assertEqual(matching_from_index_set(indexes), matching)
        check_structure(matching)

    def test_stable_matching_has_empty_set(self):
        self.assertTrue(index_set(stable_matching(4)).is_empty)
        with self.assertRaises(MatchingError):
            height(stable_matching(4))

    def test_singleton_has_height_zero(self):
        """Test that a one-element index set sits at height zero."""
        self.assertEqual(height(IndexSet(5, (3,))), 0)

    def test_deficit_above_one_rejected(self):
        with self.assertRaises(MatchingError):
            index_set(empty_matching(gen_counterexample(3)))

    def test_other_network_rejected(self):
        """Test that matchings of networks other than G_n are refused."""
        net = build_network(2, 2, [(1, 1), (2, 2)], {1: 1, 2: 1})
        with self.assertRaises(MatchingError):
            index_set(matching_from_pairs(net, [(1, 1), (2, 2)]))

    def test_index_set_validation(self):
        with self.assertRaises(MatchingError):
            IndexSet(4, (2, 2))
        with self.assertRaises(MatchingError):
            IndexSet(4, (5,))
        self.assertEqual(IndexSet(6, (6, 2, 4)).indexes, (2, 4, 6))

    def test_lowered_matching(self):
        self.assertEqual(index_set(lowered_matching(two_step_matching())), IndexSet(6, (6,)))


class TestReachableSets(unittest.TestCase):
    def test_size(self):
        found = reachable_set(IndexSet(6, (2, 4, 6)))
        self.assertEqual(len(found), 1 + 2**3)
        self.assertEqual(len(set(found)), len(found))
        self.assertIn(IndexSet(6, (6,)), found)
        self.assertIn(IndexSet(6, (1, 2, 3, 4, 6)), found)

    def test_every_member_is_a_deficit_one_matching(self):
        """Test that every reachable index set describes a deficit-1 matching."""
        for indexes in reachable_set(IndexSet(7, (3, 5, 7))):
            check_structure(matching_from_index_set(indexes))

    def test_needs_two_entries(self):
        with self.assertRaises(MatchingError):
            reachable_set(IndexSet(4, (4,)))


class TestTree(unittest.TestCase):
    def test_sizes(self):
        self.assertEqual(len(build_tree(1)), 2)
        self.assertEqual(len(build_tree(2)), 3)
        self.assertEqual(len(build_tree(5)), 17)
        for m in range(1, 10):
            self.assertEqual(len(build_tree(m)), 2 ** (m - 1) + 1)

    def test_root_and_labels(self):
        tree = build_tree(4)
        self.assertEqual(tree.label(tree.root), 5)
        self.assertEqual(tree.degree(tree.root), 1)
        child = tree_node_by_path(tree, (4,))
        self.assertTrue(tree.adjacent(tree.root, child))
        self.assertEqual([tree.label(c) for c in tree.nodes[child].children], [1, 2, 3])

    def test_paths(self):
        tree = build_tree(5)
        node = tree_node_by_path(tree, (5, 3, 1))
        self.assertEqual(node_path(tree, node), (5, 3, 1))
        self.assertEqual(tree.label(node), 1)
        with self.assertRaises(MatchingError):
            tree_node_by_path(tree, (5, 1, 3))

    def test_invalid_order(self):
        with self.assertRaises(ConfigError):
            build_tree(0)


class TestOmega(unittest.TestCase):
    def test_bijection_onto_tree(self):
        """Test that reachable matchings map one-to-one onto the tree nodes."""
        reference = IndexSet(7, (2, 5, 7))
        tree = build_tree(reference.height)
        nodes = [omega(reference, target, tree) for target in reachable_set(reference)]
        self.assertEqual(sorted(nodes), list(range(len(tree))))

    def test_lowered_matching_maps_to_root(self):
        self.assertEqual(omega(two_step_matching(), lowered_matching(two_step_matching())), 0)

    def test_reference_maps_to_its_path(self):
        """Test that the reference matching maps to the path of its own indexes."""
        reference = IndexSet(6, (2, 4, 6))
        tree = build_tree(4)
        self.assertEqual(node_path(tree, omega(reference, reference, tree)), (4, 2))

    def test_unreachable_target(self):
        with self.assertRaises(MatchingError):
            omega(IndexSet(6, (2, 4, 6)), IndexSet(6, (1, 5, 6)))

    def test_tree_of_wrong_size(self):
        with self.assertRaises(MatchingError):
            omega(IndexSet(6, (2, 4, 6)), IndexSet(6, (6,)), build_tree(3))


class TestTransitions(unittest.TestCase):
    def test_uniform_over_successors(self):
        """Test that every successor of a non-singleton set has probability 1/min."""
        law = transition_distribution(IndexSet(6, (2, 4, 6)))
        self.assertEqual(law, {IndexSet(6, (1, 2, 4, 6)): 0.5, IndexSet(6, (4, 6)): 0.5})

    def test_minimum_one_drops_deterministically(self):
        law = transition_distribution(IndexSet(6, (1, 5)))
        self.assertEqual(law, {IndexSet(6, (5,)): 1.0})

    def test_singleton_and_empty(self):
        self.assertEqual(transition_distribution(IndexSet(4, (3,))), {IndexSet(4, ()): 1.0})
        self.assertEqual(transition_distribution(IndexSet(4, ())), {IndexSet(4, ()): 1.0})

    def test_requires_certain_activation(self):
        """Test that the transition law is only available for p = q = 1."""
        with self.assertRaises(ConfigError):
            transition_distribution(IndexSet(4, (2, 4)), p=0.5)

    def test_protocol_follows_the_law(self):
        """Test that simulated single rounds match the transition probabilities."""
        start = IndexSet(6, (3, 6))
        counts = single_round_successors(start, 3000, seed=1)
        law = transition_distribution(start)
        self.assertEqual(set(counts), set(law))
        for successor, probability in law.items():
            self.assertAlmostEqual(counts[successor] / 3000, probability, delta=0.04)


class TestWalks(unittest.TestCase):
    def test_single_step_tree(self):
        tree = build_tree(1)
        self.assertEqual(sample_hitting_times(tree, tree_node_by_path(tree, (1,)), 20, seed=0), [1] * 20)

    def test_mean_exit_time(self):
        """Test the sample mean of hitting times against the closed form."""
        tree = build_tree(3)
        samples = sample_hitting_times(tree, tree_node_by_path(tree, (3,)), 4000, seed=2)
        self.assertEqual(expected_exit_time(3), 7)
        self.assertAlmostEqual(statistics.fmean(samples), 7, delta=0.8)

    def test_seed_types(self):
        """Test that numpy integer seeds behave like int seeds."""
        tree = build_tree(4)
        start = tree_node_by_path(tree, (4,))
        self.assertEqual(walk_hitting_time(tree, start, np.int64(5)), walk_hitting_time(tree, start, 5))

    def test_escape_on_g2_takes_one_round(self):
        self.assertEqual(sample_escape_rounds(IndexSet(2, (1, 2)), 5, seed=0), [1] * 5)

    def test_ks_statistic(self):
        self.assertEqual(ks_statistic([1, 2, 3], [1, 2, 3]), 0.0)
        self.assertEqual(ks_statistic([1, 1], [5, 5]), 1.0)


class TestCounting(unittest.TestCase):
    def test_formulas(self):
        self.assertEqual(count_by_height(6, 0), 6)
        self.assertEqual(count_by_height(6, 1), 5)
        self.assertEqual(count_by_height(6, 5), 16)
        self.assertEqual(count_all(6), 63)
        for n in range(1, 12):
            self.assertEqual(sum(height_table(n).values()), count_all(n))

    def test_brute_force_agrees(self):
        for n in range(1, 7):
            with self.subTest(n=n):
                self.assertEqual(enumerate_heights(n), height_table(n))

    def test_low_height_fraction_shrinks(self):
        """Test that the share of low-height matchings vanishes as n grows."""
        for n in (10, 14, 20):
            self.assertLess(low_height_fraction(n + 2, 0.5), low_height_fraction(n, 0.5))
        self.assertLess(low_height_fraction(40, 0.5), 1e-4)

    def test_ranges(self):
        with self.assertRaises(ConfigError):
            count_by_height(4, 4)
        with self.assertRaises(ConfigError):
            low_height_fraction(10, 1.0)


if __name__ == "__main__":
    unittest.main()
