"""Test cases for matchings, deficits and deficit-decreasing paths."""

import tempfile
import unittest
from pathlib import Path

from src.teamform.common import MatchingError, ParseError
from src.teamform.counterexample import canonical_bad_matching, stable_matching
from src.teamform.matching import (
    all_dd_paths,
    approx_status,
    deficit,
    dumps_matching,
    load_matching,
    max_follower_disjoint_dd_paths,
    parse_matching,
    save_matching,
    shortest_dd_path,
    solve_dd_path,
    symmetric_difference,
    validate_dd_path,
)
from src.teamform.models.matching import DDPath, empty_matching, matching_from_pairs
from src.teamform.models.network import build_network
from src.teamform.network import gen_counterexample


def two_step_matching():
    """G_6 with ℓ_4–f_2, ℓ_6–f_4, horizontal edges for 1, 3, 5; ℓ_2 is poor."""
    return matching_from_pairs(gen_counterexample(6), [(1, 1), (3, 3), (4, 2), (5, 5), (6, 4)])


def chain_network():
    """ℓ_1–f_1–ℓ_2–f_2–ℓ_3–f_3 with ℓ_2, ℓ_3 holding f_1, f_2."""
    net = build_network(3, 3, [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)], {1: 1, 2: 1, 3: 1})
    return matching_from_pairs(net, [(2, 1), (3, 2)])


class TestMatchingModel(unittest.TestCase):
    def test_pair_must_be_an_edge(self):
        with self.assertRaises(MatchingError):
            matching_from_pairs(gen_counterexample(3), [(1, 2)])

    def test_follower_used_once(self):
        with self.assertRaises(MatchingError):
            matching_from_pairs(gen_counterexample(3), [(2, 1), (3, 1)])

    def test_capacity_enforced(self):
        """Test that a leader cannot take more followers than its constraint."""
        net = build_network(1, 2, [(1, 1), (1, 2)], {1: 1})
        with self.assertRaises(MatchingError):
            matching_from_pairs(net, [(1, 1), (1, 2)])

    def test_accessors(self):
        matching = two_step_matching()
        self.assertEqual(matching.leader_of(2), 4)
        self.assertIsNone(matching.leader_of(6))
        self.assertEqual(matching.team(4), frozenset({2}))
        self.assertEqual(matching.team_size(2), 0)
        self.assertEqual(matching.unmatched_followers(), [6])
        self.assertEqual(matching.size, 5)
        self.assertEqual(matching.pairs(), [(1, 1), (3, 3), (4, 2), (5, 5), (6, 4)])

    def test_with_assignment_returns_copy(self):
        """Test that reassigning a follower leaves the original matching untouched."""
        matching = two_step_matching()
        moved = matching.with_assignment({6: 6, 4: None})
        self.assertEqual(moved.leader_of(6), 6)
        self.assertIsNone(moved.leader_of(4))
        self.assertEqual(matching.leader_of(4), 6)
        with self.assertRaises(MatchingError):
            matching.with_assignment({6: 1})


class TestDeficit(unittest.TestCase):
    def test_empty_matching_of_g6(self):
        self.assertEqual(deficit(empty_matching(gen_counterexample(6))).total, 6)

    def test_empty_matching_with_larger_constraints(self):
        net = build_network(2, 5, [(1, 1), (1, 2), (2, 3)], {1: 3, 2: 2})
        report = deficit(empty_matching(net))
        self.assertEqual(report.total, 5)
        self.assertEqual(report.per_leader, {1: 3, 2: 2})

    def test_canonical_bad_matching(self):
        report = deficit(canonical_bad_matching(6))
        self.assertEqual(report.total, 1)
        self.assertEqual(report.poor_leaders, [1])
        self.assertEqual(report.unmatched_followers, [6])

    def test_two_step_chain(self):
        report = deficit(two_step_matching())
        self.assertEqual((report.total, report.poor_leaders, report.unmatched_followers), (1, [2], [6]))

    def test_stable_matching(self):
        self.assertEqual(deficit(stable_matching(6)).total, 0)


class TestDeficitDecreasingPaths(unittest.TestCase):
    def test_unique_path_of_bad_matching(self):
        """Test that the canonical bad matching has exactly one deficit-decreasing path."""
        path = shortest_dd_path(canonical_bad_matching(6))
        self.assertEqual(path.nodes, (1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6))
        self.assertEqual(path.length, 11)
        self.assertEqual(path.k, 6)
        self.assertEqual(len(list(all_dd_paths(canonical_bad_matching(6)))), 1)

    def test_no_path_from_stable_matching(self):
        self.assertIsNone(shortest_dd_path(stable_matching(5)))
        self.assertEqual(list(all_dd_paths(stable_matching(5))), [])

    def test_length_one_path(self):
        net = build_network(1, 2, [(1, 1), (1, 2)], {1: 1})
        path = shortest_dd_path(empty_matching(net))
        self.assertEqual(path.nodes, (1, 1))
        self.assertEqual(path.length, 1)

    def test_shortest_prefers_short_paths(self):
        """Test that no deficit-decreasing path is shorter than the BFS result."""
        matching = two_step_matching()
        path = shortest_dd_path(matching)
        self.assertEqual(path.nodes, (2, 2, 4, 4, 6, 6))
        for other in all_dd_paths(matching):
            self.assertGreaterEqual(other.length, path.length)

    def test_solving_a_chain(self):
        matching = chain_network()
        path = DDPath.of([1, 1, 2, 2, 3, 3])
        solved = solve_dd_path(matching, path)
        self.assertEqual(solved.total_deficit, matching.total_deficit - 1)
        self.assertEqual(solved.team_size(2), matching.team_size(2))
        self.assertEqual(solved.team_size(3), matching.team_size(3))
        self.assertEqual(solved.pairs(), [(1, 1), (2, 2), (3, 3)])

    def test_solving_length_one_path(self):
        net = build_network(2, 2, [(1, 1), (2, 2)], {1: 1, 2: 1})
        matching = matching_from_pairs(net, [(2, 2)])
        solved = solve_dd_path(matching, DDPath.of([1, 1]))
        self.assertEqual(solved.pairs(), [(1, 1), (2, 2)])

    def test_solving_bad_matching_reaches_stability(self):
        matching = canonical_bad_matching(6)
        self.assertEqual(solve_dd_path(matching, shortest_dd_path(matching)), stable_matching(6))

    def test_invalid_paths(self):
        """Test every way a path can fail to be deficit-decreasing."""
        matching = chain_network()
        bad_paths = [
            [2, 1],  # ℓ_2 is full
            [1, 1, 2, 2],  # ends at a matched follower
            [1, 1, 3, 3],  # f_1 belongs to ℓ_2, not ℓ_3
            [1, 1, 2],  # odd length
        ]
        for nodes in bad_paths:
            with self.assertRaises(MatchingError, msg=str(nodes)):
                validate_dd_path(matching, DDPath.of(nodes))

    def test_path_string(self):
        self.assertEqual(str(DDPath.of([1, 1, 2, 2])), "l1,f1,l2,f2")
        self.assertEqual(DDPath.of([1, 1, 2, 2]).edges(), [(1, 1), (2, 1), (2, 2)])


class TestSymmetricDifference(unittest.TestCase):
    def test_identical(self):
        self.assertEqual(symmetric_difference(stable_matching(4), stable_matching(4)), frozenset())

    def test_bad_matching_against_stable(self):
        difference = symmetric_difference(canonical_bad_matching(6), stable_matching(6))
        path = shortest_dd_path(canonical_bad_matching(6))
        self.assertEqual(len(difference), 11)
        self.assertEqual(difference, frozenset(path.edges()))

    def test_empty_against_stable(self):
        difference = symmetric_difference(empty_matching(gen_counterexample(6)), stable_matching(6))
        self.assertEqual(difference, frozenset((i, i) for i in range(1, 7)))

    def test_different_networks(self):
        with self.assertRaises(MatchingError):
            symmetric_difference(stable_matching(3), stable_matching(4))


class TestDisjointPaths(unittest.TestCase):
    def test_stable_matching_has_none(self):
        family = max_follower_disjoint_dd_paths(stable_matching(5), stable_matching(5))
        self.assertEqual(family.count, 0)
        self.assertEqual(family.paths, [])

    def test_bad_matching_has_exactly_one(self):
        family = max_follower_disjoint_dd_paths(canonical_bad_matching(6), stable_matching(6))
        self.assertEqual(family.count, 1)
        self.assertEqual(family.starts, {1: 1})
        self.assertEqual(family.paths[0].nodes, (1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6))

    def test_one_start_per_unit_of_deficit(self):
        """Test that each poor leader starts as many disjoint paths as its deficit."""
        net = build_network(2, 4, [(1, 1), (1, 2), (2, 2), (2, 3), (2, 4)], {1: 2, 2: 2})
        best = matching_from_pairs(net, [(1, 1), (1, 2), (2, 3), (2, 4)])
        matching = matching_from_pairs(net, [(2, 2)])
        family = max_follower_disjoint_dd_paths(matching, best)
        self.assertEqual(family.count, 3)
        self.assertEqual(family.starts, {1: 2, 2: 1})
        followers = [f for path in family.paths for f in path.followers]
        self.assertEqual(len(followers), len(set(followers)))

    def test_reference_must_be_stable(self):
        """Test that disjoint paths need a stable reference matching."""
        with self.assertRaises(MatchingError):
            max_follower_disjoint_dd_paths(stable_matching(3), canonical_bad_matching(3))


class TestApproxStatus(unittest.TestCase):
    def setUp(self):
        net = build_network(1, 10, [(1, f) for f in range(1, 11)], {1: 1})
        self.one_short = empty_matching(net)

    def test_stable(self):
        self.assertEqual(approx_status(stable_matching(3), 0.5, 0), "stable")

    def test_strict_inequality(self):
        """Test that the approximation threshold is strict."""
        self.assertEqual(approx_status(self.one_short, 0.2, 0), "approx_stable")
        self.assertEqual(approx_status(self.one_short, 0.1, 0), "neither")

    def test_relative_to_best(self):
        """Test that approx_best is measured against d* rather than zero."""
        self.assertEqual(approx_status(self.one_short, 0.1, 1), "approx_best")

    def test_eps_range(self):
        with self.assertRaises(MatchingError):
            approx_status(self.one_short, 1.5, 0)


class TestMatchingFormat(unittest.TestCase):
    def test_save_then_load(self):
        matching = two_step_matching()
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "m.txt"
            save_matching(matching, path)
            self.assertEqual(load_matching(matching.network, path), matching)

    def test_undecodable_file(self):
        """Test that an undecodable line surfaces as a ParseError, not a UnicodeDecodeError."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "m.txt"
            path.write_bytes(b"match 2 1\nmatch 3 2\n\x80\n")
            with self.assertRaises(ParseError) as ctx:
                load_matching(gen_counterexample(3), path)
        self.assertEqual(ctx.exception.line, 3)

    def test_text(self):
        self.assertEqual(dumps_matching(canonical_bad_matching(3)), "match 2 1\nmatch 3 2\n")

    def test_bad_line(self):
        with self.assertRaises(ParseError) as ctx:
            parse_matching(gen_counterexample(3), ["match 2 1", "pair 3 2"])
        self.assertEqual(ctx.exception.line, 2)

    def test_duplicate_pair(self):
        with self.assertRaises(ParseError):
            parse_matching(gen_counterexample(3), ["match 2 1", "match 2 1"])

    def test_not_an_edge(self):
        with self.assertRaises(MatchingError):
            parse_matching(gen_counterexample(3), ["match 1 3"])


if __name__ == "__main__":
    unittest.main()
