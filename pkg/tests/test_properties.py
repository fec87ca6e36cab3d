"""Property tests over small random networks and matchings."""

import unittest

from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.strategies import DrawFn, composite

from src.teamform.counterexample import height, index_set, matching_from_index_set
from src.teamform.dynamics import follower_stage, leader_stage, make_rng
from src.teamform.matching import shortest_dd_path, solve_dd_path
from src.teamform.models.matching import Matching
from src.teamform.models.network import BipartiteNetwork, build_network
from src.teamform.models.tree import IndexSet
from src.teamform.oracle import best_matching, min_deficit_by_enumeration


@composite
def networks(draw: DrawFn, max_side: int = 4) -> BipartiteNetwork:
    n = draw(st.integers(1, max_side))
    m = draw(st.integers(1, max_side))
    pairs = [(leader, follower) for leader in range(1, n + 1) for follower in range(1, m + 1)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    constraints = {leader: draw(st.integers(1, 3)) for leader in range(1, n + 1)}
    return build_network(n, m, edges, constraints)


@composite
def matchings(draw: DrawFn, max_side: int = 4) -> Matching:
    net = draw(networks(max_side))
    room = {leader: net.constraint(leader) for leader in net.leaders()}
    assignment = {}
    for follower in net.followers():
        options = [leader for leader in net.follower_neighbors(follower) if room[leader] > 0]
        leader = draw(st.sampled_from([None] + options))
        if leader is not None:
            room[leader] -= 1
        assignment[follower] = leader
    return Matching(net, assignment)


@composite
def index_sets(draw: DrawFn) -> IndexSet:
    n = draw(st.integers(1, 9))
    return IndexSet.of(n, draw(st.sets(st.integers(1, n))))


class TestOracleProperties(unittest.TestCase):
    @given(networks())
    @settings(max_examples=60, deadline=None)
    def test_flow_matches_enumeration(self, net):
        """Test that max flow and brute force agree on d*."""
        result = best_matching(net)
        self.assertEqual(result.d_star, min_deficit_by_enumeration(net))
        self.assertEqual(result.witness.total_deficit, result.d_star)
        self.assertEqual(result.stable_exists, result.d_star == 0)

    @given(networks(), st.data())
    @settings(max_examples=80, deadline=None)
    def test_edges_never_hurt(self, net, data):
        """Test that adding an edge never raises d* and removing one never lowers it."""
        d_star = best_matching(net).d_star
        constraints = {leader: net.constraint(leader) for leader in net.leaders()}
        edges = list(net.edges())
        missing = [
            (leader, follower)
            for leader in net.leaders()
            for follower in net.followers()
            if not net.has_edge(leader, follower)
        ]
        if missing:
            extra = data.draw(st.sampled_from(missing))
            grown = build_network(net.n, net.m, edges + [extra], constraints)
            self.assertLessEqual(best_matching(grown).d_star, d_star)
        if edges:
            dropped = data.draw(st.sampled_from(edges))
            shrunk = build_network(net.n, net.m, [edge for edge in edges if edge != dropped], constraints)
            self.assertGreaterEqual(best_matching(shrunk).d_star, d_star)


class TestPathProperties(unittest.TestCase):
    @given(matchings())
    @settings(max_examples=80, deadline=None)
    def test_path_exists_until_best(self, matching):
        d_star = best_matching(matching.network).d_star
        path = shortest_dd_path(matching)
        self.assertEqual(path is None, matching.total_deficit == d_star)
        if path is not None:
            self.assertEqual(solve_dd_path(matching, path).total_deficit, matching.total_deficit - 1)

    @given(matchings())
    @settings(max_examples=40, deadline=None)
    def test_repeated_solving_reaches_best(self, matching):
        """Test that solving shortest paths until none remain reaches d*."""
        d_star = best_matching(matching.network).d_star
        while (path := shortest_dd_path(matching)) is not None:
            matching = solve_dd_path(matching, path)
        self.assertEqual(matching.total_deficit, d_star)


class TestRoundProperties(unittest.TestCase):
    @given(
        matchings(),
        st.integers(0, 2**32 - 1),
        st.sampled_from([1.0, 0.5]),
        st.sampled_from([1.0, 0.3]),
    )
    @settings(max_examples=80, deadline=None)
    def test_one_round_never_raises_deficit(self, matching, seed, p, q):
        """Test that a single round never increases the deficit or shrinks the matching."""
        rng = make_rng(seed)
        net = matching.network
        following = follower_stage(net, matching, leader_stage(net, matching, p, rng), q, rng)
        self.assertLessEqual(following.total_deficit, matching.total_deficit)
        self.assertGreaterEqual(following.size, matching.size)


class TestIndexSetProperties(unittest.TestCase):
    @given(index_sets())
    @settings(max_examples=100, deadline=None)
    def test_index_set_describes_matching(self, indexes):
        matching = matching_from_index_set(indexes)
        self.assertEqual(index_set(matching), indexes)
        self.assertEqual(matching.total_deficit, 0 if indexes.is_empty else 1)
        if not indexes.is_empty:
            self.assertEqual(height(matching), indexes.height)
            self.assertLess(indexes.height, indexes.max())


if __name__ == "__main__":
    unittest.main()
