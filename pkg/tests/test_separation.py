from itertools import combinations

import numpy as np
import pytest

from clusterdisco.clusters import ClusterGraph, ClusterPartition
from clusterdisco.graphs import (ARROW, CIRCLE, TAIL, GraphError, MixedGraph,
                                 default_labels)
from clusterdisco.separation import (cluster_d_separated, d_separated,
                                     discriminating_path, m_separated,
                                     mags_markov_equivalent, mns,
                                     possible_d_sep, primitive_inducing_path)

from oracles import (all_simple_paths, inducing_by_paths,
                     minimal_neighbor_separators, msep_by_paths, pds_by_paths,
                     random_admg, random_dag)


def g_of(n, *edges):
    g = MixedGraph(default_labels(n))
    for a, b, ma, mb in edges:
        g.set_edge(a, b, ma, mb)
    return g


CHAIN = g_of(3, (0, 1, TAIL, ARROW), (1, 2, TAIL, ARROW))
COLLIDER = g_of(3, (0, 1, TAIL, ARROW), (2, 1, TAIL, ARROW))

# bidirected path 0-1-2 whose collider 1 is an ancestor of 0 through node 3;
# 0 and 2 are then non-adjacent yet inseparable (inducing path)
INDUCING = g_of(4, (0, 1, ARROW, ARROW), (1, 2, ARROW, ARROW),
                (1, 3, TAIL, ARROW), (3, 0, TAIL, ARROW))


class TestDSeparation:
    def test_blocked_chain(self):
        assert d_separated(CHAIN, 0, 2, {1})

    def test_collider_opens(self):
        assert d_separated(COLLIDER, 0, 2)
        assert not d_separated(COLLIDER, 0, 2, {1})

    def test_direct_edge_never_blocked(self):
        g = g_of(3, (0, 1, TAIL, ARROW), (1, 2, TAIL, ARROW), (0, 2, TAIL, ARROW))
        assert not d_separated(g, 0, 2, {1})

    def test_rejects_overlapping_sets(self):
        with pytest.raises(GraphError):
            d_separated(CHAIN, 0, 2, {0})

    def test_rejects_mixed_graphs(self):
        with pytest.raises(GraphError):
            d_separated(g_of(2, (0, 1, ARROW, ARROW)), 0, 1)

    def test_matches_path_enumeration_on_random_dags(self):
        # reachability against explicit path blocking, > 500 checks
        rng = np.random.default_rng(42)
        checks = 0
        while checks < 600:
            g = random_dag(6, 0.35, rng)
            x, y = rng.choice(6, size=2, replace=False)
            rest = sorted(set(range(6)) - {x, y})
            for k in range(len(rest) + 1):
                for s in combinations(rest, k):
                    assert d_separated(g, int(x), int(y), s) == \
                        msep_by_paths(g, int(x), int(y), s)
                    checks += 1


class TestMSeparation:
    def test_direct_bidirected(self):
        assert not m_separated(g_of(2, (0, 1, ARROW, ARROW)), 0, 1)

    def test_noncollider_blocks(self):
        g = g_of(3, (0, 1, ARROW, ARROW), (1, 2, TAIL, ARROW))
        assert m_separated(g, 0, 2, {1})
        assert msep_by_paths(g, 0, 2, {1})

    def test_inducing_pair_has_no_separator(self):
        assert not m_separated(INDUCING, 0, 2)
        rest = sorted(set(range(4)) - {0, 2})
        for k in range(len(rest) + 1):
            for s in combinations(rest, k):
                assert not m_separated(INDUCING, 0, 2, s)

    def test_rejects_circles(self):
        with pytest.raises(GraphError):
            m_separated(g_of(2, (0, 1, CIRCLE, CIRCLE)), 0, 1)

    def test_reduces_to_dsep_on_dags(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            g = random_dag(6, 0.3, rng)
            x, y = rng.choice(6, size=2, replace=False)
            s = {int(v) for v in rng.choice(6, size=2, replace=False)} - {int(x), int(y)}
            assert m_separated(g, int(x), int(y), s) == d_separated(g, int(x), int(y), s)

    def test_matches_path_enumeration_on_admgs(self):
        rng = np.random.default_rng(12)
        for _ in range(120):
            g = random_admg(6, 0.25, 0.2, rng)
            x, y = (int(v) for v in rng.choice(6, size=2, replace=False))
            s = frozenset(int(v) for v in rng.choice(6, size=2, replace=False)) - {x, y}
            assert m_separated(g, x, y, s) == msep_by_paths(g, x, y, s)


def make_cluster_graph(r, directed=(), bidirected=()):
    part = ClusterPartition.from_sets([f"X{i}" for i in range(r)],
                                      [frozenset((i,)) for i in range(r)])
    return ClusterGraph(part, directed, bidirected)


class TestClusterDSeparation:
    def test_chain(self):
        gc = make_cluster_graph(3, directed=[(0, 1), (1, 2)])
        assert cluster_d_separated(gc, 0, 2, {1})

    def test_cluster_collider(self):
        gc = make_cluster_graph(3, directed=[(0, 2), (1, 2)])
        assert cluster_d_separated(gc, 0, 1)

    def test_bidirected_then_directed(self):
        gc = make_cluster_graph(3, directed=[(1, 2)], bidirected=[(0, 1)])
        assert cluster_d_separated(gc, 0, 2, {1})
        assert not cluster_d_separated(gc, 0, 2)

    def test_parallel_edges_both_traversable(self):
        # 0 -> 1 and 0 <-> 1, then 1 -> 2: conditioning on 1 blocks the
        # directed reading but 0 <-> 1 -> 2 is blocked too (1 non-collider)
        gc = make_cluster_graph(3, directed=[(0, 1), (1, 2)], bidirected=[(0, 1)])
        assert cluster_d_separated(gc, 0, 2, {1})
        # collider at 1 via <-> and <- : 0 <-> 1 <- 2 leaves 0, 2 separated
        gc2 = make_cluster_graph(3, directed=[(2, 1)], bidirected=[(0, 1)])
        assert cluster_d_separated(gc2, 0, 2)
        assert not cluster_d_separated(gc2, 0, 2, {1})


class TestInducingPaths:
    def test_collider_ancestor_path(self):
        assert primitive_inducing_path(INDUCING, 0, 2)
        assert inducing_by_paths(INDUCING, 0, 2)

    def test_chain_is_not_inducing(self):
        assert not primitive_inducing_path(CHAIN, 0, 2)

    def test_adjacent_pair_vacuous(self):
        assert primitive_inducing_path(g_of(2, (0, 1, TAIL, ARROW)), 0, 1)

    def test_matches_enumeration_on_random_admgs(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            g = random_admg(6, 0.2, 0.2, rng)
            x, y = (int(v) for v in rng.choice(6, size=2, replace=False))
            assert primitive_inducing_path(g, x, y) == inducing_by_paths(g, x, y)


class TestPossibleDSep:
    def test_circle_chain(self):
        g = g_of(3, (0, 1, CIRCLE, CIRCLE), (1, 2, CIRCLE, CIRCLE))
        assert possible_d_sep(g, 0, 2) == {1}

    def test_collider_extension(self):
        g = g_of(4, (0, 1, TAIL, ARROW), (2, 1, TAIL, ARROW), (2, 3, TAIL, ARROW))
        assert {1, 2} <= possible_d_sep(g, 0, 3)

    def test_empty_graph(self):
        assert possible_d_sep(MixedGraph(default_labels(3)), 0, 2) == set()

    def test_same_node_rejected(self):
        with pytest.raises(GraphError):
            possible_d_sep(CHAIN, 1, 1)

    def test_matches_enumeration(self):
        rng = np.random.default_rng(14)
        for _ in range(80):
            g = random_admg(6, 0.25, 0.2, rng)
            x, y = (int(v) for v in rng.choice(6, size=2, replace=False))
            assert possible_d_sep(g, x, y) == pds_by_paths(g, x, y)


class TestDiscriminatingPath:
    def test_textbook_instance(self):
        # 0 *-> 1, 1 <-> 2, 1 -> 3, 2 o-> 3; (0,1,2,3) discriminates 2
        g = g_of(4, (0, 1, TAIL, ARROW), (1, 2, ARROW, ARROW),
                 (1, 3, TAIL, ARROW), (2, 3, CIRCLE, ARROW))
        assert discriminating_path(g, 0, 3, 2) == (0, 1, 2, 3)

    def test_two_edge_path_rejected(self):
        g = g_of(3, (0, 1, TAIL, ARROW), (1, 2, CIRCLE, ARROW))
        assert discriminating_path(g, 0, 2, 1) is None

    def test_disconnected(self):
        assert discriminating_path(MixedGraph(default_labels(4)), 0, 3, 2) is None

    def test_requires_nonadjacent_endpoints(self):
        g = g_of(4, (0, 1, TAIL, ARROW), (1, 2, ARROW, ARROW),
                 (1, 3, TAIL, ARROW), (2, 3, CIRCLE, ARROW), (0, 3, TAIL, ARROW))
        assert discriminating_path(g, 0, 3, 2) is None


class TestMagEquivalence:
    def test_identical(self):
        g = g_of(2, (0, 1, TAIL, ARROW))
        assert mags_markov_equivalent(g, g.copy())

    def test_single_edge_orientations_equivalent(self):
        assert mags_markov_equivalent(g_of(2, (0, 1, TAIL, ARROW)),
                                      g_of(2, (0, 1, ARROW, TAIL)))

    def test_collider_vs_chain(self):
        chain = g_of(3, (0, 1, TAIL, ARROW), (1, 2, TAIL, ARROW))
        assert not mags_markov_equivalent(COLLIDER, chain)

    def test_rejects_non_mags(self):
        with pytest.raises(GraphError):
            mags_markov_equivalent(INDUCING, INDUCING.copy())


class TestMns:
    def test_chain(self):
        assert mns(CHAIN, 2, 0) == {1}

    def test_disconnected(self):
        g = g_of(3, (0, 1, TAIL, ARROW))
        assert mns(g, 2, 0) == frozenset()

    def test_diamond(self):
        g = g_of(4, (0, 1, TAIL, ARROW), (0, 2, TAIL, ARROW),
                 (1, 3, TAIL, ARROW), (2, 3, TAIL, ARROW))
        assert mns(g, 3, 0) == {1, 2}
        assert minimal_neighbor_separators(g, 3, 0) == [frozenset({1, 2})]

    def test_precondition(self):
        with pytest.raises(GraphError):
            mns(CHAIN, 0, 2)  # 2 is a descendant of 0
        with pytest.raises(GraphError):
            mns(CHAIN, 1, 0)  # 0 neighbors 1

    def test_subset_of_parents_unique_minimal(self):
        rng = np.random.default_rng(15)
        done = 0
        while done < 60:
            g = random_dag(6, 0.35, rng)
            x, a = (int(v) for v in rng.choice(6, size=2, replace=False))
            if a in g.descendants(x) or a in g.adjacents(x):
                continue
            s = mns(g, x, a)
            assert s <= g.parents(x)
            assert d_separated(g, a, x, s)
            for p in s:
                assert not d_separated(g, a, x, s - {p})
            assert minimal_neighbor_separators(g, x, a) == [s]
            done += 1


def test_maximality_link_in_mags():
    # in a MAG, every non-adjacent pair is m-separated by some subset of its
    # possible-d-sep set
    from clusterdisco.synthesis import project_to_mag
    rng = np.random.default_rng(16)
    checked = 0
    for _ in range(40):
        g = random_dag(7, 0.3, rng)
        lat = frozenset(int(v) for v in rng.choice(7, size=2, replace=False))
        mag = project_to_mag(g, lat)
        for x, y in combinations(range(mag.n), 2):
            if mag.has_edge(x, y):
                continue
            pool = sorted(possible_d_sep(mag, x, y))
            found = any(m_separated(mag, x, y, s)
                        for k in range(len(pool) + 1)
                        for s in combinations(pool, k))
            assert found
            checked += 1
    assert checked > 50
