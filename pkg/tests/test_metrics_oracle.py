"""
Cross-check the graph metrics against brute-force computations on small
random graphs.
"""

import pytest

import networkx as nx
import numpy as np
from jax import config

import vanetgraph.coordinates as vc
import vanetgraph.graph as vg
import vanetgraph.metrics as vm

from . import oracles

config.update("jax_enable_x64", True)


def _random_instances(seed, count=10):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(3, 13))
        edges = oracles.random_graph(rng, n, float(rng.uniform(0.15, 0.6)))
        yield n, edges, rng


def _effective_diameter(distances):
    pairs = np.sort(distances[np.triu_indices(distances.shape[0], k=1)])
    pairs = pairs[pairs > 0]
    if pairs.size == 0:
        return None
    for d in range(1, int(pairs.max()) + 1):
        if 10 * np.sum(pairs <= d) >= 9 * pairs.size:
            return d


@pytest.mark.parametrize("seed", range(20))
def test_metrics_match_brute_force(seed):
    for n, edges, rng in _random_instances(seed):
        snapshot = oracles.snapshot_from_edges(n, edges)
        distances = oracles.bfs_distances(n, edges)

        np.testing.assert_array_equal(vm.hop_distances(snapshot), distances)
        np.testing.assert_allclose(
            vm.betweenness_centrality(snapshot),
            oracles.betweenness(n, edges),
            atol=1e-9,
        )
        np.testing.assert_array_equal(
            vm.lobby_index(snapshot), oracles.lobby(n, edges)
        )
        assert vm.triangle_count(snapshot) == oracles.triangles(n, edges)
        assert vm.effective_diameter(snapshot) == _effective_diameter(distances)

        connected = distances[np.triu_indices(n, k=1)]
        connected = connected[connected > 0]
        separation = vm.avg_separation(snapshot)
        if connected.size == 0:
            assert separation is None
        else:
            np.testing.assert_allclose(separation, connected.mean(), atol=1e-9)

        components = vm.connected_components(snapshot)
        assert [
            np.asarray(c.member_indices).tolist() for c in components
        ] == oracles.components(n, edges)

        if edges:
            labels = rng.integers(0, 3, size=n)
            np.testing.assert_allclose(
                vm.modularity(snapshot, labels),
                oracles.modularity(n, edges, labels),
                atol=1e-9,
            )


def test_greedy_communities_reach_exhaustive_optimum(bridged_k4s):
    edges = [tuple(e) for e in np.asarray(bridged_k4s.edges).tolist()]
    partition = vm.detect_communities(bridged_k4s)
    np.testing.assert_allclose(
        partition.modularity, oracles.best_modularity(8, edges), atol=1e-12
    )


@pytest.mark.parametrize("seed", [3, 11, 17])
def test_modularity_is_bounded(seed):
    for n, edges, rng in _random_instances(seed, count=5):
        if not edges:
            continue
        snapshot = oracles.snapshot_from_edges(n, edges)
        partition = vm.detect_communities(snapshot)
        assert -1.0 <= partition.modularity <= 1.0
        # The greedy result is never worse than the trivial partition.
        assert partition.modularity >= -1e-12


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_biggest_cluster_matches_hull_oracle(seed):
    rng = np.random.default_rng(seed)
    region = vc.Region(0.0, 0.0, 1000.0, 1000.0)
    positions = rng.uniform(0.0, 1000.0, size=(12, 2))
    snapshot = vg.build_snapshot_from_arrays(
        [f"n{i:02d}" for i in range(12)],
        ["vehicle"] * 12,
        positions,
        vg.UnitDiskRadio(400.0),
    )
    edges = sorted(oracles.brute_force_edges(positions, 400.0))
    groups = oracles.components(12, edges)
    largest = max(groups, key=len)

    report = vm.biggest_cluster_report(snapshot, region)
    assert np.asarray(report.member_indices).tolist() == largest
    np.testing.assert_allclose(
        report.hull_area, oracles.hull_area(positions[largest]), rtol=1e-9
    )
    np.testing.assert_allclose(
        report.hull_area_fraction, report.hull_area / region.area
    )
    assert report.membership_fraction == len(largest) / 12


@pytest.mark.parametrize("seed", [5, 6])
def test_connected_graphs_match_networkx(seed):
    for n, edges, _ in _random_instances(seed):
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(edges)
        if not edges or not nx.is_connected(graph):
            continue
        snapshot = oracles.snapshot_from_edges(n, edges)
        expected = nx.betweenness_centrality(graph, normalized=True)
        np.testing.assert_allclose(
            vm.betweenness_centrality(snapshot),
            [expected[i] for i in range(n)],
            atol=1e-9,
        )
        assert vm.triangle_count(snapshot) == sum(nx.triangles(graph).values()) // 3
        partition = vm.detect_communities(snapshot)
        labels = np.asarray(partition.labels).tolist()
        communities = [
            {i for i in range(n) if labels[i] == c} for c in range(partition.count)
        ]
        np.testing.assert_allclose(
            partition.modularity,
            nx.community.modularity(graph, communities),
            atol=1e-9,
        )


@pytest.mark.parametrize("seed", [7, 8, 9])
def test_communities_follow_greedy_agglomeration(seed):
    for n, edges, _ in _random_instances(seed):
        if not edges:
            continue
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(edges)
        expected = {
            frozenset(c) for c in nx.community.greedy_modularity_communities(graph)
        }
        partition = vm.detect_communities(oracles.snapshot_from_edges(n, edges))
        labels = np.asarray(partition.labels)
        found = {
            frozenset(np.flatnonzero(labels == c).tolist())
            for c in range(partition.count)
        }
        assert found == expected
        # Labels follow the smallest member of each community.
        firsts = [int(np.flatnonzero(labels == c)[0]) for c in range(partition.count)]
        assert firsts == sorted(firsts)
