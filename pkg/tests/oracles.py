"""
Brute-force reference implementations used to cross-check the library.
"""

import itertools
from collections import deque

import numpy as np

import vanetgraph.graph as vg


def snapshot_from_edges(n, edges, positions=None, kinds=None, time=0.0):
    """A snapshot with nodes `n00, n01, ...` and explicit edges."""
    ids = tuple(f"n{i:02d}" for i in range(n))
    if positions is None:
        positions = np.zeros((n, 2))
    if kinds is None:
        kinds = ("vehicle",) * n
    pairs = sorted({(min(i, j), max(i, j)) for i, j in edges})
    return vg.Snapshot(
        time,
        ids,
        kinds,
        np.asarray(positions, dtype=float).reshape(n, 2),
        np.asarray(pairs, dtype=np.int64).reshape(-1, 2),
    )


def adjacency_lists(n, edges):
    neighbors = [set() for _ in range(n)]
    for i, j in edges:
        neighbors[i].add(j)
        neighbors[j].add(i)
    return neighbors


def bfs_distances(n, edges):
    """All-pairs hop distances, -1 for disconnected pairs."""
    neighbors = adjacency_lists(n, edges)
    distances = -np.ones((n, n), dtype=np.int64)
    for source in range(n):
        distances[source, source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in neighbors[u]:
                if distances[source, v] < 0:
                    distances[source, v] = distances[source, u] + 1
                    queue.append(v)
    return distances


def all_shortest_paths(n, edges, source, target):
    distances = bfs_distances(n, edges)
    neighbors = adjacency_lists(n, edges)
    if distances[source, target] < 0:
        return []
    paths = []

    def extend(path):
        u = path[-1]
        if u == target:
            paths.append(tuple(path))
            return
        for v in neighbors[u]:
            if distances[source, v] == distances[source, u] + 1 and (
                distances[v, target] == distances[u, target] - 1
            ):
                extend(path + [v])

    extend([source])
    return paths


def betweenness(n, edges):
    """Betweenness by explicit shortest-path enumeration, normalised within
    each connected component."""
    distances = bfs_distances(n, edges)
    scores = np.zeros(n)
    for j, k in itertools.combinations(range(n), 2):
        if distances[j, k] <= 1:
            continue
        paths = all_shortest_paths(n, edges, j, k)
        for i in range(n):
            if i in (j, k):
                continue
            scores[i] += sum(i in path for path in paths) / len(paths)
    for i in range(n):
        size = int(np.sum(distances[i] >= 0))
        scores[i] = 0.0 if size < 3 else scores[i] / ((size - 1) * (size - 2) / 2)
    return scores


def triangles(n, edges):
    neighbors = adjacency_lists(n, edges)
    return sum(
        1
        for a, b, c in itertools.combinations(range(n), 3)
        if b in neighbors[a] and c in neighbors[a] and c in neighbors[b]
    )


def components(n, edges):
    distances = bfs_distances(n, edges)
    seen, groups = set(), []
    for i in range(n):
        if i not in seen:
            group = [j for j in range(n) if distances[i, j] >= 0]
            seen.update(group)
            groups.append(group)
    return groups


def lobby(n, edges):
    neighbors = adjacency_lists(n, edges)
    degree = [len(s) for s in neighbors]
    result = []
    for i in range(n):
        around = sorted((degree[j] for j in neighbors[i]), reverse=True)
        ranks = [k for k in range(1, len(around) + 1) if around[k - 1] >= k]
        result.append(max(ranks, default=0))
    return np.asarray(result)


def modularity(n, edges, labels):
    m = len(edges)
    degree = np.zeros(n)
    a = np.zeros((n, n))
    for i, j in edges:
        a[i, j] = a[j, i] = 1.0
        degree[i] += 1
        degree[j] += 1
    q = 0.0
    for i in range(n):
        for j in range(n):
            if labels[i] == labels[j]:
                q += a[i, j] - degree[i] * degree[j] / (2 * m)
    return q / (2 * m)


def set_partitions(n):
    """Every partition of `range(n)` as a label vector in restricted growth
    form."""

    def grow(labels, top):
        if len(labels) == n:
            yield tuple(labels)
            return
        for label in range(top + 2):
            yield from grow(labels + [label], max(top, label))

    yield from grow([0], 0)


def best_modularity(n, edges):
    return max(modularity(n, edges, labels) for labels in set_partitions(n))


def hull_area(points):
    """Convex hull by the monotone chain, area by the shoelace formula."""
    points = sorted(set(map(tuple, np.asarray(points, dtype=float).tolist())))
    if len(points) < 3:
        return 0.0

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in points:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(points):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return 0.0
    return 0.5 * abs(
        sum(
            hull[i][0] * hull[(i + 1) % len(hull)][1]
            - hull[(i + 1) % len(hull)][0] * hull[i][1]
            for i in range(len(hull))
        )
    )


def brute_force_edges(positions, radius):
    positions = np.asarray(positions, dtype=float)
    return {
        (i, j)
        for i, j in itertools.combinations(range(len(positions)), 2)
        if np.sum((positions[i] - positions[j]) ** 2) <= radius * radius
    }


def random_graph(rng, n, p):
    return [
        (i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < p
    ]
