"""Graphs over voxels and point sets, and their Laplacian matrices.

Two constructions feed the spectral pipeline: the adjacency graph of an
occupied voxel grid (nodes are voxels, edges join spatially adjacent
cells) and the k-nearest-neighbor graph of a point set. Both produce
undirected, positively weighted graphs with canonical node and edge
ordering so every downstream artifact is deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_array, coo_array

from .voxelizer import VoxelGrid

# Positive-lexicographic neighbor offsets, grouped by adjacency class:
# 6 = shared face, 18 = +shared edge, 26 = +shared corner.
_FACE_OFFSETS = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
_EDGE_OFFSETS = [(1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1), (0, 1, 1), (0, 1, -1)]
_CORNER_OFFSETS = [(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)]


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph with per-node payload.

    Attributes:
        node_count: number of nodes.
        edges: (m, 2) int64 array of node index pairs with p < q, sorted
            lexicographically; no duplicates, no self-loops.
        weights: (m,) float64 array of strictly positive edge weights.
        coords: (n, d) array of node positions (voxel integer coordinates
            or point coordinates); None when nodes carry no geometry.
        values: (n,) float64 array of node values (voxel values); None
            means implicit 1.0.
    """

    node_count: int
    edges: np.ndarray
    weights: np.ndarray
    coords: np.ndarray | None = None
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("graph needs at least one node")
        edges = np.ascontiguousarray(np.asarray(self.edges, dtype=np.int64)).reshape(-1, 2)
        weights = np.ascontiguousarray(np.asarray(self.weights, dtype=np.float64)).ravel()
        if edges.shape[0] != weights.shape[0]:
            raise ValueError("edges and weights length mismatch")
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.node_count:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise ValueError("edges must satisfy p < q")
            if np.any(weights <= 0):
                raise ValueError("edge weights must be > 0")
            keys = edges[:, 0] * self.node_count + edges[:, 1]
            if np.unique(keys).size != keys.size:
                raise ValueError("duplicate edge")
        edges.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)

    @property
    def edge_count(self) -> int:
        return self.edges.shape[0]

    def node_values(self) -> np.ndarray:
        if self.values is None:
            return np.ones(self.node_count, dtype=np.float64)
        return np.asarray(self.values, dtype=np.float64)


def _canonical_edges(pairs: set[tuple[int, int]]) -> np.ndarray:
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    arr = np.asarray(sorted(pairs), dtype=np.int64)
    return arr


def build_adjacency_graph(grid: VoxelGrid, connectivity: int = 6) -> Graph:
    """Build the adjacency graph of the occupied voxels.

    One node per occupied voxel, ordered lexicographically by (x, y, z).
    Unit-weight edges join voxels whose coordinates differ by an offset
    of the chosen neighborhood: 6 (face), 18 (face+edge) or 26
    (face+edge+corner).

    Raises:
        ValueError: empty grid or unknown connectivity.
    """
    if connectivity not in (6, 18, 26):
        raise ValueError(f"connectivity must be 6, 18 or 26, got {connectivity}")
    if grid.occupied_count == 0:
        raise ValueError("empty voxel grid")

    coords, values = grid.sorted_items()
    index = {tuple(c): i for i, c in enumerate(coords.tolist())}
    offsets = list(_FACE_OFFSETS)
    if connectivity >= 18:
        offsets += _EDGE_OFFSETS
    if connectivity == 26:
        offsets += _CORNER_OFFSETS

    pairs: set[tuple[int, int]] = set()
    for (x, y, z), p in index.items():
        for dx, dy, dz in offsets:
            q = index.get((x + dx, y + dy, z + dz))
            if q is not None:
                pairs.add((p, q) if p < q else (q, p))

    edges = _canonical_edges(pairs)
    return Graph(node_count=len(coords), edges=edges,
                 weights=np.ones(len(edges)), coords=coords, values=values)


def build_knn_graph(points: np.ndarray, k: int) -> Graph:
    """Connect every point to its k nearest Euclidean neighbors.

    The directed neighbor relation is symmetrized by union into
    undirected unit-weight edges. Distance ties break toward the smaller
    point index, which makes the result deterministic.

    Raises:
        ValueError: no points, or k not in [1, n).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    if n == 0:
        raise ValueError("no points")
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < {n}, got {k}")

    diffs = pts[:, None, :] - pts[None, :, :]
    dist2 = np.einsum("ijk,ijk->ij", diffs, diffs)
    pairs: set[tuple[int, int]] = set()
    for i in range(n):
        order = np.argsort(dist2[i], kind="stable")  # ties fall to smaller index
        picked = 0
        for j in order:
            if j == i:
                continue
            pairs.add((i, int(j)) if i < j else (int(j), i))
            picked += 1
            if picked == k:
                break

    edges = _canonical_edges(pairs)
    return Graph(node_count=n, edges=edges, weights=np.ones(len(edges)), coords=pts)


def laplacian(graph: Graph) -> csr_array:
    """Assemble the graph Laplacian as a symmetric CSR matrix.

    Off-diagonal entries are the negated edge weights, diagonal entries
    the weighted degrees, everything else zero.
    """
    n = graph.node_count
    p = graph.edges[:, 0]
    q = graph.edges[:, 1]
    w = graph.weights
    degrees = np.zeros(n, dtype=np.float64)
    np.add.at(degrees, p, w)
    np.add.at(degrees, q, w)

    rows = np.concatenate([p, q, np.arange(n)])
    cols = np.concatenate([q, p, np.arange(n)])
    data = np.concatenate([-w, -w, degrees])
    return csr_array(coo_array((data, (rows, cols)), shape=(n, n)))


def _adjacency_lists(graph: Graph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(graph.node_count)]
    for p, q in graph.edges:
        adj[p].append(int(q))
        adj[q].append(int(p))
    for nbrs in adj:
        nbrs.sort()
    return adj


def connected_components(graph: Graph) -> np.ndarray:
    """Label nodes 0..c-1 by breadth-first search from the lowest
    unvisited index."""
    adj = _adjacency_lists(graph)
    labels = np.full(graph.node_count, -1, dtype=np.int64)
    current = 0
    for start in range(graph.node_count):
        if labels[start] != -1:
            continue
        queue = deque([start])
        labels[start] = current
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if labels[v] == -1:
                    labels[v] = current
                    queue.append(v)
        current += 1
    return labels


def bridge_components(graph: Graph) -> Graph:
    """Connect a disconnected graph by adding minimal unit-weight edges.

    While more than one component remains, the globally closest pair of
    nodes (Euclidean on node coordinates) belonging to different
    components gains an edge; distance ties resolve to the
    lexicographically smallest (p, q). Connected inputs are returned
    unchanged.

    Raises:
        ValueError: if the graph carries no node coordinates.
    """
    labels = connected_components(graph)
    n_comp = int(labels.max()) + 1
    if n_comp == 1:
        return graph
    if graph.coords is None:
        raise ValueError("bridging needs node coordinates")

    coords = np.asarray(graph.coords, dtype=np.float64)
    pairs = {tuple(e) for e in graph.edges.tolist()}
    added: list[tuple[int, int]] = []
    while n_comp > 1:
        members = [np.nonzero(labels == c)[0] for c in range(int(labels.max()) + 1)]
        members = [m for m in members if m.size]
        best = None  # (dist2, p, q)
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                ia, ib = members[a], members[b]
                d = coords[ia][:, None, :] - coords[ib][None, :, :]
                d2 = np.einsum("ijk,ijk->ij", d, d)
                closest = float(d2.min())
                # Scan the whole minimum plane so distance ties resolve to
                # the lexicographically smallest node pair.
                for r, c in np.argwhere(d2 == closest):
                    p, q = int(ia[r]), int(ib[c])
                    if p > q:
                        p, q = q, p
                    cand = (closest, p, q)
                    if best is None or cand < best:
                        best = cand
        _, p, q = best
        pairs.add((p, q))
        added.append((p, q))
        lp, lq = labels[p], labels[q]
        labels[labels == max(lp, lq)] = min(lp, lq)
        labels[labels > max(lp, lq)] -= 1
        n_comp -= 1

    edges = _canonical_edges(pairs)
    return Graph(node_count=graph.node_count, edges=edges,
                 weights=np.ones(len(edges)), coords=graph.coords, values=graph.values)


def bridges_added(original: Graph, bridged: Graph) -> int:
    """Number of edges a bridging pass added."""
    return bridged.edge_count - original.edge_count


def write_edge_list(graph: Graph) -> str:
    """Debug dump: one 'p q w' line per edge."""
    lines = [f"{p} {q} {w:.17g}" for (p, q), w in zip(graph.edges.tolist(), graph.weights)]
    return "\n".join(lines) + ("\n" if lines else "")
