"""Co-occurrence and differential networks over distance matrices.

A co-occurrence network joins every pair of assets whose current DTW
distance falls strictly below a threshold; its connected components are
the clusters whose node-count distribution feeds graph-based entropy. A
differential network compares two consecutive distance matrices: pairs that
moved apart by strictly more than a threshold get a red edge, pairs that
moved closer a blue edge. Hubs are counted per edge color.
"""

import math
from dataclasses import dataclass
from datetime import date
from typing import NamedTuple, Sequence

import numpy as np

from .dtw import DistanceMatrix


def _canonical_edges(edges, nodes: set[str], kind: str) -> frozenset[tuple[str, str]]:
    out = set()
    for a, b in edges:
        if a == b:
            raise ValueError(f"{kind}: self-loop on {a!r}")
        if a not in nodes or b not in nodes:
            raise ValueError(f"{kind}: edge ({a!r}, {b!r}) has an endpoint outside the node set")
        out.add((a, b) if a < b else (b, a))
    return frozenset(out)


@dataclass(frozen=True)
class Graph:
    """Undirected co-occurrence network; isolated nodes are kept."""

    end_date: date
    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise ValueError("duplicate node ids")
        object.__setattr__(self, "edges", _canonical_edges(self.edges, node_set, "graph"))


@dataclass(frozen=True)
class SignedGraph:
    """Differential network: red edges moved apart, blue edges moved closer."""

    end_date: date
    nodes: tuple[str, ...]
    red_edges: frozenset[tuple[str, str]]
    blue_edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise ValueError("duplicate node ids")
        red = _canonical_edges(self.red_edges, node_set, "signed graph (red)")
        blue = _canonical_edges(self.blue_edges, node_set, "signed graph (blue)")
        if red & blue:
            raise ValueError("red and blue edge sets must be disjoint")
        object.__setattr__(self, "red_edges", red)
        object.__setattr__(self, "blue_edges", blue)


@dataclass(frozen=True)
class MetricsRow:
    """Per-day metrics. Differential fields are None on the first analyzable
    date, where no previous distance matrix exists (absent, not zero)."""

    end_date: date
    gbe: float
    n_components: int
    n_cooc_edges: int
    n_red_edges: int | None = None
    n_blue_edges: int | None = None
    n_farther_hubs: int | None = None
    n_closer_hubs: int | None = None

    @property
    def has_differential(self) -> bool:
        return self.n_red_edges is not None


class HubCounts(NamedTuple):
    n_closer_hubs: int
    n_farther_hubs: int
    closer_hub_ids: frozenset[str]
    farther_hub_ids: frozenset[str]


def cooccurrence_network(dm: DistanceMatrix, theta: float) -> Graph:
    """Graph with an edge wherever the pairwise distance is strictly below `theta`."""
    if not theta > 0:
        raise ValueError(f"co-occurrence threshold must be > 0, got {theta}")
    n = dm.n_assets
    ii, jj = np.nonzero(np.triu(dm.d < theta, k=1))
    edges = {(dm.asset_ids[i], dm.asset_ids[j]) for i, j in zip(ii.tolist(), jj.tolist())}
    return Graph(end_date=dm.end_date, nodes=dm.asset_ids, edges=frozenset(edges))


def connected_components(g: Graph) -> list[set[str]]:
    """Partition of the nodes into maximal connected sets, singletons included.

    Components are returned in order of their first node's position in
    `g.nodes`, so the output is deterministic for a given graph.
    """
    adj: dict[str, list[str]] = {node: [] for node in g.nodes}
    for a, b in g.edges:
        adj[a].append(b)
        adj[b].append(a)
    seen: set[str] = set()
    components: list[set[str]] = []
    for start in g.nodes:
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        stack = [start]
        while stack:
            node = stack.pop()
            for nb in adj[node]:
                if nb not in seen:
                    seen.add(nb)
                    comp.add(nb)
                    stack.append(nb)
        components.append(comp)
    return components


def graph_based_entropy(components: Sequence[set[str]]) -> float:
    """Shannon entropy, in bits, of the cluster-size distribution.

    Each cluster's frequency is its node count. A single cluster gives 0;
    n equal clusters give log2(n). An empty partition (zero nodes) returns
    0 by convention.
    """
    sizes = sorted((len(c) for c in components if len(c) > 0), reverse=True)
    total = sum(sizes)
    if total == 0:
        return 0.0
    h = 0.0
    for s in sizes:
        p = s / total
        h -= p * math.log2(p)
    # avoid -0.0 from the single-cluster case
    return h + 0.0


def difference_matrix(x_t: DistanceMatrix, x_prev: DistanceMatrix) -> np.ndarray:
    """Elementwise change between consecutive distance matrices (current minus previous)."""
    if x_t.asset_ids != x_prev.asset_ids:
        raise ValueError(
            "difference_matrix: asset sets differ "
            f"({x_t.asset_ids} vs {x_prev.asset_ids})"
        )
    return x_t.d - x_prev.d


def differential_network(
    diff: np.ndarray,
    delta: float,
    asset_ids: Sequence[str],
    end_date: date,
) -> SignedGraph:
    """Signed graph over a difference matrix with strict threshold `delta`.

    A red edge marks a pair whose distance grew by more than `delta`; a blue
    edge a pair whose distance shrank by more than `delta`. Entries equal to
    +/-delta produce no edge.
    """
    if not delta > 0:
        raise ValueError(f"differential threshold must be > 0, got {delta}")
    D = np.asarray(diff, dtype=float)
    ids = tuple(asset_ids)
    n = len(ids)
    if D.shape != (n, n):
        raise ValueError(f"difference matrix shape {D.shape} does not match {n} assets")
    red_i, red_j = np.nonzero(np.triu(D > delta, k=1))
    blue_i, blue_j = np.nonzero(np.triu(D < -delta, k=1))
    red = {(ids[i], ids[j]) for i, j in zip(red_i.tolist(), red_j.tolist())}
    blue = {(ids[i], ids[j]) for i, j in zip(blue_i.tolist(), blue_j.tolist())}
    return SignedGraph(
        end_date=end_date,
        nodes=ids,
        red_edges=frozenset(red),
        blue_edges=frozenset(blue),
    )


def count_hubs(sg: SignedGraph, k: int) -> HubCounts:
    """Count closer and farther hubs: nodes whose blue-edge (respectively
    red-edge) degree is at least `k`. Degrees are counted per color, so a
    node needs k edges of a single color to qualify, and may be both kinds."""
    if k < 1:
        raise ValueError(f"hub degree threshold must be >= 1, got {k}")
    blue_deg: dict[str, int] = {}
    red_deg: dict[str, int] = {}
    for a, b in sg.blue_edges:
        blue_deg[a] = blue_deg.get(a, 0) + 1
        blue_deg[b] = blue_deg.get(b, 0) + 1
    for a, b in sg.red_edges:
        red_deg[a] = red_deg.get(a, 0) + 1
        red_deg[b] = red_deg.get(b, 0) + 1
    closer = frozenset(n for n, deg in blue_deg.items() if deg >= k)
    farther = frozenset(n for n, deg in red_deg.items() if deg >= k)
    return HubCounts(len(closer), len(farther), closer, farther)
