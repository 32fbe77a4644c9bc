import math
from datetime import date

import numpy as np
import pytest

from market_rewire import (
    DistanceMatrix,
    Graph,
    SignedGraph,
    connected_components,
    cooccurrence_network,
    count_hubs,
    difference_matrix,
    differential_network,
    graph_based_entropy,
)

D0 = date(2020, 3, 2)


def dm_from(matrix, ids=None):
    matrix = np.asarray(matrix, dtype=float)
    ids = ids or tuple(f"a{i:02d}" for i in range(matrix.shape[0]))
    return DistanceMatrix(end_date=D0, asset_ids=ids, d=matrix)


def test_cooccurrence_strict_threshold():
    dm = dm_from([[0.0, 1.99], [1.99, 0.0]])
    assert cooccurrence_network(dm, 2.0).edges == {("a00", "a01")}

    dm = dm_from([[0.0, 2.0], [2.0, 0.0]])
    assert cooccurrence_network(dm, 2.0).edges == frozenset()


def test_cooccurrence_keeps_isolated_nodes():
    dm = dm_from(np.full((4, 4), 100.0) - 100.0 * np.eye(4))
    g = cooccurrence_network(dm, 2.0)
    assert g.nodes == ("a00", "a01", "a02", "a03")
    assert g.edges == frozenset()


def test_cooccurrence_threshold_validated():
    with pytest.raises(ValueError, match="> 0"):
        cooccurrence_network(dm_from([[0.0]] ), 0.0)


def test_threshold_monotonicity():
    rng = np.random.default_rng(8)
    raw = rng.uniform(0, 5, (10, 10))
    sym = (raw + raw.T) / 2
    np.fill_diagonal(sym, 0.0)
    dm = dm_from(sym)
    for lo, hi in [(0.5, 1.0), (1.0, 2.5), (2.5, 4.9)]:
        assert cooccurrence_network(dm, lo).edges <= cooccurrence_network(dm, hi).edges


def test_connected_components_textbook():
    g = Graph(end_date=D0, nodes=("a", "b", "c", "d"), edges={("a", "b"), ("b", "c")})
    comps = connected_components(g)
    assert sorted(sorted(c) for c in comps) == [["a", "b", "c"], ["d"]]


def test_connected_components_no_edges_and_complete():
    nodes = tuple("abcde")
    empty = Graph(end_date=D0, nodes=nodes, edges=frozenset())
    assert sorted(len(c) for c in connected_components(empty)) == [1] * 5

    complete = Graph(
        end_date=D0,
        nodes=nodes,
        edges={(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :]},
    )
    assert len(connected_components(complete)) == 1


def test_gbe_analytic_values():
    assert graph_based_entropy([{"a", "b", "c"}, {"d", "e", "f"}]) == 1.0
    assert graph_based_entropy([set(map(str, range(49)))]) == 0.0
    assert math.copysign(1.0, graph_based_entropy([{"a"}])) == 1.0  # +0.0, not -0.0
    assert graph_based_entropy([{"a", "b", "c", "d"}, {"e", "f"}]) == pytest.approx(
        0.9182958340544896, abs=1e-12
    )
    assert graph_based_entropy([]) == 0.0
    for n in (2, 5, 16, 49):
        singletons = [{f"n{i}"} for i in range(n)]
        assert graph_based_entropy(singletons) == pytest.approx(math.log2(n), abs=1e-12)


def test_gbe_bounds_and_equal_size_maximum():
    rng = np.random.default_rng(21)
    for _ in range(50):
        k = int(rng.integers(1, 8))
        comps = [set(f"c{i}_{j}" for j in range(int(rng.integers(1, 9)))) for i in range(k)]
        h = graph_based_entropy(comps)
        assert 0.0 <= h <= math.log2(k) + 1e-12
        if len({len(c) for c in comps}) == 1:
            assert h == pytest.approx(math.log2(k), abs=1e-12)


def test_gbe_order_invariant():
    comps = [set("abc"), set("de"), {"f"}]
    assert graph_based_entropy(comps) == graph_based_entropy(comps[::-1])


def test_merging_components_never_increases_count_and_collapse_zeroes_gbe():
    nodes = tuple(f"n{i}" for i in range(6))
    sparse = Graph(end_date=D0, nodes=nodes, edges={("n0", "n1"), ("n2", "n3")})
    before = connected_components(sparse)
    merged = Graph(
        end_date=D0, nodes=nodes, edges=sparse.edges | {("n1", "n2")}
    )
    after = connected_components(merged)
    assert len(after) <= len(before)

    chain = {(f"n{i}", f"n{i+1}") for i in range(5)}
    collapsed = Graph(end_date=D0, nodes=nodes, edges=chain)
    comps = connected_components(collapsed)
    assert len(comps) == 1
    assert graph_based_entropy(comps) == 0.0


def test_difference_matrix():
    a = dm_from([[0.0, 3.5], [3.5, 0.0]])
    b = dm_from([[0.0, 1.0], [1.0, 0.0]])
    diff = difference_matrix(a, b)
    assert diff[0, 1] == 2.5
    np.testing.assert_array_equal(diff, diff.T)
    np.testing.assert_array_equal(difference_matrix(a, a), np.zeros((2, 2)))


def test_difference_matrix_asset_mismatch():
    a = dm_from([[0.0, 1.0], [1.0, 0.0]], ids=("x", "y"))
    b = dm_from([[0.0, 1.0], [1.0, 0.0]], ids=("x", "z"))
    with pytest.raises(ValueError, match="asset sets differ"):
        difference_matrix(a, b)


def test_differential_network_strict_thresholds():
    ids = ("a", "b", "c")
    diff = np.zeros((3, 3))
    diff[0, 1] = diff[1, 0] = 1.5
    diff[0, 2] = diff[2, 0] = -1.5
    diff[1, 2] = diff[2, 1] = 1.0  # exactly delta: no edge
    sg = differential_network(diff, 1.0, ids, D0)
    assert sg.red_edges == {("a", "b")}
    assert sg.blue_edges == {("a", "c")}

    diff[1, 2] = diff[2, 1] = -1.0
    sg = differential_network(diff, 1.0, ids, D0)
    assert sg.blue_edges == {("a", "c")}


def test_differential_swap_exchanges_colors():
    rng = np.random.default_rng(13)
    raw = rng.uniform(0, 6, (8, 8))
    x_prev = (raw + raw.T) / 2
    raw2 = rng.uniform(0, 6, (8, 8))
    x_t = (raw2 + raw2.T) / 2
    np.fill_diagonal(x_prev, 0.0)
    np.fill_diagonal(x_t, 0.0)
    ids = tuple(f"a{i}" for i in range(8))
    fwd = differential_network(x_t - x_prev, 1.0, ids, D0)
    rev = differential_network(x_prev - x_t, 1.0, ids, D0)
    assert fwd.red_edges == rev.blue_edges
    assert fwd.blue_edges == rev.red_edges
    assert not (fwd.red_edges & fwd.blue_edges)


def test_count_hubs_per_color_degree():
    nodes = ("h", "x", "y", "z", "w")
    sg = SignedGraph(
        end_date=D0,
        nodes=nodes,
        red_edges=frozenset(),
        blue_edges={("h", "x"), ("h", "y"), ("h", "z")},
    )
    counts = count_hubs(sg, 3)
    assert counts.n_closer_hubs == 1
    assert counts.closer_hub_ids == {"h"}
    assert counts.n_farther_hubs == 0

    # 2 blue + 2 red edges is not enough for either hub type at k=3
    mixed = SignedGraph(
        end_date=D0,
        nodes=nodes,
        red_edges={("h", "x"), ("h", "y")},
        blue_edges={("h", "z"), ("h", "w")},
    )
    counts = count_hubs(mixed, 3)
    assert counts.n_closer_hubs == 0 and counts.n_farther_hubs == 0


def test_count_hubs_node_can_be_both():
    nodes = tuple("hxyzuvw")
    sg = SignedGraph(
        end_date=D0,
        nodes=nodes,
        red_edges={("h", "x"), ("h", "y"), ("h", "z")},
        blue_edges={("h", "u"), ("h", "v"), ("h", "w")},
    )
    counts = count_hubs(sg, 3)
    assert counts.closer_hub_ids == {"h"}
    assert counts.farther_hub_ids == {"h"}


def test_count_hubs_empty_and_validation():
    sg = SignedGraph(end_date=D0, nodes=("a", "b"), red_edges=frozenset(), blue_edges=frozenset())
    assert count_hubs(sg, 3) == (0, 0, frozenset(), frozenset())
    with pytest.raises(ValueError, match=">= 1"):
        count_hubs(sg, 0)


def test_count_hubs_relabeling_invariance():
    rng = np.random.default_rng(4)
    ids = tuple(f"n{i}" for i in range(9))
    pairs = [(ids[i], ids[j]) for i in range(9) for j in range(i + 1, 9)]
    chosen = [pairs[k] for k in rng.choice(len(pairs), size=16, replace=False)]
    red = frozenset(chosen[:8])
    blue = frozenset(chosen[8:])
    sg = SignedGraph(end_date=D0, nodes=ids, red_edges=red, blue_edges=blue)

    mapping = {n: f"renamed_{n}" for n in ids}
    sg2 = SignedGraph(
        end_date=D0,
        nodes=tuple(mapping[n] for n in ids),
        red_edges={(mapping[a], mapping[b]) for a, b in red},
        blue_edges={(mapping[a], mapping[b]) for a, b in blue},
    )
    c1, c2 = count_hubs(sg, 2), count_hubs(sg2, 2)
    assert (c1.n_closer_hubs, c1.n_farther_hubs) == (c2.n_closer_hubs, c2.n_farther_hubs)
    assert {mapping[n] for n in c1.closer_hub_ids} == c2.closer_hub_ids
    assert {mapping[n] for n in c1.farther_hub_ids} == c2.farther_hub_ids


def test_graph_type_validation():
    with pytest.raises(ValueError, match="self-loop"):
        Graph(end_date=D0, nodes=("a", "b"), edges={("a", "a")})
    with pytest.raises(ValueError, match="outside the node set"):
        Graph(end_date=D0, nodes=("a", "b"), edges={("a", "zz")})
    with pytest.raises(ValueError, match="disjoint"):
        SignedGraph(
            end_date=D0,
            nodes=("a", "b"),
            red_edges={("a", "b")},
            blue_edges={("b", "a")},
        )
