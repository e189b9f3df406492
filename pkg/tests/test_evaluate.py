from __future__ import annotations

from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from manycolour.core import ColourSet, DomainError, EdgeColouring, FeasibilityError, popcount, to_mask
from manycolour.evaluate import (
    UnionFind,
    best_f,
    best_g,
    colour_subsets,
    graph_is_k_connected,
    is_k_connected,
    largest_k_connected,
    min_vertex_cut,
    touched_vertices,
    union_graph_components,
    val_f,
    val_f_k,
    val_g,
)

from conftest import colourings


def nx_union(c: EdgeColouring, S) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(c.n))
    G.add_edges_from(e for e, col in zip(c.pairs(), c.colours) if col in S)
    return G


def adj_of(G: nx.Graph, n: int) -> list[int]:
    return [to_mask(G.neighbors(v)) for v in range(n)]


def brute_largest_k_connected(G: nx.Graph, k: int) -> int:
    n = G.number_of_nodes()
    for size in range(n, k, -1):
        for W in combinations(range(n), size):
            H = G.subgraph(W)
            if k == 1:
                ok = nx.is_connected(H)
            else:
                ok = nx.node_connectivity(H) >= k
            if ok:
                return size
    return 1 if k == 1 and n else 0


def test_union_find():
    uf = UnionFind(5)
    assert uf.union(0, 1) and uf.union(3, 4) and not uf.union(1, 0)
    assert uf.find(0) == uf.find(1) and uf.find(2) != uf.find(3)


@given(colourings(), st.data())
def test_components_match_networkx(c, data):
    S = data.draw(st.sets(st.integers(0, c.r - 1)))
    decomp = union_graph_components(c, S)
    ours = sorted(sorted(comp) for comp in decomp.components())
    theirs = sorted(sorted(comp) for comp in nx.connected_components(nx_union(c, S)))
    assert ours == theirs
    touched = {v for e, col in zip(c.pairs(), c.colours) if col in S for v in e}
    assert touched_vertices(c, S) == touched


@settings(max_examples=60, deadline=None)
@given(colourings(n_min=2, n_max=7, r_max=3), st.integers(1, 3))
def test_k_connectivity_matches_networkx(c, k):
    S = set(range(c.r))
    G = nx_union(c, {0})
    for W in [range(c.n), range(c.n - 1), range(1, c.n)]:
        W = list(W)
        H = G.subgraph(W)
        expected = len(W) > k and nx.node_connectivity(H) >= k if len(W) > 1 else k <= 1 and len(W) == 1
        assert is_k_connected(c, {0}, W, k) == expected
    assert is_k_connected(c, S, range(c.n), 1)  # union of all colours is complete


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**28), st.integers(1, 3))
def test_largest_k_connected_matches_brute_force(n, seed, k):
    G = nx.gnp_random_graph(n, 0.55, seed=seed)
    mask, exact = largest_k_connected(adj_of(G, n), (1 << n) - 1, k)
    assert exact
    assert popcount(mask) == brute_largest_k_connected(G, k)
    if mask:
        assert graph_is_k_connected(adj_of(G, n), mask, k)


def test_min_vertex_cut_on_known_graphs():
    n = 6
    cycle = adj_of(nx.cycle_graph(n), n)
    assert min_vertex_cut(cycle, (1 << n) - 1, 2) is None
    cut = min_vertex_cut(cycle, (1 << n) - 1, 3)
    assert cut is not None and popcount(cut) == 2
    # two triangles sharing vertex 2
    G = nx.Graph([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert min_vertex_cut(adj_of(G, 5), 0b11111, 2) == 1 << 2


def test_single_vertex_and_trivial_conventions():
    c = EdgeColouring(3, 2, (0, 0, 0))
    assert is_k_connected(c, {1}, [0], 1)  # K_1 is connected
    assert not is_k_connected(c, {1}, [0, 1], 1)
    assert not is_k_connected(c, {0}, [0, 1], 2)
    assert not is_k_connected(c, {0}, [], 0)
    with pytest.raises(DomainError):
        is_k_connected(c, {0}, [0, 5], 1)


def test_colour_subsets_order_and_guard():
    assert [tuple(ColourSet(4, b)) for b in colour_subsets(4, 2)] == list(combinations(range(4), 2))
    with pytest.raises(FeasibilityError):
        list(colour_subsets(40, 20))
    with pytest.raises(DomainError):
        list(colour_subsets(3, 4))


@settings(max_examples=80, deadline=None)
@given(colourings(n_min=1, n_max=7, r_max=4), st.data())
def test_values_against_networkx(c, data):
    s = data.draw(st.integers(1, c.r))
    f = max(max(len(comp) for comp in nx.connected_components(nx_union(c, set(S))))
            for S in combinations(range(c.r), s))
    g = max(len(touched_vertices(c, S)) for S in combinations(range(c.r), s))
    assert val_f(c, s) == f and val_g(c, s) == g
    assert val_f(c, s) <= val_g(c, s) or val_g(c, s) == 0
    res = best_f(c, s)
    assert is_k_connected(c, res.colours, res.witness, 1) and len(res.witness) == res.value
    if s < c.r:
        assert val_f(c, s) <= val_f(c, s + 1) and val_g(c, s) <= val_g(c, s + 1)


def test_first_maximizing_set_is_kept():
    # every single colour gives a component of size 2
    c = EdgeColouring(4, 3, (0, 1, 2, 2, 1, 0))
    assert best_f(c, 1).colours.members() == [0]
    assert best_g(c, 1).colours.members() == [0]


def test_k_connected_value_on_cycle_blowup():
    # colour 0 is a 5-cycle, colour 1 the complement (another 5-cycle)
    n = 5
    cyc = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
    c = EdgeColouring.from_function(n, 2, lambda u, v: 0 if (min(u, v), max(u, v)) in cyc else 1)
    assert val_f_k(c, 1, 2) == 5
    assert val_f_k(c, 1, 3) == 0
    assert val_f_k(c, 2, 4) == 5
