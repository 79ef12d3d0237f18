import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bfs_component_count, grid_faces
from pottsmix.graph import (
    DualMap,
    Graph,
    GraphError,
    UnionFind,
    build_dual_square_lattice,
    build_square_lattice,
    build_tree_dual,
    component_counts,
    connected_components,
    cycle_graph,
    dual_index_map,
    dual_rc_state,
    edges_from_mask,
    is_tree,
    max_degree,
    path_graph,
    primal_rc_state,
    rc_index,
    star_graph,
)


@pytest.mark.parametrize("L, n, m", [(1, 1, 0), (2, 4, 4), (3, 9, 12), (4, 16, 24), (5, 25, 40)])
def test_square_lattice_sizes(L, n, m):
    g = build_square_lattice(L)
    assert (g.n_vertices, g.n_edges) == (n, m)
    assert g.n_edges == 2 * L * (L - 1)


def test_square_lattice_edges_are_distance_one_pairs():
    L = 4
    g = build_square_lattice(L)
    coords = {v: divmod(v, L) for v in range(L * L)}
    expected = {(a, b) for a, b in itertools.combinations(range(L * L), 2)
                if abs(coords[a][0] - coords[b][0]) + abs(coords[a][1] - coords[b][1]) == 1}
    assert set(g.edges) == expected
    assert len(g.edges) == len(expected)


def test_square_lattice_rejects_bad_side():
    with pytest.raises(GraphError):
        build_square_lattice(0)


def test_graph_rejects_out_of_range_edge():
    with pytest.raises(GraphError):
        Graph(2, ((0, 2),))


def test_degree_counts_loops_twice():
    g = Graph(2, ((0, 0), (0, 1), (0, 1)))
    assert g.degree(0) == 4
    assert g.degree(1) == 2
    assert g.neighbors[0] == (1, 1)


@pytest.mark.parametrize("L", [2, 3, 4, 5, 6])
def test_dual_lattice_counts_and_outer_degree(L):
    d = build_dual_square_lattice(L)
    assert d.dual.n_edges == d.primal.n_edges == 2 * L * (L - 1)
    assert d.dual.degree(d.outer_vertex) == 4 * (L - 1)
    # Euler: faces = |E| - |V| + 2
    assert d.dual.n_vertices == d.primal.n_edges - d.primal.n_vertices + 2


def test_dual_of_g3():
    d = build_dual_square_lattice(3)
    assert d.dual.n_vertices == 5
    assert d.dual.n_edges == 12
    assert d.dual.degree(4) == 8
    assert max_degree(d.dual, exclude=d.outer_vertex) == 4


def test_dual_of_g2_is_four_parallel_edges():
    d = build_dual_square_lattice(2)
    assert d.dual.n_vertices == 2
    assert sorted(d.dual.edges) == [(0, 1)] * 4


@pytest.mark.parametrize("L", [2, 3, 4])
def test_dual_edges_cross_their_primal_edges(L):
    d = build_dual_square_lattice(L)
    faces = grid_faces(L)
    for e, (u, v) in enumerate(d.primal.edges):
        ed = d.edge_bijection[e]
        assert tuple(sorted(d.dual.edges[ed])) == faces[(u, v)]


def test_dual_map_rejects_non_bijection():
    g = path_graph(3)
    with pytest.raises(GraphError):
        DualMap(g, Graph(1, ((0, 0), (0, 0))), (0, 0))


def test_tree_duals():
    d = build_tree_dual(path_graph(2))
    assert (d.dual.n_vertices, d.dual.edges) == (1, ((0, 0),))
    d = build_tree_dual(star_graph(3))
    assert d.dual.n_vertices == 1 and d.dual.n_edges == 3
    assert all(u == v == 0 for u, v in d.dual.edges)
    with pytest.raises(GraphError):
        build_tree_dual(cycle_graph(4))


def test_is_tree():
    assert is_tree(path_graph(5))
    assert is_tree(star_graph(4))
    assert is_tree(build_square_lattice(1))
    assert not is_tree(cycle_graph(4))
    assert not is_tree(build_square_lattice(2))
    assert not is_tree(Graph(3, ((0, 1),)))


def test_dual_state_of_empty_and_full():
    d = build_dual_square_lattice(3)
    m = d.primal.n_edges
    assert dual_rc_state(bytearray(m), d) == bytearray([1]) * m
    assert dual_rc_state(bytearray([1]) * m, d) == bytearray(m)


def test_dual_state_of_five_edge_example():
    # Vertex (x, y) of the 3x3 grid, 1-based, is (y-1)*3 + (x-1).
    def vid(x, y):
        return (y - 1) * 3 + (x - 1)

    pairs = [((2, 3), (3, 3)), ((2, 2), (2, 3)), ((1, 3), (1, 2)), ((1, 2), (2, 2)), ((2, 1), (1, 1))]
    d = build_dual_square_lattice(3)
    lookup = {e: i for i, e in enumerate(d.primal.edges)}
    A = bytearray(d.primal.n_edges)
    for a, b in pairs:
        A[lookup[tuple(sorted((vid(*a), vid(*b))))]] = 1
    AD = dual_rc_state(A, d)
    open_dual = sorted(tuple(sorted(d.dual.edges[ed])) for ed in range(d.dual.n_edges) if AD[ed])
    # Derived by hand: closed primal edges 1-4 and 4-5 are the only interior ones,
    # giving inner dual edges between faces 0,1 and 1,3; the five closed boundary
    # edges each give an edge to the outer vertex 4.
    assert open_dual == [(0, 1), (0, 4), (1, 3), (1, 4), (1, 4), (2, 4), (3, 4)]


@pytest.mark.parametrize("dmap", [build_dual_square_lattice(2), build_dual_square_lattice(3),
                                  build_tree_dual(star_graph(4))], ids=["G2", "G3", "K1_4"])
def test_dual_state_is_a_bijection(dmap):
    m = dmap.primal.n_edges
    images = set()
    for mask in range(1 << m):
        A = edges_from_mask(mask, m)
        AD = dual_rc_state(A, dmap)
        assert primal_rc_state(AD, dmap) == A
        images.add(rc_index(AD))
    assert len(images) == 1 << m
    dmask = dual_index_map(dmap)
    assert all(dmask[mask] == rc_index(dual_rc_state(edges_from_mask(mask, m), dmap))
               for mask in range(0, 1 << m, 7))


def test_components_trivial_cases():
    g = build_square_lattice(3)
    assert connected_components(g, bytearray(12)).count == 9
    assert connected_components(g, bytearray([1]) * 12).count == 1
    tree_dual = build_tree_dual(path_graph(4)).dual
    for mask in range(8):
        assert connected_components(tree_dual, edges_from_mask(mask, 3)).count == 1


def test_component_labels_are_ordered_by_smallest_vertex():
    g = path_graph(4)
    lab = connected_components(g, bytearray([0, 0, 1]))
    assert lab.count == 3
    assert lab.label == (0, 1, 2, 2)


@st.composite
def graph_and_subset(draw):
    n = draw(st.integers(1, 8))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=12))
    subset = draw(st.lists(st.booleans(), min_size=len(edges), max_size=len(edges)))
    return n, edges, subset


@settings(max_examples=1000, deadline=None)
@given(graph_and_subset())
def test_components_match_bfs(case):
    n, edges, subset = case
    g = Graph(n, tuple(edges))
    A = bytearray(int(b) for b in subset)
    lab = connected_components(g, A)
    chosen = [e for e, b in enumerate(subset) if b]
    assert lab.count == bfs_component_count(n, edges, chosen)
    for e in chosen:
        u, v = edges[e]
        assert lab.label[u] == lab.label[v]
    mask = rc_index(A)
    assert component_counts(g, np.array([mask]))[0] == lab.count


def test_union_find():
    uf = UnionFind(5)
    assert uf.union(0, 1)
    assert uf.union(3, 4)
    assert not uf.union(1, 0)
    assert uf.find(0) == uf.find(1)
    assert uf.find(2) not in (uf.find(0), uf.find(3))


def test_max_degree():
    assert max_degree(build_square_lattice(3)) == 4
    assert max_degree(build_square_lattice(1)) == 0
    assert max_degree(star_graph(4)) == 4
    assert max_degree(star_graph(4), exclude=0) == 1


def test_subgraph_keeps_vertices():
    g = build_square_lattice(2)
    h = g.subgraph([0])
    assert h.n_vertices == 4 and h.edges == (g.edges[0],)
