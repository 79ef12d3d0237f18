"""Finite multigraphs, square lattices and their planar duals.

Edges are identified by index, never by endpoint pair: parallel edges and
loops are allowed (tree duals are all loops, the dual of ``G_2`` has four
parallel edges).  Vertices are ``0..n_vertices-1``.

RC states (edge subsets) are ``bytearray`` objects of length ``n_edges``
holding 0/1; :func:`rc_index` turns one into the edge-bitmask integer used to
index matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""
    # derived
    eu: tuple[int, ...] = field(init=False, repr=False, compare=False)
    ev: tuple[int, ...] = field(init=False, repr=False, compare=False)
    incident: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    neighbors: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_vertices < 0:
            raise GraphError("n_vertices must be non-negative")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise GraphError(f"edge {i} = ({u}, {v}) out of range")
        incident: list[list[int]] = [[] for _ in range(self.n_vertices)]
        # neighbors excludes loops and lists parallel neighbours with multiplicity
        neighbors: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for i, (u, v) in enumerate(edges):
            incident[u].append(i)
            if u != v:
                incident[v].append(i)
                neighbors[u].append(v)
                neighbors[v].append(u)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "eu", tuple(u for u, _ in edges))
        object.__setattr__(self, "ev", tuple(v for _, v in edges))
        object.__setattr__(self, "incident", tuple(map(tuple, incident)))
        object.__setattr__(self, "neighbors", tuple(map(tuple, neighbors)))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        """Number of incident edge endpoints; a loop counts twice."""
        return sum(2 if self.eu[e] == self.ev[e] else 1 for e in self.incident[v])

    def subgraph(self, edge_subset: Sequence[int], name: str = "") -> "Graph":
        """Spanning subgraph keeping the listed edges (in the given order)."""
        return Graph(self.n_vertices, tuple(self.edges[e] for e in edge_subset), name)


def max_degree(g: Graph, exclude: int | None = None) -> int:
    degs = [g.degree(v) for v in range(g.n_vertices) if v != exclude]
    return max(degs, default=0)


# ----------------------------------------------------------------------------
# builders


def build_square_lattice(L: int) -> Graph:
    """``L x L`` grid, free boundary.

    Vertex ``(i, j)`` (row, column) has id ``i*L + j``.  Horizontal edge
    ``(i,j)-(i,j+1)`` has index ``i*(L-1) + j``; vertical edge
    ``(i,j)-(i+1,j)`` has index ``L*(L-1) + i*L + j``.
    """
    if L < 1:
        raise GraphError("side length must be >= 1")
    edges = [(i * L + j, i * L + j + 1) for i in range(L) for j in range(L - 1)]
    edges += [(i * L + j, (i + 1) * L + j) for i in range(L - 1) for j in range(L)]
    return Graph(L * L, tuple(edges), f"G{L}")


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)), f"P{n}")


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)), f"C{n}")


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the center at vertex 0."""
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)), f"K1_{leaves}")


# ----------------------------------------------------------------------------
# duality


@dataclass(frozen=True)
class DualMap:
    primal: Graph
    dual: Graph
    edge_bijection: tuple[int, ...]  # primal edge e -> dual edge index
    outer_vertex: int | None = None  # v*, when the dual has one
    inverse: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = self.primal.n_edges
        if self.dual.n_edges != m:
            raise GraphError("primal and dual must have the same number of edges")
        if sorted(self.edge_bijection) != list(range(m)):
            raise GraphError("edge_bijection is not a permutation")
        inv = [0] * m
        for e, ed in enumerate(self.edge_bijection):
            inv[ed] = e
        object.__setattr__(self, "inverse", tuple(inv))


def build_dual_square_lattice(L: int) -> DualMap:
    """Dual of ``G_L`` in its standard embedding: ``G_{L-1}`` plus an outer vertex.

    Inner faces are indexed by their upper-left corner ``(i, j)``,
    ``0 <= i, j <= L-2``, and become vertex ``i*(L-1) + j`` of ``G_{L-1}``;
    the outer face is ``v* = (L-1)**2``.  The dual edge list is the edge list
    of ``build_square_lattice(L-1)`` followed by the edges to ``v*``, one per
    boundary primal edge, in increasing primal index.

    Edge bijection (``M = L-1``):

    * interior vertical primal edge ``(i,j)-(i+1,j)``, ``1 <= j <= L-2``,
      separates faces ``(i,j-1)`` and ``(i,j)``: dual horizontal edge
      ``i*(M-1) + (j-1)``;
    * interior horizontal primal edge ``(i,j)-(i,j+1)``, ``1 <= i <= L-2``,
      separates faces ``(i-1,j)`` and ``(i,j)``: dual vertical edge
      ``M*(M-1) + (i-1)*M + j``;
    * boundary primal edges map to ``2*M*(M-1) + r`` where ``r`` is the rank of
      the edge among boundary edges.
    """
    if L < 2:
        raise GraphError("dual lattice needs L >= 2")
    primal = build_square_lattice(L)
    M = L - 1
    inner = build_square_lattice(M)
    v_star = M * M
    n_inner_edges = inner.n_edges
    bij = [0] * primal.n_edges
    extra: list[tuple[int, int]] = []
    for e, (a, b) in enumerate(primal.edges):
        (i, j), (i2, _) = divmod(a, L), divmod(b, L)
        if i == i2:  # horizontal
            if 1 <= i <= L - 2:
                bij[e] = M * (M - 1) + (i - 1) * M + j
                continue
            face = (i - 1, j) if i == L - 1 else (i, j)
        else:  # vertical
            if 1 <= j <= L - 2:
                bij[e] = i * (M - 1) + (j - 1)
                continue
            face = (i, j - 1) if j == L - 1 else (i, j)
        bij[e] = n_inner_edges + len(extra)
        extra.append((face[0] * M + face[1], v_star))
    dual = Graph(M * M + 1, inner.edges + tuple(extra), f"G{L}_dual")
    return DualMap(primal, dual, tuple(bij), outer_vertex=v_star)


def is_tree(g: Graph) -> bool:
    if g.n_vertices == 0 or g.n_edges != g.n_vertices - 1:
        return False
    return connected_components(g, bytearray([1]) * g.n_edges).count == 1


def build_tree_dual(tree: Graph) -> DualMap:
    """A tree has a single (outer) face: the dual is one vertex with |E| loops."""
    if not is_tree(tree):
        raise GraphError(f"{tree.name or 'graph'} is not a tree")
    m = tree.n_edges
    dual = Graph(1, ((0, 0),) * m, f"{tree.name}_dual" if tree.name else "")
    return DualMap(tree, dual, tuple(range(m)), outer_vertex=0)


def dual_rc_state(A: Sequence[int], dmap: DualMap) -> bytearray:
    """``A_D``: dual edge ``e_D`` is open iff primal ``e`` is closed."""
    out = bytearray(dmap.dual.n_edges)
    bij = dmap.edge_bijection
    for e, a in enumerate(A):
        if not a:
            out[bij[e]] = 1
    return out


def primal_rc_state(B_dual: Sequence[int], dmap: DualMap) -> bytearray:
    """Inverse of :func:`dual_rc_state`."""
    out = bytearray(dmap.primal.n_edges)
    inv = dmap.inverse
    for ed, b in enumerate(B_dual):
        if not b:
            out[inv[ed]] = 1
    return out


def dual_index_map(dmap: DualMap) -> np.ndarray:
    """Vector ``d`` with ``d[mask(A)] = mask(A_D)`` over all primal RC states."""
    m = dmap.primal.n_edges
    masks = np.arange(1 << m, dtype=np.int64)
    out = np.zeros_like(masks)
    for e, ed in enumerate(dmap.edge_bijection):
        out |= (((masks >> e) & 1) ^ 1) << ed
    return out


# ----------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class ComponentLabeling:
    count: int
    label: tuple[int, ...]


class UnionFind:
    """Union by size with path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def connected_components(g: Graph, A: Sequence[int]) -> ComponentLabeling:
    """Components of ``(V, A)``; labels are numbered in order of each
    component's smallest vertex."""
    uf = UnionFind(g.n_vertices)
    eu, ev = g.eu, g.ev
    for e, a in enumerate(A):
        if a:
            uf.union(eu[e], ev[e])
    ids: dict[int, int] = {}
    label = []
    for v in range(g.n_vertices):
        label.append(ids.setdefault(uf.find(v), len(ids)))
    return ComponentLabeling(len(ids), tuple(label))


def component_counts(g: Graph, masks: np.ndarray) -> np.ndarray:
    """``C(A)`` for a batch of edge bitmasks, by vectorised min-label propagation."""
    masks = np.asarray(masks, dtype=np.int64)
    n = g.n_vertices
    labels = np.broadcast_to(np.arange(n, dtype=np.int64), masks.shape + (n,)).copy()
    open_edges = [((masks >> e) & 1).astype(bool) for e in range(g.n_edges)]
    changed = True
    while changed:
        changed = False
        for e, (u, v) in enumerate(g.edges):
            if u == v:
                continue
            on = open_edges[e]
            lu, lv = labels[..., u], labels[..., v]
            low = np.minimum(lu, lv)
            upd = on & (lu != lv)
            if upd.any():
                changed = True
                labels[..., u] = np.where(on, low, lu)
                labels[..., v] = np.where(on, low, lv)
    return (labels == np.arange(n)).sum(axis=-1)


def edges_from_mask(mask: int, n_edges: int) -> bytearray:
    return bytearray((mask >> e) & 1 for e in range(n_edges))


def rc_index(A: Sequence[int]) -> int:
    idx = 0
    for e in range(len(A) - 1, -1, -1):
        idx = (idx << 1) | (1 if A[e] else 0)
    return idx
