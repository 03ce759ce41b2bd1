"""Components, blocks, cutvertices, BC-trees, cut components."""

from __future__ import annotations

from .errors import DisconnectedGraph, InternalInvariant, NotACutvertex
from .graphs import Graph, connected_component_ids


def connected_components(graph: Graph) -> list[list[int]]:
    """Vertex partition into connected components, ordered by smallest
    member."""
    ids = connected_component_ids(graph)
    out: dict[int, list[int]] = {}
    for v, c in enumerate(ids):
        out.setdefault(c, []).append(v)
    return [out[c] for c in sorted(out)]


def blocks_and_cutvertices(graph: Graph) -> tuple[list[list[int]], list[int]]:
    """Blocks as edge-id lists plus the cutvertices, via one DFS with
    low-points.  Works on disconnected graphs; isolated vertices produce no
    block."""
    n = graph.n
    disc = [-1] * n
    low = [0] * n
    cut = [False] * n
    estack: list[int] = []
    blocks: list[list[int]] = []
    time = 0

    for root in range(n):
        if disc[root] >= 0 or graph.degree(root) == 0:
            continue
        root_children = 0
        # stack entries: (v, parent_edge, iterator index)
        disc[root] = low[root] = time
        time += 1
        stack = [(root, -1, 0)]
        while stack:
            v, pe, i = stack.pop()
            if i < len(graph.adj[v]):
                stack.append((v, pe, i + 1))
                e = graph.adj[v][i]
                if e == pe:
                    continue
                w = graph.other(e, v)
                if disc[w] < 0:
                    estack.append(e)
                    disc[w] = low[w] = time
                    time += 1
                    stack.append((w, e, 0))
                elif disc[w] < disc[v]:
                    estack.append(e)
                    low[v] = min(low[v], disc[w])
            else:
                if pe >= 0:
                    u = graph.other(pe, v)
                    low[u] = min(low[u], low[v])
                    if low[v] >= disc[u]:
                        if u == root:
                            root_children += 1
                        else:
                            cut[u] = True
                        blk = []
                        while True:
                            e = estack.pop()
                            blk.append(e)
                            if e == pe:
                                break
                        blocks.append(sorted(blk))
        if root_children > 1:
            cut[root] = True
        if estack:
            raise InternalInvariant("edge stack not drained")
    blocks.sort(key=lambda blk: blk[0])
    return blocks, [v for v in range(n) if cut[v]]


def is_biconnected(graph: Graph) -> bool:
    """One block, no cutvertex, at least one edge.  Isolated vertices are
    ignored so the test applies directly to subgraphs that share a larger
    host's vertex numbering.  A single edge counts (the smallest block)."""
    if graph.m == 0:
        return False
    nonisolated = sum(1 for v in range(graph.n) if graph.degree(v))
    blocks, cuts = blocks_and_cutvertices(graph)
    if cuts or len(blocks) != 1:
        return False
    covered = {v for e in blocks[0] for v in graph.edges[e]}
    return len(covered) == nonisolated


class BcTree:
    """Block-cutvertex tree of a connected graph.

    B-nodes are blocks (edge-id lists into the host graph), C-nodes are
    cutvertices; a block and a cutvertex are adjacent exactly when the
    cutvertex lies in the block.
    """

    def __init__(self, graph: Graph):
        if not _connected_ignoring_isolated(graph):
            raise DisconnectedGraph("BC-tree needs a connected graph")
        self.graph = graph
        self.blocks, self.cutvertices = blocks_and_cutvertices(graph)
        self.block_vertices = [
            sorted({v for e in blk for v in graph.edges[e]}) for blk in self.blocks
        ]
        self.block_of_edge = [-1] * graph.m
        for bi, blk in enumerate(self.blocks):
            for e in blk:
                self.block_of_edge[e] = bi
        cutset = set(self.cutvertices)
        self.blocks_of_cut: dict[int, list[int]] = {v: [] for v in self.cutvertices}
        for bi, vs in enumerate(self.block_vertices):
            for v in vs:
                if v in cutset:
                    self.blocks_of_cut[v].append(bi)
        # any vertex -> one block containing it (cutvertices: smallest index)
        self.some_block_of: dict[int, int] = {}
        for bi, vs in enumerate(self.block_vertices):
            for v in vs:
                self.some_block_of.setdefault(v, bi)

    def adjacent(self, block_index: int, v: int) -> bool:
        return v in self.blocks_of_cut and block_index in self.blocks_of_cut[v]

    def tree_edges(self) -> list[tuple[int, int]]:
        """(block index, cutvertex) incidences."""
        return [
            (bi, v)
            for v in self.cutvertices
            for bi in self.blocks_of_cut[v]
        ]


def _connected_ignoring_isolated(graph: Graph) -> bool:
    ids = connected_component_ids(graph)
    active = {ids[v] for v in range(graph.n) if graph.degree(v)}
    return len(active) <= 1


def build_bc_tree(graph: Graph) -> BcTree:
    return BcTree(graph)


def cut_components(graph: Graph, v: int) -> list[Graph]:
    """Split at a cutvertex: the maximal subgraphs not disconnected by
    removing v, each containing v, as subgraphs sharing the host's vertex
    numbering (edge_ids point at host edges)."""
    if graph.degree(v) == 0:
        raise NotACutvertex(f"vertex {v} is isolated")
    comp = [-1] * graph.n
    c = 0
    for s in range(graph.n):
        if comp[s] >= 0 or s == v or graph.degree(s) == 0:
            continue
        stack = [s]
        comp[s] = c
        while stack:
            x = stack.pop()
            for e in graph.adj[x]:
                w = graph.other(e, x)
                if w != v and comp[w] < 0:
                    comp[w] = c
                    stack.append(w)
        c += 1
    groups: dict[int, list[int]] = {}
    for e in range(graph.m):
        u, w = graph.edges[e]
        side = comp[u] if u != v else comp[w]
        groups.setdefault(side, []).append(e)
    if len(groups) < 2:
        raise NotACutvertex(f"vertex {v} does not separate the graph")
    out = []
    for c in sorted(groups):
        es = groups[c]
        out.append(Graph(graph.n, [graph.edges[e] for e in es], list(es)))
    return out


def brute_force_cutvertices(graph: Graph) -> list[int]:
    """Reference: v is a cutvertex iff its component minus v falls apart."""
    out = []
    for v in range(graph.n):
        if graph.degree(v) == 0:
            continue
        member = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for e in graph.adj[x]:
                w = graph.other(e, x)
                if w not in member:
                    member.add(w)
                    stack.append(w)
        rest = member - {v}
        pieces = 0
        seen: set[int] = set()
        for s in sorted(rest):
            if s in seen:
                continue
            pieces += 1
            seen.add(s)
            stack = [s]
            while stack:
                x = stack.pop()
                for e in graph.adj[x]:
                    w = graph.other(e, x)
                    if w != v and w not in seen:
                        seen.add(w)
                        stack.append(w)
        if pieces >= 2:
            out.append(v)
    return out
