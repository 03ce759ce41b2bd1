"""Preprocessing that makes both graphs of an instance connected.

A disconnected graph is stitched together along edges of the other graph.
For an edge {v1, v2} exclusive to the other graph whose endpoints lie in
different components of the graph being connected, a new vertex v12 is
introduced together with a common edge {v1, v12} and an exclusive edge
{v12, v2} of the connected graph.  That graph loses one component, the
other graph none, and satisfiability is unchanged: in any simultaneous
embedding the new two-edge path can be routed through a face bordered by
both endpoints after flipping parts of the embedding into the face that
contains the source edge.

Edge selection contracts each component of the graph being connected,
takes a breadth-first spanning tree of the contracted multigraph, and
augments once per tree edge.  Components of the union are independent,
so the union is required to be connected; split it first if not.
"""

from __future__ import annotations

from dataclasses import dataclass

from collections import deque

from .errors import (
    EdgeNotExclusive,
    InternalInvariant,
    SameComponent,
    UnionDisconnected,
)
from .graphs import (
    EdgeTag,
    SefeInstance,
    build_instance,
    connected_component_ids,
    is_connected,
)


@dataclass(frozen=True)
class AugmentationRecord:
    """One stitching step: ids refer to the augmented instance."""

    vertex: int          # the new vertex v12
    common_edge: int     # {v1, v12}
    exclusive_edge: int  # {v12, v2}, tagged for the connected graph
    source_edge: int     # {v1, v2}, exclusive to the other graph
    target: int          # 1 or 2, the graph that lost a component


def _opposite_tag(target: int) -> EdgeTag:
    return EdgeTag.EXCL2 if target == 1 else EdgeTag.EXCL1


def augment_edge(
    instance: SefeInstance, edge_id: int, target: int
) -> tuple[SefeInstance, AugmentationRecord]:
    """Connect two components of graph ``target`` across one edge.

    The edge must belong exclusively to the other graph and its endpoints
    must lie in different components of the target graph.  The common
    edge is attached to the endpoint of smaller common degree, which
    keeps the common graph as flat as possible; ties go to the smaller
    vertex id.
    """
    tag = instance.tags[edge_id]
    if tag != _opposite_tag(target):
        raise EdgeNotExclusive(
            f"edge {edge_id} has tag {tag.value!r}, need an edge exclusive "
            f"to graph {3 - target}"
        )
    comp = connected_component_ids(instance.graph(target))
    u, v = instance.edges[edge_id]
    if comp[u] == comp[v]:
        raise SameComponent(
            f"endpoints of edge {edge_id} already share a component "
            f"of graph {target}"
        )
    cdeg = [0] * instance.n
    for (a, b), t in zip(instance.edges, instance.tags):
        if t == EdgeTag.COMMON:
            cdeg[a] += 1
            cdeg[b] += 1
    v1, v2 = sorted((u, v), key=lambda x: (cdeg[x], x))

    v12 = instance.n
    tagged = [
        (a, b, t) for (a, b), t in zip(instance.edges, instance.tags)
    ]
    common_edge = len(tagged)
    tagged.append((v1, v12, EdgeTag.COMMON))
    exclusive_edge = len(tagged)
    tagged.append((v12, v2, EdgeTag.EXCL1 if target == 1 else EdgeTag.EXCL2))

    # a stored rotation at v1 no longer lists all common edges there; the
    # new degree is almost always <= 2, where the rotation is implicit
    rots = {
        w: order
        for w, order in instance.fixed_rotations.items()
        if w != v1
    }
    augmented = build_instance(instance.n + 1, tagged, rots)
    record = AugmentationRecord(
        vertex=v12,
        common_edge=common_edge,
        exclusive_edge=exclusive_edge,
        source_edge=edge_id,
        target=target,
    )
    return augmented, record


def connect_instance(
    instance: SefeInstance,
) -> tuple[SefeInstance, list[AugmentationRecord]]:
    """Make both graphs connected, graph 1 first.

    Adds exactly (k1 - 1) + (k2 - 1) vertices where k1, k2 are the
    component counts of the two graphs.  Requires a connected union.
    """
    if not is_connected(instance.union):
        raise UnionDisconnected(
            "union graph is disconnected; split into union components first"
        )
    records: list[AugmentationRecord] = []
    inst = instance
    for target in (1, 2):
        comp = connected_component_ids(inst.graph(target))
        k = max(comp, default=-1) + 1
        if k <= 1:
            continue
        # contracted multigraph over target components, bridged by edges
        # of the other graph only
        adj: list[list[tuple[int, int]]] = [[] for _ in range(k)]
        for e, ((a, b), t) in enumerate(zip(inst.edges, inst.tags)):
            if t == _opposite_tag(target) and comp[a] != comp[b]:
                adj[comp[a]].append((comp[b], e))
                adj[comp[b]].append((comp[a], e))
        for lst in adj:
            lst.sort()
        seen = [False] * k
        seen[0] = True
        queue = deque([0])
        tree_edges: list[int] = []
        while queue:
            c = queue.popleft()
            for d, e in adj[c]:
                if not seen[d]:
                    seen[d] = True
                    tree_edges.append(e)
                    queue.append(d)
        if len(tree_edges) != k - 1:
            raise InternalInvariant(
                "contracted component graph is disconnected despite a "
                "connected union"
            )
        for e in tree_edges:
            inst, rec = augment_edge(inst, e, target)
            records.append(rec)
        if not is_connected(inst.graph(target)):
            raise InternalInvariant(f"graph {target} still disconnected")
    return inst, records


@dataclass(frozen=True)
class SubInstance:
    """One union component, renumbered to 0..n-1.

    ``vertices[i]`` and ``edge_ids[j]`` give the original ids of local
    vertex i and local edge j.
    """

    instance: SefeInstance
    vertices: list[int]
    edge_ids: list[int]


def split_union_components(instance: SefeInstance) -> list[SubInstance]:
    """Partition an instance along the components of the union graph."""
    comp = connected_component_ids(instance.union)
    k = max(comp, default=-1) + 1
    verts: list[list[int]] = [[] for _ in range(k)]
    for v in range(instance.n):
        verts[comp[v]].append(v)
    out = []
    for c in range(k):
        local = {v: i for i, v in enumerate(verts[c])}
        tagged = []
        edge_ids = []
        edge_local: dict[int, int] = {}
        for e, ((a, b), t) in enumerate(zip(instance.edges, instance.tags)):
            if comp[a] == c:
                edge_local[e] = len(tagged)
                tagged.append((local[a], local[b], t))
                edge_ids.append(e)
        rots = {
            local[v]: tuple(edge_local[e] for e in order)
            for v, order in instance.fixed_rotations.items()
            if comp[v] == c
        }
        sub = build_instance(len(verts[c]), tagged, rots, check_planar=False)
        out.append(SubInstance(sub, verts[c], edge_ids))
    return out
