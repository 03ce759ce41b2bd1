"""SPQR-trees of biconnected planar multigraphs.

Decomposition into triconnected components: S-nodes are cycles, P-nodes are
bonds of at least three parallel edges, R-nodes are triconnected, Q-nodes
carry the real edges and are materialized explicitly so that every leaf of
the tree is a Q-node.

Construction is reduce-and-conquer: parallel classes are pulled into bonds,
maximal degree-2 paths into cycles, and what remains is split at separation
pairs found by scanning articulation points of vertex-deleted subgraphs.
The split sequence is not canonical on its own; a final merge pass removes
two-edge bonds and fuses adjacent same-kind S/S and P/P pairs, which yields
the unique decomposition.  Reductions run in batches and the merge pass is
worklist-driven, so hosts whose triconnected pieces stay small decompose in
near-linear time; deeply nested split pairs degrade to quadratic, which is
fine for the inputs this package targets.
"""

from __future__ import annotations

from collections import Counter, deque

from .errors import (
    CycleNotEmbedded,
    CycleNotInBlock,
    InternalInvariant,
    NotBiconnected,
    NotVirtual,
)
from .graphs import DirectedCycle, Graph, RotationSystem, planar_rotation
from .connectivity import blocks_and_cutvertices, is_biconnected

REAL = "r"
VIRTUAL = "v"


class _Work:
    """A component still being decomposed: labelled edge list on host vertex
    ids.  Labels are (REAL, host edge id) or (VIRTUAL, link id)."""

    __slots__ = ("edges",)

    def __init__(self, edges: list[tuple[int, int, tuple]]):
        self.edges = edges

    def degrees(self) -> Counter:
        d: Counter = Counter()
        for u, v, _ in self.edges:
            d[u] += 1
            d[v] += 1
        return d


class _Final:
    __slots__ = ("kind", "edges")

    def __init__(self, kind: str, edges: list[tuple[int, int, tuple]]):
        self.kind = kind
        self.edges = edges


def _pull_parallels(work: _Work, finals: list[_Final], fresh) -> bool:
    """Pull every parallel class at once; one bond per class."""
    by_pair: dict[tuple[int, int], list[int]] = {}
    for i, (u, v, _) in enumerate(work.edges):
        by_pair.setdefault((min(u, v), max(u, v)), []).append(i)
    classes = sorted(p for p, idx in by_pair.items() if len(idx) >= 2)
    if not classes:
        return False
    pulled: set[int] = set()
    keep: list[tuple[int, int, tuple]] = []
    for (u, v) in classes:
        idx = by_pair[(u, v)]
        link = fresh()
        finals.append(
            _Final("P", [work.edges[i] for i in idx] + [(u, v, (VIRTUAL, link))])
        )
        pulled.update(idx)
        keep.append((u, v, (VIRTUAL, link)))
    work.edges = [e for i, e in enumerate(work.edges) if i not in pulled] + keep
    return True


def _pull_series(work: _Work, finals: list[_Final], fresh) -> bool:
    """Pull every maximal degree-2 chain at once; one cycle per chain."""
    deg = work.degrees()
    two = sorted(v for v, d in deg.items() if d == 2)
    if not two:
        return False
    adj: dict[int, list[int]] = {}
    for i, (u, v, _) in enumerate(work.edges):
        adj.setdefault(u, []).append(i)
        adj.setdefault(v, []).append(i)
    consumed: set[int] = set()
    pulled: set[int] = set()
    keep: list[tuple[int, int, tuple]] = []
    for start in two:
        if start in consumed:
            continue
        path_edges: list[int] = []
        ends = []
        consumed.add(start)
        for first in adj[start]:
            prev, e = start, first
            while True:
                path_edges.append(e)
                u, v, _ = work.edges[e]
                nxt = v if u == prev else u
                if deg[nxt] != 2:
                    ends.append(nxt)
                    break
                consumed.add(nxt)
                e = next(i for i in adj[nxt] if i != e)
                prev = nxt
        u, v = ends
        if u == v:
            raise InternalInvariant("degree-2 path closed on itself")
        link = fresh()
        finals.append(_Final(
            "S", [work.edges[i] for i in path_edges] + [(u, v, (VIRTUAL, link))]
        ))
        pulled.update(path_edges)
        keep.append((u, v, (VIRTUAL, link)))
    work.edges = [e for i, e in enumerate(work.edges) if i not in pulled] + keep
    return True


def _active_vertices(work: _Work) -> list[int]:
    return sorted({x for u, v, _ in work.edges for x in (u, v)})


def _separation_pair(work: _Work) -> tuple[int, int] | None:
    """Smallest (u, w) such that removing both disconnects the component.
    Assumes the component is simple, biconnected, minimum degree three."""
    verts = _active_vertices(work)
    index = {x: i for i, x in enumerate(verts)}
    for u in verts:
        sub_edges = [(index[a], index[b]) for a, b, _ in work.edges
                     if a != u and b != u]
        sub = Graph(len(verts), sub_edges)
        _, cuts = blocks_and_cutvertices(sub)
        if cuts:
            return u, verts[cuts[0]]
    return None


def _separation_classes(work: _Work, u: int, v: int) -> list[list[int]]:
    """Edge-index classes: direct u-v edges are singletons, other edges group
    by the component of the endpoints after deleting u and v."""
    comp: dict[int, int] = {}
    c = 0
    adj: dict[int, list[int]] = {}
    for i, (a, b, _) in enumerate(work.edges):
        adj.setdefault(a, []).append(i)
        adj.setdefault(b, []).append(i)
    for s in _active_vertices(work):
        if s in (u, v) or s in comp:
            continue
        comp[s] = c
        stack = [s]
        while stack:
            x = stack.pop()
            for i in adj[x]:
                a, b, _ = work.edges[i]
                w = b if a == x else a
                if w not in (u, v) and w not in comp:
                    comp[w] = c
                    stack.append(w)
        c += 1
    classes: dict[object, list[int]] = {}
    singles = []
    for i, (a, b, _) in enumerate(work.edges):
        if {a, b} == {u, v}:
            singles.append([i])
        else:
            other = a if a not in (u, v) else b
            classes.setdefault(comp[other], []).append(i)
    return sorted(classes.values(), key=lambda c: c[0]) + sorted(singles)


def _decompose(graph: Graph) -> list[_Final]:
    counter = [0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    finals: list[_Final] = []
    first = _Work([(u, v, (REAL, e)) for e, (u, v) in enumerate(graph.edges)])
    todo = deque([first])
    while todo:
        work = todo.popleft()
        while True:
            deg = work.degrees()
            active = len(deg)
            if active == 2:
                finals.append(_Final("P", work.edges))
                break
            if all(d == 2 for d in deg.values()):
                finals.append(_Final("S", work.edges))
                break
            if _pull_parallels(work, finals, fresh):
                continue
            if _pull_series(work, finals, fresh):
                continue
            pair = _separation_pair(work)
            if pair is None:
                finals.append(_Final("R", work.edges))
                break
            u, v = pair
            classes = _separation_classes(work, u, v)
            big = [c for c in classes if len(c) > 1]
            singles = [c for c in classes if len(c) == 1]
            if len(classes) < 2 or not big:
                raise InternalInvariant("separation pair without usable classes")
            if len(classes) == 2 and not singles:
                la = fresh()
                a, b = classes
                todo.append(_Work([work.edges[i] for i in a] + [(u, v, (VIRTUAL, la))]))
                todo.append(_Work([work.edges[i] for i in b] + [(u, v, (VIRTUAL, la))]))
                break
            pedges = []
            for cls in big:
                l = fresh()
                pedges.append((u, v, (VIRTUAL, l)))
                todo.append(_Work([work.edges[i] for i in cls] + [(u, v, (VIRTUAL, l))]))
            for cls in singles:
                pedges.append(work.edges[cls[0]])
            finals.append(_Final("P", pedges))
            break
    return finals


def _merge_pass(finals: list[_Final]) -> list[_Final]:
    """Tutte normalization: drop two-edge bonds, fuse adjacent S/S and P/P.

    Indexed worklist version: per-node label positions and link-end tables
    are maintained incrementally, and fuses move the smaller skeleton, so
    the pass costs roughly the total skeleton size.
    """
    nodes: list[_Final | None] = list(finals)
    pos: list[dict[tuple, int]] = []
    link_ends: dict[int, list[int]] = {}
    for ni, f in enumerate(nodes):
        p = {}
        for ei, (_, _, lab) in enumerate(f.edges):
            if lab in p:
                raise InternalInvariant("duplicate label inside one skeleton")
            p[lab] = ei
            if lab[0] == VIRTUAL:
                link_ends.setdefault(lab[1], []).append(ni)
        pos.append(p)
    for link, ends in link_ends.items():
        if len(ends) != 2:
            raise InternalInvariant(f"link {link} has {len(ends)} ends")
        if ends[0] == ends[1]:
            raise InternalInvariant("twin inside one skeleton")

    def swap_out(ni: int, ei: int) -> tuple[int, int, tuple]:
        """Remove edge ei of node ni by swapping with the last edge."""
        f = nodes[ni]
        removed = f.edges[ei]
        last = f.edges.pop()
        del pos[ni][removed[2]]
        if last is not removed:
            f.edges[ei] = last
            pos[ni][last[2]] = ei
        return removed

    def other_end(link: int, ni: int) -> int:
        a, b = link_ends[link]
        return b if a == ni else a

    # two-edge bonds never appear during merging, so one initial sweep is
    # enough; fuse candidates can appear after a relabel and are re-queued
    bonds = deque(ni for ni, f in enumerate(nodes)
                  if f.kind == "P" and len(f.edges) == 2)
    fuse_queue = deque(sorted(link_ends))
    while bonds or fuse_queue:
        if bonds:
            d = bonds.popleft()
            f = nodes[d]
            if f is None:
                continue
            labs = [lab for _, _, lab in f.edges]
            virt = [lab for lab in labs if lab[0] == VIRTUAL]
            if len(virt) == 2:
                la, lb = virt[0][1], virt[1][1]
                a = other_end(la, d)
                b = other_end(lb, d)
                if a == b:
                    raise InternalInvariant("twin inside one skeleton")
                ei = pos[b].pop((VIRTUAL, lb))
                eu, ev, _ = nodes[b].edges[ei]
                nodes[b].edges[ei] = (eu, ev, (VIRTUAL, la))
                pos[b][(VIRTUAL, la)] = ei
                link_ends[la] = [a, b]
                del link_ends[lb]
                fuse_queue.append(la)
            elif len(virt) == 1:
                real = next(lab for lab in labs if lab[0] == REAL)
                la = virt[0][1]
                a = other_end(la, d)
                ei = pos[a].pop((VIRTUAL, la))
                eu, ev, _ = nodes[a].edges[ei]
                nodes[a].edges[ei] = (eu, ev, real)
                pos[a][real] = ei
                del link_ends[la]
            else:
                raise InternalInvariant("bond of two real edges")
            nodes[d] = None
            continue

        link = fuse_queue.popleft()
        if link not in link_ends:
            continue
        a, b = link_ends[link]
        fa, fb = nodes[a], nodes[b]
        if fa.kind != fb.kind or fa.kind not in ("S", "P"):
            continue
        if len(fa.edges) < len(fb.edges):
            a, b, fa, fb = b, a, fb, fa
        swap_out(a, pos[a][(VIRTUAL, link)])
        swap_out(b, pos[b][(VIRTUAL, link)])
        for edge in fb.edges:
            pos[a][edge[2]] = len(fa.edges)
            fa.edges.append(edge)
            if edge[2][0] == VIRTUAL:
                ends = link_ends[edge[2][1]]
                ends[ends.index(b)] = a
        del link_ends[link]
        nodes[b] = None
    return [f for f in nodes if f is not None]


def _materialize_q(finals: list[_Final]) -> tuple[list[_Final], dict[int, int]]:
    """One Q-node per real edge; parents keep a virtual stub."""
    link = max(
        (lab[1] for f in finals for _, _, lab in f.edges if lab[0] == VIRTUAL),
        default=-1,
    ) + 1
    reals = []
    for f in finals:
        for ei, (u, v, lab) in enumerate(f.edges):
            if lab[0] == REAL:
                reals.append((lab[1], f, ei, u, v))
    reals.sort(key=lambda t: t[0])
    q_of_edge: dict[int, int] = {}
    qs = []
    for host_e, f, ei, u, v in reals:
        u_, v_, _ = f.edges[ei]
        f.edges[ei] = (u_, v_, (VIRTUAL, link))
        q_of_edge[host_e] = len(finals) + len(qs)
        qs.append(_Final("Q", [(u, v, (REAL, host_e)), (u, v, (VIRTUAL, link))]))
        link += 1
    return finals + qs, q_of_edge


class SpqrNode:
    __slots__ = ("kind", "verts", "skel", "labels")

    def __init__(self, kind: str, edges: list[tuple[int, int, tuple]]):
        self.kind = kind
        self.verts = sorted({x for u, v, _ in edges for x in (u, v)})
        local = {x: i for i, x in enumerate(self.verts)}
        self.skel = Graph(len(self.verts),
                          [(local[u], local[v]) for u, v, _ in edges])
        self.labels = [lab for _, _, lab in edges]

    def host_ends(self, ei: int) -> tuple[int, int]:
        u, v = self.skel.edges[ei]
        return self.verts[u], self.verts[v]

    def virtual_edges(self) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab[0] == VIRTUAL]

    def real_edges(self) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab[0] == REAL]


class CycleInSkeleton:
    """How a cycle appears inside one skeleton: contracted into a single
    virtual edge, or as a set of skeleton edges forming a simple cycle."""

    __slots__ = ("contracted", "kappa")

    def __init__(self, contracted: int | None, kappa: tuple[int, ...] | None):
        self.contracted = contracted
        self.kappa = kappa

    @property
    def is_contracted(self) -> bool:
        return self.contracted is not None

    def __repr__(self) -> str:
        if self.is_contracted:
            return f"Contracted(e{self.contracted})"
        return f"AsCycle({list(self.kappa)})"


class SpqrTree:
    def __init__(self, graph: Graph, nodes: list[SpqrNode],
                 twin: dict[tuple[int, int], tuple[int, int]],
                 q_of_edge: dict[int, int]):
        self.graph = graph
        self.nodes = nodes
        self.twin = twin
        self.q_of_edge = q_of_edge

    def neighbors(self, ni: int) -> list[tuple[int, int, int]]:
        """(edge index here, neighbor node, edge index there)."""
        out = []
        for ei in self.nodes[ni].virtual_edges():
            nj, ej = self.twin[(ni, ei)]
            out.append((ei, nj, ej))
        return out

    def expansion_edges(self, ni: int, ei: int) -> list[int]:
        """Host edge ids represented by a virtual skeleton edge."""
        lab = self.nodes[ni].labels[ei]
        if lab[0] != VIRTUAL:
            raise NotVirtual(f"edge {ei} of node {ni} is real")
        out = []
        stack = [self.twin[(ni, ei)]]
        while stack:
            nj, ej = stack.pop()
            node = self.nodes[nj]
            for i, lab in enumerate(node.labels):
                if i == ej:
                    continue
                if lab[0] == REAL:
                    out.append(lab[1])
                else:
                    stack.append(self.twin[(nj, i)])
        return sorted(out)

    def expansion_graph(self, ni: int, ei: int) -> Graph:
        ids = self.expansion_edges(ni, ei)
        return Graph(self.graph.n, [self.graph.edges[e] for e in ids], ids)

    def classify_cycle(self, ni: int, cycle: DirectedCycle) -> CycleInSkeleton:
        try:
            cyc = set(cycle.edge_ids(self.graph))
        except CycleNotEmbedded:
            raise CycleNotInBlock(
                f"cycle {cycle.vertices} uses edges outside this block"
            ) from None
        node = self.nodes[ni]
        kappa = []
        for i, lab in enumerate(node.labels):
            if lab[0] == REAL:
                exp = {lab[1]}
            else:
                exp = set(self.expansion_edges(ni, i))
            if not exp & cyc:
                continue
            # expansions of distinct skeleton edges are disjoint, so a cycle
            # inside one expansion touches no other skeleton edge
            if lab[0] == VIRTUAL and cyc <= exp:
                return CycleInSkeleton(i, None)
            kappa.append(i)
        touched = Counter()
        for i in kappa:
            u, v = node.skel.edges[i]
            touched[u] += 1
            touched[v] += 1
        if not kappa or any(c != 2 for c in touched.values()):
            raise CycleNotInBlock(
                f"cycle {cycle.vertices} does not fit node {ni}")
        return CycleInSkeleton(None, tuple(sorted(kappa)))

    def to_dot(self) -> str:
        lines = ["graph spqr {"]
        for i, node in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{node.kind}{i} ({node.skel.m})"];')
        seen = set()
        for (ni, ei), (nj, ej) in self.twin.items():
            if (nj, ej) in seen:
                continue
            seen.add((ni, ei))
            lines.append(f"  n{ni} -- n{nj};")
        lines.append("}")
        return "\n".join(lines)


def build_spqr(graph: Graph) -> SpqrTree:
    """Decompose a biconnected multigraph with at least three edges."""
    if graph.m < 3:
        raise NotBiconnected("need at least three edges")
    if not is_biconnected(graph):
        raise NotBiconnected("graph is not biconnected")
    finals = _merge_pass(_decompose(graph))
    finals, q_of_edge = _materialize_q(finals)
    nodes = [SpqrNode(f.kind, f.edges) for f in finals]
    occ: dict[int, list[tuple[int, int]]] = {}
    for ni, node in enumerate(nodes):
        for ei, lab in enumerate(node.labels):
            if lab[0] == VIRTUAL:
                occ.setdefault(lab[1], []).append((ni, ei))
    twin: dict[tuple[int, int], tuple[int, int]] = {}
    for link, ends in occ.items():
        if len(ends) != 2:
            raise InternalInvariant(f"link {link} has {len(ends)} ends")
        (a, b) = ends
        twin[a] = b
        twin[b] = a
    tree = SpqrTree(graph, nodes, twin, q_of_edge)
    _check_tree(tree)
    return tree


def _check_tree(tree: SpqrTree) -> None:
    n = len(tree.nodes)
    # connected and acyclic over twin links
    deg = sum(len(tree.nodes[ni].virtual_edges()) for ni in range(n))
    if deg != 2 * (n - 1):
        raise InternalInvariant("twin links do not form a tree")
    seen = {0}
    stack = [0]
    while stack:
        ni = stack.pop()
        for _, nj, _ in tree.neighbors(ni):
            if nj not in seen:
                seen.add(nj)
                stack.append(nj)
    if len(seen) != n:
        raise InternalInvariant("SPQR structure disconnected")
    for ni, node in enumerate(tree.nodes):
        if node.kind == "Q":
            if node.skel.m != 2:
                raise InternalInvariant("Q skeleton must be a digon")
        elif node.kind == "P":
            if len(node.verts) != 2 or node.skel.m < 3:
                raise InternalInvariant("P skeleton must be a bond of >= 3")
        elif node.kind == "S":
            if node.skel.m < 3 or any(
                node.skel.degree(v) != 2 for v in range(node.skel.n)
            ):
                raise InternalInvariant("S skeleton must be a cycle")
        # adjacent same-kind S/P pairs must have been merged
        for _, nj, _ in tree.neighbors(ni):
            if node.kind in ("S", "P") and tree.nodes[nj].kind == node.kind:
                raise InternalInvariant(f"adjacent {node.kind}-{node.kind}")


class RootedSpqr:
    """Orientation of the tree from a chosen root node: parents, children,
    and the per-node virtual edge pointing up."""

    def __init__(self, tree: SpqrTree, root: int):
        self.tree = tree
        self.root = root
        n = len(tree.nodes)
        self.parent = [-1] * n
        self.up_edge = [-1] * n      # skeleton edge (in the node) toward parent
        self.down_edge = [-1] * n    # skeleton edge in the parent toward the node
        self.children: list[list[int]] = [[] for _ in range(n)]
        self.order: list[int] = []
        seen = [False] * n
        seen[root] = True
        queue = deque([root])
        while queue:
            ni = queue.popleft()
            self.order.append(ni)
            for ei, nj, ej in tree.neighbors(ni):
                if seen[nj]:
                    continue
                seen[nj] = True
                self.parent[nj] = ni
                self.up_edge[nj] = ej
                self.down_edge[nj] = ei
                self.children[ni].append(nj)
                queue.append(nj)
        if len(self.order) != n:
            raise InternalInvariant("rooting did not reach all nodes")
        self.depth = [0] * n
        for ni in self.order[1:]:
            self.depth[ni] = self.depth[self.parent[ni]] + 1


def root_at_edge(tree: SpqrTree, host_edge: int) -> RootedSpqr:
    return RootedSpqr(tree, tree.q_of_edge[host_edge])


def reference_rotation(node: SpqrNode) -> RotationSystem:
    """Canonical orientation of a triconnected skeleton.

    A 3-connected planar graph has one embedding up to reflection; pick the
    reflection whose face walk through the smallest dart of edge 0 is
    lexicographically smaller.  Both callers that compare sides of the same
    skeleton must agree on the orientation, nothing more.
    """
    if node.kind != "R":
        raise InternalInvariant("reference orientation is for R-nodes only")
    rot = planar_rotation(node.skel)
    mir = rot.mirror()
    d0 = (0, min(node.skel.edges[0]))

    def walk(r: RotationSystem) -> tuple:
        out = []
        cur = d0
        while True:
            out.append(cur)
            e, tail = cur
            head = node.skel.other(e, tail)
            cur = (r.next_left(e, head), head)
            if cur == d0:
                return tuple(out)

    return mir if walk(mir) < walk(rot) else rot
