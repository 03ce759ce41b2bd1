"""Constraint trees over contracted common cycles, built in near-linear time.

Contracting every family cycle of a connected host to a point and then
contracting a spanning structure of the remainder leaves a tree whose
nodes are the cycles.  Only the relative positions along tree edges are
free; every other position follows by walking the tree.  This module
computes the (in)equalities tying those crucial positions together with
four passes over each block's decomposition tree instead of the
quadratic per-skeleton scan, intersects two such constraint trees, and
expands constraint models back into full position assignments.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .connectivity import BcTree
from .cycle_sefe import DeterminationRecord, RelPosVar
from .errors import (
    CycleFamilyMismatch,
    DisconnectedGraph,
    InternalInvariant,
)
from .graphs import (
    ON,
    DirectedCycle,
    Graph,
    SemiEmbedding,
    Side,
    is_connected,
)
from .lca import TreeIndex
from .spqr import REAL, RootedSpqr, build_spqr, reference_rotation
from .twosat import ConstraintSet, enumerate_models
from .unionfind import UnionFind


@dataclass(frozen=True)
class CTree:
    """Tree of cycles obtained by contracting each cycle and the connected
    pieces between them.

    ``label[v]`` names the cycle whose contraction swallowed host vertex
    ``v``; ``via_edge[i]`` is the host edge whose two endpoints carry the
    labels joined by ``edges[i]``.  Label classes are connected, so the
    tree is a minor of the host.
    """

    k: int
    edges: tuple[tuple[int, int], ...]
    label: tuple[int, ...]
    via_edge: tuple[int, ...]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.k)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def parent_array(self, root: int = 0) -> list[int]:
        adj = self.adjacency()
        parent = [-1] * self.k
        seen = [False] * self.k
        seen[root] = True
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    queue.append(y)
        if not all(seen):
            raise InternalInvariant("cycle tree is not connected")
        return parent


def build_ctree(host: Graph, cycles: list[DirectedCycle]) -> CTree:
    """Contract the cycles and grow regions outward until they meet."""
    k = len(cycles)
    label: list[int | None] = [None] * host.n
    queue: deque[int] = deque()
    for ci, cycle in enumerate(cycles):
        for v in cycle.vertices:
            if label[v] is not None:
                raise InternalInvariant("family cycles share a vertex")
            label[v] = ci
            queue.append(v)
    uf = UnionFind(max(k, 1))
    edges: list[tuple[int, int]] = []
    via: list[int] = []
    while queue:
        x = queue.popleft()
        for e in host.adj[x]:
            y = host.other(e, x)
            if label[y] is None:
                label[y] = label[x]
                queue.append(y)
                continue
            a, b = label[x], label[y]
            if a != b and uf.find(a) != uf.find(b):
                uf.union(a, b)
                edges.append((min(a, b), max(a, b)))
                via.append(e)
    if k > 0 and is_connected(host) and len(edges) != k - 1:
        raise InternalInvariant("region growth missed a cycle")
    return CTree(k, tuple(edges), tuple(label), tuple(via))


@dataclass(frozen=True)
class CcTree:
    """A cycle tree plus the 2-SAT constraints on its crucial positions.

    The models of ``cs`` are in bijection with the position assignments
    the host can realize; expansion to full assignments is
    ``represented_set``.
    """

    ctree: CTree
    cs: ConstraintSet
    cycles: tuple[DirectedCycle, ...] = ()

    def to_json(self) -> dict:
        def var(x: RelPosVar) -> list[int]:
            return [x.base, x.other]

        return {
            "k": self.ctree.k,
            "cycles": [list(c.vertices) for c in self.cycles],
            "tree_edges": [list(e) for e in self.ctree.edges],
            "variables": [var(x) for x in self.cs.variables],
            "eqs": [[var(a), var(b)] for a, b in self.cs.eqs],
            "neqs": [[var(a), var(b)] for a, b in self.cs.neqs],
            "fixes": [[var(a), s.value] for a, s in self.cs.fixes],
        }

    def to_dot(self) -> str:
        lines = ["graph cctree {"]
        for i in range(self.ctree.k):
            name = "C%d" % i
            if i < len(self.cycles):
                name += " (%s)" % ",".join(map(str, self.cycles[i].vertices))
            lines.append(f'  c{i} [label="{name}"];')
        for a, b in self.ctree.edges:
            lines.append(f"  c{a} -- c{b};")
        for a, b in self.cs.eqs:
            lines.append(f'  // eq pos_{a.base}({a.other}) pos_{b.base}({b.other})')
        for a, b in self.cs.neqs:
            lines.append(f'  // neq pos_{a.base}({a.other}) pos_{b.base}({b.other})')
        lines.append("}")
        return "\n".join(lines)


def canonical_variables(ctree: CTree) -> list[RelPosVar]:
    """Both directions of every tree edge, smallest pairs first."""
    out = []
    for a, b in sorted(ctree.edges):
        out.append(RelPosVar(a, b))
        out.append(RelPosVar(b, a))
    return out


# ---------------------------------------------------------------------------
# per-block decomposition context and the four passes


class BlockContext:
    """One biconnected piece of the host, rooted for the pass pipeline.

    The decomposition tree is rooted at a leaf holding an edge that lies
    on no family cycle, so the root never sees a cycle of its own and
    every cycle's subtree has a well defined top node.
    """

    def __init__(self, host: Graph, cycles: list[DirectedCycle],
                 block_edges: list[int] | None = None, block_index: int = 0):
        if block_edges is None:
            block_edges = list(range(host.m))
        self.host = host
        self.cycles = cycles
        self.index = block_index
        self.cycle_of_edge: dict[int, int] = {}
        for ci, cycle in enumerate(cycles):
            for e in cycle.edge_ids(host):
                self.cycle_of_edge[e] = ci
        self.bverts = sorted({x for e in block_edges for x in host.edges[e]})
        self.loc = {v: i for i, v in enumerate(self.bverts)}
        self.bgraph = Graph(
            len(self.bverts),
            [(self.loc[u], self.loc[v])
             for u, v in (host.edges[e] for e in block_edges)],
            list(block_edges),
        )
        self.tree = build_spqr(self.bgraph)
        free = [be for be, he in enumerate(self.bgraph.edge_ids)
                if he not in self.cycle_of_edge]
        # a block consisting of a single cycle has no admissible root; it
        # also never decides a position, so callers skip it
        self.acyclic_root = bool(free)
        root_be = min(free, key=lambda be: self.bgraph.edge_ids[be]) if free \
            else 0
        self.rooted = RootedSpqr(self.tree, self.tree.q_of_edge[root_be])

    def host_of_skel(self, ni: int, x: int) -> int:
        return self.bverts[self.tree.nodes[ni].verts[x]]

    def bel_of_edge(self, pd: "PhaseData", ni: int, ei: int) -> int | None:
        """Cycle owning a skeleton edge, or None."""
        node = self.tree.nodes[ni]
        lab = node.labels[ei]
        if lab[0] == REAL:
            return self.cycle_of_edge.get(self.bgraph.edge_ids[lab[1]])
        if ei == self.rooted.up_edge[ni]:
            return pd.bel_up[ni]
        nj, _ = self.tree.twin[(ni, ei)]
        return pd.bel_up[nj]


@dataclass
class PhaseData:
    """Everything the passes accumulate for one block."""

    cyc: list[list[int]]
    bel_up: list[int | None]
    root_of: dict[int, int]
    root_of_vertex: dict[int, int]
    high: list[int | None] = field(default_factory=list)
    det: dict[RelPosVar, tuple] = field(default_factory=dict)
    contr: dict[tuple[int, int], list[RelPosVar]] = field(default_factory=dict)
    detcyc: dict[int, dict[int, list[RelPosVar]]] = field(default_factory=dict)
    detvert: dict[int, dict[int, list[RelPosVar]]] = field(default_factory=dict)


def phase1_induced(ctx: BlockContext) -> PhaseData:
    """Bottom-up cycle ownership of every skeleton edge.

    A non-root node owns its parent edge for cycle C exactly when C
    crosses one of its two poles once on the inside; the crossing count
    is read off the already-labelled child edges.
    """
    tree, rooted = ctx.tree, ctx.rooted
    n = len(tree.nodes)
    pd = PhaseData(cyc=[[] for _ in range(n)], bel_up=[None] * n,
                   root_of={}, root_of_vertex={})
    stamp: dict[int, int] = {}
    for ni in reversed(rooted.order):
        node = tree.nodes[ni]
        up = rooted.up_edge[ni] if ni != rooted.root else -1
        if ni != rooted.root:
            cands = []
            for pole in node.skel.edges[up]:
                hits: dict[int, int] = {}
                for ei in node.skel.adj[pole]:
                    if ei == up:
                        continue
                    c = ctx.bel_of_edge(pd, ni, ei)
                    if c is not None:
                        hits[c] = hits.get(c, 0) + 1
                if len(hits) > 1:
                    raise InternalInvariant("two cycles meet at one pole")
                cand = None
                for c, cnt in hits.items():
                    if cnt > 2:
                        raise InternalInvariant(
                            "cycle crosses a pole more than twice")
                    if cnt == 1:
                        cand = c
                cands.append(cand)
            if cands[0] != cands[1]:
                raise InternalInvariant(
                    "cycle leaves through one pole but not the other")
            pd.bel_up[ni] = cands[0]
        for ei in range(node.skel.m):
            c = ctx.bel_of_edge(pd, ni, ei)
            if c is not None and stamp.get(c) != ni:
                stamp[c] = ni
                pd.cyc[ni].append(c)
        for c in pd.cyc[ni]:
            if ni == rooted.root or pd.bel_up[ni] != c:
                if c in pd.root_of:
                    raise InternalInvariant("cycle subtree has two tops")
                pd.root_of[c] = ni
    for ni in rooted.order:
        node = tree.nodes[ni]
        skip = set()
        if ni != rooted.root:
            skip = set(node.skel.edges[rooted.up_edge[ni]])
        for x in range(len(node.verts)):
            if x in skip:
                continue
            hv = ctx.host_of_skel(ni, x)
            if hv in pd.root_of_vertex:
                raise InternalInvariant("vertex finalized twice")
            pd.root_of_vertex[hv] = ni
    if set(pd.root_of_vertex) != set(ctx.bverts):
        raise InternalInvariant("vertex finalization missed the block")
    return pd


def phase2_high(ctx: BlockContext, pd: PhaseData) -> PhaseData:
    """Top of the unowned edge run directly above each node.

    Tree edges are named by their lower node.  ``high`` is None when the
    edge above the node is owned by some cycle (or the node is the root).
    """
    rooted = ctx.rooted
    pd.high = [None] * len(ctx.tree.nodes)
    for ni in rooted.order:
        if ni == rooted.root:
            continue
        if pd.bel_up[ni] is not None:
            pd.high[ni] = None
        else:
            above = pd.high[rooted.parent[ni]]
            pd.high[ni] = above if above is not None else ni
    return pd


def phase3_det_contr(ctx: BlockContext, pd: PhaseData,
                     pairs: list[tuple]) -> PhaseData:
    """Route every requested position to the node that decides it.

    ``pairs`` holds ("cycle", var, target cycle) and
    ("vertex", var, host cutvertex) requests whose base cycle lives in
    this block.  Each lands in a per-edge list (target hidden behind a
    skeleton edge), a per-cycle list (both visible in one skeleton), or
    a per-vertex list; requests whose deciding child is only known after
    the subtrees merge are parked and resolved bottom-up.
    """
    if not ctx.acyclic_root:
        raise InternalInvariant("pass pipeline needs a rootable block")
    rooted = ctx.rooted
    idx = TreeIndex(rooted.parent, rooted.root)
    temp: dict[int, list[tuple[RelPosVar, int]]] = {}

    def to_contr(ni: int, ei: int, var: RelPosVar) -> None:
        pd.contr.setdefault((ni, ei), []).append(var)
        pd.det[var] = ("node", ctx.index, ni)

    def to_detcyc(ni: int, ci: int, var: RelPosVar) -> None:
        pd.detcyc.setdefault(ni, {}).setdefault(ci, []).append(var)
        pd.det[var] = ("node", ctx.index, ni)

    def to_detvert(ni: int, hv: int, var: RelPosVar) -> None:
        pd.detvert.setdefault(ni, {}).setdefault(hv, []).append(var)
        pd.det[var] = ("node", ctx.index, ni)

    for kind, var, target in pairs:
        mu = pd.root_of.get(var.base)
        if mu is None:
            raise InternalInvariant("base cycle is not in this block")
        if kind == "cycle":
            mu2 = pd.root_of.get(target)
            if mu2 is None:
                raise InternalInvariant("target cycle is not in this block")
        else:
            mu2 = pd.root_of_vertex.get(target)
            if mu2 is None:
                raise InternalInvariant("anchor vertex is not in this block")
        w = idx.lca(mu, mu2)
        if w != mu:
            to_contr(mu, rooted.up_edge[mu], var)
        elif mu == mu2:
            if kind == "cycle":
                to_detcyc(mu, target, var)
            else:
                to_detvert(mu, target, var)
        else:
            h = pd.high[mu2]
            if h is None:
                if var.base not in pd.cyc[mu2]:
                    raise InternalInvariant(
                        "decided below the base cycle's subtree")
                if kind == "cycle":
                    to_detcyc(mu2, target, var)
                else:
                    to_detvert(mu2, target, var)
            else:
                eta = rooted.parent[h]
                if rooted.depth[eta] <= rooted.depth[mu]:
                    temp.setdefault(mu, []).append((var, mu2))
                elif var.base in pd.cyc[eta]:
                    to_contr(eta, rooted.down_edge[h], var)
                else:
                    raise InternalInvariant(
                        "hanging subtree misses the base cycle")

    if temp:
        uf = UnionFind(len(ctx.tree.nodes))
        leader = list(range(len(ctx.tree.nodes)))
        for mu in reversed(rooted.order):
            for var, target_root in temp.get(mu, ()):
                child = leader[uf.find(target_root)]
                if rooted.parent[child] != mu:
                    raise InternalInvariant("parked request resolved badly")
                to_contr(mu, rooted.down_edge[child], var)
            for c in rooted.children[mu]:
                leader[uf.union(mu, c)] = mu
    return pd


def _r_side_data(ctx: BlockContext, pd: PhaseData, ni: int, rot_ref,
                 relevant: set[int]):
    """Per-vertex walk data for each relevant cycle through one rigid
    skeleton: owning cycle, positions of its two cycle edges in the
    reference rotation, and the cycle edge set."""
    node = ctx.tree.nodes[ni]
    inv = {bl: sk for sk, bl in enumerate(node.verts)}
    kedges: dict[int, set[int]] = {c: set() for c in relevant}
    for ei in range(node.skel.m):
        c = ctx.bel_of_edge(pd, ni, ei)
        if c in kedges:
            kedges[c].add(ei)
    kv: dict[int, int] = {}
    data: dict[int, tuple[int, int, int, int]] = {}
    for c in sorted(relevant):
        seq = [inv[ctx.loc[v]] for v in ctx.cycles[c].vertices
               if v in ctx.loc and ctx.loc[v] in inv]
        if len(seq) != len(kedges[c]) or not seq:
            raise InternalInvariant("cycle trace disagrees with ownership")
        for p, u in enumerate(seq):
            if u in kv:
                raise InternalInvariant("two cycles cross one skeleton vertex")
            kv[u] = c
            dep = node.skel.edge_between(u, seq[(p + 1) % len(seq)])
            arr = node.skel.edge_between(seq[p - 1], u)
            if dep is None or arr is None or dep not in kedges[c] \
                    or arr not in kedges[c]:
                raise InternalInvariant("cycle trace leaves its own edges")
            data[u] = (rot_ref._pos[u][dep], rot_ref._pos[u][arr],
                       len(rot_ref.rot[u]))
    return kv, kedges, data


def phase4_constraints(ctx: BlockContext, pd: PhaseData,
                       cs: ConstraintSet) -> None:
    """Turn the routed lists into (in)equalities.

    Parallel-class nodes chain every list riding one branch.  Rigid
    nodes walk the reference orientation once, tracking which side of
    each base cycle the walk is on, and split the decided positions into
    a left and a right chain tied by one inequality.
    """
    rooted = ctx.rooted
    by_node: dict[int, list[tuple[int, list[RelPosVar]]]] = {}
    for (ni, ei), lst in pd.contr.items():
        by_node.setdefault(ni, []).append((ei, lst))
    nodes = sorted(set(by_node) | set(pd.detcyc) | set(pd.detvert))
    for ni in nodes:
        node = ctx.tree.nodes[ni]
        edge_lists = sorted(by_node.get(ni, []))
        cyc_lists = pd.detcyc.get(ni, {})
        vert_lists = pd.detvert.get(ni, {})
        if node.kind == "P":
            if cyc_lists or vert_lists:
                raise InternalInvariant(
                    "parallel class cannot see two cycle tops")
            for _, lst in edge_lists:
                for a, b in zip(lst, lst[1:]):
                    cs.eq(a, b)
            continue
        if node.kind != "R":
            raise InternalInvariant("series node asked to decide a position")
        _r_node_emit(ctx, pd, ni, edge_lists, cyc_lists, vert_lists, cs)


def _r_node_emit(ctx: BlockContext, pd: PhaseData, ni: int,
                 edge_lists, cyc_lists, vert_lists,
                 cs: ConstraintSet) -> None:
    node = ctx.tree.nodes[ni]
    rot_ref = reference_rotation(node)
    bases = {var.base for _, lst in edge_lists for var in lst}
    bases |= {var.base for lsts in cyc_lists.values() for var in lsts}
    bases |= {var.base for lsts in vert_lists.values() for var in lsts}
    relevant = bases | set(cyc_lists)
    for c in relevant:
        if c not in pd.cyc[ni]:
            raise InternalInvariant("requested cycle missing from skeleton")
    kv, kedges, data = _r_side_data(ctx, pd, ni, rot_ref, relevant)
    contr_of_edge = {ei: lst for ei, lst in edge_lists}
    skel = node.skel

    def side_at(u: int, e: int) -> Side:
        pb, pa, deg = data[u]
        de = (rot_ref._pos[u][e] - pb) % deg
        da = (pa - pb) % deg
        if de == 0 or de == da:
            raise InternalInvariant("cycle edge asked for a side")
        return Side.LEFT if de < da else Side.RIGHT

    # before the walk first touches a cycle, everything explored sits in
    # the start vertex's region of that cycle
    side: dict[int, Side] = {}
    pending = set(bases)
    if 0 in kv and kv[0] in pending:
        side[kv[0]] = ON
        pending.discard(kv[0])
    if pending:
        seen = [False] * skel.n
        seen[0] = True
        queue = deque([0])
        while queue and pending:
            x = queue.popleft()
            for e in skel.adj[x]:
                y = skel.other(e, x)
                if seen[y]:
                    continue
                seen[y] = True
                c = kv.get(y)
                if c in pending:
                    if e in kedges[c]:
                        raise InternalInvariant(
                            "first touch arrived along the cycle")
                    side[c] = side_at(y, e)
                    pending.discard(c)
                queue.append(y)
        if pending:
            raise InternalInvariant("a base cycle escaped the skeleton")

    buckets: dict[Side, list[RelPosVar]] = {Side.LEFT: [], Side.RIGHT: []}
    expected = sum(len(l) for _, l in edge_lists) \
        + sum(len(l) for l in cyc_lists.values()) \
        + sum(len(l) for l in vert_lists.values())

    def grab(var: RelPosVar) -> None:
        s = side.get(var.base)
        if s is not ON and isinstance(s, Side):
            buckets[s].append(var)
        else:
            raise InternalInvariant("position read on top of its base")

    cycle_done: set[int] = set()
    vert_done: set[int] = set()

    def arrive(v: int) -> None:
        c = kv.get(v)
        if c is not None and c in cyc_lists and c not in cycle_done:
            cycle_done.add(c)
            for var in cyc_lists[c]:
                grab(var)
        hv = ctx.host_of_skel(ni, v)
        if hv in vert_lists and hv not in vert_done:
            vert_done.add(hv)
            for var in vert_lists[hv]:
                grab(var)

    visited = [False] * skel.n
    visited[0] = True
    arrive(0)
    edge_done = [False] * skel.m
    stack: list[tuple[int, int, list]] = [(0, 0, [])]
    while stack:
        x, i, undo = stack[-1]
        if i >= len(skel.adj[x]):
            stack.pop()
            for c, old in reversed(undo):
                if old is None:
                    del side[c]
                else:
                    side[c] = old
            continue
        stack[-1] = (x, i + 1, undo)
        e = skel.adj[x][i]
        if edge_done[e]:
            continue
        edge_done[e] = True
        y = skel.other(e, x)
        delta: list = []
        a = kv.get(x)
        if a is not None:
            delta.append((a, side.get(a)))
            side[a] = ON if e in kedges[a] else side_at(x, e)
        for var in contr_of_edge.get(e, ()):
            grab(var)
        if visited[y]:
            for c, old in reversed(delta):
                if old is None:
                    del side[c]
                else:
                    side[c] = old
            continue
        b = kv.get(y)
        if b is not None:
            delta.append((b, side.get(b)))
            side[b] = ON
        visited[y] = True
        arrive(y)
        stack.append((y, 0, delta))
    got = len(buckets[Side.LEFT]) + len(buckets[Side.RIGHT])
    if got != expected:
        raise InternalInvariant("walk missed a decided position")
    for lst in (buckets[Side.LEFT], buckets[Side.RIGHT]):
        for a, b in zip(lst, lst[1:]):
            cs.eq(a, b)
    if buckets[Side.LEFT] and buckets[Side.RIGHT]:
        cs.neq(buckets[Side.LEFT][0], buckets[Side.RIGHT][0])


# ---------------------------------------------------------------------------
# whole-host assembly


def _route_and_emit(host: Graph, cycles: list[DirectedCycle],
                    cs: ConstraintSet,
                    records: list[DeterminationRecord]) -> None:
    k = len(cycles)
    if host.m == 0 or k <= 1:
        return
    ctree = build_ctree(host, cycles)
    bc = BcTree(host)
    nb = len(bc.blocks)
    cut_node = {v: nb + i for i, v in enumerate(bc.cutvertices)}
    parent = [-1] * (nb + len(bc.cutvertices))
    seen = [False] * len(parent)
    seen[0] = True
    queue = deque([0])
    while queue:
        x = queue.popleft()
        if x < nb:
            for v in bc.block_vertices[x]:
                cn = cut_node.get(v)
                if cn is not None and not seen[cn]:
                    seen[cn] = True
                    parent[cn] = x
                    queue.append(cn)
        else:
            for bi in bc.blocks_of_cut[bc.cutvertices[x - nb]]:
                if not seen[bi]:
                    seen[bi] = True
                    parent[bi] = x
                    queue.append(bi)
    idx = TreeIndex(parent, 0)
    b_of_cycle = [bc.block_of_edge[cycles[ci].edge_ids(host)[0]]
                  for ci in range(k)]

    block_pairs: dict[int, list[tuple]] = {}
    cut_groups: dict[tuple[int, int], list[tuple[RelPosVar, int]]] = {}
    for var in canonical_variables(ctree):
        a, b = var.base, var.other
        ba, bb = b_of_cycle[a], b_of_cycle[b]
        if ba == bb:
            block_pairs.setdefault(ba, []).append(("cycle", var, b))
            continue
        w = idx.lca(ba, bb)
        vn = idx.child_toward(ba, bb) if w == ba else parent[ba]
        if vn < nb:
            raise InternalInvariant("block path does not alternate")
        v = bc.cutvertices[vn - nb]
        if v in cycles[a].vertex_set:
            cut_groups.setdefault((a, v), []).append((var, b))
        else:
            block_pairs.setdefault(ba, []).append(("vertex", var, v))

    for bi in sorted(block_pairs):
        ctx = BlockContext(host, cycles, bc.blocks[bi], block_index=bi)
        pd = phase1_induced(ctx)
        phase2_high(ctx, pd)
        phase3_det_contr(ctx, pd, block_pairs[bi])
        phase4_constraints(ctx, pd, cs)
        for var, site in pd.det.items():
            records.append(DeterminationRecord(var, site))

    for (a, v), entries in cut_groups.items():
        vn = cut_node[v]
        ref: dict[int, RelPosVar] = {}
        for var, tci in entries:
            bt = b_of_cycle[tci]
            anchor = idx.child_toward(vn, bt) if idx.lca(vn, bt) == vn \
                else parent[vn]
            if anchor in ref:
                cs.eq(var, ref[anchor])
            else:
                ref[anchor] = var
            records.append(DeterminationRecord(var, ("cutvertex", v)))


def build_cctree(host: Graph, cycles: list[DirectedCycle]) -> CcTree:
    """Constraint tree of one connected host."""
    if host.n > 0 and not is_connected(host):
        raise DisconnectedGraph("constraint tree needs a connected host")
    ctree = build_ctree(host, cycles)
    cs = ConstraintSet()
    for var in canonical_variables(ctree):
        cs.add_variable(var)
    _route_and_emit(host, cycles, cs, [])
    return CcTree(ctree, cs, tuple(cycles))


def cctree_determinations(host: Graph,
                          cycles: list[DirectedCycle]
                          ) -> list[DeterminationRecord]:
    """Deciding site of every crucial position, via the pass pipeline."""
    if host.n > 0 and not is_connected(host):
        raise DisconnectedGraph("constraint tree needs a connected host")
    records: list[DeterminationRecord] = []
    _route_and_emit(host, cycles, ConstraintSet(), records)
    return records


# ---------------------------------------------------------------------------
# model expansion and intersection


def represented_set(cc: CcTree, cap: int) -> set[SemiEmbedding]:
    """All full position assignments the constraint tree stands for.

    A non-crucial position copies the crucial one toward the target:
    pos_C(X) equals pos_C(first tree neighbor of C on the path to X).
    """
    k = cc.ctree.k
    models = enumerate_models(cc.cs, cap)
    if k == 0:
        return {SemiEmbedding(0, {})}
    adj = cc.ctree.adjacency()
    first = [[-1] * k for _ in range(k)]
    for i in range(k):
        row = first[i]
        row[i] = i
        queue = deque([i])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if row[y] < 0:
                    row[y] = y if x == i else row[x]
                    queue.append(y)
    out = set()
    for m in models:
        pos = {}
        for i in range(k):
            for j in range(k):
                if i != j:
                    pos[(i, j)] = m[RelPosVar(i, first[i][j])]
        out.add(SemiEmbedding(k, pos))
    return out


def intersect(t1: CcTree, t2: CcTree) -> CcTree:
    """Constraint tree representing exactly the common assignments.

    Keeps the first tree's shape.  The second tree's edges become (a)
    equalities forcing every cycle interior to the corresponding path in
    the first tree to see both path neighbours on one side, and (b) a
    renaming of the second tree's variables onto first-tree crucial
    ones.  Both come out of one bottom-up sweep over the first tree with
    per-cycle pending lists and a union-find giving, for each processed
    cycle, the child subtree a deeper cycle currently lives in.
    """
    if t1.ctree.k != t2.ctree.k:
        raise CycleFamilyMismatch(
            f"{t1.ctree.k} cycles versus {t2.ctree.k}")
    if t1.cycles and t2.cycles and t1.cycles != t2.cycles:
        raise CycleFamilyMismatch("trees were built over different families")
    k = t1.ctree.k
    cs = ConstraintSet()
    for var in canonical_variables(t1.ctree):
        cs.add_variable(var)
    for a, b in t1.cs.eqs:
        cs.eq(a, b)
    for a, b in t1.cs.neqs:
        cs.neq(a, b)
    for a, s in t1.cs.fixes:
        cs.fix(a, s)
    for la, lb in t1.cs.clauses:
        cs.add_clause(la, lb)
    if k <= 1:
        return CcTree(t1.ctree, cs, t1.cycles or t2.cycles)

    parent = t1.ctree.parent_array(0)
    idx = TreeIndex(parent, 0)
    m2 = len(t2.ctree.edges)
    # half-edge h of second-tree edge ti: 2ti from endpoint a, 2ti+1 from b
    nxt = list(range(2 * m2 + k))
    prv = list(range(2 * m2 + k))
    sent = [2 * m2 + c for c in range(k)]

    def insert(h: int, c: int) -> None:
        s = sent[c]
        prv[h] = prv[s]
        nxt[h] = s
        nxt[prv[s]] = h
        prv[s] = h

    def unlink(h: int) -> None:
        nxt[prv[h]] = nxt[h]
        prv[nxt[h]] = prv[h]

    en: dict[int, list[int]] = {}
    rep: dict[tuple[int, int], int] = {}
    for ti, (a, b) in enumerate(t2.ctree.edges):
        top = idx.lca(a, b)
        en.setdefault(top, []).append(ti)
        insert(2 * ti, a)
        insert(2 * ti + 1, b)
        if a != top:
            rep[(a, b)] = parent[a]
        if b != top:
            rep[(b, a)] = parent[b]

    uf = UnionFind(k)
    leader = list(range(k))
    for c in reversed(idx.order):
        for ti in en.get(c, ()):
            a, b = t2.ctree.edges[ti]
            unlink(2 * ti)
            unlink(2 * ti + 1)
            if a == c:
                rep[(a, b)] = leader[uf.find(b)]
            elif b == c:
                rep[(b, a)] = leader[uf.find(a)]
            else:
                ca = leader[uf.find(a)]
                cb = leader[uf.find(b)]
                if ca == cb:
                    raise InternalInvariant("meeting point is not the top")
                cs.eq(RelPosVar(c, ca), RelPosVar(c, cb))
        for child in idx.children[c]:
            s = sent[child]
            if nxt[s] == s:
                continue
            if c == idx.root:
                raise InternalInvariant("a pending path outlived the sweep")
            cs.eq(RelPosVar(c, child), RelPosVar(c, parent[c]))
            first, last = nxt[s], prv[s]
            tail = prv[sent[c]]
            nxt[tail] = first
            prv[first] = tail
            nxt[last] = sent[c]
            prv[sent[c]] = last
            nxt[s] = prv[s] = s
        for child in idx.children[c]:
            leader[uf.union(c, child)] = c

    def rename(x: RelPosVar) -> RelPosVar:
        key = (x.base, x.other)
        if key not in rep:
            raise InternalInvariant("second tree used a non-crucial variable")
        return RelPosVar(x.base, rep[key])

    for a, b in t2.cs.eqs:
        cs.eq(rename(a), rename(b))
    for a, b in t2.cs.neqs:
        cs.neq(rename(a), rename(b))
    for a, s in t2.cs.fixes:
        cs.fix(rename(a), s)
    for (a, sa), (b, sb) in t2.cs.clauses:
        cs.add_clause((rename(a), sa), (rename(b), sb))
    return CcTree(t1.ctree, cs, t1.cycles or t2.cycles)
