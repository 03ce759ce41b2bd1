"""Relative positions of disjoint common cycles inside each host graph.

For a single connected host, the achievable left/right positions of the
family cycles relative to one another are captured exactly by boolean
(in)equalities: parallel-class skeletons force cycles sharing a
non-cycle bundle edge onto one side, triconnected skeletons pin every
determined position up to one global flip, and cutvertices tie whole
hanging subgraphs to one side.  Two connected hosts admit a simultaneous
embedding inducing the same cycle arrangement iff the union of both
constraint systems is satisfiable, which is a 2-SAT instance.

The same per-skeleton analysis drives witness construction: a satisfying
assignment dictates an embedding choice for every skeleton and a face
for every attachment at a cutvertex, and the choices compose into host
rotation systems inducing the assignment.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .connectivity import BcTree, cut_components, is_biconnected
from .errors import (
    ConstraintViolation,
    InternalInvariant,
    NotBiconnected,
    PreprocessingRequired,
)
from .graphs import (
    ON,
    DirectedCycle,
    Graph,
    RotationSystem,
    SefeInstance,
    SemiEmbedding,
    Side,
    common_cycles,
    cycle_sides,
    is_connected,
    trace_faces,
)
from .oracle import extract_semi
from .spqr import REAL, RootedSpqr, build_spqr, reference_rotation
from .twosat import ConstraintSet, merge, satisfied_by, solve


class RelPosVar(NamedTuple):
    """Position of cycle ``other`` relative to directed cycle ``base``."""

    base: int
    other: int


@dataclass(frozen=True)
class DeterminationRecord:
    """Where one relative position is decided inside one host.

    ``site`` is ("node", block index, decomposition node index) or
    ("cutvertex", vertex).
    """

    var: RelPosVar
    site: tuple


def _follows(canon: tuple[int, ...], raw: tuple[int, ...]) -> bool:
    """Whether the canonical direction walks ``raw`` forward."""
    i = raw.index(canon[0])
    return raw[(i + 1) % len(raw)] == canon[1]


@dataclass
class _NodeInfo:
    ni: int
    node: object
    bases: list[tuple[int, frozenset[int]]]     # (cycle id, kappa edge set)
    contracted: dict[int, list[int]]            # skeleton edge -> cycle ids
    interior: list[list[int]]                   # skeleton edge -> marker verts
    skel_markers: list[tuple[int, int]]         # (skeleton vertex, host vertex)
    skel_of_host: dict[int, int]


class _Block:
    """One block of a host plus everything the per-skeleton analysis needs.

    ``hang`` maps a cutvertex of this block to the family cycles that are
    only reachable from the block through that vertex.
    """

    def __init__(self, host: Graph, cycles: list[DirectedCycle],
                 cycle_of_edge: dict[int, int], block_edges: list[int],
                 block_index: int, cycle_ids: list[int],
                 hang: dict[int, list[int]]):
        self.host = host
        self.cycles = cycles
        self.cycle_of_edge = cycle_of_edge
        self.index = block_index
        self.cycle_ids = cycle_ids
        self.hang = hang
        self.bverts = sorted({x for e in block_edges for x in host.edges[e]})
        loc = {v: i for i, v in enumerate(self.bverts)}
        self.bgraph = Graph(
            len(self.bverts),
            [(loc[u], loc[v]) for u, v in (host.edges[e] for e in block_edges)],
            list(block_edges),
        )
        self.tree = build_spqr(self.bgraph)

    def host_vertex(self, ni: int, x: int) -> int:
        return self.bverts[self.tree.nodes[ni].verts[x]]

    def node_infos(self) -> list[_NodeInfo]:
        """Analysis of every P- and R-node that carries a cycle."""
        out = []
        for ni, node in enumerate(self.tree.nodes):
            if node.kind not in ("P", "R"):
                continue
            info = self._analyze(ni, node)
            if info.bases:
                out.append(info)
        return out

    def _analyze(self, ni: int, node) -> _NodeInfo:
        host_edge_of = self.bgraph.edge_ids
        touch: list[set[int]] = []
        interior: list[list[int]] = []
        for ei, lab in enumerate(node.labels):
            if lab[0] == REAL:
                c = self.cycle_of_edge.get(host_edge_of[lab[1]])
                touch.append(set() if c is None else {c})
                interior.append([])
                continue
            cs: set[int] = set()
            bl_verts: set[int] = set()
            for be in self.tree.expansion_edges(ni, ei):
                c = self.cycle_of_edge.get(host_edge_of[be])
                if c is not None:
                    cs.add(c)
                u, v = self.bgraph.edges[be]
                bl_verts.add(u)
                bl_verts.add(v)
            touch.append(cs)
            poles = {node.verts[x] for x in node.skel.edges[ei]}
            interior.append(sorted(
                self.bverts[w] for w in bl_verts - poles
                if self.bverts[w] in self.hang
            ))

        bases = []
        contracted: dict[int, list[int]] = {}
        for ci in self.cycle_ids:
            es = [ei for ei, cs in enumerate(touch) if ci in cs]
            if not es:
                raise InternalInvariant("cycle lost by the edge expansions")
            if len(es) == 1:
                contracted.setdefault(es[0], []).append(ci)
            else:
                bases.append((ci, frozenset(es)))

        skel_of_host = {
            self.bverts[bl]: x for x, bl in enumerate(node.verts)
        }
        skel_markers = [
            (x, self.bverts[bl]) for x, bl in enumerate(node.verts)
            if self.bverts[bl] in self.hang
        ]
        return _NodeInfo(ni, node, bases, contracted, interior,
                         skel_markers, skel_of_host)

    # ---- determined positions of one node -------------------------------

    def p_groups(self, info: _NodeInfo) -> list[list[RelPosVar]]:
        """Same-side groups of a parallel-class node, one per bundle edge."""
        if len(info.bases) != 1:
            raise InternalInvariant("two disjoint cycles through one bundle")
        (ci, kappa), = info.bases
        if len(kappa) != 2:
            raise InternalInvariant("bundle cycle is not a pair of edges")
        groups = []
        for ei in range(info.node.skel.m):
            if ei in kappa:
                continue
            members = [RelPosVar(ci, cj)
                       for cj in sorted(info.contracted.get(ei, []))]
            for v in info.interior[ei]:
                members.extend(RelPosVar(ci, hj) for hj in self.hang[v])
            if members:
                groups.append(members)
        return groups

    def r_sides(self, info: _NodeInfo,
                rot_ref: RotationSystem) -> list[tuple[RelPosVar, Side]]:
        """Positions pinned by a triconnected node, for one orientation."""
        node = info.node
        faces = trace_faces(rot_ref)
        fod = {d: i for i, walk in enumerate(faces) for d in walk}
        out: list[tuple[RelPosVar, Side]] = []
        for ci, kappa in info.bases:
            on_c = self.cycles[ci].vertex_set
            seq = tuple(info.skel_of_host[v]
                        for v in self.cycles[ci].vertices
                        if v in info.skel_of_host)
            kcan = DirectedCycle.from_sequence(seq)
            if set(kcan.edge_ids(node.skel)) != set(kappa):
                raise InternalInvariant("cycle trace disagrees with expansions")
            flip = not _follows(kcan.vertices, seq)
            fside, vside = cycle_sides(rot_ref, kcan)

            def corr(s: Side) -> Side:
                return s.opposite if flip else s

            for ei in range(node.skel.m):
                if ei in kappa:
                    continue
                u, v = node.skel.edges[ei]
                sa, sb = fside[fod[(ei, u)]], fside[fod[(ei, v)]]
                if sa is not sb:
                    raise InternalInvariant("edge faces straddle the cycle")
                for cj in sorted(info.contracted.get(ei, [])):
                    out.append((RelPosVar(ci, cj), corr(sa)))
                for w in info.interior[ei]:
                    for hj in self.hang[w]:
                        out.append((RelPosVar(ci, hj), corr(sa)))
            for cj, kappa_j in info.bases:
                if cj == ci:
                    continue
                x = node.skel.edges[min(kappa_j)][0]
                s = vside[x]
                if s is ON:
                    raise InternalInvariant("disjoint cycles share a vertex")
                out.append((RelPosVar(ci, cj), corr(s)))
            for x, w in info.skel_markers:
                if w in on_c:
                    continue        # handled by the cutvertex rule
                s = vside[x]
                if s is ON:
                    raise InternalInvariant("marker off the cycle sits on it")
                for hj in self.hang[w]:
                    out.append((RelPosVar(ci, hj), corr(s)))
        return out

    def emit(self, cs: ConstraintSet,
             records: list[DeterminationRecord]) -> None:
        """All constraints this block contributes."""
        for info in self.node_infos():
            site = ("node", self.index, info.ni)
            if info.node.kind == "P":
                for group in self.p_groups(info):
                    for var in group:
                        cs.add_variable(var)
                        records.append(DeterminationRecord(var, site))
                    for a, b in zip(group, group[1:]):
                        cs.eq(a, b)
            else:
                det = self.r_sides(info, reference_rotation(info.node))
                left = [v for v, s in det if s is Side.LEFT]
                right = [v for v, s in det if s is Side.RIGHT]
                for var, _ in det:
                    cs.add_variable(var)
                    records.append(DeterminationRecord(var, site))
                for bucket in (left, right):
                    for a, b in zip(bucket, bucket[1:]):
                        cs.eq(a, b)
                if left and right:
                    cs.neq(left[0], right[0])

    # ---- witness construction ------------------------------------------

    def rotation(self, semi: SemiEmbedding) -> dict[int, list[int]]:
        """Host-keyed rotation of this block realizing the assignment."""
        tree = self.tree
        infos = {info.ni: info for info in self.node_infos()}
        chrot: list[list[tuple[int, ...]]] = []
        for ni, node in enumerate(tree.nodes):
            if node.kind in ("S", "Q"):
                chrot.append([tuple(node.skel.adj[x])
                              for x in range(node.skel.n)])
            elif node.kind == "P":
                chrot.append(self._p_rotation(ni, node, infos.get(ni), semi))
            else:
                chrot.append(self._r_rotation(node, infos.get(ni), semi))

        # splice child skeletons into their parents, leaves first
        rooted = RootedSpqr(tree, 0)
        host_edge_of = self.bgraph.edge_ids
        seqs: dict[tuple[int, int], list[int]] = {}
        out: dict[int, list[int]] = {}
        for ni in reversed(rooted.order):
            node = tree.nodes[ni]
            up = rooted.up_edge[ni] if ni != 0 else -1
            items: list[list] = []
            for x in range(node.skel.n):
                lst: list = []
                for ei in chrot[ni][x]:
                    if ei == up:
                        lst.append(None)
                    elif node.labels[ei][0] == REAL:
                        lst.append(host_edge_of[node.labels[ei][1]])
                    else:
                        nj, _ = tree.twin[(ni, ei)]
                        lst.extend(seqs[(nj, node.verts[x])])
                items.append(lst)
            poles = set(node.skel.edges[up]) if ni != 0 else set()
            for x in range(node.skel.n):
                blv = node.verts[x]
                if x in poles:
                    i = items[x].index(None)
                    seqs[(ni, blv)] = items[x][i + 1:] + items[x][:i]
                else:
                    if self.bverts[blv] in out:
                        raise InternalInvariant("vertex finalized twice")
                    out[self.bverts[blv]] = items[x]
        if len(out) != len(self.bverts):
            raise InternalInvariant("splice missed a vertex")
        return out

    def _p_rotation(self, ni: int, node, info: _NodeInfo | None,
                    semi: SemiEmbedding) -> list[tuple[int, ...]]:
        edges_all = list(range(node.skel.m))
        if info is None:
            rot_s = tuple(edges_all)
            return [rot_s, tuple(reversed(rot_s))]
        (ci, kappa), = info.bases
        s_host = self.host_vertex(ni, 0)
        vs = self.cycles[ci].vertices
        p = vs.index(s_host)
        host_in = self.host.edge_between(vs[p - 1], s_host)
        host_out = self.host.edge_between(s_host, vs[(p + 1) % len(vs)])
        block_of_host = {h: b for b, h in enumerate(self.bgraph.edge_ids)}
        arrival = departure = None
        for ei in kappa:
            exp = set(self.tree.expansion_edges(ni, ei))
            if block_of_host[host_in] in exp:
                arrival = ei
            if block_of_host[host_out] in exp:
                departure = ei
        if arrival is None or departure is None or arrival == departure:
            raise InternalInvariant("cycle does not pass the bundle poles")
        lefts, rights = [], []
        for ei in edges_all:
            if ei in kappa:
                continue
            want = None
            for cj in info.contracted.get(ei, []):
                want = semi[(ci, cj)]
                break
            if want is None:
                for w in info.interior[ei]:
                    want = semi[(ci, self.hang[w][0])]
                    break
            (rights if want is Side.RIGHT else lefts).append(ei)
        rot_s = (arrival, *rights, departure, *lefts)
        return [rot_s, tuple(reversed(rot_s))]

    def _r_rotation(self, node, info: _NodeInfo | None,
                    semi: SemiEmbedding) -> list[tuple[int, ...]]:
        rot_ref = reference_rotation(node)
        if info is None:
            return list(rot_ref.rot)
        det = self.r_sides(info, rot_ref)
        if not det:
            return list(rot_ref.rot)
        matches = {semi[(var.base, var.other)] is s for var, s in det}
        if len(matches) != 1:
            raise InternalInvariant("assignment splits a rigid skeleton")
        if matches.pop():
            return list(rot_ref.rot)
        return list(rot_ref.mirror().rot)


class _HostContext:
    """Blocks, cutvertex splits and cycle locations of one connected host."""

    def __init__(self, host: Graph, cycles: list[DirectedCycle]):
        self.host = host
        self.cycles = cycles
        self.bc = BcTree(host)
        self.cycle_of_edge = {
            e: ci for ci, c in enumerate(cycles) for e in c.edge_ids(host)
        }
        self.first_edge = [c.edge_ids(host)[0] for c in cycles]
        self.block_of_cycle = [
            self.bc.block_of_edge[e] for e in self.first_edge
        ]
        # per cutvertex: host edge -> component index after removing it
        self.comp_of_edge: dict[int, dict[int, int]] = {}
        for v in self.bc.cutvertices:
            m = {}
            for hi, part in enumerate(cut_components(host, v)):
                for e in part.edge_ids:
                    m[e] = hi
            self.comp_of_edge[v] = m

        self.cut_in_block: list[list[int]] = [
            sorted(set(vs) & set(self.bc.cutvertices))
            for vs in self.bc.block_vertices
        ]
        self.blocks: list[_Block | None] = []
        for bi, block_edges in enumerate(self.bc.blocks):
            if len(block_edges) < 3:
                self.blocks.append(None)
                continue
            cycle_ids = [ci for ci in range(len(cycles))
                         if self.block_of_cycle[ci] == bi]
            hang: dict[int, list[int]] = {}
            for v in self.cut_in_block[bi]:
                comp_b = self.comp_of_edge[v][block_edges[0]]
                js = [cj for cj in range(len(cycles))
                      if self.block_of_cycle[cj] != bi
                      and self.comp_of_edge[v][self.first_edge[cj]] != comp_b]
                if js:
                    hang[v] = js
            self.blocks.append(_Block(host, cycles, self.cycle_of_edge,
                                      block_edges, bi, cycle_ids, hang))

    def cycle_through(self, v: int) -> int | None:
        for ci, c in enumerate(self.cycles):
            if v in c.vertex_set:
                return ci
        return None

    def constraints(self) -> tuple[ConstraintSet, list[DeterminationRecord]]:
        cs = ConstraintSet()
        records: list[DeterminationRecord] = []
        for blk in self.blocks:
            if blk is not None and blk.cycle_ids:
                blk.emit(cs, records)
        for v in self.bc.cutvertices:
            ci = self.cycle_through(v)
            if ci is None:
                continue
            comp_of = self.comp_of_edge[v]
            base_comp = comp_of[self.first_edge[ci]]
            groups: dict[int, list[RelPosVar]] = {}
            for cj in range(len(self.cycles)):
                if cj == ci:
                    continue
                h = comp_of[self.first_edge[cj]]
                if h != base_comp:
                    groups.setdefault(h, []).append(RelPosVar(ci, cj))
            for h in sorted(groups):
                group = groups[h]
                for var in group:
                    cs.add_variable(var)
                    records.append(DeterminationRecord(var, ("cutvertex", v)))
                for a, b in zip(group, group[1:]):
                    cs.eq(a, b)
        return cs, records


def _connected_constraints(
    host: Graph, cycles: list[DirectedCycle]
) -> tuple[ConstraintSet, list[DeterminationRecord]]:
    return _HostContext(host, cycles).constraints()


def pr_node_constraints(graph: Graph,
                        cycles: list[DirectedCycle]) -> ConstraintSet:
    """Position constraints of a biconnected host."""
    if not is_biconnected(graph):
        raise NotBiconnected("constraint generation needs a biconnected host")
    return _connected_constraints(graph, cycles)[0]


def pr_node_determinations(
    graph: Graph, cycles: list[DirectedCycle]
) -> list[DeterminationRecord]:
    if not is_biconnected(graph):
        raise NotBiconnected("determination scan needs a biconnected host")
    return _connected_constraints(graph, cycles)[1]


def extended_and_cutvertex_constraints(
    graph: Graph, cycles: list[DirectedCycle]
) -> ConstraintSet:
    """Position constraints of a connected host, cutvertices included."""
    return _connected_constraints(graph, cycles)[0]


def extended_determinations(
    graph: Graph, cycles: list[DirectedCycle]
) -> list[DeterminationRecord]:
    return _connected_constraints(graph, cycles)[1]


@dataclass
class CycleSefeResult:
    satisfiable: bool
    cycles: list[DirectedCycle]
    semi: SemiEmbedding | None
    variables: list[RelPosVar]
    constraints: ConstraintSet
    records: tuple[list[DeterminationRecord], list[DeterminationRecord]]

    def __bool__(self) -> bool:
        return self.satisfiable


def decide_sefe_cycles(instance: SefeInstance) -> CycleSefeResult:
    """Simultaneous embeddability for common graphs made of disjoint cycles.

    Both graphs must be connected; stitch the instance first if they are
    not.  The verdict comes from solving the union of both hosts'
    constraint systems; a satisfying model is returned as a semi-embedding
    that both graphs can realize.
    """
    g1, g2 = instance.graph1, instance.graph2
    for which, g in ((1, g1), (2, g2)):
        if not is_connected(g):
            raise PreprocessingRequired(
                f"graph {which} is disconnected; make both graphs connected "
                f"before deciding"
            )
    cycles, _ = common_cycles(instance)
    k = len(cycles)
    variables = [RelPosVar(i, j)
                 for i in range(k) for j in range(k) if i != j]
    base = ConstraintSet()
    for var in variables:
        base.add_variable(var)
    if k <= 1:
        return CycleSefeResult(True, cycles, SemiEmbedding(k, {}),
                               variables, base, ([], []))
    cs1, rec1 = _connected_constraints(g1, cycles)
    cs2, rec2 = _connected_constraints(g2, cycles)
    merged = merge(base, cs1, cs2)
    model = solve(merged)
    if model is None:
        return CycleSefeResult(False, cycles, None, variables, merged,
                               (rec1, rec2))
    semi = SemiEmbedding(k, {(i, j): model[RelPosVar(i, j)]
                             for i, j in variables})
    return CycleSefeResult(True, cycles, semi, variables, merged,
                           (rec1, rec2))


# ---------------------------------------------------------------------------
# witness realization

def _region_faces(host: Graph, region_rot: dict[int, list[int]],
                  cycle: DirectedCycle | None):
    """Face structure of an embedded region given by host-keyed rotations.

    Returns (corner face per (host vertex, position), face sides relative
    to the cycle in host direction, or None)."""
    verts = sorted(region_rot)
    vmap = {v: i for i, v in enumerate(verts)}
    des = sorted({e for lst in region_rot.values() for e in lst})
    emap = {e: i for i, e in enumerate(des)}
    g = Graph(len(verts),
              [(vmap[host.edges[e][0]], vmap[host.edges[e][1]]) for e in des],
              des)
    rot = RotationSystem(g, [tuple(emap[e] for e in region_rot[v])
                             for v in verts])
    faces = trace_faces(rot)
    fod = {d: i for i, walk in enumerate(faces) for d in walk}

    def corner_face(v: int, i: int) -> int:
        return fod[(emap[region_rot[v][i]], vmap[v])]

    side = None
    if cycle is not None:
        seq = tuple(vmap[x] for x in cycle.vertices)
        canon = DirectedCycle.from_sequence(seq)
        flip = not _follows(canon.vertices, seq)
        fside, _ = cycle_sides(rot, canon)
        side = {f: (s.opposite if flip else s) for f, s in fside.items()}
    return corner_face, side


def _pick_corner(host: Graph, region_rot: dict[int, list[int]], v: int,
                 cycle: DirectedCycle | None, want: Side | None) -> int:
    """Corner index at ``v`` opening into the lowest admissible face."""
    corner_face, side = _region_faces(host, region_rot, cycle)
    deg = len(region_rot[v])
    best_face = None
    best_i = None
    for i in range(deg):
        f = corner_face(v, i)
        if want is not None and side[f] is not want:
            continue
        if best_face is None or f < best_face:
            best_face, best_i = f, i
    if best_i is None:
        raise InternalInvariant("no admissible face at the attachment vertex")
    return best_i


def realize_embedding(host: Graph, cycles: list[DirectedCycle],
                      semi: SemiEmbedding) -> RotationSystem:
    """A sphere rotation of a connected host inducing a given assignment."""
    if host.m == 0:
        return RotationSystem(host, [() for _ in range(host.n)])
    ctx = _HostContext(host, cycles)
    cs, _ = ctx.constraints()
    model = {RelPosVar(i, j): semi[(i, j)]
             for i in range(len(cycles)) for j in range(len(cycles)) if i != j}
    if not satisfied_by(cs, model):
        raise ConstraintViolation(
            "assignment violates the host's position constraints"
        )

    block_rot: list[dict[int, list[int]]] = []
    for bi, block_edges in enumerate(ctx.bc.blocks):
        if ctx.blocks[bi] is None:
            e = block_edges[0]
            u, v = host.edges[e]
            block_rot.append({u: [e], v: [e]})
        else:
            block_rot.append(ctx.blocks[bi].rotation(semi))

    drawn_rot = {v: list(lst) for v, lst in block_rot[0].items()}
    drawn_cycles = set(ctx.blocks[0].cycle_ids if ctx.blocks[0] else [])
    drawn_blocks = [False] * len(ctx.bc.blocks)
    drawn_blocks[0] = True

    queue = deque([0])
    while queue:
        b = queue.popleft()
        for v in ctx.cut_in_block[b]:
            ci_v = ctx.cycle_through(v)
            children = [c for c in ctx.bc.blocks_of_cut[v]
                        if not drawn_blocks[c]]
            carrier = ctx.block_of_cycle[ci_v] if ci_v is not None else None
            children.sort(key=lambda c: (c != carrier, c))
            for c in children:
                drawn_blocks[c] = True
                bl = block_rot[c]

                comp_c = ctx.comp_of_edge[v][ctx.bc.blocks[c][0]]
                sub = [cj for cj in range(len(cycles))
                       if ctx.comp_of_edge[v][ctx.first_edge[cj]] == comp_c]
                cstar = ci_v if ci_v is not None and \
                    drawn_blocks[ctx.block_of_cycle[ci_v]] and \
                    ctx.block_of_cycle[ci_v] != c else None
                want = semi[(cstar, sub[0])] \
                    if cstar is not None and sub else None
                i = _pick_corner(host, drawn_rot, v,
                                 cycles[cstar] if cstar is not None else None,
                                 want)

                cb = ci_v if ci_v is not None and \
                    ctx.block_of_cycle[ci_v] == c else None
                want_b = semi[(cb, min(drawn_cycles))] \
                    if cb is not None and drawn_cycles else None
                j = _pick_corner(host, bl, v,
                                 cycles[cb] if cb is not None else None,
                                 want_b)

                blist = bl[v]
                drawn_rot[v] = drawn_rot[v][:i + 1] + blist[j + 1:] + \
                    blist[:j + 1] + drawn_rot[v][i + 1:]
                for w, lst in bl.items():
                    if w != v:
                        drawn_rot[w] = list(lst)
                if ctx.blocks[c]:
                    drawn_cycles.update(ctx.blocks[c].cycle_ids)
                queue.append(c)

    rotation = RotationSystem(
        host, [tuple(drawn_rot.get(v, [])) for v in range(host.n)]
    )
    if extract_semi(rotation, cycles) != semi:
        raise InternalInvariant("realized embedding induces a different "
                                "assignment")
    return rotation
