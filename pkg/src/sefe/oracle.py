"""Brute-force ground truth.

This module decides simultaneous embeddability by sheer enumeration: every
rotation system of every component of each graph, every way of arranging the
components on the sphere relative to one another.  It shares no algorithmic
ideas with the constraint-based solvers, which is what makes it usable as an
oracle in the tests.

The induced data compared between the two graphs ("signature") consists of

* the counterclockwise order of common edges around every vertex of common
  degree at least three, and
* for every ordered pair (X, Y) of common components that have edges, the
  face of X that contains Y.

Isolated common vertices and components of a graph that contain no common
edge do not restrict anything and are ignored.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import permutations

from .errors import CapExceeded, InternalInvariant
from .graphs import (
    DirectedCycle,
    Graph,
    RotationSystem,
    SefeInstance,
    SemiEmbedding,
    Side,
    connected_component_ids,
    cycle_sides,
    is_connected,
    is_sphere_embedding,
    planar_rotation,
    trace_faces,
)

DEFAULT_CAP = 200_000


def oracle_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("SEFE_ORACLE_CAP")
    return int(env) if env else DEFAULT_CAP


# ---------------------------------------------------------------------------
# rotation enumeration

def rotation_count(graph: Graph) -> int:
    """Number of rotation systems the enumerator will visit."""
    total = 1
    for v in range(graph.n):
        d = graph.degree(v)
        if d > 1:
            total *= math.factorial(d - 1)
    return total


def rotation_systems(graph: Graph, cap: int | None = None):
    """Yield all rotation systems, first incident edge of every vertex kept
    fixed (rotations are cyclic), remaining edges permuted in sorted order so
    the stream is lexicographic and deterministic."""
    if rotation_count(graph) > oracle_cap(cap):
        raise CapExceeded(
            f"{rotation_count(graph)} rotation systems exceed cap {oracle_cap(cap)}"
        )
    verts = [v for v in range(graph.n) if graph.degree(v) > 1]

    def rec(i: int, chosen: list[tuple[int, ...]]):
        if i == len(verts):
            rot: list[tuple[int, ...]] = [tuple(graph.adj[v]) for v in range(graph.n)]
            for v, order in zip(verts, chosen):
                rot[v] = order
            yield RotationSystem(graph, rot)
            return
        v = verts[i]
        first, rest = graph.adj[v][0], sorted(graph.adj[v][1:])
        for perm in permutations(rest):
            chosen.append((first,) + perm)
            yield from rec(i + 1, chosen)
            chosen.pop()

    yield from rec(0, [])


def enumerate_planar_rotations(graph: Graph, cap: int | None = None) -> list[RotationSystem]:
    """All sphere embeddings of a connected graph, lexicographic order."""
    return [r for r in rotation_systems(graph, cap) if is_sphere_embedding(r)]


# ---------------------------------------------------------------------------
# semi-embedding extraction (connected host)

def extract_semi(rotation: RotationSystem, cycles: list[DirectedCycle]) -> SemiEmbedding:
    """Relative positions induced by a sphere embedding of a connected host
    containing the given disjoint cycles."""
    pos: dict[tuple[int, int], Side] = {}
    for i, ci in enumerate(cycles):
        _, vside = cycle_sides(rotation, ci)
        for j, cj in enumerate(cycles):
            if i == j:
                continue
            pos[(i, j)] = vside[cj.vertices[0]]
    return SemiEmbedding(len(cycles), pos)


def extract_semi_all_vertices(
    rotation: RotationSystem, cycles: list[DirectedCycle]
) -> SemiEmbedding:
    """Like extract_semi but checks every vertex of the target cycle instead
    of sampling one; used to confirm sample independence."""
    pos: dict[tuple[int, int], Side] = {}
    for i, ci in enumerate(cycles):
        _, vside = cycle_sides(rotation, ci)
        for j, cj in enumerate(cycles):
            if i == j:
                continue
            sides = {vside[v] for v in cj.vertices}
            if len(sides) != 1:
                raise InternalInvariant("cycle straddles another cycle")
            pos[(i, j)] = sides.pop()
    return SemiEmbedding(len(cycles), pos)


def semi_embedding_set(
    graph: Graph, cycles: list[DirectedCycle], cap: int | None = None
) -> set[SemiEmbedding]:
    """All semi-embeddings realizable by sphere embeddings of a connected
    host graph."""
    if not is_connected(graph):
        raise InternalInvariant("semi_embedding_set expects a connected host")
    return {extract_semi(r, cycles) for r in enumerate_planar_rotations(graph, cap)}


# ---------------------------------------------------------------------------
# common-graph structure shared by the signature machinery


class _CommonComponent:
    """One edged component of the common graph, with its own face structure
    derived from an induced rotation."""

    __slots__ = ("index", "vertices", "common_edges", "graph")

    def __init__(self, index: int, vertices: list[int], common_edges: list[int], common: Graph):
        self.index = index
        self.vertices = vertices
        self.common_edges = common_edges  # common-local edge ids
        self.graph = common


def _edged_common_components(common: Graph) -> list[_CommonComponent]:
    comp = connected_component_ids(common)
    by_comp: dict[int, list[int]] = {}
    for e, (u, _) in enumerate(common.edges):
        by_comp.setdefault(comp[u], []).append(e)
    out = []
    for idx, c in enumerate(sorted(by_comp, key=lambda c: min(
        min(common.edges[e]) for e in by_comp[c]
    ))):
        vs = sorted(v for v in range(common.n) if comp[v] == c and common.degree(v) > 0)
        out.append(_CommonComponent(idx, vs, sorted(by_comp[c]), common))
    return out


def _induced_rotation(
    host: Graph, rot: RotationSystem, keep_host_edges: set[int]
) -> dict[int, tuple[int, ...]]:
    """Host rotation restricted to a subset of host-local edges."""
    out = {}
    for v in range(host.n):
        sub = tuple(e for e in rot.rot[v] if e in keep_host_edges)
        if sub:
            out[v] = sub
    return out


def _canonical_cycle_tuple(t: tuple[int, ...]) -> tuple[int, ...]:
    if not t:
        return t
    i = t.index(min(t))
    return t[i:] + t[:i]


# ---------------------------------------------------------------------------
# per-host-component analysis


class _EmbeddedComponent:
    """A host component with a fixed rotation: face structure plus, per
    common component inside it, the map from host faces to faces of that
    common component."""

    def __init__(
        self,
        host: Graph,
        vertices: list[int],
        edges: list[int],
        rotation_orders: dict[int, tuple[int, ...]],
    ):
        self.vertices = vertices
        self.edges = edges
        self.host = host
        sub = Graph(host.n, [host.edges[e] for e in edges], list(edges))
        rot = []
        for v in range(host.n):
            rot.append(rotation_orders.get(v, ()))
        # rotation_orders carry host-local ids; translate to sub-local
        to_sub = {he: i for i, he in enumerate(edges)}
        rot = [tuple(to_sub[e] for e in r) for r in rot]
        self.sub = sub
        self.rotation = RotationSystem(sub, rot)
        self.faces = trace_faces(self.rotation)
        self.face_of_dart = {}
        for i, walk in enumerate(self.faces):
            for dart in walk:
                self.face_of_dart[dart] = i
        self.to_sub = to_sub

        inst_of_sub = {i: host.edge_ids[he] for i, he in enumerate(edges)}
        self.inst_of_sub = inst_of_sub
        self.common_here: list[_CommonComponent] = []
        self.x_faces: dict[int, list] = {}
        self.x_face_of_dart: dict[int, dict] = {}
        self.host_face_label: dict[int, list[int]] = {}

    def analyze(self, common_comps: list[_CommonComponent]) -> None:
        """Derive face structure of the common components living in this host
        component.  Only valid for sphere embeddings."""
        inst_edges_here = set(self.inst_of_sub.values())
        for x in common_comps:
            inst_ids = {x.graph.edge_ids[e] for e in x.common_edges}
            if not inst_ids <= inst_edges_here:
                continue
            self.common_here.append(x)
            self._analyze_common(x, inst_ids)

    def _analyze_common(self, x: _CommonComponent, inst_ids: set[int]):
        common = x.graph
        sub_of_inst = {self.inst_of_sub[i]: i for i in self.inst_of_sub}
        xl_of_inst = {common.edge_ids[e]: e for e in x.common_edges}
        # rotation of X induced by this embedding, in common-local edge ids
        x_edge_sub = {sub_of_inst[i] for i in inst_ids}
        rot = [() for _ in range(common.n)]
        for v in x.vertices:
            order = tuple(
                xl_of_inst[self.inst_of_sub[e]]
                for e in self.rotation.rot[v]
                if e in x_edge_sub
            )
            rot[v] = order
        x_rot = RotationSystem(
            Graph(common.n, [common.edges[e] for e in range(common.m)],
                  list(common.edge_ids)),
            _pad_rotation(common, rot),
        )
        # only X's own edges are embedded here; other common components have
        # empty orders at their vertices, which trace_faces never visits
        x_faces = _faces_of_edge_subset(x_rot, set(x.common_edges))
        fod = {}
        for i, walk in enumerate(x_faces):
            for dart in walk:
                fod[dart] = i
        self.x_faces[x.index] = x_faces
        self.x_face_of_dart[x.index] = fod

        # label each host face with the face of X containing it
        labels = [-1] * len(self.faces)
        x_sub_edges = x_edge_sub
        for i, walk in enumerate(self.faces):
            for e, tail in walk:
                if e in x_sub_edges:
                    xl = xl_of_inst[self.inst_of_sub[e]]
                    lab = fod[(xl, tail)]
                    if labels[i] >= 0 and labels[i] != lab:
                        raise InternalInvariant("inconsistent face label")
                    labels[i] = lab
        # grow across edges not in X
        pending = [i for i, l in enumerate(labels) if l < 0]
        while pending:
            again = []
            for i in pending:
                lab = -1
                for e, tail in self.faces[i]:
                    if e in x_sub_edges:
                        continue
                    head = self.sub.other(e, tail)
                    j = self.face_of_dart[(e, head)]
                    if labels[j] >= 0:
                        lab = labels[j]
                        break
                if lab >= 0:
                    labels[i] = lab
                else:
                    again.append(i)
            if len(again) == len(pending):
                raise InternalInvariant("face labelling stalled")
            pending = again
        self.host_face_label[x.index] = labels

    def label_of_common(self, x_index: int, y: _CommonComponent) -> int:
        """Face of X containing the common component Y (same host comp)."""
        e_inst = y.graph.edge_ids[y.common_edges[0]]
        sub_e = next(i for i, ii in self.inst_of_sub.items() if ii == e_inst)
        u, v = self.sub.edges[sub_e]
        f = self.face_of_dart[(sub_e, min(u, v))]
        return self.host_face_label[x_index][f]

    def euler_ok(self) -> bool:
        nv = len(self.vertices)
        return nv - len(self.edges) + len(self.faces) == 2


def _pad_rotation(graph: Graph, rot: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Fill missing edges arbitrarily so RotationSystem validation passes for
    vertices outside the region of interest."""
    out = []
    for v in range(graph.n):
        listed = set(rot[v])
        extra = tuple(e for e in graph.adj[v] if e not in listed)
        out.append(tuple(rot[v]) + extra)
    return out


def _faces_of_edge_subset(rotation: RotationSystem, edges: set[int]):
    """Face walks of the sub-embedding spanned by ``edges`` only."""
    graph = rotation.graph
    sub_next = {}
    for v in range(graph.n):
        order = [e for e in rotation.rot[v] if e in edges]
        for i, e in enumerate(order):
            sub_next[(e, v)] = order[i - 1]
    seen = set()
    faces = []
    darts = sorted((e, t) for e in edges for t in rotation.graph.edges[e])
    for start in darts:
        if start in seen:
            continue
        walk = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            walk.append(cur)
            e, tail = cur
            head = graph.other(e, tail)
            cur = (sub_next[(e, head)], head)
        faces.append(walk)
    return faces


# ---------------------------------------------------------------------------
# arrangements of several host components on the sphere


def _arrangements(face_counts: list[int], budget: list[int]):
    """All ways to nest ``len(face_counts)`` pre-embedded components.

    Yields one placement list per arrangement: entry 0 is None, entry j >= 1
    is ``(region_dict, outward_face)`` with ``region_dict`` mapping earlier
    component indices to the face of that component the new one sits in
    (missing keys mean "in that component's outward face").
    """
    k = len(face_counts)
    if k == 0:
        yield []
        return
    regions = [{0: f} for f in range(face_counts[0])]
    placements: list = [None]

    def rec(j: int):
        if j == k:
            budget[0] -= 1
            if budget[0] < 0:
                raise CapExceeded("arrangement enumeration exceeded cap")
            yield [p if p is None else (dict(p[0]), p[1]) for p in placements]
            return
        def placed_in(d: dict, face: int) -> dict:
            d = dict(d)
            d[j] = face
            return d

        for ri in range(len(regions)):
            base = regions[ri]
            for outward in range(face_counts[j]):
                added = [
                    placed_in(base, g) for g in range(face_counts[j]) if g != outward
                ]
                old = regions[ri]
                regions[ri] = placed_in(base, outward)
                regions.extend(added)
                placements.append((base, outward))
                yield from rec(j + 1)
                placements.pop()
                del regions[len(regions) - len(added):]
                regions[ri] = old

    yield from rec(1)


# ---------------------------------------------------------------------------
# signatures and the brute-force decision


@dataclass
class SefeResult:
    satisfiable: bool
    semi: SemiEmbedding | None = None
    positions: dict[tuple[int, int], int] | None = None
    rotation1: RotationSystem | None = None
    rotation2: RotationSystem | None = None

    def __bool__(self) -> bool:
        return self.satisfiable


def _fixed_rotation_ok(instance: SefeInstance, rot_part: dict[int, tuple[int, ...]]) -> bool:
    for v, want in instance.fixed_rotations.items():
        got = rot_part.get(v, ())
        if len(got) != len(want):
            return False
        if len(want) < 2:
            continue
        if _canonical_cycle_tuple(tuple(want)) != _canonical_cycle_tuple(got):
            return False
    return True


def embedding_signatures(
    instance: SefeInstance, which: int, cap: int | None = None
) -> dict[tuple, RotationSystem]:
    """Map from induced common signature to one witnessing host rotation.

    Enumerates sphere embeddings of every component of the chosen graph that
    contains common edges, together with all sphere arrangements of those
    components.  When the instance fixes rotations, embeddings that disagree
    with them are dropped.
    """
    cap = oracle_cap(cap)
    host = instance.graph(which)
    common = instance.common
    common_comps = _edged_common_components(common)

    comp_id = connected_component_ids(host)
    inst_common_ids = set(common.edge_ids)
    groups: dict[int, list[int]] = {}
    for e in range(host.m):
        u, _ = host.edges[e]
        groups.setdefault(comp_id[u], []).append(e)
    relevant = []
    for c in sorted(groups):
        if any(host.edge_ids[e] in inst_common_ids for e in groups[c]):
            vs = sorted(v for v in range(host.n) if comp_id[v] == c)
            relevant.append((vs, sorted(groups[c])))

    # rotations of components that matter
    per_comp_embeddings: list[list[_EmbeddedComponent]] = []
    total = 1
    for vs, es in relevant:
        sub = Graph(host.n, [host.edges[e] for e in es], list(es))
        total *= rotation_count(sub)
        if total > cap:
            raise CapExceeded(f"{total} embedding combinations exceed cap {cap}")
        embs = []
        for rot in rotation_systems(sub, cap):
            orders = {
                v: tuple(es[e] for e in rot.rot[v]) for v in vs if sub.degree(v)
            }
            emb = _EmbeddedComponent(host, vs, es, orders)
            if emb.euler_ok():
                emb.analyze(common_comps)
                embs.append(emb)
        per_comp_embeddings.append(embs)

    x_of_host_comp = {}
    for ci, (vs, es) in enumerate(relevant):
        inst_here = {host.edge_ids[e] for e in es}
        for x in common_comps:
            if {common.edge_ids[e] for e in x.common_edges} <= inst_here:
                x_of_host_comp.setdefault(ci, []).append(x)

    host_of_x = {}
    for ci, xs in x_of_host_comp.items():
        for x in xs:
            host_of_x[x.index] = ci

    out: dict[tuple, RotationSystem] = {}
    budget = [cap]

    def signature_for(embs: list[_EmbeddedComponent], placements) -> tuple | None:
        rot_part: dict[int, tuple[int, ...]] = {}
        for emb in embs:
            induced = _induced_rotation(
                emb.sub,
                emb.rotation,
                {e for e in range(emb.sub.m) if emb.inst_of_sub[e] in inst_common_ids},
            )
            for v, order in induced.items():
                rot_part[v] = tuple(emb.inst_of_sub[e] for e in order)
        if not _fixed_rotation_ok(instance, rot_part):
            return None
        rot_sig = tuple(
            (v, _canonical_cycle_tuple(rot_part[v]))
            for v in sorted(rot_part)
            if len(rot_part[v]) >= 3
        )
        pos: dict[tuple[int, int], int] = {}
        for a in common_comps:
            for b in common_comps:
                if a.index == b.index:
                    continue
                ca, cb = host_of_x[a.index], host_of_x[b.index]
                emb_a = embs[ca]
                if ca == cb:
                    pos[(a.index, b.index)] = emb_a.label_of_common(a.index, b)
                else:
                    if ca < cb:
                        region, _ = placements[cb]
                        f_host = region.get(ca)
                        if f_host is None:
                            f_host = placements[ca][1]
                    else:
                        f_host = placements[ca][1]
                    pos[(a.index, b.index)] = emb_a.host_face_label[a.index][f_host]
        pos_sig = tuple(sorted(pos.items()))
        return (rot_sig, pos_sig)

    def rec(ci: int, chosen: list[_EmbeddedComponent]):
        if ci == len(per_comp_embeddings):
            counts = [len(emb.faces) for emb in chosen]
            for placements in _arrangements(counts, budget):
                sig = signature_for(chosen, placements)
                if sig is not None and sig not in out:
                    out[sig] = _assemble_rotation(instance, which, chosen)
            return
        for emb in per_comp_embeddings[ci]:
            chosen.append(emb)
            rec(ci + 1, chosen)
            chosen.pop()

    rec(0, [])
    return out


def _assemble_rotation(
    instance: SefeInstance, which: int, chosen: list[_EmbeddedComponent]
) -> RotationSystem:
    host = instance.graph(which)
    rot: list[tuple[int, ...]] = [tuple(host.adj[v]) for v in range(host.n)]
    covered = set()
    for emb in chosen:
        for v in emb.vertices:
            rot[v] = tuple(emb.edges[e] for e in emb.rotation.rot[v])
            covered.add(v)
    # components without common edges still deserve a planar rotation
    comp_id = connected_component_ids(host)
    todo = {comp_id[v] for v in range(host.n) if v not in covered and host.degree(v)}
    for c in sorted(todo):
        es = sorted(e for e, (u, _) in enumerate(host.edges) if comp_id[u] == c)
        sub = Graph(host.n, [host.edges[e] for e in es], list(es))
        pr = planar_rotation(sub)
        for v in range(host.n):
            if comp_id[v] == c and host.degree(v):
                rot[v] = tuple(es[e] for e in pr.rot[v])
    return RotationSystem(host, rot)


def position_signature_set(
    instance: SefeInstance, which: int, cap: int | None = None
) -> set[tuple]:
    return set(embedding_signatures(instance, which, cap))


def brute_force_sefe(instance: SefeInstance, cap: int | None = None) -> SefeResult:
    """Joint enumeration: the instance is simultaneously embeddable iff the
    two graphs can induce one identical common signature."""
    sig1 = embedding_signatures(instance, 1, cap)
    sig2 = embedding_signatures(instance, 2, cap)
    both = sorted(set(sig1) & set(sig2))
    if not both:
        return SefeResult(False)
    sig = both[0]
    semi, positions = _signature_to_positions(instance, sig)
    return SefeResult(True, semi, positions, sig1[sig], sig2[sig])


def _signature_to_positions(instance: SefeInstance, sig: tuple):
    common = instance.common
    comps = _edged_common_components(common)
    _, pos_sig = sig
    positions = dict(pos_sig)
    # when every edged common component is a cycle, also report sides
    semi = None
    if comps and all(_is_cycle(c) for c in comps):
        side_of: dict[tuple[int, int], Side] = {}
        for (i, j), face in positions.items():
            side_of[(i, j)] = _face_side_of_cycle(comps[i], face)
        semi = SemiEmbedding(len(comps), side_of)
    return semi, positions


def _is_cycle(x: _CommonComponent) -> bool:
    return len(x.vertices) == len(x.common_edges) and all(
        x.graph.degree(v) == 2 for v in x.vertices
    )


def cycle_of_component(x: _CommonComponent) -> DirectedCycle:
    g = x.graph
    start = x.vertices[0]
    seq = [start]
    prev, cur = start, g.other(g.adj[start][0], start)
    while cur != start:
        seq.append(cur)
        nbrs = [g.other(e, cur) for e in g.adj[cur]]
        prev, cur = cur, nbrs[1] if nbrs[0] == prev else nbrs[0]
    return DirectedCycle.from_sequence(seq)


def _face_side_of_cycle(x: _CommonComponent, face: int) -> Side:
    """Identify a canonical face index of a cycle component with Left/Right
    relative to the cycle's canonical direction."""
    cyc = cycle_of_component(x)
    common = x.graph
    rot = [()] * common.n
    for v in x.vertices:
        rot[v] = tuple(common.adj[v])
    x_rot = RotationSystem(common, _pad_rotation(common, rot))
    faces = _faces_of_edge_subset(x_rot, set(x.common_edges))
    u, v = cyc.vertices[0], cyc.vertices[1]
    e = common.edge_between(u, v)
    left_face = next(i for i, walk in enumerate(faces) if (e, u) in walk)
    return Side.LEFT if face == left_face else Side.RIGHT
