"""Core graph and embedding primitives.

Everything else in the package is built on the types in this module: plain
multigraphs with dense integer ids, rotation systems describing combinatorial
embeddings, directed cycles in canonical form, instances of the simultaneous
embedding problem, and the face machinery (tracing, sphere test, region
growing relative to a cycle).

Conventions used throughout:

* The cyclic order stored per vertex is read counterclockwise.
* A directed edge is a pair ``(edge_id, tail)``.
* The face to the left of a directed edge ``(e, u)`` is the face whose walk
  contains ``(e, u)``; walks continue at the head with the counterclockwise
  predecessor of the arriving edge, which makes every walk trace the face on
  the left of each of its directed edges.
* A directed cycle is canonical when it starts at its smallest vertex and
  proceeds toward the smaller-id neighbour of that vertex.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import networkx as nx

from .errors import (
    CommonGraphNotCycles,
    CycleNotEmbedded,
    DisconnectedGraph,
    InternalInvariant,
    MalformedEdge,
    NonPlanarInput,
)


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def opposite(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT

    def __lt__(self, other: "Side") -> bool:
        return self is Side.LEFT and other is Side.RIGHT

    def __repr__(self) -> str:  # keeps frozen test output readable
        return self.value


class EdgeTag(enum.Enum):
    COMMON = "c"
    EXCL1 = "1"
    EXCL2 = "2"


# ---------------------------------------------------------------------------
# graphs


class Graph:
    """Multigraph with vertices ``0..n-1`` and edges addressed by index.

    ``edge_ids`` carries an external label per edge so that subgraphs can
    remember which edge of the parent instance a local edge came from.  For a
    graph built from scratch the labels are just ``0..m-1``.
    """

    __slots__ = ("n", "edges", "edge_ids", "adj")

    def __init__(
        self,
        n: int,
        edges: list[tuple[int, int]],
        edge_ids: list[int] | None = None,
    ):
        if n < 0:
            raise MalformedEdge("negative vertex count")
        self.n = n
        self.edges: list[tuple[int, int]] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise MalformedEdge(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise MalformedEdge(f"self loop at {u}")
            e = len(self.edges)
            self.edges.append((u, v))
            self.adj[u].append(e)
            self.adj[v].append(e)
        if edge_ids is None:
            edge_ids = list(range(len(self.edges)))
        if len(edge_ids) != len(self.edges):
            raise MalformedEdge("edge_ids length mismatch")
        self.edge_ids = list(edge_ids)

    @property
    def m(self) -> int:
        return len(self.edges)

    def other(self, e: int, v: int) -> int:
        u, w = self.edges[e]
        if v == u:
            return w
        if v == w:
            return u
        raise InternalInvariant(f"vertex {v} not on edge {e}")

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            key = (u, v) if u < v else (v, u)
            if key in seen:
                return False
            seen.add(key)
        return True

    def edge_between(self, u: int, v: int) -> int | None:
        """Local id of an edge joining u and v, or None.  Raises on parallel
        candidates so callers cannot silently pick the wrong one."""
        found = None
        for e in self.adj[u]:
            if self.other(e, u) == v:
                if found is not None:
                    raise InternalInvariant(f"parallel edges between {u} and {v}")
                found = e
        return found

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges!r})"


def connected_component_ids(graph: Graph) -> list[int]:
    """Component index per vertex, numbered by smallest contained vertex."""
    comp = [-1] * graph.n
    c = 0
    for s in range(graph.n):
        if comp[s] >= 0:
            continue
        stack = [s]
        comp[s] = c
        while stack:
            v = stack.pop()
            for e in graph.adj[v]:
                w = graph.other(e, v)
                if comp[w] < 0:
                    comp[w] = c
                    stack.append(w)
        c += 1
    return comp


def is_connected(graph: Graph) -> bool:
    if graph.n == 0:
        return True
    return max(connected_component_ids(graph)) == 0


def is_planar(graph: Graph) -> bool:
    g = nx.MultiGraph()
    g.add_nodes_from(range(graph.n))
    for i, (u, v) in enumerate(graph.edges):
        g.add_edge(u, v, key=i)
    ok, _ = nx.check_planarity(g)
    return ok


def planar_rotation(graph: Graph) -> "RotationSystem":
    """Some planar rotation system of a connected simple graph.

    The result is deterministic for a fixed graph because the networkx
    planarity test is deterministic in its input order.
    """
    if not graph.is_simple():
        raise InternalInvariant("planar_rotation expects a simple graph")
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    for u, v in graph.edges:
        g.add_edge(u, v)
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise NonPlanarInput("graph is not planar")
    rot = []
    for v in range(graph.n):
        nbrs = list(emb.neighbors_cw_order(v)) if graph.degree(v) else []
        # networkx reports clockwise order; flip to counterclockwise
        nbrs.reverse()
        rot.append(tuple(graph.edge_between(v, w) for w in nbrs))
    return RotationSystem(graph, rot)


# ---------------------------------------------------------------------------
# rotation systems and faces


class RotationSystem:
    """Counterclockwise cyclic edge order per vertex."""

    __slots__ = ("graph", "rot", "_pos")

    def __init__(self, graph: Graph, rot: list[tuple[int, ...]]):
        if len(rot) != graph.n:
            raise MalformedEdge("rotation length mismatch")
        self.graph = graph
        self.rot = [tuple(r) for r in rot]
        self._pos: list[dict[int, int]] = []
        for v in range(graph.n):
            if sorted(self.rot[v]) != sorted(graph.adj[v]):
                raise MalformedEdge(f"rotation at {v} does not list its edges")
            self._pos.append({e: i for i, e in enumerate(self.rot[v])})

    def next_left(self, e: int, head: int) -> int:
        """Edge after arriving at ``head`` via ``e`` when tracing left faces:
        the counterclockwise predecessor of ``e`` at ``head``."""
        r = self.rot[head]
        return r[self._pos[head][e] - 1]

    def mirror(self) -> "RotationSystem":
        return RotationSystem(self.graph, [tuple(reversed(r)) for r in self.rot])

    def key(self) -> tuple:
        """Cyclic-rotation-invariant form: same key, same embedding."""
        out = []
        for r in self.rot:
            if r:
                i = r.index(min(r))
                r = r[i:] + r[:i]
            out.append(r)
        return tuple(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, RotationSystem) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"RotationSystem({self.rot!r})"


def trace_faces(rotation: RotationSystem) -> list[list[tuple[int, int]]]:
    """All face walks as lists of directed edges ``(edge_id, tail)``.

    Each directed edge appears in exactly one walk; the walk lies to the left
    of each of its directed edges.  Faces are ordered by their smallest
    directed edge, and each walk starts at that edge, which makes the output
    canonical for a fixed rotation system.
    """
    graph = rotation.graph
    seen: set[tuple[int, int]] = set()
    faces = []
    darts = sorted(
        (e, t) for e, (u, v) in enumerate(graph.edges) for t in (u, v)
    )
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
            cur = (rotation.next_left(e, head), head)
        if cur != start:
            raise InternalInvariant("face walk did not close on its start")
        faces.append(walk)
    return faces


def is_sphere_embedding(rotation: RotationSystem) -> bool:
    """Euler test V - E + F == 2 for a connected graph."""
    graph = rotation.graph
    if not is_connected(graph):
        raise DisconnectedGraph("sphere test needs a connected graph")
    if graph.m == 0:
        return graph.n <= 1
    f = len(trace_faces(rotation))
    return graph.n - graph.m + f == 2


# ---------------------------------------------------------------------------
# cycles


@dataclass(frozen=True)
class DirectedCycle:
    """Simple cycle in canonical direction.

    ``vertices`` starts at the smallest vertex of the cycle and proceeds
    toward the smaller of its two neighbours on the cycle.
    """

    vertices: tuple[int, ...]

    @staticmethod
    def from_sequence(seq: list[int] | tuple[int, ...]) -> "DirectedCycle":
        if len(seq) < 3 or len(set(seq)) != len(seq):
            raise MalformedEdge(f"not a simple cycle: {seq!r}")
        k = len(seq)
        i = seq.index(min(seq))
        nxt, prv = seq[(i + 1) % k], seq[(i - 1) % k]
        if nxt <= prv:
            out = tuple(seq[(i + j) % k] for j in range(k))
        else:
            out = tuple(seq[(i - j) % k] for j in range(k))
        return DirectedCycle(out)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def arcs(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def edge_ids(self, graph: Graph) -> list[int]:
        """Local edge ids realizing the cycle in ``graph``, in arc order."""
        out = []
        for u, v in self.arcs():
            e = graph.edge_between(u, v)
            if e is None:
                raise CycleNotEmbedded(f"no edge between {u} and {v}")
            out.append(e)
        return out


def cycles_are_disjoint(cycles: list[DirectedCycle]) -> bool:
    seen: set[int] = set()
    for c in cycles:
        if seen & c.vertex_set:
            return False
        seen |= c.vertex_set
    return True


# ---------------------------------------------------------------------------
# semi-embeddings


class SemiEmbedding:
    """Total assignment of Left/Right to every ordered pair of distinct
    cycles of a family.  No consistency is implied; a semi-embedding may or
    may not be induced by an actual arrangement of the cycles."""

    __slots__ = ("k", "pos")

    def __init__(self, k: int, pos: dict[tuple[int, int], Side]):
        need = {(i, j) for i in range(k) for j in range(k) if i != j}
        if set(pos) != need:
            raise MalformedEdge("semi-embedding must assign every ordered pair")
        self.k = k
        self.pos = dict(pos)

    def __getitem__(self, ij: tuple[int, int]) -> Side:
        return self.pos[ij]

    def key(self) -> tuple:
        return tuple(self.pos[ij] for ij in sorted(self.pos))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SemiEmbedding)
            and self.k == other.k
            and self.pos == other.pos
        )

    def __hash__(self) -> int:
        return hash((self.k, self.key()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{i}->{j}: {s.value}" for (i, j), s in sorted(self.pos.items()))
        return f"SemiEmbedding({inner})"


# ---------------------------------------------------------------------------
# instances


@dataclass
class SefeInstance:
    """Two planar graphs on a shared vertex set plus the tag of every edge.

    ``graph1`` is the union of common and first-exclusive edges, ``graph2``
    of common and second-exclusive ones.  Subgraphs remember the instance
    edge id of each local edge through ``Graph.edge_ids``.
    """

    n: int
    edges: list[tuple[int, int]]
    tags: list[EdgeTag]
    fixed_rotations: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def _sub(self, keep: set[EdgeTag]) -> Graph:
        es, ids = [], []
        for i, (uv, t) in enumerate(zip(self.edges, self.tags)):
            if t in keep:
                es.append(uv)
                ids.append(i)
        return Graph(self.n, es, ids)

    @property
    def union(self) -> Graph:
        return Graph(self.n, list(self.edges))

    @property
    def graph1(self) -> Graph:
        return self._sub({EdgeTag.COMMON, EdgeTag.EXCL1})

    @property
    def graph2(self) -> Graph:
        return self._sub({EdgeTag.COMMON, EdgeTag.EXCL2})

    @property
    def common(self) -> Graph:
        return self._sub({EdgeTag.COMMON})

    def graph(self, which: int) -> Graph:
        if which == 1:
            return self.graph1
        if which == 2:
            return self.graph2
        raise MalformedEdge(f"graph index must be 1 or 2, got {which}")


def build_instance(
    n: int,
    tagged_edges: list[tuple[int, int, EdgeTag]],
    fixed_rotations: dict[int, tuple[int, ...]] | None = None,
    check_planar: bool = True,
) -> SefeInstance:
    """Validate and assemble an instance.

    Each of the two graphs must be simple and planar; the union may contain
    parallel edges only when they belong to different graphs.
    """
    edges = [(u, v) for u, v, _ in tagged_edges]
    try:
        tags = [EdgeTag(t) for _, _, t in tagged_edges]
    except ValueError as exc:
        raise MalformedEdge(str(exc)) from None
    inst = SefeInstance(n, edges, tags, dict(fixed_rotations or {}))
    for which in (1, 2):
        g = inst.graph(which)
        if not g.is_simple():
            raise MalformedEdge(f"graph {which} repeats an edge")
        if check_planar and not is_planar(g):
            raise NonPlanarInput(f"graph {which} is not planar")
    return inst


def common_cycles(instance: SefeInstance) -> tuple[list[DirectedCycle], list[int]]:
    """Cycle family of the common graph plus its isolated vertices.

    The common graph must be a disjoint union of simple cycles (every vertex
    of common degree 0 or 2, every component with edges a single cycle of
    length at least 3).  Cycles come back in canonical direction, sorted by
    smallest vertex; vertices without common edges are reported separately.
    """
    g = instance.common
    for v in range(g.n):
        if g.degree(v) not in (0, 2):
            raise CommonGraphNotCycles(f"common degree of {v} is {g.degree(v)}")
    seen = [False] * g.n
    cycles = []
    isolated = []
    for s in range(g.n):
        if g.degree(s) == 0:
            isolated.append(s)
            continue
        if seen[s]:
            continue
        walk = [s]
        seen[s] = True
        prev_e = None
        v = s
        while True:
            nxt = None
            for e in g.adj[v]:
                if e != prev_e:
                    nxt = e
                    break
            if nxt is None:
                raise CommonGraphNotCycles("common component is a path")
            w = g.other(nxt, v)
            if w == s:
                break
            if seen[w]:
                raise CommonGraphNotCycles("common component is not a simple cycle")
            walk.append(w)
            seen[w] = True
            prev_e, v = nxt, w
        if len(walk) < 3:
            raise CommonGraphNotCycles("common component is a doubled edge")
        cycles.append(DirectedCycle.from_sequence(walk))
    cycles.sort(key=lambda c: c.vertices[0])
    return cycles, isolated


# ---------------------------------------------------------------------------
# regions relative to a cycle

ON = "on"


def cycle_sides(
    rotation: RotationSystem, cycle: DirectedCycle
) -> tuple[dict[int, Side], list]:
    """Side of every face and vertex relative to a directed cycle.

    Works on a sphere embedding of a connected graph containing the cycle.
    Returns ``(face_side, vertex_side)`` where ``face_side`` maps face index
    (into ``trace_faces(rotation)``) to a Side and ``vertex_side`` maps each
    vertex to a Side or the marker ``ON``.
    """
    graph = rotation.graph
    faces = trace_faces(rotation)
    cyc_edges = set(cycle.edge_ids(graph))

    face_of_dart = {}
    for i, walk in enumerate(faces):
        for dart in walk:
            face_of_dart[dart] = i

    # seed faces left and right of the directed cycle
    side: dict[int, Side] = {}
    vs = cycle.vertices
    cyc_edge_list = cycle.edge_ids(graph)
    for idx, (u, v) in enumerate(cycle.arcs()):
        e = cyc_edge_list[idx]
        lf = face_of_dart[(e, u)]
        rf = face_of_dart[(e, v)]
        for f, s in ((lf, Side.LEFT), (rf, Side.RIGHT)):
            if side.get(f, s) != s:
                raise CycleNotEmbedded("cycle bounds a single face on one side")
            side[f] = s

    # grow across edges not on the cycle
    queue = list(side)
    while queue:
        f = queue.pop()
        for e, tail in faces[f]:
            if e in cyc_edges:
                continue
            head = graph.other(e, tail)
            g = face_of_dart[(e, head)]
            if g not in side:
                side[g] = side[f]
                queue.append(g)
            elif side[g] is not side[f]:
                raise InternalInvariant("regions of a cycle collided")
    if len(side) != len(faces):
        raise InternalInvariant("cycle regions did not cover all faces")

    vertex_side: list = [None] * graph.n
    on = set(vs)
    for i, walk in enumerate(faces):
        for e, tail in walk:
            if vertex_side[tail] is None and tail not in on:
                vertex_side[tail] = side[i]
    for v in on:
        vertex_side[v] = ON
    return side, vertex_side


# ---------------------------------------------------------------------------
# serialization

_TAG_BY_TOKEN = {t.value: t for t in EdgeTag}


def parse_instance(text: str) -> SefeInstance:
    """Read the on-disk format.

    First meaningful line is ``sefe <n>``; every further line is either
    ``u v {c|1|2}`` or ``rot v: e1 e2 ...`` fixing the counterclockwise order
    of the listed instance edge ids around ``v``.  ``#`` starts a comment.
    """
    n = None
    tagged: list[tuple[int, int, EdgeTag]] = []
    rots: dict[int, tuple[int, ...]] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "sefe":
                raise MalformedEdge(f"expected 'sefe <n>' header, got {raw!r}")
            n = int(parts[1])
            continue
        if parts[0] == "rot":
            if len(parts) < 2 or not parts[1].endswith(":"):
                raise MalformedEdge(f"bad rotation line {raw!r}")
            v = int(parts[1][:-1])
            rots[v] = tuple(int(x) for x in parts[2:])
            continue
        if len(parts) != 3 or parts[2] not in _TAG_BY_TOKEN:
            raise MalformedEdge(f"bad edge line {raw!r}")
        tagged.append((int(parts[0]), int(parts[1]), _TAG_BY_TOKEN[parts[2]]))
    if n is None:
        raise MalformedEdge("missing 'sefe <n>' header")
    for v, order in rots.items():
        if not 0 <= v < n:
            raise MalformedEdge(f"rotation for unknown vertex {v}")
        for e in order:
            if not 0 <= e < len(tagged):
                raise MalformedEdge(f"rotation at {v} lists unknown edge {e}")
    return build_instance(n, tagged, rots)


def format_instance(instance: SefeInstance) -> str:
    lines = [f"sefe {instance.n}"]
    for (u, v), t in zip(instance.edges, instance.tags):
        lines.append(f"{u} {v} {t.value}")
    for v in sorted(instance.fixed_rotations):
        order = " ".join(str(e) for e in instance.fixed_rotations[v])
        lines.append(f"rot {v}: {order}")
    return "\n".join(lines) + "\n"
