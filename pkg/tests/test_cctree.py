"""Constraint trees over contracted cycles: construction, routing passes,
model expansion and intersection."""

import json
import random

import pytest

from sefe.cctree import (
    BlockContext,
    CTree,
    CcTree,
    build_cctree,
    canonical_variables,
    cctree_determinations,
    intersect,
    phase1_induced,
    phase2_high,
    represented_set,
)
from sefe.connectivity import BcTree
from sefe.cycle_sefe import (
    RelPosVar,
    extended_and_cutvertex_constraints,
    extended_determinations,
)
from sefe.errors import CycleFamilyMismatch, DisconnectedGraph, SefeError
from sefe.graphs import (
    DirectedCycle,
    EdgeTag,
    Graph,
    SemiEmbedding,
    Side,
    build_instance,
    common_cycles,
    is_connected,
)
from sefe.lca import TreeIndex
from sefe.twosat import ConstraintSet, enumerate_models, merge

C, E1, E2 = EdgeTag.COMMON, EdgeTag.EXCL1, EdgeTag.EXCL2


def tri(b, tag=C):
    return [(b, b + 1, tag), (b + 1, b + 2, tag), (b, b + 2, tag)]


def cycles_host(n, tagged):
    inst = build_instance(n, tagged)
    cycles, _ = common_cycles(inst)
    return inst.graph1, cycles


def host_models(graph, cycles):
    """Assignments allowed by the quadratic constraint generator."""
    k = len(cycles)
    variables = [(i, j) for i in range(k) for j in range(k) if i != j]
    base = ConstraintSet()
    for i, j in variables:
        base.add_variable(RelPosVar(i, j))
    cs = merge(base, extended_and_cutvertex_constraints(graph, cycles))
    return {
        SemiEmbedding(k, {(i, j): m[RelPosVar(i, j)] for i, j in variables})
        for m in enumerate_models(cs, cap=1 << 16)
    }


def crucial_sites(graph, cycles):
    return {(r.var, r.site) for r in cctree_determinations(graph, cycles)}


def reference_sites(graph, cycles, ctree):
    keep = set(canonical_variables(ctree))
    return {(r.var, r.site)
            for r in extended_determinations(graph, cycles) if r.var in keep}


def random_host(rng, both=False, extra_rng=None):
    """Common triangles and squares linked by a random spine plus noise
    edges.  Layout draws all come from rng, so a fixed seed pins the
    common family; extra_rng (default rng) feeds only the noise, which
    lets two calls share a family while differing elsewhere."""
    noise = extra_rng if extra_rng is not None else rng
    k = rng.randint(1, 4)
    sizes = [rng.choice([3, 3, 4]) for _ in range(k)]
    tagged = []
    base = 0
    anchors = []
    for s in sizes:
        for i in range(s):
            tagged.append((base + i, base + (i + 1) % s, C))
        anchors.append(base + rng.randrange(s))
        base += s
    n = base + rng.randint(0, 3)
    anchors += list(range(base, n))
    rng.shuffle(anchors)
    used = {(min(u, v), max(u, v)) for u, v, _ in tagged}

    def add(u, v, tag):
        key = (min(u, v), max(u, v))
        if u == v or key in used:
            return
        try:
            build_instance(n, tagged + [(u, v, tag)])
        except SefeError:
            return
        tagged.append((u, v, tag))
        used.add(key)

    for u, v in zip(anchors, anchors[1:]):
        add(u, v, E1)
    if both:
        anchors2 = anchors[:]
        rng.shuffle(anchors2)
        for u, v in zip(anchors2, anchors2[1:]):
            add(u, v, E2)
    for _ in range(rng.randint(0, n)):
        u, v = noise.randrange(n), noise.randrange(n)
        add(u, v, noise.choice([E1, E2]) if both else E1)
    try:
        inst = build_instance(n, tagged)
    except SefeError:
        return None
    if not is_connected(inst.graph1):
        return None
    if both and not is_connected(inst.graph2):
        return None
    cycles, _ = common_cycles(inst)
    return inst, cycles


def block_contexts(host, cycles):
    """One rooted context per block holding at least one family cycle."""
    bc = BcTree(host)
    homes = {bc.block_of_edge[c.edge_ids(host)[0]] for c in cycles}
    for bi in sorted(homes):
        yield BlockContext(host, cycles, bc.blocks[bi], block_index=bi)


def route_shape(host, cycles, base, target=None, vertex=None):
    """Where the request for the base cycle's view of a target lands:
    outside the base root's subtree, at the same node, directly inside
    the owned region, at a branch of the base root, or midway down an
    unowned chain."""
    bc = BcTree(host)
    b0 = bc.block_of_edge[cycles[base].edge_ids(host)[0]]
    ctx = BlockContext(host, cycles, bc.blocks[b0], block_index=b0)
    pd = phase1_induced(ctx)
    phase2_high(ctx, pd)
    idx = TreeIndex(ctx.rooted.parent, ctx.rooted.root)
    mu = pd.root_of[base]
    mu2 = pd.root_of[target] if vertex is None else pd.root_of_vertex[vertex]
    kinds = [node.kind for node in ctx.tree.nodes]
    if idx.lca(mu, mu2) != mu:
        return "outside", kinds[mu]
    if mu == mu2:
        return "same", kinds[mu]
    h = pd.high[mu2]
    if h is None:
        return "inside", kinds[mu2]
    eta = ctx.rooted.parent[h]
    if ctx.rooted.depth[eta] <= ctx.rooted.depth[mu]:
        return "branch", kinds[mu]
    return "chain", kinds[eta]


def synthetic(k, edges, extra=None):
    """A bare tree with its canonical variables, no host behind it."""
    ctree = CTree(k, tuple(edges), (), ())
    cs = ConstraintSet()
    for var in canonical_variables(ctree):
        cs.add_variable(var)
    if extra:
        extra(cs)
    return CcTree(ctree, cs, ())


# two triangles on the ends of a 3-connected prism; the matching edge
# comes first so the decomposition is rooted inside the prism
PRISM = [(0, 3, E1)] + tri(0) + tri(3) + [(1, 4, E1), (2, 5, E1)]

# a third parallel path between 0 and 1 threads the other two triangles
BUNDLE = tri(0) + tri(3) + tri(6) + [(0, 3, E1), (4, 6, E1), (7, 1, E1)]

# same bundle plus a private parallel branch holding a fourth triangle
BUNDLE_EXTRA = BUNDLE + [(0, 9, E1), (10, 1, E1)] + tri(9)

# triangles hang from separate bridges at vertices of the first one
CUTV = tri(0) + tri(3) + tri(6) + [(0, 3, E1), (0, 6, E1)]

# both hang behind the same bridge, hence the same cut component
CUTV_SHARED = tri(0) + tri(3) + tri(6) + [(0, 9, E1), (9, 3, E1), (9, 6, E1)]

# a chain of bridges: contracting the cycles leaves a path
PATHY = tri(0) + tri(3) + tri(6) + [(0, 3, E1), (4, 6, E1)]

# wheel over the first triangle whose hub leads on to the second
K4_HANG = tri(0) + tri(3) + [(0, 6, E1), (1, 6, E1), (2, 6, E1), (6, 3, E1)]

# quadrilateral threading a prism that carries the second triangle; the
# parallel detour through 7 keeps the root above the prism
F_HOST = [(6, 7, E1), (0, 6, C), (6, 1, C), (1, 2, C), (2, 0, C),
          (0, 7, E1), (7, 1, E1), (0, 3, E1), (1, 4, E1), (2, 5, E1)] + tri(3)

# as above but the second triangle hangs below the far side of the
# threaded rigid part, at the end of an unowned chain
D_HOST = [(6, 7, E1), (0, 6, C), (6, 1, C), (1, 2, C), (2, 0, C),
          (0, 7, E1), (7, 1, E1), (0, 3, E1), (1, 4, E1), (2, 5, E1),
          (3, 5, E1), (4, 5, E1), (3, 8, E1), (9, 4, E1)] + tri(8)

# chain variant with a vertex anchor: the triangle sits in its own block
# behind cutvertex 8, which is not on the quadrilateral
DV_HOST = [(6, 7, E1), (0, 6, C), (6, 1, C), (1, 2, C), (2, 0, C),
           (0, 7, E1), (7, 1, E1), (0, 3, E1), (1, 4, E1), (2, 5, E1),
           (3, 5, E1), (4, 5, E1), (3, 8, E1), (8, 4, E1), (8, 9, E1)] + tri(9)

# bipyramid over the first triangle; the second hangs off one apex
BIPYR_HANG = [(0, 3, E1)] + tri(0) + [(1, 3, E1), (2, 3, E1),
              (0, 4, E1), (1, 4, E1), (2, 4, E1), (4, 5, E1)] + tri(5)

# prism threaded by the quadrilateral, anchor vertex inside its region
PRISM_HANG = [(6, 7, E1), (0, 6, C), (6, 1, C), (1, 2, C), (2, 0, C),
              (0, 7, E1), (7, 1, E1), (0, 3, E1), (1, 4, E1), (2, 5, E1),
              (3, 4, E1), (4, 5, E1), (3, 5, E1), (4, 8, E1)] + tri(8)


# ---------------------------------------------------------------------------
# tree construction


def test_contracting_a_bundle_gives_a_star():
    host, cycles = cycles_host(9, BUNDLE)
    cc = build_cctree(host, cycles)
    assert cc.ctree.k == 3
    assert cc.ctree.edges == ((0, 1), (0, 2))
    assert cc.ctree.label == (0, 0, 0, 1, 1, 1, 2, 2, 2)


def test_contracting_a_chain_gives_a_path():
    host, cycles = cycles_host(9, PATHY)
    cc = build_cctree(host, cycles)
    assert cc.ctree.edges == ((0, 1), (1, 2))


def test_labels_partition_and_via_edges_cross_regions():
    rng = random.Random(11)
    seen = 0
    while seen < 12:
        made = random_host(rng)
        if made is None:
            continue
        seen += 1
        inst, cycles = made
        host = inst.graph1
        cc = build_cctree(host, cycles)
        ct = cc.ctree
        assert len(ct.label) == host.n
        assert set(ct.label) == set(range(ct.k))
        for ci, cycle in enumerate(cycles):
            for v in cycle.vertices:
                assert ct.label[v] == ci
        # each label class is connected in the host
        for ci in range(ct.k):
            members = {v for v in range(host.n) if ct.label[v] == ci}
            comp = {next(iter(members))}
            queue = list(comp)
            for x in queue:
                for e in host.adj[x]:
                    y = host.other(e, x)
                    if y in members and y not in comp:
                        comp.add(y)
                        queue.append(y)
            assert comp == members
        assert len(ct.via_edge) == len(ct.edges)
        for (a, b), e in zip(ct.edges, ct.via_edge):
            u, v = host.edges[e]
            assert {ct.label[u], ct.label[v]} == {a, b}


def test_single_cycle_host_has_no_tree_edges():
    host, cycles = cycles_host(5, [(i, (i + 1) % 5, C) for i in range(5)])
    cc = build_cctree(host, cycles)
    assert cc.ctree.edges == ()
    assert cc.cs.variables == []
    assert represented_set(cc, 4) == {SemiEmbedding(1, {})}


def test_build_rejects_disconnected_hosts():
    host = Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    cycles = [DirectedCycle.from_sequence([0, 1, 2]),
              DirectedCycle.from_sequence([3, 4, 5])]
    with pytest.raises(DisconnectedGraph):
        build_cctree(host, cycles)
    with pytest.raises(DisconnectedGraph):
        cctree_determinations(host, cycles)


# ---------------------------------------------------------------------------
# pass pipeline internals


def test_ownership_matches_skeleton_classification():
    """The induced-cycle labels reproduce what each skeleton sees: the
    owned edges of a visible cycle are exactly its skeleton edges, and a
    contracted cycle owns nothing."""
    rng = random.Random(5)
    blocks = 0
    while blocks < 25:
        made = random_host(rng)
        if made is None:
            continue
        inst, cycles = made
        host = inst.graph1
        for ctx in block_contexts(host, cycles):
            if not ctx.acyclic_root:
                continue
            blocks += 1
            pd = phase1_induced(ctx)
            local = {}
            for ci, cycle in enumerate(cycles):
                if all(v in ctx.loc for v in cycle.vertices):
                    seq = [ctx.loc[v] for v in cycle.vertices]
                    cand = DirectedCycle.from_sequence(seq)
                    try:
                        cand.edge_ids(ctx.bgraph)
                    except SefeError:
                        continue
                    local[ci] = cand
            for ni in range(len(ctx.tree.nodes)):
                node = ctx.tree.nodes[ni]
                for ci, cyc_local in local.items():
                    cls = ctx.tree.classify_cycle(ni, cyc_local)
                    mine = {ei for ei in range(node.skel.m)
                            if ctx.bel_of_edge(pd, ni, ei) == ci}
                    if cls.is_contracted:
                        assert ci not in pd.cyc[ni]
                        assert ctx.bel_of_edge(pd, ni, cls.contracted) != ci
                        assert not mine
                    else:
                        assert ci in pd.cyc[ni]
                        assert set(cls.kappa) == mine


def test_ownership_subtrees_are_connected():
    rng = random.Random(6)
    blocks = 0
    while blocks < 25:
        made = random_host(rng)
        if made is None:
            continue
        inst, cycles = made
        for ctx in block_contexts(inst.graph1, cycles):
            if not ctx.acyclic_root:
                continue
            blocks += 1
            pd = phase1_induced(ctx)
            for ci in pd.root_of:
                members = [ni for ni in range(len(ctx.tree.nodes))
                           if ci in pd.cyc[ni]]
                tops = [ni for ni in members
                        if ni == ctx.rooted.root or pd.bel_up[ni] != ci]
                assert tops == [pd.root_of[ci]]
                for ni in members:
                    if ni != pd.root_of[ci]:
                        assert ctx.rooted.parent[ni] in members


def test_high_matches_an_explicit_rescan():
    """high is the top of the run of consecutive unowned edges above a
    node; recompute it by walking parents one at a time."""
    rng = random.Random(7)
    blocks = 0
    while blocks < 25:
        made = random_host(rng)
        if made is None:
            continue
        inst, cycles = made
        for ctx in block_contexts(inst.graph1, cycles):
            if not ctx.acyclic_root:
                continue
            blocks += 1
            pd = phase2_high(ctx, phase1_induced(ctx))
            for ni in range(len(ctx.tree.nodes)):
                if ni == ctx.rooted.root or pd.bel_up[ni] is not None:
                    assert pd.high[ni] is None
                    continue
                h = ni
                while (ctx.rooted.parent[h] != ctx.rooted.root
                       and pd.bel_up[ctx.rooted.parent[h]] is None):
                    h = ctx.rooted.parent[h]
                assert pd.high[ni] == h


def test_pure_cycle_block_has_no_admissible_root():
    host, cycles = cycles_host(5, [(i, (i + 1) % 5, C) for i in range(5)])
    ctx = BlockContext(host, cycles)
    assert not ctx.acyclic_root
    pd = phase1_induced(ctx)
    s_nodes = [ni for ni, nd in enumerate(ctx.tree.nodes) if nd.kind == "S"]
    assert [pd.cyc[ni] for ni in s_nodes] == [[0]]
    # with the fallback rooting the cycle runs through the root's own
    # edge, so the subtree tops out at the root
    assert pd.root_of[0] == ctx.rooted.root
    assert ctx.tree.nodes[ctx.rooted.root].kind == "Q"


# ---------------------------------------------------------------------------
# routing fixtures, one per landing pattern


def fixture_checks(n, tagged, expect_count=None):
    host, cycles = cycles_host(n, tagged)
    cc = build_cctree(host, cycles)
    models = represented_set(cc, 1 << 14)
    assert models == host_models(host, cycles)
    if expect_count is not None:
        assert len(models) == expect_count
    assert crucial_sites(host, cycles) == reference_sites(host, cycles,
                                                          cc.ctree)
    return host, cycles, models


def test_prism_decides_both_triangles_at_its_rigid_node():
    host, cycles, _ = fixture_checks(6, PRISM, expect_count=2)
    assert route_shape(host, cycles, 0, target=1) == ("same", "R")
    assert route_shape(host, cycles, 1, target=0) == ("same", "R")


def test_bundle_requests_leave_through_the_parallel_class():
    host, cycles, models = fixture_checks(9, BUNDLE, expect_count=8)
    assert route_shape(host, cycles, 0, target=1) == ("outside", "P")
    assert route_shape(host, cycles, 0, target=2) == ("outside", "P")
    # the shared exit forces the other two onto one side of the first
    assert all(s[(0, 1)] is s[(0, 2)] for s in models)


def test_private_branch_is_resolved_at_a_branch_of_the_base_root():
    host, cycles, models = fixture_checks(12, BUNDLE_EXTRA, expect_count=32)
    assert route_shape(host, cycles, 0, target=3) == ("branch", "P")
    assert route_shape(host, cycles, 0, target=1) == ("outside", "P")
    assert all(s[(0, 1)] is s[(0, 2)] for s in models)
    # the fourth triangle sits on its own branch and stays free
    assert len({(s[(0, 1)], s[(0, 3)]) for s in models}) == 4


def test_hanging_cycles_decided_at_their_cutvertices():
    host, cycles, _ = fixture_checks(9, CUTV, expect_count=16)
    assert crucial_sites(host, cycles) == {
        (RelPosVar(0, 1), ("cutvertex", 0)),
        (RelPosVar(0, 2), ("cutvertex", 0)),
        (RelPosVar(1, 0), ("cutvertex", 3)),
        (RelPosVar(2, 0), ("cutvertex", 6)),
    }


def test_shared_cut_component_ties_hanging_cycles_together():
    host, cycles, models = fixture_checks(10, CUTV_SHARED, expect_count=8)
    assert all(s[(0, 1)] is s[(0, 2)] for s in models)
    assert {site for _, site in crucial_sites(host, cycles)} == {
        ("cutvertex", 0), ("cutvertex", 3), ("cutvertex", 6)}


def test_wheel_decides_an_anchor_vertex_outside_its_subtree():
    host, cycles, _ = fixture_checks(7, K4_HANG)
    assert route_shape(host, cycles, 0, vertex=6) == ("outside", "R")
    assert (RelPosVar(1, 0), ("cutvertex", 3)) in crucial_sites(host, cycles)


def test_threaded_prism_decides_inside_the_owned_region():
    host, cycles, _ = fixture_checks(8, F_HOST)
    assert route_shape(host, cycles, 0, target=1) == ("inside", "R")
    assert route_shape(host, cycles, 1, target=0) == ("outside", "R")


def test_unowned_chain_lands_midway_below_the_base_root():
    host, cycles, _ = fixture_checks(11, D_HOST)
    assert route_shape(host, cycles, 0, target=1) == ("chain", "R")
    assert route_shape(host, cycles, 1, target=0) == ("outside", "P")


def test_unowned_chain_with_a_vertex_anchor():
    host, cycles, _ = fixture_checks(12, DV_HOST)
    assert route_shape(host, cycles, 0, vertex=8) == ("chain", "R")
    assert (RelPosVar(1, 0), ("cutvertex", 9)) in crucial_sites(host, cycles)


def test_apex_anchor_decided_where_the_cycle_is_rooted():
    host, cycles, _ = fixture_checks(8, BIPYR_HANG)
    assert route_shape(host, cycles, 0, vertex=4) == ("same", "R")
    assert (RelPosVar(1, 0), ("cutvertex", 5)) in crucial_sites(host, cycles)


def test_anchor_vertex_inside_the_owned_region():
    host, cycles, _ = fixture_checks(11, PRISM_HANG)
    assert route_shape(host, cycles, 0, vertex=4) == ("inside", "R")
    assert (RelPosVar(1, 0), ("cutvertex", 8)) in crucial_sites(host, cycles)


# ---------------------------------------------------------------------------
# agreement with the quadratic generator on random hosts


def test_model_sets_match_quadratic_reference():
    rng_seed = 0
    usable = 0
    for seed in range(150):
        made = random_host(random.Random(seed))
        if made is None:
            continue
        usable += 1
        inst, cycles = made
        cc = build_cctree(inst.graph1, cycles)
        assert represented_set(cc, 1 << 14) == host_models(inst.graph1, cycles)
    assert usable >= 120


def test_determination_sites_match_reference():
    usable = 0
    for seed in range(150):
        made = random_host(random.Random(seed))
        if made is None:
            continue
        usable += 1
        inst, cycles = made
        cc = build_cctree(inst.graph1, cycles)
        assert crucial_sites(inst.graph1, cycles) == reference_sites(
            inst.graph1, cycles, cc.ctree)
    assert usable >= 120


# ---------------------------------------------------------------------------
# model expansion


def test_expansion_copies_the_crucial_value_along_the_tree():
    star = synthetic(3, [(0, 1), (0, 2)])
    models = represented_set(star, 64)
    assert len(models) == 16
    assert all(s[(1, 2)] is s[(1, 0)] for s in models)
    assert all(s[(2, 1)] is s[(2, 0)] for s in models)


def test_expansion_of_a_tied_path():
    path = synthetic(3, [(0, 1), (1, 2)],
                     lambda cs: cs.eq(RelPosVar(1, 0), RelPosVar(1, 2)))
    models = represented_set(path, 64)
    # four crucial positions, one equality: eight models survive and the
    # expansion keeps them distinct
    assert len(models) == 8
    assert all(s[(1, 0)] is s[(1, 2)] for s in models)
    assert all(s[(0, 2)] is s[(0, 1)] for s in models)
    assert all(s[(2, 0)] is s[(2, 1)] for s in models)


def test_expansion_without_cycles_is_the_empty_embedding():
    empty = CcTree(CTree(0, (), (), ()), ConstraintSet(), ())
    assert represented_set(empty, 4) == {SemiEmbedding(0, {})}


# ---------------------------------------------------------------------------
# intersection


def test_intersection_represents_exactly_the_common_models():
    usable = 0
    for seed in range(200, 330):
        made = random_host(random.Random(seed), both=True)
        if made is None:
            continue
        usable += 1
        inst, cycles = made
        t1 = build_cctree(inst.graph1, cycles)
        t2 = build_cctree(inst.graph2, cycles)
        want = represented_set(t1, 1 << 14) & represented_set(t2, 1 << 14)
        assert represented_set(intersect(t1, t2), 1 << 14) == want
        assert intersect(t1, t2).ctree is t1.ctree
    assert usable >= 45


def test_intersection_is_symmetric_and_idempotent_on_models():
    usable = 0
    for seed in range(200, 270):
        made = random_host(random.Random(seed), both=True)
        if made is None:
            continue
        usable += 1
        inst, cycles = made
        t1 = build_cctree(inst.graph1, cycles)
        t2 = build_cctree(inst.graph2, cycles)
        want = represented_set(t1, 1 << 14) & represented_set(t2, 1 << 14)
        assert represented_set(intersect(t2, t1), 1 << 14) == want
        assert represented_set(intersect(t1, t1), 1 << 14) == \
            represented_set(t1, 1 << 14)
    assert usable >= 20


def tree_path(adj, a, b):
    prev = {a: None}
    queue = [a]
    for x in queue:
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def slow_intersect(t1, t2):
    """Per-edge path rewrite: every interior cycle of the first-tree path
    must see both path neighbours on one side, and the second tree's
    variables rename to the first step along the path."""
    cs = ConstraintSet()
    for var in canonical_variables(t1.ctree):
        cs.add_variable(var)
    for a, b in t1.cs.eqs:
        cs.eq(a, b)
    for a, b in t1.cs.neqs:
        cs.neq(a, b)
    for a, s in t1.cs.fixes:
        cs.fix(a, s)
    adj = t1.ctree.adjacency()
    rep = {}
    for a, b in t2.ctree.edges:
        path = tree_path(adj, a, b)
        rep[(a, b)] = path[1]
        rep[(b, a)] = path[-2]
        for x, y, z in zip(path, path[1:], path[2:]):
            cs.eq(RelPosVar(y, x), RelPosVar(y, z))

    def ren(v):
        return RelPosVar(v.base, rep[(v.base, v.other)])

    for a, b in t2.cs.eqs:
        cs.eq(ren(a), ren(b))
    for a, b in t2.cs.neqs:
        cs.neq(ren(a), ren(b))
    for a, s in t2.cs.fixes:
        cs.fix(ren(a), s)
    return CcTree(t1.ctree, cs, t1.cycles)


def test_intersection_matches_the_path_rewrite():
    usable = 0
    for seed in range(200, 330):
        made = random_host(random.Random(seed), both=True)
        if made is None:
            continue
        usable += 1
        inst, cycles = made
        t1 = build_cctree(inst.graph1, cycles)
        t2 = build_cctree(inst.graph2, cycles)
        assert represented_set(intersect(t1, t2), 1 << 14) == \
            represented_set(slow_intersect(t1, t2), 1 << 14)
    assert usable >= 45


def test_intersection_reroutes_foreign_edges():
    # the second tree attaches cycle 1 straight to cycle 0; the first
    # routes it through cycle 2, so 2 must see 0 and 1 together and the
    # foreign fix lands on the rerouted variable
    t1 = synthetic(3, [(0, 2), (1, 2)])
    t2 = synthetic(3, [(0, 1), (0, 2)],
                   lambda cs: cs.fix(RelPosVar(1, 0), Side.LEFT))
    out = intersect(t1, t2)
    assert out.ctree is t1.ctree
    assert {frozenset(e) for e in out.cs.eqs} == {
        frozenset({RelPosVar(2, 0), RelPosVar(2, 1)})}
    assert out.cs.fixes == [(RelPosVar(1, 2), Side.LEFT)]
    models = represented_set(out, 64)
    assert len(models) == 4
    assert all(s[(2, 0)] is s[(2, 1)] for s in models)
    assert all(s[(1, 2)] is Side.LEFT for s in models)
    assert models == represented_set(t1, 64) & represented_set(t2, 64)


def test_intersection_is_associative_on_models():
    usable = 0
    for seed in range(400, 560):
        made_a = random_host(random.Random(seed), both=True,
                             extra_rng=random.Random(seed * 31 + 1))
        made_b = random_host(random.Random(seed), both=True,
                             extra_rng=random.Random(seed * 31 + 2))
        if made_a is None or made_b is None:
            continue
        usable += 1
        inst_a, cy_a = made_a
        inst_b, cy_b = made_b
        assert [c.vertices for c in cy_a] == [c.vertices for c in cy_b]
        ts = [build_cctree(inst_a.graph1, cy_a),
              build_cctree(inst_a.graph2, cy_a),
              build_cctree(inst_b.graph2, cy_b)]
        want = (represented_set(ts[0], 1 << 14)
                & represented_set(ts[1], 1 << 14)
                & represented_set(ts[2], 1 << 14))
        left = intersect(intersect(ts[0], ts[1]), ts[2])
        right = intersect(ts[0], intersect(ts[1], ts[2]))
        perm = intersect(intersect(ts[2], ts[0]), ts[1])
        assert represented_set(left, 1 << 14) == want
        assert represented_set(right, 1 << 14) == want
        assert represented_set(perm, 1 << 14) == want
    assert usable >= 40


def test_intersection_rejects_mismatched_families():
    ia = build_instance(6, tri(0) + tri(3) + [(0, 3, E1)])
    ib = build_instance(4, tri(0) + [(2, 3, E1)])
    ta = build_cctree(ia.graph1, common_cycles(ia)[0])
    tb = build_cctree(ib.graph1, common_cycles(ib)[0])
    with pytest.raises(CycleFamilyMismatch):
        intersect(ta, tb)
    square = [(0, 1, C), (1, 2, C), (2, 3, C), (0, 3, C)]
    ic = build_instance(7, square + tri(4) + [(0, 4, E1)])
    tc = build_cctree(ic.graph1, common_cycles(ic)[0])
    with pytest.raises(CycleFamilyMismatch):
        intersect(ta, tc)


# ---------------------------------------------------------------------------
# exports


def test_json_and_dot_exports():
    host, cycles = cycles_host(9, BUNDLE)
    cc = build_cctree(host, cycles)
    js = cc.to_json()
    assert js == json.loads(json.dumps(js))
    assert js["k"] == 3
    assert js["tree_edges"] == [[0, 1], [0, 2]]
    assert sorted(js["cycles"]) == [[0, 1, 2], [3, 4, 5], [6, 7, 8]]
    assert [tuple(v) for v in js["variables"]] == \
        [(v.base, v.other) for v in cc.cs.variables]
    dot = cc.to_dot()
    assert dot.startswith("graph cctree {")
    assert dot.rstrip().endswith("}")
    for a, b in cc.ctree.edges:
        assert f"c{a} -- c{b};" in dot
