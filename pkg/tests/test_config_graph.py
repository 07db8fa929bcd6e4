import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from goodcycles.config_graph import (
    Configuration,
    DuplicateEdge,
    EdgeKind,
    EmptyConfiguration,
    InvalidConfiguration,
    build_configuration_graph,
    enumerate_cycles,
    enumerate_extensions,
    enumerate_good_cycles,
    is_cycle_of,
    is_subconfiguration,
    main_cycle,
)
from goodcycles.obg import BipartiteGraph, OrderedBipartiteGraph, builtin_graph, equivalence_classes


def k33():
    return equivalence_classes(builtin_graph("K33"))[0]


def q3plus(k=0):
    return equivalence_classes(builtin_graph("Q3PLUS"))[k]


def full_random(g, rng):
    """A full configuration with uniformly shuffled neighbour orders."""
    tau = {}
    for v in g.base.vertices:
        nb = list(g.base.neighbors[v])
        rng.shuffle(nb)
        tau[v] = nb
    return Configuration.from_mapping(g, tau)


def all_configurations(g, edges):
    """Every configuration on the edge prefix ``edges`` (no pruning)."""
    layer = [Configuration.empty(g)]
    out = []
    for e in edges:
        layer = [c for p in layer for c in enumerate_extensions(p, e)]
        out.extend(layer)
    return out


def oracle_cycles(G):
    """Edge sets of all cycles, by sweeping the whole cycle space."""
    n = len(G.vertices)
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    tree, nontree = [], []
    for e, (u, v) in enumerate(G.edges):
        ru, rv = find(u), find(v)
        if ru == rv:
            nontree.append(e)
        else:
            parent[ru] = rv
            tree.append(e)
    adj = {v: [] for v in range(n)}
    for e in tree:
        u, v = G.edges[e]
        adj[u].append((e, v))
        adj[v].append((e, u))

    def tree_path(a, b):
        prev = {a: None}
        stack = [a]
        while stack:
            x = stack.pop()
            for e, y in adj[x]:
                if y not in prev:
                    prev[y] = (e, x)
                    stack.append(y)
        mask, x = 0, b
        while prev[x] is not None:
            e, x = prev[x]
            mask |= 1 << e
        return mask

    basis = [(1 << e) | tree_path(*G.edges[e]) if G.edges[e][0] != G.edges[e][1] else 1 << e for e in nontree]
    found = set()
    for r in range(1, len(basis) + 1):
        for combo in itertools.combinations(basis, r):
            m = 0
            for b in combo:
                m ^= b
            ids = [e for e in range(len(G.edges)) if m >> e & 1]
            if is_single_cycle(G, ids):
                found.add(m)
    return found


def is_single_cycle(G, ids):
    deg, nbrs = {}, {}
    for e in ids:
        u, v = G.edges[e]
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
        nbrs.setdefault(u, set()).add(v)
        nbrs.setdefault(v, set()).add(u)
    if any(d != 2 for d in deg.values()):
        return False
    start = next(iter(deg))
    seen, todo = {start}, [start]
    while todo:
        for w in nbrs[todo.pop()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(deg)


def test_empty_plus_edge_single_extension():
    g = k33()
    ext = enumerate_extensions(Configuration.empty(g), ("a1", "b1"))
    assert len(ext) == 1


def test_extension_counts_are_degree_products():
    g = k33()
    c = Configuration.empty(g)
    for e in [("a1", "b1"), ("a1", "b2"), ("a2", "b1")]:
        c = enumerate_extensions(c, e)[-1]
    kids = enumerate_extensions(c, ("a2", "b2"))
    # a2 gets degree 2, b2 degree 2
    assert len(kids) == 4
    assert all(is_subconfiguration(c, k) for k in kids)
    assert len({k.orders for k in kids}) == 4


def test_duplicate_edge_rejected():
    c = enumerate_extensions(Configuration.empty(k33()), ("a1", "b1"))[0]
    with pytest.raises(DuplicateEdge):
        enumerate_extensions(c, ("b1", "a1"))


def test_invalid_configuration():
    g = k33()
    with pytest.raises(InvalidConfiguration):
        Configuration.from_mapping(g, {"a1": ["b1"]})
    with pytest.raises(InvalidConfiguration):
        Configuration.from_mapping(g, {"a1": ["b1", "b1"], "b1": ["a1"]})
    with pytest.raises(InvalidConfiguration):
        Configuration.from_mapping(g, {"zz": []})


def test_subconfiguration_relations():
    g = k33()
    rng = random.Random(1)
    tau = full_random(g, rng)
    assert is_subconfiguration(Configuration.empty(g), tau)
    assert is_subconfiguration(tau, tau)
    c = enumerate_extensions(Configuration.empty(g), ("a1", "b1"))[0]
    c = enumerate_extensions(c, ("a1", "b2"))[0]
    a, b = enumerate_extensions(c, ("a2", "b1"))[:1] + enumerate_extensions(c, ("a2", "b2"))[:1]
    assert not is_subconfiguration(a, b) and not is_subconfiguration(b, a)
    kids = enumerate_extensions(c, ("a1", "b3"))
    assert not is_subconfiguration(kids[0], kids[1])


def test_single_edge_graph():
    c = enumerate_extensions(Configuration.empty(k33()), ("a1", "b1"))[0]
    G = build_configuration_graph(c)
    assert len(G.vertices) == 2
    assert G.edges[0] == (0, 0) and G.edges[1] == (1, 1)
    assert G.kinds[2] is EdgeKind.CROSS
    good = enumerate_good_cycles(G)
    assert sorted(c.edges for c in good) == [(0,), (1,)]


def test_empty_configuration_graph():
    with pytest.raises(EmptyConfiguration):
        build_configuration_graph(Configuration.empty(k33()))


@pytest.mark.parametrize("name, m", [("K33", 9), ("Q3PLUS", 13), ("Q3", 12)])
def test_full_graph_invariants(name, m):
    rng = random.Random(7)
    g = equivalence_classes(builtin_graph(name))[0]
    for _ in range(5):
        G = build_configuration_graph(full_random(g, rng))
        assert len(G.vertices) == 2 * m
        assert len(G.cross_edges) == m
        # one cross edge and main degree 2 per vertex
        for v in range(len(G.vertices)):
            kinds = [G.kinds[e] for e in range(len(G.edges)) if v in G.edges[e]]
            assert kinds.count(EdgeKind.CROSS) == 1
            assert G.degree(v) == 3
        d1 = sum(G.kinds[e] is EdgeKind.DANGEROUS for e in G.c1_edges)
        d2 = sum(G.kinds[e] is EdgeKind.DANGEROUS for e in G.c2_edges)
        assert d1 == len(g.base.X) and d2 == len(g.base.Y)
        # C1 follows (sigma_X, tau_x) lexicographically
        c1 = [G.vertices[i] for i in range(G.m)]
        assert c1 == [(x, y) for x in g.order_x for y in G.config.order(x)]


def test_single_x_vertex_has_no_dangerous_edges():
    H = BipartiteGraph(("a1",), ("b1", "b2", "b3"), [("a1", "b1"), ("a1", "b2"), ("a1", "b3")])
    g = OrderedBipartiteGraph(H, ("a1",), ("b1", "b2", "b3"))
    c = Configuration.from_mapping(g, {"a1": ["b2", "b1", "b3"], "b1": ["a1"], "b2": ["a1"], "b3": ["a1"]})
    G = build_configuration_graph(c)
    assert not any(G.kinds[e] is EdgeKind.DANGEROUS for e in G.c1_edges)
    assert sum(G.kinds[e] is EdgeKind.DANGEROUS for e in G.c2_edges) == 3


def test_wrap_edge_of_partial_configuration_is_dangerous():
    # only a1 active: the closing edge of C1 passes where a2, a3 will sit
    c = enumerate_extensions(Configuration.empty(k33()), ("a1", "b1"))[0]
    c = enumerate_extensions(c, ("a1", "b2"))[0]
    G = build_configuration_graph(c)
    assert [G.kinds[e] for e in G.c1_edges] == [EdgeKind.SAFE, EdgeKind.DANGEROUS]


def test_main_cycles_are_good():
    rng = random.Random(3)
    G = build_configuration_graph(full_random(q3plus(), rng))
    masks = {c.mask for c in enumerate_good_cycles(G)}
    assert G.c1_mask in masks and G.c2_mask in masks
    assert main_cycle(G, 1).mask == G.c1_mask


def test_good_cycles_distinct_and_valid():
    rng = random.Random(5)
    G = build_configuration_graph(full_random(k33(), rng))
    good = enumerate_good_cycles(G)
    assert len({c.mask for c in good}) == len(good)
    for c in good:
        assert c.good
        assert is_cycle_of(G, c.edges)


def small_graphs():
    """Every configuration graph with at most 12 vertices along the default search orders."""
    k33_order = [(f"a{i}", f"b{j}") for i in (1, 2, 3) for j in (1, 2, 3)][:6]
    q_order = [("a1", "b2"), ("a1", "b3"), ("a2", "b2"), ("a2", "b3"), ("a3", "b2"), ("a3", "b3")]
    configs = all_configurations(k33(), k33_order)
    for k in (0, 1):
        configs += all_configurations(q3plus(k), q_order)
    return configs


def test_brute_force_oracle_all_small_graphs():
    checked = 0
    for c in small_graphs():
        G = build_configuration_graph(c)
        assert len(G.vertices) <= 12
        every = oracle_cycles(G)
        assert {x.mask for x in enumerate_cycles(G)} == every
        good = {m for m in every if not (m & G.d1_mask and m & G.d2_mask)}
        assert {x.mask for x in enumerate_good_cycles(G)} == good
        checked += 1
    assert checked > 1000


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_brute_force_oracle_random_hosts(nx, ny, data):
    X = tuple(f"a{i}" for i in range(1, nx + 1))
    Y = tuple(f"b{i}" for i in range(1, ny + 1))
    pairs = list(itertools.product(X, Y))
    edges = data.draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=6, unique=True))
    H = BipartiteGraph(X, Y, edges)
    ox = tuple(data.draw(st.permutations(X)))
    oy = tuple(data.draw(st.permutations(Y)))
    g = OrderedBipartiteGraph(H, ox, oy)
    tau = {v: list(data.draw(st.permutations(H.neighbors[v]))) for v in H.vertices}
    G = build_configuration_graph(Configuration.from_mapping(g, tau))
    every = oracle_cycles(G)
    good = {m for m in every if not (m & G.d1_mask and m & G.d2_mask)}
    assert {c.mask for c in enumerate_good_cycles(G)} == good
