"""From two equal-length cycles and a disjoint path system to a weighted configuration graph, and back.

The components of ``C1 - V(C2)`` become X and those of ``C2 - V(C1)`` become
Y.  Each path becomes an H-edge (and a cross edge of weight = path length).
Main-cycle edges weigh the length of the directed arc between consecutive
path endpoints, so each main cycle of G_tau weighs exactly the length of its
host cycle.  A good cycle of G_tau then lifts to a host cycle of the same
weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .certificates import WeightFunction
from .config_graph import ConfigurationGraph, Configuration, Cycle, EdgeKind, build_configuration_graph
from .obg import BipartiteGraph, OrderedBipartiteGraph


class InvalidHost(ValueError):
    pass


class NonDisjointPaths(InvalidHost):
    pass


class UnequalCycleLengths(InvalidHost):
    pass


class EmptyIntersection(InvalidHost):
    pass


class DuplicateComponentPair(ValueError):
    """Two paths join the same pair of components.

    ``rerouted`` holds the two host cycles built from them; their average
    length exceeds the length of the main cycles.
    """

    def __init__(self, first, second, rerouted):
        self.paths = (tuple(first), tuple(second))
        self.rerouted = tuple(tuple(c) for c in rerouted)
        lengths = ", ".join(str(len(c)) for c in self.rerouted)
        super().__init__(f"paths {list(first)} and {list(second)} join the same components; rerouted cycles of length {lengths}")


class NotGoodCycle(ValueError):
    pass


class LiftNotSimple(RuntimeError):
    pass


@dataclass(frozen=True)
class HostCycle:
    """A cycle given as a vertex sequence, read from ``start`` in the stated direction."""

    vertices: tuple[str, ...]
    start: str | None = None
    forward: bool = True

    def oriented(self) -> tuple[str, ...]:
        seq = self.vertices if self.forward else self.vertices[:1] + self.vertices[:0:-1]
        if self.start is None:
            return seq
        if self.start not in seq:
            raise InvalidHost(f"start vertex {self.start} is not on the cycle")
        k = seq.index(self.start)
        return seq[k:] + seq[:k]


@dataclass(frozen=True)
class HostInstance:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    c1: HostCycle
    c2: HostCycle
    paths: tuple[tuple[str, ...], ...]

    @cached_property
    def edge_set(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(e) for e in self.edges)

    def has_edge(self, u: str, v: str) -> bool:
        return frozenset((u, v)) in self.edge_set


@dataclass(frozen=True)
class ExtractedInstance:
    host: OrderedBipartiteGraph
    config: Configuration
    weights: WeightFunction
    components: dict[str, tuple[str, ...]]  # H-vertex label -> host vertices
    anchors: dict[tuple[str, str], str]  # (h, neighbour) -> endpoint of the path on h's cycle
    paths: dict[tuple[str, str], tuple[str, ...]]  # (x, y) -> path from the C1 side to the C2 side
    cycles: tuple[tuple[str, ...], tuple[str, ...]]  # oriented host cycles

    @cached_property
    def graph(self) -> ConfigurationGraph:
        return build_configuration_graph(self.config)


def _check_cycle(inst: HostInstance, seq: Sequence[str], name: str) -> None:
    if len(seq) < 3 or len(set(seq)) != len(seq):
        raise InvalidHost(f"{name} is not a simple cycle")
    known = set(inst.vertices)
    for i, v in enumerate(seq):
        if v not in known:
            raise InvalidHost(f"{name} uses unknown vertex {v}")
        u = seq[i - 1]
        if not inst.has_edge(u, v):
            raise InvalidHost(f"{name}: {u}-{v} is not an edge of the host")


def _components(seq: tuple[str, ...], other: set[str], name: str) -> list[tuple[str, ...]]:
    """Maximal runs of ``seq`` avoiding ``other``, in cycle order; the start must not split a run."""
    if seq[0] not in other and seq[-1] not in other:
        raise InvalidHost(f"{name} starts inside a component; start at a shared vertex or a component's first vertex")
    runs: list[list[str]] = []
    prev_in = True
    for v in seq:
        if v in other:
            prev_in = True
            continue
        if prev_in:
            runs.append([])
        runs[-1].append(v)
        prev_in = False
    return [tuple(r) for r in runs]


def _arc(seq: tuple[str, ...], pos: dict[str, int], u: str, v: str) -> list[str]:
    """Vertices from ``u`` to ``v`` following ``seq``; the whole cycle back to ``u`` if ``u == v``."""
    n = len(seq)
    i, j = pos[u], pos[v]
    steps = (j - i) % n or n
    return [seq[(i + s) % n] for s in range(steps + 1)]


def _inside_arc(seq, pos, comp_vertices: set[str], u: str, v: str) -> list[str]:
    a = _arc(seq, pos, u, v)
    if all(x in comp_vertices for x in a):
        return a
    return _arc(seq, pos, v, u)[::-1]


def _rerouted(c1, c2, pos1, pos2, comp1, comp2, p, q) -> tuple[list[str], list[str]]:
    v, u = p[0], p[-1]
    v2, u2 = q[0], q[-1]
    Q = _inside_arc(c1, pos1, comp1, v, v2)  # v .. v2 inside x
    Q2 = _inside_arc(c2, pos2, comp2, u, u2)  # u .. u2 inside y
    # Q -> P -> (C2 \ Q') -> P' : v2..v, v..u, u..u2 the long way, u2..v2
    long2 = _arc(c2, pos2, u, u2)
    if long2 == Q2:
        long2 = _arc(c2, pos2, u2, u)[::-1]
    first = Q[::-1][:-1] + list(p)[:-1] + long2[:-1] + list(q)[::-1][:-1]
    long1 = _arc(c1, pos1, v, v2)
    if long1 == Q:
        long1 = _arc(c1, pos1, v2, v)[::-1]
    second = Q2[::-1][:-1] + list(p)[::-1][:-1] + long1[:-1] + list(q)[:-1]
    return first, second


def extract_instance(inst: HostInstance) -> ExtractedInstance:
    c1, c2 = inst.c1.oriented(), inst.c2.oriented()
    _check_cycle(inst, c1, "C1")
    _check_cycle(inst, c2, "C2")
    if len(c1) != len(c2):
        raise UnequalCycleLengths(f"|C1| = {len(c1)} but |C2| = {len(c2)}")
    s1, s2 = set(c1), set(c2)
    shared = s1 & s2
    if not shared:
        raise EmptyIntersection("C1 and C2 share no vertex")
    runs1 = _components(c1, shared, "C1")
    runs2 = _components(c2, shared, "C2")
    comp_of = {}
    for k, run in enumerate(runs1):
        for v in run:
            comp_of[v] = (1, k)
    for k, run in enumerate(runs2):
        for v in run:
            comp_of[v] = (2, k)

    used: set[str] = set()
    oriented_paths = []
    for p in inst.paths:
        p = tuple(p)
        if len(p) < 2:
            raise InvalidHost(f"path {list(p)} has no edge")
        if p[0] in s2 - s1 or p[-1] in s1 - s2:
            p = p[::-1]
        if comp_of.get(p[0], (0,))[0] != 1 or comp_of.get(p[-1], (0,))[0] != 2:
            raise InvalidHost(f"path {list(p)} must run from V(C1)-V(C2) to V(C2)-V(C1)")
        for a, b in zip(p, p[1:]):
            if not inst.has_edge(a, b):
                raise InvalidHost(f"path {list(p)}: {a}-{b} is not an edge of the host")
        if len(set(p)) != len(p):
            raise NonDisjointPaths(f"path {list(p)} repeats a vertex")
        for v in p[1:-1]:
            if v in s1 or v in s2:
                raise NonDisjointPaths(f"path {list(p)} meets a main cycle at interior vertex {v}")
        clash = used & set(p)
        if clash:
            raise NonDisjointPaths(f"path {list(p)} shares {sorted(clash)} with another path")
        used |= set(p)
        oriented_paths.append(p)

    pos1 = {v: i for i, v in enumerate(c1)}
    pos2 = {v: i for i, v in enumerate(c2)}
    by_pair: dict[tuple, tuple[str, ...]] = {}
    for p in oriented_paths:
        key = (comp_of[p[0]][1], comp_of[p[-1]][1])
        if key in by_pair:
            q = by_pair[key]
            reroutes = _rerouted(c1, c2, pos1, pos2, set(runs1[key[0]]), set(runs2[key[1]]), q, p)
            raise DuplicateComponentPair(q, p, reroutes)
        by_pair[key] = p

    # components without a path produce no H-vertex; their arcs fold into neighbouring weights
    active1 = sorted({k for k, _ in by_pair})
    active2 = sorted({k for _, k in by_pair})
    xname = {k: f"a{i + 1}" for i, k in enumerate(active1)}
    yname = {k: f"b{i + 1}" for i, k in enumerate(active2)}
    X = tuple(xname[k] for k in active1)
    Y = tuple(yname[k] for k in active2)
    H = BipartiteGraph(X, Y, tuple((xname[a], yname[b]) for a, b in by_pair))
    host = OrderedBipartiteGraph(H, X, Y)

    anchors: dict[tuple[str, str], str] = {}
    paths: dict[tuple[str, str], tuple[str, ...]] = {}
    for (a, b), p in by_pair.items():
        x, y = xname[a], yname[b]
        anchors[(x, y)] = p[0]
        anchors[(y, x)] = p[-1]
        paths[(x, y)] = p
    tau = {}
    for x in X:
        nbrs = [y for y in Y if (x, y) in paths]
        tau[x] = sorted(nbrs, key=lambda y: pos1[anchors[(x, y)]])
    for y in Y:
        nbrs = [x for x in X if (x, y) in paths]
        tau[y] = sorted(nbrs, key=lambda x: pos2[anchors[(y, x)]])
    config = Configuration.from_mapping(host, tau)
    G = build_configuration_graph(config)

    weights = []
    for eid, (t, h) in enumerate(G.edges):
        tv, hv = G.vertices[t], G.vertices[h]
        if G.kinds[eid] is EdgeKind.CROSS:
            weights.append(len(paths[tv]) - 1)
        else:
            seq, pos = (c1, pos1) if eid < G.m else (c2, pos2)
            weights.append(len(_arc(seq, pos, anchors[tv], anchors[hv])) - 1)
    components = {xname[k]: runs1[k] for k in active1} | {yname[k]: runs2[k] for k in active2}
    return ExtractedInstance(host, config, WeightFunction(weights), components, anchors, paths, (c1, c2))


def lift_cycle(inst: HostInstance, ext: ExtractedInstance, c: Cycle) -> tuple[str, ...]:
    """The host cycle traced by ``c``: arcs for main edges, paths for cross edges."""
    if not c.good:
        raise NotGoodCycle("cycle uses dangerous edges of both main cycles")
    G = ext.graph
    c1, c2 = ext.cycles
    pos = ({v: i for i, v in enumerate(c1)}, {v: i for i, v in enumerate(c2)})
    walk: list[str] = []
    for eid, tail in zip(c.edges, c.vertices):
        t, h = G.edges[eid]
        if G.kinds[eid] is EdgeKind.CROSS:
            seg = list(ext.paths[G.vertices[t]])
            if tail != t:
                seg.reverse()
        else:
            k = 0 if eid < G.m else 1
            seq = (c1, c2)[k]
            seg = _arc(seq, pos[k], ext.anchors[G.vertices[t]], ext.anchors[G.vertices[h]])
            if tail != t:
                seg.reverse()
        if walk and walk[-1] != seg[0]:
            raise RuntimeError("lifted segments do not join up")
        walk.extend(seg if not walk else seg[1:])
    if walk[0] != walk[-1]:
        raise RuntimeError("lifted walk is not closed")
    walk.pop()
    if len(set(walk)) != len(walk):
        raise LiftNotSimple("lifted walk repeats a vertex")
    return tuple(walk)


def walk_length(walk: Sequence[str]) -> int:
    """Number of edges of a closed walk given without its repeated endpoint."""
    return len(walk)


def is_host_cycle(inst: HostInstance, walk: Sequence[str]) -> bool:
    n = len(walk)
    if n < 3 or len(set(walk)) != n:
        return False
    return all(inst.has_edge(walk[i - 1], walk[i]) for i in range(n))
