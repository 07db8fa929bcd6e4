"""Configurations, configuration graphs and good-cycle enumeration.

Edge identities in a :class:`ConfigurationGraph` with ``m`` H-edges:

* ``0 .. m-1``      main cycle C1, edge ``i`` runs from C1 vertex ``i`` to ``i+1 (mod m)``
* ``m .. 2m-1``     main cycle C2, same convention on C2 vertices ``m .. 2m-1``
* ``2m .. 3m-1``    cross edges, edge ``2m+i`` leaves C1 vertex ``i``

With one vertex a main cycle is a loop; with two it is a pair of parallel edges.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from .obg import OrderedBipartiteGraph


class DuplicateEdge(ValueError):
    pass


class EmptyConfiguration(ValueError):
    pass


class InvalidConfiguration(ValueError):
    pass


@dataclass(frozen=True)
class Configuration:
    """One total order per vertex of H on its neighbours in the current edge set.

    ``orders`` is aligned with ``host.base.vertices``; the current edge set is
    whatever the orders mention, so configurations over the growing subgraphs
    ``H_i`` share the same type.
    """

    host: OrderedBipartiteGraph
    orders: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        base = self.host.base
        if len(self.orders) != len(base.vertices):
            raise InvalidConfiguration("one order per vertex of H is required")
        xs = set(base.X)
        full = base.neighbors
        seen = set()
        for v, order in zip(base.vertices, self.orders):
            if len(set(order)) != len(order):
                raise InvalidConfiguration(f"order at {v} repeats a neighbour")
            for u in order:
                if u not in full[v]:
                    raise InvalidConfiguration(f"{u} is not a neighbour of {v} in H")
                seen.add((v, u) if v in xs else (u, v))
        for x, y in seen:
            if x not in self.order(y) or y not in self.order(x):
                raise InvalidConfiguration(f"edge {{{x},{y}}} appears at only one endpoint")

    @classmethod
    def empty(cls, host: OrderedBipartiteGraph) -> Configuration:
        return cls(host, tuple(() for _ in host.base.vertices))

    @classmethod
    def from_mapping(cls, host: OrderedBipartiteGraph, tau: dict[str, list[str]]) -> Configuration:
        unknown = set(tau) - set(host.base.vertices)
        if unknown:
            raise InvalidConfiguration(f"unknown vertices {sorted(unknown)}")
        return cls(host, tuple(tuple(tau.get(v, ())) for v in host.base.vertices))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.host.base.vertices)}

    def order(self, v: str) -> tuple[str, ...]:
        return self.orders[self._index[v]]

    def as_mapping(self) -> dict[str, list[str]]:
        return {v: list(o) for v, o in zip(self.host.base.vertices, self.orders)}

    @cached_property
    def edges(self) -> frozenset[tuple[str, str]]:
        nx = len(self.host.base.X)
        return frozenset((x, y) for x, order in zip(self.host.base.X, self.orders[:nx]) for y in order)

    def key(self) -> tuple[tuple[str, ...], ...]:
        """Canonical encoding used for deterministic sorting."""
        return self.orders


def _insertions(order: tuple[str, ...], item: str) -> list[tuple[str, ...]]:
    return [order[:i] + (item,) + order[i:] for i in range(len(order) + 1)]


def enumerate_extensions(parent: Configuration, new_edge: tuple[str, str]) -> list[Configuration]:
    """Every configuration on ``edges + {new_edge}`` restricting to ``parent``.

    The new neighbour is inserted at every position of both endpoint orders,
    x-position varying slowest.
    """
    base = parent.host.base
    x, y = base.normalize_edge(*new_edge)
    if (x, y) in parent.edges:
        raise DuplicateEdge(f"edge {{{x},{y}}} already present")
    ix, iy = parent._index[x], parent._index[y]
    out = []
    for ox in _insertions(parent.orders[ix], y):
        for oy in _insertions(parent.orders[iy], x):
            orders = list(parent.orders)
            orders[ix] = ox
            orders[iy] = oy
            out.append(Configuration(parent.host, tuple(orders)))
    return out


def is_subconfiguration(sub: Configuration, sup: Configuration) -> bool:
    """Whether every order of ``sub`` is the restriction of the corresponding order of ``sup``.

    ``sub`` may live on an ordered subgraph of ``sup``'s host: the part orders
    must then be restrictions too.
    """
    hs, hb = sub.host, sup.host
    if not set(hs.base.vertices) <= set(hb.base.vertices):
        return False
    if not set(hs.base.edges) <= set(hb.base.edges):
        return False
    if hs.order_x != tuple(v for v in hb.order_x if v in set(hs.order_x)):
        return False
    if hs.order_y != tuple(v for v in hb.order_y if v in set(hs.order_y)):
        return False
    if not sub.edges <= sup.edges:
        return False
    for v in hs.base.vertices:
        mine = sub.order(v)
        keep = set(mine)
        if tuple(u for u in sup.order(v) if u in keep) != mine:
            return False
    return True


class EdgeKind(enum.Enum):
    SAFE = "safe"
    DANGEROUS = "dangerous"
    CROSS = "cross"


@dataclass(frozen=True, eq=False)
class ConfigurationGraph:
    """The multigraph G_tau with explicit edge identities (see module docstring)."""

    config: Configuration
    vertices: tuple[tuple[str, str], ...]  # (h, neighbour); C1 copies first
    edges: tuple[tuple[int, int], ...]  # (tail, head) following the main-cycle orientation
    kinds: tuple[EdgeKind, ...]

    @property
    def m(self) -> int:
        return len(self.vertices) // 2

    @cached_property
    def c1_edges(self) -> tuple[int, ...]:
        return tuple(range(self.m))

    @cached_property
    def c2_edges(self) -> tuple[int, ...]:
        return tuple(range(self.m, 2 * self.m))

    @cached_property
    def cross_edges(self) -> tuple[int, ...]:
        return tuple(range(2 * self.m, 3 * self.m))

    @cached_property
    def c1_mask(self) -> int:
        return (1 << self.m) - 1

    @cached_property
    def c2_mask(self) -> int:
        return ((1 << self.m) - 1) << self.m

    @cached_property
    def main_mask(self) -> int:
        return (1 << 2 * self.m) - 1

    @cached_property
    def cross_mask(self) -> int:
        return ((1 << self.m) - 1) << 2 * self.m

    @cached_property
    def d1_mask(self) -> int:
        return sum(1 << e for e in self.c1_edges if self.kinds[e] is EdgeKind.DANGEROUS)

    @cached_property
    def d2_mask(self) -> int:
        return sum(1 << e for e in self.c2_edges if self.kinds[e] is EdgeKind.DANGEROUS)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, ``(edge id, other endpoint)``; a loop is listed once."""
        adj: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((eid, v))
            if u != v:
                adj[v].append((eid, u))
        return tuple(tuple(a) for a in adj)

    def vertex_name(self, i: int) -> str:
        h, n = self.vertices[i]
        return f"{h},{n}"

    def edge_key(self, eid: int) -> str:
        """Document key: ``x,y>x',y'`` for main edges, sorted ``u-v`` H-edge for cross edges."""
        u, v = self.edges[eid]
        if self.kinds[eid] is EdgeKind.CROSS:
            return "-".join(sorted(self.vertices[u]))
        return f"{self.vertex_name(u)}>{self.vertex_name(v)}"

    @cached_property
    def edge_ids_by_key(self) -> dict[str, int]:
        return {self.edge_key(e): e for e in range(len(self.edges))}

    def degree(self, v: int) -> int:
        return sum(2 if a == b == v else (a == v) + (b == v) for a, b in self.edges)


def _main_cycle_vertices(config: Configuration, part: tuple[str, ...]) -> list[tuple[str, str]]:
    return [(h, n) for h in part for n in config.order(h)]


def build_configuration_graph(config: Configuration) -> ConfigurationGraph:
    """G_tau for ``config``: lexicographic main cycles plus one cross edge per H-edge."""
    host = config.host
    c1 = _main_cycle_vertices(config, host.order_x)
    c2 = _main_cycle_vertices(config, host.order_y)
    m = len(c1)
    if m == 0:
        raise EmptyConfiguration("configuration has no edges")
    vertices = tuple(c1 + c2)
    index = {v: i for i, v in enumerate(vertices)}
    edges: list[tuple[int, int]] = []
    kinds: list[EdgeKind] = []
    for offset, cyc, part in ((0, c1, host.order_x), (m, c2, host.order_y)):
        for i in range(m):
            j = (i + 1) % m
            edges.append((offset + i, offset + j))
            wraps_past_others = j == 0 and len(part) > 1
            kinds.append(EdgeKind.DANGEROUS if cyc[i][0] != cyc[j][0] or wraps_past_others else EdgeKind.SAFE)
    for i, (x, y) in enumerate(c1):
        edges.append((i, index[(y, x)]))
        kinds.append(EdgeKind.CROSS)
    return ConfigurationGraph(config, vertices, tuple(edges), tuple(kinds))


@dataclass(frozen=True)
class Cycle:
    """A cycle of G_tau as a closed edge sequence in canonical rotation.

    ``vertices[i]`` is the tail of ``edges[i]`` along the traversal.
    """

    edges: tuple[int, ...]
    vertices: tuple[int, ...]
    mask: int
    uses_d1: bool
    uses_d2: bool

    @property
    def good(self) -> bool:
        return not (self.uses_d1 and self.uses_d2)

    def __len__(self):
        return len(self.edges)


def canonical_rotation(edges: list[int], vertices: list[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Rotate to the least edge id, pick the direction whose second edge is smaller."""
    n = len(edges)
    k = edges.index(min(edges))
    fwd_e = edges[k:] + edges[:k]
    fwd_v = vertices[k:] + vertices[:k]
    if n <= 2:
        return tuple(fwd_e), tuple(fwd_v)
    # reversed traversal of the same cycle starting with the same edge
    rev_e = [fwd_e[0]] + fwd_e[:0:-1]
    rev_v = [fwd_v[1]] + [fwd_v[0]] + fwd_v[:1:-1]
    if rev_e < fwd_e:
        return tuple(rev_e), tuple(rev_v)
    return tuple(fwd_e), tuple(fwd_v)


def make_cycle(G: ConfigurationGraph, edges: list[int], vertices: list[int]) -> Cycle:
    e, v = canonical_rotation(list(edges), list(vertices))
    mask = 0
    for x in e:
        mask |= 1 << x
    return Cycle(e, v, mask, bool(mask & G.d1_mask), bool(mask & G.d2_mask))


def _simple_cycles(G: ConfigurationGraph, allowed: int) -> list[tuple[list[int], list[int]]]:
    """Every simple cycle using only edges in ``allowed``, each reported once.

    Cycles are rooted at their smallest vertex and the two traversal directions
    are told apart by comparing first and closing edge ids.
    """
    adj = [[(e, w) for e, w in a if allowed >> e & 1] for a in G.adjacency]
    found: list[tuple[list[int], list[int]]] = []
    for s in range(len(adj)):
        for e, w in adj[s]:
            if w == s:
                found.append(([e], [s]))
        path_e: list[int] = []
        path_v: list[int] = [s]
        visited = 1 << s

        def extend(v: int) -> None:
            nonlocal visited
            for e, w in adj[v]:
                if w == v:
                    continue
                if w == s:
                    if path_e and path_e[0] < e:
                        found.append((path_e + [e], list(path_v)))
                elif w > s and not visited >> w & 1:
                    visited |= 1 << w
                    path_e.append(e)
                    path_v.append(w)
                    extend(w)
                    path_v.pop()
                    path_e.pop()
                    visited &= ~(1 << w)

        extend(s)
    return found


def enumerate_cycles(G: ConfigurationGraph) -> list[Cycle]:
    """All cycles of G_tau, good or not, in canonical order."""
    cycles = [make_cycle(G, e, v) for e, v in _simple_cycles(G, (1 << len(G.edges)) - 1)]
    return sorted(cycles, key=lambda c: (len(c.edges), c.edges))


def enumerate_good_cycles(G: ConfigurationGraph) -> list[Cycle]:
    """Every good cycle of G_tau exactly once, sorted by (length, edge sequence).

    Two restricted searches: one without C1's dangerous edges, one without C2's.
    """
    everything = (1 << len(G.edges)) - 1
    by_mask: dict[int, Cycle] = {}
    for forbidden in (G.d1_mask, G.d2_mask):
        for e, v in _simple_cycles(G, everything & ~forbidden):
            c = make_cycle(G, e, v)
            by_mask.setdefault(c.mask, c)
    return sorted(by_mask.values(), key=lambda c: (len(c.edges), c.edges))


def main_cycle(G: ConfigurationGraph, which: int) -> Cycle:
    """C1 (``which=1``) or C2 (``which=2``) as a :class:`Cycle`."""
    ids = list(G.c1_edges if which == 1 else G.c2_edges)
    return make_cycle(G, ids, [G.edges[e][0] for e in ids])


def is_cycle_of(G: ConfigurationGraph, edges: tuple[int, ...]) -> bool:
    """Independent check that an edge sequence is a closed walk without repeated vertices."""
    n = len(edges)
    if n == 0 or len(set(edges)) != n or any(not 0 <= e < len(G.edges) for e in edges):
        return False
    if n == 1:
        u, v = G.edges[edges[0]]
        return u == v
    a, b = G.edges[edges[0]]
    for start, cur in ((a, b), (b, a)):
        walk = [start, cur]
        ok = True
        for e in edges[1:]:
            u, v = G.edges[e]
            if u == cur:
                cur = v
            elif v == cur:
                cur = u
            else:
                ok = False
                break
            walk.append(cur)
        if ok and walk[-1] == start and len(set(walk[:-1])) == n:
            return True
    return False
