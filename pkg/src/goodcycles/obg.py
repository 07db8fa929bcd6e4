"""Ordered bipartite graphs, their vertex orderings and the equivalence used for pruning."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import factorial


class UnknownName(ValueError):
    pass


class InvalidGraph(ValueError):
    pass


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph with parts ``X`` and ``Y``.

    Edges are stored as ``(x, y)`` pairs with ``x`` in ``X``, sorted by the
    position of their endpoints in the part tuples.
    """

    X: tuple[str, ...]
    Y: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        X, Y = tuple(self.X), tuple(self.Y)
        labels = X + Y
        if len(set(labels)) != len(labels):
            raise InvalidGraph("vertex labels must be unique across both parts")
        xs, ys = set(X), set(Y)
        normalized = set()
        for edge in self.edges:
            if len(edge) != 2:
                raise InvalidGraph(f"edge {edge!r} must have two endpoints")
            u, v = edge
            if u in xs and v in ys:
                e = (u, v)
            elif v in xs and u in ys:
                e = (v, u)
            else:
                raise InvalidGraph(f"edge {edge!r} does not join X to Y")
            if e in normalized:
                raise InvalidGraph(f"duplicate edge {edge!r}")
            normalized.add(e)
        pos = {v: i for i, v in enumerate(labels)}
        edges = tuple(sorted(normalized, key=lambda e: (pos[e[0]], pos[e[1]])))
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "edges", edges)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.X + self.Y

    @cached_property
    def neighbors(self) -> dict[str, tuple[str, ...]]:
        nbrs: dict[str, list[str]] = {v: [] for v in self.vertices}
        for x, y in self.edges:
            nbrs[x].append(y)
            nbrs[y].append(x)
        return {v: tuple(n) for v, n in nbrs.items()}

    def degree(self, v: str) -> int:
        return len(self.neighbors[v])

    def in_x(self, v: str) -> bool:
        return v in self._xset

    @cached_property
    def _xset(self) -> frozenset[str]:
        return frozenset(self.X)

    def normalize_edge(self, u: str, v: str) -> tuple[str, str]:
        """Return the edge ``{u, v}`` as an ``(x, y)`` pair; raise if it is not an edge of H."""
        e = (u, v) if self.in_x(u) else (v, u)
        if e not in self._edgeset:
            raise InvalidGraph(f"{{{u},{v}}} is not an edge of the base graph")
        return e

    @cached_property
    def _edgeset(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.edges)


@dataclass(frozen=True)
class OrderedBipartiteGraph:
    base: BipartiteGraph
    order_x: tuple[str, ...]
    order_y: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "order_x", tuple(self.order_x))
        object.__setattr__(self, "order_y", tuple(self.order_y))
        if sorted(self.order_x) != sorted(self.base.X) or len(set(self.order_x)) != len(self.order_x):
            raise InvalidGraph("order_x must be a permutation of X")
        if sorted(self.order_y) != sorted(self.base.Y) or len(set(self.order_y)) != len(self.order_y):
            raise InvalidGraph("order_y must be a permutation of Y")

    @cached_property
    def rank(self) -> dict[str, int]:
        """Position of every vertex within its own part order."""
        r = {v: i for i, v in enumerate(self.order_x)}
        r.update((v, i) for i, v in enumerate(self.order_y))
        return r

    def sort_key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        # permutation words over the base labels' positions
        px = {v: i for i, v in enumerate(self.base.X)}
        py = {v: i for i, v in enumerate(self.base.Y)}
        return tuple(px[v] for v in self.order_x), tuple(py[v] for v in self.order_y)


def _complete_bipartite(n: int, m: int) -> tuple[tuple[str, ...], tuple[str, ...], list[tuple[str, str]]]:
    X = tuple(f"a{i}" for i in range(1, n + 1))
    Y = tuple(f"b{j}" for j in range(1, m + 1))
    return X, Y, [(x, y) for x in X for y in Y]


def builtin_graph(name: str) -> BipartiteGraph:
    """Return one of the built-in base graphs ``K33``, ``Q3PLUS`` or ``Q3``.

    The labelling of ``Q3PLUS`` is the one drawn for the two ordered
    representatives (``a2 b2`` is the added diagonal); ``Q3`` is
    ``K_{4,4}`` minus the matching ``{a_i b_i}``.
    """
    key = name.upper().replace("_", "").replace("+", "PLUS")
    if key == "K33":
        X, Y, edges = _complete_bipartite(3, 3)
        return BipartiteGraph(X, Y, tuple(edges))
    if key in ("Q3PLUS", "Q3P"):
        X, Y, edges = _complete_bipartite(4, 4)
        removed = {("a1", "b1"), ("a3", "b4"), ("a4", "b3")}
        return BipartiteGraph(X, Y, tuple(e for e in edges if e not in removed))
    if key == "Q3":
        X, Y, edges = _complete_bipartite(4, 4)
        return BipartiteGraph(X, Y, tuple(e for e in edges if e[0][1:] != e[1][1:]))
    raise UnknownName(f"unknown builtin graph {name!r}; expected K33, Q3PLUS or Q3")


def enumerate_orderings(H: BipartiteGraph) -> list[OrderedBipartiteGraph]:
    """All ``|X|!·|Y|!`` orderings of ``H``, order_x varying slowest."""
    return [
        OrderedBipartiteGraph(H, ox, oy)
        for ox in itertools.permutations(H.X)
        for oy in itertools.permutations(H.Y)
    ]


def ordering_count(H: BipartiteGraph) -> int:
    return factorial(len(H.X)) * factorial(len(H.Y))


def _part_cycle(order: tuple[str, ...]) -> set[frozenset[str]]:
    n = len(order)
    if n < 2:
        return set()
    if n == 2:
        return {frozenset(order)}
    return {frozenset((order[i], order[(i + 1) % n])) for i in range(n)}


@dataclass(frozen=True)
class AuxiliaryGraph:
    """H plus a cycle through each part in its cyclic order."""

    X: tuple[str, ...]
    Y: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.X + self.Y

    @property
    def cycle_edge_count(self) -> int:
        return sum(1 for e in self.edges if e <= set(self.X) or e <= set(self.Y))


def auxiliary_graph(g: OrderedBipartiteGraph) -> AuxiliaryGraph:
    edges = {frozenset(e) for e in g.base.edges}
    edges |= _part_cycle(g.order_x)
    edges |= _part_cycle(g.order_y)
    return AuxiliaryGraph(g.base.X, g.base.Y, frozenset(edges))


def _edge_code(aux: AuxiliaryGraph, first: tuple[str, ...], second: tuple[str, ...]) -> tuple:
    """Edge list of ``aux`` relabelled so ``first`` becomes 0.. and ``second`` follows."""
    idx = {v: i for i, v in enumerate(first + second)}
    return tuple(sorted(tuple(sorted(idx[v] for v in e)) for e in aux.edges))


def _isomorphic(a: AuxiliaryGraph, b: AuxiliaryGraph) -> bool:
    """Brute force over bijections mapping X(a) to X(b) or to Y(b)."""
    if len(a.edges) != len(b.edges):
        return False
    target_xy = _edge_code(b, b.X, b.Y)
    target_yx = _edge_code(b, b.Y, b.X)
    for px in itertools.permutations(a.X):
        for py in itertools.permutations(a.Y):
            code = _edge_code(a, px, py)
            if len(a.X) == len(b.X) and len(a.Y) == len(b.Y) and code == target_xy:
                return True
            if len(a.X) == len(b.Y) and len(a.Y) == len(b.X) and code == target_yx:
                return True
    return False


def equivalent(g1: OrderedBipartiteGraph, g2: OrderedBipartiteGraph) -> bool:
    """Whether the auxiliary graphs of ``g1`` and ``g2`` are isomorphic with parts preserved or swapped."""
    s1 = sorted((len(g1.base.X), len(g1.base.Y)))
    s2 = sorted((len(g2.base.X), len(g2.base.Y)))
    if s1 != s2:
        return False
    if g1 == g2:
        return True
    return _isomorphic(auxiliary_graph(g1), auxiliary_graph(g2))


def canonical_form(aux: AuxiliaryGraph) -> tuple:
    """Lexicographically least relabelled edge list over all part-respecting bijections.

    Parts are emitted in (smaller, larger) order; equal part sizes also try the swap.
    """
    assignments = []
    if len(aux.X) <= len(aux.Y):
        assignments.append((aux.X, aux.Y))
    if len(aux.Y) <= len(aux.X):
        assignments.append((aux.Y, aux.X))
    best = None
    for first, second in assignments:
        for p1 in itertools.permutations(first):
            for p2 in itertools.permutations(second):
                code = _edge_code(aux, p1, p2)
                if best is None or code < best:
                    best = code
    return best


def equivalence_classes(H: BipartiteGraph) -> list[OrderedBipartiteGraph]:
    """One representative per equivalence class, the lexicographically least ordering of each.

    Representatives are returned sorted by their ordering words.
    """
    forms: dict[frozenset, tuple] = {}
    reps: dict[tuple, OrderedBipartiteGraph] = {}
    for g in enumerate_orderings(H):
        aux = auxiliary_graph(g)
        form = forms.get(aux.edges)
        if form is None:
            form = forms[aux.edges] = canonical_form(aux)
        cur = reps.get(form)
        if cur is None or g.sort_key() < cur.sort_key():
            reps[form] = g
    return sorted(reps.values(), key=OrderedBipartiteGraph.sort_key)


def class_of(g: OrderedBipartiteGraph, reps: list[OrderedBipartiteGraph]) -> int:
    """Index of the representative equivalent to ``g``."""
    for i, r in enumerate(reps):
        if equivalent(g, r):
            return i
    raise ValueError("ordering is not equivalent to any representative")
