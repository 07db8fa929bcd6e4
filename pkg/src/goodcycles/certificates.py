"""Weight functions, the covering-pair criterion and long good cycles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .config_graph import (
    ConfigurationGraph,
    Cycle,
    EdgeKind,
    enumerate_good_cycles,
    make_cycle,
)


class InvalidWeights(ValueError):
    pass


@dataclass(frozen=True)
class WeightFunction:
    """Exact weight per edge id of a configuration graph."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def __getitem__(self, eid: int) -> Fraction:
        return self.values[eid]

    def total(self, edges) -> Fraction:
        return sum((self.values[e] for e in edges), Fraction(0))

    def scaled(self, factor) -> WeightFunction:
        return WeightFunction(tuple(v * factor for v in self.values))


def check_weights(G: ConfigurationGraph, w: WeightFunction) -> None:
    """Raise :class:`InvalidWeights` naming the first violated weight-function condition."""
    if len(w.values) != len(G.edges):
        raise InvalidWeights(f"expected {len(G.edges)} weights, got {len(w.values)}")
    for eid, v in enumerate(w.values):
        if v < 0:
            raise InvalidWeights(f"negative weight {v} on {G.edge_key(eid)}")
        if G.kinds[eid] is EdgeKind.CROSS and v < 1:
            raise InvalidWeights(f"cross edge {G.edge_key(eid)} has weight {v} < 1")
    t1, t2 = w.total(G.c1_edges), w.total(G.c2_edges)
    if t1 != t2:
        raise InvalidWeights(f"main cycle totals differ: C1 = {t1}, C2 = {t2}")


def has_long_good_cycle(
    G: ConfigurationGraph, w: WeightFunction, good: list[Cycle] | None = None
) -> Cycle | None:
    """The heaviest good cycle if it is strictly heavier than the main cycles, else ``None``."""
    check_weights(G, w)
    if good is None:
        good = enumerate_good_cycles(G)
    target = w.total(G.c1_edges)
    best, best_w = None, target
    for c in good:
        cw = w.total(c.edges)
        if cw > best_w:
            best, best_w = c, cw
    return best


@dataclass(frozen=True)
class PathcheckCertificate:
    """Two good cycles jointly covering both main cycles and at least one cross edge."""

    first: Cycle
    second: Cycle


def pathcheck(G: ConfigurationGraph, good: list[Cycle]) -> PathcheckCertificate | None:
    """Reference pair search over ``good`` (the full good-cycle list of ``G``)."""
    main = G.main_mask
    size = main.bit_count()
    items = []
    for c in good:
        m = c.mask & main
        items.append((m.bit_count(), m, bool(c.mask & G.cross_mask), c))
    items.sort(key=lambda t: (-t[0], t[3].edges))
    for i, (pa, a, ca, c) in enumerate(items):
        if 2 * pa < size:
            break
        for pb, b, cb, d in items[i + 1:]:
            if pa + pb < size:
                break
            if a | b == main and (ca or cb):
                return PathcheckCertificate(c, d)
    return None


def graph_arrays(G: ConfigurationGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = len(G.vertices)
    adj_e = np.zeros((n, 3), np.int64)
    adj_w = np.zeros((n, 3), np.int64)
    deg = np.zeros(n, np.int64)
    for v, nbrs in enumerate(G.adjacency):
        deg[v] = len(nbrs)
        for k, (e, u) in enumerate(nbrs):
            adj_e[v, k] = e
            adj_w[v, k] = u
    return adj_e, adj_w, deg


class _Buffer:
    def __init__(self, size: int = 1 << 14):
        self.a = np.empty(size, np.int64)
        self.b = np.empty(size, np.int64)

    def grow(self):
        self.a = np.empty(2 * self.a.shape[0], np.int64)
        self.b = np.empty(2 * self.b.shape[0], np.int64)


_buffer = _Buffer()


def _masks(arrays, allowed: int, out: np.ndarray) -> int:
    return _kernels.cycle_masks(*arrays, np.int64(allowed), out)


def fast_pathcheck(G: ConfigurationGraph) -> tuple[int, int] | None:
    """Edge masks of a covering pair of good cycles, found with the compiled kernels.

    When both main cycles have dangerous edges the one avoiding C1's dangerous
    edges must contain all of C2's and vice versa, which shrinks the pair scan.
    """
    if len(G.edges) > _kernels.MAX_EDGES:
        cert = pathcheck(G, enumerate_good_cycles(G))
        return None if cert is None else (cert.first.mask, cert.second.mask)
    arrays = graph_arrays(G)
    everything = (1 << len(G.edges)) - 1
    buf = _buffer
    while True:
        na = _masks(arrays, everything & ~G.d1_mask, buf.a)
        nb = _masks(arrays, everything & ~G.d2_mask, buf.b)
        if na >= 0 and nb >= 0:
            break
        buf.grow()
    main, cross = np.int64(G.main_mask), np.int64(G.cross_mask)
    if G.d1_mask and G.d2_mask:
        i, j = _kernels.covering_pair(buf.a, na, buf.b, nb, main, cross, np.int64(G.d2_mask), np.int64(G.d1_mask))
        if i < 0:
            return None
        return int(buf.a[i]), int(buf.b[j])
    pool = np.concatenate((buf.a[:na], buf.b[:nb]))
    zero = np.int64(0)
    i, j = _kernels.covering_pair(pool, pool.shape[0], pool, pool.shape[0], main, cross, zero, zero)
    if i < 0:
        return None
    return int(pool[i]), int(pool[j])


def good_cycle_masks(G: ConfigurationGraph) -> set[int]:
    """Good-cycle edge masks via the compiled kernel (used to cross-check the reference)."""
    arrays = graph_arrays(G)
    everything = (1 << len(G.edges)) - 1
    out = np.empty(1 << 16, np.int64)
    result: set[int] = set()
    for forbidden in (G.d1_mask, G.d2_mask):
        n = _masks(arrays, everything & ~forbidden, out)
        if n < 0:
            raise RuntimeError("cycle buffer overflow")
        result.update(int(x) for x in out[:n])
    return result


def cycle_from_mask(G: ConfigurationGraph, mask: int) -> Cycle:
    """Recover the traversal of the cycle whose edge set is ``mask``."""
    ids = [e for e in range(len(G.edges)) if mask >> e & 1]
    if not ids:
        raise ValueError("empty edge set")
    start = ids[0]
    u, v = G.edges[start]
    if len(ids) == 1:
        if u != v:
            raise ValueError("a single non-loop edge is not a cycle")
        return make_cycle(G, ids, [u])
    edges, verts = [start], [u]
    remaining = set(ids[1:])
    cur = v
    while remaining:
        step = next((e for e, w in G.adjacency[cur] if e in remaining), None)
        if step is None:
            raise ValueError("edge set is not a single cycle")
        remaining.discard(step)
        a, b = G.edges[step]
        verts.append(cur)
        edges.append(step)
        cur = b if a == cur else a
    if cur != u:
        raise ValueError("edge set is not closed")
    return make_cycle(G, edges, verts)
