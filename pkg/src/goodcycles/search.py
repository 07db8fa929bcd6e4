"""The staged search over configurations of an ordered bipartite graph.

Edges are added one at a time.  After each step every extension of every
survivor is built and dropped if the covering-pair criterion already forces a
long good cycle.  Full configurations that survive all steps go through the
exact LP; those with a feasible point are genuine survivors.
"""

from __future__ import annotations

import logging
import multiprocessing
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Iterable, Sequence

from .certificates import WeightFunction, fast_pathcheck, has_long_good_cycle
from .config_graph import (
    Configuration,
    build_configuration_graph,
    enumerate_extensions,
    enumerate_good_cycles,
)
from .lp import Feasible, Infeasible, build_lp, decide_feasibility
from .obg import BipartiteGraph, OrderedBipartiteGraph, builtin_graph

log = logging.getLogger(__name__)

Edge = tuple[str, str]
Orders = tuple[tuple[str, ...], ...]


class InvalidOrder(ValueError):
    pass


class NoDefault(ValueError):
    pass


@dataclass(frozen=True)
class EdgeOrder:
    edges: tuple[Edge, ...]

    def validate(self, H: BipartiteGraph) -> EdgeOrder:
        """The order with each edge normalized to ``(x, y)``; raises on anything but a permutation of E(H)."""
        try:
            norm = tuple(H.normalize_edge(*e) for e in self.edges)
        except (ValueError, TypeError) as exc:
            raise InvalidOrder(str(exc)) from None
        if len(set(norm)) != len(norm):
            raise InvalidOrder("an edge is listed twice")
        if set(norm) != set(H.edges):
            missing = sorted(set(H.edges) - set(norm))
            raise InvalidOrder(f"order misses edges {missing}")
        return EdgeOrder(norm)


_DEFAULT_ORDERS = {
    "K33": [(f"a{i}", f"b{j}") for i in (1, 2, 3) for j in (1, 2, 3)],
    "Q3PLUS": [
        ("a1", "b2"), ("a1", "b3"), ("a2", "b2"), ("a2", "b3"), ("a3", "b2"), ("a3", "b3"),
        ("a1", "b4"), ("a2", "b4"), ("a4", "b4"), ("a2", "b1"), ("a3", "b1"), ("a4", "b1"),
        ("a4", "b2"),
    ],
}


def builtin_name(H: BipartiteGraph) -> str | None:
    for name in ("K33", "Q3PLUS", "Q3"):
        B = builtin_graph(name)
        if set(B.X) == set(H.X) and set(B.Y) == set(H.Y) and set(B.edges) == set(H.edges):
            return name
    return None


def degree_order(g: OrderedBipartiteGraph) -> EdgeOrder:
    """Edges by decreasing endpoint degree sum, then by position of x and of y in σ."""
    H = g.base
    rank = g.rank
    edges = sorted(H.edges, key=lambda e: (-(H.degree(e[0]) + H.degree(e[1])), rank[e[0]], rank[e[1]]))
    return EdgeOrder(tuple(edges))


def default_edge_order(g: OrderedBipartiteGraph) -> EdgeOrder:
    name = builtin_name(g.base)
    if name is None:
        raise NoDefault("no default edge order for a non-builtin graph")
    if name == "Q3":
        return degree_order(g)
    return EdgeOrder(tuple(_DEFAULT_ORDERS[name])).validate(g.base)


@dataclass(frozen=True)
class StepCount:
    edge: Edge
    generated: int
    survived: int


@dataclass(frozen=True)
class PathcheckRecord:
    """A configuration removed at ``step`` by the covering pair ``(mask_a, mask_b)``."""

    step: int
    orders: Orders
    mask_a: int
    mask_b: int


@dataclass(frozen=True)
class FarkasRecord:
    """A full configuration whose LP is infeasible; nonzero multipliers keyed by row label."""

    orders: Orders
    multipliers: tuple[tuple[str, Fraction], ...]


@dataclass(frozen=True)
class Witness:
    config: Configuration
    weights: WeightFunction


@dataclass
class SearchReport:
    host: OrderedBipartiteGraph
    order: EdgeOrder
    steps: list[StepCount] = field(default_factory=list)
    pathcheck_records: list[PathcheckRecord] = field(default_factory=list)
    farkas_records: list[FarkasRecord] = field(default_factory=list)
    survivors: list[tuple[Orders, Feasible]] = field(default_factory=list)
    lp_checked: int = 0
    duration: float = 0.0
    workers: int = 1

    @property
    def final(self) -> int:
        return len(self.survivors)

    @property
    def generated(self) -> list[int]:
        return [s.generated for s in self.steps]

    @property
    def survived(self) -> list[int]:
        return [s.survived for s in self.steps]

    def cause(self, orders: Orders) -> str:
        """``"pathcheck:<step>"``, ``"lp"``, ``"survivor"`` or ``"unknown"``."""
        for r in self.pathcheck_records:
            if r.orders == orders:
                return f"pathcheck:{r.step}"
        if any(r.orders == orders for r in self.farkas_records):
            return "lp"
        if any(o == orders for o, _ in self.survivors):
            return "survivor"
        return "unknown"


def _expand(host: OrderedBipartiteGraph, edge: Edge, orders: Orders):
    parent = Configuration(host, orders)
    out = []
    for child in enumerate_extensions(parent, edge):
        out.append((child.orders, fast_pathcheck(build_configuration_graph(child))))
    return out


def _decide(host: OrderedBipartiteGraph, orders: Orders):
    G = build_configuration_graph(Configuration(host, orders))
    sys = build_lp(G, enumerate_good_cycles(G))
    verdict = decide_feasibility(sys)
    if isinstance(verdict, Infeasible):
        rows = sys.rows()
        return tuple((r.label, y) for r, y in zip(rows, verdict.farkas) if y)
    return verdict


def _map(fn, items: Sequence, pool) -> Iterable:
    if pool is None:
        return map(fn, items)
    chunk = max(1, min(256, len(items) // (8 * pool._processes) or 1))
    return pool.imap(fn, items, chunksize=chunk)


def run_search(
    g: OrderedBipartiteGraph,
    order: EdgeOrder | None = None,
    workers: int = 1,
    *,
    lp: bool = True,
    stop_at_feasible: bool = False,
    progress=None,
) -> SearchReport:
    """Run every step, then the LP on the full survivors.

    Survivors are sorted by their order tuples after each step, so the report
    does not depend on ``workers``.  With ``stop_at_feasible`` the LP phase
    ends at the first feasible configuration (used for witness search).
    """
    if workers < 1:
        raise ValueError("workers must be positive")
    order = (order or default_edge_order(g)).validate(g.base)
    report = SearchReport(g, order, workers=workers)
    start = time.perf_counter()
    pool = multiprocessing.get_context("fork").Pool(workers) if workers > 1 else None
    try:
        current: list[Orders] = [Configuration.empty(g).orders]
        for step, edge in enumerate(order.edges, 1):
            fn = partial(_expand, g, edge)
            survivors, generated = [], 0
            for batch in _map(fn, current, pool):
                generated += len(batch)
                for orders, cert in batch:
                    if cert is None:
                        survivors.append(orders)
                    else:
                        report.pathcheck_records.append(PathcheckRecord(step, orders, cert[0], cert[1]))
            survivors.sort()
            report.steps.append(StepCount(edge, generated, len(survivors)))
            if progress:
                progress(step, edge, generated, len(survivors))
            current = survivors
        if lp:
            fn = partial(_decide, g)
            for orders, verdict in zip(current, _map(fn, current, pool)):
                report.lp_checked += 1
                if isinstance(verdict, tuple):
                    report.farkas_records.append(FarkasRecord(orders, verdict))
                else:
                    report.survivors.append((orders, verdict))
                    if stop_at_feasible:
                        break
        else:
            report.survivors = [(o, None) for o in current]
    finally:
        if pool is not None:
            pool.terminate()
            pool.join()
    report.pathcheck_records.sort(key=lambda r: (r.step, r.orders))
    report.duration = time.perf_counter() - start
    return report


def witness_from_report(report: SearchReport) -> Witness | None:
    """The first feasible survivor, checked to have no long good cycle."""
    for orders, verdict in report.survivors:
        if verdict is None:
            continue
        config = Configuration(report.host, orders)
        G = build_configuration_graph(config)
        w = WeightFunction(verdict.point)
        if has_long_good_cycle(G, w) is not None:
            log.error("LP point on %s admits a long good cycle", orders)
            continue
        return Witness(config, w)
    return None


def find_witness(g: OrderedBipartiteGraph, order: EdgeOrder | None = None, workers: int = 1) -> Witness | None:
    if builtin_name(g.base) != "Q3":
        log.warning("witness search on a base graph other than Q3")
    report = run_search(g, order, workers, stop_at_feasible=True)
    w = witness_from_report(report)
    if w is None:
        log.error("no Q3 witness found: every configuration was certified")
    return w
