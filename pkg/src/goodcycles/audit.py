"""Independent re-check of the certificates recorded by a search.

Nothing here reuses the cycle enumeration, the pair search or the LP
builder: cycles are checked from their edge masks, and LP rows are rebuilt
from their labels before the Farkas combination is summed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .config_graph import Configuration, ConfigurationGraph, EdgeKind, build_configuration_graph


def is_good_cycle_mask(G: ConfigurationGraph, mask: int) -> bool:
    """Whether the edges in ``mask`` form one simple cycle of G avoiding one side's dangerous edges."""
    ids = [e for e in range(len(G.edges)) if mask >> e & 1]
    if not ids or mask >> len(G.edges):
        return False
    deg: dict[int, int] = {}
    nbrs: dict[int, list[int]] = {}
    for e in ids:
        u, v = G.edges[e]
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    if any(d != 2 for d in deg.values()):
        return False
    start = next(iter(deg))
    seen, stack = {start}, [start]
    while stack:
        for w in nbrs[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(deg):
        return False
    d1 = any(G.kinds[e] is EdgeKind.DANGEROUS and e < G.m for e in ids)
    d2 = any(G.kinds[e] is EdgeKind.DANGEROUS and G.m <= e < 2 * G.m for e in ids)
    return not (d1 and d2)


def check_pair(G: ConfigurationGraph, mask_a: int, mask_b: int) -> bool:
    if not (is_good_cycle_mask(G, mask_a) and is_good_cycle_mask(G, mask_b)):
        return False
    union = mask_a | mask_b
    main = sum(1 << e for e in range(2 * G.m))
    cross = sum(1 << e for e in range(len(G.edges)) if G.kinds[e] is EdgeKind.CROSS)
    return union & main == main and union & cross != 0


def _row(G: ConfigurationGraph, label: str):
    """``(sense, coefficients, rhs)`` of the row named ``label``, or ``None`` if the label is invalid."""
    E = len(G.edges)
    c1 = {e for e in range(E) if e < G.m}
    if label == "C1=C2":
        return "=", [1 if e < G.m else (-1 if e < 2 * G.m else 0) for e in range(E)], 0
    if label.startswith("bound:"):
        keys = {G.edge_key(e): e for e in range(E)}
        e = keys.get(label[len("bound:"):])
        if e is None:
            return None
        return ">=", [1 if k == e else 0 for k in range(E)], 1 if G.kinds[e] is EdgeKind.CROSS else 0
    if label.startswith("cycle:"):
        try:
            ids = [int(t) for t in label[len("cycle:"):].split(".")]
        except ValueError:
            return None
        mask = 0
        for e in ids:
            if not 0 <= e < E:
                return None
            mask |= 1 << e
        if len(set(ids)) != len(ids) or not is_good_cycle_mask(G, mask):
            return None
        return "<=", [(e in ids) - (e in c1) for e in range(E)], 0
    return None


def check_farkas(G: ConfigurationGraph, multipliers) -> bool:
    """Sum the labelled rows with their multipliers and look for ``0 >= positive``."""
    E = len(G.edges)
    combo = [Fraction(0)] * E
    const = Fraction(0)
    for label, y in multipliers:
        y = Fraction(y)
        row = _row(G, label)
        if row is None:
            return False
        sense, coeffs, rhs = row
        if sense != "=" and y < 0:
            return False
        s = -y if sense == "<=" else y
        for e, a in enumerate(coeffs):
            combo[e] += s * a
        const += s * rhs
    return all(c == 0 for c in combo) and const > 0


@dataclass
class AuditResult:
    pathcheck_total: int = 0
    pathcheck_ok: int = 0
    farkas_total: int = 0
    farkas_ok: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.pathcheck_ok == self.pathcheck_total and self.farkas_ok == self.farkas_total


def audit_report(report, result: AuditResult | None = None) -> AuditResult:
    result = result or AuditResult()
    host = report.host
    for rec in report.pathcheck_records:
        G = build_configuration_graph(Configuration(host, rec.orders))
        result.pathcheck_total += 1
        if check_pair(G, rec.mask_a, rec.mask_b):
            result.pathcheck_ok += 1
        else:
            result.failures.append(("pathcheck", rec.orders))
    for rec in report.farkas_records:
        G = build_configuration_graph(Configuration(host, rec.orders))
        result.farkas_total += 1
        if check_farkas(G, rec.multipliers):
            result.farkas_ok += 1
        else:
            result.failures.append(("farkas", rec.orders))
    return result
