"""JSON documents for instances, witnesses, hosts, certificates and reports.

Canonical output is UTF-8 JSON with two-space indentation, LF line endings
and a trailing newline.  Rationals are strings ``"p/q"`` in lowest terms
(integers as ``"p"``).
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .certificates import WeightFunction
from .config_graph import Configuration, InvalidConfiguration, build_configuration_graph
from .lp import Feasible, Infeasible, LinearSystem
from .obg import BipartiteGraph, InvalidGraph, OrderedBipartiteGraph
from .reduction import ExtractedInstance, HostCycle, HostInstance


class DocumentError(ValueError):
    """Malformed document; ``line``/``column`` locate the problem when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}" + (f", column {column}" if column else "") + ": " if line else ""
        super().__init__(where + message)


_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def render_rational(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_rational(s: Any) -> Fraction:
    if isinstance(s, int) and not isinstance(s, bool):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"rational must be a string 'p/q', got {s!r}")
    m = _RATIONAL.match(s.strip())
    if not m:
        raise ValueError(f"not a rational: {s!r}")
    p = int(m.group(1))
    q = int(m.group(2)) if m.group(2) else 1
    if q == 0:
        raise ValueError(f"zero denominator in {s!r}")
    v = Fraction(p, q)
    if m.group(2) and (v.numerator != p or v.denominator != q):
        raise ValueError(f"{s!r} is not in lowest terms")
    return v


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object", 1, 1)
    return doc


def read(path: str) -> tuple[dict, str]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return loads(text), text


def write(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(doc))


def locate(text: str | None, needle: str) -> int | None:
    """Line of the first occurrence of ``needle`` as a JSON string, for diagnostics."""
    if not text:
        return None
    token = json.dumps(needle)
    for n, line in enumerate(text.splitlines(), 1):
        if token in line:
            return n
    return None


def _fail(message: str, text: str | None, needle: str | None = None):
    raise DocumentError(message, locate(text, needle) if needle else None)


def _labels(value, what: str, text) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        _fail(f"{what} must be an array of strings", text, what)
    return value


# -- instances -------------------------------------------------------------


def instance_to_doc(g: OrderedBipartiteGraph, config: Configuration | None = None,
                    weights: WeightFunction | None = None) -> dict:
    rank = g.rank
    edges = sorted(g.base.edges, key=lambda e: (rank[e[0]], rank[e[1]]))
    doc: dict[str, Any] = {"parts": [list(g.order_x), list(g.order_y)], "edges": [list(e) for e in edges]}
    if config is not None:
        doc["tau"] = {v: list(config.order(v)) for v in g.base.vertices}
        if weights is not None:
            G = build_configuration_graph(config)
            doc["weights"] = {G.edge_key(e): render_rational(weights[e]) for e in range(len(G.edges))}
    return doc


def doc_to_instance(doc: dict, text: str | None = None):
    """``(ordered graph, configuration or None, weights or None)``."""
    for key in doc:
        if key not in ("parts", "edges", "tau", "weights"):
            _fail(f"unknown key {key!r}", text, key)
    parts = doc.get("parts")
    if not isinstance(parts, list) or len(parts) != 2:
        _fail("'parts' must be an array of two label arrays", text, "parts")
    X = _labels(parts[0], "parts", text)
    Y = _labels(parts[1], "parts", text)
    raw = doc.get("edges")
    if not isinstance(raw, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(v, str) for v in e) for e in raw
    ):
        _fail("'edges' must be an array of label pairs", text, "edges")
    try:
        H = BipartiteGraph(tuple(X), tuple(Y), tuple(tuple(e) for e in raw))
        g = OrderedBipartiteGraph(H, tuple(X), tuple(Y))
    except (InvalidGraph, ValueError) as exc:
        _fail(str(exc), text, "edges")
    config = weights = None
    if "tau" in doc:
        tau = doc["tau"]
        if not isinstance(tau, dict) or not all(isinstance(v, list) for v in tau.values()):
            _fail("'tau' must map vertices to neighbour arrays", text, "tau")
        try:
            config = Configuration.from_mapping(g, tau)
        except (InvalidConfiguration, ValueError, TypeError) as exc:
            _fail(str(exc), text, "tau")
        if config.edges != frozenset(H.edges):
            _fail("'tau' must order the full neighbourhood of every vertex", text, "tau")
    if "weights" in doc:
        if config is None:
            _fail("'weights' requires 'tau'", text, "weights")
        raw_w = doc["weights"]
        if not isinstance(raw_w, dict):
            _fail("'weights' must be an object", text, "weights")
        G = build_configuration_graph(config)
        ids = G.edge_ids_by_key
        unknown = sorted(set(raw_w) - set(ids))
        if unknown:
            _fail(f"unknown edge key {unknown[0]!r}", text, unknown[0])
        missing = sorted(set(ids) - set(raw_w))
        if missing:
            _fail(f"missing weight for {missing[0]!r}", text, "weights")
        values = [None] * len(ids)
        for k, s in raw_w.items():
            try:
                values[ids[k]] = parse_rational(s)
            except ValueError as exc:
                _fail(str(exc), text, k)
        weights = WeightFunction(values)
    return g, config, weights


# -- hosts -----------------------------------------------------------------


def host_to_doc(inst: HostInstance) -> dict:
    def cyc(c: HostCycle) -> dict:
        return {"vertices": list(c.vertices), "start": c.start, "forward": c.forward}

    return {
        "vertices": list(inst.vertices),
        "edges": [list(e) for e in inst.edges],
        "c1": cyc(inst.c1),
        "c2": cyc(inst.c2),
        "paths": [list(p) for p in inst.paths],
    }


def doc_to_host(doc: dict, text: str | None = None) -> HostInstance:
    for key in ("vertices", "edges", "c1", "c2", "paths"):
        if key not in doc:
            _fail(f"missing key {key!r}", text)
    vertices = _labels(doc["vertices"], "vertices", text)
    edges = doc["edges"]
    if not isinstance(edges, list) or not all(isinstance(e, list) and len(e) == 2 for e in edges):
        _fail("'edges' must be an array of vertex pairs", text, "edges")

    def cyc(name) -> HostCycle:
        c = doc[name]
        if not isinstance(c, dict) or "vertices" not in c:
            _fail(f"{name!r} must be an object with 'vertices'", text, name)
        start = c.get("start")
        if start is not None and not isinstance(start, str):
            _fail(f"{name!r}.start must be a vertex label", text, name)
        forward = c.get("forward", True)
        if not isinstance(forward, bool):
            _fail(f"{name!r}.forward must be true or false", text, name)
        return HostCycle(tuple(_labels(c["vertices"], name, text)), start, forward)

    paths = doc["paths"]
    if not isinstance(paths, list):
        _fail("'paths' must be an array of vertex arrays", text, "paths")
    return HostInstance(
        tuple(vertices),
        tuple(tuple(e) for e in edges),
        cyc("c1"),
        cyc("c2"),
        tuple(tuple(_labels(p, "paths", text)) for p in paths),
    )


def extracted_to_doc(ext: ExtractedInstance) -> dict:
    return instance_to_doc(ext.host, ext.config, ext.weights)


# -- certificates ----------------------------------------------------------


def verdict_to_doc(sys: LinearSystem, verdict) -> dict:
    if isinstance(verdict, Feasible):
        return {"verdict": "feasible", "point": {n: render_rational(v) for n, v in zip(sys.names, verdict.point)}}
    rows = sys.rows()
    return {
        "verdict": "infeasible",
        "multipliers": {r.label: render_rational(y) for r, y in zip(rows, verdict.farkas) if y},
    }


def doc_to_verdict(sys: LinearSystem, doc: dict):
    kind = doc.get("verdict")
    if kind == "feasible":
        point = doc.get("point", {})
        if set(point) != set(sys.names):
            raise DocumentError("point must assign every variable")
        return Feasible(tuple(parse_rational(point[n]) for n in sys.names))
    if kind == "infeasible":
        mult = doc.get("multipliers", {})
        rows = sys.rows()
        labels = [r.label for r in rows]
        unknown = set(mult) - set(labels)
        if unknown:
            raise DocumentError(f"unknown row {sorted(unknown)[0]!r}")
        return Infeasible(tuple(parse_rational(mult[r]) if r in mult else Fraction(0) for r in labels))
    raise DocumentError("verdict must be 'feasible' or 'infeasible'")
