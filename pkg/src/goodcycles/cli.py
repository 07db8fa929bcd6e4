"""Command-line interface.

Exit status: 0 certified or valid, 1 a mathematical negative (survivors, a
long good cycle, a duplicate component pair), 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Sequence

from . import documents as docs
from .audit import AuditResult, audit_report
from .certificates import InvalidWeights, has_long_good_cycle
from .config_graph import build_configuration_graph, enumerate_good_cycles
from .obg import builtin_graph, equivalence_classes
from .reduction import DuplicateComponentPair, InvalidHost, extract_instance
from .search import (
    EdgeOrder,
    InvalidOrder,
    SearchReport,
    default_edge_order,
    degree_order,
    find_witness,
    run_search,
    NoDefault,
)

THREADS_ENV = "GOODCYCLES_THREADS"
FAMILIES = {"k33": "K33", "q3plus": "Q3PLUS", "q3": "Q3"}

log = logging.getLogger("goodcycles")


class UsageError(Exception):
    pass


def _threads(flag: int | None) -> int:
    if flag is not None:
        n = flag
    else:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            n = int(raw)
        except ValueError:
            raise UsageError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise UsageError("thread count must be at least 1")
    return n


def _read(path: str):
    try:
        return docs.read(path)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except docs.DocumentError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _hosts(args) -> list:
    """Ordered graphs to process: all class representatives of a family, or the instance's own ordering."""
    if args.instance:
        doc, text = _read(args.instance)
        try:
            g, _, _ = docs.doc_to_instance(doc, text)
        except docs.DocumentError as exc:
            raise UsageError(f"{args.instance}: {exc}") from None
        reps = [g]
    elif args.family:
        reps = equivalence_classes(builtin_graph(FAMILIES[args.family]))
    else:
        raise UsageError("give --family or --instance")
    if getattr(args, "class_index", None) is not None:
        if not 1 <= args.class_index <= len(reps):
            raise UsageError(f"class index must be between 1 and {len(reps)}")
        reps = [reps[args.class_index - 1]]
    return reps


def _edge_order(args, g) -> EdgeOrder:
    if getattr(args, "edge_order", None):
        doc, text = _read(args.edge_order)
        edges = doc.get("edges")
        if not isinstance(edges, list) or not all(isinstance(e, list) and len(e) == 2 for e in edges):
            raise UsageError(f"{args.edge_order}: 'edges' must be an array of label pairs")
        try:
            return EdgeOrder(tuple(tuple(e) for e in edges)).validate(g.base)
        except InvalidOrder as exc:
            raise UsageError(f"{args.edge_order}: {exc}") from None
    try:
        return default_edge_order(g)
    except NoDefault:
        return degree_order(g)


def render_table(report: SearchReport, title: str) -> str:
    rows = [(str(i), "{" + ",".join(s.edge) + "}", str(s.generated), str(s.survived)) for i, s in enumerate(report.steps, 1)]
    head = ("i", "e_i", "|R_i|", "|S_i|")
    widths = [max(len(r[k]) for r in rows + [head]) for k in range(4)]

    def line(r):
        return " | ".join(c.rjust(w) if k != 1 else c.ljust(w) for k, (c, w) in enumerate(zip(r, widths)))

    out = [title, line(head), "-+-".join("-" * w for w in widths)]
    out += [line(r) for r in rows]
    out.append(" | ".join([" " * widths[0], " " * widths[1], "|S|".rjust(widths[2]), str(report.final).rjust(widths[3])]))
    return "\n".join(out)


def report_to_doc(report: SearchReport, label: str, timings: bool = False) -> dict:
    g = report.host
    doc = {
        "class": label,
        "order_x": list(g.order_x),
        "order_y": list(g.order_y),
        "steps": [
            {"i": i, "edge": list(s.edge), "R": s.generated, "S": s.survived}
            for i, s in enumerate(report.steps, 1)
        ],
        "lp_checked": report.lp_checked,
        "final": report.final,
        "certificates": {"pathcheck": len(report.pathcheck_records), "farkas": len(report.farkas_records)},
        "survivors": [{"tau": {v: list(o) for v, o in zip(g.base.vertices, orders)}} for orders, _ in report.survivors],
        "workers": report.workers,
    }
    if timings:
        doc["duration_seconds"] = round(report.duration, 3)
    return doc


def cmd_verify(args) -> int:
    workers = _threads(args.threads)
    reps = _hosts(args)
    name = args.family or args.instance
    machine = {"family": name, "classes": []}
    audit = AuditResult()
    all_clear = True
    for k, g in enumerate(reps, 1):
        order = _edge_order(args, g)
        report = run_search(g, order, workers)
        all_clear &= report.final == 0
        label = f"{k}/{len(reps)}"
        if args.report == "table":
            title = f"{name} class {label}: sigma_X = ({', '.join(g.order_x)}), sigma_Y = ({', '.join(g.order_y)})"
            print(render_table(report, title))
            print(f"({report.lp_checked} LP checks, {report.duration:.1f} s, {report.workers} worker(s))")
            print()
        machine["classes"].append(report_to_doc(report, label, args.timings))
        if args.audit:
            audit_report(report, audit)
    if args.audit:
        machine["audit"] = {
            "pathcheck": [audit.pathcheck_ok, audit.pathcheck_total],
            "farkas": [audit.farkas_ok, audit.farkas_total],
        }
        if args.report == "table":
            print(f"audit: pathcheck {audit.pathcheck_ok}/{audit.pathcheck_total}, farkas {audit.farkas_ok}/{audit.farkas_total}")
    if args.report == "machine":
        sys.stdout.write(docs.dumps(machine))
    if args.audit and not audit.passed:
        return 1
    return 0 if all_clear else 1


def cmd_classes(args) -> int:
    reps = equivalence_classes(builtin_graph(FAMILIES[args.family]))
    if args.report == "machine":
        sys.stdout.write(docs.dumps({"family": args.family, "classes": [
            {"order_x": list(g.order_x), "order_y": list(g.order_y)} for g in reps]}))
    else:
        print(f"{args.family}: {len(reps)} class(es)")
        for k, g in enumerate(reps, 1):
            print(f"  {k}: sigma_X = ({', '.join(g.order_x)}), sigma_Y = ({', '.join(g.order_y)})")
    return 0


def cmd_witness(args) -> int:
    workers = _threads(args.threads)
    for g in _hosts(args):
        w = find_witness(g, _edge_order(args, g), workers)
        if w is not None:
            doc = docs.instance_to_doc(g, w.config, w.weights)
            if args.out:
                docs.write(args.out, doc)
                print(f"witness written to {args.out}")
            else:
                sys.stdout.write(docs.dumps(doc))
            return 0
    print("no witness: every configuration was certified", file=sys.stderr)
    return 1


def cmd_check(args) -> int:
    doc, text = _read(args.file)
    try:
        g, config, weights = docs.doc_to_instance(doc, text)
    except docs.DocumentError as exc:
        raise UsageError(f"{args.file}: {exc}") from None
    if weights is None:
        raise UsageError(f"{args.file}: document has no 'weights'")
    G = build_configuration_graph(config)
    try:
        cycle = has_long_good_cycle(G, weights, enumerate_good_cycles(G))
    except InvalidWeights as exc:
        raise UsageError(f"{args.file}: {exc}") from None
    total = weights.total(G.c1_edges)
    if cycle is None:
        print(f"valid: no long good cycle (main cycles weigh {docs.render_rational(total)})")
        return 0
    keys = [G.edge_key(e) for e in cycle.edges]
    print(f"long good cycle of weight {docs.render_rational(weights.total(cycle.edges))} > {docs.render_rational(total)}:")
    print("  " + " ".join(keys))
    return 1


def cmd_reduce(args) -> int:
    doc, text = _read(args.host)
    try:
        inst = docs.doc_to_host(doc, text)
        ext = extract_instance(inst)
    except docs.DocumentError as exc:
        raise UsageError(f"{args.host}: {exc}") from None
    except DuplicateComponentPair as exc:
        print(str(exc))
        for k, c in enumerate(exc.rerouted, 1):
            print(f"  rerouted cycle {k} (length {len(c)}): {' '.join(c)}")
        return 1
    except InvalidHost as exc:
        raise UsageError(f"{args.host}: {type(exc).__name__}: {exc}") from None
    out = docs.extracted_to_doc(ext)
    if args.out:
        docs.write(args.out, out)
    else:
        sys.stdout.write(docs.dumps(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="goodcycles", description="Certified search for long good cycles in configuration graphs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp, with_class=True):
        grp = sp.add_mutually_exclusive_group(required=True)
        grp.add_argument("--family", choices=sorted(FAMILIES))
        grp.add_argument("--instance", metavar="FILE", help="instance document; its part orders are used as sigma")
        if with_class:
            sp.add_argument("--class-index", type=int, metavar="N", help="only the N-th class (1-based)")
        sp.add_argument("--edge-order", metavar="FILE", help='document {"edges": [[x, y], ...]}')
        sp.add_argument("--threads", type=int, help=f"worker processes (default ${THREADS_ENV} or 1)")

    v = sub.add_parser("verify", help="run the staged search for every class")
    source(v)
    v.add_argument("--report", choices=("table", "machine"), default="table")
    v.add_argument("--audit", action="store_true", help="re-check every certificate independently")
    v.add_argument("--timings", action="store_true", help="add wall-clock durations to the machine report")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classes", help="list equivalence-class representatives")
    c.add_argument("--family", choices=sorted(FAMILIES), required=True)
    c.add_argument("--report", choices=("table", "machine"), default="table")
    c.set_defaults(func=cmd_classes)

    w = sub.add_parser("witness", help="find a weighted configuration without long good cycles")
    source(w)
    w.add_argument("--out", metavar="FILE")
    w.set_defaults(func=cmd_witness)

    k = sub.add_parser("check", help="check a weighted instance for long good cycles")
    k.add_argument("file")
    k.set_defaults(func=cmd_check)

    r = sub.add_parser("reduce", help="extract a weighted configuration from a host instance")
    r.add_argument("host")
    r.add_argument("--out", metavar="FILE")
    r.set_defaults(func=cmd_reduce)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
