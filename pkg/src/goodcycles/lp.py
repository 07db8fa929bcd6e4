"""Exact feasibility of the weight system of a configuration graph.

A system is a set of lower bounds ``w_e >= l_e`` plus linear rows.  Every row
is read in the normalized form ``s·(a·w - b) >= 0`` with ``s = -1`` for ``<=``
rows and ``s = +1`` otherwise.  A Farkas certificate assigns a multiplier
``y_r`` to each row (bounds first), nonnegative except on equalities, with

    sum_r y_r s_r a_r == 0      and      sum_r y_r s_r b_r > 0,

which adds the rows up to the contradiction ``0 >= positive``.

Both verdicts come out of one exact phase-one simplex (Bland's rule) on the
certificate system itself: it has only ``n + 1`` equality rows, and when it is
infeasible its phase-one duals rescale to a feasible weight vector.  A
floating-point solve may pick a candidate support first; whatever it suggests
is re-derived exactly before being returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .config_graph import ConfigurationGraph, Cycle, EdgeKind

log = logging.getLogger(__name__)

SENSES = (">=", "<=", "=")


@dataclass(frozen=True)
class Row:
    coeffs: tuple[int, ...]
    sense: str
    rhs: int = 0
    label: str = ""

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"unknown sense {self.sense!r}")

    @property
    def sign(self) -> int:
        return -1 if self.sense == "<=" else 1


@dataclass(frozen=True)
class LinearSystem:
    names: tuple[str, ...]
    lower: tuple[int, ...]
    constraints: tuple[Row, ...]

    def __post_init__(self):
        n = len(self.names)
        if len(self.lower) != n:
            raise ValueError("one lower bound per variable")
        for r in self.constraints:
            if len(r.coeffs) != n:
                raise ValueError(f"row {r.label!r} has {len(r.coeffs)} coefficients, expected {n}")

    @property
    def n(self) -> int:
        return len(self.names)

    def rows(self) -> list[Row]:
        """Bound rows (one per variable) followed by the constraints."""
        n = self.n
        bounds = [
            Row(tuple(1 if k == j else 0 for k in range(n)), ">=", self.lower[j], f"bound:{self.names[j]}")
            for j in range(n)
        ]
        return bounds + list(self.constraints)


@dataclass(frozen=True)
class Feasible:
    point: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple[Fraction, ...]


Verdict = Union[Feasible, Infeasible]


def build_lp(G: ConfigurationGraph, good: Sequence[Cycle]) -> LinearSystem:
    """One variable per edge, equal main-cycle totals, and ``w(C) <= w(C1)`` per good cycle."""
    E = len(G.edges)
    names = tuple(G.edge_key(e) for e in range(E))
    lower = tuple(1 if G.kinds[e] is EdgeKind.CROSS else 0 for e in range(E))
    c1 = set(G.c1_edges)
    c2 = set(G.c2_edges)
    eq = tuple((e in c1) - (e in c2) for e in range(E))
    rows = [Row(eq, "=", 0, "C1=C2")]
    for c in good:
        inside = set(c.edges)
        coeffs = tuple((e in inside) - (e in c1) for e in range(E))
        rows.append(Row(coeffs, "<=", 0, "cycle:" + ".".join(map(str, c.edges))))
    return LinearSystem(names, lower, tuple(rows))


# -- exact phase one -------------------------------------------------------


def phase_one(A: list[list[Fraction]], b: list[Fraction]) -> tuple[bool, list[Fraction]]:
    """Find ``x >= 0`` with ``A x = b``, or ``y`` with ``y A <= 0`` and ``y b > 0``.

    Dense tableau, artificial start basis, Bland's rule for both entering and
    leaving choices, so it terminates on degenerate problems.
    """
    m = len(A)
    N = len(A[0]) if m else 0
    signs = [1 if bi >= 0 else -1 for bi in b]
    T = []
    for i in range(m):
        s = signs[i]
        row = [Fraction(s * v) for v in A[i]]
        row += [Fraction(1) if k == i else Fraction(0) for k in range(m)]
        row.append(Fraction(s * b[i]))
        T.append(row)
    width = N + m
    obj = [Fraction(0)] * (width + 1)
    for row in T:
        for j in range(N):
            if row[j]:
                obj[j] -= row[j]
        obj[width] -= row[width]
    basis = [N + i for i in range(m)]

    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # cannot happen: phase one is bounded below by zero
            raise ArithmeticError("unbounded phase-one problem")
        _pivot(T, obj, basis, leave, enter)

    if obj[width] == 0:
        x = [Fraction(0)] * N
        for i, j in enumerate(basis):
            if j < N:
                x[j] = T[i][width]
        return True, x
    y = [(1 - obj[N + i]) * signs[i] for i in range(m)]
    return False, y


def _pivot(T, obj, basis, r, c):
    row = T[r]
    p = row[c]
    if p != 1:
        row[:] = [v / p if v else v for v in row]
    nz = [j for j, v in enumerate(row) if v]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
    f = obj[c]
    if f:
        for j in nz:
            obj[j] -= f * row[j]
    basis[r] = c


# -- solving ---------------------------------------------------------------


def _certificate_columns(rows: list[Row]) -> list[tuple[int, int]]:
    """Columns of the certificate system: ``(row index, multiplier sign)``."""
    cols = []
    for r, row in enumerate(rows):
        if row.sense == "=":
            cols.append((r, 1))
            cols.append((r, -1))
        else:
            cols.append((r, 1))
    return cols


def _column_vector(row: Row, mult: int) -> list[int]:
    s = row.sign * mult
    return [s * a for a in row.coeffs] + [s * row.rhs]


def _exact_on_columns(sys: LinearSystem, rows: list[Row], cols: list[tuple[int, int]]) -> Verdict | None:
    """Exact phase one on the certificate system restricted to ``cols``.

    Returns ``Infeasible`` when the restricted system has a solution; a
    ``Feasible`` point only comes out when ``cols`` is the full column set.
    """
    n = sys.n
    vectors = [_column_vector(rows[r], mult) for r, mult in cols]
    A = [[Fraction(v[k]) for v in vectors] for k in range(n + 1)]
    b = [Fraction(0)] * n + [Fraction(1)]
    ok, sol = phase_one(A, b)
    if ok:
        y = [Fraction(0)] * len(rows)
        for (r, mult), lam in zip(cols, sol):
            y[r] += mult * lam
        return Infeasible(tuple(y))
    if len(cols) < len(_certificate_columns(rows)):
        return None
    v, t = sol[:n], sol[n]
    return Feasible(tuple(-vi / t for vi in v))


def _float_support(rows: list[Row], cols: list[tuple[int, int]], n: int) -> list[int] | None:
    """Columns used by a floating-point basic solution of the certificate system, if any."""
    from scipy.optimize import linprog

    M = np.array([_column_vector(rows[r], mult) for r, mult in cols], dtype=float).T
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    res = linprog(np.zeros(M.shape[1]), A_eq=M, b_eq=rhs, bounds=(0, None), method="highs-ds")
    if res.status != 0:
        return None
    return [j for j, v in enumerate(res.x) if v > 1e-9]


def _float_point(sys: LinearSystem, rows: list[Row]) -> np.ndarray | None:
    from scipy.optimize import linprog

    ub, ub_rhs, eq, eq_rhs = [], [], [], []
    for row in sys.constraints:
        if row.sense == "=":
            eq.append(row.coeffs)
            eq_rhs.append(row.rhs)
        else:
            s = -row.sign  # to <= form
            ub.append([s * a for a in row.coeffs])
            ub_rhs.append(s * row.rhs)
    res = linprog(
        np.zeros(sys.n),
        A_ub=np.array(ub, float) if ub else None,
        b_ub=np.array(ub_rhs, float) if ub else None,
        A_eq=np.array(eq, float) if eq else None,
        b_eq=np.array(eq_rhs, float) if eq else None,
        bounds=[(lo, None) for lo in sys.lower],
        method="highs-ds",
    )
    return res.x if res.status == 0 else None


def _vertex_from_float(sys: LinearSystem, rows: list[Row], x: np.ndarray) -> Feasible | None:
    """Solve exactly for the vertex whose tight rows the float point ``x`` sits on."""
    n = sys.n
    slack = []
    for r, row in enumerate(rows):
        val = row.sign * (float(np.dot(row.coeffs, x)) - row.rhs)
        slack.append((abs(val) if row.sense == "=" else val, r))
    slack.sort()
    pivots: list[list[Fraction]] = []  # reduced rows [coeffs..., rhs]
    lead: list[int] = []
    chosen = 0
    for val, r in slack:
        if val > 1e-7:
            break
        vec = [Fraction(a) for a in rows[r].coeffs] + [Fraction(rows[r].rhs)]
        for p, k in zip(pivots, lead):
            f = vec[k]
            if f:
                vec = [a - f * q for a, q in zip(vec, p)]
        k = next((j for j in range(n) if vec[j]), None)
        if k is None:
            continue
        piv = vec[k]
        vec = [a / piv for a in vec]
        for idx, p in enumerate(pivots):
            f = p[k]
            if f:
                pivots[idx] = [a - f * q for a, q in zip(p, vec)]
        pivots.append(vec)
        lead.append(k)
        chosen += 1
        if chosen == n:
            break
    if chosen < n:
        return None
    point = [Fraction(0)] * n
    for p, k in zip(pivots, lead):
        point[k] = p[n]
    cand = Feasible(tuple(point))
    return cand if verify_verdict(sys, cand) else None


def decide_feasibility(sys: LinearSystem, prescreen: bool = True) -> Verdict:
    """Exact verdict with certificate.

    With ``prescreen`` a floating-point solve proposes either a certificate
    support (re-solved exactly on those columns) or a vertex (re-solved from
    its tight rows).  If that exact re-derivation fails, or the prescreen is
    off, the full exact simplex decides.
    """
    rows = sys.rows()
    cols = _certificate_columns(rows)
    hint = None
    if prescreen:
        try:
            support = _float_support(rows, cols, sys.n)
            if support is not None:
                hint = "infeasible"
                verdict = _exact_on_columns(sys, rows, [cols[j] for j in support])
                if verdict is not None and verify_verdict(sys, verdict):
                    return verdict
            else:
                hint = "feasible"
                x = _float_point(sys, rows)
                if x is not None:
                    verdict = _vertex_from_float(sys, rows, x)
                    if verdict is not None:
                        return verdict
        except (ValueError, ArithmeticError) as exc:  # prescreen is advisory only
            log.warning("float prescreen failed: %s", exc)
    verdict = _exact_on_columns(sys, rows, cols)
    if hint is not None and hint != ("feasible" if isinstance(verdict, Feasible) else "infeasible"):
        log.warning("float prescreen said %s, exact simplex disagrees", hint)
    return verdict


# -- independent checking --------------------------------------------------


def _residual(row: Row, point: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for a, x in zip(row.coeffs, point):
        if a:
            total += a * x
    return total - row.rhs


def verify_verdict(sys: LinearSystem, verdict) -> bool:
    """Check a verdict against the system using nothing but exact row arithmetic."""
    rows = sys.rows()
    if isinstance(verdict, Feasible):
        p = verdict.point
        if len(p) != sys.n or not all(isinstance(v, (int, Fraction)) for v in p):
            return False
        for row in rows:
            d = _residual(row, p)
            if row.sense == ">=" and d < 0:
                return False
            if row.sense == "<=" and d > 0:
                return False
            if row.sense == "=" and d != 0:
                return False
        return True
    if isinstance(verdict, Infeasible):
        y = verdict.farkas
        if len(y) != len(rows) or not all(isinstance(v, (int, Fraction)) for v in y):
            return False
        combo = [Fraction(0)] * sys.n
        const = Fraction(0)
        for yr, row in zip(y, rows):
            if row.sense != "=" and yr < 0:
                return False
            if not yr:
                continue
            s = row.sign * yr
            for j, a in enumerate(row.coeffs):
                if a:
                    combo[j] += s * a
            const += s * row.rhs
        return all(c == 0 for c in combo) and const > 0
    return False
