"""Discrepancies of surface pairs from the dual graph of a resolution.

Vertices are exceptional rational curves ``E_j`` with ``E_j^2 = -b_j``; edges
are transversal intersections; ``boundary[j]`` counts the branches of the
strict transform of the boundary meeting ``E_j``.  Intersecting
``K_X + D~ = f^*(K_Y + D) + sum a_i E_i`` with ``E_j`` kills the pullback and,
by adjunction on ``P^1``, leaves the linear system

    sum_i a_i (E_i . E_j) = (b_j - 2) + boundary[j].
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import InvalidInput
from .linalg import bareiss_solve, leading_principal_minors


class LCClass(str, Enum):
    KLT = "KLT"
    PLT = "PLT"
    LC = "LC"
    NOT_LC = "NotLC"


class GraphType(str, Enum):
    A = "a"
    B = "b"
    C = "c"
    OTHER = "other"


class FClass(str, Enum):
    DIV_F_REGULAR = "divisorially F-regular"
    F_PURE_NOT_DFR = "F-pure, not divisorially F-regular"
    NOT_F_PURE = "not F-pure"


@dataclass
class DualGraph:
    b: list
    edges: list = field(default_factory=list)
    boundary: list | None = None

    def __post_init__(self):
        n = len(self.b)
        if n == 0:
            raise InvalidInput("dual graph needs at least one vertex")
        self.b = [int(v) for v in self.b]
        if any(v < 1 for v in self.b):
            raise InvalidInput("self-intersections must be -b with b a positive integer")
        if self.boundary is None:
            self.boundary = [0] * n
        self.boundary = [int(v) for v in self.boundary]
        if len(self.boundary) != n or any(v < 0 for v in self.boundary):
            raise InvalidInput("boundary marks must be one nonnegative integer per vertex")
        seen = set()
        clean = []
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise InvalidInput("self-loops are not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidInput(f"edge {e} refers to a missing vertex")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InvalidInput("multiple intersections are not supported")
            seen.add(key)
            clean.append(key)
        self.edges = clean
        if not self._connected():
            raise InvalidInput("dual graph is not connected")
        if not self.is_negative_definite():
            raise InvalidInput("intersection matrix is not negative definite")

    @classmethod
    def from_json(cls, data) -> "DualGraph":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            verts = data["vertices"]
            b = [v["b"] for v in verts]
        except (KeyError, TypeError):
            raise InvalidInput("graph JSON needs vertices: [{\"b\": ...}, ...]") from None
        for v in verts:
            if v.get("genus", 0) != 0:
                raise InvalidInput("only rational (genus 0) exceptional curves are supported")
        return cls(b, data.get("edges", []), data.get("boundary"))

    def to_json(self) -> dict:
        return {"vertices": [{"b": v} for v in self.b], "edges": [list(e) for e in self.edges],
                "boundary": list(self.boundary)}

    @property
    def n(self) -> int:
        return len(self.b)

    def neighbors(self) -> list:
        adj = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def _connected(self) -> bool:
        adj = self.neighbors()
        seen = {0}
        todo = deque([0])
        while todo:
            for j in adj[todo.popleft()]:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return len(seen) == self.n

    def intersection_matrix(self) -> list:
        m = [[0] * self.n for _ in range(self.n)]
        for i, v in enumerate(self.b):
            m[i][i] = -v
        for i, j in self.edges:
            m[i][j] = m[j][i] = 1
        return m

    def is_negative_definite(self) -> bool:
        minors = leading_principal_minors(self.intersection_matrix())
        return all((-1) ** (k + 1) * m > 0 for k, m in enumerate(minors))

    def rhs(self) -> list:
        return [(b - 2) + t for b, t in zip(self.b, self.boundary)]


@dataclass
class DiscrepancyVector:
    a: list
    lc_class: LCClass

    @property
    def min(self) -> Fraction:
        return min(self.a)


def classify_lc(a, boundary) -> LCClass:
    lo = min(a)
    if lo < -1:
        return LCClass.NOT_LC
    if lo == -1:
        return LCClass.LC
    return LCClass.PLT if any(boundary) else LCClass.KLT


def solve_discrepancies(graph: DualGraph) -> DiscrepancyVector:
    a = bareiss_solve(graph.intersection_matrix(), graph.rhs())
    return DiscrepancyVector(a, classify_lc(a, graph.boundary))


def residual(graph: DualGraph, a) -> list:
    m = graph.intersection_matrix()
    return [sum(m[i][j] * a[j] for j in range(graph.n)) - r for i, r in enumerate(graph.rhs())]


# ---------------------------------------------------------------------------
# Graph shapes


def _path_order(graph: DualGraph, vertices=None):
    """Vertices of an induced path in order, or None if they do not form one."""
    vs = set(range(graph.n)) if vertices is None else set(vertices)
    adj = {v: [u for u in graph.neighbors()[v] if u in vs] for v in vs}
    if any(len(nb) > 2 for nb in adj.values()):
        return None
    if sum(len(nb) for nb in adj.values()) != 2 * (len(vs) - 1):
        return None
    ends = [v for v in vs if len(adj[v]) <= 1]
    start = min(ends)
    order, prev = [start], None
    while len(order) < len(vs):
        nxt = [u for u in adj[order[-1]] if u != prev]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order


def classify_graph_type(graph: DualGraph) -> GraphType:
    """Shape of the dual graph of ``E`` plus the boundary branches.

    (a) a chain with one boundary branch at an end; (b) a chain with a
    branch at each end; (c) a chain whose one end carries the branch and
    whose other end forks into two (-2)-curves.
    """
    marks = graph.boundary
    total = sum(marks)
    if total == 0:
        raise InvalidInput("graph type needs at least one boundary branch")
    chain = _path_order(graph)
    if chain is not None:
        ends = {chain[0], chain[-1]}
        if total == 1 and any(marks[v] == 1 for v in ends):
            return GraphType.A
        if total == 2:
            if graph.n == 1 or (marks[chain[0]] == 1 and marks[chain[-1]] == 1):
                return GraphType.B
    if total != 1:
        return GraphType.OTHER
    marked = marks.index(1)
    adj = graph.neighbors()
    for u in range(graph.n):
        leaves = [w for w in adj[u] if len(adj[w]) == 1 and graph.b[w] == 2 and w != marked]
        if len(leaves) < 2:
            continue
        for i in range(len(leaves)):
            for j in range(i + 1, len(leaves)):
                rest = [v for v in range(graph.n) if v not in (leaves[i], leaves[j])]
                path = _path_order(graph, rest)
                if path is None:
                    continue
                if {path[0], path[-1]} == {u, marked} or (len(path) == 1 and path[0] == u == marked):
                    return GraphType.C
    return GraphType.OTHER


def predict_fclass(graph: DualGraph, p: int) -> FClass:
    """Expected behaviour in characteristic ``p`` for a minimal resolution graph."""
    kind = classify_graph_type(graph)
    if kind is GraphType.A:
        return FClass.DIV_F_REGULAR
    if kind is GraphType.B:
        return FClass.F_PURE_NOT_DFR
    if kind is GraphType.C:
        return FClass.F_PURE_NOT_DFR if p != 2 else FClass.NOT_F_PURE
    return FClass.NOT_F_PURE


def graded_discrepancy(index: int, b: int) -> Fraction:
    """Discrepancy ``-1 - b/index`` of the exceptional divisor of a graded blow-up."""
    if index < 1:
        raise InvalidInput("index must be a positive integer")
    return Fraction(-1) - Fraction(b, index)


def chain(bs, boundary_at=()) -> DualGraph:
    """Chain ``E_0 - E_1 - ... `` with one boundary branch on each listed vertex."""
    n = len(bs)
    marks = [0] * n
    for v in boundary_at:
        marks[v] += 1
    return DualGraph(list(bs), [(i, i + 1) for i in range(n - 1)], marks)


def fork(bs) -> DualGraph:
    """Type (c) template: chain ``bs`` marked at vertex 0, two (-2)-leaves at the far end."""
    n = len(bs)
    edges = [(i, i + 1) for i in range(n - 1)] + [(n - 1, n), (n - 1, n + 1)]
    marks = [1] + [0] * (n + 1)
    return DualGraph(list(bs) + [2, 2], edges, marks)
