"""Acyclic graph word problem over G(p, n).

Given a DAG with group-element edge labels, decide whether some directed
path from ``alpha`` to ``omega`` multiplies out to the identity.  Labels are
stored already evaluated; an empty-word label is the identity element.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .algebra import GroupElement, GroupParams, multiply
from .equations import DEFAULT_BUDGET, SolveReport, Status
from .errors import CycleDetected, DanglingVertex, ParamMismatch


class Edge(NamedTuple):
    src: int
    dst: int
    label: GroupElement
    tag: Optional[str] = None


@dataclass(frozen=True)
class AgwpInstance:
    params: GroupParams
    vertex_count: int
    edges: tuple[Edge, ...]
    alpha: int
    omega: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))
        for e in self.edges:
            if e.label.params != self.params:
                raise ParamMismatch(f"edge {e.src}->{e.dst} labeled outside the instance group")

    def path_label(self, path: Sequence[int]) -> GroupElement:
        acc = self.params.identity
        for k in path:
            acc = multiply(acc, self.edges[k].label)
        return acc

    def is_path(self, path: Sequence[int]) -> bool:
        at = self.alpha
        for k in path:
            if not 0 <= k < len(self.edges) or self.edges[k].src != at:
                return False
            at = self.edges[k].dst
        return at == self.omega


def validate_dag(i: AgwpInstance) -> list[int]:
    """Topological order (smallest ready vertex first)."""
    k = i.vertex_count
    for v in (i.alpha, i.omega):
        if not 0 <= v < k:
            raise DanglingVertex(f"marked vertex {v} outside 0..{k - 1}")
    indegree = [0] * k
    out = [[] for _ in range(k)]
    for e in i.edges:
        if not (0 <= e.src < k and 0 <= e.dst < k):
            raise DanglingVertex(f"edge {e.src}->{e.dst} leaves the vertex range 0..{k - 1}")
        indegree[e.dst] += 1
        out[e.src].append(e.dst)
    ready = [v for v in range(k) if indegree[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in out[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                heapq.heappush(ready, w)
    if len(order) != k:
        raise CycleDetected("the edge relation has a directed cycle")
    return order


def agwp_solve(i: AgwpInstance, budget: int = DEFAULT_BUDGET) -> SolveReport:
    """Dynamic programming over the topological order.

    ``reach[v]`` maps each product attainable on an alpha->v path to the
    (previous element, edge index) that first produced it.  The witness is a
    tuple of edge indices.  ``budget`` caps the number of stored
    (vertex, element) pairs.
    """
    order = validate_dag(i)
    identity = i.params.identity
    if i.alpha == i.omega:
        return SolveReport(Status.SOLVABLE, (), "agwp-dp", "alpha equals omega")
    outgoing = [[] for _ in range(i.vertex_count)]
    for idx, e in enumerate(i.edges):
        outgoing[e.src].append(idx)
    reach: list[Optional[dict]] = [None] * i.vertex_count
    reach[i.alpha] = {identity: None}
    stored = 1
    for v in order:
        here = reach[v]
        if not here:
            continue
        for idx in outgoing[v]:
            e = i.edges[idx]
            there = reach[e.dst]
            if there is None:
                there = reach[e.dst] = {}
            for g in here:
                h = multiply(g, e.label)
                if h not in there:
                    there[h] = (g, idx)
                    stored += 1
                    if stored > budget:
                        return SolveReport(
                            Status.UNKNOWN, method="agwp-dp", detail=f"more than {budget} stored pairs"
                        )
    target = reach[i.omega]
    if not target or identity not in target:
        return SolveReport(Status.UNSOLVABLE, method="agwp-dp")
    path = []
    v, g = i.omega, identity
    # only (alpha, identity) has no predecessor
    while (prev := reach[v][g]) is not None:
        g, idx = prev
        path.append(idx)
        v = i.edges[idx].src
    path.reverse()
    path = tuple(path)
    assert i.is_path(path) and i.path_label(path) == identity
    return SolveReport(Status.SOLVABLE, path, "agwp-dp")


def enumerate_paths(i: AgwpInstance, limit: int = DEFAULT_BUDGET):
    """Yield every alpha->omega path as a tuple of edge indices (oracle use)."""
    validate_dag(i)
    outgoing = [[] for _ in range(i.vertex_count)]
    for idx, e in enumerate(i.edges):
        outgoing[e.src].append(idx)
    count = 0
    stack = [(i.alpha, ())]
    while stack:
        v, path = stack.pop()
        if v == i.omega:
            count += 1
            if count > limit:
                raise RuntimeError("path enumeration limit reached")
            yield path
            continue
        for idx in reversed(outgoing[v]):
            stack.append((i.edges[idx].dst, path + (idx,)))
