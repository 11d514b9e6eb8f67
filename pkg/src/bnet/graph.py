"""Immutable DAG with parent lookup and deterministic topological order."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CycleDetected, DuplicateEdge, InvalidNode

NodeId = int
Edge = tuple[NodeId, NodeId]


@dataclass(frozen=True)
class Dag:
    """A directed acyclic graph over nodes ``0..node_count-1``.

    ``parents[v]`` lists the sources of edges into ``v`` in edge insertion
    order. That order is also the axis order used for CPT rows.
    """

    node_count: int
    edges: tuple[Edge, ...]
    parents: tuple[tuple[NodeId, ...], ...]
    children: tuple[tuple[NodeId, ...], ...] = field(repr=False)
    order: tuple[NodeId, ...] = field(repr=False)

    def topological_sort(self) -> list[NodeId]:
        return list(self.order)

    def position(self) -> list[int]:
        """Position of each node in the topological order."""
        pos = [0] * self.node_count
        for i, v in enumerate(self.order):
            pos[v] = i
        return pos


def _kahn(node_count: int, children: Sequence[Sequence[NodeId]],
          indegree: list[int]) -> list[NodeId]:
    frontier = [v for v in range(node_count) if indegree[v] == 0]
    heapq.heapify(frontier)
    order = []
    while frontier:
        u = heapq.heappop(frontier)
        order.append(u)
        for c in children[u]:
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(frontier, c)
    return order


def build_dag(node_count: int, edges: Iterable[Edge]) -> Dag:
    """Build a :class:`Dag`, rejecting cycles, self-loops and duplicates."""
    if node_count < 0:
        raise InvalidNode(f"negative node count {node_count}")
    edges = tuple((int(u), int(v)) for u, v in edges)
    parents: list[list[NodeId]] = [[] for _ in range(node_count)]
    children: list[list[NodeId]] = [[] for _ in range(node_count)]
    seen = set()
    for u, v in edges:
        for end in (u, v):
            if not 0 <= end < node_count:
                raise InvalidNode(f"edge ({u}, {v}) has endpoint outside 0..{node_count - 1}")
        if (u, v) in seen:
            raise DuplicateEdge(f"edge ({u}, {v}) given twice")
        if u == v:
            raise CycleDetected(f"self-loop at node {u}")
        seen.add((u, v))
        parents[v].append(u)
        children[u].append(v)

    order = _kahn(node_count, children, [len(p) for p in parents])
    if len(order) != node_count:
        stuck = sorted(set(range(node_count)) - set(order))
        raise CycleDetected(f"directed cycle through nodes {stuck}")

    return Dag(
        node_count=node_count,
        edges=edges,
        parents=tuple(tuple(p) for p in parents),
        children=tuple(tuple(c) for c in children),
        order=tuple(order),
    )


def topological_sort(g: Dag) -> list[NodeId]:
    """Kahn's algorithm with a smallest-id-first frontier."""
    return g.topological_sort()
