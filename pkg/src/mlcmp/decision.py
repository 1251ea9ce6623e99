"""Zero-crossing decision by reduction to planarity.

The path plus one chord per line is drawn with its vertices in path order;
a crossing-free layout exists exactly when that graph can be drawn inside a
disk with the vertices on a segment. Gluing a copy of it onto each corner
of K4 turns that constraint into plain planarity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .model import Instance, InstanceError


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on vertices ``1..vertex_count``."""

    vertex_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for e in self.edges:
            if len(e) != 2:
                raise InstanceError(f"edge {sorted(e)} is a self-loop")
            if not all(1 <= v <= self.vertex_count for v in e):
                raise InstanceError(f"edge {sorted(e)} leaves the vertex range 1..{self.vertex_count}")

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs) -> "SimpleGraph":
        return cls(vertex_count, frozenset(frozenset(p) for p in pairs))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, self.vertex_count + 1))
        g.add_edges_from(self.sorted_edges())
        return g


K4 = SimpleGraph.from_pairs(4, combinations(range(1, 5), 2))


@dataclass(frozen=True)
class CicInstance:
    graph: SimpleGraph
    order: tuple[int, ...]  # order[v - 1] is the position of vertex v on the segment


def build_cic(inst: Instance) -> CicInstance:
    pairs = [(s, s + 1) for s in range(1, inst.n)]
    pairs += [(ln.i, ln.j) for ln in inst.lines]
    # a line [s, s+1] repeats a path edge; the frozenset drops it
    return CicInstance(SimpleGraph.from_pairs(inst.n, pairs), tuple(range(1, inst.n + 1)))


def build_planarity_instance(cic: CicInstance) -> SimpleGraph:
    """K4 with a copy of the CIC graph hanging from each of its corners.

    Copy ``c`` (``c = 1..4``) has its vertex 1 identified with corner ``c``;
    its vertex ``v > 1`` becomes ``4 + (c - 1)(n - 1) + (v - 1)``.
    """
    g = cic.graph
    n = g.vertex_count
    if n < 2 or not g.edges:
        raise InstanceError("the CIC graph is empty")
    first = cic.order.index(1) + 1

    def rename(c: int, v: int) -> int:
        if v == first:
            return c
        rank = cic.order[v - 1]
        return 4 + (c - 1) * (n - 1) + (rank - 1)

    pairs = [tuple(sorted(e)) for e in K4.edges]
    for c in range(1, 5):
        pairs += [(rename(c, u), rename(c, v)) for u, v in g.sorted_edges()]
    return SimpleGraph.from_pairs(4 + 4 * (n - 1), pairs)


def is_planar(g: SimpleGraph) -> bool:
    """Complete planarity test (left-right algorithm, via networkx)."""
    if g.vertex_count >= 3 and len(g.edges) > 3 * g.vertex_count - 6:
        return False
    planar, _ = nx.check_planarity(g.to_networkx())
    return planar


def decide_zero_crossing(inst: Instance) -> bool:
    return is_planar(build_planarity_instance(build_cic(inst)))
