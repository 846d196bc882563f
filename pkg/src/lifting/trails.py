"""
Partition of a multigraph's edges into trails between odd-degree vertices
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, List, Optional

import networkx as nx

from src.core.exceptions import MalformedInputError

logger = logging.getLogger(__name__)

_VIRTUAL = ("__virtual__",)


@dataclass
class Trail:
    nodes: List[Hashable]
    edges: List[tuple]
    closed: bool = False
    boundary_to_boundary: bool = False

    @property
    def endpoints(self):
        return self.nodes[0], self.nodes[-1]

    def __len__(self) -> int:
        return len(self.edges)


@dataclass
class TrailPartition:
    trails: List[Trail] = field(default_factory=list)
    closed: List[Trail] = field(default_factory=list)
    discarded: List[Trail] = field(default_factory=list)

    @property
    def edge_count(self) -> int:
        return sum(len(t) for t in self.trails + self.closed + self.discarded)


def _component_trails(graph: nx.MultiGraph, nodes) -> List[Trail]:
    sub = nx.MultiGraph(graph.subgraph(nodes))
    odd = sorted((n for n, d in sub.degree() if d % 2 == 1), key=repr)
    if not odd:
        source = min(sub.nodes, key=repr)
        circuit = list(nx.eulerian_circuit(sub, source=source, keys=True))
        walk = [source] + [v for _, v, _ in circuit]
        return [Trail(nodes=walk, edges=circuit, closed=True)]

    for n in odd:
        sub.add_edge(_VIRTUAL, n)
    trails: List[Trail] = []
    current: Optional[Trail] = None
    for u, v, k in nx.eulerian_circuit(sub, source=_VIRTUAL, keys=True):
        if u == _VIRTUAL:
            current = Trail(nodes=[v], edges=[])
        elif v == _VIRTUAL:
            trails.append(current)
            current = None
        else:
            current.nodes.append(v)
            current.edges.append((u, v, k))
    return trails


def euler_trails(graph: nx.MultiGraph, boundary: Iterable[Any] = ()) -> TrailPartition:
    """Every edge used once; open trails join two distinct odd-degree vertices.

    Components with only even degrees give one closed trail each. Trails whose
    two endpoints both lie in `boundary` are set aside as discarded.
    """
    if any(u == v for u, v in graph.edges()):
        raise MalformedInputError("Trail partition needs a multigraph without self-loops")
    boundary = set(boundary)
    partition = TrailPartition()

    components = sorted(
        (c for c in nx.connected_components(graph) if graph.subgraph(c).number_of_edges()),
        key=lambda c: min(repr(n) for n in c),
    )
    for nodes in components:
        for trail in _component_trails(graph, nodes):
            if trail.closed:
                partition.closed.append(trail)
            elif trail.nodes[0] in boundary and trail.nodes[-1] in boundary:
                trail.boundary_to_boundary = True
                partition.discarded.append(trail)
            else:
                partition.trails.append(trail)

    logger.debug(
        f"Trail partition: {len(partition.trails)} open, {len(partition.closed)} closed, "
        f"{len(partition.discarded)} discarded"
    )
    return partition
