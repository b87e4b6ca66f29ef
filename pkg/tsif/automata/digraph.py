from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence, Union

import gin
import networkx as nx

from tsif.errors import CircuitLimitError


@dataclass(frozen=True)
class Arc:
    src: Hashable
    dst: Hashable
    weight: Union[int, tuple]
    tag: Hashable = None


@dataclass(frozen=True)
class Circuit:
    nodes: tuple
    arcs: tuple

    def weight(self) -> Union[int, tuple]:
        return sum_weights([arc.weight for arc in self.arcs])


@dataclass(frozen=True)
class Distances:
    dist: dict


@dataclass(frozen=True)
class NegativeCycle:
    arcs: list


@dataclass
class WeightedDigraph:
    """Directed multigraph with exact integer weights, or symbolic weights given as integer term vectors.

    Symbolic weights are tuples ``(w_0, ..., w_k)`` read as the linear form ``w_0*x_0 + ... + w_k*x_k``;
    ``instantiate`` turns them into integers for a concrete vector ``x``.
    """

    nodes: list = field(default_factory=list)
    arcs: list = field(default_factory=list)

    def add_node(self, node: Hashable):
        if node not in self.nodes:
            self.nodes.append(node)

    def add_arc(self, src: Hashable, dst: Hashable, weight, tag: Hashable = None):
        self.add_node(src)
        self.add_node(dst)
        self.arcs.append(Arc(src, dst, weight, tag))

    def out_arcs(self, node: Hashable) -> list[Arc]:
        return [arc for arc in self.arcs if arc.src == node]

    def instantiate(self, coefficients: Sequence[int]) -> "WeightedDigraph":
        arcs = [Arc(arc.src, arc.dst, dot(arc.weight, coefficients), arc.tag) for arc in self.arcs]
        return WeightedDigraph(list(self.nodes), arcs)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from((arc.src, arc.dst) for arc in self.arcs)
        return graph

    def to_dot(self, name: str = "digraph") -> str:
        index = {node: position for position, node in enumerate(self.nodes)}
        lines = [f'digraph "{name}" {{']
        for node, position in index.items():
            lines.append(f'  n{position} [label="{node}"];')
        for arc in self.arcs:
            lines.append(f'  n{index[arc.src]} -> n{index[arc.dst]} [label="{arc.weight}"];')
        lines.append("}")
        return "\n".join(lines)


def dot(weight, coefficients: Sequence[int]) -> int:
    if isinstance(weight, int):
        return weight
    return sum(term * value for term, value in zip(weight, coefficients))


def sum_weights(weights: list):
    if not weights:
        return 0
    if isinstance(weights[0], int):
        return sum(weights)
    return tuple(sum(column) for column in zip(*weights))


def bellman_ford(graph: WeightedDigraph, source: Hashable) -> Union[Distances, NegativeCycle]:
    """Single-source shortest paths over integer weights, or a negative cycle reachable from the source."""
    if source not in graph.nodes:
        raise ValueError(f"Source {source!r} is not a node of the graph.")
    dist = {source: 0}
    pred: dict = {}
    updated = None
    for _ in range(len(graph.nodes)):
        updated = None
        for arc in graph.arcs:
            if arc.src in dist and (arc.dst not in dist or dist[arc.src] + arc.weight < dist[arc.dst]):
                dist[arc.dst] = dist[arc.src] + arc.weight
                pred[arc.dst] = arc
                updated = arc.dst
        if updated is None:
            return Distances(dist)
    # A relaxation in round |V| proves a negative cycle; walk back |V| steps to land on it.
    node = updated
    for _ in range(len(graph.nodes)):
        node = pred[node].src
    cycle = []
    current = node
    while True:
        arc = pred[current]
        cycle.append(arc)
        current = arc.src
        if current == node:
            break
    cycle.reverse()
    return NegativeCycle(cycle)


@gin.configurable("Circuits")
def simple_circuits(graph: WeightedDigraph, max_circuits: int = 1_000_000) -> list[Circuit]:
    """Enumerates elementary circuits, expanding parallel arcs.

    Node cycles come from Johnson's algorithm; each one is expanded over the parallel arcs between consecutive nodes.
    Parallel arcs with equal weights yield the same circuit once.
    """
    parallel: dict = {}
    for arc in graph.arcs:
        bucket = parallel.setdefault((arc.src, arc.dst), {})
        bucket.setdefault(arc.weight, arc)
    circuits = []
    for cycle in nx.simple_cycles(graph.to_networkx()):
        cycle = _rotate(cycle, graph.nodes)
        hops = [list(parallel[(cycle[i], cycle[(i + 1) % len(cycle)])].values()) for i in range(len(cycle))]
        for choice in itertools.product(*hops):
            circuits.append(Circuit(tuple(cycle), tuple(choice)))
            if len(circuits) > max_circuits:
                raise CircuitLimitError(f"More than {max_circuits} circuits; the digraph is unexpectedly large.")
    circuits.sort(key=lambda circuit: ([graph.nodes.index(node) for node in circuit.nodes], repr(circuit.arcs)))
    logging.debug(f"Enumerated {len(circuits)} circuits over {len(graph.nodes)} nodes.")
    return circuits


def _rotate(cycle: list, order: list) -> list:
    start = min(range(len(cycle)), key=lambda position: order.index(cycle[position]))
    return cycle[start:] + cycle[:start]


def shortest_distance_to(graph: WeightedDigraph, targets) -> Optional[dict]:
    """Shortest distance from every node to the target set (empty path allowed), or None on a negative cycle."""
    reverse = WeightedDigraph(list(graph.nodes) + ["__target__"])
    for arc in graph.arcs:
        reverse.arcs.append(Arc(arc.dst, arc.src, arc.weight, arc.tag))
    for target in targets:
        reverse.arcs.append(Arc("__target__", target, 0))
    result = bellman_ford(reverse, "__target__")
    if isinstance(result, NegativeCycle):
        return None
    return {node: value for node, value in result.dist.items() if node != "__target__"}
