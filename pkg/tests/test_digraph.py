import pytest

from tsif.automata.digraph import (
    Distances,
    NegativeCycle,
    WeightedDigraph,
    bellman_ford,
    dot,
    shortest_distance_to,
    simple_circuits,
    sum_weights,
)
from tsif.errors import CircuitLimitError


def graph_of(arcs) -> WeightedDigraph:
    graph = WeightedDigraph()
    for src, dst, weight in arcs:
        graph.add_arc(src, dst, weight)
    return graph


def test_bellman_ford_distances():
    result = bellman_ford(graph_of([("a", "b", 1), ("b", "c", -2), ("c", "a", 3)]), "a")
    assert isinstance(result, Distances)
    assert result.dist == {"a": 0, "b": 1, "c": -1}


def test_bellman_ford_negative_cycle():
    result = bellman_ford(graph_of([("s", "a", 0), ("a", "b", 1), ("b", "a", -2)]), "s")
    assert isinstance(result, NegativeCycle)
    assert sum(arc.weight for arc in result.arcs) < 0
    assert {arc.src for arc in result.arcs} == {"a", "b"}


def test_bellman_ford_unknown_source():
    with pytest.raises(ValueError):
        bellman_ford(graph_of([("a", "b", 1)]), "z")


def test_shortest_distance_to_targets():
    graph = graph_of([("a", "b", 2), ("b", "t", 1), ("a", "t", 5)])
    assert shortest_distance_to(graph, ["t"]) == {"a": 3, "b": 1, "t": 0}
    assert shortest_distance_to(graph_of([("a", "b", -1), ("b", "a", -1)]), ["a"]) is None


def test_circuits_expand_parallel_arcs():
    graph = graph_of([("a", "b", (1, 0)), ("a", "b", (0, 1)), ("b", "a", (0, 0)), ("a", "a", (1, 1))])
    circuits = simple_circuits(graph)
    assert len(circuits) == 3
    assert sorted(circuit.weight() for circuit in circuits) == [(0, 1), (1, 0), (1, 1)]
    with pytest.raises(CircuitLimitError):
        simple_circuits(graph, max_circuits=2)


def test_symbolic_weights():
    assert dot((1, 2), (3, 4)) == 11
    assert dot(5, (3, 4)) == 5
    assert sum_weights([(1, 0), (0, 1)]) == (1, 1)
    assert sum_weights([]) == 0
    graph = graph_of([("a", "b", (1, -1))]).instantiate((2, 3))
    assert graph.arcs[0].weight == -1
