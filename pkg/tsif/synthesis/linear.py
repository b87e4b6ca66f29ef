from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import gin
import numpy as np
import joblib

from tsif.automata.digraph import NegativeCycle, WeightedDigraph, bellman_ford, dot, simple_circuits
from tsif.automata.register import (
    RegisterAutomaton,
    delayed_intersection,
    product,
    results_by_length,
    with_found_bits,
)
from tsif.catalog.loader import Catalog, default_catalog
from tsif.catalog.specs import SHORT_NAMES, ConstraintSpec
from tsif.constants import SIGNATURE_ARITY, Precondition, Sign
from tsif.errors import NegativeCycleError
from tsif.parallel import threads

_SOURCE = "__source__"


@dataclass(frozen=True)
class LinearInvariant:
    """``e + e0*n + sum(coeffs[i] * R_i) >= 0`` for every series of length ``n >= 2`` meeting the precondition."""

    e: int
    e0: int
    coeffs: tuple
    constraints: tuple
    precondition: Precondition = Precondition.none
    signs: tuple = ()
    delayed: bool = False
    facet: Optional[object] = field(default=None, compare=False)

    def value(self, n: int, results: Sequence[int]) -> int:
        return self.e + self.e0 * n + sum(coeff * result for coeff, result in zip(self.coeffs, results))

    def applies(self, results: Sequence[int]) -> bool:
        if self.precondition == Precondition.non_default:
            return all(result > 0 for result in results)
        return True

    def holds(self, n: int, results: Sequence[int]) -> bool:
        return not self.applies(results) or self.value(n, results) >= 0

    @property
    def key(self) -> tuple:
        return (self.e0, *self.coeffs, self.e, self.precondition.value)

    def canonical(self) -> "LinearInvariant":
        """Divides all coefficients by their positive gcd; signs are kept."""
        divisor = math.gcd(self.e, self.e0, *self.coeffs)
        if divisor <= 1:
            return self
        return replace(
            self, e=self.e // divisor, e0=self.e0 // divisor, coeffs=tuple(c // divisor for c in self.coeffs)
        )

    def names(self) -> list[str]:
        short = [SHORT_NAMES.get(name) for name in self.constraints]
        if all(short) and len(set(short)) == len(short):
            return short
        return [f"R{index + 1}" for index in range(len(self.coeffs))]

    def describe(self, names: Sequence[str] = None) -> str:
        """Renders the invariant with the negative register terms on the left, e.g. ``P + V <= n - 2``."""
        names = list(names) if names is not None else self.names()
        left = [(-coeff, name) for coeff, name in zip(self.coeffs, names) if coeff < 0]
        right = [(coeff, name) for coeff, name in zip(self.coeffs, names) if coeff > 0]
        if left:
            text = f"{_terms(left)} <= {_terms(right + [(self.e0, 'n')], self.e)}"
        else:
            text = f"{_terms(right)} >= {_terms([(-self.e0, 'n')], -self.e)}"
        if self.precondition == Precondition.non_default:
            text += " if " + " and ".join(f"{name} > 0" for name in names)
        return text

    def __str__(self) -> str:
        return self.describe()


def _terms(terms: list, constant: int = 0) -> str:
    parts = []
    for coeff, name in terms:
        if coeff == 0:
            continue
        magnitude = "" if abs(coeff) == 1 else f"{abs(coeff)}*"
        sign = "-" if coeff < 0 else "+"
        parts.append((sign, f"{magnitude}{name}"))
    if constant or not parts:
        parts.append(("-" if constant < 0 else "+", str(abs(constant))))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, part in parts[1:]:
        text += f" {sign} {part}"
    return text


@dataclass
class InvariantDigraph:
    """Transition graph of a product automaton with symbolic weights over ``(e0, e1, ..., ek)``.

    Every arc weighs ``e0 + sum(e_i * beta_i)`` with ``beta_i`` the main-register constant of factor ``i`` for a
    ``+`` sign and the sum of all constants of that factor for a ``-`` sign. ``init_terms`` is the initialisation
    weight without ``e``.
    """

    graph: WeightedDigraph
    initial: object
    accepting: list
    init_terms: tuple
    signs: tuple
    automaton: RegisterAutomaton

    def init_weight(self, coefficients: Sequence[int]) -> int:
        return dot(self.init_terms, coefficients)

    def path_weight(self, coefficients: Sequence[int], sig: str) -> Optional[int]:
        """Initialisation weight plus the arc weights along the run on ``sig``; None if the run leaves the graph."""
        weights = {arc.tag: arc.weight for arc in self.graph.arcs}
        state = self.initial
        total = self.init_weight(coefficients)
        for symbol in sig:
            transition = self.automaton.transition(state, symbol)
            if transition is None or (state, symbol) not in weights:
                return None
            total += dot(weights[(state, symbol)], coefficients)
            state = transition.dst
        return total


def _beta(ra: RegisterAutomaton, constants: Sequence[int], signs: Sequence[Sign]) -> tuple:
    values = []
    for factor, sign in enumerate(signs[1:]):
        if sign == Sign.plus:
            values.append(constants[ra.main_index(factor)])
        else:
            values.append(sum(constants[index] for index in ra.factor_indices(factor)))
    return tuple(values)


def invariant_digraph(ra: RegisterAutomaton, signs: Sequence[Sign]) -> InvariantDigraph:
    if len(signs) != ra.factors + 1:
        raise ValueError(f"Expected {ra.factors + 1} signs for {ra.name}, got {len(signs)}.")
    useful = _useful_states(ra)
    graph = WeightedDigraph()
    for state in ra.states:
        if state in useful:
            graph.add_node(state)
    for (state, symbol), transition in ra.transitions.items():
        if state not in useful or transition.dst not in useful:
            continue
        beta = _beta(ra, [update.const for update in transition.updates], signs)
        graph.add_arc(state, transition.dst, (1, *beta), (state, symbol))
    init_beta = _beta(ra, ra.initial_values, signs)
    accepting = [state for state in ra.states if state in ra.accepting and state in useful]
    return InvariantDigraph(graph, ra.initial, accepting, (SIGNATURE_ARITY - 1, *init_beta), tuple(signs), ra)


def _useful_states(ra: RegisterAutomaton) -> set:
    reachable = {ra.initial}
    stack = [ra.initial]
    while stack:
        state = stack.pop()
        for transition in ra.out_transitions(state):
            if transition.dst not in reachable:
                reachable.add(transition.dst)
                stack.append(transition.dst)
    inverse: dict = {}
    for transition in ra.transitions.values():
        inverse.setdefault(transition.dst, []).append(transition.src)
    useful = {state for state in ra.accepting if state in reachable}
    stack = list(useful)
    while stack:
        state = stack.pop()
        for src in inverse.get(state, ()):
            if src in reachable and src not in useful:
                useful.add(src)
                stack.append(src)
    if ra.initial not in useful:
        useful.add(ra.initial)
    return useful


def sign_vectors(k: int) -> list[tuple]:
    return list(itertools.product((Sign.plus, Sign.minus), repeat=k + 1))


def _orthant_ranges(signs: Sequence[Sign], bound: int) -> list[range]:
    ranges = []
    for position, sign in enumerate(signs):
        if sign == Sign.plus:
            ranges.append(range(0 if position == 0 else 1, bound + 1))
        else:
            ranges.append(range(-bound, 0))
    return ranges


def circuit_weights(digraph: InvariantDigraph) -> np.ndarray:
    """Distinct symbolic weights of the elementary circuits, one row per circuit."""
    circuits = simple_circuits(digraph.graph)
    size = len(digraph.signs)
    if not circuits:
        return np.zeros((0, size), dtype=np.int64)
    return np.array([circuit.weight() for circuit in circuits], dtype=np.int64).reshape(len(circuits), size)


def find_coefficients(digraph: InvariantDigraph, coeff_bound: int = 3) -> Optional[tuple]:
    """Exhaustive search of the sign orthant in ``[-B, B]`` for coefficients making every circuit non-negative.

    Minimises the sum of circuit weights plus the sum of absolute coefficients; ties go to the smallest
    ``(|e0|, e1, ..., ek)``. Returns None when no candidate of the orthant keeps all circuits non-negative.
    """
    weights = circuit_weights(digraph)
    candidates = np.array(list(itertools.product(*_orthant_ranges(digraph.signs, coeff_bound))), dtype=np.int64)
    if candidates.size == 0:
        return None
    circuit_values = candidates @ weights.T
    feasible = np.all(circuit_values >= 0, axis=1)
    if not feasible.any():
        logging.debug(f"Orthant {''.join(s.value for s in digraph.signs)} is blocked by negative circuits.")
        return None
    objective = circuit_values.sum(axis=1) + np.abs(candidates).sum(axis=1)
    best = None
    for index in np.flatnonzero(feasible):
        candidate = tuple(int(value) for value in candidates[index])
        key = (int(objective[index]), abs(candidate[0]), *candidate[1:])
        if best is None or key < best[0]:
            best = (key, candidate)
    return best[1]


def negative_circuits(digraph: InvariantDigraph, coefficients: Sequence[int]) -> list:
    """Circuits whose weight is negative under the coefficients, with that weight."""
    result = []
    for circuit in simple_circuits(digraph.graph):
        weight = dot(circuit.weight(), coefficients)
        if weight < 0:
            result.append((circuit, weight))
    return result


def constant_term(digraph: InvariantDigraph, coefficients: Sequence[int]) -> int:
    """Smallest ``e`` making the invariant hold: minus the cheapest non-empty path to an accepting node."""
    graph = digraph.graph.instantiate(coefficients)
    extended = WeightedDigraph([_SOURCE] + list(graph.nodes), list(graph.arcs))
    for arc in graph.out_arcs(digraph.initial):
        extended.arcs.append(replace(arc, src=_SOURCE))
    result = bellman_ford(extended, _SOURCE)
    if isinstance(result, NegativeCycle):
        raise NegativeCycleError(
            f"Coefficients {tuple(coefficients)} leave a negative cycle in the digraph of {digraph.automaton.name}.",
            result.arcs,
        )
    reached = [result.dist[node] for node in digraph.accepting if node in result.dist]
    if not reached:
        raise ValueError(f"No accepting state of {digraph.automaton.name} is reachable by a non-empty path.")
    return -(digraph.init_weight(coefficients) + min(reached))


def build_automaton(
    pair: Sequence[ConstraintSpec], catalog: Catalog = None, delayed: bool = False, non_default: bool = False
) -> RegisterAutomaton:
    catalog = catalog or default_catalog()
    ra = product([catalog.register_automaton(spec) for spec in pair])
    if non_default:
        ra = with_found_bits(ra)
    if delayed:
        ra = delayed_intersection(ra)
    return ra


def _solve_orthant(ra: RegisterAutomaton, signs: tuple, coeff_bound: int) -> Optional[tuple]:
    digraph = invariant_digraph(ra, signs)
    coefficients = find_coefficients(digraph, coeff_bound=coeff_bound)
    if coefficients is None:
        return None
    return coefficients, constant_term(digraph, coefficients)


def dominates(g: LinearInvariant, f: LinearInvariant, n_range: tuple = (2, 20)) -> bool:
    """True when every integer point satisfying ``g`` satisfies ``f`` at each length of the range.

    Over all integer register values this only happens for proportional register coefficients, where it reduces to
    comparing the rounded thresholds.
    """
    if g.precondition != f.precondition or len(g.coeffs) != len(f.coeffs):
        return False
    base = math.gcd(*g.coeffs)
    direction = tuple(c // base for c in g.coeffs)
    scale_f = math.gcd(*f.coeffs)
    if tuple(c // scale_f for c in f.coeffs) != direction:
        return False
    for n in range(n_range[0], n_range[1] + 1):
        # a.R >= ceil(-(e + e0*n) / scale)
        need_g = -((g.e + g.e0 * n) // base)
        need_f = -((f.e + f.e0 * n) // scale_f)
        if need_g < need_f:
            return False
    return True


def remove_dominated(invariants: list[LinearInvariant], n_range: tuple = (2, 20)) -> list[LinearInvariant]:
    kept = []
    for position, f in enumerate(invariants):
        dominated = False
        for other, g in enumerate(invariants):
            if other == position:
                continue
            if dominates(g, f, n_range) and (not dominates(f, g, n_range) or other < position):
                dominated = True
                break
        if not dominated:
            kept.append(f)
    return kept


@gin.configurable("Synthesis")
def synthesize(
    pair: Sequence[ConstraintSpec],
    delayed: bool = False,
    non_default: bool = False,
    coeff_bound: int = 3,
    catalog: Catalog = None,
) -> list[LinearInvariant]:
    """Linear invariants of a conjunction of constraints, one candidate per sign vector.

    With ``non_default`` only runs where every constraint differs from its default are considered and the
    invariants carry that precondition.
    """
    ra = build_automaton(pair, catalog, delayed, non_default)
    vectors = sign_vectors(len(pair))
    solutions = joblib.Parallel(n_jobs=threads())(
        joblib.delayed(_solve_orthant)(ra, signs, coeff_bound) for signs in vectors
    )
    names = tuple(spec.name for spec in pair)
    precondition = Precondition.non_default if non_default else Precondition.none
    invariants = []
    seen = set()
    for signs, solution in zip(vectors, solutions):
        if solution is None:
            continue
        (e0, *coeffs), e = solution
        invariant = LinearInvariant(e, e0, tuple(coeffs), names, precondition, signs, delayed).canonical()
        if invariant.key in seen:
            continue
        seen.add(invariant.key)
        invariants.append(invariant)
    kept = remove_dominated(invariants)
    logging.info(f"Synthesized {len(kept)} invariants for {' x '.join(names)} ({ra.name}).")
    return kept


def check_invariant(invariant: LinearInvariant, pair: Sequence[ConstraintSpec], max_n: int, catalog: Catalog = None):
    """First ``(n, sig, results)`` violating the invariant among series of length ``2..max_n``, or None."""
    catalog = catalog or default_catalog()
    ra = product([catalog.register_automaton(spec) for spec in pair])
    for length, found in results_by_length(ra, max_n - 1):
        n = length + 1
        if n < 2:
            continue
        for results, config in sorted(found.items(), key=lambda item: item[1].witness):
            if not invariant.holds(n, results):
                return n, config.witness, results
    return None

