"""Gap and loss of time-series constraints, and the automata accepting the series at a given gap."""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import gin

from tsif.automata.dfa import Dfa, minimize
from tsif.automata.digraph import WeightedDigraph, shortest_distance_to
from tsif.automata.register import RegisterAutomaton, capped_expansion
from tsif.automata.transducer import (
    before_after_found_split,
    decorate_loss_nb,
    homogeneity_check,
    separate,
)
from tsif.catalog.loader import Catalog, default_catalog
from tsif.catalog.oracle import eval_constraint, shortest_lengths_by_result
from tsif.catalog.signature import enumerate_signatures
from tsif.catalog.specs import ConstraintSpec, UpperBoundFormula
from tsif.constants import Feature
from tsif.errors import HomogeneityError, NoBoundError


@dataclass(frozen=True)
class GapLossParams:
    c: int
    d: int

    def upp(self, n: int) -> int:
        return max(0, (n - self.c) // self.d)


@dataclass(frozen=True)
class LossInterval:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Empty loss interval [{self.lo}, {self.hi}].")

    def __contains__(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    def disjoint(self, other: "LossInterval") -> bool:
        return self.hi < other.lo or other.hi < self.lo


@dataclass(frozen=True)
class Certificate:
    """Proof strength of an automaton: proved by construction, or checked exhaustively up to a series length."""

    desk_verified_to: Optional[int] = None

    @property
    def proved(self) -> bool:
        return self.desk_verified_to is None

    def to_json(self):
        return "proved" if self.proved else {"desk_verified_to": self.desk_verified_to}

    @classmethod
    def from_json(cls, data) -> "Certificate":
        return cls() if data == "proved" else cls(data["desk_verified_to"])

    def weakest(self, other: "Certificate") -> "Certificate":
        if self.proved:
            return other
        if other.proved:
            return self
        return Certificate(min(self.desk_verified_to, other.desk_verified_to))


def gap_loss_params(spec: ConstraintSpec, catalog: Catalog = None) -> GapLossParams:
    """Homogeneity constants of an ``nb_*`` constraint from its separated seed transducer."""
    catalog = catalog or default_catalog()
    if spec.feature != Feature.one:
        raise HomogeneityError(f"Gap and loss constants are derived for nb_* constraints only, not {spec.name}.")
    result = homogeneity_check(separate(catalog.transducer(spec.regex.name)))
    if not result.passed:
        raise HomogeneityError(f"{spec.name}: {result.reason}")
    return GapLossParams(result.c, result.d)


def gap_to_loss(params: GapLossParams, delta: int, sgn_r: int, n: int) -> int:
    if n < 1:
        raise ValueError(f"Series length must be at least 1, got {n}.")
    return delta * params.d + (1 - sgn_r) * (min(n, params.c) - 1) + max(0, n - params.c) % params.d


def loss_interval(params: GapLossParams, delta: int, sgn_r: int) -> LossInterval:
    sgn_delta = 1 if delta > 0 else 0
    lo = delta * params.d + (1 - sgn_r) * sgn_delta * (params.c - 1)
    hi = params.d * (delta + 1) - 1 + (1 - sgn_r) * (params.c - 1)
    return LossInterval(lo, hi)


@dataclass
class PrincipalReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append((name, passed, detail))


def check_principal_conditions(
    spec: ConstraintSpec, params: GapLossParams, max_delta: int = 5, max_n: int = 10
) -> PrincipalReport:
    """Boundedness, disjointness and the gap-to-loss identity as an executable report."""
    report = PrincipalReport()
    for sgn_r in (0, 1):
        outside = []
        for n in range(1, max_n + 1):
            upp = params.upp(n)
            deltas = [upp] if sgn_r == 0 else range(upp)
            for delta in deltas:
                if delta > max_delta:
                    continue
                value = gap_to_loss(params, delta, sgn_r, n)
                if value not in loss_interval(params, delta, sgn_r):
                    outside.append((n, delta, value))
        report.add(f"boundedness sgn={sgn_r}", not outside, str(outside[:3]))
        overlaps = [
            (first, second)
            for first in range(max_delta + 1)
            for second in range(first + 1, max_delta + 1)
            if not loss_interval(params, first, sgn_r).disjoint(loss_interval(params, second, sgn_r))
        ]
        report.add(f"disjointness sgn={sgn_r}", not overlaps, str(overlaps[:3]))
    shortest = shortest_lengths_by_result(spec, max_n)
    wrong = []
    for n in range(1, max_n + 1):
        for sig in enumerate_signatures(n - 1):
            result = eval_constraint(spec, sig)
            expected = n - shortest[result]
            value = gap_to_loss(params, params.upp(n) - result, 1 if result else 0, n)
            if value != expected and len(wrong) < 3:
                wrong.append((sig, value, expected))
    report.add("gap-to-loss identity", not wrong, str(wrong))
    return report


@dataclass(frozen=True)
class GapAutomaton:
    name: str
    delta: int
    dfa: Dfa
    certificate: Certificate

    def to_json(self) -> dict:
        return {
            "constraint": self.name,
            "delta": self.delta,
            "certificate": self.certificate.to_json(),
            **self.dfa.to_json(),
        }


def nb_gap_dfa(spec: ConstraintSpec, delta: int, catalog: Catalog = None) -> Dfa:
    """Capped expansion of the loss automaton, accepting the configurations whose loss lies in the gap's interval.

    Before any found transition the result is 0 and the interval of a zero result applies; afterwards the interval
    of a positive result.
    """
    catalog = catalog or default_catalog()
    params = gap_loss_params(spec, catalog)
    loss = decorate_loss_nb(separate(catalog.transducer(spec.regex.name)), f"loss_{spec.name}")
    split = before_after_found_split(loss)
    intervals = {0: loss_interval(params, delta, 0), 1: loss_interval(params, delta, 1)}
    cap = max(interval.hi for interval in intervals.values())

    def accept(state, values) -> bool:
        interval = intervals[0] if state in split.before else intervals[1]
        return loss.evaluate(values)[0] in interval

    return minimize(capped_expansion(loss, cap, accept))


def periodic_from(formula: UpperBoundFormula) -> int:
    """First length from which the formula is its unclipped periodic expression."""
    if formula.m <= 0:
        raise ValueError(f"Upper bound {formula.describe()} does not grow with the series length.")
    n = max(formula.n_min, 1)
    while formula.m * ((n - formula.c) // formula.d) + formula.k < 0:
        n += 1
    return n


def deficit_dfa(ra: RegisterAutomaton, formula: UpperBoundFormula, delta: int, state_limit: int = 200_000) -> Dfa:
    """Automaton of the series with ``Upp(n) - R = delta`` for a single-factor register automaton.

    States carry the automaton state, the length phase of the bound, the slack ``Upp(n) - R - sum(D)`` and the
    potential registers saturated at a cap. The slack changes by at least the arc weight
    ``Upp(n+1) - Upp(n) - const(R) - sum(const(D))`` per letter; a slack above ``delta`` plus the largest possible
    later decrease never comes back, so such configurations are dropped.
    """
    main = ra.main_index(0)
    potentials = ra.potential_indices(0)
    start = periodic_from(formula)
    period = formula.d

    def next_phase(phase: int) -> int:
        phase += 1
        return phase - period if phase >= start + period else phase

    def upp_step(phase: int) -> int:
        return formula.value(phase + 1) - formula.value(phase)

    def weight(transition, phase: int) -> int:
        constants = transition.updates[main].const + sum(transition.updates[p].const for p in potentials)
        return upp_step(phase) - constants

    graph = WeightedDigraph()
    phases = list(range(1, start + period))
    for state in ra.states:
        for phase in phases:
            graph.add_node((state, phase))
            for transition in ra.out_transitions(state):
                graph.add_arc((state, phase), (transition.dst, next_phase(phase)), weight(transition, phase))
    distances = shortest_distance_to(graph, list(graph.nodes))
    if distances is None:
        raise ValueError(f"The slack of {ra.name} decreases without bound; no gap automaton exists.")
    margin = -min(distances.values())
    ceiling = delta + margin
    min_weight = min(min(arc.weight for arc in graph.arcs), 0)

    cap = ceiling + 1
    for _ in range(16):
        dfa, lowest = _expand_deficit(
            ra, formula, delta, main, potentials, next_phase, weight, ceiling, cap, state_limit
        )
        needed = ceiling - lowest - min_weight + 1
        if cap >= needed:
            logging.debug(
                f"Deficit automaton of {ra.name} at gap {delta}: margin {margin}, cap {cap}, {len(dfa)} states."
            )
            return minimize(dfa)
        cap = needed
    raise ValueError(f"Could not settle the potential-register cap of {ra.name}.")


def _expand_deficit(ra, formula, delta, main, potentials, next_phase, weight, ceiling, cap, state_limit):
    values = ra.initial_values
    initial = (ra.initial, 1, formula.value(1) - values[main] - sum(values[p] for p in potentials),
               tuple(min(cap, values[p]) for p in potentials))
    transitions = {}
    seen = {initial}
    queue = deque([initial])
    lowest = initial[2]
    while queue:
        config = queue.popleft()
        state, phase, slack, pending = config
        for transition in ra.out_transitions(state):
            lost = 0
            nxt_pending = []
            for slot, p in enumerate(potentials):
                update = transition.updates[p]
                if update.coeffs[p] == 0 and transition.updates[main].coeffs[p] == 0:
                    lost += pending[slot]
                nxt_pending.append(min(cap, update.const + update.coeffs[p] * pending[slot]))
            nxt_slack = slack + weight(transition, phase) + lost
            if nxt_slack > ceiling:
                continue
            dst = (transition.dst, next_phase(phase), nxt_slack, tuple(nxt_pending))
            transitions[(config, transition.symbol)] = dst
            if dst not in seen:
                seen.add(dst)
                lowest = min(lowest, nxt_slack)
                queue.append(dst)
                if len(seen) > state_limit:
                    raise ValueError(f"Deficit automaton of {ra.name} exceeds {state_limit} states.")
    accepting = {
        config for config in seen
        if config[0] in ra.accepting and all(value < cap for value in config[3]) and config[2] + sum(config[3]) == delta
    }
    return Dfa(initial, transitions, accepting, seen), lowest


def gap_mismatches(
    ra: RegisterAutomaton, formula: UpperBoundFormula, dfa: Dfa, delta: int, max_n: int, limit: int = 5
) -> list[str]:
    """Signatures of series up to ``max_n`` where the automaton disagrees with ``Upp(n) - R = delta``.

    Sweeps configurations of the register automaton paired with the automaton state, so signatures sharing both are
    checked once.
    """
    layer = {(ra.initial, ra.initial_values, dfa.initial): ""}
    mismatches = []
    for length in range(max_n):
        n = length + 1
        for (state, values, control), witness in sorted(layer.items(), key=lambda item: item[1]):
            expected = state in ra.accepting and formula.value(n) - ra.evaluate(values)[0] == delta
            actual = control is not None and control in dfa.accepting
            if expected != actual and len(mismatches) < limit:
                mismatches.append(witness)
        if length == max_n - 1:
            break
        nxt: dict = {}
        for (state, values, control), witness in layer.items():
            for transition in ra.out_transitions(state):
                key = (
                    transition.dst,
                    tuple(update.apply(values) for update in transition.updates),
                    dfa.step(control, transition.symbol) if control is not None else None,
                )
                word = witness + transition.symbol
                if key not in nxt or word < nxt[key]:
                    nxt[key] = word
        layer = nxt
    return mismatches


@gin.configurable("GapAutomaton")
def gap_automaton(
    spec: ConstraintSpec, delta: int, catalog: Catalog = None, max_delta: int = 5, desk_max_n: int = 13
) -> GapAutomaton:
    """Automaton of the signatures whose result is ``Upp(n) - delta``.

    ``nb_*`` constraints go through the loss automaton and are proved by construction. Other constraints use the
    slack construction and are checked against the register automaton on every series up to ``desk_max_n``.
    """
    if not 0 <= delta <= max_delta:
        raise ValueError(f"Gap {delta} outside the supported range [0, {max_delta}].")
    return _cached_gap_automaton(catalog or default_catalog(), spec.name, delta, desk_max_n)


@lru_cache(maxsize=None)
def _cached_gap_automaton(catalog: Catalog, name: str, delta: int, desk_max_n: int) -> GapAutomaton:
    spec = catalog.spec(name)
    if spec.feature == Feature.one and spec.regex.name in catalog.transducers:
        dfa = nb_gap_dfa(spec, delta, catalog)
        logging.debug(f"Gap automaton of {name} at gap {delta} from its loss automaton: {len(dfa)} states.")
        return GapAutomaton(name, delta, dfa, Certificate())
    if spec.bound is None:
        raise NoBoundError(f"The catalog records no upper bound for {name}.")
    ra = catalog.register_automaton(spec)
    dfa = deficit_dfa(ra, spec.bound, delta)
    wrong = gap_mismatches(ra, spec.bound, dfa, delta, desk_max_n)
    if wrong:
        raise ValueError(f"Gap automaton of {name} at gap {delta} disagrees on {wrong}.")
    logging.debug(f"Gap automaton of {name} at gap {delta} verified up to n={desk_max_n}: {len(dfa)} states.")
    return GapAutomaton(name, delta, dfa, Certificate(desk_max_n))
