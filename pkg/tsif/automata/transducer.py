from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Optional

from tsif.automata.register import RaTransition, Register, RegisterAutomaton, Update, identity
from tsif.catalog.oracle import maximal_occurrences
from tsif.catalog.signature import enumerate_signatures
from tsif.constants import ALPHABET, Phase, RegisterRole
from tsif.errors import HomogeneityError, SeparationError

_MIRROR = {"<": ">", ">": "<", "=": "="}


@dataclass(frozen=True)
class PhaseTransition:
    src: Hashable
    symbol: str
    dst: Hashable
    phase: Phase = Phase.not_found


class SeedTransducer:
    """Deterministic transducer emitting ``found`` exactly when a new maximal pattern occurrence is recognised."""

    def __init__(self, states: list, initial: Hashable, transitions: dict, name: str = ""):
        self.states = list(states)
        self.initial = initial
        self.transitions = dict(transitions)
        self.name = name

    def __repr__(self) -> str:
        return f"SeedTransducer({self.name!r}, states={self.states})"

    def transition(self, state, symbol: str) -> PhaseTransition:
        return self.transitions[(state, symbol)]

    def out_transitions(self, state) -> list[PhaseTransition]:
        return [self.transitions[(state, symbol)] for symbol in ALPHABET if (state, symbol) in self.transitions]

    def outputs(self, sig: str) -> list[Phase]:
        state = self.initial
        phases = []
        for symbol in sig:
            transition = self.transitions[(state, symbol)]
            phases.append(transition.phase)
            state = transition.dst
        return phases

    def found_positions(self, sig: str) -> list[int]:
        """1-based positions of the letters on which the transducer emits ``found``."""
        return [position + 1 for position, phase in enumerate(self.outputs(sig)) if phase == Phase.found]

    def count(self, sig: str) -> int:
        return sum(1 for phase in self.outputs(sig) if phase == Phase.found)

    def is_complete(self) -> bool:
        return all((state, symbol) in self.transitions for state in self.states for symbol in ALPHABET)

    def to_json(self) -> dict:
        return {
            "states": [str(state) for state in self.states],
            "initial": str(self.initial),
            "transitions": [
                {"from": str(t.src), "symbol": t.symbol, "to": str(t.dst), "phase": t.phase.value}
                for (state, symbol), t in sorted(
                    self.transitions.items(), key=lambda item: (self.states.index(item[0][0]), item[0][1])
                )
            ],
        }

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "SeedTransducer":
        transitions = {}
        for entry in data["transitions"]:
            transitions[(entry["from"], entry["symbol"])] = PhaseTransition(
                entry["from"], entry["symbol"], entry["to"], Phase(entry.get("phase", Phase.not_found.value))
            )
        return cls(data["states"], data["initial"], transitions, name or data.get("name", ""))

    def to_dot(self, name: str = None) -> str:
        index = {state: position for position, state in enumerate(self.states)}
        lines = [f'digraph "{name or self.name}" {{', "  rankdir=LR;", '  __start [shape=point, label=""];']
        for state, position in index.items():
            lines.append(f'  q{position} [shape=circle, label="{state}"];')
        lines.append(f"  __start -> q{index[self.initial]};")
        for t in self.transitions.values():
            color = ', color="red", fontcolor="red"' if t.phase == Phase.found else ""
            lines.append(f'  q{index[t.src]} -> q{index[t.dst]} [label="{t.symbol}:{t.phase.value}"{color}];')
        lines.append("}")
        return "\n".join(lines)


@dataclass
class TransducerReport:
    name: str
    max_len: int
    checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def validate_transducer(t: SeedTransducer, regex, max_len: int, max_counterexamples: int = 20) -> TransducerReport:
    """Compares the number of ``found`` outputs with the maximal-occurrence oracle on every signature up to a length.

    Counterexamples are ``(signature, found_count, oracle_count)`` in length-lexicographic order.
    """
    report = TransducerReport(t.name, max_len)
    if not t.is_complete():
        missing = [(s, a) for s in t.states for a in ALPHABET if (s, a) not in t.transitions]
        report.counterexamples.append((None, None, f"incomplete: {missing}"))
        return report
    for length in range(max_len + 1):
        for sig in enumerate_signatures(length):
            report.checked += 1
            found = t.count(sig)
            expected = len(maximal_occurrences(regex, sig))
            if found != expected and len(report.counterexamples) < max_counterexamples:
                report.counterexamples.append((sig, found, expected))
    failures = len(report.counterexamples)
    logging.debug(f"Validated transducer {t.name} on {report.checked} signatures: {failures} failures.")
    return report


def mirror(t: SeedTransducer, name: str = None) -> SeedTransducer:
    """Swaps ``<`` and ``>``: the transducer of the mirrored pattern, e.g. valley from peak."""
    transitions = {}
    for (state, symbol), transition in t.transitions.items():
        mirrored = _MIRROR[symbol]
        transitions[(state, mirrored)] = PhaseTransition(state, mirrored, transition.dst, transition.phase)
    return SeedTransducer(t.states, t.initial, transitions, name or f"mirror({t.name})")


def separate(t: SeedTransducer) -> SeedTransducer:
    """Splits states reachable both before and after a ``found`` output.

    Built as the reachable product with a one-bit "found seen" flag. A state keeps its name when it occurs with one
    flag value only; its after-found copy gets a trailing apostrophe otherwise.
    """
    initial = (t.initial, 0)
    order = [initial]
    seen = {initial}
    queue = deque([initial])
    arcs = []
    while queue:
        state, flag = queue.popleft()
        for transition in t.out_transitions(state):
            dst = (transition.dst, 1 if flag or transition.phase == Phase.found else 0)
            arcs.append(((state, flag), transition, dst))
            if dst not in seen:
                seen.add(dst)
                order.append(dst)
                queue.append(dst)
    bits: dict = {}
    for state, flag in order:
        bits.setdefault(state, set()).add(flag)

    def rename(pair) -> str:
        state, flag = pair
        return f"{state}'" if flag and len(bits[state]) == 2 else state

    transitions = {}
    for src, transition, dst in arcs:
        transitions[(rename(src), transition.symbol)] = PhaseTransition(
            rename(src), transition.symbol, rename(dst), transition.phase
        )
    return SeedTransducer([rename(pair) for pair in order], rename(initial), transitions, t.name)


@dataclass(frozen=True)
class PhasePathFacts:
    shortest_found_path: dict
    regret: dict


def shortest_found_paths(t: SeedTransducer) -> dict:
    """Per state, the length of the shortest path ending with a ``found`` transition; unreachable ones are absent."""
    incoming: dict = {state: [] for state in t.states}
    for transition in t.transitions.values():
        incoming[transition.dst].append(transition)
    lengths = {}
    queue = deque()
    for transition in t.transitions.values():
        if transition.phase == Phase.found and transition.src not in lengths:
            lengths[transition.src] = 1
            queue.append(transition.src)
    while queue:
        state = queue.popleft()
        for transition in incoming[state]:
            if transition.src not in lengths:
                lengths[transition.src] = lengths[state] + 1
                queue.append(transition.src)
    return lengths


def regrets(t: SeedTransducer) -> PhasePathFacts:
    """Regret per transition: 0 on ``found``, otherwise ``1 + L(dst) - L(src)`` with L the shortest found-path."""
    lengths = shortest_found_paths(t)
    missing = [state for state in t.states if state not in lengths]
    if missing:
        raise HomogeneityError(f"States {missing} of {t.name} never reach a found transition.")
    regret = {}
    for key, transition in t.transitions.items():
        if transition.phase == Phase.found:
            regret[key] = 0
        else:
            regret[key] = 1 + lengths[transition.dst] - lengths[transition.src]
    return PhasePathFacts(lengths, regret)


@dataclass(frozen=True)
class HomogeneityResult:
    passed: bool
    c: Optional[int] = None
    d: Optional[int] = None
    reason: str = ""


def homogeneity_check(t: SeedTransducer) -> HomogeneityResult:
    """Checks that every ``found`` destination has the same shortest found-path length.

    On success, ``d`` is that common length and ``c = L(initial) + 1 - d``, so that the maximum number of patterns
    in a series of length ``n`` is ``max(0, (n - c) // d)``.
    """
    lengths = shortest_found_paths(t)
    if t.initial not in lengths:
        return HomogeneityResult(False, reason=f"Initial state of {t.name} never reaches a found transition.")
    destinations = sorted({tr.dst for tr in t.transitions.values() if tr.phase == Phase.found}, key=t.states.index)
    if not destinations:
        return HomogeneityResult(False, reason=f"{t.name} has no found transition.")
    unreachable = [state for state in destinations if state not in lengths]
    if unreachable:
        return HomogeneityResult(False, reason=f"Found destinations {unreachable} never reach a found transition.")
    values = {lengths[state] for state in destinations}
    if len(values) > 1:
        detail = ", ".join(f"{state}: {lengths[state]}" for state in destinations)
        return HomogeneityResult(False, reason=f"Found destinations have different found-path lengths ({detail}).")
    d = values.pop()
    return HomogeneityResult(True, lengths[t.initial] + 1 - d, d)


def decorate_nb(t: SeedTransducer, name: str = None) -> RegisterAutomaton:
    """Counts ``found`` outputs in a single main register."""
    registers = (Register("R", 0, RegisterRole.main),)
    increment = Update(1, (1,))
    transitions = {}
    for key, transition in t.transitions.items():
        found = transition.phase == Phase.found
        transitions[key] = RaTransition(
            transition.src, transition.symbol, transition.dst, (increment if found else identity(0, 1),),
            transition.phase.value,
        )
    return RegisterAutomaton(t.states, t.initial, registers, transitions, t.states, ((1,),), name or f"nb_{t.name}")


def decorate_loss_nb(t: SeedTransducer, name: str = None) -> RegisterAutomaton:
    """Loss automaton of a separated transducer.

    Registers ``C`` (letters since the last found), ``D`` (regret accumulated since then) and ``R`` (regret up to the
    last found). The result ``R + C`` is the series length minus the shortest length giving the same count.
    """
    facts = regrets(t)
    registers = (
        Register("C", 0, RegisterRole.potential),
        Register("D", 0, RegisterRole.potential),
        Register("R", 0, RegisterRole.main),
    )
    found_updates = (Update(0, (0, 0, 0)), Update(0, (0, 0, 0)), Update(0, (0, 1, 1)))
    transitions = {}
    for key, transition in t.transitions.items():
        if transition.phase == Phase.found:
            updates = found_updates
        else:
            updates = (Update(1, (1, 0, 0)), Update(facts.regret[key], (0, 1, 0)), identity(2, 3))
        transitions[key] = RaTransition(
            transition.src, transition.symbol, transition.dst, updates, transition.phase.value
        )
    return RegisterAutomaton(
        t.states, t.initial, registers, transitions, t.states, ((1, 0, 1),), name or f"loss_nb_{t.name}"
    )


@dataclass(frozen=True)
class FoundSplit:
    before: frozenset
    after: frozenset


def before_after_found_split(ra: RegisterAutomaton) -> FoundSplit:
    """Classifies states as reachable before any found transition or after one; both at once is an error."""
    before = {ra.initial}
    queue = deque([ra.initial])
    after = set()
    pending = deque()
    while queue:
        state = queue.popleft()
        for transition in ra.out_transitions(state):
            if transition.tag == Phase.found.value:
                if transition.dst not in after:
                    after.add(transition.dst)
                    pending.append(transition.dst)
            elif transition.dst not in before:
                before.add(transition.dst)
                queue.append(transition.dst)
    while pending:
        state = pending.popleft()
        for transition in ra.out_transitions(state):
            if transition.dst not in after:
                after.add(transition.dst)
                pending.append(transition.dst)
    overlap = before & after
    if overlap:
        raise SeparationError(f"States {sorted(map(str, overlap))} of {ra.name} are both before-found and after-found.")
    return FoundSplit(frozenset(before), frozenset(after))
