from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Hashable, Iterator, Optional

from tsif.automata.dfa import Dfa
from tsif.constants import ALPHABET, RegisterRole


@dataclass(frozen=True)
class Register:
    name: str
    init: int = 0
    role: RegisterRole = RegisterRole.main
    factor: int = 0


@dataclass(frozen=True)
class Update:
    """New value of a register: ``const + sum(coeffs[i] * old[i])``."""

    const: int
    coeffs: tuple

    def apply(self, values: tuple) -> int:
        return self.const + sum(coeff * value for coeff, value in zip(self.coeffs, values) if coeff)

    def reads(self, index: int) -> bool:
        return self.coeffs[index] != 0


@dataclass(frozen=True)
class RaTransition:
    src: Hashable
    symbol: str
    dst: Hashable
    updates: tuple
    tag: Optional[str] = None


@dataclass(frozen=True)
class RunResult:
    state: Hashable
    values: tuple
    outputs: tuple


@dataclass
class PropertyReport:
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def violated(self) -> set:
        return {condition for condition, _ in self.violations}

    def add(self, condition: str, message: str):
        self.violations.append((condition, message))


def identity(index: int, size: int) -> Update:
    return Update(0, tuple(1 if position == index else 0 for position in range(size)))


class RegisterAutomaton:
    """Deterministic register automaton with affine updates over the naturals.

    ``outputs`` holds one acceptance vector per factor: a single automaton returns one value, a product of ``k``
    constraints returns ``k`` values. Registers carry the index of the factor they come from.
    """

    def __init__(
        self,
        states: list,
        initial: Hashable,
        registers: tuple,
        transitions: dict,
        accepting,
        outputs: tuple,
        name: str = "",
    ):
        self.states = list(states)
        self.initial = initial
        self.registers = tuple(registers)
        self.transitions = dict(transitions)
        self.accepting = frozenset(accepting)
        self.outputs = tuple(tuple(vector) for vector in outputs)
        self.name = name

    def __repr__(self) -> str:
        return f"RegisterAutomaton({self.name!r}, states={len(self.states)}, registers={len(self.registers)})"

    @property
    def factors(self) -> int:
        return len(self.outputs)

    @property
    def initial_values(self) -> tuple:
        return tuple(register.init for register in self.registers)

    def transition(self, state, symbol: str) -> Optional[RaTransition]:
        return self.transitions.get((state, symbol))

    def out_transitions(self, state) -> list[RaTransition]:
        result = []
        for symbol in ALPHABET:
            transition = self.transitions.get((state, symbol))
            if transition is not None:
                result.append(transition)
        return result

    def main_index(self, factor: int) -> int:
        for index, register in enumerate(self.registers):
            if register.factor == factor and register.role == RegisterRole.main:
                return index
        raise ValueError(f"Factor {factor} of {self.name} has no main register.")

    def potential_indices(self, factor: int) -> list[int]:
        return [
            index
            for index, register in enumerate(self.registers)
            if register.factor == factor and register.role == RegisterRole.potential
        ]

    def factor_indices(self, factor: int) -> list[int]:
        return [index for index, register in enumerate(self.registers) if register.factor == factor]

    def step(self, state, values: tuple, symbol: str):
        transition = self.transitions.get((state, symbol))
        if transition is None:
            return None, None
        return transition.dst, tuple(update.apply(values) for update in transition.updates)

    def evaluate(self, values: tuple) -> tuple:
        return tuple(sum(coeff * value for coeff, value in zip(vector, values)) for vector in self.outputs)

    def to_json(self) -> dict:
        names = [register.name for register in self.registers]
        transitions = []
        ordered = sorted(self.transitions.items(), key=lambda item: (str(item[0][0]), item[0][1]))
        for (src, symbol), transition in ordered:
            updates = []
            for index, update in enumerate(transition.updates):
                if update == identity(index, len(names)):
                    continue
                coeffs = {names[position]: coeff for position, coeff in enumerate(update.coeffs) if coeff}
                updates.append({"reg": names[index], "const": update.const, "coeffs": coeffs})
            entry = {"from": str(src), "symbol": symbol, "to": str(transition.dst), "updates": updates}
            if transition.tag is not None:
                entry["tag"] = transition.tag
            transitions.append(entry)
        return {
            "name": self.name,
            "states": [str(state) for state in self.states],
            "initial": str(self.initial),
            "accepting": sorted(str(state) for state in self.accepting),
            "registers": [{"name": r.name, "init": r.init, "role": r.role.value} for r in self.registers],
            "acceptance": {"coeffs": {names[i]: c for i, c in enumerate(self.outputs[0]) if c}},
            "transitions": transitions,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RegisterAutomaton":
        registers = tuple(
            Register(entry["name"], entry.get("init", 0), RegisterRole(entry.get("role", "main")))
            for entry in data["registers"]
        )
        names = [register.name for register in registers]
        size = len(names)
        transitions = {}
        for entry in data["transitions"]:
            updates = [identity(index, size) for index in range(size)]
            for spec in entry.get("updates", []):
                coeffs = tuple(spec.get("coeffs", {}).get(name, 0) for name in names)
                updates[names.index(spec["reg"])] = Update(spec.get("const", 0), coeffs)
            transitions[(entry["from"], entry["symbol"])] = RaTransition(
                entry["from"], entry["symbol"], entry["to"], tuple(updates), entry.get("tag")
            )
        acceptance = tuple(data["acceptance"]["coeffs"].get(name, 0) for name in names)
        return cls(
            data["states"],
            data["initial"],
            registers,
            transitions,
            data["accepting"],
            (acceptance,),
            data.get("name", ""),
        )

    def to_dot(self, name: str = None) -> str:
        names = [register.name for register in self.registers]
        index = {state: position for position, state in enumerate(self.states)}
        lines = [f'digraph "{name or self.name}" {{', "  rankdir=LR;", '  __start [shape=point, label=""];']
        for state, position in index.items():
            shape = "doublecircle" if state in self.accepting else "circle"
            lines.append(f'  q{position} [shape={shape}, label="{state}"];')
        lines.append(f"  __start -> q{index[self.initial]};")
        for transition in self.transitions.values():
            label = transition.symbol
            changes = [
                _describe_update(names, position, update)
                for position, update in enumerate(transition.updates)
                if update != identity(position, len(names))
            ]
            if changes:
                label += "\\n" + ", ".join(changes)
            color = ', color="red"' if transition.tag == "found" else ""
            lines.append(f'  q{index[transition.src]} -> q{index[transition.dst]} [label="{label}"{color}];')
        lines.append("}")
        return "\n".join(lines)


def _describe_update(names: list, index: int, update: Update) -> str:
    terms = [names[position] for position, coeff in enumerate(update.coeffs) for _ in range(coeff)]
    if update.const or not terms:
        terms.append(str(update.const))
    return f"{names[index]}<-{'+'.join(terms)}"


def run(ra: RegisterAutomaton, sig: str) -> Optional[RunResult]:
    """Runs the automaton on a signature; register updates read the values before the transition."""
    state, values = ra.initial, ra.initial_values
    for symbol in sig:
        state, values = ra.step(state, values, symbol)
        if state is None:
            return None
    return RunResult(state, values, ra.evaluate(values))


def check_incremental_property(ra: RegisterAutomaton) -> PropertyReport:
    """Checks the update discipline that makes the last main-register value the constraint result.

    Condition ids: 1 natural initial values; 2 affine shape (natural constants, coefficients in {0,1});
    2a main register never reset; 2b main register reads only its own factor; 2c main register reads a potential
    register somewhere when potential registers exist; 3 potential registers read only themselves and are reset
    whenever the main register reads them; 4 the acceptance function returns the main register.
    """
    report = PropertyReport()
    for register in ra.registers:
        if register.init < 0:
            report.add("1", f"Register {register.name} has negative initial value {register.init}.")
    for factor in range(ra.factors):
        try:
            main = ra.main_index(factor)
        except ValueError as e:
            report.add("4", str(e))
            continue
        own = set(ra.factor_indices(factor))
        potentials = ra.potential_indices(factor)
        expected = tuple(1 if index == main else 0 for index in range(len(ra.registers)))
        if ra.outputs[factor] != expected:
            report.add("4", f"Acceptance of factor {factor} is not its main register.")
        reading_transitions = 0
        for transition in ra.transitions.values():
            for index, update in enumerate(transition.updates):
                if index not in own:
                    continue
                if update.const < 0 or any(coeff not in (0, 1) for coeff in update.coeffs):
                    report.add("2", f"Update of {ra.registers[index].name} on {transition.src}-{transition.symbol} "
                                    f"is not of the form const + sum of registers.")
            main_update = transition.updates[main]
            if main_update.coeffs[main] != 1:
                report.add("2a", f"Main register reset on {transition.src}-{transition.symbol}.")
            if any(main_update.coeffs[index] for index in range(len(ra.registers)) if index not in own):
                report.add("2b", f"Main register reads another factor on {transition.src}-{transition.symbol}.")
            if any(main_update.coeffs[index] for index in potentials):
                reading_transitions += 1
            for index in potentials:
                update = transition.updates[index]
                if any(coeff for position, coeff in enumerate(update.coeffs) if position != index):
                    report.add("3", f"Potential register {ra.registers[index].name} reads another register.")
                if main_update.coeffs[index] and update.coeffs[index]:
                    report.add("3", f"Potential register {ra.registers[index].name} is read but not reset on "
                                    f"{transition.src}-{transition.symbol}.")
        if potentials and not reading_transitions:
            report.add("2c", f"Factor {factor} never transfers its potential registers to the main register.")
    return report


def product(ras: list[RegisterAutomaton], name: str = None) -> RegisterAutomaton:
    """Reachable synchronous product; registers are concatenated and tagged with their factor, never merged."""
    offsets = []
    registers = []
    for factor, ra in enumerate(ras):
        offsets.append(len(registers))
        registers.extend(
            replace(register, factor=factor, name=f"{register.name}{factor + 1}") for register in ra.registers
        )
    size = len(registers)

    def lift(update: Update, offset: int) -> Update:
        coeffs = [0] * size
        for position, coeff in enumerate(update.coeffs):
            coeffs[offset + position] = coeff
        return Update(update.const, tuple(coeffs))

    initial = tuple(ra.initial for ra in ras)
    states = [initial]
    seen = {initial}
    transitions = {}
    queue = deque([initial])
    while queue:
        state = queue.popleft()
        for symbol in ALPHABET:
            parts = [ra.transition(component, symbol) for ra, component in zip(ras, state)]
            if any(part is None for part in parts):
                continue
            dst = tuple(part.dst for part in parts)
            updates = tuple(
                lift(update, offsets[factor]) for factor, part in enumerate(parts) for update in part.updates
            )
            tags = {part.tag for part in parts if part.tag is not None}
            tag = "found" if "found" in tags else (tags.pop() if tags else None)
            transitions[(state, symbol)] = RaTransition(state, symbol, dst, updates, tag)
            if dst not in seen:
                seen.add(dst)
                states.append(dst)
                queue.append(dst)
    accepting = [state for state in states if all(c in ra.accepting for ra, c in zip(ras, state))]
    outputs = []
    for factor, ra in enumerate(ras):
        for vector in ra.outputs:
            outputs.append(lift(Update(0, vector), offsets[factor]).coeffs)
    label = name or " x ".join(ra.name for ra in ras)
    return RegisterAutomaton(states, initial, tuple(registers), transitions, accepting, tuple(outputs), label)


def restrict(ra: RegisterAutomaton, dfa: Dfa) -> RegisterAutomaton:
    """Synchronous product of a register automaton with a DFA; accepts where both accept."""
    initial = (ra.initial, dfa.initial)
    states = [initial]
    seen = {initial}
    transitions = {}
    queue = deque([initial])
    while queue:
        state, control = queue.popleft()
        for symbol in ALPHABET:
            transition = ra.transition(state, symbol)
            nxt = dfa.step(control, symbol)
            if transition is None or nxt is None:
                continue
            dst = (transition.dst, nxt)
            transitions[((state, control), symbol)] = replace(transition, src=(state, control), dst=dst)
            if dst not in seen:
                seen.add(dst)
                states.append(dst)
                queue.append(dst)
    accepting = [s for s in states if s[0] in ra.accepting and s[1] in dfa.accepting]
    return RegisterAutomaton(states, initial, ra.registers, transitions, accepting, ra.outputs, ra.name)


def with_found_bits(ra: RegisterAutomaton) -> RegisterAutomaton:
    """Tracks per factor whether the main register may have left its default value.

    A transition sets the bit of a factor when its main update adds a positive constant or reads another register.
    Only states where every bit is set accept, so the automaton covers every run with all results non-default.
    """
    mains = [ra.main_index(factor) for factor in range(ra.factors)]

    def raises(transition: RaTransition, factor: int) -> bool:
        update = transition.updates[mains[factor]]
        reads_other = any(coeff for index, coeff in enumerate(update.coeffs) if index != mains[factor])
        return update.const > 0 or reads_other

    initial = (ra.initial, tuple(0 for _ in mains))
    states = [initial]
    seen = {initial}
    transitions = {}
    queue = deque([initial])
    while queue:
        state, bits = queue.popleft()
        for transition in ra.out_transitions(state):
            nxt_bits = tuple(1 if bit or raises(transition, factor) else 0 for factor, bit in enumerate(bits))
            dst = (transition.dst, nxt_bits)
            transitions[((state, bits), transition.symbol)] = replace(transition, src=(state, bits), dst=dst)
            if dst not in seen:
                seen.add(dst)
                states.append(dst)
                queue.append(dst)
    accepting = [s for s in states if s[0] in ra.accepting and all(s[1])]
    name = f"{ra.name} (non-default)"
    return RegisterAutomaton(states, initial, ra.registers, transitions, accepting, ra.outputs, name)


def _check_monotone(ra: RegisterAutomaton):
    for transition in ra.transitions.values():
        for update in transition.updates:
            if update.const < 0 or any(coeff < 0 for coeff in update.coeffs):
                raise ValueError(
                    f"Update on {transition.src}-{transition.symbol} of {ra.name} subtracts; cannot expand it."
                )
    if any(value < 0 for value in ra.initial_values):
        raise ValueError(f"{ra.name} has negative initial register values.")


def _expand(
    ra: RegisterAutomaton,
    normalize: Callable[[tuple], tuple],
    accept: Optional[Callable[[Hashable, tuple], bool]],
) -> Dfa:
    if accept is None:
        def accept(state, values):
            return state in ra.accepting

    initial = (ra.initial, normalize(ra.initial_values))
    transitions = {}
    seen = {initial}
    queue = deque([initial])
    while queue:
        state, values = queue.popleft()
        for transition in ra.out_transitions(state):
            dst = (transition.dst, normalize(tuple(update.apply(values) for update in transition.updates)))
            transitions[((state, values), transition.symbol)] = dst
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    accepting = {config for config in seen if accept(*config)}
    labels = {config: config for config in seen}
    return Dfa(initial, transitions, accepting, seen, labels)


def capped_expansion(
    ra: RegisterAutomaton, cap: int, accept: Optional[Callable[[Hashable, tuple], bool]] = None
) -> Dfa:
    """Expands registers into states, saturating every value at ``cap + 1``.

    States are pairs ``(state, values)``; a saturated value ``cap + 1`` stands for every value above ``cap``.
    Saturation is exact because updates are monotone: ``min(cap+1, f(x)) = min(cap+1, f(min(cap+1, x)))``.
    """
    if cap < 0:
        raise ValueError(f"Cap must be non-negative, got {cap}.")
    _check_monotone(ra)
    ceiling = cap + 1
    dfa = _expand(ra, lambda values: tuple(min(ceiling, value) for value in values), accept)
    logging.debug(f"Capped expansion of {ra.name} at {cap}: {len(dfa)} states.")
    return dfa


def mod_expansion(
    ra: RegisterAutomaton, modulus: int, accept: Optional[Callable[[Hashable, tuple], bool]] = None
) -> Dfa:
    """Expands registers into states modulo ``modulus``; exact since updates are linear over the integers."""
    if modulus < 1:
        raise ValueError(f"Modulus must be at least 1, got {modulus}.")
    _check_monotone(ra)
    return _expand(ra, lambda values: tuple(value % modulus for value in values), accept)


@dataclass(frozen=True)
class DelayTable:
    """Per state, per factor, per potential register: a lower bound of the register value in that state."""

    delays: dict

    def __getitem__(self, state) -> tuple:
        return self.delays[state]

    def is_zero(self) -> bool:
        return all(value == 0 for per_state in self.delays.values() for per_factor in per_state for value in per_factor)


def delay_table(ra: RegisterAutomaton) -> DelayTable:
    """Lower bounds of potential registers per state.

    A state entered by a transition that resets the register gets 0. Otherwise the bound is the smallest constant
    added on transitions entering from other states, and for the initial state also the initial value; an empty
    minimum is infinite, so an initial state only entered through self-loops keeps its initial value.
    """
    incoming: dict = {state: [] for state in ra.states}
    for transition in ra.transitions.values():
        incoming[transition.dst].append(transition)
    delays = {}
    for state in ra.states:
        per_state = []
        for factor in range(ra.factors):
            per_factor = []
            for index in ra.potential_indices(factor):
                updates = [transition.updates[index] for transition in incoming[state]]
                if any(update.coeffs[index] == 0 for update in updates):
                    per_factor.append(0)
                    continue
                constants = [
                    transition.updates[index].const for transition in incoming[state] if transition.src != state
                ]
                if state == ra.initial:
                    constants.append(ra.registers[index].init)
                per_factor.append(min(constants) if constants else 0)
            per_state.append(tuple(per_factor))
        delays[state] = tuple(per_state)
    return DelayTable(delays)


def delayed_intersection(ra: RegisterAutomaton, table: DelayTable = None) -> RegisterAutomaton:
    """Shifts the guaranteed mass of potential registers onto the transitions that read them.

    Potential registers hold their value minus the delay of the current state; main-register updates that read them
    get the delay of the source state added to their constant. Results are unchanged.
    """
    table = table or delay_table(ra)
    potential_slot = {}
    for factor in range(ra.factors):
        for slot, index in enumerate(ra.potential_indices(factor)):
            potential_slot[index] = (factor, slot)

    def delay(state, index: int) -> int:
        factor, slot = potential_slot[index]
        return table[state][factor][slot]

    transitions = {}
    for key, transition in ra.transitions.items():
        updates = []
        for index, update in enumerate(transition.updates):
            if index in potential_slot:
                own = update.coeffs[index] * delay(transition.src, index)
                const = update.const + own - delay(transition.dst, index)
            else:
                const = update.const + sum(
                    update.coeffs[other] * delay(transition.src, other)
                    for other in potential_slot
                    if update.coeffs[other]
                )
            if const < 0:
                raise ValueError(
                    f"Delayed constant for register {index} on {key} is negative; delays are inconsistent."
                )
            updates.append(Update(const, update.coeffs))
        transitions[key] = replace(transition, updates=tuple(updates))
    registers = tuple(
        replace(register, init=register.init - delay(ra.initial, index)) if index in potential_slot else register
        for index, register in enumerate(ra.registers)
    )
    name = f"{ra.name} (delayed)"
    return RegisterAutomaton(ra.states, ra.initial, registers, transitions, ra.accepting, ra.outputs, name)


@dataclass
class Configuration:
    count: int
    witness: str


def sweep(ra: RegisterAutomaton, max_len: int) -> Iterator[tuple[int, dict]]:
    """Exact configuration sets by word length.

    Yields ``(length, configurations)`` where configurations map ``(state, values)`` to the number of signatures of
    that length reaching it and the lexicographically smallest of them.
    """
    layer = {(ra.initial, ra.initial_values): Configuration(1, "")}
    for length in range(max_len + 1):
        yield length, layer
        if length == max_len:
            break
        nxt: dict = {}
        for (state, values), config in layer.items():
            for transition in ra.out_transitions(state):
                values_next = tuple(update.apply(values) for update in transition.updates)
                key = (transition.dst, values_next)
                word = config.witness + transition.symbol
                existing = nxt.get(key)
                if existing is None:
                    nxt[key] = Configuration(config.count, word)
                else:
                    existing.count += config.count
                    if word < existing.witness:
                        existing.witness = word
        layer = nxt


def results_by_length(ra: RegisterAutomaton, max_len: int) -> Iterator[tuple[int, dict]]:
    """Aggregates a sweep over accepting configurations into ``outputs -> Configuration`` per word length."""
    for length, layer in sweep(ra, max_len):
        results: dict = {}
        for (state, values), config in layer.items():
            if state not in ra.accepting:
                continue
            key = ra.evaluate(values)
            existing = results.get(key)
            if existing is None:
                results[key] = Configuration(config.count, config.witness)
            else:
                existing.count += config.count
                existing.witness = min(existing.witness, config.witness)
        yield length, results
