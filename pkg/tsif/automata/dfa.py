from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Hashable, Iterator, Optional

from tsif.constants import ALPHABET


class LanguageKind(str, Enum):
    empty = "empty"
    finite = "finite"
    infinite = "infinite"


@dataclass(frozen=True)
class LanguageStatus:
    kind: LanguageKind
    longest_word_len: Optional[int] = None

    @property
    def is_empty(self) -> bool:
        return self.kind == LanguageKind.empty


class Dfa:
    """Partial deterministic automaton over the signature alphabet.

    A missing transition leads to an implicit dead state. States are arbitrary hashable values; ``labels`` optionally
    maps states to the register valuation they encode (set by the register-automaton expansions).
    """

    def __init__(
        self,
        initial: Hashable,
        transitions: dict,
        accepting,
        states=None,
        labels: dict = None,
        alphabet: tuple = ALPHABET,
    ):
        self.initial = initial
        self.transitions = dict(transitions)
        self.accepting = frozenset(accepting)
        self.alphabet = alphabet
        collected = {initial} | set(self.accepting)
        for (src, _), dst in self.transitions.items():
            collected.add(src)
            collected.add(dst)
        if states is not None:
            collected |= set(states)
        self.states = frozenset(collected)
        self.labels = labels or {}

    def __len__(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        return f"Dfa(states={len(self.states)}, accepting={len(self.accepting)}, arcs={len(self.transitions)})"

    def step(self, state, symbol: str):
        return self.transitions.get((state, symbol))

    def run(self, word: str):
        state = self.initial
        for symbol in word:
            state = self.transitions.get((state, symbol))
            if state is None:
                return None
        return state

    def accepts(self, word: str) -> bool:
        state = self.run(word)
        return state is not None and state in self.accepting

    def successors(self, state) -> list[tuple[str, Hashable]]:
        result = []
        for symbol in self.alphabet:
            dst = self.transitions.get((state, symbol))
            if dst is not None:
                result.append((symbol, dst))
        return result

    def predecessors(self) -> dict:
        inverse = {state: [] for state in self.states}
        for (src, symbol), dst in self.transitions.items():
            inverse[dst].append((symbol, src))
        return inverse

    def reachable(self) -> set:
        seen = {self.initial}
        queue = deque([self.initial])
        while queue:
            state = queue.popleft()
            for _, dst in self.successors(state):
                if dst not in seen:
                    seen.add(dst)
                    queue.append(dst)
        return seen

    def coreachable(self) -> set:
        inverse = self.predecessors()
        seen = set(self.accepting)
        queue = deque(self.accepting)
        while queue:
            state = queue.popleft()
            for _, src in inverse[state]:
                if src not in seen:
                    seen.add(src)
                    queue.append(src)
        return seen

    def trim(self) -> "Dfa":
        """Restricts the automaton to states that are reachable and co-reachable."""
        useful = self.reachable() & self.coreachable()
        if self.initial not in useful:
            return Dfa(self.initial, {}, (), alphabet=self.alphabet)
        transitions = {
            (src, symbol): dst for (src, symbol), dst in self.transitions.items() if src in useful and dst in useful
        }
        labels = {state: label for state, label in self.labels.items() if state in useful}
        return Dfa(self.initial, transitions, self.accepting & useful, useful, labels, self.alphabet)

    def complete(self, sink: Hashable = "__sink__") -> "Dfa":
        """Adds an explicit non-accepting sink for every missing transition."""
        states = set(self.states) | {sink}
        transitions = dict(self.transitions)
        for state in states:
            for symbol in self.alphabet:
                transitions.setdefault((state, symbol), sink)
        return Dfa(self.initial, transitions, self.accepting, states, dict(self.labels), self.alphabet)

    def complement(self) -> "Dfa":
        completed = self.complete()
        return Dfa(
            completed.initial, completed.transitions, completed.states - completed.accepting, completed.states,
            alphabet=self.alphabet,
        )

    def relabel(self) -> "Dfa":
        """Renames reachable states to 0..m-1 in breadth-first order of the alphabet."""
        order = {self.initial: 0}
        queue = deque([self.initial])
        while queue:
            state = queue.popleft()
            for _, dst in self.successors(state):
                if dst not in order:
                    order[dst] = len(order)
                    queue.append(dst)
        transitions = {
            (order[src], symbol): order[dst] for (src, symbol), dst in self.transitions.items() if src in order
        }
        accepting = [order[state] for state in self.accepting if state in order]
        labels = {order[state]: label for state, label in self.labels.items() if state in order}
        return Dfa(0, transitions, accepting, order.values(), labels, self.alphabet)

    def language(self) -> LanguageStatus:
        return language_emptiness_and_finiteness(self)

    def shortest_word(self) -> Optional[str]:
        """Returns the lexicographically smallest among the shortest accepted words."""
        words = _shortest_words_from(self, self.initial)
        candidates = [words[state] for state in self.accepting if state in words]
        if not candidates:
            return None
        return min(candidates, key=lambda word: (len(word), word))

    def pumped_witness(self) -> Optional[str]:
        """Returns an accepted word that passes once around a cycle, or None for a finite language."""
        trimmed = self.trim()
        if not trimmed.accepting:
            return None
        best = None
        to_state = _shortest_words_from(trimmed, trimmed.initial)
        for state in sorted(trimmed.states, key=repr):
            loop = _shortest_cycle(trimmed, state)
            if loop is None:
                continue
            tails = _shortest_words_from(trimmed, state)
            tail = min((tails[acc] for acc in trimmed.accepting if acc in tails), key=lambda w: (len(w), w))
            word = to_state[state] + loop + tail
            if best is None or (len(word), word) < (len(best), best):
                best = word
        return best

    def words(self, max_len: int) -> Iterator[str]:
        """Enumerates the accepted words up to a length, in length-lexicographic order."""
        layer = [("", self.initial)]
        for length in range(max_len + 1):
            for word, state in layer:
                if state in self.accepting:
                    yield word
            if length == max_len:
                break
            layer = [(word + symbol, dst) for word, state in layer for symbol, dst in self.successors(state)]

    def to_json(self) -> dict:
        relabeled = self.relabel()
        return {
            "states": sorted(relabeled.states),
            "initial": relabeled.initial,
            "accepting": sorted(relabeled.accepting),
            "transitions": [
                {"from": src, "symbol": symbol, "to": dst}
                for (src, symbol), dst in sorted(relabeled.transitions.items(), key=lambda item: item[0])
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Dfa":
        transitions = {(arc["from"], arc["symbol"]): arc["to"] for arc in data["transitions"]}
        return cls(data["initial"], transitions, data["accepting"], data["states"])

    def to_dot(self, name: str = "dfa") -> str:
        relabeled = self.relabel()
        lines = [f'digraph "{name}" {{', "  rankdir=LR;", '  __start [shape=point, label=""];']
        for state in sorted(relabeled.states):
            shape = "doublecircle" if state in relabeled.accepting else "circle"
            lines.append(f'  q{state} [shape={shape}, label="{state}"];')
        lines.append(f"  __start -> q{relabeled.initial};")
        for (src, symbol), dst in sorted(relabeled.transitions.items(), key=lambda item: item[0]):
            lines.append(f'  q{src} -> q{dst} [label="{symbol}"];')
        lines.append("}")
        return "\n".join(lines)


def _shortest_words_from(dfa: Dfa, start) -> dict:
    words = {start: ""}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for symbol, dst in dfa.successors(state):
            if dst not in words:
                words[dst] = words[state] + symbol
                queue.append(dst)
    return words


def _shortest_cycle(dfa: Dfa, state) -> Optional[str]:
    words = {}
    queue = deque()
    for symbol, dst in dfa.successors(state):
        if dst == state:
            return symbol
        if dst not in words:
            words[dst] = symbol
            queue.append(dst)
    while queue:
        current = queue.popleft()
        for symbol, dst in dfa.successors(current):
            if dst == state:
                return words[current] + symbol
            if dst not in words:
                words[dst] = words[current] + symbol
                queue.append(dst)
    return None


def universal() -> Dfa:
    return Dfa(0, {(0, symbol): 0 for symbol in ALPHABET}, {0})


def empty() -> Dfa:
    return Dfa(0, {}, ())


def length_at_least(min_len: int) -> Dfa:
    """Accepts the words of length at least ``min_len``."""
    min_len = max(0, min_len)
    transitions = {}
    for state in range(min_len + 1):
        for symbol in ALPHABET:
            transitions[(state, symbol)] = min(state + 1, min_len)
    return Dfa(0, transitions, {min_len})


def length_mod(modulus: int, residue: int, min_len: int = 0) -> Dfa:
    """Accepts the words whose length is congruent to ``residue`` modulo ``modulus`` and at least ``min_len``."""
    if modulus < 1:
        raise ValueError(f"Modulus must be positive, got {modulus}.")
    residue %= modulus
    min_len = max(0, min_len)
    transitions = {}
    accepting = set()
    # States count up to min_len exactly, then cycle through the residues.
    for length in range(min_len + modulus):
        nxt = length + 1 if length + 1 < min_len + modulus else min_len
        for symbol in ALPHABET:
            transitions[(length, symbol)] = nxt
        if length >= min_len and length % modulus == residue:
            accepting.add(length)
    return Dfa(0, transitions, accepting)


def from_predicate(accepts: Callable[[str], bool], max_len: int) -> Dfa:
    """Builds the prefix-tree automaton of the accepted words up to ``max_len``; used for finite languages."""
    transitions = {}
    accepting = set()
    layer = [""]
    for length in range(max_len + 1):
        for word in layer:
            if accepts(word):
                accepting.add(word)
        if length == max_len:
            break
        nxt = []
        for word in layer:
            for symbol in ALPHABET:
                transitions[(word, symbol)] = word + symbol
                nxt.append(word + symbol)
        layer = nxt
    return minimize(Dfa("", transitions, accepting))


def intersect(a: Dfa, b: Dfa) -> Dfa:
    """Synchronous product restricted to reachable pairs; accepts L(a) ∩ L(b)."""
    if a.alphabet != b.alphabet:
        raise ValueError("Cannot intersect automata over different alphabets.")
    initial = (a.initial, b.initial)
    transitions = {}
    seen = {initial}
    queue = deque([initial])
    while queue:
        left, right = queue.popleft()
        for symbol in a.alphabet:
            dst_left = a.transitions.get((left, symbol))
            dst_right = b.transitions.get((right, symbol))
            if dst_left is None or dst_right is None:
                continue
            dst = (dst_left, dst_right)
            transitions[((left, right), symbol)] = dst
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    accepting = {(left, right) for left, right in seen if left in a.accepting and right in b.accepting}
    return Dfa(initial, transitions, accepting, seen, alphabet=a.alphabet)


def intersect_all(automata: list[Dfa]) -> Dfa:
    if not automata:
        return universal()
    result = automata[0]
    for other in automata[1:]:
        result = minimize(intersect(result, other))
    return result


def minimize(a: Dfa) -> Dfa:
    """Trims the automaton, then merges equivalent states by Hopcroft's partition refinement."""
    trimmed = a.trim()
    if not trimmed.accepting:
        return Dfa(0, {}, (), alphabet=a.alphabet)
    numbered = trimmed.relabel()
    sink = len(numbered.states)
    completed = numbered.complete(sink=sink)
    states = set(completed.states)
    accepting = set(completed.accepting)
    inverse = {(state, symbol): set() for state in states for symbol in a.alphabet}
    for (src, symbol), dst in completed.transitions.items():
        inverse[(dst, symbol)].add(src)

    partition = [block for block in (accepting, states - accepting) if block]
    worklist = [min(partition, key=len)] if len(partition) == 2 else list(partition)
    while worklist:
        splitter = worklist.pop()
        for symbol in a.alphabet:
            preimage = set()
            for state in splitter:
                preimage |= inverse[(state, symbol)]
            if not preimage:
                continue
            refined = []
            for block in partition:
                inside = block & preimage
                outside = block - preimage
                if inside and outside:
                    refined.extend((inside, outside))
                    if block in worklist:
                        worklist.remove(block)
                        worklist.extend((inside, outside))
                    else:
                        worklist.append(min(inside, outside, key=len))
                else:
                    refined.append(block)
            partition = refined

    block_of = {}
    for index, block in enumerate(partition):
        for state in block:
            block_of[state] = index
    dead = block_of[sink]
    transitions = {}
    for (src, symbol), dst in completed.transitions.items():
        if block_of[src] == dead or block_of[dst] == dead:
            continue
        transitions[(block_of[src], symbol)] = block_of[dst]
    accepting_blocks = {block_of[state] for state in accepting}
    result = Dfa(block_of[completed.initial], transitions, accepting_blocks, alphabet=a.alphabet).relabel()
    logging.debug(f"Minimized automaton from {len(a.states)} to {len(result.states)} states.")
    return result


def language_emptiness_and_finiteness(a: Dfa) -> LanguageStatus:
    trimmed = a.trim()
    if not trimmed.accepting:
        return LanguageStatus(LanguageKind.empty)
    # Kahn's algorithm on the useful part: a leftover state lies on a cycle.
    indegree = {state: 0 for state in trimmed.states}
    for (_, _), dst in trimmed.transitions.items():
        indegree[dst] += 1
    order = []
    queue = deque(state for state, degree in indegree.items() if degree == 0)
    while queue:
        state = queue.popleft()
        order.append(state)
        for _, dst in trimmed.successors(state):
            indegree[dst] -= 1
            if indegree[dst] == 0:
                queue.append(dst)
    if len(order) < len(trimmed.states):
        return LanguageStatus(LanguageKind.infinite)
    longest = {state: None for state in trimmed.states}
    longest[trimmed.initial] = 0
    for state in order:
        if longest[state] is None:
            continue
        for _, dst in trimmed.successors(state):
            if longest[dst] is None or longest[dst] < longest[state] + 1:
                longest[dst] = longest[state] + 1
    return LanguageStatus(LanguageKind.finite, max(longest[state] for state in trimmed.accepting))


def shortest_word_through_cycle(a: Dfa, d: int) -> Optional[str]:
    """Shortest accepted word whose path visits a state lying on a closed walk of length ``d``.

    Words of equal length are ordered by the alphabet, the smallest one is returned.
    """
    if d < 1:
        raise ValueError(f"Cycle length must be positive, got {d}.")
    trimmed = a.trim()
    if not trimmed.accepting:
        return None
    on_cycle = set()
    for state in trimmed.states:
        frontier = {state}
        for _ in range(d):
            frontier = {dst for current in frontier for _, dst in trimmed.successors(current)}
        if state in frontier:
            on_cycle.add(state)
    if not on_cycle:
        return None
    # Nodes pair a state with whether the path met a cycle state.
    start = (trimmed.initial, trimmed.initial in on_cycle)
    parents = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        state, through = node
        if through and state in trimmed.accepting:
            return _spell(parents, node)
        for symbol, dst in trimmed.successors(state):
            child = (dst, through or dst in on_cycle)
            if child not in parents:
                parents[child] = (symbol, node)
                queue.append(child)
    return None


def min_length_through_cycle(a: Dfa, d: int) -> Optional[int]:
    word = shortest_word_through_cycle(a, d)
    return None if word is None else len(word)


def _spell(parents: dict, node) -> str:
    symbols = []
    while parents[node] is not None:
        symbol, node = parents[node]
        symbols.append(symbol)
    return "".join(reversed(symbols))
