"""Compiler from catalog patterns to DFAs.

Patterns use the signature letters, ``|``, ``*``, ``+``, ``?``, parentheses and ``ε``; whitespace is ignored.
Compilation goes through a Thompson NFA and the subset construction, followed by minimisation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from tsif.automata.dfa import Dfa, minimize
from tsif.constants import ALPHABET


@dataclass(frozen=True)
class Sym:
    symbol: str


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Concat:
    parts: tuple


@dataclass(frozen=True)
class Alt:
    options: tuple


@dataclass(frozen=True)
class Star:
    inner: "Node"


@dataclass(frozen=True)
class Plus:
    inner: "Node"


Node = Union[Sym, Epsilon, Concat, Alt, Star, Plus]


class _Parser:
    def __init__(self, pattern: str):
        self.pattern = pattern
        self.tokens = [char for char in pattern if not char.isspace()]
        self.position = 0

    def peek(self):
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def take(self) -> str:
        token = self.peek()
        self.position += 1
        return token

    def parse(self) -> Node:
        node = self.union()
        if self.peek() is not None:
            raise ValueError(f"Unexpected '{self.peek()}' at position {self.position} of pattern {self.pattern!r}.")
        return node

    def union(self) -> Node:
        options = [self.concat()]
        while self.peek() == "|":
            self.take()
            options.append(self.concat())
        return options[0] if len(options) == 1 else Alt(tuple(options))

    def concat(self) -> Node:
        parts = []
        while self.peek() is not None and self.peek() not in "|)":
            parts.append(self.repeat())
        if not parts:
            return Epsilon()
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def repeat(self) -> Node:
        node = self.atom()
        while self.peek() is not None and self.peek() in "*+?":
            operator = self.take()
            if operator == "*":
                node = Star(node)
            elif operator == "+":
                node = Plus(node)
            else:
                node = Alt((node, Epsilon()))
        return node

    def atom(self) -> Node:
        token = self.take()
        if token == "(":
            node = self.union()
            if self.take() != ")":
                raise ValueError(f"Unbalanced parenthesis in pattern {self.pattern!r}.")
            return node
        if token == "ε":
            return Epsilon()
        if token in ALPHABET:
            return Sym(token)
        raise ValueError(f"Unexpected '{token}' in pattern {self.pattern!r}.")


def parse(pattern: str) -> Node:
    return _Parser(pattern).parse()


class _Nfa:
    def __init__(self):
        self.epsilon: dict = {}
        self.moves: dict = {}
        self.size = 0

    def new_state(self) -> int:
        self.size += 1
        return self.size - 1

    def add_epsilon(self, src: int, dst: int):
        self.epsilon.setdefault(src, set()).add(dst)

    def add_move(self, src: int, symbol: str, dst: int):
        self.moves.setdefault((src, symbol), set()).add(dst)

    def build(self, node: Node) -> tuple[int, int]:
        start, end = self.new_state(), self.new_state()
        if isinstance(node, Sym):
            self.add_move(start, node.symbol, end)
        elif isinstance(node, Epsilon):
            self.add_epsilon(start, end)
        elif isinstance(node, Concat):
            current = start
            for part in node.parts:
                part_start, part_end = self.build(part)
                self.add_epsilon(current, part_start)
                current = part_end
            self.add_epsilon(current, end)
        elif isinstance(node, Alt):
            for option in node.options:
                option_start, option_end = self.build(option)
                self.add_epsilon(start, option_start)
                self.add_epsilon(option_end, end)
        elif isinstance(node, (Star, Plus)):
            inner_start, inner_end = self.build(node.inner)
            self.add_epsilon(start, inner_start)
            self.add_epsilon(inner_end, inner_start)
            self.add_epsilon(inner_end, end)
            if isinstance(node, Star):
                self.add_epsilon(start, end)
        else:
            raise TypeError(f"Unknown pattern node {node!r}.")
        return start, end

    def closure(self, states) -> frozenset:
        stack = list(states)
        seen = set(states)
        while stack:
            state = stack.pop()
            for nxt in self.epsilon.get(state, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return frozenset(seen)


def to_dfa(node: Node) -> Dfa:
    nfa = _Nfa()
    start, end = nfa.build(node)
    initial = nfa.closure([start])
    transitions = {}
    seen = {initial}
    stack = [initial]
    while stack:
        subset = stack.pop()
        for symbol in ALPHABET:
            moved = set()
            for state in subset:
                moved |= nfa.moves.get((state, symbol), set())
            if not moved:
                continue
            target = nfa.closure(moved)
            transitions[(subset, symbol)] = target
            if target not in seen:
                seen.add(target)
                stack.append(target)
    accepting = {subset for subset in seen if end in subset}
    return minimize(Dfa(initial, transitions, accepting, seen))


@lru_cache(maxsize=None)
def compile_pattern(pattern: str) -> Dfa:
    """Minimal partial DFA of a catalog pattern; cached per pattern string."""
    return to_dfa(parse(pattern))


def shortest_word_length(pattern: str) -> int:
    word = compile_pattern(pattern).shortest_word()
    if word is None:
        raise ValueError(f"Pattern {pattern!r} has an empty language.")
    return len(word)
