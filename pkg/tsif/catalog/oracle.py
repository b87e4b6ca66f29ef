"""Brute-force semantics of time-series constraints; every automaton in the package is checked against it."""
from __future__ import annotations

import logging
from typing import Iterator

from tsif.catalog.regex import compile_pattern
from tsif.catalog.signature import enumerate_signatures
from tsif.constants import Feature


def maximal_occurrences(regex, sig: str) -> list[tuple[int, int]]:
    """Maximal windows of the signature matching the pattern, 1-based and inclusive, ordered by start.

    A window ``(i, j)`` is maximal when ``sig[i..j]`` is in the pattern language and no strictly larger window
    containing it is.
    """
    dfa = compile_pattern(regex.pattern)
    longest = []
    for start in range(len(sig)):
        state = dfa.initial
        end = None
        for position in range(start, len(sig)):
            state = dfa.step(state, sig[position])
            if state is None:
                break
            if state in dfa.accepting:
                end = position
        longest.append(end)
    result = []
    reach = -1
    for start, end in enumerate(longest):
        if end is None:
            continue
        # Only the longest window of a start can be maximal; an earlier start reaching as far contains it.
        if end > reach:
            result.append((start + 1, end + 1))
            reach = end
    return result


def feature_values(spec, sig: str) -> list[int]:
    occurrences = maximal_occurrences(spec.regex, sig)
    if spec.feature == Feature.one:
        return [1 for _ in occurrences]
    trim = spec.regex.b_trim + spec.regex.a_trim
    return [j - i + 2 - trim for i, j in occurrences]


def eval_constraint(spec, sig: str) -> int:
    """Sum of the feature over the maximal occurrences; 0 without any occurrence."""
    return sum(feature_values(spec, sig))


def results(spec, n: int) -> Iterator[tuple[str, int]]:
    for sig in enumerate_signatures(n - 1):
        yield sig, eval_constraint(spec, sig)


def brute_force_max(spec, n: int) -> int:
    """Largest result over every signature of a series of length ``n``."""
    if n < 1:
        raise ValueError(f"Series length must be at least 1, got {n}.")
    best = max(value for _, value in results(spec, n))
    logging.debug(f"Brute-force maximum of {spec.name} at n={n}: {best}.")
    return best


def loss(spec, sig: str, min_length_by_result: dict) -> int:
    """Series length minus the shortest series length giving the same result."""
    return len(sig) + 1 - min_length_by_result[eval_constraint(spec, sig)]


def shortest_lengths_by_result(spec, max_n: int) -> dict:
    """Shortest series length reaching each result value, over series of length up to ``max_n``."""
    shortest = {}
    for n in range(1, max_n + 1):
        for _, value in results(spec, n):
            shortest.setdefault(value, n)
    return shortest
