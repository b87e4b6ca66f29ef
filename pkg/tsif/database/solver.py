"""A small labelling search over signatures, to measure how invariants cut a search.

The search fixes signature letters from left to right, smallest symbol first. At every node each constraint is
propagated on its own: the exact interval of its reachable results from the current register configuration must
contain its target. With invariants, the database records of the pair are also applied to the unlabelled suffix,
read as a series of its own. Its results are tied to the targets through the gain of the suffix from the current
configuration compared with its gain from the initial one.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import gin
import numpy as np

from tsif.automata.register import RegisterAutomaton
from tsif.catalog.loader import Catalog, default_catalog
from tsif.catalog.oracle import eval_constraint
from tsif.catalog.signature import TimeSeries, random_series
from tsif.catalog.specs import ConstraintSpec
from tsif.constants import ALPHABET
from tsif.database.records import InvariantRecord
from tsif.synthesis.linear import synthesize


@dataclass
class SearchStats:
    nodes: int = 0
    backtracks: int = 0
    solved: bool = False
    witness: Optional[TimeSeries] = None
    budget_exhausted: bool = False
    excluded_by: Optional[str] = None
    targets: tuple = ()


class FactorBounds:
    """Exact result intervals of one constraint from a configuration and a number of remaining letters.

    The main register only grows by its own increments, so the final result is the current main value plus a gain
    that depends on the state and the potential registers alone.
    """

    def __init__(self, ra: RegisterAutomaton):
        self.ra = ra
        self.main = ra.main_index(0)
        self.reach = lru_cache(maxsize=None)(self._reach)
        self.slack = lru_cache(maxsize=None)(self._slack)

    def _reach(self, state, values: tuple, remaining: int) -> Optional[tuple[int, int]]:
        if remaining == 0:
            if state not in self.ra.accepting:
                return None
            result = self.ra.evaluate(values)[0]
            return result, result
        lo = hi = None
        for symbol in ALPHABET:
            dst, values_next = self.ra.step(state, values, symbol)
            if dst is None:
                continue
            interval = self.reach(dst, values_next, remaining - 1)
            if interval is None:
                continue
            lo = interval[0] if lo is None else min(lo, interval[0])
            hi = interval[1] if hi is None else max(hi, interval[1])
        return None if lo is None else (lo, hi)

    def strip(self, values: tuple) -> tuple:
        return tuple(0 if index == self.main else value for index, value in enumerate(values))

    def _advance(self, config: tuple, symbol: str):
        dst, values = self.ra.step(*config, symbol)
        if dst is None:
            return None, 0
        return (dst, self.strip(values)), values[self.main]

    def _slack(self, node: tuple, standalone: tuple, remaining: int) -> Optional[tuple[int, int]]:
        """Range of the gain from ``node`` minus the gain from ``standalone`` over the suffixes both accept.

        Both configurations carry a zero main register.
        """
        if remaining == 0:
            both = node[0] in self.ra.accepting and standalone[0] in self.ra.accepting
            return (0, 0) if both else None
        lo = hi = None
        for symbol in ALPHABET:
            node_next, node_gain = self._advance(node, symbol)
            standalone_next, standalone_gain = self._advance(standalone, symbol)
            if node_next is None or standalone_next is None:
                continue
            interval = self.slack(node_next, standalone_next, remaining - 1)
            if interval is None:
                continue
            shift = node_gain - standalone_gain
            lo = interval[0] + shift if lo is None else min(lo, interval[0] + shift)
            hi = interval[1] + shift if hi is None else max(hi, interval[1] + shift)
        return None if lo is None else (lo, hi)

    def suffix_interval(self, config: tuple, remaining: int, target: int) -> Optional[tuple[int, int]]:
        """Results the suffix of ``remaining`` letters may have on its own if the final result is ``target``."""
        state, values = config
        initial = (self.ra.initial, self.strip(self.ra.initial_values))
        slack = self.slack((state, self.strip(values)), initial, remaining)
        own = self.reach(self.ra.initial, self.ra.initial_values, remaining)
        if slack is None or own is None:
            return None
        base = self.ra.initial_values[self.main] + target - values[self.main]
        lo, hi = max(base - slack[1], own[0]), min(base - slack[0], own[1])
        return (lo, hi) if lo <= hi else None


@lru_cache(maxsize=None)
def factor_bounds(ra: RegisterAutomaton) -> FactorBounds:
    return FactorBounds(ra)


class SuffixPruner:
    """Applies the records of a pair to the series formed by the last labelled value and the unlabelled letters."""

    def __init__(self, pair: Sequence[ConstraintSpec], records: Sequence[InvariantRecord], catalog: Catalog):
        self.pair = tuple(pair)
        names = tuple(spec.name for spec in pair)
        self.records = [record for record in records if tuple(record.pair) == names]
        self.bounds = [factor_bounds(catalog.register_automaton(spec)) for spec in pair]

    def upps(self, n: int) -> tuple:
        return tuple(spec.bound.value(n) if spec.bound is not None else 0 for spec in self.pair)

    def excluded_by(self, configs: Sequence[tuple], remaining: int, targets: Sequence[int]) -> Optional[str]:
        """The record ruling out every suffix result compatible with the targets, or None when one survives."""
        if not self.records:
            return None
        intervals = [
            bound.suffix_interval(config, remaining, target)
            for bound, config, target in zip(self.bounds, configs, targets)
        ]
        if any(interval is None for interval in intervals):
            return "suffix results out of reach"
        n = remaining + 1
        upps = self.upps(n)
        blocking = None
        for results in itertools.product(*(range(lo, hi + 1) for lo, hi in intervals)):
            failed = next((record for record in self.records if not record.holds(n, results, upps)), None)
            if failed is None:
                return None
            blocking = blocking or failed
        return blocking.describe()


def random_instance(pair: Sequence[ConstraintSpec], n: int, seed: int) -> tuple:
    """Results of a random series of length ``n``, hence a feasible target."""
    series = random_series(np.random.default_rng(seed), n)
    return tuple(eval_constraint(spec, series.signature) for spec in pair)


@gin.configurable("DemoSolver")
def demo_solve(
    pair: Sequence[ConstraintSpec],
    targets: Optional[Sequence[int]],
    n: int,
    use_invariants: bool = True,
    seed: Optional[int] = None,
    records: Sequence[InvariantRecord] = None,
    node_budget: int = 200_000,
    catalog: Catalog = None,
) -> SearchStats:
    """Looks for a series of length ``n`` whose constraint results equal ``targets``.

    Without ``targets`` they are taken from a random series drawn from ``seed``. Without ``records`` the linear
    invariants of the pair are synthesized.
    """
    if n < 1:
        raise ValueError(f"Series length must be at least 1, got {n}.")
    catalog = catalog or default_catalog()
    targets = tuple(targets) if targets is not None else random_instance(pair, n, seed or 0)
    stats = SearchStats(targets=targets)
    pruner = None
    if use_invariants:
        if records is None:
            records = [InvariantRecord.from_linear(invariant) for invariant in synthesize(pair, catalog=catalog)]
        pruner = SuffixPruner(pair, records, catalog)
        upps = pruner.upps(n)
        for record in pruner.records:
            if not record.holds(n, targets, upps):
                stats.excluded_by = record.describe()
                logging.debug(f"Target {targets} at n={n} excluded by {stats.excluded_by}.")
                return stats

    automata = [catalog.register_automaton(spec) for spec in pair]
    bounds = [factor_bounds(ra) for ra in automata]

    def search(configs: list, prefix: str, remaining: int) -> bool:
        stats.nodes += 1
        if stats.nodes > node_budget:
            stats.budget_exhausted = True
            return False
        for (state, values), bound, target in zip(configs, bounds, targets):
            interval = bound.reach(state, values, remaining)
            if interval is None or not interval[0] <= target <= interval[1]:
                return False
        if pruner is not None and prefix and pruner.excluded_by(configs, remaining, targets) is not None:
            return False
        if remaining == 0:
            stats.witness = TimeSeries.from_signature(prefix)
            return True
        for symbol in ALPHABET:
            children = [ra.step(state, values, symbol) for ra, (state, values) in zip(automata, configs)]
            if any(state is None for state, _ in children):
                continue
            if search(children, prefix + symbol, remaining - 1):
                return True
            if stats.budget_exhausted:
                return False
            stats.backtracks += 1
        return False

    root = [(ra.initial, ra.initial_values) for ra in automata]
    stats.solved = search(root, "", n - 1)
    logging.debug(
        f"Search for {targets} at n={n}: {'solved' if stats.solved else 'unsolved'}, "
        f"{stats.nodes} nodes, {stats.backtracks} backtracks."
    )
    return stats
