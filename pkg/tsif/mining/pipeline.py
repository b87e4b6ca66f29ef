from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import gin

from tsif.catalog.loader import Catalog, default_catalog
from tsif.catalog.specs import ConstraintSpec
from tsif.mining.dataset import Dataset, generate_dataset
from tsif.mining.dominance import dominance_filter
from tsif.mining.hypotheses import enumerate_hypotheses, filter_consistent
from tsif.mining.prove import NonLinearInvariant, prove_all


@dataclass
class MiningResult:
    dataset: Dataset
    hypotheses: int = 0
    consistent: list = field(default_factory=list)
    proved: list = field(default_factory=list)
    refuted: list = field(default_factory=list)
    final: list[NonLinearInvariant] = field(default_factory=list)


@gin.configurable("Mining")
def mine(
    pair: Sequence[ConstraintSpec],
    n_range: tuple = (7, 12),
    constants: tuple = (0, 1, 2, 3, 4),
    moduli: tuple = (2, 3),
    max_conjuncts: int = 3,
    dominance_range: tuple = (2, 20),
    catalog: Catalog = None,
) -> MiningResult:
    """Non-linear invariants of a constraint pair: hypotheses consistent with the dataset, proved, then pruned."""
    catalog = catalog or default_catalog()
    names = " x ".join(spec.name for spec in pair)
    dataset = generate_dataset(pair, tuple(n_range), catalog)
    hypotheses = enumerate_hypotheses(pair, constants, moduli, max_conjuncts)
    result = MiningResult(dataset, len(hypotheses))
    result.consistent = filter_consistent(hypotheses, dataset, pair)
    invariants = prove_all(result.consistent, pair, catalog)
    result.proved = [invariant for invariant in invariants if invariant.proved]
    result.refuted = [invariant for invariant in invariants if not invariant.proved]
    result.final = dominance_filter(result.proved, pair, tuple(dominance_range))
    logging.info(
        f"Mining {names}: {result.hypotheses} hypotheses, {len(result.consistent)} consistent, "
        f"{len(result.proved)} proved, {len(result.final)} kept."
    )
    return result
