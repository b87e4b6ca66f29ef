"""Boolean functions over atomic relations: enumeration and consistency with a dataset."""
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from tsif.catalog.specs import ConstraintSpec
from tsif.conditional.relations import (
    AtomicRelation,
    LenMod,
    ResEq,
    ResGapEq,
    ResGeq,
    ResLeq,
    ResLin,
    ResMod,
    parse_relation,
    relation_from_json,
)
from tsif.mining.dataset import Dataset


@dataclass(frozen=True)
class BooleanFunction:
    """Conjunction of distinct atomic relations, at most one of them reading both results."""

    conjuncts: tuple

    def __post_init__(self):
        if not self.conjuncts:
            raise ValueError("A Boolean function needs at least one conjunct.")
        ordered = tuple(sorted(set(self.conjuncts), key=lambda rel: rel.key()))
        if len(ordered) != len(self.conjuncts):
            raise ValueError(f"Repeated conjunct in {self.conjuncts}.")
        if sum(rel.dependent for rel in ordered) > 1:
            raise ValueError("A Boolean function has at most one dependent conjunct.")
        object.__setattr__(self, "conjuncts", ordered)

    @property
    def size(self) -> int:
        return len(self.conjuncts)

    @property
    def dependent(self) -> list[AtomicRelation]:
        return [rel for rel in self.conjuncts if rel.dependent]

    @property
    def independent(self) -> list[AtomicRelation]:
        return [rel for rel in self.conjuncts if not rel.dependent]

    def key(self) -> tuple:
        return self.size, tuple(rel.key() for rel in self.conjuncts)

    def holds(self, n: int, results: Sequence[int], upps: Sequence[int]) -> bool:
        return all(rel.holds(n, results, upps) for rel in self.conjuncts)

    def describe(self) -> str:
        return " and ".join(rel.describe() for rel in self.conjuncts)

    def __str__(self) -> str:
        return self.describe()

    def to_json(self) -> list[dict]:
        return [rel.to_json() for rel in self.conjuncts]

    @classmethod
    def from_json(cls, data: list[dict]) -> "BooleanFunction":
        return cls(tuple(relation_from_json(entry) for entry in data))

    @classmethod
    def parse(cls, text: str) -> "BooleanFunction":
        """Parses ``describe`` output; ``and``, ``&`` and ``∧`` all separate conjuncts."""
        parts = [part for part in re.split(r"\s+and\s+|\s*[&∧]\s*", text.strip()) if part]
        return cls(tuple(parse_relation(part) for part in parts))


def atomic_relations(
    pair: Sequence[ConstraintSpec] = (), constants: Iterable[int] = range(5), moduli: Iterable[int] = (2, 3)
) -> list[AtomicRelation]:
    """Atoms of the hypothesis space; gap relations are left out for constraints without an upper bound."""
    constants = list(constants)
    atoms: list[AtomicRelation] = [LenMod(m, r) for m in moduli for r in range(m)]
    for which in (0, 1):
        atoms += [ResMod(which, m, r) for m in moduli for r in range(m)]
        atoms += [ResGeq(which, d) for d in constants]
        atoms += [ResLeq(which, d) for d in constants]
        atoms += [ResEq(which, c) for c in constants]
        if not pair or pair[which].bound is not None:
            atoms += [ResGapEq(which, c) for c in constants]
    atoms += [ResLin(j, k, c, d) for j, k in ((0, 1), (1, 0)) for c in (1, 2) for d in (0, 1)]
    return atoms


def enumerate_hypotheses(
    pair: Sequence[ConstraintSpec] = (),
    constants: Iterable[int] = range(5),
    moduli: Iterable[int] = (2, 3),
    max_conjuncts: int = 3,
) -> list[BooleanFunction]:
    """Every conjunction of one to ``max_conjuncts`` distinct atoms with at most one dependent atom."""
    atoms = atomic_relations(pair, constants, moduli)
    functions = []
    for size in range(1, max_conjuncts + 1):
        for combination in itertools.combinations(atoms, size):
            if sum(rel.dependent for rel in combination) <= 1:
                functions.append(BooleanFunction(combination))
    logging.debug(f"{len(functions)} hypotheses over {len(atoms)} atomic relations.")
    return functions


def _masks(atoms: Iterable[AtomicRelation], examples: list[tuple], upps: dict) -> dict:
    masks = {}
    for rel in atoms:
        mask = 0
        for bit, (n, r1, r2) in enumerate(examples):
            if rel.holds(n, (r1, r2), upps[n]):
                mask |= 1 << bit
        masks[rel] = mask
    return masks


def filter_consistent(
    candidates: Iterable[BooleanFunction], dataset: Dataset, pair: Sequence[ConstraintSpec]
) -> list[BooleanFunction]:
    """Functions false on every feasible example and true on at least one infeasible example."""
    candidates = list(candidates)
    upps = {n: tuple(_upp(spec, n) for spec in pair) for n in dataset.lengths}
    atoms = {rel for function in candidates for rel in function.conjuncts}
    positives = _masks(atoms, dataset.positives(), upps)
    negatives = _masks(atoms, dataset.negatives(), upps)
    consistent = []
    for function in candidates:
        pos = neg = -1
        for rel in function.conjuncts:
            pos &= positives[rel]
            neg &= negatives[rel]
        if pos == 0 and neg != 0:
            consistent.append(function)
    logging.info(f"{len(consistent)} of {len(candidates)} hypotheses are consistent with the dataset.")
    return consistent


def _upp(spec: ConstraintSpec, n: int) -> int:
    # Gap atoms are only generated for constraints with a bound.
    return spec.bound.value(n) if spec.bound is not None else 0
