from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from tsif.automata.dfa import Dfa, intersect_all, length_at_least, minimize
from tsif.automata.register import mod_expansion, product, restrict
from tsif.catalog.loader import Catalog, default_catalog
from tsif.catalog.specs import ConstraintSpec
from tsif.conditional.relations import ResLin
from tsif.constants import Precondition, Sign
from tsif.errors import NegativeCycleError
from tsif.synthesis.linear import LinearInvariant, constant_term, invariant_digraph, negative_circuits


@dataclass(frozen=True)
class ParitySplit:
    """Outcome for one parity ``b`` of ``R_j``: refuted by parity, empty, bounded away, or open."""

    parity: int
    outcome: str
    invariant: Optional[LinearInvariant] = None


@dataclass
class DependentProof:
    relation: ResLin
    splits: list = field(default_factory=list)
    n_min: int = 1

    @property
    def proved(self) -> bool:
        return bool(self.splits) and all(split.outcome != "unknown" for split in self.splits)

    def describe(self) -> str:
        lines = [f"{self.relation.describe()}: {'infeasible' if self.proved else 'unknown'}"]
        for split in self.splits:
            detail = f" ({split.invariant.describe()})" if split.invariant is not None else ""
            lines.append(f"  R{self.relation.j + 1} mod 2 = {split.parity}: {split.outcome}{detail}")
        return "\n".join(lines)


def _fixed_form(ra, relation: ResLin, orientation: int, names: tuple) -> Optional[LinearInvariant]:
    """Bound of ``orientation * (R_j - c*R_k)`` from the invariant digraph with those coefficients and ``e0 = 0``."""
    coeffs = [0, 0]
    coeffs[relation.j] = orientation
    coeffs[relation.k] = -orientation * relation.c
    coefficients = (0, *coeffs)
    signs = tuple(Sign.plus if value >= 0 else Sign.minus for value in coefficients)
    digraph = invariant_digraph(ra, signs)
    if negative_circuits(digraph, coefficients):
        return None
    try:
        e = constant_term(digraph, coefficients)
    except NegativeCycleError:
        return None
    return LinearInvariant(e, 0, tuple(coeffs), names, Precondition.none, signs)


def prove_dependent(
    pair: Sequence[ConstraintSpec],
    relation: ResLin,
    constraints: Sequence[Dfa] = (),
    catalog: Catalog = None,
) -> DependentProof:
    """Tries to show that no series satisfies ``R_j = c*R_k + d`` together with the given signature constraints.

    Both sides of the equality share their parity. For each parity of ``R_j`` the parity constraint is added; the
    split is closed when parity alone rules it out, when no signature remains, or when the linear-invariant machinery
    bounds ``R_j - c*R_k`` strictly away from ``d`` on the restricted product. The proof holds for series of length
    ``n_min`` and more.
    """
    catalog = catalog or default_catalog()
    ra = product([catalog.register_automaton(spec) for spec in pair])
    mains = [ra.main_index(factor) for factor in range(ra.factors)]
    proof = DependentProof(relation)
    for parity in (0, 1):
        if relation.c % 2 == 0 and parity != relation.d % 2:
            proof.splits.append(ParitySplit(parity, "parity"))
            continue

        def same_parity(state, values, parity=parity) -> bool:
            r_j, r_k = values[mains[relation.j]], values[mains[relation.k]]
            return state in ra.accepting and r_j % 2 == parity and (relation.c * r_k + relation.d) % 2 == parity

        allowed = intersect_all([minimize(mod_expansion(ra, 2, same_parity)), *constraints])
        if allowed.accepts(""):
            values = ra.initial_values
            if values[mains[relation.j]] == relation.c * values[mains[relation.k]] + relation.d:
                proof.n_min = 2
        if minimize(intersect_all([allowed, length_at_least(1)])).language().is_empty:
            proof.splits.append(ParitySplit(parity, "empty"))
            continue
        restricted = restrict(ra, allowed)
        outcome = ParitySplit(parity, "unknown")
        for orientation in (1, -1):
            invariant = _fixed_form(restricted, relation, orientation, tuple(spec.name for spec in pair))
            if invariant is None:
                continue
            # orientation 1: R_j - c*R_k >= -e; orientation -1: R_j - c*R_k <= e.
            if (orientation == 1 and -invariant.e > relation.d) or (orientation == -1 and invariant.e < relation.d):
                outcome = ParitySplit(parity, "bounded", invariant)
                break
        proof.splits.append(outcome)
    logging.debug(proof.describe())
    return proof
