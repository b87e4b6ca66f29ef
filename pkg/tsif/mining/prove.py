from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import joblib

from tsif.automata.dfa import LanguageKind, intersect_all, minimize
from tsif.automata.register import product, results_by_length
from tsif.catalog.loader import Catalog, default_catalog
from tsif.catalog.specs import ConstraintSpec
from tsif.conditional.gap_loss import Certificate
from tsif.conditional.relations import relation_automaton, relation_certificate
from tsif.constants import ProofKind
from tsif.mining.hypotheses import BooleanFunction
from tsif.parallel import threads
from tsif.synthesis.dependent import prove_dependent


@dataclass(frozen=True)
class NonLinearInvariant:
    """No series of length ``n >= n_min`` satisfies ``function``.

    Refuted entries carry a signature satisfying the function; desk-verified ones the largest length of the check.
    """

    function: BooleanFunction
    pair: tuple
    kind: ProofKind
    n_min: int = 1
    desk_max_n: Optional[int] = None
    witness: Optional[str] = None

    @property
    def proved(self) -> bool:
        return self.kind in (ProofKind.proved_universal, ProofKind.proved_with_guard, ProofKind.desk_verified)

    def excludes(self, n: int, results: Sequence[int], upps: Sequence[int]) -> bool:
        """Whether the invariant rules the point out, i.e. the function holds there and ``n`` is covered."""
        return n >= self.n_min and self.function.holds(n, results, upps)

    def describe(self) -> str:
        text = f"not ({self.function.describe()})"
        if self.n_min > 1:
            text += f" for n >= {self.n_min}"
        status = self.kind.value
        if self.kind == ProofKind.desk_verified:
            status += f" up to n={self.desk_max_n}"
        elif self.kind == ProofKind.refuted:
            status += f" by {self.witness!r}"
        return f"{text} [{status}]"

    def to_json(self) -> dict:
        data = {"function": self.function.to_json(), "describe": self.function.describe(), "status": self.kind.value}
        if self.n_min > 1:
            data["n_min"] = self.n_min
        if self.desk_max_n is not None:
            data["desk_max_n"] = self.desk_max_n
        if self.witness is not None:
            data["witness"] = self.witness
        return data

    @classmethod
    def from_json(cls, data: dict, pair: Sequence[str]) -> "NonLinearInvariant":
        return cls(
            BooleanFunction.from_json(data["function"]),
            tuple(pair),
            ProofKind(data["status"]),
            data.get("n_min", 1),
            data.get("desk_max_n"),
            data.get("witness"),
        )


def find_witness(
    function: BooleanFunction, pair: Sequence[ConstraintSpec], max_n: int, catalog: Catalog = None, n_min: int = 1
) -> Optional[str]:
    """Smallest signature of a series of length ``n_min..max_n`` satisfying the function, by exhaustive sweep."""
    catalog = catalog or default_catalog()
    ra = product([catalog.register_automaton(spec) for spec in pair])
    for length, found in results_by_length(ra, max_n - 1):
        n = length + 1
        if n < n_min:
            continue
        upps = [spec.bound.value(n) if spec.bound is not None else 0 for spec in pair]
        witnesses = [config.witness for results, config in found.items() if function.holds(n, results, upps)]
        if witnesses:
            return min(witnesses)
    return None


def _capped(invariant: NonLinearInvariant, certificate: Certificate) -> NonLinearInvariant:
    if not invariant.proved or certificate.proved:
        return invariant
    return NonLinearInvariant(
        invariant.function, invariant.pair, ProofKind.desk_verified, invariant.n_min, certificate.desk_verified_to
    )


def prove(
    function: BooleanFunction, pair: Sequence[ConstraintSpec], catalog: Catalog = None, desk_max_n: int = 13
) -> NonLinearInvariant:
    """Shows that no series satisfies the function, possibly from some length on, or refutes it with a signature.

    Conjuncts on one result become automata whose intersection must be empty or finite. A dependent conjunct goes
    through ``prove_dependent`` with the other automata as side constraints.
    """
    catalog = catalog or default_catalog()
    names = tuple(spec.name for spec in pair)
    automata = [relation_automaton(rel, pair, catalog) for rel in function.independent]
    certificate = Certificate()
    for rel in function.independent:
        certificate = certificate.weakest(relation_certificate(rel, pair, catalog))

    if function.dependent:
        proof = prove_dependent(pair, function.dependent[0], automata, catalog)
        if proof.proved:
            kind = ProofKind.proved_universal if proof.n_min <= 1 else ProofKind.proved_with_guard
            return _capped(NonLinearInvariant(function, names, kind, proof.n_min), certificate)
        witness = find_witness(function, pair, desk_max_n, catalog)
        if witness is not None:
            return NonLinearInvariant(function, names, ProofKind.refuted, witness=witness)
        return NonLinearInvariant(function, names, ProofKind.unknown)

    dfa = minimize(intersect_all(automata)) if len(automata) > 1 else automata[0]
    status = dfa.language()
    if status.kind == LanguageKind.empty:
        invariant = NonLinearInvariant(function, names, ProofKind.proved_universal)
    elif status.kind == LanguageKind.finite:
        # Accepted signatures have at most ``longest`` letters, hence series at most ``longest + 1`` values.
        invariant = NonLinearInvariant(function, names, ProofKind.proved_with_guard, status.longest_word_len + 2)
    else:
        return NonLinearInvariant(function, names, ProofKind.refuted, witness=dfa.pumped_witness())
    return _capped(invariant, certificate)


def prove_all(
    functions: Sequence[BooleanFunction], pair: Sequence[ConstraintSpec], catalog: Catalog = None
) -> list[NonLinearInvariant]:
    catalog = catalog or default_catalog()
    # Threads share the relation automata caches.
    invariants = joblib.Parallel(n_jobs=threads(), prefer="threads")(
        joblib.delayed(prove)(function, pair, catalog) for function in functions
    )
    proved = sum(invariant.proved for invariant in invariants)
    logging.info(f"Proved {proved} of {len(invariants)} consistent functions.")
    return invariants


def violations(
    invariant: NonLinearInvariant, pair: Sequence[ConstraintSpec], n_range: tuple, catalog: Catalog = None
) -> Optional[str]:
    """Smallest signature of a series in ``n_range`` that the invariant wrongly excludes, or None."""
    n_lo, n_hi = n_range
    return find_witness(invariant.function, pair, n_hi, catalog, n_min=max(n_lo, invariant.n_min))
