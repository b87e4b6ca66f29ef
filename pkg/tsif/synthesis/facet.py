"""Facet analysis of linear invariants over two constraints.

A linear invariant ``f >= 0`` is a facet under a length condition when, for every admissible ``n``, two distinct
feasible result points lie on ``f = 0``. Candidate points have coordinates ``b`` or ``Upp(n) - b``; each candidate is
proved feasible for all large enough ``n`` of its residue class with a relation automaton that has a cycle of the
class period.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

import joblib

from tsif.automata.dfa import Dfa, intersect_all, length_mod, shortest_word_through_cycle
from tsif.automata.register import product, results_by_length
from tsif.catalog.loader import Catalog, default_catalog
from tsif.catalog.specs import ConstraintSpec
from tsif.conditional.gap_loss import Certificate, periodic_from
from tsif.conditional.relations import AtomicRelation, ResEq, ResGapEq, relation_automaton, relation_certificate
from tsif.constants import FacetKind, Precondition
from tsif.errors import NoBoundError
from tsif.parallel import threads
from tsif.synthesis.linear import LinearInvariant

B_VALUES = (0, 1, 2, 3)
MAX_GAP = 5


@dataclass(frozen=True)
class LengthCondition:
    """``n >= n_from and n mod modulus = residue``."""

    modulus: int = 1
    residue: int = 0
    n_from: int = 1

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"Length modulus must be positive, got {self.modulus}.")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def holds(self, n: int) -> bool:
        return n >= self.n_from and n % self.modulus == self.residue

    def automaton(self, modulus: int = None, residue: int = None) -> Dfa:
        """Signatures of the admissible series; a signature is one letter shorter than its series."""
        modulus = modulus or self.modulus
        residue = self.residue if residue is None else residue
        return length_mod(modulus, residue - 1, self.n_from - 1)

    def describe(self) -> str:
        parts = []
        if self.n_from > 1:
            parts.append(f"n >= {self.n_from}")
        if self.modulus > 1:
            parts.append(f"n mod {self.modulus} = {self.residue}")
        return " and ".join(parts) or "all"

    def __str__(self) -> str:
        return self.describe()


def condition_ladder(max_from: int = 6, moduli: Sequence[int] = (2, 3)) -> list[LengthCondition]:
    """Length conditions from the least to the most restrictive."""
    ladder = [LengthCondition()]
    ladder += [LengthCondition(n_from=c) for c in range(2, max_from + 1)]
    ladder += [LengthCondition(modulus, residue) for modulus in moduli for residue in range(modulus)]
    return ladder


@dataclass(frozen=True)
class Coordinate:
    """``Upp(n) - b`` when ``a`` is 1, the constant ``b`` otherwise."""

    a: int
    b: int

    def value(self, upp: int) -> int:
        return upp - self.b if self.a else self.b

    def relation(self, which: int) -> AtomicRelation:
        return ResGapEq(which, self.b) if self.a else ResEq(which, self.b)

    def describe(self, which: int) -> str:
        if not self.a:
            return str(self.b)
        upp = f"Upp{which + 1}(n)"
        return upp if self.b == 0 else f"{upp} - {self.b}"

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class FacetCandidate:
    """A point on ``f = 0`` for the lengths ``n = residue (mod modulus)``."""

    x: Coordinate
    y: Coordinate
    residue: int
    modulus: int

    def point(self, upps: Sequence[int]) -> tuple:
        return self.x.value(upps[0]), self.y.value(upps[1])

    def relations(self) -> tuple:
        return self.x.relation(0), self.y.relation(1)

    def describe(self) -> str:
        return f"({self.x.describe(0)}, {self.y.describe(1)})"

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json(), "residue": self.residue, "modulus": self.modulus}


@dataclass(frozen=True)
class FacetStatus:
    kind: FacetKind
    condition: Optional[LengthCondition] = None
    n_min: Optional[int] = None
    points: tuple = ()
    reason: str = ""
    certificate: Certificate = field(default_factory=Certificate)

    @property
    def is_facet(self) -> bool:
        return self.kind == FacetKind.facet

    def admissible(self, n: int) -> bool:
        return self.is_facet and self.condition.holds(n) and n >= self.n_min

    def describe(self) -> str:
        if not self.is_facet:
            return f"{self.kind.value}: {self.reason}" if self.reason else self.kind.value
        points = "; ".join(f"{p.describe()} and {q.describe()}" for p, q in self.points)
        return f"facet when {self.condition} and n >= {self.n_min}: {points}"

    def to_json(self) -> dict:
        data = {"status": self.kind.value}
        if self.is_facet:
            data.update(
                cond=self.condition.describe(),
                modulus=self.condition.modulus,
                residue=self.condition.residue,
                n_from=self.condition.n_from,
                n_min=self.n_min,
                points=[[p.to_json(), q.to_json()] for p, q in self.points],
                certificate=self.certificate.to_json(),
            )
        elif self.reason:
            data["reason"] = self.reason
        return data

    @classmethod
    def from_json(cls, data: dict) -> "FacetStatus":
        kind = FacetKind(data["status"])
        if kind != FacetKind.facet:
            return cls(kind, reason=data.get("reason", ""))
        condition = LengthCondition(data["modulus"], data["residue"], data["n_from"])

        def candidate(entry) -> FacetCandidate:
            return FacetCandidate(
                Coordinate(**entry["x"]), Coordinate(**entry["y"]), entry["residue"], entry["modulus"]
            )

        points = tuple((candidate(p), candidate(q)) for p, q in data["points"])
        return cls(kind, condition, data["n_min"], points, certificate=Certificate.from_json(data["certificate"]))


def _affine(coordinate: Coordinate, formula, residue: int, modulus: int) -> tuple[Fraction, Fraction]:
    if not coordinate.a:
        return Fraction(0), Fraction(coordinate.b)
    slope, intercept = formula.affine_on_class(residue, modulus)
    return slope, intercept - coordinate.b


def _match(slope: Fraction, intercept: Fraction, formula, residue: int, modulus: int) -> Optional[Coordinate]:
    """The coordinate form equal to ``slope * n + intercept`` on the class, if any."""
    if slope == 0 and intercept.denominator == 1 and intercept >= 0:
        return Coordinate(0, int(intercept))
    upp_slope, upp_intercept = formula.affine_on_class(residue, modulus)
    gap = upp_intercept - intercept
    if slope == upp_slope and gap.denominator == 1 and 0 <= gap <= MAX_GAP:
        return Coordinate(1, int(gap))
    return None


def class_modulus(pair: Sequence[ConstraintSpec], condition: LengthCondition) -> int:
    formulas = [spec.bound for spec in pair]
    return math.lcm(formulas[0].d, formulas[1].d, condition.modulus)


def candidate_points(
    invariant: LinearInvariant, pair: Sequence[ConstraintSpec], condition: LengthCondition
) -> list[FacetCandidate]:
    """Points of the form ``(b or Upp1(n) - b, b' or Upp2(n) - b')`` lying on ``f = 0`` over whole residue classes.

    One coordinate ranges over ``B_VALUES`` in both forms; the other is isolated from ``f = 0`` and kept when it is
    exactly of one of the two forms on the class. A coordinate whose coefficient is zero is free and gets 0 and 1.
    """
    if len(pair) != 2 or len(invariant.coeffs) != 2:
        raise ValueError("Facet candidates are defined for invariants over two constraints.")
    formulas = [spec.bound for spec in pair]
    missing = [spec.name for spec, formula in zip(pair, formulas) if formula is None]
    if missing:
        raise NoBoundError(f"The catalog records no upper bound for {missing}.")
    coeffs = invariant.coeffs
    if coeffs[1] != 0:
        free, solved = 0, 1
    elif coeffs[0] != 0:
        free, solved = 1, 0
    else:
        return []
    modulus = class_modulus(pair, condition)
    candidates = []
    for residue in range(modulus):
        if residue % condition.modulus != condition.residue:
            continue
        for a, b in itertools.product((1, 0), B_VALUES):
            given = Coordinate(a, b)
            slope, intercept = _affine(given, formulas[free], residue, modulus)
            # f = e + e0*n + coeffs[free]*given + coeffs[solved]*other
            rest_slope = invariant.e0 + coeffs[free] * slope
            rest_intercept = invariant.e + coeffs[free] * intercept
            if coeffs[solved] == 0:
                if rest_slope != 0 or rest_intercept != 0:
                    continue
                others = [Coordinate(0, 0), Coordinate(0, 1)]
            else:
                other = _match(
                    -rest_slope / coeffs[solved], -rest_intercept / coeffs[solved], formulas[solved], residue, modulus
                )
                others = [other] if other is not None else []
            for other in others:
                x, y = (given, other) if free == 0 else (other, given)
                candidates.append(FacetCandidate(x, y, residue, modulus))
    return list(dict.fromkeys(candidates))


def prove_point_feasible(
    candidate: FacetCandidate,
    pair: Sequence[ConstraintSpec],
    condition: LengthCondition,
    catalog: Catalog = None,
) -> Optional[int]:
    """Smallest ``n`` from which the point is feasible for every admissible length of its class, or None.

    The relation automata of both coordinates are intersected with the class automaton; an accepted path through a
    closed walk of the class period pumps to every later length of the class.
    """
    catalog = catalog or default_catalog()
    automata = [relation_automaton(rel, pair, catalog) for rel in candidate.relations()]
    automata.append(condition.automaton(candidate.modulus, candidate.residue))
    word = shortest_word_through_cycle(intersect_all(automata), candidate.modulus)
    if word is None:
        return None
    logging.debug(f"{candidate.describe()} when {condition}: pumpable signature {word!r}.")
    return len(word) + 1


def _distinct_from(p: FacetCandidate, q: FacetCandidate, pair: Sequence[ConstraintSpec], n_min: int) -> Optional[int]:
    """Smallest ``n >= n_min`` of the class from which the two points always differ, or None when they coincide."""
    formulas = [spec.bound for spec in pair]
    roots = []
    for which, (mine, theirs) in enumerate([(p.x, q.x), (p.y, q.y)]):
        s1, t1 = _affine(mine, formulas[which], p.residue, p.modulus)
        s2, t2 = _affine(theirs, formulas[which], p.residue, p.modulus)
        if s1 == s2:
            if t1 != t2:
                return n_min
            continue
        roots.append((t2 - t1) / (s1 - s2))
    if not roots:
        return None
    # Points that differ for all but one length of the class.
    last = max(roots)
    if last.denominator == 1 and last % p.modulus == p.residue and last >= n_min:
        return int(last) + p.modulus
    return n_min


def _feasibility(candidate, pair, condition, catalog):
    try:
        return candidate, prove_point_feasible(candidate, pair, condition, catalog)
    except (NoBoundError, ValueError) as e:
        logging.debug(f"Feasibility of {candidate.describe()} left open: {e}")
        return candidate, None


def facet_under(
    invariant: LinearInvariant, pair: Sequence[ConstraintSpec], condition: LengthCondition, catalog: Catalog = None
) -> Optional[FacetStatus]:
    """Facet verdict for one length condition, or None when some residue class lacks two feasible points."""
    catalog = catalog or default_catalog()
    candidates = candidate_points(invariant, pair, condition)
    # Threads share the automata caches.
    results = joblib.Parallel(n_jobs=threads(), prefer="threads")(
        joblib.delayed(_feasibility)(candidate, pair, condition, catalog) for candidate in candidates
    )
    feasible = {candidate: n_min for candidate, n_min in results if n_min is not None}
    modulus = class_modulus(pair, condition)
    chosen = []
    # The candidate forms follow the unclipped bounds.
    n_min = max(condition.n_from, *(periodic_from(spec.bound) for spec in pair))
    for residue in range(modulus):
        if residue % condition.modulus != condition.residue:
            continue
        in_class = [candidate for candidate in candidates if candidate.residue == residue and candidate in feasible]
        best = None
        for p, q in itertools.combinations(in_class, 2):
            start = _distinct_from(p, q, pair, max(feasible[p], feasible[q]))
            if start is not None and (best is None or start < best[0]):
                best = (start, p, q)
        if best is None:
            return None
        n_min = max(n_min, best[0])
        chosen.append(best[1:])
    certificate = Certificate()
    for p, q in chosen:
        for rel in (*p.relations(), *q.relations()):
            certificate = certificate.weakest(relation_certificate(rel, pair, catalog))
    return FacetStatus(FacetKind.facet, condition, n_min, tuple(chosen), certificate=certificate)


def facet_check(
    invariant: LinearInvariant, pair: Sequence[ConstraintSpec], catalog: Catalog = None, ladder: list = None
) -> FacetStatus:
    """Walks the length conditions from the least restrictive one and stops at the first that makes a facet."""
    catalog = catalog or default_catalog()
    if any(spec.bound is None for spec in pair):
        return FacetStatus(FacetKind.undecided, reason="no upper bound for one of the constraints")
    if invariant.precondition != Precondition.none:
        return FacetStatus(FacetKind.undecided, reason="facets are analysed for unconditional invariants only")
    for condition in ladder or condition_ladder():
        status = facet_under(invariant, pair, condition, catalog)
        if status is not None:
            logging.info(f"{invariant.describe()} is a facet when {condition} and n >= {status.n_min}.")
            return status
    logging.info(f"{invariant.describe()} is not a facet under any tested length condition.")
    return FacetStatus(FacetKind.not_facet, reason="fewer than two feasible points on the boundary line")


def annotate(invariants: list[LinearInvariant], pair, catalog: Catalog = None) -> list[LinearInvariant]:
    return [replace(invariant, facet=facet_check(invariant, pair, catalog)) for invariant in invariants]


def feasible_points(pair: Sequence[ConstraintSpec], max_n: int, catalog: Catalog = None) -> dict:
    """Feasible ``(R1, R2)`` points per series length ``1..max_n``, by exhaustive sweep."""
    catalog = catalog or default_catalog()
    ra = product([catalog.register_automaton(spec) for spec in pair])
    return {length + 1: set(found) for length, found in results_by_length(ra, max_n - 1)}


def points_on_line(invariant: LinearInvariant, points: set, n: int) -> list:
    return sorted(point for point in points if invariant.value(n, point) == 0)


def confirm_facet(
    invariant: LinearInvariant, status: FacetStatus, pair, n_range: tuple = (5, 13), catalog: Catalog = None
) -> list[int]:
    """Admissible lengths of ``n_range`` where a reported point is infeasible or off the line; empty when confirmed."""
    feasible = feasible_points(pair, n_range[1], catalog)
    bad = []
    for n in range(n_range[0], n_range[1] + 1):
        if not status.admissible(n):
            continue
        upps = [spec.bound.value(n) for spec in pair]
        for p, q in status.points:
            if n % p.modulus != p.residue:
                continue
            points = {p.point(upps), q.point(upps)}
            if len(points) < 2 or any(pt not in feasible[n] or invariant.value(n, pt) != 0 for pt in points):
                bad.append(n)
    return bad
