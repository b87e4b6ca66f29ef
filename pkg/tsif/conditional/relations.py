"""Atomic relations over the results of two constraints and the series length, and their conditional automata."""
from __future__ import annotations

import re
from dataclasses import astuple, dataclass, fields
from functools import lru_cache
from typing import ClassVar, Sequence

from tsif.automata.dfa import Dfa, length_at_least, length_mod, minimize
from tsif.automata.register import capped_expansion, mod_expansion
from tsif.catalog.loader import Catalog, default_catalog
from tsif.catalog.specs import ConstraintSpec
from tsif.conditional.gap_loss import Certificate, gap_automaton
from tsif.errors import DependentRelationError

NAMES = ("R1", "R2")


class AtomicRelation:
    """Elementary predicate over ``(R1, R2, n)``; ``which`` indexes the constraint, 0 for R1 and 1 for R2."""

    kind: ClassVar[str] = ""
    dependent: ClassVar[bool] = False

    def holds(self, n: int, results: Sequence[int], upps: Sequence[int]) -> bool:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def key(self) -> tuple:
        return (list(_KINDS).index(self.kind), *astuple(self))

    def to_json(self) -> dict:
        return {"rel": self.kind, **{item.name: getattr(self, item.name) for item in fields(self)}}

    def __str__(self) -> str:
        return self.describe()


@dataclass(frozen=True)
class LenGeq(AtomicRelation):
    c: int
    kind: ClassVar[str] = "len_geq"

    def holds(self, n, results, upps) -> bool:
        return n >= self.c

    def describe(self) -> str:
        return f"n >= {self.c}"


@dataclass(frozen=True)
class LenMod(AtomicRelation):
    c: int
    d: int
    kind: ClassVar[str] = "len_mod"

    def __post_init__(self):
        if self.c < 2 or not 0 <= self.d < self.c:
            raise ValueError(f"Invalid length condition n mod {self.c} = {self.d}.")

    def holds(self, n, results, upps) -> bool:
        return n % self.c == self.d

    def describe(self) -> str:
        return f"n mod {self.c} = {self.d}"


@dataclass(frozen=True)
class ResMod(AtomicRelation):
    which: int
    c: int
    d: int
    kind: ClassVar[str] = "res_mod"

    def __post_init__(self):
        if self.c < 2 or not 0 <= self.d < self.c:
            raise ValueError(f"Invalid residue condition {NAMES[self.which]} mod {self.c} = {self.d}.")

    def holds(self, n, results, upps) -> bool:
        return results[self.which] % self.c == self.d

    def describe(self) -> str:
        return f"{NAMES[self.which]} mod {self.c} = {self.d}"


@dataclass(frozen=True)
class ResGeq(AtomicRelation):
    which: int
    d: int
    kind: ClassVar[str] = "res_geq"

    def holds(self, n, results, upps) -> bool:
        return results[self.which] >= self.d

    def describe(self) -> str:
        return f"{NAMES[self.which]} >= {self.d}"


@dataclass(frozen=True)
class ResLeq(AtomicRelation):
    which: int
    d: int
    kind: ClassVar[str] = "res_leq"

    def holds(self, n, results, upps) -> bool:
        return results[self.which] <= self.d

    def describe(self) -> str:
        return f"{NAMES[self.which]} <= {self.d}"


@dataclass(frozen=True)
class ResEq(AtomicRelation):
    which: int
    c: int
    kind: ClassVar[str] = "res_eq"

    def holds(self, n, results, upps) -> bool:
        return results[self.which] == self.c

    def describe(self) -> str:
        return f"{NAMES[self.which]} = {self.c}"


@dataclass(frozen=True)
class ResGapEq(AtomicRelation):
    """``R = Upp(n) - c``."""

    which: int
    c: int
    kind: ClassVar[str] = "res_gap_eq"

    def holds(self, n, results, upps) -> bool:
        return results[self.which] == upps[self.which] - self.c

    def describe(self) -> str:
        upp = f"Upp{self.which + 1}"
        return f"{NAMES[self.which]} = {upp}" if self.c == 0 else f"{NAMES[self.which]} = {upp} - {self.c}"


@dataclass(frozen=True)
class ResLin(AtomicRelation):
    """``R_j = c * R_k + d``; the only relation reading both results."""

    j: int
    k: int
    c: int
    d: int
    kind: ClassVar[str] = "res_lin"
    dependent: ClassVar[bool] = True

    def __post_init__(self):
        if self.j == self.k:
            raise ValueError("A dependent relation links two different results.")

    def holds(self, n, results, upps) -> bool:
        return results[self.j] == self.c * results[self.k] + self.d

    def describe(self) -> str:
        right = NAMES[self.k] if self.c == 1 else f"{self.c}*{NAMES[self.k]}"
        if self.d:
            right += f" + {self.d}"
        return f"{NAMES[self.j]} = {right}"


_KINDS = {cls.kind: cls for cls in (LenGeq, LenMod, ResMod, ResGeq, ResLeq, ResEq, ResGapEq, ResLin)}

_PATTERNS = [
    (re.compile(r"n >= (\d+)"), lambda m: LenGeq(int(m[1]))),
    (re.compile(r"n mod (\d+) = (\d+)"), lambda m: LenMod(int(m[1]), int(m[2]))),
    (re.compile(r"R([12]) mod (\d+) = (\d+)"), lambda m: ResMod(int(m[1]) - 1, int(m[2]), int(m[3]))),
    (re.compile(r"R([12]) >= (\d+)"), lambda m: ResGeq(int(m[1]) - 1, int(m[2]))),
    (re.compile(r"R([12]) <= (\d+)"), lambda m: ResLeq(int(m[1]) - 1, int(m[2]))),
    (re.compile(r"R([12]) = Upp([12])(?: - (\d+))?"), lambda m: _gap(m)),
    (re.compile(r"R([12]) = (\d+)"), lambda m: ResEq(int(m[1]) - 1, int(m[2]))),
    (
        re.compile(r"R([12]) = (?:(\d+) ?\* ?)?R([12])(?: \+ (\d+))?"),
        lambda m: ResLin(int(m[1]) - 1, int(m[3]) - 1, int(m[2] or 1), int(m[4] or 0)),
    ),
]


def _gap(match) -> ResGapEq:
    if match[1] != match[2]:
        raise ValueError(f"Gap relation {match[0]!r} compares a result with the bound of the other one.")
    return ResGapEq(int(match[1]) - 1, int(match[3] or 0))


def parse_relation(text: str) -> AtomicRelation:
    """Parses the rendering of ``describe``, e.g. ``R1 mod 2 = 1`` or ``R2 = Upp2 - 1``."""
    normalized = re.sub(r"\s+", " ", text.strip()).replace("R_", "R")
    for pattern, build in _PATTERNS:
        match = pattern.fullmatch(normalized)
        if match:
            return build(match)
    raise ValueError(f"Cannot parse atomic relation {text!r}.")


def relation_from_json(data: dict) -> AtomicRelation:
    data = dict(data)
    kind = data.pop("rel")
    if kind not in _KINDS:
        raise ValueError(f"Unknown atomic relation kind {kind!r}.")
    return _KINDS[kind](**data)


def relation_automaton(rel: AtomicRelation, pair: Sequence[ConstraintSpec], catalog: Catalog = None) -> Dfa:
    """Minimal automaton of the signatures of series satisfying the relation, for relations on one result."""
    catalog = catalog or default_catalog()
    return _cached_relation_automaton(catalog, tuple(spec.name for spec in pair), rel)


def relation_certificate(rel: AtomicRelation, pair: Sequence[ConstraintSpec], catalog: Catalog = None) -> Certificate:
    if isinstance(rel, ResGapEq):
        return gap_automaton(pair[rel.which], rel.c, catalog).certificate
    return Certificate()


@lru_cache(maxsize=None)
def _cached_relation_automaton(catalog: Catalog, names: tuple, rel: AtomicRelation) -> Dfa:
    if rel.dependent:
        raise DependentRelationError(f"{rel.describe()} reads both results; it is proved through linear synthesis.")
    if isinstance(rel, LenGeq):
        return minimize(length_at_least(rel.c - 1))
    if isinstance(rel, LenMod):
        return minimize(length_mod(rel.c, rel.d - 1))
    spec = catalog.spec(names[rel.which])
    if isinstance(rel, ResGapEq):
        return gap_automaton(spec, rel.c, catalog).dfa
    ra = catalog.register_automaton(spec)
    if isinstance(rel, ResMod):
        return minimize(mod_expansion(ra, rel.c, lambda state, values: _accepts(ra, state, values, rel)))
    cap = rel.c if isinstance(rel, ResEq) else rel.d
    # Values above the cap saturate at cap + 1, which keeps every comparison with the threshold exact.
    return minimize(capped_expansion(ra, cap, lambda state, values: _accepts(ra, state, values, rel)))


def _accepts(ra, state, values, rel: AtomicRelation) -> bool:
    if state not in ra.accepting:
        return False
    results = [0, 0]
    results[rel.which] = ra.evaluate(values)[0]
    return rel.holds(0, results, (0, 0))
