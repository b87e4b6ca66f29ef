from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Optional

from tsif.automata.register import RegisterAutomaton, check_incremental_property, results_by_length, run
from tsif.automata.transducer import SeedTransducer, decorate_nb, mirror, validate_transducer
from tsif.catalog.oracle import brute_force_max, eval_constraint
from tsif.catalog.regex import shortest_word_length
from tsif.catalog.signature import enumerate_signatures
from tsif.catalog.specs import ConstraintSpec, RegexSpec, UpperBoundFormula, split_name
from tsif.constants import Feature
from tsif.errors import CatalogError, NoBoundError

CATALOG_FILE = Path(__file__).parent / "catalog.json"


class Catalog:
    """Patterns, trims, upper bounds, seed transducers and register automata of the time-series constraints."""

    def __init__(self, data: dict):
        self.version = data.get("version", 1)
        self.names = list(data["catalog"])
        self.patterns: dict[str, RegexSpec] = {}
        self.bounds: dict = {}
        self.transducers: dict[str, SeedTransducer] = {}
        mirrors = []
        for entry in data["patterns"]:
            name = entry["name"]
            self.patterns[name] = RegexSpec(
                name, entry["pattern"], entry["b"], entry["a"], entry["omega"], entry.get("trims_chosen", False)
            )
            for feature, bound in entry.get("upper_bounds", {}).items():
                self.bounds[(name, Feature(feature))] = UpperBoundFormula.from_json(bound)
            if "transducer" in entry:
                self.transducers[name] = SeedTransducer.from_json(entry["transducer"], name)
            elif "mirror_of" in entry:
                mirrors.append((name, entry["mirror_of"]))
        for name, source in mirrors:
            self.transducers[name] = mirror(self.transducers[source], name)
        self.automata_data: dict = data.get("register_automata", {})
        unknown = [name for name in self.names if split_name(name)[1] not in self.patterns]
        if unknown:
            raise CatalogError(f"Catalog lists constraints over unknown patterns: {unknown}.")

    def spec(self, name: str) -> ConstraintSpec:
        try:
            feature, pattern = split_name(name)
        except ValueError as e:
            raise CatalogError(str(e)) from e
        if pattern not in self.patterns:
            raise CatalogError(f"Unknown pattern {pattern!r} in constraint {name!r}.")
        return ConstraintSpec(self.patterns[pattern], feature, bound=self.bounds.get((pattern, feature)))

    def specs(self) -> list[ConstraintSpec]:
        return [self.spec(name) for name in self.names]

    def pairs(self) -> list[tuple[ConstraintSpec, ConstraintSpec]]:
        return list(itertools.combinations(self.specs(), 2))

    def parse_pair(self, text: str) -> tuple[ConstraintSpec, ConstraintSpec]:
        names = [name.strip() for name in text.split(",") if name.strip()]
        if len(names) != 2:
            raise CatalogError(f"Expected two comma-separated constraint names, got {text!r}.")
        return self.spec(names[0]), self.spec(names[1])

    def transducer(self, pattern: str) -> SeedTransducer:
        if pattern not in self.transducers:
            raise CatalogError(f"No seed transducer for pattern {pattern!r}.")
        return self.transducers[pattern]

    def register_automaton(self, spec: ConstraintSpec) -> RegisterAutomaton:
        return _cached_automaton(self, spec.name)

    def has_register_automaton(self, spec: ConstraintSpec) -> bool:
        return spec.name in self.automata_data or (
            spec.feature == Feature.one and spec.regex.name in self.transducers
        )


@lru_cache(maxsize=None)
def _cached_automaton(catalog: Catalog, name: str) -> RegisterAutomaton:
    if name in catalog.automata_data:
        data = dict(catalog.automata_data[name], name=name)
        return RegisterAutomaton.from_json(data)
    feature, pattern = split_name(name)
    if feature == Feature.one and pattern in catalog.transducers:
        return decorate_nb(catalog.transducers[pattern], name)
    raise CatalogError(f"No register automaton for {name!r}.")


def upper_bound(spec: ConstraintSpec, n: int) -> int:
    """Largest result of the constraint over series of length ``n``."""
    if spec.bound is None:
        raise NoBoundError(f"The catalog records no upper bound for {spec.name}.")
    return spec.bound.value(n)


def max_by_length(catalog: Catalog, spec: ConstraintSpec, max_n: int) -> dict:
    """Largest result per series length, from the register automaton's exact configuration sweep when available."""
    if catalog.has_register_automaton(spec):
        ra = catalog.register_automaton(spec)
        return {length + 1: max(result[0] for result in found) for length, found in results_by_length(ra, max_n - 1)}
    return {n: brute_force_max(spec, n) for n in range(1, max_n + 1)}


def fit_upper_bound(maxima: dict, max_d: int = 4, max_c: int = 4, max_k: int = 2) -> Optional[UpperBoundFormula]:
    """Smallest formula ``max(0, m*floor((n-c)/d)+k)`` below ``n_min`` zero, reproducing the given maxima.

    Candidates are scanned by ``(n_min, d, |c|, m, |k|)`` so that the simplest matching shape wins.
    """
    lengths = sorted(maxima)
    for n_min in range(1, 6):
        for d in range(1, max_d + 1):
            for c in sorted(range(-max_c, max_c + 1), key=lambda value: (abs(value), -value)):
                for m in (1, 2):
                    for k in sorted(range(-max_k, max_k + 1), key=lambda value: (abs(value), -value)):
                        formula = UpperBoundFormula(c, d, m, k, True, n_min)
                        if all(formula.value(n) == maxima[n] for n in lengths):
                            return formula
    return None


@dataclass
class CatalogCheck:
    subject: str
    check: str
    passed: bool
    detail: str = ""


@dataclass
class CatalogReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, subject: str, check: str, passed: bool, detail: str = ""):
        self.checks.append(CatalogCheck(subject, check, passed, detail))


def validate_catalog(
    catalog: Catalog, transducer_len: int = 9, automaton_len: int = 8, bound_max_n: int = 14, oracle_max_n: int = 9
) -> CatalogReport:
    """Gates every catalog artifact against the brute-force oracle."""
    report = CatalogReport()
    for name, regex in catalog.patterns.items():
        omega = shortest_word_length(regex.pattern)
        report.add(name, "omega", omega == regex.omega, f"shortest word {omega}, recorded {regex.omega}")
        if name in catalog.transducers:
            result = validate_transducer(catalog.transducers[name], regex, transducer_len)
            if result.passed:
                detail = f"{result.checked} signatures"
            else:
                detail = f"counterexamples {result.counterexamples[:3]}"
            report.add(name, "transducer", result.passed, detail)
    for spec in catalog.specs():
        ra = catalog.register_automaton(spec)
        property_report = check_incremental_property(ra)
        report.add(spec.name, "incremental", property_report.passed, str(property_report.violations[:2]))
        mismatches = [
            sig
            for length in range(automaton_len + 1)
            for sig in enumerate_signatures(length)
            if run(ra, sig).outputs[0] != eval_constraint(spec, sig)
        ]
        report.add(spec.name, "automaton", not mismatches, f"first mismatches {mismatches[:3]}" if mismatches else "")
    checked = set()
    for (pattern, feature), formula in catalog.bounds.items():
        spec = ConstraintSpec(catalog.patterns[pattern], feature, bound=formula)
        if spec.name in checked:
            continue
        checked.add(spec.name)
        max_n = bound_max_n if catalog.has_register_automaton(spec) else oracle_max_n
        maxima = max_by_length(catalog, spec, max_n)
        wrong = {n: (formula.value(n), value) for n, value in maxima.items() if formula.value(n) != value}
        report.add(spec.name, "upper_bound", not wrong, formula.describe() if not wrong else f"(formula, max) {wrong}")
    return report


def load_catalog(path: Path = None, validate: bool = False) -> Catalog:
    """Loads the catalog data file; with ``validate`` every artifact must pass its oracle gate."""
    path = Path(path) if path is not None else CATALOG_FILE
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CatalogError(f"Could not read catalog {path}: {e}") from e
    catalog = Catalog(data)
    logging.debug(f"Loaded catalog version {catalog.version} with {len(catalog.patterns)} patterns from {path}.")
    if validate:
        report = validate_catalog(catalog)
        failed = [check for check in report.checks if not check.passed]
        if failed:
            raise CatalogError(f"Catalog failed its oracle gate: {[(c.subject, c.check, c.detail) for c in failed]}")
    return catalog


@lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    return load_catalog()
