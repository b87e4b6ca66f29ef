from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import gin
import joblib

from tsif.automata.register import product, results_by_length
from tsif.catalog.loader import Catalog, default_catalog
from tsif.database.records import InvariantRecord
from tsif.parallel import threads


@dataclass(frozen=True)
class Violation:
    record: str
    n: int
    witness: str
    results: tuple


@dataclass
class VerificationReport:
    max_n: int
    checks: int = 0
    signatures: int = 0
    violations: list[Violation] = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and not self.errors


def _verify_pair(names: tuple, records: list[InvariantRecord], max_n: int, catalog: Catalog) -> VerificationReport:
    pair = [catalog.spec(name) for name in names]
    ra = product([catalog.register_automaton(spec) for spec in pair])
    report = VerificationReport(max_n)
    pending = list(range(len(records)))
    for length, found in results_by_length(ra, max_n - 1):
        n = length + 1
        upps = tuple(spec.bound.value(n) if spec.bound is not None else 0 for spec in pair)
        report.signatures += sum(config.count for config in found.values())
        still = []
        for index in pending:
            record = records[index]
            bad = [
                (config.witness, results)
                for results, config in found.items()
                if not record.holds(n, results, upps)
            ]
            report.checks += sum(config.count for config in found.values())
            if bad:
                witness, results = min(bad)
                report.violations.append(Violation(record.describe(), n, witness, results))
            else:
                still.append(index)
        # A record is reported once, at its shortest violating length.
        pending = still
    return report


@gin.configurable("Verification")
def verify_database(records: Sequence[InvariantRecord], max_n: int = 10, catalog: Catalog = None) -> VerificationReport:
    """Checks every record against every series of length ``1..max_n`` of its constraint pair."""
    catalog = catalog or default_catalog()
    groups: dict = {}
    for record in records:
        groups.setdefault(tuple(record.pair), []).append(record)
    partial = joblib.Parallel(n_jobs=threads(), prefer="threads")(
        joblib.delayed(_verify_pair)(names, group, max_n, catalog) for names, group in groups.items()
    )
    report = VerificationReport(max_n)
    for part in partial:
        report.checks += part.checks
        report.signatures += part.signatures
        report.violations += part.violations
    logging.info(
        f"Verified {len(records)} records on {report.signatures} series up to n={max_n}: "
        f"{len(report.violations)} violations."
    )
    return report
