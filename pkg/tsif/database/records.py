"""JSON-lines invariant database: one header line, then one record per line."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import tsif
from tsif.constants import DB_SCHEMA, DB_SCHEMA_VERSION, Precondition, ProofKind, RecordKind, Sign
from tsif.mining.hypotheses import BooleanFunction
from tsif.mining.prove import NonLinearInvariant
from tsif.run_utils import TsifJsonEncoder
from tsif.synthesis.facet import FacetStatus
from tsif.synthesis.linear import LinearInvariant


@dataclass
class InvariantRecord:
    kind: RecordKind
    pair: tuple
    payload: dict
    precondition: Precondition = Precondition.none
    certificate: object = "linear_synthesis"
    facet: Optional[dict] = None
    version: str = tsif.__version__
    params: dict = field(default_factory=dict)

    @classmethod
    def from_linear(cls, invariant: LinearInvariant, params: dict = None) -> "InvariantRecord":
        conditional = invariant.precondition == Precondition.non_default
        kind = RecordKind.conditional_linear if conditional else RecordKind.linear
        payload = {
            "e": invariant.e,
            "e0": invariant.e0,
            "coeffs": list(invariant.coeffs),
            "signs": [sign.value for sign in invariant.signs],
            "delayed": invariant.delayed,
            "describe": invariant.describe(),
        }
        certificate = "delayed_linear_synthesis" if invariant.delayed else "linear_synthesis"
        facet = invariant.facet.to_json() if invariant.facet is not None else None
        return cls(
            kind, tuple(invariant.constraints), payload, invariant.precondition, certificate, facet, params=params or {}
        )

    @classmethod
    def from_nonlinear(cls, invariant: NonLinearInvariant, params: dict = None) -> "InvariantRecord":
        if not invariant.proved:
            raise ValueError(f"Only proved functions are stored, got {invariant.describe()}.")
        payload = {"function": invariant.function.to_json(), "describe": invariant.function.describe()}
        certificate = {"status": invariant.kind.value, "n_min": invariant.n_min}
        if invariant.desk_max_n is not None:
            certificate["desk_max_n"] = invariant.desk_max_n
        return cls(
            RecordKind.nonlinear, tuple(invariant.pair), payload, Precondition.none, certificate, params=params or {}
        )

    @property
    def is_linear(self) -> bool:
        return self.kind in (RecordKind.linear, RecordKind.conditional_linear)

    def linear(self) -> LinearInvariant:
        if not self.is_linear:
            raise ValueError(f"Record of kind {self.kind.value} is not linear.")
        return LinearInvariant(
            self.payload["e"],
            self.payload["e0"],
            tuple(self.payload["coeffs"]),
            tuple(self.pair),
            self.precondition,
            tuple(Sign(sign) for sign in self.payload.get("signs", ())),
            self.payload.get("delayed", False),
            FacetStatus.from_json(self.facet) if self.facet else None,
        )

    def nonlinear(self) -> NonLinearInvariant:
        if self.kind != RecordKind.nonlinear:
            raise ValueError(f"Record of kind {self.kind.value} is not a Boolean function.")
        return NonLinearInvariant(
            BooleanFunction.from_json(self.payload["function"]),
            tuple(self.pair),
            ProofKind(self.certificate["status"]),
            self.certificate.get("n_min", 1),
            self.certificate.get("desk_max_n"),
        )

    def holds(self, n: int, results: Sequence[int], upps: Sequence[int]) -> bool:
        """Whether a series of length ``n`` with these results agrees with the record."""
        if self.is_linear:
            # Linear invariants are stated for series of two values or more.
            return n < 2 or self.linear().holds(n, results)
        return not self.nonlinear().excludes(n, results, upps)

    def describe(self) -> str:
        text = self.payload.get("describe", "")
        return f"{' x '.join(self.pair)}: {text}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "pair": list(self.pair),
            "payload": self.payload,
            "precondition": self.precondition.value,
            "certificate": self.certificate,
            "facet": self.facet,
            "version": self.version,
            "params": self.params,
        }

    @classmethod
    def from_json(cls, data: dict) -> "InvariantRecord":
        if not data.get("certificate"):
            raise ValueError("Record without a certificate.")
        return cls(
            RecordKind(data["kind"]),
            tuple(data["pair"]),
            data["payload"],
            Precondition(data.get("precondition", Precondition.none.value)),
            data["certificate"],
            data.get("facet"),
            data.get("version", tsif.__version__),
            data.get("params", {}),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), cls=TsifJsonEncoder)

    @classmethod
    def loads(cls, line: str) -> "InvariantRecord":
        return cls.from_json(json.loads(line))


@dataclass
class Database:
    header: dict
    records: list[InvariantRecord] = field(default_factory=list)
    errors: list[tuple[int, str]] = field(default_factory=list)

    def pairs(self) -> list[tuple]:
        return list(dict.fromkeys(record.pair for record in self.records))


def header() -> dict:
    return {"schema": DB_SCHEMA, "version": DB_SCHEMA_VERSION, "tool": tsif.__version__}


def write_database(path: Path, records: Sequence[InvariantRecord], append: bool = False):
    """Writes the records; appending to an existing file keeps its header."""
    path = Path(path)
    fresh = not (append and path.exists() and path.stat().st_size > 0)
    with open(path, "w" if fresh else "a") as f:
        if fresh:
            f.write(json.dumps(header()) + "\n")
        for record in records:
            f.write(record.dumps() + "\n")
    logging.info(f"Wrote {len(records)} records to {path}.")


def read_database(path: Path) -> Database:
    """Parses a database file; malformed lines are collected as ``(line number, message)`` and skipped."""
    lines = Path(path).read_text().splitlines()
    database = Database({})
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
            if not database.header:
                if data.get("schema") != DB_SCHEMA:
                    raise ValueError(f"expected a {DB_SCHEMA} header, got {line[:60]!r}")
                if data.get("version", 0) > DB_SCHEMA_VERSION:
                    raise ValueError(f"schema version {data['version']} is newer than {DB_SCHEMA_VERSION}")
                database.header = data
                continue
            database.records.append(InvariantRecord.from_json(data))
        except (ValueError, KeyError, TypeError, AttributeError) as e:
            database.errors.append((number, str(e)))
            if not database.header:
                break
    return database
