from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import polars as pl

from tsif.automata.register import product, results_by_length
from tsif.catalog.loader import Catalog, default_catalog
from tsif.catalog.specs import ConstraintSpec
from tsif.mining.hull import graham_hull, lattice_points


@dataclass
class Dataset:
    """Feasible result pairs, their hull and the infeasible lattice points of the hull, per series length.

    ``witnesses`` maps ``(n, point)`` to the smallest signature producing the point.
    """

    pair: tuple
    feasible: dict = field(default_factory=dict)
    hull: dict = field(default_factory=dict)
    infeasible: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    @property
    def lengths(self) -> list[int]:
        return sorted(self.feasible)

    def positives(self) -> list[tuple]:
        return [(n, *point) for n in self.lengths for point in sorted(self.feasible[n])]

    def negatives(self) -> list[tuple]:
        return [(n, *point) for n in self.lengths for point in sorted(self.infeasible[n])]

    def to_json(self) -> list[dict]:
        return [
            {
                "n": n,
                "feasible": [list(point) for point in sorted(self.feasible[n])],
                "hull": [list(point) for point in self.hull[n]],
                "infeasible": [list(point) for point in sorted(self.infeasible[n])],
            }
            for n in self.lengths
        ]

    @classmethod
    def from_json(cls, data: list[dict], pair: Sequence[str] = ()) -> "Dataset":
        dataset = cls(tuple(pair))
        for entry in data:
            n = entry["n"]
            dataset.feasible[n] = {tuple(point) for point in entry["feasible"]}
            dataset.hull[n] = [tuple(point) for point in entry["hull"]]
            dataset.infeasible[n] = {tuple(point) for point in entry["infeasible"]}
        return dataset

    def to_frame(self) -> pl.DataFrame:
        rows = [(n, "feasible", r1, r2) for n, r1, r2 in self.positives()]
        rows += [(n, "infeasible", r1, r2) for n, r1, r2 in self.negatives()]
        rows += [(n, "hull", x, y) for n in self.lengths for x, y in self.hull[n]]
        schema = [("n", pl.Int64), ("kind", pl.Utf8), ("r1", pl.Int64), ("r2", pl.Int64)]
        return pl.DataFrame(rows, schema=schema, orient="row")

    def write(self, path: Path, fmt: str = "json"):
        path = Path(path)
        if fmt == "parquet":
            self.to_frame().write_parquet(path)
        elif fmt == "json":
            with open(path, "w") as f:
                json.dump(self.to_json(), f, indent=1)
        else:
            raise ValueError(f"Unknown dataset format {fmt!r}.")
        logging.info(f"Dataset written to {path}.")


def generate_dataset(pair: Sequence[ConstraintSpec], n_range: tuple = (7, 12), catalog: Catalog = None) -> Dataset:
    """Exhaustive feasible sets for every length of ``n_range`` (inclusive), from the product register automaton."""
    catalog = catalog or default_catalog()
    n_lo, n_hi = n_range
    if n_lo < 1 or n_hi < n_lo:
        raise ValueError(f"Invalid length range {n_range}.")
    ra = product([catalog.register_automaton(spec) for spec in pair])
    dataset = Dataset(tuple(spec.name for spec in pair))
    for length, found in results_by_length(ra, n_hi - 1):
        n = length + 1
        if n < n_lo:
            continue
        points = set(found)
        dataset.feasible[n] = points
        dataset.hull[n] = graham_hull(points)
        dataset.infeasible[n] = {point for point in lattice_points(dataset.hull[n]) if point not in points}
        for point, config in found.items():
            dataset.witnesses[(n, point)] = config.witness
        logging.debug(
            f"n={n}: {len(points)} feasible, {len(dataset.infeasible[n])} infeasible, hull {dataset.hull[n]}."
        )
    return dataset
