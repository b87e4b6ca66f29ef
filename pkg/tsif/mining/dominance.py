from __future__ import annotations

import logging
from typing import Sequence

from tsif.catalog.specs import ConstraintSpec
from tsif.mining.prove import NonLinearInvariant


def box_points(pair: Sequence[ConstraintSpec], n_range: tuple = (2, 20)) -> list[tuple]:
    """Every ``(n, (R1, R2), (Upp1, Upp2))`` with ``0 <= R_i <= Upp_i(n)`` over the inclusive length range."""
    points = []
    for n in range(n_range[0], n_range[1] + 1):
        upps = tuple(spec.bound.value(n) if spec.bound is not None else n for spec in pair)
        points += [(n, (r1, r2), upps) for r1 in range(upps[0] + 1) for r2 in range(upps[1] + 1)]
    return points


def exclusion_mask(invariant: NonLinearInvariant, points: list[tuple]) -> int:
    mask = 0
    for bit, (n, results, upps) in enumerate(points):
        if invariant.excludes(n, results, upps):
            mask |= 1 << bit
    return mask


def dominance_filter(
    invariants: Sequence[NonLinearInvariant], pair: Sequence[ConstraintSpec], n_range: tuple = (2, 20)
) -> list[NonLinearInvariant]:
    """Drops every invariant whose excluded points are all excluded by another one.

    Invariants are ranked by conjunct count and then by their conjuncts; of two equivalent invariants the first one
    in that order is kept.
    """
    ranked = sorted(invariants, key=lambda invariant: invariant.function.key())
    points = box_points(pair, n_range)
    masks = [exclusion_mask(invariant, points) for invariant in ranked]
    kept = []
    for i, invariant in enumerate(ranked):
        subsumed = False
        for j, other in enumerate(masks):
            if i == j or masks[i] & ~other:
                continue
            if masks[i] != other or j < i:
                subsumed = True
                break
        if not subsumed:
            kept.append(invariant)
    logging.info(f"{len(kept)} of {len(ranked)} proved functions survive dominance.")
    return kept
