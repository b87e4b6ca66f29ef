import json

import polars as pl
import pytest

from tsif.catalog.oracle import eval_constraint
from tsif.conditional.relations import LenMod, ResEq, ResGapEq, ResLin, ResMod
from tsif.constants import ProofKind
from tsif.mining.dataset import Dataset, generate_dataset
from tsif.mining.dominance import dominance_filter
from tsif.mining.hull import cross, graham_hull, lattice_points, point_in_polygon
from tsif.mining.hypotheses import BooleanFunction, atomic_relations, enumerate_hypotheses, filter_consistent
from tsif.mining.pipeline import mine
from tsif.mining.prove import NonLinearInvariant, find_witness, prove, violations

WIDTHS = "sum_width_decreasing_sequence,sum_width_zigzag"


@pytest.fixture(scope="module")
def widths(catalog):
    return catalog.parse_pair(WIDTHS)


@pytest.fixture(scope="module")
def width_dataset(widths, catalog):
    return generate_dataset(widths, (7, 12), catalog)


def test_hull_of_a_square():
    points = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0)]
    assert graham_hull(points) == [(0, 0), (2, 0), (2, 2), (0, 2)]
    assert graham_hull([(0, 0), (2, 0), (1, 1)]) == [(0, 0), (2, 0), (1, 1)]


def test_degenerate_hulls():
    assert graham_hull([(0, 0), (1, 0), (2, 0)]) == [(0, 0), (2, 0)]
    assert graham_hull([(3, 4)]) == [(3, 4)]
    with pytest.raises(ValueError):
        graham_hull([])


def test_point_location():
    triangle = [(0, 0), (2, 0), (1, 1)]
    assert cross((0, 0), (1, 0), (0, 1)) > 0
    assert point_in_polygon((1, 0), triangle)
    assert not point_in_polygon((0, 1), triangle)
    assert point_in_polygon((1, 1), [(0, 0), (2, 2)])
    assert lattice_points(triangle) == [(0, 0), (1, 0), (1, 1), (2, 0)]


def test_width_dataset(width_dataset):
    assert width_dataset.lengths == [7, 8, 9, 10, 11, 12]
    assert width_dataset.hull[9] == [(0, 0), (9, 0), (9, 6), (8, 7), (6, 6)]
    assert (9, 6) in width_dataset.feasible[9]
    assert (9, 5) in width_dataset.infeasible[9]
    for n in width_dataset.lengths:
        assert not width_dataset.feasible[n] & width_dataset.infeasible[n]
        assert all(point_in_polygon(point, width_dataset.hull[n]) for point in width_dataset.feasible[n])
        assert set(width_dataset.hull[n]) <= width_dataset.feasible[n]


def test_dataset_witnesses(peaks_valleys, catalog):
    dataset = generate_dataset(peaks_valleys, (11, 11), catalog)
    assert (4, 3) in dataset.feasible[11]
    witness = dataset.witnesses[(11, (4, 3))]
    assert len(witness) == 10
    assert tuple(eval_constraint(spec, witness) for spec in peaks_valleys) == (4, 3)


def test_dataset_dumps(width_dataset, tmp_path):
    width_dataset.write(tmp_path / "widths.json")
    restored = Dataset.from_json(json.loads((tmp_path / "widths.json").read_text()), width_dataset.pair)
    assert restored.feasible == width_dataset.feasible
    assert restored.hull == width_dataset.hull
    width_dataset.write(tmp_path / "widths.parquet", "parquet")
    frame = pl.read_parquet(tmp_path / "widths.parquet")
    assert frame.columns == ["n", "kind", "r1", "r2"]
    assert frame.filter(pl.col("kind") == "hull").height == sum(len(hull) for hull in width_dataset.hull.values())
    with pytest.raises(ValueError):
        width_dataset.write(tmp_path / "widths.csv", "csv")


def test_dataset_is_deterministic(widths, catalog, width_dataset):
    assert generate_dataset(widths, (7, 12), catalog).to_json() == width_dataset.to_json()


def test_boolean_functions():
    function = BooleanFunction.parse("R1 mod 2 = 1 ∧ R1 = R2")
    assert function.conjuncts == (ResMod(0, 2, 1), ResLin(0, 1, 1, 0))
    assert function.dependent == [ResLin(0, 1, 1, 0)]
    assert BooleanFunction.parse(function.describe()) == function
    assert BooleanFunction.from_json(function.to_json()) == function
    assert function.holds(9, (3, 3), (9, 7))
    assert BooleanFunction.parse("R2 = 1 and n mod 2 = 0") == BooleanFunction((LenMod(2, 0), ResEq(1, 1)))
    with pytest.raises(ValueError, match="at most one"):
        BooleanFunction((ResLin(0, 1, 1, 0), ResLin(1, 0, 2, 1)))
    with pytest.raises(ValueError):
        BooleanFunction(())


def test_hypothesis_space(widths):
    assert len(atomic_relations(widths)) == 63
    functions = enumerate_hypotheses(widths)
    assert min(function.size for function in functions) == 1
    assert max(function.size for function in functions) == 3
    assert all(len(function.dependent) <= 1 for function in functions)
    keys = {function.key() for function in functions}
    for text in ["R1 = 1", "n mod 2 = 0 and R1 = Upp1 - 1 and R2 = Upp2", "R1 mod 2 = 1 and R1 = R2"]:
        assert BooleanFunction.parse(text).key() in keys


def test_consistency_filter(widths, width_dataset):
    kept = BooleanFunction.parse("R1 mod 2 = 1 and R1 = R2")
    candidates = [kept, BooleanFunction.parse("R1 = R2"), BooleanFunction((ResEq(0, 13),))]
    assert filter_consistent(candidates, width_dataset, widths) == [kept]


def test_single_result_proofs(widths, catalog):
    assert prove(BooleanFunction.parse("R2 = 1"), widths, catalog).kind == ProofKind.proved_universal
    corner = prove(BooleanFunction.parse("n mod 2 = 0 and R1 = Upp1 - 1 and R2 = Upp2"), widths, catalog)
    assert corner.kind == ProofKind.desk_verified
    assert corner.desk_max_n == 13


def test_dependent_proof(widths, catalog):
    invariant = prove(BooleanFunction.parse("R1 mod 2 = 1 and R1 = R2"), widths, catalog)
    assert invariant.proved
    assert invariant.kind != ProofKind.desk_verified


def test_refutation_carries_a_witness(peaks_valleys, catalog):
    invariant = prove(BooleanFunction.parse("R1 = 1"), peaks_valleys, catalog)
    assert invariant.kind == ProofKind.refuted
    assert eval_constraint(peaks_valleys[0], invariant.witness) == 1
    assert find_witness(BooleanFunction.parse("R1 = 1"), peaks_valleys, 5, catalog) == "<>"
    dependent = prove(BooleanFunction.parse("R1 = R2"), peaks_valleys, catalog)
    assert dependent.kind == ProofKind.refuted
    assert dependent.witness == ""


def test_guarded_proof(peaks_valleys, catalog):
    # A single peak with no valley reaches Upp1 only for n = 3 and n = 4.
    invariant = prove(BooleanFunction((ResGapEq(0, 0), ResEq(0, 1), ResEq(1, 0))), peaks_valleys, catalog)
    assert invariant.kind == ProofKind.proved_with_guard
    assert invariant.n_min == 5
    assert invariant.excludes(5, (1, 0), (2, 2)) is False
    assert violations(invariant, peaks_valleys, (2, 10), catalog) is None


def test_invariant_json(widths, catalog):
    invariant = prove(BooleanFunction.parse("n mod 2 = 0 and R1 = Upp1 - 1 and R2 = Upp2"), widths, catalog)
    assert NonLinearInvariant.from_json(invariant.to_json(), invariant.pair) == invariant
    assert "desk_verified up to n=13" in invariant.describe()


def test_dominance(widths):
    names = tuple(spec.name for spec in widths)
    general = NonLinearInvariant(BooleanFunction.parse("R1 = 1"), names, ProofKind.proved_universal)
    specific = NonLinearInvariant(BooleanFunction.parse("R1 = 1 and R2 = 1"), names, ProofKind.proved_universal)
    assert dominance_filter([specific, general], widths) == [general]
    assert dominance_filter([specific], widths) == [specific]


@pytest.mark.slow
def test_mining_the_width_pair(widths, catalog):
    result = mine(widths, catalog=catalog)
    assert result.hypotheses > len(result.consistent) > 0
    final = {invariant.function.key() for invariant in result.final}
    for text in ["R2 = 1", "n mod 2 = 0 and R1 = Upp1 - 1 and R2 = Upp2"]:
        assert BooleanFunction.parse(text).key() in final
    for invariant in result.final:
        assert invariant.proved
        assert violations(invariant, widths, (7, 13), catalog) is None
