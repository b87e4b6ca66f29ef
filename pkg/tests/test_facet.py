import pytest

from tsif.conditional.gap_loss import Certificate
from tsif.constants import FacetKind, Precondition
from tsif.synthesis.facet import (
    Coordinate,
    FacetCandidate,
    FacetStatus,
    LengthCondition,
    candidate_points,
    condition_ladder,
    confirm_facet,
    facet_check,
    feasible_points,
    points_on_line,
    prove_point_feasible,
)
from tsif.synthesis.linear import LinearInvariant

PV = ("nb_peak", "nb_valley")
SUM_BOUND = LinearInvariant(-2, 1, (-1, -1), PV)
UPPER_CORNER = FacetCandidate(Coordinate(1, 0), Coordinate(1, 1), 1, 2)
LEFT_CORNER = FacetCandidate(Coordinate(1, 1), Coordinate(1, 0), 1, 2)


def test_length_conditions():
    odd = LengthCondition(2, 1)
    assert odd.holds(5) and not odd.holds(4)
    assert LengthCondition(3, -1).residue == 2
    assert LengthCondition(n_from=4).describe() == "n >= 4"
    assert LengthCondition().describe() == "all"
    assert odd.automaton().accepts("<<")
    assert not odd.automaton().accepts("<")
    with pytest.raises(ValueError):
        LengthCondition(0)


def test_ladder_goes_from_weak_to_strong():
    ladder = condition_ladder()
    assert ladder[0] == LengthCondition()
    assert ladder[1:6] == [LengthCondition(n_from=c) for c in range(2, 7)]
    assert ladder[-5:] == [LengthCondition(2, 0), LengthCondition(2, 1), LengthCondition(3, 0), LengthCondition(3, 1),
                           LengthCondition(3, 2)]


def test_candidates_of_the_sum_bound(peaks_valleys):
    assert candidate_points(SUM_BOUND, peaks_valleys, LengthCondition(2, 0)) == [
        FacetCandidate(Coordinate(1, 0), Coordinate(1, 0), 0, 2)
    ]
    odd = candidate_points(SUM_BOUND, peaks_valleys, LengthCondition(2, 1))
    assert set(odd) == {UPPER_CORNER, LEFT_CORNER}
    assert UPPER_CORNER.describe() == "(Upp1(n), Upp2(n) - 1)"
    assert UPPER_CORNER.point((4, 4)) == (4, 3)


def test_point_feasibility(peaks_valleys, catalog):
    n_min = prove_point_feasible(UPPER_CORNER, peaks_valleys, LengthCondition(2, 1), catalog)
    assert n_min is not None and n_min % 2 == 1


def test_sum_bound_is_a_facet_for_odd_lengths(peaks_valleys, catalog):
    status = facet_check(SUM_BOUND, peaks_valleys, catalog)
    assert status.kind == FacetKind.facet
    assert status.condition == LengthCondition(2, 1)
    assert status.certificate == Certificate()
    assert set(status.points[0]) == {UPPER_CORNER, LEFT_CORNER}
    assert confirm_facet(SUM_BOUND, status, peaks_valleys, catalog=catalog) == []
    assert FacetStatus.from_json(status.to_json()) == status


def test_zero_lower_bound_is_not_a_facet(peaks_valleys, catalog):
    status = facet_check(LinearInvariant(0, 0, (1, 1), PV), peaks_valleys, catalog)
    assert status.kind == FacetKind.not_facet
    assert FacetStatus.from_json(status.to_json()).kind == FacetKind.not_facet


def test_conditional_invariants_are_undecided(peaks_valleys, catalog):
    invariant = LinearInvariant(-2, 1, (-1, -1), PV, Precondition.non_default)
    assert facet_check(invariant, peaks_valleys, catalog).kind == FacetKind.undecided


def test_points_on_line(peaks_valleys, catalog):
    feasible = feasible_points(peaks_valleys, 7, catalog)
    assert points_on_line(SUM_BOUND, feasible[7], 7) == [(2, 3), (3, 2)]


def test_terrace_bound_is_a_facet_for_even_lengths(catalog):
    pair = catalog.parse_pair("nb_decreasing_terrace,sum_width_increasing_terrace")
    invariant = LinearInvariant(-2, 1, (-2, -1), tuple(spec.name for spec in pair))
    assert invariant.describe() == "2*R1 + R2 <= n - 2"
    status = facet_check(invariant, pair, catalog)
    assert status.kind == FacetKind.facet
    assert status.condition == LengthCondition(2, 0)
    assert status.n_min == 4
