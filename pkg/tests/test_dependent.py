from tsif.conditional.relations import ResLin, ResMod, relation_automaton
from tsif.synthesis.dependent import prove_dependent


def test_gap_of_two_is_infeasible(peaks_valleys, catalog):
    # P <= V + 1 rules out P = V + 2.
    proof = prove_dependent(peaks_valleys, ResLin(0, 1, 1, 2), catalog=catalog)
    assert proof.proved
    assert [split.parity for split in proof.splits] == [0, 1]
    assert "infeasible" in proof.describe()


def test_feasible_relation_stays_open(peaks_valleys, catalog):
    proof = prove_dependent(peaks_valleys, ResLin(0, 1, 1, 0), catalog=catalog)
    assert not proof.proved


def test_even_multiple_splits_on_parity(peaks_valleys, catalog):
    proof = prove_dependent(peaks_valleys, ResLin(0, 1, 2, 1), catalog=catalog)
    assert proof.splits[0].outcome == "parity"
    # "<>" has one peak and no valley.
    assert proof.splits[1].outcome == "unknown"
    assert not proof.proved


def test_odd_equal_widths_are_infeasible(catalog):
    pair = catalog.parse_pair("sum_width_decreasing_sequence,sum_width_zigzag")
    odd = relation_automaton(ResMod(0, 2, 1), pair, catalog)
    proof = prove_dependent(pair, ResLin(0, 1, 1, 0), [odd], catalog)
    assert proof.proved
    assert proof.splits[0].outcome == "empty"
