import pytest

from tsif.catalog.oracle import eval_constraint
from tsif.catalog.signature import enumerate_signatures
from tsif.conditional.gap_loss import Certificate
from tsif.conditional.relations import (
    LenGeq,
    LenMod,
    ResEq,
    ResGapEq,
    ResGeq,
    ResLeq,
    ResLin,
    ResMod,
    parse_relation,
    relation_automaton,
    relation_certificate,
    relation_from_json,
)
from tsif.errors import DependentRelationError

RELATIONS = [
    LenGeq(4),
    LenMod(2, 1),
    LenMod(3, 0),
    ResMod(0, 2, 1),
    ResMod(1, 3, 2),
    ResGeq(0, 2),
    ResLeq(1, 1),
    ResEq(0, 0),
    ResEq(1, 2),
    ResGapEq(0, 0),
    ResGapEq(1, 1),
    ResLin(0, 1, 1, 0),
    ResLin(1, 0, 2, 1),
]


@pytest.mark.parametrize("rel", RELATIONS, ids=str)
def test_parse_renders_back(rel):
    assert parse_relation(rel.describe()) == rel
    assert relation_from_json(rel.to_json()) == rel


def test_describe():
    assert ResGapEq(1, 1).describe() == "R2 = Upp2 - 1"
    assert ResGapEq(0, 0).describe() == "R1 = Upp1"
    assert ResLin(1, 0, 2, 1).describe() == "R2 = 2*R1 + 1"
    assert parse_relation("R_1  mod 2 = 1") == ResMod(0, 2, 1)


@pytest.mark.parametrize("text", ["R1 = Upp2", "R3 = 1", "n < 4", ""])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_relation(text)


def test_invalid_relations():
    with pytest.raises(ValueError):
        LenMod(2, 2)
    with pytest.raises(ValueError):
        ResMod(0, 1, 0)
    with pytest.raises(ValueError):
        ResLin(0, 0, 1, 0)
    with pytest.raises(ValueError, match="Unknown"):
        relation_from_json({"rel": "res_ratio", "which": 0})


def test_semantics():
    assert LenMod(2, 0).holds(4, (0, 0), (0, 0))
    assert ResGapEq(1, 1).holds(9, (9, 6), (9, 7))
    assert ResLin(0, 1, 1, 2).holds(5, (3, 1), (0, 0))
    assert not ResLin(0, 1, 1, 2).holds(5, (3, 2), (0, 0))


def test_even_length_automaton(peaks_valleys, catalog):
    dfa = relation_automaton(LenMod(2, 0), peaks_valleys, catalog)
    assert dfa.accepts("<")
    assert not dfa.accepts("<>")


@pytest.mark.parametrize("rel", [rel for rel in RELATIONS if not rel.dependent], ids=str)
def test_automaton_agrees_with_relation(peaks_valleys, catalog, rel):
    dfa = relation_automaton(rel, peaks_valleys, catalog)
    for length in range(7):
        n = length + 1
        upps = tuple(spec.bound.value(n) for spec in peaks_valleys)
        for sig in enumerate_signatures(length):
            results = tuple(eval_constraint(spec, sig) for spec in peaks_valleys)
            assert dfa.accepts(sig) == rel.holds(n, results, upps), sig


def test_dependent_relations_have_no_automaton(peaks_valleys, catalog):
    with pytest.raises(DependentRelationError):
        relation_automaton(ResLin(0, 1, 1, 0), peaks_valleys, catalog)


def test_certificates(catalog):
    pair = catalog.parse_pair("nb_peak,sum_width_zigzag")
    assert relation_certificate(ResEq(1, 3), pair, catalog) == Certificate()
    assert relation_certificate(ResGapEq(0, 1), pair, catalog).proved
    assert relation_certificate(ResGapEq(1, 0), pair, catalog) == Certificate(13)
