from hypothesis import given
from hypothesis import strategies as st

from tsif.automata.dfa import (
    LanguageKind,
    LanguageStatus,
    empty,
    from_predicate,
    intersect,
    intersect_all,
    language_emptiness_and_finiteness,
    length_at_least,
    length_mod,
    min_length_through_cycle,
    minimize,
    shortest_word_through_cycle,
)
from tsif.catalog.regex import compile_pattern, shortest_word_length

words = st.text(alphabet="<=>", max_size=9)


def test_length_automata():
    odd = length_mod(2, 1)
    assert odd.accepts("<")
    assert not odd.accepts("")
    assert odd.accepts("=><")
    assert length_at_least(3).accepts("<<<")
    assert not length_at_least(3).accepts("<<")
    assert not length_mod(3, 0, min_len=4).accepts("<<<")
    assert length_mod(3, 0, min_len=4).accepts("<<<<<<")


def test_language_kinds():
    assert empty().language().is_empty
    assert length_mod(2, 1).language().kind == LanguageKind.infinite
    finite = from_predicate(lambda word: len(word) <= 2 and "=" not in word, 3)
    status = finite.language()
    assert status.kind == LanguageKind.finite
    assert status.longest_word_len == 2


def test_intersection_shortest_word():
    both = intersect_all([length_mod(2, 0), length_at_least(3)])
    assert both.shortest_word() == "<<<<"
    assert intersect_all([length_mod(2, 0), length_mod(2, 1)]).language().is_empty


def test_pumped_witness_is_accepted():
    odd = length_mod(2, 1)
    witness = odd.pumped_witness()
    assert witness == "<<<"
    assert odd.accepts(witness)
    assert from_predicate(lambda word: word == "<", 2).pumped_witness() is None


def test_min_length_through_cycle():
    odd = length_mod(2, 1)
    assert min_length_through_cycle(odd, 2) == 1
    assert min_length_through_cycle(odd, 3) is None
    assert min_length_through_cycle(empty(), 1) is None


def test_shortest_word_through_cycle():
    assert shortest_word_through_cycle(length_mod(2, 1), 2) == "<"
    assert shortest_word_through_cycle(intersect(length_mod(2, 1, 3), length_at_least(5)), 2) == "<<<<<"
    assert shortest_word_through_cycle(length_mod(2, 1), 3) is None
    assert shortest_word_through_cycle(empty(), 1) is None


def test_minimize_merges_equivalent_states():
    assert len(minimize(length_mod(3, 0))) == 3
    assert len(minimize(intersect(length_mod(2, 0), length_mod(4, 0)))) == 4


def test_pattern_shortest_words():
    assert shortest_word_length("<(<|=)*(>|=)*>") == 2
    assert shortest_word_length(">=+<") == 3
    assert compile_pattern("<(<|=)*(>|=)*>").accepts("<==>")


@given(word=words)
def test_minimize_preserves_language(word):
    automaton = intersect(compile_pattern("(<>)+<(>|ε) | (><)+>(<|ε)"), length_mod(2, 1))
    assert minimize(automaton).accepts(word) == automaton.accepts(word)


@given(word=words)
def test_complement(word):
    peak = compile_pattern("<(<|=)*(>|=)*>")
    assert peak.complement().accepts(word) != peak.accepts(word)


def test_emptiness_and_finiteness_of_products():
    short_even = intersect(length_mod(2, 0), length_at_least(5).complement())
    assert language_emptiness_and_finiteness(short_even) == LanguageStatus(LanguageKind.finite, 4)
    assert language_emptiness_and_finiteness(length_at_least(2)).kind == LanguageKind.infinite
    assert language_emptiness_and_finiteness(intersect(length_at_least(2), empty())).is_empty
