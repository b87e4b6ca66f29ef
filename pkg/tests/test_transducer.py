import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsif.automata.register import results_by_length, run
from tsif.automata.transducer import (
    SeedTransducer,
    before_after_found_split,
    decorate_loss_nb,
    decorate_nb,
    homogeneity_check,
    mirror,
    regrets,
    separate,
    validate_transducer,
)
from tsif.catalog.oracle import eval_constraint, loss, shortest_lengths_by_result
from tsif.constants import ALPHABET
from tsif.errors import SeparationError


def test_peak_transducer_counts(catalog):
    peak = catalog.transducer("peak")
    assert peak.count("<><>") == 2
    assert peak.found_positions("<=><") == [3]
    assert mirror(peak).count("><") == 1


@pytest.mark.parametrize(
    "pattern",
    [
        "peak",
        "valley",
        "proper_plateau",
        "decreasing_terrace",
        "increasing_terrace",
        "decreasing_sequence",
        "increasing_sequence",
        "zigzag",
    ],
)
def test_transducers_match_oracle(catalog, pattern):
    report = validate_transducer(catalog.transducer(pattern), catalog.patterns[pattern], 6)
    assert report.passed, report.counterexamples
    assert report.checked == sum(3**length for length in range(7))


@pytest.mark.parametrize("pattern", ["peak", "proper_plateau", "decreasing_sequence", "zigzag"])
def test_homogeneity_gives_the_count_bound(catalog, pattern):
    result = homogeneity_check(catalog.transducer(pattern))
    assert result.passed
    bound = catalog.spec(f"nb_{pattern}").bound
    assert (result.c, result.d) == (bound.c, bound.d)


def test_inhomogeneous_transducer_is_rejected():
    data = {
        "states": ["s", "u"],
        "initial": "s",
        "transitions": [
            {"from": "s", "symbol": "<", "to": "s", "phase": "found"},
            {"from": "s", "symbol": "=", "to": "s", "phase": "not_found"},
            {"from": "s", "symbol": ">", "to": "u", "phase": "found"},
            {"from": "u", "symbol": "<", "to": "u", "phase": "not_found"},
            {"from": "u", "symbol": "=", "to": "s", "phase": "not_found"},
            {"from": "u", "symbol": ">", "to": "u", "phase": "not_found"},
        ],
    }
    result = homogeneity_check(SeedTransducer.from_json(data, "uneven"))
    assert not result.passed
    assert "different" in result.reason


def test_separation_splits_shared_states(catalog):
    peak = catalog.transducer("peak")
    with pytest.raises(SeparationError):
        before_after_found_split(decorate_nb(peak))
    separated = separate(peak)
    assert sorted(separated.states) == ["r", "r'", "s", "t"]
    split = before_after_found_split(decorate_nb(separated))
    assert split.before == {"s", "r"}
    assert split.after == {"t", "r'"}
    assert regrets(separated).regret[("s", "<")] == 0


@given(sig=st.text(alphabet="<=>", max_size=7))
def test_loss_automaton_matches_oracle(catalog, sig):
    spec = catalog.spec("nb_peak")
    ra = decorate_loss_nb(separate(catalog.transducer("peak")))
    shortest = shortest_lengths_by_result(spec, 9)
    assert run(ra, sig).outputs[0] == loss(spec, sig, shortest)


@pytest.mark.parametrize("name", ["nb_peak", "nb_decreasing_terrace"])
def test_regrets_give_the_loss_on_long_series(catalog, name):
    spec = catalog.spec(name)
    ra = decorate_loss_nb(separate(catalog.transducer(spec.regex.name)))
    shortest = {}
    for length, found in results_by_length(catalog.register_automaton(spec), 19):
        for (result,) in found:
            shortest.setdefault(result, length + 1)
    rng = np.random.default_rng(11)
    for _ in range(10_000):
        sig = "".join(rng.choice(list(ALPHABET), size=int(rng.integers(0, 20))))
        assert run(ra, sig).outputs[0] == len(sig) + 1 - shortest[eval_constraint(spec, sig)], sig
