import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsif.automata.register import (
    RaTransition,
    Register,
    RegisterAutomaton,
    Update,
    capped_expansion,
    check_incremental_property,
    delay_table,
    delayed_intersection,
    mod_expansion,
    product,
    results_by_length,
    run,
    sweep,
)
from tsif.catalog.oracle import eval_constraint
from tsif.constants import ALPHABET, RegisterRole

words = st.text(alphabet="<=>", max_size=8)


def test_run_counts_peaks(catalog):
    ra = catalog.register_automaton(catalog.spec("nb_peak"))
    assert run(ra, "<><>").outputs == (2,)
    assert run(ra, "").outputs == (0,)


@pytest.mark.parametrize("name", ["nb_peak", "sum_width_proper_plateau", "sum_width_decreasing_sequence"])
def test_catalog_automata_are_incremental(catalog, name):
    assert check_incremental_property(catalog.register_automaton(catalog.spec(name))).passed


def test_main_register_reset_is_reported():
    registers = (Register("R", 0, RegisterRole.main),)
    transitions = {("q", symbol): RaTransition("q", symbol, "q", (Update(0, (0,)),)) for symbol in ALPHABET}
    ra = RegisterAutomaton(["q"], "q", registers, transitions, ["q"], ((1,),), "reset")
    report = check_incremental_property(ra)
    assert not report.passed
    assert "2a" in report.violated


def test_product_results(peaks_valleys, catalog):
    ra = product([catalog.register_automaton(spec) for spec in peaks_valleys])
    assert ra.factors == 2
    assert run(ra, "<><").outputs == (1, 1)
    layers = dict(results_by_length(ra, 2))
    assert set(layers[2]) == {(0, 0), (1, 0), (0, 1)}
    assert sum(config.count for config in layers[2].values()) == 9
    assert layers[2][(1, 0)].witness == "<>"


def test_sweep_counts_every_signature(catalog):
    ra = catalog.register_automaton(catalog.spec("sum_width_zigzag"))
    for length, layer in sweep(ra, 5):
        assert sum(config.count for config in layer.values()) == 3**length


@given(sig=words)
def test_capped_expansion_is_exact(catalog, sig):
    spec = catalog.spec("nb_peak")
    dfa = capped_expansion(catalog.register_automaton(spec), 1, accept=lambda state, values: values[0] >= 2)
    assert dfa.accepts(sig) == (eval_constraint(spec, sig) >= 2)


@given(sig=words)
def test_mod_expansion_tracks_parity(catalog, sig):
    spec = catalog.spec("sum_width_zigzag")
    dfa = mod_expansion(catalog.register_automaton(spec), 2, accept=lambda state, values: values[0] == 1)
    assert dfa.accepts(sig) == (eval_constraint(spec, sig) % 2 == 1)


def test_delay_table_of_plateau_width(catalog):
    ra = catalog.register_automaton(catalog.spec("sum_width_proper_plateau"))
    table = delay_table(ra)
    assert table["c"] == ((1,),)
    assert table["a"] == ((0,),)
    assert not table.is_zero()


@given(sig=words)
def test_delayed_intersection_keeps_results(catalog, sig):
    ra = catalog.register_automaton(catalog.spec("sum_width_proper_plateau"))
    assert run(delayed_intersection(ra), sig).outputs == run(ra, sig).outputs


def test_delay_table_of_the_terrace_product(catalog):
    pair = catalog.parse_pair("nb_decreasing_terrace,sum_width_increasing_terrace")
    table = delay_table(product([catalog.register_automaton(spec) for spec in pair]))
    assert table.delays == {
        ("s", "a"): ((), (0,)),
        ("s", "b"): ((), (0,)),
        ("s", "c"): ((), (1,)),
        ("r", "a"): ((), (0,)),
        ("t", "a"): ((), (0,)),
    }


@pytest.mark.parametrize(
    "names", ["nb_proper_plateau,sum_width_proper_plateau", "nb_decreasing_terrace,sum_width_increasing_terrace"]
)
def test_delayed_product_keeps_results_on_random_signatures(catalog, names):
    ra = product([catalog.register_automaton(spec) for spec in catalog.parse_pair(names)])
    delayed = delayed_intersection(ra)
    rng = np.random.default_rng(5)
    for _ in range(10_000):
        sig = "".join(rng.choice(list(ALPHABET), size=int(rng.integers(0, 25))))
        assert run(delayed, sig).outputs == run(ra, sig).outputs, sig


def test_json_roundtrip_keeps_behaviour(catalog):
    ra = catalog.register_automaton(catalog.spec("sum_width_decreasing_sequence"))
    again = RegisterAutomaton.from_json(ra.to_json())
    for sig in (">=>", "<>>=", ">>=<>"):
        assert run(again, sig).outputs == run(ra, sig).outputs
