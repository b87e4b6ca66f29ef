import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsif.automata.register import run
from tsif.catalog.loader import CATALOG_FILE, fit_upper_bound, load_catalog, max_by_length, upper_bound
from tsif.catalog.oracle import brute_force_max, eval_constraint, maximal_occurrences
from tsif.catalog.signature import (
    TimeSeries,
    enumerate_signatures,
    random_series,
    series_length,
    signature_of,
)
from tsif.catalog.specs import UpperBoundFormula, constraint, split_name
from tsif.constants import Feature
from tsif.errors import CatalogError, NoBoundError

signatures = st.text(alphabet="<=>", max_size=8)


def test_signature_of_series():
    assert signature_of([1, 2, 2, 1]) == "<=>"
    assert signature_of([5]) == ""
    assert TimeSeries.from_signature("<>").values == (0, 1, 0)
    assert series_length("<>") == 3


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=10))
def test_signature_roundtrips_through_smallest_series(values):
    sig = signature_of(values)
    assert TimeSeries.from_signature(sig).signature == sig


def test_enumerate_signatures_in_alphabet_order():
    sigs = list(enumerate_signatures(2))
    assert len(sigs) == 9
    assert sigs[0] == "<<"
    assert sigs[-1] == ">>"
    with pytest.raises(ValueError):
        list(enumerate_signatures(-1))


def test_random_series_is_seeded():
    a = random_series(np.random.default_rng(3), 6)
    b = random_series(np.random.default_rng(3), 6)
    assert a == b
    assert len(a) == 6


@pytest.mark.parametrize(
    "name, sig, expected",
    [
        ("nb_peak", "<>", 1),
        ("nb_peak", "<><>", 2),
        ("nb_peak", "<=>", 1),
        ("nb_peak", "<<", 0),
        ("nb_valley", "><", 1),
        ("sum_width_peak", "<<>>", 3),
        ("sum_width_proper_plateau", ">=<", 2),
        ("sum_width_decreasing_sequence", ">=>", 4),
        ("sum_width_zigzag", "<><>", 3),
    ],
)
def test_oracle_results(catalog, name, sig, expected):
    assert eval_constraint(catalog.spec(name), sig) == expected


def test_maximal_occurrences_are_one_based(catalog):
    assert maximal_occurrences(catalog.spec("nb_peak").regex, "<><>") == [(1, 2), (3, 4)]
    assert maximal_occurrences(catalog.spec("nb_peak").regex, "==") == []


def test_upper_bound_formula():
    formula = UpperBoundFormula(1, 2, 1, 0)
    assert [formula.value(n) for n in range(1, 7)] == [0, 0, 1, 1, 2, 2]
    assert formula.describe() == "max(0, floor((n - 1) / 2))"
    slope, intercept = formula.affine_on_class(1, 2)
    assert slope * 5 + intercept == formula.value(5)
    with pytest.raises(ValueError):
        formula.value(0)
    with pytest.raises(ValueError):
        UpperBoundFormula(0, 0, 1, 0)


def test_peak_bounds_match_brute_force(catalog):
    for name in ("nb_peak", "sum_width_peak"):
        spec = catalog.spec(name)
        for n in range(1, 8):
            assert upper_bound(spec, n) == brute_force_max(spec, n)


def test_fit_upper_bound_recovers_peak_bound(catalog):
    spec = catalog.spec("nb_peak")
    fitted = fit_upper_bound(max_by_length(catalog, spec, 12))
    assert fitted is not None
    assert all(fitted.value(n) == spec.bound.value(n) for n in range(1, 13))


@pytest.mark.parametrize(
    "name",
    [
        "nb_peak",
        "nb_valley",
        "sum_width_proper_plateau",
        "nb_decreasing_terrace",
        "sum_width_increasing_terrace",
        "sum_width_zigzag",
    ],
)
@given(sig=signatures)
def test_register_automaton_agrees_with_oracle(catalog, name, sig):
    spec = catalog.spec(name)
    assert run(catalog.register_automaton(spec), sig).outputs[0] == eval_constraint(spec, sig)


def test_catalog_lookup_errors(catalog):
    with pytest.raises(CatalogError):
        catalog.spec("nb_unknown")
    with pytest.raises(CatalogError):
        catalog.spec("max_height_peak")
    with pytest.raises(CatalogError):
        catalog.parse_pair("nb_peak")
    assert split_name("sum_width_zigzag") == (Feature.width, "zigzag")
    assert constraint("nb_zigzag").name == "nb_zigzag"
    assert constraint("sum_width_peak").regex.name == "peak"


def test_missing_bound_raises(catalog, tmp_path):
    data = json.loads(CATALOG_FILE.read_text())
    for entry in data["patterns"]:
        entry.pop("upper_bounds", None)
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps(data))
    stripped = load_catalog(path)
    with pytest.raises(NoBoundError):
        upper_bound(stripped.spec("nb_peak"), 5)


def test_unreadable_catalog(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(CatalogError):
        load_catalog(path)
