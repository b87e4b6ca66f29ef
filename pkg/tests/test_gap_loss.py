import pytest

from tsif.catalog.oracle import eval_constraint, loss, shortest_lengths_by_result
from tsif.catalog.signature import enumerate_signatures
from tsif.conditional.gap_loss import (
    Certificate,
    GapLossParams,
    LossInterval,
    check_principal_conditions,
    gap_automaton,
    gap_loss_params,
    gap_to_loss,
    loss_interval,
    periodic_from,
)
from tsif.errors import HomogeneityError


def test_peak_constants(catalog):
    spec = catalog.spec("nb_peak")
    params = gap_loss_params(spec, catalog)
    assert params == GapLossParams(1, 2)
    assert [params.upp(n) for n in range(1, 13)] == [spec.bound.value(n) for n in range(1, 13)]


def test_width_constraints_have_no_constants(catalog):
    with pytest.raises(HomogeneityError):
        gap_loss_params(catalog.spec("sum_width_zigzag"), catalog)


@pytest.mark.parametrize("name", ["nb_peak", "nb_proper_plateau", "nb_decreasing_terrace"])
def test_principal_conditions(catalog, name):
    spec = catalog.spec(name)
    report = check_principal_conditions(spec, gap_loss_params(spec, catalog))
    assert report.passed, report.checks


def test_gap_to_loss_matches_oracle(catalog):
    spec = catalog.spec("nb_peak")
    params = gap_loss_params(spec, catalog)
    shortest = shortest_lengths_by_result(spec, 9)
    for length in range(8):
        n = length + 1
        for sig in enumerate_signatures(length):
            result = eval_constraint(spec, sig)
            value = gap_to_loss(params, params.upp(n) - result, 1 if result else 0, n)
            assert value == loss(spec, sig, shortest)


def test_loss_intervals():
    params = GapLossParams(1, 2)
    assert loss_interval(params, 0, 1) == LossInterval(0, 1)
    assert loss_interval(params, 1, 1) == LossInterval(2, 3)
    assert loss_interval(params, 0, 1).disjoint(loss_interval(params, 1, 1))
    assert 3 in LossInterval(2, 3)
    with pytest.raises(ValueError, match="Empty"):
        LossInterval(2, 1)
    with pytest.raises(ValueError):
        gap_to_loss(params, 0, 1, 0)


def test_certificate_strength():
    proved = Certificate()
    assert proved.to_json() == "proved"
    assert Certificate(13).to_json() == {"desk_verified_to": 13}
    assert Certificate.from_json({"desk_verified_to": 11}) == Certificate(11)
    assert proved.weakest(Certificate(13)) == Certificate(13)
    assert Certificate(13).weakest(Certificate(9)) == Certificate(9)
    assert proved.weakest(proved).proved


def test_periodic_from(catalog):
    assert periodic_from(catalog.spec("nb_peak").bound) == 1


@pytest.mark.parametrize(
    "name", ["nb_peak", "nb_valley", "nb_decreasing_terrace", "sum_width_zigzag", "sum_width_decreasing_sequence"]
)
@pytest.mark.parametrize("delta", [0, 1, 2])
def test_gap_automaton_accepts_the_gap(catalog, name, delta):
    spec = catalog.spec(name)
    automaton = gap_automaton(spec, delta, catalog)
    for length in range(7):
        upp = spec.bound.value(length + 1)
        for sig in enumerate_signatures(length):
            assert automaton.dfa.accepts(sig) == (eval_constraint(spec, sig) == upp - delta), sig


def test_gap_certificates(catalog):
    assert gap_automaton(catalog.spec("nb_peak"), 0, catalog).certificate.proved
    assert gap_automaton(catalog.spec("sum_width_zigzag"), 1, catalog).certificate == Certificate(13)


def test_gap_out_of_range(catalog):
    with pytest.raises(ValueError, match="outside"):
        gap_automaton(catalog.spec("nb_peak"), 6, catalog)


def test_terrace_constants(catalog):
    spec = catalog.spec("nb_decreasing_terrace")
    params = gap_loss_params(spec, catalog)
    assert params == GapLossParams(2, 2)
    assert [params.upp(n) for n in range(1, 13)] == [spec.bound.value(n) for n in range(1, 13)]
