from fractions import Fraction as Q

import pytest

from kodaira_psef.blowup import (
    EmptyGammaError,
    NotIsotrivialType,
    blown_up_fibre,
    computed_pullback,
    factors_reproduce_equation,
    oracle_exceptional_coefficients,
    projection_formula_holds,
    pullback_normalized_fibre,
    small_coefficient_witness,
    y_restriction_verdict,
)
from kodaira_psef.invariants import FibrationSpec
from kodaira_psef.kodaira import ISOTRIVIAL_SINGULAR, KodairaType, fibre_model, normalized_fibre
from kodaira_psef.lattice import definiteness, primitive

T = KodairaType.parse


def test_pullback_examples():
    assert dict(pullback_normalized_fibre(T("II")).exceptional) == {"Y_1": Q(1, 3)}
    assert dict(pullback_normalized_fibre(T("IV")).exceptional) == {"Y_1,2,3": Q(1, 2)}
    ex = dict(pullback_normalized_fibre(T("II*")).exceptional)
    assert ex["Y_1,2"] == Q(3, 2) and ex["Y_5,6"] == Q(1, 6)
    assert pullback_normalized_fibre(T("II*")).strict == normalized_fibre(T("II*"))


@pytest.mark.parametrize("name", ["I0", "2I0", "3I0"])
def test_empty_gamma(name):
    with pytest.raises(EmptyGammaError):
        pullback_normalized_fibre(T(name))
    with pytest.raises(EmptyGammaError):
        blown_up_fibre(T(name))


def test_non_isotrivial_types_rejected():
    with pytest.raises(NotIsotrivialType):
        pullback_normalized_fibre(T("I3"))


@pytest.mark.parametrize("name,witness", [
    ("I0*", ("Y_1,2", Q(1, 2))),
    ("II", ("Y_1", Q(1, 3))),
    ("III*", ("Y_3,4", Q(1, 4))),
    ("II*", ("Y_5,6", Q(1, 6))),
    ("IV*", ("Y_2,7", Q(1, 3))),
])
def test_witness(name, witness):
    assert small_coefficient_witness(T(name)) == witness


@pytest.mark.parametrize("name,count", [("II*", 8), ("III*", 7), ("IV*", 6), ("I0*", 4), ("II", 1), ("III", 1), ("IV", 1)])
def test_point_count(name, count):
    assert len(pullback_normalized_fibre(T(name)).exceptional) == count
    assert len(blown_up_fibre(T(name)).exceptional) == count


def test_oracle_reproduces_stored_values_except_ledgered_pair():
    assert oracle_exceptional_coefficients(T("IV")) == {"Y_1,2,3": Q(1, 2)}
    assert oracle_exceptional_coefficients(T("II")) == {"Y_1": Q(1, 4)}
    assert oracle_exceptional_coefficients(T("III")) == {"Y_1,2": Q(1, 3)}
    for name in ("I0*", "II*", "III*", "IV*"):
        assert computed_pullback(T(name)).exceptional == pullback_normalized_fibre(T(name)).exceptional


@pytest.mark.parametrize("name", ISOTRIVIAL_SINGULAR + ("I1", "I2", "I5", "I2*"))
def test_blown_up_gram(name):
    bf = blown_up_fibre(T(name))
    d = definiteness(bf.lattice)
    assert d.verdict == "negative-semidefinite" and len(d.kernel) == 1
    assert primitive(bf.lattice.vector(d.kernel[0])) == primitive(list(bf.multiplicities))
    assert projection_formula_holds(T(name))
    m = fibre_model(T(name))
    assert all(factors_reproduce_equation(m, i) for i in range(len(m.points)))


def test_blown_up_triple_point_numbers():
    bf = blown_up_fibre(T("IV"))
    lat = bf.lattice
    assert lat.pair("Y_1,2,3", "Y_1,2,3") == -4
    assert lat.pair("e1", "Y_1,2,3") == 2
    assert lat.pair("e1", "e2") == 0
    assert lat.pair("e1", "e1") == -3


def test_duplicate_exceptional_names_are_primed():
    assert blown_up_fibre(T("I2")).exceptional == ("Y_1,2", "Y_2,1")
    assert blown_up_fibre(T("I1")).exceptional == ("Y_1",)


def test_y_restriction_examples():
    for g, delta in ((1, 1), (2, 3)):
        v = y_restriction_verdict(FibrationSpec(g, ["II*", "II"]))
        assert v.verdict == "not-psef" and v.delta == delta
        assert not v.oracle.psef
        assert [w[2:] for w in v.witnesses] == [("Y_5,6", Q(1, 6)), ("Y_1", Q(1, 3))]
    v = y_restriction_verdict(FibrationSpec(0, ["2I0"] * 5))
    assert v.verdict == "not-applicable" and "c2 = 0" in v.reason
    v = y_restriction_verdict(FibrationSpec(0, ["I1"] * 24))
    assert v.verdict == "not-applicable"
    v = y_restriction_verdict(FibrationSpec(0, ["II*", "II"]))
    assert v.verdict == "not-applicable" and "kappa" in v.reason


def test_y_restriction_with_multiple_fibres_present():
    v = y_restriction_verdict(FibrationSpec(0, ["IV*", "IV", "2I0", "3I0", "5I0"]))
    assert v.verdict == "not-psef"
    assert [w[0] for w in v.witnesses] == ["S1", "S2"]
