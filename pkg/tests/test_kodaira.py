from fractions import Fraction as Q

import pytest

from kodaira_psef.kodaira import (
    ISOTRIVIAL_SINGULAR,
    FibreTypeError,
    KodairaType,
    MultiplicityError,
    closed_form_coefficient,
    euler_from_configuration,
    euler_number,
    fibre_model,
    gamma_points,
    kodaira_type_from_json,
    normalised_fibre_data,
    normalized_fibre,
)
from kodaira_psef.lattice import DivisorVec
from kodaira_psef.local import LocalIdeal

T = KodairaType.parse


@pytest.mark.parametrize("text,name", [
    ("II*", "II*"), ("I0*", "I0*"), ("I3", "I3"), ("2I0", "2I0"), (" IV ", "IV"), ("I12*", "I12*"),
])
def test_parse_names(text, name):
    assert T(text).name == name


@pytest.mark.parametrize("bad", ["V", "I", "II3", "I*", "IIII", ""])
def test_parse_rejects(bad):
    with pytest.raises(FibreTypeError):
        T(bad)


def test_multiplicity_rules():
    with pytest.raises(MultiplicityError):
        KodairaType("II*", 0, 2)
    with pytest.raises(MultiplicityError):
        KodairaType("I", 0, 0)
    assert KodairaType("I", 3, 2).name == "2I3"
    assert kodaira_type_from_json({"type": "I", "b": 0, "m": 5}) == KodairaType("I", 0, 5)
    assert kodaira_type_from_json({"type": "2I0"}) == KodairaType("I", 0, 2)
    with pytest.raises(MultiplicityError):
        kodaira_type_from_json({"type": "IV", "m": 2})
    with pytest.raises(FibreTypeError):
        kodaira_type_from_json({"type": "I"})


def test_fibre_model_examples():
    m = fibre_model(T("II*"))
    assert [c.multiplicity for c in m.components] == [1, 2, 3, 4, 5, 6, 3, 4, 2]
    assert {k for k, _ in m.edges} == {("e1", "e2"), ("e2", "e3"), ("e3", "e4"), ("e4", "e5"),
                                      ("e5", "e6"), ("e6", "e7"), ("e6", "e8"), ("e8", "e9")}
    m = fibre_model(T("I0*"))
    assert [c.multiplicity for c in m.components] == [2, 1, 1, 1, 1]
    m = fibre_model(T("I2"))
    assert [c.multiplicity for c in m.components] == [1, 1]
    assert m.edges == ((("e1", "e2"), 2),)


@pytest.mark.parametrize("name,e", [
    ("II*", 10), ("I0*", 6), ("2I0", 0), ("II", 2), ("III", 3), ("IV", 4), ("III*", 9), ("IV*", 8),
    ("I1", 1), ("I7", 7), ("I4*", 10), ("I11", 11), ("I13*", 19),
])
def test_euler(name, e):
    assert euler_number(T(name)) == e
    assert euler_from_configuration(fibre_model(T(name))) == e


def test_euler_oracle_branch_counts():
    assert euler_from_configuration(fibre_model(T("I1"))) == 2 - 1
    assert euler_from_configuration(fibre_model(T("IV"))) == 6 - 2
    assert euler_from_configuration(fibre_model(T("III"))) == 4 - 1


def test_normalised_examples():
    assert normalized_fibre(T("II")) == DivisorVec({"e1": Q(1, 6)})
    assert normalized_fibre(T("3I0")) == DivisorVec()
    want = [Q(5, 6), Q(2, 3), Q(1, 2), Q(1, 3), Q(1, 6), 0, Q(1, 2), Q(1, 3), Q(2, 3)]
    s = normalized_fibre(T("II*"))
    assert [s[f"e{i}"] for i in range(1, 10)] == want


def test_normalised_zero_exactly_where_nu_is_12_over_12_minus_e():
    for name in ISOTRIVIAL_SINGULAR:
        m = fibre_model(T(name))
        s = normalized_fibre(T(name))
        for c in m.components:
            zero = c.multiplicity * (12 - m.euler) == 12
            assert (s[c.id] == 0) == zero, (name, c.id)
            assert 0 <= s[c.id] < 1


def test_extrapolated_flag():
    assert normalised_fibre_data(T("I3")).formula_extrapolated
    assert normalised_fibre_data(T("I3")).divisor == DivisorVec({f"e{i}": Q(1, 4) for i in (1, 2, 3)})
    assert not normalised_fibre_data(T("IV*")).formula_extrapolated
    assert not normalised_fibre_data(T("I0")).formula_extrapolated
    assert normalised_fibre_data(T("2I3")).divisor == DivisorVec({f"e{i}": Q(1, 2) for i in (1, 2, 3)})


def test_closed_form():
    assert closed_form_coefficient(10, 6) == 0
    assert closed_form_coefficient(2, 1) == Q(1, 6)


def test_gamma_points():
    assert gamma_points(T("II")) == [(("e1",), LocalIdeal(["x^2", "y"]))]
    assert gamma_points(T("IV")) == [(("e1", "e2", "e3"), LocalIdeal(["x^2", "y^2"]))]
    pts = gamma_points(T("II*"))
    assert len(pts) == 8 and all(i == LocalIdeal(["x", "y"]) for _, i in pts)
    assert len(gamma_points(T("I4"))) == 4
    assert gamma_points(T("I0")) == [] and gamma_points(T("2I0")) == []


def test_model_json_shape():
    j = fibre_model(T("III")).to_json()
    assert j["euler"] == 3
    assert j["edges"] == [{"components": ["e1", "e2"], "intersection": 2}]
    assert j["gram"] == [["-2", "2"], ["2", "-2"]]
