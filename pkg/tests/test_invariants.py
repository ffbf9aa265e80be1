from fractions import Fraction as Q

import pytest

from kodaira_psef.invariants import (
    NEG_INF,
    FibrationSpec,
    InconsistentConfiguration,
    InvariantsReport,
    SpecError,
    canonical_class_data,
    chern2,
    delta_invariant,
    euler_chi,
    is_almost_smooth,
    is_minimal,
    kappa_of_projectivized_tangent,
    kodaira_dimension,
    report,
    sym_power_c1,
    tangent_psef_verdict,
    validate_isotrivial_consistency,
)

K3 = FibrationSpec(0, ["I1"] * 24)
RATIONAL = FibrationSpec(0, ["I1"] * 12)
ABELIAN = FibrationSpec(1)
G2 = FibrationSpec(2)
E8 = FibrationSpec(1, ["II*", "II"])


def mult(k, m=2, g=0):
    return FibrationSpec(g, [f"{m}I0"] * k)


def test_chern2_and_chi():
    assert chern2(K3) == 24 and euler_chi(K3) == 2
    assert chern2(ABELIAN) == 0 and euler_chi(ABELIAN) == 0
    assert chern2(E8) == 12
    assert euler_chi(FibrationSpec(0, ["I2"] * 6)) == 1


def test_inconsistent_configuration():
    with pytest.raises(InconsistentConfiguration):
        FibrationSpec(0, ["II*"])
    s = FibrationSpec(0, ["II*"], validate=False)
    with pytest.raises(InconsistentConfiguration):
        euler_chi(s)


def test_delta():
    assert delta_invariant(ABELIAN) == 0
    assert delta_invariant(mult(4)) == 0
    assert delta_invariant(G2) == 2
    assert delta_invariant(mult(5)) == Q(1, 2)


def test_kodaira_dimension():
    assert kodaira_dimension(RATIONAL) == NEG_INF
    assert kodaira_dimension(K3) == 0
    assert kodaira_dimension(E8) == 1


def test_minimal_and_almost_smooth():
    assert is_minimal(G2) and is_minimal(ABELIAN) and not is_minimal(RATIONAL)
    assert is_almost_smooth(mult(5)) and is_almost_smooth(ABELIAN) and not is_almost_smooth(E8)


def test_verdicts():
    assert tangent_psef_verdict(ABELIAN) == "psef"
    assert tangent_psef_verdict(K3) == "not-psef"
    assert tangent_psef_verdict(mult(5)) == "psef"
    assert tangent_psef_verdict(RATIONAL) == "out-of-scope"
    assert kappa_of_projectivized_tangent(ABELIAN).value == 1
    assert kappa_of_projectivized_tangent(G2).value == 0
    assert kappa_of_projectivized_tangent(K3).value is None


def test_canonical_class_degree_is_delta():
    assert canonical_class_data(ABELIAN).total_degree == 0
    k = canonical_class_data(mult(4))
    assert k.pullback_degree == -2 and k.total_degree == 0
    assert canonical_class_data(G2).total_degree == 2
    s = FibrationSpec(3, ["2I0", "3I0", "IV*", "IV"])
    assert canonical_class_data(s).total_degree == delta_invariant(s)


@pytest.mark.parametrize("i,j,v", [(2, 1, 0), (3, 1, 2), (4, 2, 0), (1, 0, 1), (1, 1, -1)])
def test_sym_power(i, j, v):
    assert sym_power_c1(i, j) == v


def test_sym_power_domain():
    with pytest.raises(ValueError):
        sym_power_c1(0, 0)


def test_isotrivial_consistency():
    assert validate_isotrivial_consistency(E8)
    assert not validate_isotrivial_consistency(K3)
    assert validate_isotrivial_consistency(mult(5))
    assert not validate_isotrivial_consistency(FibrationSpec(0, ["I1*", "I5"]))


def test_spec_json():
    s = FibrationSpec.from_json({"base_genus": 0, "fibres": [{"type": "I", "b": 1}] * 24})
    assert s == K3
    assert FibrationSpec.from_json(s.to_json()) == s
    for obj, code in [
        ({"base_genus": -1}, "E_GENUS"),
        ({"fibres": []}, "E_GENUS"),
        ({"base_genus": 1.5}, "E_GENUS"),
        ({"base_genus": 0, "fibres": [{"type": "II*"}]}, "E_EULER"),
        ({"base_genus": 0, "fibres": [{"type": "IIV"}]}, "E_TYPE"),
        ({"base_genus": 0, "fibres": [{"type": "IV*", "m": 3}]}, "E_MULT"),
        ({"base_genus": 0, "fibres": {}}, "E_SYNTAX"),
        ([], "E_SYNTAX"),
    ]:
        with pytest.raises(SpecError) as exc:
            FibrationSpec.from_json(obj)
        assert exc.value.code == code, obj


def test_report_round_trip():
    for s in (K3, ABELIAN, G2, E8, mult(5), RATIONAL):
        r = report(s)
        assert InvariantsReport.from_json(r.to_json()) == r
        assert r.chi * 12 == r.c2
    assert report(ABELIAN).kappa_PT == 1
    assert report(RATIONAL).tangent_psef == "out-of-scope"
