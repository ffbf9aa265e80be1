from fractions import Fraction as Q

import pytest

from kodaira_psef.kodaira import KodairaType, fibre_model
from kodaira_psef.lattice import (
    NO_SOLUTION,
    CurveClass,
    DivisorVec,
    Lattice,
    LatticeError,
    definiteness,
    format_divisor,
    format_rational,
    intersect,
    kernel_basis,
    parse_divisor,
    parse_rational,
    rational,
    solve_linear,
)


def fibre_lattice(name):
    return fibre_model(KodairaType.parse(name)).lattice()


def test_rational_coercion_refuses_floats():
    assert rational("3/6") == Q(1, 2)
    assert rational(4) == Q(4)
    with pytest.raises(TypeError):
        rational(0.5)
    with pytest.raises(TypeError):
        rational(True)


@pytest.mark.parametrize("text,value", [("1/2", Q(1, 2)), ("-4/6", Q(-2, 3)), ("7", Q(7)), (" 0 ", Q(0))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value
    assert parse_rational(format_rational(value)) == value


@pytest.mark.parametrize("bad", ["1/0", "x", "1.5", "", "1//2"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_divisor_drops_zeros_and_sorts():
    d = DivisorVec({"e2": 1, "e1": Q(1, 2), "e3": 0})
    assert d.support() == ("e1", "e2")
    assert d - d == DivisorVec()
    assert not DivisorVec({"x": 0})
    assert (d * 2)["e1"] == 1


def test_divisor_text_round_trip():
    d = DivisorVec({"Y_1,2": Q(-3, 2), "S1.e4": 1, "F": Q(1, 6), "Y_1,2'": 2})
    assert parse_divisor(format_divisor(d)) == d
    assert parse_divisor("0") == DivisorVec()


def test_intersect_examples():
    lat = Lattice.from_pairs([CurveClass("F", "general-fibre")], {})
    assert intersect(DivisorVec.of("F"), DivisorVec.of("F"), lat) == 0
    assert intersect(DivisorVec.of("e1"), DivisorVec.of("e2"), fibre_lattice("I2")) == 2
    assert intersect(DivisorVec.of("e1"), DivisorVec.of("e1"), fibre_lattice("I0*")) == -2
    with pytest.raises(LatticeError):
        intersect(DivisorVec.of("zz"), DivisorVec.of("e1"), fibre_lattice("I2"))


def test_lattice_rejects_asymmetric_gram():
    with pytest.raises(ValueError):
        Lattice((CurveClass("a"), CurveClass("b")), ((0, 1), (2, 0)))
    with pytest.raises(ValueError):
        CurveClass("a", "bogus")


def test_definiteness_examples():
    assert definiteness(Lattice.from_pairs(["a"], {("a", "a"): -1})).verdict == "negative-definite"
    d = definiteness(Lattice.from_pairs(["a"], {}))
    assert d.verdict == "negative-semidefinite" and d.kernel == (DivisorVec.of("a"),)
    d = definiteness(fibre_lattice("I0*"))
    assert d.verdict == "negative-semidefinite"
    assert d.kernel == (DivisorVec({"e1": 2, "e2": 1, "e3": 1, "e4": 1, "e5": 1}),)
    assert definiteness(Lattice.from_pairs(["a"], {("a", "a"): 1})).verdict == "indefinite"
    hyperbolic = Lattice.from_pairs(["a", "b"], {("a", "b"): 1})
    assert definiteness(hyperbolic).verdict == "indefinite"
    with pytest.raises(ValueError):
        definiteness(Lattice((), ()))


def test_kernel_basis_is_primitive():
    assert kernel_basis([[Q(2), Q(-4)], [Q(-1), Q(2)]]) == [(2, 1)]


def test_solve_linear():
    ident = Lattice.from_pairs(["a", "b"], {("a", "a"): 1, ("b", "b"): 1})
    v = DivisorVec({"a": Q(2, 3), "b": -1})
    assert solve_linear(ident, v) == v
    tail = fibre_lattice("I0*").restrict(["e2"])
    assert solve_linear(tail, {"e2": 3}) == DivisorVec({"e2": Q(-3, 2)})
    zero = Lattice.from_pairs(["a"], {})
    assert solve_linear(zero, {"a": 1}) is NO_SOLUTION
    # singular but consistent: free variable set to zero
    assert solve_linear(zero, {"a": 0}) == DivisorVec()
