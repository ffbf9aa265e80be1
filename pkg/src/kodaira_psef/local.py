"""Local algebra at a point of a smooth surface.

Colengths, ideal membership in the local ring, Samuel multiplicities of
parameter ideals, and the coefficient of the exceptional divisor in the
pullback of a curve germ under the blow-up of an ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import polys
from .polys import DegreeCapExceeded, Poly

XY = ("x", "y")


class UnsupportedIdeal(ValueError):
    pass


@dataclass(frozen=True)
class LocalIdeal:
    generators: tuple[str, ...]
    variables: tuple[str, ...] = XY

    def __init__(self, generators: Sequence[str], variables: Sequence[str] = XY):
        object.__setattr__(self, "generators", tuple(generators))
        object.__setattr__(self, "variables", tuple(variables))

    def polys(self) -> list[Poly]:
        return [polys.parse_poly(g, self.variables) for g in self.generators]

    def __str__(self) -> str:
        return "(" + ", ".join(self.generators) + ")"


@dataclass(frozen=True)
class CurveGerm:
    equation: str
    variables: tuple[str, ...] = XY

    def __init__(self, equation: str, variables: Sequence[str] = XY):
        object.__setattr__(self, "equation", equation)
        object.__setattr__(self, "variables", tuple(variables))

    def poly(self) -> Poly:
        return polys.parse_poly(self.equation, self.variables)


def _as_polys(gens, variables) -> list[Poly]:
    out = []
    for g in gens:
        out.append(polys.parse_poly(g, variables) if isinstance(g, str) else dict(g))
    return out


def _max_ideal_power(n: int, nvars: int) -> list[Poly]:
    out = []

    def rec(prefix, left):
        if len(prefix) == nvars - 1:
            out.append(polys.monomial(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e)

    rec([], n)
    return out


def _is_origin_primary(basis: list[Poly], nvars: int, dim: int) -> bool:
    # every coordinate must be nilpotent in the finite quotient
    for v in range(nvars):
        x = polys.monomial([1 if k == v else 0 for k in range(nvars)])
        p: Poly = {(0,) * nvars: Fraction(1)}
        for _ in range(dim):
            p = polys.normal_form(polys.mul(p, x), basis)
            if not p:
                break
        if p:
            return False
    return True


@dataclass(frozen=True)
class _LocalQuotient:
    basis: list
    dim: int


def _localize(gens: list[Poly], nvars: int, cap: int) -> _LocalQuotient:
    """Groebner data for J*O_0 as an origin-primary polynomial ideal."""
    basis = polys.groebner(gens, cap)
    std = polys.standard_monomials(basis, nvars)
    if std is not None and _is_origin_primary(basis, nvars, len(std)):
        return _LocalQuotient(basis, len(std))
    # J + m^N stabilises exactly when m^N lies in J*O_0 (Nakayama)
    prev = None
    for n in range(1, cap + 1):
        b = polys.groebner(gens + _max_ideal_power(n, nvars), cap)
        d = len(polys.standard_monomials(b, nvars))
        if prev is not None and d == prev[1]:
            return _LocalQuotient(prev[0], d)
        prev = (b, d)
    raise DegreeCapExceeded(f"local quotient did not stabilise below degree cap {cap}")


def colength(ideal, variables: Sequence[str] = XY, point: Sequence | None = None,
             cap: int | None = None) -> int:
    """Length of O_p / I for the local ring at ``point`` (default: origin).

    ``ideal`` is a :class:`LocalIdeal` or a sequence of generator strings.
    """
    if isinstance(ideal, LocalIdeal):
        variables = ideal.variables
        gens = ideal.polys()
    else:
        gens = _as_polys(ideal, variables)
    cap = polys.degree_cap() if cap is None else cap
    if point is not None:
        pt = [Fraction(p) for p in point]
        gens = [polys.substitute_shift(g, pt) for g in gens]
    return _localize(gens, len(variables), cap).dim


def ideal_power(ideal: LocalIdeal, k: int) -> list[Poly]:
    n = len(ideal.variables)
    gens = ideal.polys()
    acc: list[Poly] = [{(0,) * n: Fraction(1)}]
    for _ in range(k):
        nxt = {}
        for a in acc:
            for g in gens:
                p = polys.mul(a, g)
                nxt[tuple(sorted(p.items()))] = p
        acc = list(nxt.values())
    return acc


def ideal_power_membership(f, ideal: LocalIdeal, k: int, cap: int | None = None) -> bool:
    """Whether ``f`` lies in ``ideal**k`` in the local ring at the origin."""
    if k < 1:
        raise ValueError("power must be at least 1")
    cap = polys.degree_cap() if cap is None else cap
    fp = polys.parse_poly(f, ideal.variables) if isinstance(f, str) else dict(f)
    q = _localize(ideal_power(ideal, k), len(ideal.variables), cap)
    return not polys.normal_form(fp, q.basis)


def samuel_multiplicity(ideal: LocalIdeal, cap: int | None = None) -> int:
    """Multiplicity e(I), i.e. -E^2 on the blow-up of I.

    Only parameter ideals are supported: two generators in two variables with
    finite colength, where e(I) equals the colength.
    """
    if len(ideal.variables) != 2 or len(ideal.generators) != 2:
        raise UnsupportedIdeal(f"{ideal} is not a two-generator ideal in two variables")
    for g in ideal.polys():
        if not g or (0, 0) in g:
            raise UnsupportedIdeal(f"generator of {ideal} does not vanish at the origin")
    try:
        return colength(ideal, cap=cap)
    except DegreeCapExceeded:
        raise
    except Exception as exc:  # pragma: no cover - defensive
        raise UnsupportedIdeal(str(exc)) from exc


def hilbert_samuel(ideal: LocalIdeal, n: int, cap: int | None = None) -> int:
    """Length of O / I^n."""
    cap = polys.degree_cap() if cap is None else cap
    return _localize(ideal_power(ideal, n), len(ideal.variables), cap).dim


# general members of an ideal are taken from this pencil of rational weights
GENERIC_WEIGHTS = (1, 2, 3, 5, 7, 11)


def exceptional_degree(curve: CurveGerm, ideal: LocalIdeal, cap: int | None = None) -> int:
    """Degree of the exceptional divisor on the strict transform, C~ . E.

    Equals the multiplicity of I on the curve, computed as the intersection
    number of C with a general member of I.
    """
    f = curve.poly()
    n = len(curve.variables)
    if f.get((0,) * n, 0) != 0:
        raise ValueError(f"curve {curve.equation} does not pass through the origin")
    gens = ideal.polys()
    values = []
    for lam in GENERIC_WEIGHTS:
        member: Poly = {}
        for i, g in enumerate(gens):
            member = polys.add(member, polys.scale(g, Fraction(lam) ** i))
        values.append(colength([f, member], curve.variables, cap=cap))
    best = min(values)
    if values.count(best) < 3:
        raise ArithmeticError(f"no stable general member of {ideal} against {curve.equation}")
    return best


def pullback_coefficient(curve: CurveGerm, ideal: LocalIdeal, cap: int | None = None) -> Fraction:
    """Coefficient t in pi^*C = C~ + t E for the blow-up of ``ideal``.

    From the projection formula (C~ + tE).E = 0 with -E^2 = e(I).
    """
    return Fraction(exceptional_degree(curve, ideal, cap), samuel_multiplicity(ideal, cap))
