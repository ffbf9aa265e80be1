"""Blowing up the singular points of reduced singular fibres.

Each singular point of a reduced fibre carries an ideal (the ``Gamma``
ideal); blowing it up adds one exceptional curve ``Y``. This module builds
the intersection data of the blown-up fibre from the local algebra in
:mod:`kodaira_psef.local`, pulls the normalised fibre back, and assembles
the restriction verdict for ``Y`` on surfaces of Kodaira dimension one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import polys
from .invariants import (
    FibrationSpec,
    chern2,
    delta_invariant,
    kodaira_dimension,
    validate_isotrivial_consistency,
)
from .kodaira import (
    DEFAULT_DB,
    FibreModel,
    KodairaDatabase,
    KodairaType,
    NODE_IDEAL,
    SingularPoint,
    fibre_model,
    normalized_fibre,
)
from .lattice import CurveClass, DivisorVec, Lattice, format_rational
from .local import CurveGerm, LocalIdeal, pullback_coefficient, samuel_multiplicity
from .zariski import (
    Configuration,
    Fibre,
    Lemma48Result,
    OracleResult,
    VerticalDivisor,
    lemma48_criterion,
    vertical_psef_oracle,
)


class EmptyGammaError(ValueError):
    """The fibre type has no singular point to blow up."""


class NotIsotrivialType(ValueError):
    pass


# Factorisation over Q of the local equation at each non-node point, with the
# components carried by each factor. A factor carrying several components
# splits into branches that are Galois conjugate over Q; conjugation fixes the
# (rational) ideal, so those branches share the factor's coefficient equally.
BRANCH_FACTORS: dict[str, tuple[tuple[str, tuple[str, ...]], ...]] = {
    "II": (("x^3 - y^2", ("e1",)),),
    "III": (("x^2 - y", ("e1",)), ("x^2 + y", ("e2",))),
    "IV": (("x - y", ("e1",)), ("x^2 + x*y + y^2", ("e2", "e3"))),
}


def exceptional_name(incident: tuple[str, ...], taken: set[str]) -> str:
    name = "Y_" + ",".join(c[1:] if c.startswith("e") else c for c in incident)
    while name in taken:
        name += "'"
    return name


def _node_factors(p: SingularPoint) -> tuple[tuple[str, tuple[str, ...]], ...]:
    # local equation x^a * y^b: the branch x = 0 lies on the first component
    return (("x", (p.branches[0],)), ("y", (p.branches[1],)))


def branch_factors(model: FibreModel, index: int) -> tuple[tuple[str, tuple[str, ...]], ...]:
    p = model.points[index]
    if p.ideal == NODE_IDEAL and len(p.branches) == 2:
        return _node_factors(p)
    try:
        return BRANCH_FACTORS[model.type.base_name]
    except KeyError:
        raise NotIsotrivialType(f"no branch data for the singular point of {model.type.name}") from None


def factors_reproduce_equation(model: FibreModel, index: int) -> bool:
    """Product of the factors equals the reduced local equation up to a unit."""
    p = model.points[index]
    facs = branch_factors(model, index)
    prod = {(0, 0): Fraction(1)}
    for eq, _ in facs:
        prod = polys.mul(prod, polys.parse_poly(eq, ("x", "y")))
    red = polys.parse_poly(p.equation, ("x", "y"))
    if p.ideal == NODE_IDEAL:
        # the fibre equation x^a y^b reduces to x*y
        red = polys.parse_poly("x*y", ("x", "y"))
    c = red[polys.lead(red)] / prod[polys.lead(prod)] if prod else None
    return c is not None and polys.scale(prod, c) == red


@dataclass(frozen=True)
class PointData:
    """Local data at one blown-up point."""

    name: str
    incident: tuple[str, ...]
    ideal: LocalIdeal
    samuel: int
    # component id -> total pullback coefficient of its branches at this point
    t: tuple[tuple[str, Fraction], ...]

    def t_of(self, cid: str) -> Fraction:
        return dict(self.t).get(cid, Fraction(0))


def point_data(model: FibreModel) -> list[PointData]:
    out = []
    taken: set[str] = set()
    for k, p in enumerate(model.points):
        name = exceptional_name(p.incident, taken)
        taken.add(name)
        t: dict[str, Fraction] = {}
        for eq, comps in branch_factors(model, k):
            share = pullback_coefficient(CurveGerm(eq), p.ideal) / len(comps)
            for c in comps:
                t[c] = t.get(c, Fraction(0)) + share
        out.append(PointData(name, p.incident, p.ideal, samuel_multiplicity(p.ideal),
                             tuple((c, t[c]) for c in model.ids if c in t)))
    return out


@dataclass(frozen=True)
class BlownUpFibre:
    type: KodairaType
    strict: tuple[str, ...]
    exceptional: tuple[str, ...]
    points: tuple[PointData, ...]
    lattice: Lattice
    multiplicities: tuple[Fraction, ...]

    def fibre(self, fid: str) -> Fibre:
        return Fibre(fid, self.type.name + "~", self.lattice, self.multiplicities)

    def multiplicity_vector(self) -> DivisorVec:
        return DivisorVec(zip(self.lattice.ids, self.multiplicities))


def blown_up_fibre(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> BlownUpFibre:
    """Strict transforms and exceptional curves with their Gram matrix.

    C~a.C~b = Ca.Cb - sum_p ta(p) tb(p) e(p), C~a.Ep = ta(p) e(p), Ep^2 = -e(p),
    where e(p) is the Samuel multiplicity and t the pullback coefficient.
    """
    model = fibre_model(t, db)
    if not model.points:
        raise EmptyGammaError(f"type {t.name} has no singular point on its reduced fibre")
    pts = point_data(model)
    base = model.lattice()
    strict = model.ids
    exc = tuple(p.name for p in pts)
    pairs: dict = {}
    for a in strict:
        for b in strict:
            v = base.pair(a, b) - sum((p.t_of(a) * p.t_of(b) * p.samuel for p in pts), Fraction(0))
            if v:
                pairs[(a, b)] = v
        for p in pts:
            if p.t_of(a):
                pairs[(a, p.name)] = p.t_of(a) * p.samuel
    for p in pts:
        pairs[(p.name, p.name)] = Fraction(-p.samuel)
    classes = [CurveClass(c, "strict-transform") for c in strict] + [CurveClass(y, "exceptional") for y in exc]
    lat = Lattice.from_pairs(classes, pairs)
    mult = [Fraction(c.multiplicity) for c in model.components]
    mult += [sum((p.t_of(c.id) * c.multiplicity for c in model.components), Fraction(0)) for p in pts]
    return BlownUpFibre(t, strict, exc, tuple(pts), lat, tuple(mult))


def projection_formula_holds(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> bool:
    """(pi^* C).E = 0 for every component C and exceptional E."""
    bf = blown_up_fibre(t, db)
    lat = bf.lattice
    for p in bf.points:
        for c in bf.strict:
            if lat.pair(c, p.name) + p.t_of(c) * lat.pair(p.name, p.name) != 0:
                return False
    return True


# ---------------------------------------------------------------------------
# pulled-back normalised fibre


@dataclass(frozen=True)
class PulledBackFibre:
    type: KodairaType
    strict: DivisorVec
    exceptional: tuple[tuple[str, Fraction], ...]

    def exceptional_vec(self) -> DivisorVec:
        return DivisorVec(self.exceptional)

    def divisor(self) -> DivisorVec:
        return self.strict + self.exceptional_vec()

    def to_json(self, with_zeros: bool = True) -> dict:
        return {
            "strict": {c: format_rational(q) for c, q in self.strict.items},
            "exceptional": {y: format_rational(q) for y, q in self.exceptional},
        }


def _require_gamma(t: KodairaType, db: KodairaDatabase) -> FibreModel:
    model = fibre_model(t, db)
    if not model.points:
        raise EmptyGammaError(f"type {t.name} has empty Gamma (no singular point on the reduced fibre)")
    if t.base_name not in db.blowup or t.is_multiple:
        raise NotIsotrivialType(f"type {t.name} is not one of the isotrivial singular types")
    return model


def pullback_normalized_fibre(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> PulledBackFibre:
    """Stored pullback of the normalised fibre, listed in singular-point order."""
    model = _require_gamma(t, db)
    table = db.blowup[t.base_name]
    taken: set[str] = set()
    order = []
    for p in model.points:
        name = exceptional_name(p.incident, taken)
        taken.add(name)
        order.append(name)
    extra = [y for y in table if y not in taken]
    exc = tuple((y, table[y]) for y in order + extra if y in table)
    return PulledBackFibre(t, normalized_fibre(t, db), exc)


def computed_pullback(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> PulledBackFibre:
    """Exceptional coefficients recomputed as sum_i s_i t_i(p) from the colength oracle."""
    model = _require_gamma(t, db)
    s = normalized_fibre(t, db)
    exc = tuple((p.name, sum((s[c] * tc for c, tc in p.t), Fraction(0))) for p in point_data(model))
    return PulledBackFibre(t, s, exc)


def oracle_exceptional_coefficients(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> dict[str, Fraction]:
    return dict(computed_pullback(t, db).exceptional)


def small_coefficient_witness(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> tuple[str, Fraction]:
    """An exceptional curve of smallest coefficient (first in point order on ties).

    Raises ArithmeticError if that coefficient exceeds 1/2.
    """
    pb = pullback_normalized_fibre(t, db)
    if not pb.exceptional:
        raise EmptyGammaError(f"no exceptional curve for {t.name}")
    best = min(pb.exceptional, key=lambda kv: kv[1])
    if best[1] > Fraction(1, 2):
        raise ArithmeticError(f"no exceptional coefficient <= 1/2 for {t.name}")
    return best


# ---------------------------------------------------------------------------
# the restriction verdict

NOT_APPLICABLE = "not-applicable"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class YRestrictionVerdict:
    verdict: str
    reason: str
    delta: Fraction | None = None
    divisor: VerticalDivisor | None = None
    witnesses: tuple[tuple[str, str, str, Fraction], ...] = ()
    lemma: Lemma48Result | None = None
    oracle: OracleResult | None = None
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict, "reason": self.reason}
        if self.delta is not None:
            out["delta"] = format_rational(self.delta)
        if self.divisor is not None:
            out["M"] = self.divisor.to_json()
            out["witnesses"] = [
                {"fibre": fid, "type": name, "component": y, "coefficient": format_rational(q)}
                for fid, name, y, q in self.witnesses
            ]
            out["lemma48"] = self.lemma.to_json()
            out["oracle"] = self.oracle.to_json()
        return out


def y_restriction_verdict(s: FibrationSpec, db: KodairaDatabase = DEFAULT_DB) -> YRestrictionVerdict:
    """Assemble M - delta F with M = sum_c (2 pi^* S~_c - sum_s Y_s) and test it.

    The partial-fibre criterion gives the verdict; the exact cone oracle on
    the blown-up configuration is run alongside as a cross-check.
    """
    if not validate_isotrivial_consistency(s):
        return YRestrictionVerdict(NOT_APPLICABLE, "spec has an I_b or I_b* fibre with b >= 1")
    c2 = chern2(s, db)
    if c2 == 0:
        return YRestrictionVerdict(NOT_APPLICABLE, "c2 = 0")
    kappa = kodaira_dimension(s, db)
    if kappa != 1:
        return YRestrictionVerdict(NOT_APPLICABLE, f"kappa = {kappa}, need 1")
    delta = delta_invariant(s, db)
    fibres = []
    parts = {}
    witnesses = []
    for k, t in enumerate(s.fibres, 1):
        if t.is_smooth or t.is_multiple:
            continue  # no singular point, normalised fibre pulls back to a multiple of F
        fid = f"S{k}"
        bf = blown_up_fibre(t, db)
        fibres.append(bf.fibre(fid))
        pb = pullback_normalized_fibre(t, db)
        ys = DivisorVec({y: 1 for y in bf.exceptional})
        parts[fid] = pb.divisor() * 2 - ys
        y, q = small_coefficient_witness(t, db)
        witnesses.append((fid, t.name, y, q))
    config = Configuration(tuple(fibres))
    m = VerticalDivisor(parts, -delta)
    lemma = lemma48_criterion(m, config)
    oracle = vertical_psef_oracle(m, config)
    if lemma.fires and oracle.psef:  # pragma: no cover - would contradict soundness
        raise ArithmeticError("criterion fired on a pseudo-effective class")
    verdict = "not-psef" if lemma.fires else INCONCLUSIVE
    return YRestrictionVerdict(verdict, lemma.reason, delta, m, tuple(witnesses), lemma, oracle)
