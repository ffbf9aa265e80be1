"""Vertical divisors on a fibred surface: pseudo-effectivity and Zariski decomposition.

A configuration is a finite set of fibres, each with its components,
multiplicities and Gram matrix, plus the class ``F`` of a general fibre.
Numerically ``F`` equals the multiplicity-weighted sum of the components of
any fibre, so a vertical class is pseudo-effective exactly when it can be
written as ``t F`` plus a non-negative combination of components, ``t >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import cone
from .kodaira import FibreModel
from .lattice import (
    CurveClass,
    DivisorVec,
    Lattice,
    NO_SOLUTION,
    definiteness,
    format_rational,
    intersect,
    rational,
    solve_linear,
)

GENERAL_FIBRE = "F"


class NotPseudoEffective(ValueError):
    def __init__(self, message: str, oracle: "OracleResult"):
        super().__init__(message)
        self.oracle = oracle


class SignSplitError(ValueError):
    pass


@dataclass(frozen=True)
class Fibre:
    id: str
    label: str
    lattice: Lattice
    multiplicities: tuple[Fraction, ...]

    @classmethod
    def from_model(cls, fid: str, model: FibreModel) -> "Fibre":
        return cls(fid, model.type.name, model.lattice(),
                   tuple(Fraction(c.multiplicity) for c in model.components))

    @property
    def components(self) -> tuple[str, ...]:
        return self.lattice.ids

    def multiplicity_vector(self) -> DivisorVec:
        return DivisorVec(zip(self.components, self.multiplicities))


def qualify(fid: str, cid: str) -> str:
    return f"{fid}.{cid}"


@dataclass(frozen=True)
class Configuration:
    fibres: tuple[Fibre, ...]

    def __post_init__(self):
        ids = [f.id for f in self.fibres]
        if len(set(ids)) != len(ids):
            raise ValueError("fibre ids must be unique")
        if any("." in i or i == GENERAL_FIBRE for i in ids):
            raise ValueError("fibre ids may not contain '.' or be 'F'")

    def fibre(self, fid: str) -> Fibre:
        for f in self.fibres:
            if f.id == fid:
                return f
        raise KeyError(f"unknown fibre {fid!r}")

    def component_ids(self) -> list[str]:
        return [qualify(f.id, c) for f in self.fibres for c in f.components]

    def lattice(self) -> Lattice:
        classes = [CurveClass(GENERAL_FIBRE, "general-fibre")]
        pairs: dict = {}
        for f in self.fibres:
            for c in f.lattice.classes:
                classes.append(CurveClass(qualify(f.id, c.id), c.kind))
            for i, a in enumerate(f.components):
                for j, b in enumerate(f.components):
                    if f.lattice.gram[i][j]:
                        pairs[(qualify(f.id, a), qualify(f.id, b))] = f.lattice.gram[i][j]
        return Lattice.from_pairs(classes, pairs)


@dataclass(frozen=True)
class VerticalDivisor:
    parts: tuple[tuple[str, DivisorVec], ...]
    fibre_class_coefficient: Fraction = Fraction(0)

    def __init__(self, parts: Mapping[str, DivisorVec] | None = None, fibre_class_coefficient=0):
        clean = tuple(sorted((k, v) for k, v in (parts or {}).items() if v))
        object.__setattr__(self, "parts", clean)
        object.__setattr__(self, "fibre_class_coefficient", rational(fibre_class_coefficient))

    def part(self, fid: str) -> DivisorVec:
        for k, v in self.parts:
            if k == fid:
                return v
        return DivisorVec()

    def to_global(self) -> DivisorVec:
        pairs = [(qualify(fid, c), q) for fid, d in self.parts for c, q in d.items]
        pairs.append((GENERAL_FIBRE, self.fibre_class_coefficient))
        return DivisorVec(pairs)

    @classmethod
    def from_global(cls, d: DivisorVec) -> "VerticalDivisor":
        parts: dict[str, dict] = {}
        phi = Fraction(0)
        for k, q in d.items:
            if k == GENERAL_FIBRE:
                phi = q
                continue
            fid, cid = k.split(".", 1)
            parts.setdefault(fid, {})[cid] = q
        return cls({f: DivisorVec(v) for f, v in parts.items()}, phi)

    def __add__(self, other: "VerticalDivisor") -> "VerticalDivisor":
        return VerticalDivisor.from_global(self.to_global() + other.to_global())

    def __sub__(self, other: "VerticalDivisor") -> "VerticalDivisor":
        return VerticalDivisor.from_global(self.to_global() - other.to_global())

    def __mul__(self, s) -> "VerticalDivisor":
        return VerticalDivisor.from_global(self.to_global() * s)

    __rmul__ = __mul__

    def check(self, config: Configuration) -> None:
        for fid, d in self.parts:
            f = config.fibre(fid)
            for c in d:
                if c not in f.components:
                    raise KeyError(f"component {c!r} is not in fibre {fid!r}")

    def __str__(self) -> str:
        return str(self.to_global())

    def to_json(self) -> dict:
        return {
            "fibres": {fid: {c: format_rational(q) for c, q in d.items} for fid, d in self.parts},
            "F": format_rational(self.fibre_class_coefficient),
        }


def numerically_equal(a: VerticalDivisor, b: VerticalDivisor, config: Configuration) -> bool:
    """Equality of numerical classes, using F = sum nu_i C_i on every fibre."""
    diff = a - b
    t = diff.fibre_class_coefficient
    for f in config.fibres:
        part = diff.part(f.id)
        nu = dict(zip(f.components, f.multiplicities))
        lams = {part[c] / nu[c] for c in f.components}
        if len(lams) != 1:
            return False
        t += lams.pop()
    return t == 0


# ---------------------------------------------------------------------------
# pseudo-effectivity oracle


@dataclass(frozen=True)
class OracleResult:
    psef: bool
    witness: VerticalDivisor | None = None
    fibre_shifts: dict = field(default_factory=dict)
    certificate: dict = field(default_factory=dict)
    method: str = "fourier-motzkin"

    def to_json(self) -> dict:
        out = {"psef": self.psef, "method": self.method}
        if self.psef:
            out["witness"] = self.witness.to_json()
            out["fibre_shifts"] = {k: format_rational(v) for k, v in self.fibre_shifts.items()}
        else:
            out["certificate"] = {k: format_rational(v) for k, v in self.certificate.items()}
        return out


def psef_system(d: VerticalDivisor, config: Configuration) -> list[cone.Inequality]:
    """Inequalities in one shift variable per fibre (in configuration order).

    Shift ``s_c`` rewrites fibre ``c``'s part as ``part - s_c * (sum nu_i C_i)``
    and moves ``s_c F`` onto the general fibre coefficient.
    """
    d.check(config)
    n = len(config.fibres)
    rows = []
    for k, f in enumerate(config.fibres):
        part = d.part(f.id)
        for c, nu in zip(f.components, f.multiplicities):
            coeffs = [Fraction(0)] * n
            coeffs[k] = -nu
            rows.append(cone.Inequality(tuple(coeffs), part[c], qualify(f.id, c)))
    rows.append(cone.Inequality(tuple([Fraction(1)] * n), d.fibre_class_coefficient, GENERAL_FIBRE))
    return rows


def vertical_psef_oracle(d: VerticalDivisor, config: Configuration, method: str = "fm") -> OracleResult:
    system = psef_system(d, config)
    n = len(config.fibres)
    if method == "fm":
        res = cone.fourier_motzkin(system, n)
        name = "fourier-motzkin"
    elif method == "simplex":
        res = cone.simplex(system, n)
        name = "simplex"
    else:
        raise ValueError(f"unknown method {method!r}")
    if not res.feasible:
        return OracleResult(False, certificate=res.certificate, method=name)
    shifts = dict(zip((f.id for f in config.fibres), res.point))
    parts = {}
    for f in config.fibres:
        s = shifts[f.id]
        parts[f.id] = d.part(f.id) - f.multiplicity_vector() * s
    witness = VerticalDivisor(parts, d.fibre_class_coefficient + sum(res.point, Fraction(0)))
    return OracleResult(True, witness, {k: v for k, v in shifts.items() if v}, method=name)


# ---------------------------------------------------------------------------
# Zariski decomposition


@dataclass(frozen=True)
class ZariskiDecomposition:
    positive: VerticalDivisor
    negative: VerticalDivisor
    certificates: dict

    @property
    def valid(self) -> bool:
        return all(self.certificates[k] for k in
                   ("sum_exact", "nef_on_components", "orthogonal", "negative_definite", "negative_effective"))

    def to_json(self) -> dict:
        return {
            "positive": self.positive.to_json(),
            "negative": self.negative.to_json(),
            "certificates": self.certificates,
        }


def _certify(d: VerticalDivisor, P: DivisorVec, N: DivisorVec, lat: Lattice, config: Configuration) -> dict:
    comps = config.component_ids()
    Pv = VerticalDivisor.from_global(P)
    nef = all(intersect(P, DivisorVec.of(c), lat) >= 0 for c in comps)
    orth = all(intersect(P, DivisorVec.of(c), lat) == 0 for c in N.support())
    if N:
        negdef = definiteness(lat.restrict(N.support())).negative_definite
    else:
        negdef = True
    # P meets every component trivially on its own fibres, so it is t F numerically
    t = Pv.fibre_class_coefficient
    proportional = True
    for f in config.fibres:
        part = Pv.part(f.id)
        ratios = {part[c] / nu for c, nu in zip(f.components, f.multiplicities)}
        if len(ratios) != 1:
            proportional = False
            break
        t += ratios.pop()
    return {
        "sum_exact": (P + N) == d.to_global(),
        "nef_on_components": nef,
        "orthogonal": orth,
        "negative_definite": negdef,
        "negative_effective": all(q > 0 for _, q in N.items),
        "positive_fibre_multiple": format_rational(t) if proportional else None,
    }


def zariski_decompose(d: VerticalDivisor, config: Configuration) -> ZariskiDecomposition:
    """Fujita-style iteration: grow the negative support, then solve orthogonality."""
    oracle = vertical_psef_oracle(d, config)
    if not oracle.psef:
        raise NotPseudoEffective(f"{d} is not pseudo-effective", oracle)
    lat = config.lattice()
    D = d.to_global()
    comps = sorted(config.component_ids())
    support: list[str] = []
    N = DivisorVec()
    while True:
        P = D - N
        grow = [c for c in comps if c not in support and intersect(P, DivisorVec.of(c), lat) < 0]
        if not grow:
            break
        support = sorted(support + grow)
        sub = lat.restrict(support)
        rhs = {c: intersect(D, DivisorVec.of(c), lat) for c in support}
        sol = solve_linear(sub, rhs)
        if sol is NO_SOLUTION:  # pragma: no cover - negative definite support
            raise ArithmeticError("orthogonality system inconsistent")
        N = sol
    P = D - N
    certs = _certify(d, P, N, lat, config)
    return ZariskiDecomposition(VerticalDivisor.from_global(P), VerticalDivisor.from_global(N), certs)


# ---------------------------------------------------------------------------
# the partial-fibre criterion


@dataclass(frozen=True)
class SplitDivisor:
    """``sum_c (sum a_i E_i - sum b_j F_j)`` with ``a >= 0`` and ``b > 0``.

    ``positive`` holds the ``a`` parts and ``negative`` the ``b`` parts (as
    positive numbers), both keyed by fibre id. Fibres named in either mapping
    make up the set of fibres the criterion looks at.
    """

    positive: Mapping[str, DivisorVec]
    negative: Mapping[str, DivisorVec]

    @property
    def fibres(self) -> list[str]:
        return sorted(set(self.positive) | set(self.negative))

    @classmethod
    def from_vertical(cls, d: VerticalDivisor) -> "SplitDivisor":
        pos, neg = {}, {}
        for fid, part in d.parts:
            pos[fid] = DivisorVec((c, q) for c, q in part.items if q > 0)
            neg[fid] = DivisorVec((c, -q) for c, q in part.items if q < 0)
        return cls(pos, neg)

    def validate(self, config: Configuration) -> None:
        for fid in self.fibres:
            try:
                f = config.fibre(fid)
            except KeyError as exc:
                raise SignSplitError(str(exc)) from None
            a = self.positive.get(fid, DivisorVec())
            b = self.negative.get(fid, DivisorVec())
            for c, q in a.items:
                if c not in f.components:
                    raise SignSplitError(f"{c!r} is not a component of fibre {fid!r}")
                if q < 0:
                    raise SignSplitError(f"positive part has negative coefficient on {fid}.{c}")
            for c, q in b.items:
                if c not in f.components:
                    raise SignSplitError(f"{c!r} is not a component of fibre {fid!r}")
                if q <= 0:
                    raise SignSplitError(f"negative part needs b > 0 on {fid}.{c}")
            both = set(a.support()) & set(b.support())
            if both:
                raise SignSplitError(f"components {sorted(both)} appear with both signs in fibre {fid!r}")

    def to_vertical(self, delta=0) -> VerticalDivisor:
        parts = {}
        for fid in self.fibres:
            parts[fid] = self.positive.get(fid, DivisorVec()) - self.negative.get(fid, DivisorVec())
        return VerticalDivisor(parts, -rational(delta))


@dataclass(frozen=True)
class Lemma48Result:
    fires: bool
    reason: str
    condition1: bool
    condition2: bool
    delta: Fraction

    @property
    def verdict(self) -> str:
        return "fires: not-psef" if self.fires else "not-applicable"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "condition1": self.condition1,
            "condition2": self.condition2,
            "delta": format_rational(self.delta),
        }


def lemma48_criterion(m: SplitDivisor | VerticalDivisor, config: Configuration, delta=0) -> Lemma48Result:
    """One-directional non-pseudo-effectivity test for ``M - delta F``.

    Condition (1): some fibre has a component with negative coefficient.
    Condition (2): every fibre without negative coefficients has a component
    with coefficient zero. With ``delta = 0`` both are needed; with
    ``delta > 0`` condition (2) suffices. Never answers "psef".
    """
    delta = rational(delta)
    if isinstance(m, VerticalDivisor):
        delta = delta - m.fibre_class_coefficient
        m.check(config)
        m = SplitDivisor.from_vertical(m)
        if delta < 0:
            return Lemma48Result(False, "positive multiple of F present", False, False, delta)
    elif delta < 0:
        raise SignSplitError("delta must be non-negative")
    m.validate(config)
    fibres = m.fibres
    if not fibres:
        return Lemma48Result(False, "no fibres in the presentation", False, False, delta)
    cond1 = any(m.negative.get(fid) for fid in fibres)
    cond2 = True
    for fid in fibres:
        if m.negative.get(fid):
            continue
        comps = config.fibre(fid).components
        pos = m.positive.get(fid, DivisorVec())
        if all(pos[c] > 0 for c in comps):
            cond2 = False
            break
    if delta == 0:
        fires = cond1 and cond2
        reason = "conditions (1) and (2) hold" if fires else (
            "condition (2) fails" if not cond2 else "condition (1) fails and delta = 0")
    else:
        fires = cond2
        reason = "condition (2) holds with delta > 0" if fires else "condition (2) fails"
    return Lemma48Result(fires, reason, cond1, cond2, delta)


def configuration_from_models(models: Sequence[tuple[str, FibreModel]]) -> Configuration:
    return Configuration(tuple(Fibre.from_model(fid, m) for fid, m in models))
