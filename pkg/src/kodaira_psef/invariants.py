"""Numerical invariants of a relatively minimal elliptic fibration and the
pseudo-effectivity verdict for its tangent bundle."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .kodaira import (
    DEFAULT_DB,
    FibreTypeError,
    KodairaDatabase,
    KodairaType,
    MultiplicityError,
    euler_number,
    kodaira_type_from_json,
)
from .lattice import format_rational, parse_rational

NEG_INF = "-inf"

PSEF = "psef"
NOT_PSEF = "not-psef"
OUT_OF_SCOPE = "out-of-scope"

VERDICT_RULE = "T_S pseudo-effective iff S is minimal and c2(S) = 0 (non-uniruled S)"
KAPPA_RULE = "kappa(S) from sign(delta): delta<0 -> -inf, delta=0 -> 0, delta>0 -> 1 (derived rule)"


class SpecError(ValueError):
    """Invalid fibration spec; ``code`` is one of the E_* diagnostics."""

    def __init__(self, code: str, message: str, where: str = ""):
        super().__init__(f"{code}: {message}" + (f" [{where}]" if where else ""))
        self.code = code
        self.where = where


class InconsistentConfiguration(SpecError):
    def __init__(self, message: str, where: str = "fibres"):
        super().__init__("E_EULER", message, where)


@dataclass(frozen=True)
class FibrationSpec:
    base_genus: int
    fibres: tuple[KodairaType, ...] = ()

    def __init__(self, base_genus: int, fibres: Sequence[KodairaType | str] = (), validate: bool = True):
        object.__setattr__(self, "base_genus", base_genus)
        object.__setattr__(self, "fibres", tuple(
            KodairaType.parse(f) if isinstance(f, str) else f for f in fibres))
        if validate:
            self.validate()

    def validate(self, db: KodairaDatabase = DEFAULT_DB) -> None:
        if isinstance(self.base_genus, bool) or not isinstance(self.base_genus, int) or self.base_genus < 0:
            raise SpecError("E_GENUS", f"base genus must be a non-negative integer, got {self.base_genus!r}",
                            "base_genus")
        total = sum(euler_number(t, db) for t in self.fibres)
        if total % 12:
            raise InconsistentConfiguration(f"sum of fibre Euler numbers is {total}, not divisible by 12")

    @property
    def singular_fibres(self) -> tuple[KodairaType, ...]:
        return tuple(t for t in self.fibres if not t.is_smooth)

    def to_json(self) -> dict:
        out = []
        for t in self.fibres:
            entry: dict = {"type": t.tag}
            if t.tag in ("I", "I*"):
                entry["b"] = t.b
            if t.m > 1:
                entry["m"] = t.m
            out.append(entry)
        return {"base_genus": self.base_genus, "fibres": out}

    @classmethod
    def from_json(cls, obj) -> "FibrationSpec":
        if not isinstance(obj, Mapping):
            raise SpecError("E_SYNTAX", "top level must be a JSON object")
        if "base_genus" not in obj:
            raise SpecError("E_GENUS", "missing base_genus", "base_genus")
        g = obj["base_genus"]
        if isinstance(g, bool) or not isinstance(g, int) or g < 0:
            raise SpecError("E_GENUS", f"base genus must be a non-negative integer, got {g!r}", "base_genus")
        raw = obj.get("fibres", [])
        if not isinstance(raw, list):
            raise SpecError("E_SYNTAX", "fibres must be a list", "fibres")
        fibres = []
        for i, entry in enumerate(raw):
            where = f"fibres[{i}]"
            try:
                fibres.append(kodaira_type_from_json(entry))
            except MultiplicityError as exc:
                raise SpecError("E_MULT", str(exc), where + ".m") from None
            except FibreTypeError as exc:
                raise SpecError("E_TYPE", str(exc), where + ".type") from None
        return cls(g, fibres)


def chern2(s: FibrationSpec, db: KodairaDatabase = DEFAULT_DB) -> int:
    return sum(euler_number(t, db) for t in s.fibres)


def euler_chi(s: FibrationSpec, db: KodairaDatabase = DEFAULT_DB) -> int:
    c2 = chern2(s, db)
    if c2 % 12:
        raise InconsistentConfiguration(f"c2 = {c2} is not divisible by 12")
    chi = c2 // 12
    if chi < 0:  # pragma: no cover - Euler numbers are non-negative
        raise InconsistentConfiguration("negative holomorphic Euler characteristic")
    return chi


def multiple_fibre_term(s: FibrationSpec) -> Fraction:
    return sum((1 - Fraction(1, t.m) for t in s.fibres if t.m > 1), Fraction(0))


def delta_invariant(s: FibrationSpec, db: KodairaDatabase = DEFAULT_DB) -> Fraction:
    return euler_chi(s, db) + 2 * s.base_genus - 2 + multiple_fibre_term(s)


def kodaira_dimension(s: FibrationSpec, db: KodairaDatabase = DEFAULT_DB):
    """1, 0 or the string "-inf"."""
    d = delta_invariant(s, db)
    if d > 0:
        return 1
    if d == 0:
        return 0
    return NEG_INF


def is_minimal(s: FibrationSpec, db: KodairaDatabase = DEFAULT_DB) -> bool:
    # relatively minimal with kappa >= 0 forces K_S nef; kappa = -inf is outside the model
    return kodaira_dimension(s, db) != NEG_INF


def is_almost_smooth(s: FibrationSpec) -> bool:
    return all(t.tag == "I" and t.b == 0 for t in s.fibres)


def validate_isotrivial_consistency(s: FibrationSpec) -> bool:
    return not any(t.in_I_family for t in s.fibres)


def tangent_psef_verdict(s: FibrationSpec, db: KodairaDatabase = DEFAULT_DB) -> str:
    if kodaira_dimension(s, db) == NEG_INF:
        return OUT_OF_SCOPE
    return PSEF if chern2(s, db) == 0 else NOT_PSEF


@dataclass(frozen=True)
class KappaPT:
    value: int | None
    reason: str


def kappa_of_projectivized_tangent(s: FibrationSpec, db: KodairaDatabase = DEFAULT_DB) -> KappaPT:
    verdict = tangent_psef_verdict(s, db)
    if verdict == OUT_OF_SCOPE:
        return KappaPT(None, "uniruled (kappa = -inf): out of scope")
    if verdict == NOT_PSEF:
        return KappaPT(None, "tangent bundle not pseudo-effective")
    return KappaPT(1 - kodaira_dimension(s, db), "1 - kappa(S)")


@dataclass(frozen=True)
class CanonicalClass:
    """K_S numerically: pullback_degree * F + sum (m_j - 1) F_j with F_j = F / m_j."""

    pullback_degree: Fraction
    multiple_fibres: tuple[tuple[int, Fraction], ...]

    @property
    def total_degree(self) -> Fraction:
        return self.pullback_degree + sum((q for _, q in self.multiple_fibres), Fraction(0))


def canonical_class_data(s: FibrationSpec, db: KodairaDatabase = DEFAULT_DB) -> CanonicalClass:
    base = Fraction(2 * s.base_genus - 2 + euler_chi(s, db))
    parts = tuple((t.m, Fraction(t.m - 1, t.m)) for t in s.fibres if t.m > 1)
    return CanonicalClass(base, parts)


def sym_power_c1(i: int, j: int) -> Fraction:
    """Scalar (i+1)(i/2 - j) in c1(Sym^i T_S (x) O(jK_S)) = scalar * c1(S)."""
    if i < 1 or j < 0:
        raise ValueError("need i >= 1 and j >= 0")
    return (i + 1) * (Fraction(i, 2) - j)


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class InvariantsReport:
    base_genus: int
    fibres: tuple[str, ...]
    c2: int
    chi: int
    delta: Fraction
    kappa: object
    minimal: bool
    almost_smooth: bool
    isotrivial_consistent: bool
    tangent_psef: str
    kappa_PT: int | None
    kappa_PT_reason: str
    canonical_class: str
    notes: tuple[str, ...] = field(default=())
    # JSON form of the exceptional-curve restriction verdict, when computed
    y_restriction: dict | None = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["fibres"] = list(self.fibres)
        d["delta"] = format_rational(self.delta)
        d["notes"] = list(self.notes)
        if self.y_restriction is None:
            del d["y_restriction"]
        return d

    @classmethod
    def from_json(cls, obj: Mapping) -> "InvariantsReport":
        d = dict(obj)
        d["fibres"] = tuple(d["fibres"])
        d["delta"] = parse_rational(d["delta"])
        d["notes"] = tuple(d.get("notes", ()))
        return cls(**d)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"

    def text(self) -> str:
        rows = [
            ("base genus", str(self.base_genus)),
            ("fibres", ", ".join(self.fibres) if self.fibres else "(none)"),
            ("c2", str(self.c2)),
            ("chi(O_S)", str(self.chi)),
            ("delta(f)", format_rational(self.delta)),
            ("kappa(S)", str(self.kappa)),
            ("K_S", self.canonical_class),
            ("minimal", "yes" if self.minimal else "no"),
            ("almost smooth", "yes" if self.almost_smooth else "no"),
            ("isotrivial-consistent", "yes" if self.isotrivial_consistent else "no"),
            ("T_S pseudo-effective", self.tangent_psef),
            ("kappa(P(T_S), O(1))", "undefined" if self.kappa_PT is None else str(self.kappa_PT)),
        ]
        width = max(len(k) for k, _ in rows)
        lines = [f"{k.ljust(width)}  {v}" for k, v in rows]
        if self.kappa_PT is None:
            lines.append(f"{''.ljust(width)}  ({self.kappa_PT_reason})")
        y = self.y_restriction
        if y is not None:
            lines.append(f"{'Y|_Y restriction'.ljust(width)}  {y['verdict']} ({y['reason']})")
            for w in y.get("witnesses", []):
                lines.append(f"{''.ljust(width)}  witness {w['fibre']} [{w['type']}]: "
                             f"{w['component']} with coefficient {w['coefficient']}")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def _format_canonical(k: CanonicalClass) -> str:
    terms = [f"{format_rational(k.pullback_degree)}*F"]
    terms += [f"{m - 1}*F_{idx}" for idx, (m, _) in enumerate(k.multiple_fibres, 1)]
    return " + ".join(terms) + f"  (degree {format_rational(k.total_degree)} against F)"


def report(s: FibrationSpec, db: KodairaDatabase = DEFAULT_DB) -> InvariantsReport:
    c2 = chern2(s, db)
    chi = euler_chi(s, db)
    delta = delta_invariant(s, db)
    kappa = kodaira_dimension(s, db)
    verdict = tangent_psef_verdict(s, db)
    kpt = kappa_of_projectivized_tangent(s, db)
    notes = [VERDICT_RULE, KAPPA_RULE]
    if kappa == 0:
        notes.append("kappa = 0: K3/Enriques (c2 > 0) are not psef; abelian/bielliptic (c2 = 0) are")
    if any(t.in_I_family and not t.is_multiple and t.tag == "I" for t in s.fibres):
        notes.append("normalised fibres of I_b types are formula-extrapolated")
    return InvariantsReport(
        base_genus=s.base_genus,
        fibres=tuple(t.name for t in s.fibres),
        c2=c2,
        chi=chi,
        delta=delta,
        kappa=kappa,
        minimal=is_minimal(s, db),
        almost_smooth=is_almost_smooth(s),
        isotrivial_consistent=validate_isotrivial_consistency(s),
        tangent_psef=verdict,
        kappa_PT=kpt.value,
        kappa_PT_reason=kpt.reason,
        canonical_class=_format_canonical(canonical_class_data(s, db)),
        notes=tuple(notes),
    )
