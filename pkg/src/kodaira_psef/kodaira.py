"""Kodaira singular fibre types as weighted dual graphs.

The static tables (Euler numbers, normalised fibre coefficients, multiplicity
bounds, local ideals at the singular points of the reduced fibre, and the
coefficients of the pulled-back normalised fibre on the blow-up) live in a
:class:`KodairaDatabase`. Fibre topology is stored once and every number that
can be recomputed from it is recomputed by :mod:`kodaira_psef.verify`.
"""

from __future__ import annotations

import copy
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .lattice import CurveClass, DivisorVec, Lattice
from .local import LocalIdeal

NAMED_TAGS = ("II", "III", "IV", "II*", "III*", "IV*")
ISOTRIVIAL_SINGULAR = ("II", "III", "IV", "I0*", "II*", "III*", "IV*")


class FibreTypeError(ValueError):
    pass


class MultiplicityError(FibreTypeError):
    pass


@dataclass(frozen=True, order=True)
class KodairaType:
    """A Kodaira fibre type; ``tag`` is "I", "I*" or one of NAMED_TAGS."""

    tag: str
    b: int = 0
    m: int = 1

    def __post_init__(self):
        if self.tag not in ("I", "I*") + NAMED_TAGS:
            raise FibreTypeError(f"unknown Kodaira tag {self.tag!r}")
        if self.tag not in ("I", "I*") and self.b:
            raise FibreTypeError(f"type {self.tag} takes no index b")
        if self.b < 0:
            raise FibreTypeError("index b must be non-negative")
        if self.m < 1:
            raise MultiplicityError("multiplicity m must be at least 1")
        if self.m > 1 and self.tag != "I":
            raise MultiplicityError(f"multiple fibres only exist for I_b, not {self.name}")

    @property
    def base_name(self) -> str:
        if self.tag == "I":
            return f"I{self.b}"
        if self.tag == "I*":
            return f"I{self.b}*"
        return self.tag

    @property
    def name(self) -> str:
        return (f"{self.m}" if self.m > 1 else "") + self.base_name

    def __str__(self) -> str:
        return self.name

    @property
    def is_smooth(self) -> bool:
        return self.tag == "I" and self.b == 0 and self.m == 1

    @property
    def is_multiple(self) -> bool:
        return self.m > 1

    @property
    def in_I_family(self) -> bool:
        """I_b or I_b^* with b >= 1 (excluded for isotrivial fibrations)."""
        return self.tag in ("I", "I*") and self.b >= 1

    @classmethod
    def parse(cls, text: str) -> "KodairaType":
        """Parse names such as ``II*``, ``I0*``, ``I3``, ``I2*`` or ``2I0``."""
        s = text.strip()
        m = re.fullmatch(r"(\d+)?(I{1,3}V?|IV)(\d+)?(\*)?", s)
        if not m:
            raise FibreTypeError(f"unknown Kodaira type {text!r}")
        mult, roman, idx, star = m.groups()
        mult = int(mult) if mult else 1
        if roman == "I":
            b = int(idx) if idx is not None else None
            if b is None:
                raise FibreTypeError(f"type I needs an index, got {text!r}")
            return cls("I*" if star else "I", b, mult)
        if idx is not None:
            raise FibreTypeError(f"unknown Kodaira type {text!r}")
        return cls(roman + ("*" if star else ""), 0, mult)


# ---------------------------------------------------------------------------
# fibre models


@dataclass(frozen=True)
class Component:
    id: str
    multiplicity: int
    self_intersection: Fraction
    genus: int = 0


@dataclass(frozen=True)
class SingularPoint:
    """A singular point of the reduced fibre.

    ``branches`` lists the component carrying each local branch (a node on a
    single component lists it twice). ``contacts`` gives the local
    intersection multiplicity of each pair of distinct components.
    """

    branches: tuple[str, ...]
    contacts: tuple[tuple[tuple[str, str], int], ...]
    equation: str
    ideal: LocalIdeal

    @property
    def incident(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(self.branches))


@dataclass(frozen=True)
class FibreTopology:
    components: tuple[Component, ...]
    points: tuple[SingularPoint, ...]


@dataclass(frozen=True)
class FibreModel:
    type: KodairaType
    components: tuple[Component, ...]
    points: tuple[SingularPoint, ...]
    euler: int

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    def component(self, cid: str) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def edges(self) -> tuple[tuple[tuple[str, str], int], ...]:
        acc: dict[tuple[str, str], int] = {}
        order = self.ids
        for p in self.points:
            for pair, mult in p.contacts:
                key = tuple(sorted(pair, key=order.index))
                acc[key] = acc.get(key, 0) + mult
        return tuple(sorted(acc.items(), key=lambda kv: (self.ids.index(kv[0][0]), self.ids.index(kv[0][1]))))

    def lattice(self) -> Lattice:
        pairs: dict[tuple[str, str], object] = {(c.id, c.id): c.self_intersection for c in self.components}
        pairs.update({k: Fraction(v) for k, v in self.edges})
        return Lattice.from_pairs([CurveClass(c) for c in self.ids], pairs)

    def multiplicity_vector(self) -> DivisorVec:
        return DivisorVec({c.id: c.multiplicity for c in self.components})

    @property
    def gamma_points(self) -> tuple[tuple[tuple[str, ...], LocalIdeal], ...]:
        return tuple((p.incident, p.ideal) for p in self.points)

    def neighbours(self, cid: str) -> list[tuple[str, int]]:
        out = []
        for (a, b), mult in self.edges:
            if a == cid:
                out.append((b, mult))
            elif b == cid:
                out.append((a, mult))
        return out

    def to_json(self) -> dict:
        from .lattice import format_rational

        lat = self.lattice()
        return {
            "type": self.type.name,
            "components": [
                {"id": c.id, "multiplicity": c.multiplicity,
                 "self_intersection": format_rational(c.self_intersection), "genus": c.genus}
                for c in self.components
            ],
            "edges": [{"components": list(k), "intersection": v} for k, v in self.edges],
            "gram": [[format_rational(x) for x in row] for row in lat.gram],
            "euler": self.euler,
            "gamma_points": [
                {"components": list(p.incident), "branches": list(p.branches),
                 "local_equation": p.equation, "ideal": list(p.ideal.generators)}
                for p in self.points
            ],
        }


# ---------------------------------------------------------------------------
# topology builders

NODE_IDEAL = LocalIdeal(["x", "y"])


def _node(a: str, b: str, nu_a: int = 1, nu_b: int = 1) -> SingularPoint:
    pair = ((a, b),) if a != b else ()
    eq = ("x" if nu_a == 1 else f"x^{nu_a}") + "*" + ("y" if nu_b == 1 else f"y^{nu_b}")
    return SingularPoint((a, b), tuple((p, 1) for p in pair), eq, NODE_IDEAL)


def _tree(nus: list[int], edges: list[tuple[int, int]]) -> FibreTopology:
    comps = tuple(Component(f"e{i + 1}", nu, Fraction(-2)) for i, nu in enumerate(nus))
    pts = tuple(_node(f"e{a}", f"e{b}", nus[a - 1], nus[b - 1]) for a, b in edges)
    return FibreTopology(comps, pts)


def _i_b(b: int, m: int) -> FibreTopology:
    if b == 0:
        return FibreTopology((Component("e1", m, Fraction(0), genus=1),), ())
    if b == 1:
        return FibreTopology((Component("e1", m, Fraction(0)),), (_node("e1", "e1", m, m),))
    comps = tuple(Component(f"e{i + 1}", m, Fraction(-2)) for i in range(b))
    pts = tuple(_node(f"e{i + 1}", f"e{(i + 1) % b + 1}", m, m) for i in range(b))
    return FibreTopology(comps, pts)


def _i_b_star(b: int) -> FibreTopology:
    # chain e1..e_{b+1} of multiplicity 2, tails e_{b+2}, e_{b+3} on e1 and
    # e_{b+4}, e_{b+5} on e_{b+1}; for b = 0 this is e1 with tails e2..e5
    nus = [2] * (b + 1) + [1, 1, 1, 1]
    edges = [(i, i + 1) for i in range(1, b + 1)]
    edges += [(1, b + 2), (1, b + 3), (b + 1, b + 4), (b + 1, b + 5)]
    return _tree(nus, edges)


def _table1_point(branches, contacts, equation, ideal) -> SingularPoint:
    return SingularPoint(tuple(branches), tuple(contacts), equation, LocalIdeal(ideal))


def _default_topologies() -> dict[str, FibreTopology]:
    t: dict[str, FibreTopology] = {}
    t["II"] = FibreTopology(
        (Component("e1", 1, Fraction(0)),),
        (_table1_point(["e1"], [], "x^3 - y^2", ["x^2", "y"]),),
    )
    t["III"] = FibreTopology(
        (Component("e1", 1, Fraction(-2)), Component("e2", 1, Fraction(-2))),
        (_table1_point(["e1", "e2"], [(("e1", "e2"), 2)], "x^4 - y^2", ["x^3", "y"]),),
    )
    t["IV"] = FibreTopology(
        tuple(Component(f"e{i}", 1, Fraction(-2)) for i in (1, 2, 3)),
        (_table1_point(["e1", "e2", "e3"],
                       [(("e1", "e2"), 1), (("e1", "e3"), 1), (("e2", "e3"), 1)],
                       "x^3 - y^3", ["x^2", "y^2"]),),
    )
    t["II*"] = _tree([1, 2, 3, 4, 5, 6, 3, 4, 2],
                     [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (6, 8), (8, 9)])
    t["III*"] = _tree([1, 2, 3, 4, 2, 3, 2, 1],
                      [(1, 2), (2, 3), (3, 4), (4, 5), (4, 6), (6, 7), (7, 8)])
    t["IV*"] = _tree([1, 2, 1, 2, 1, 2, 3],
                     [(1, 2), (3, 4), (5, 6), (2, 7), (4, 7), (6, 7)])
    for b in range(0, 11):
        t[f"I{b}"] = _i_b(b, 1)
        t[f"I{b}*"] = _i_b_star(b)
    return t


def _default_euler() -> dict[str, int]:
    e = {"II": 2, "III": 3, "IV": 4, "II*": 10, "III*": 9, "IV*": 8}
    for b in range(0, 11):
        e[f"I{b}"] = b
        e[f"I{b}*"] = b + 6
    return e


def _q(s: str) -> Fraction:
    return Fraction(s)


# normalised fibre coefficients for the isotrivial singular types
NORMALISED_TABLE = {
    "II": {"e1": _q("1/6")},
    "III": {"e1": _q("1/4"), "e2": _q("1/4")},
    "IV": {"e1": _q("1/3"), "e2": _q("1/3"), "e3": _q("1/3")},
    "I0*": {"e1": _q("0"), "e2": _q("1/2"), "e3": _q("1/2"), "e4": _q("1/2"), "e5": _q("1/2")},
    "II*": {"e1": _q("5/6"), "e2": _q("2/3"), "e3": _q("1/2"), "e4": _q("1/3"), "e5": _q("1/6"),
            "e6": _q("0"), "e7": _q("1/2"), "e8": _q("1/3"), "e9": _q("2/3")},
    "III*": {"e1": _q("3/4"), "e2": _q("1/2"), "e3": _q("1/4"), "e4": _q("0"), "e5": _q("1/2"),
             "e6": _q("1/4"), "e7": _q("1/2"), "e8": _q("3/4")},
    "IV*": {"e1": _q("2/3"), "e2": _q("1/3"), "e3": _q("2/3"), "e4": _q("1/3"), "e5": _q("2/3"),
            "e6": _q("1/3"), "e7": _q("0")},
}

# coefficients of the exceptional curves in the pullback of the normalised
# fibre under the blow-up of the singular points of the reduced fibre
BLOWUP_TABLE = {
    "II": {"Y_1": _q("1/3")},
    "III": {"Y_1,2": _q("1/2")},
    "IV": {"Y_1,2,3": _q("1/2")},
    "I0*": {"Y_1,2": _q("1/2"), "Y_1,3": _q("1/2"), "Y_1,4": _q("1/2"), "Y_1,5": _q("1/2")},
    "II*": {"Y_1,2": _q("3/2"), "Y_2,3": _q("7/6"), "Y_3,4": _q("5/6"), "Y_4,5": _q("1/2"),
            "Y_5,6": _q("1/6"), "Y_6,7": _q("1/2"), "Y_6,8": _q("1/3"), "Y_8,9": _q("1")},
    "III*": {"Y_1,2": _q("5/4"), "Y_2,3": _q("3/4"), "Y_3,4": _q("1/4"), "Y_4,5": _q("1/2"),
             "Y_4,6": _q("1/4"), "Y_6,7": _q("3/4"), "Y_7,8": _q("5/4")},
    "IV*": {"Y_1,2": _q("1"), "Y_3,4": _q("1"), "Y_5,6": _q("1"), "Y_2,7": _q("1/3"),
            "Y_4,7": _q("1/3"), "Y_6,7": _q("1/3")},
}

# max component multiplicity of the starred types ("Ib*" covers b >= 1)
MULTIPLICITY_BOUNDS = {"I0*": 2, "Ib*": 2, "II*": 6, "III*": 4, "IV*": 3}

# table entries that disagree with the colength oracle for Table-1 ideals:
# (type, exceptional id) -> (stored value, oracle value). Pinned so that any
# further change to either side is caught.
ACKNOWLEDGED_DISCREPANCIES = {
    ("II", "Y_1"): (_q("1/3"), _q("1/4")),
    ("III", "Y_1,2"): (_q("1/2"), _q("1/3")),
}


@dataclass
class KodairaDatabase:
    topology: dict = field(default_factory=_default_topologies)
    euler: dict = field(default_factory=_default_euler)
    normalised: dict = field(default_factory=lambda: copy.deepcopy(NORMALISED_TABLE))
    blowup: dict = field(default_factory=lambda: copy.deepcopy(BLOWUP_TABLE))
    multiplicity_bounds: dict = field(default_factory=lambda: dict(MULTIPLICITY_BOUNDS))
    acknowledged: dict = field(default_factory=lambda: dict(ACKNOWLEDGED_DISCREPANCIES))

    def copy(self) -> "KodairaDatabase":
        return copy.deepcopy(self)


DEFAULT_DB = KodairaDatabase()


def _topology(t: KodairaType, db: KodairaDatabase) -> FibreTopology:
    if t.tag == "I":
        if t.m == 1 and t.base_name in db.topology:
            return db.topology[t.base_name]
        return _i_b(t.b, t.m)
    if t.base_name in db.topology:
        return db.topology[t.base_name]
    return _i_b_star(t.b)


def euler_number(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> int:
    """Topological Euler number of the fibre (multiple fibres: that of the reduced fibre)."""
    if t.base_name in db.euler:
        return db.euler[t.base_name]
    if t.tag == "I":
        return t.b
    if t.tag == "I*":
        return t.b + 6
    raise KeyError(t.name)


def fibre_model(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> FibreModel:
    top = _topology(t, db)
    return FibreModel(t, top.components, top.points, euler_number(t, db))


def euler_from_configuration(f: FibreModel) -> int:
    """Inclusion-exclusion: sum of e(normalisations) minus (branches - 1) per singular point."""
    total = sum(2 - 2 * c.genus for c in f.components)
    total -= sum(len(p.branches) - 1 for p in f.points)
    return total


def closed_form_coefficient(euler: int, nu: int) -> Fraction:
    return 1 - (1 - Fraction(euler, 12)) * nu


@dataclass(frozen=True)
class NormalisedFibre:
    divisor: DivisorVec
    formula_extrapolated: bool


def normalised_fibre_data(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> NormalisedFibre:
    model = fibre_model(t, db)
    e = model.euler
    if t.is_multiple:
        # (e/12) m F_j on the reduced fibre F_j
        coef = Fraction(e, 12) * t.m
        d = DivisorVec({c.id: coef for c in model.components})
        return NormalisedFibre(d, t.b > 0)
    if t.base_name in db.normalised:
        return NormalisedFibre(DivisorVec(db.normalised[t.base_name]), False)
    d = DivisorVec({c.id: closed_form_coefficient(e, c.multiplicity) for c in model.components})
    return NormalisedFibre(d, not t.is_smooth)


def normalized_fibre(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> DivisorVec:
    return normalised_fibre_data(t, db).divisor


def gamma_points(t: KodairaType, db: KodairaDatabase = DEFAULT_DB) -> list[tuple[tuple[str, ...], LocalIdeal]]:
    return list(fibre_model(t, db).gamma_points)


def kodaira_type_from_json(obj: Mapping) -> KodairaType:
    """Accepts ``{"type": "II*"}``, ``{"type": "I", "b": 3, "m": 2}`` and the like."""
    if not isinstance(obj, Mapping) or "type" not in obj:
        raise FibreTypeError("fibre entry needs a 'type' field")
    tag = obj["type"]
    if not isinstance(tag, str):
        raise FibreTypeError("fibre 'type' must be a string")
    b = obj.get("b")
    m = obj.get("m", 1)
    for name, v in (("b", b), ("m", m)):
        if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
            raise FibreTypeError(f"fibre field {name!r} must be an integer")
    if tag in ("I", "I*"):
        if b is None:
            raise FibreTypeError(f"type {tag} needs an index 'b'")
        return KodairaType(tag, b, m)
    base = KodairaType.parse(tag)
    if b is not None and b != base.b:
        raise FibreTypeError(f"index 'b' given twice for {tag!r}")
    if m != 1 and base.m != 1:
        raise FibreTypeError(f"multiplicity given twice for {tag!r}")
    return KodairaType(base.tag, base.b, m if m != 1 else base.m)
