"""Recompute every stored table of a :class:`KodairaDatabase` from first principles.

Each suite returns the entries it checked and a list of human-readable
mismatches. Nothing here trusts a stored value it is checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import polys
from .blowup import (
    EmptyGammaError,
    NotIsotrivialType,
    exceptional_name,
    oracle_exceptional_coefficients,
    projection_formula_holds,
)
from .kodaira import (
    DEFAULT_DB,
    ISOTRIVIAL_SINGULAR,
    KodairaDatabase,
    KodairaType,
    closed_form_coefficient,
    euler_from_configuration,
    euler_number,
    fibre_model,
)
from .lattice import definiteness, format_rational, primitive
from .local import LocalIdeal, ideal_power_membership

FAMILY_RANGE = range(1, 11)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)


@dataclass
class VerificationReport:
    suites: list[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def suite(self, name: str) -> SuiteResult:
        return next(s for s in self.suites if s.name == name)

    def failing(self) -> list[str]:
        return [s.name for s in self.suites if not s.passed]

    def text(self) -> str:
        width = max(len(s.name) for s in self.suites)
        lines = []
        for s in self.suites:
            status = "PASS" if s.passed else "FAIL"
            lines.append(f"{status}  {s.name.ljust(width)}  {s.checked} checked")
            lines += [f"      - {f}" for f in s.failures]
            lines += [f"      note: {n}" for n in s.notes]
        lines.append("all tables verified" if self.passed else
                     f"verification failed: {', '.join(self.failing())}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "suites": [
                {"name": s.name, "passed": s.passed, "checked": s.checked,
                 "failures": s.failures, "notes": s.notes}
                for s in self.suites
            ],
        }


def _all_types(db: KodairaDatabase) -> list[KodairaType]:
    names = list(dict.fromkeys(list(db.topology) + list(db.euler)))
    return [KodairaType.parse(n) for n in names]


def _guard(suite: SuiteResult, label: str, fn: Callable[[], None]) -> None:
    try:
        fn()
    except (ArithmeticError, KeyError, ValueError) as exc:
        suite.fail(f"{label}: {type(exc).__name__}: {exc}")


# ---------------------------------------------------------------------------


def suite_euler(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("euler")
    for t in _all_types(db) + [KodairaType("I", 0, m) for m in (2, 3, 5)]:
        def check(t=t):
            stored = euler_number(t, db)
            oracle = euler_from_configuration(fibre_model(t, db))
            s.checked += 1
            if stored != oracle:
                s.fail(f"{t.name}: stored {stored}, dual graph gives {oracle}")
        _guard(s, t.name, check)
    return s


def suite_table_formula(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("table=formula")
    for b in FAMILY_RANGE:
        for name, want in ((f"I{b}", b), (f"I{b}*", b + 6)):
            if name in db.euler:
                s.checked += 1
                if db.euler[name] != want:
                    s.fail(f"{name}: Euler {db.euler[name]}, family formula gives {want}")
    for name, row in sorted(db.normalised.items()):
        def check(name=name, row=row):
            t = KodairaType.parse(name)
            model = fibre_model(t, db)
            e = euler_number(t, db)
            if set(row) != set(model.ids):
                s.fail(f"{name}: components {sorted(row)} differ from {list(model.ids)}")
                return
            for c in model.components:
                s.checked += 1
                want = closed_form_coefficient(e, c.multiplicity)
                if row[c.id] != want:
                    s.fail(f"{name}/{c.id}: stored {format_rational(row[c.id])}, "
                           f"closed form 1-(1-{e}/12)*{c.multiplicity} = {format_rational(want)}")
        _guard(s, name, check)
    return s


def suite_effectivity(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("normalised-effective")
    for name, row in sorted(db.normalised.items()):
        s.checked += 1
        bad = [c for c, q in row.items() if not (0 <= q < 1)]
        if bad:
            s.fail(f"{name}: coefficients outside [0, 1) on {bad}")
        if name.endswith("*") and not any(q == 0 for q in row.values()):
            s.fail(f"{name}: starred type has no zero coefficient")
    return s


def suite_multiplicity_bounds(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("multiplicity-bounds")
    for key, bound in sorted(db.multiplicity_bounds.items()):
        names = [f"I{b}*" for b in FAMILY_RANGE] if key == "Ib*" else [key]
        for name in names:
            def check(name=name, bound=bound, key=key):
                top = max(c.multiplicity for c in fibre_model(KodairaType.parse(name), db).components)
                s.checked += 1
                if top != bound:
                    s.fail(f"{key} ({name}): stored bound {bound}, largest multiplicity {top}")
            _guard(s, name, check)
    return s


def suite_lattice(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("lattice")
    for t in _all_types(db):
        def check(t=t):
            model = fibre_model(t, db)
            lat = model.lattice()
            d = definiteness(lat)
            s.checked += 1
            nu = primitive([Fraction(c.multiplicity) for c in model.components])
            if d.verdict != "negative-semidefinite" or len(d.kernel) != 1:
                s.fail(f"{t.name}: Gram is {d.verdict} with kernel rank {len(d.kernel)}")
            elif primitive(lat.vector(d.kernel[0])) != nu:
                s.fail(f"{t.name}: kernel {d.kernel[0]} is not the multiplicity vector")
            # subsets of a negative definite set stay negative definite
            if len(model.ids) > 1:
                for c in model.ids:
                    rest = [x for x in model.ids if x != c]
                    if definiteness(lat.restrict(rest)).verdict != "negative-definite":
                        s.fail(f"{t.name}: components without {c} are not negative definite")
            if all(c.self_intersection == -2 for c in model.components) and len(model.ids) > 1:
                mult = {c.id: c.multiplicity for c in model.components}
                for c in model.ids:
                    nbr = sum(mult[o] * k for o, k in model.neighbours(c))
                    if 2 * mult[c] != nbr:
                        s.fail(f"{t.name}/{c}: 2*{mult[c]} != neighbour sum {nbr}")
        _guard(s, t.name, check)
    return s


def _reduced_equation(eq: str) -> polys.Poly:
    p = polys.parse_poly(eq, ("x", "y"))
    if len(p) == 1:
        # a monomial fibre equation x^a y^b has reduced equation x y (or x, y)
        (m, _), = p.items()
        return {tuple(min(e, 1) for e in m): Fraction(1)}
    return p


def jacobian_ideal(eq: str) -> list[polys.Poly]:
    f = _reduced_equation(eq)
    return [g for g in (polys.derivative(f, 0), polys.derivative(f, 1)) if g]


def suite_gamma_ideal(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("gamma-ideal")
    for name in ISOTRIVIAL_SINGULAR:
        def check(name=name):
            model = fibre_model(KodairaType.parse(name), db)
            for k, p in enumerate(model.points):
                s.checked += 1
                jac = polys.groebner(jacobian_ideal(p.equation))
                stored = polys.groebner(p.ideal.polys())
                if jac != stored:
                    s.fail(f"{name} point {k + 1}: ideal {p.ideal} is not the Jacobian ideal of {p.equation}")
        _guard(s, name, check)
    return s


def _bad_ideals(db: KodairaDatabase) -> set[str]:
    """Types whose stored ideals differ from the Jacobian ideals.

    Suites that compute with those ideals skip such types: the mismatch is
    already a failure, and the wrong ideal can push the local algebra past
    its degree cap.
    """
    bad = set()
    for name in ISOTRIVIAL_SINGULAR:
        try:
            for p in fibre_model(KodairaType.parse(name), db).points:
                if polys.groebner(jacobian_ideal(p.equation)) != polys.groebner(p.ideal.polys()):
                    bad.add(name)
        except (ArithmeticError, KeyError, ValueError):
            bad.add(name)
    return bad


def _exceptional_order(t: KodairaType, db: KodairaDatabase) -> list[str]:
    taken: set[str] = set()
    out = []
    for p in fibre_model(t, db).points:
        n = exceptional_name(p.incident, taken)
        taken.add(n)
        out.append(n)
    return out


def suite_point_count(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("point-count")
    for name, row in sorted(db.blowup.items()):
        def check(name=name, row=row):
            s.checked += 1
            names = _exceptional_order(KodairaType.parse(name), db)
            if sorted(names) != sorted(row):
                s.fail(f"{name}: singular points give {names}, table lists {list(row)}")
        _guard(s, name, check)
    return s


def suite_blowup_additivity(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("blowup-additivity")
    for name, row in sorted(db.blowup.items()):
        def check(name=name, row=row):
            t = KodairaType.parse(name)
            model = fibre_model(t, db)
            norm = db.normalised.get(name, {})
            for y, p in zip(_exceptional_order(t, db), model.points):
                if p.ideal != LocalIdeal(["x", "y"]) or y not in row:
                    continue
                s.checked += 1
                want = sum((norm.get(c, Fraction(0)) for c in p.branches), Fraction(0))
                if row[y] != want:
                    s.fail(f"{name}/{y}: stored {format_rational(row[y])}, "
                           f"sum over {'+'.join(p.branches)} gives {format_rational(want)}")
        _guard(s, name, check)
    return s


def suite_blowup_oracle(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("blowup-oracle")
    seen = set()
    bad = _bad_ideals(db)
    for name, row in sorted(db.blowup.items()):
        if name in bad:
            s.notes.append(f"{name}: skipped, ideal check failed")
            seen.update(k for k in db.acknowledged if k[0] == name)
            continue
        def check(name=name, row=row):
            t = KodairaType.parse(name)
            model = fibre_model(t, db)
            oracle = oracle_exceptional_coefficients(t, db)
            for y, p in zip(_exceptional_order(t, db), model.points):
                if p.ideal == LocalIdeal(["x", "y"]) or y not in row:
                    continue
                s.checked += 1
                stored, got = row[y], oracle[y]
                ack = db.acknowledged.get((name, y))
                if ack is not None:
                    seen.add((name, y))
                    if ack == (stored, got):
                        s.notes.append(f"{name}/{y}: acknowledged discrepancy, stored "
                                       f"{format_rational(stored)} vs oracle {format_rational(got)}")
                    else:
                        s.fail(f"{name}/{y}: acknowledged pair ({format_rational(ack[0])}, "
                               f"{format_rational(ack[1])}) no longer matches stored "
                               f"{format_rational(stored)} / oracle {format_rational(got)}")
                elif stored != got:
                    s.fail(f"{name}/{y}: stored {format_rational(stored)}, oracle {format_rational(got)}")
        _guard(s, name, check)
    for key in sorted(set(db.acknowledged) - seen):
        s.fail(f"{key[0]}/{key[1]}: acknowledged entry has no matching table entry")
    return s


def suite_witness(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("witness")
    half = Fraction(1, 2)
    for name in ISOTRIVIAL_SINGULAR:
        s.checked += 1
        row = db.blowup.get(name)
        if not row:
            s.fail(f"{name}: no exceptional coefficients stored")
            continue
        y, q = min(row.items(), key=lambda kv: kv[1])
        if q > half:
            s.fail(f"{name}: smallest exceptional coefficient {format_rational(q)} ({y}) exceeds 1/2")
        if any(v < 0 for v in row.values()):
            s.fail(f"{name}: negative exceptional coefficient")
    return s


def suite_projection(db: KodairaDatabase) -> SuiteResult:
    s = SuiteResult("projection-formula")
    bad = _bad_ideals(db)
    for name in ISOTRIVIAL_SINGULAR:
        if name in bad:
            s.notes.append(f"{name}: skipped, ideal check failed")
            continue
        def check(name=name):
            s.checked += 1
            if not projection_formula_holds(KodairaType.parse(name), db):
                s.fail(f"{name}: (pi^*C).E != 0 on the blown-up fibre")
        try:
            check()
        except (EmptyGammaError, NotIsotrivialType) as exc:
            s.fail(f"{name}: {exc}")
        except (ArithmeticError, KeyError, ValueError) as exc:
            s.fail(f"{name}: {type(exc).__name__}: {exc}")
    return s


def suite_ideal_power(db: KodairaDatabase) -> SuiteResult:
    """The type II fibre equation to the power k/6 avoids the k-th power of its ideal."""
    s = SuiteResult("ideal-power")

    if "II" in _bad_ideals(db):
        s.notes.append("II: skipped, ideal check failed")
        return s

    def check():
        p = fibre_model(KodairaType.parse("II"), db).points[0]
        f = polys.parse_poly(p.equation, ("x", "y"))
        for k in (6, 12):
            s.checked += 1
            g = polys.power(f, k // 6, 2)
            if ideal_power_membership(g, p.ideal, k):
                s.fail(f"II: ({p.equation})^{k // 6} lies in {p.ideal}^{k}")
    _guard(s, "II", check)
    return s


SUITES = (
    suite_euler,
    suite_table_formula,
    suite_effectivity,
    suite_multiplicity_bounds,
    suite_lattice,
    suite_gamma_ideal,
    suite_point_count,
    suite_blowup_additivity,
    suite_blowup_oracle,
    suite_witness,
    suite_projection,
    suite_ideal_power,
)


def verify_tables(db: KodairaDatabase = DEFAULT_DB) -> VerificationReport:
    return VerificationReport([suite(db) for suite in SUITES])
