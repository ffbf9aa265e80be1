from fractions import Fraction as Q

from kodaira_psef.kodaira import DEFAULT_DB, Component, FibreTopology, SingularPoint
from kodaira_psef.local import LocalIdeal
from kodaira_psef.verify import jacobian_ideal, verify_tables


def test_fresh_database_passes():
    r = verify_tables()
    assert r.passed, r.text()
    notes = r.suite("blowup-oracle").notes
    assert len(notes) == 2 and "II/Y_1" in notes[0]


def test_named_fault_examples():
    db = DEFAULT_DB.copy()
    db.normalised["II*"]["e6"] = Q(1, 12)
    r = verify_tables(db)
    assert not r.passed
    assert any("II*/e6" in f for f in r.suite("table=formula").failures)

    db = DEFAULT_DB.copy()
    db.euler["II*"] = 9
    r = verify_tables(db)
    assert {"euler", "table=formula"} <= set(r.failing())


def test_acknowledged_pair_is_pinned():
    db = DEFAULT_DB.copy()
    db.acknowledged[("II", "Y_1")] = (Q(1, 3), Q(1, 5))
    assert "blowup-oracle" in verify_tables(db).failing()
    db = DEFAULT_DB.copy()
    db.acknowledged[("IV", "Y_9")] = (Q(1), Q(1))
    assert "blowup-oracle" in verify_tables(db).failing()


def test_topology_fault_is_caught():
    db = DEFAULT_DB.copy()
    top = db.topology["IV"]
    p = top.points[0]
    db.topology["IV"] = FibreTopology(top.components, (SingularPoint(p.branches, p.contacts, p.equation,
                                                                     LocalIdeal(["x^2", "y^3"])),))
    assert "gamma-ideal" in verify_tables(db).failing()
    db = DEFAULT_DB.copy()
    top = db.topology["III*"]
    comps = list(top.components)
    comps[0] = Component("e1", 2, Q(-2))
    db.topology["III*"] = FibreTopology(tuple(comps), top.points)
    assert "lattice" in verify_tables(db).failing()


def test_jacobian_ideal_reduces_monomials():
    assert len(jacobian_ideal("x^2*y^3")) == 2


def test_report_renders():
    r = verify_tables()
    assert r.text().endswith("all tables verified\n")
    assert r.to_json()["passed"] is True


def test_wrong_ideal_fails_and_skips_dependent_suites():
    db = DEFAULT_DB.copy()
    top = db.topology["III"]
    p = top.points[0]
    db.topology["III"] = FibreTopology(
        top.components, (SingularPoint(p.branches, p.contacts, p.equation, LocalIdeal(["x^2", "y"])),) + top.points[1:])
    rep = verify_tables(db)
    assert not rep.passed
    assert "gamma-ideal" in rep.failing()
    assert any("III: skipped" in n for n in rep.suite("blowup-oracle").notes)
