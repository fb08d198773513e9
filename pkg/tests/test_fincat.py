import pytest

from fibmult import catalog
from fibmult.core.base import arrow_category
from fibmult.errors import InvalidInput, NotAFibration
from fibmult.fincat import (FinCategory, FinFunctor, cartesian_lift, classify_fibration, compose_functors,
                            is_cartesian, tabulate, validate_category, validate_functor)
from fibmult.violations import kinds


def test_catalog_categories_are_valid():
    for c in [catalog.terminal_category(), catalog.ring_category(2), catalog.ring_category(3),
              catalog.left_zero_monoid(), catalog.chain3(), arrow_category()]:
        assert validate_category(c) == [], c


def test_matrix_category():
    c = catalog.matrix_category(2, 2)
    assert [len(c.hom(x, y)) for x in c.objects for y in c.objects] == [1, 1, 1, 1, 2, 4, 1, 4, 16]
    t = tabulate(c)
    assert t.n_arrows() == 31 and validate_category(t) == []
    assert sum(c.is_iso(a) for a in c.hom("2", "2")) == 6  # |GL_2(F_2)|


def test_ring_isos():
    c = catalog.ring_category(3)
    assert [a for a in c.arrows() if c.is_iso(a)] == ["1", "2"]
    assert c.inverse("2") == "2" and c.inverse("0") is None


def test_broken_categories():
    arrows = [("1", "*", "*"), ("a", "*", "*")]
    comp = {("1", "1"): "1", ("1", "a"): "a", ("a", "1"): "a", ("a", "a"): "1"}
    assert validate_category(FinCategory(["*"], arrows, {"*": "1"}, comp)) == []
    bad = dict(comp)
    bad[("a", "1")] = "1"
    assert "UnitViolation" in kinds(validate_category(FinCategory(["*"], arrows, {"*": "1"}, bad)))
    # x.y = y is associative; x.y = 1 for non-units is not
    arrows = [("1", "*", "*"), ("a", "*", "*"), ("b", "*", "*")]
    comp = {(g, f): f if g == "1" else (g if f == "1" else "a") for g in "1ab" for f in "1ab"}
    comp[("a", "a")] = "b"
    assert "AssociativityViolation" in kinds(validate_category(FinCategory(["*"], arrows, {"*": "1"}, comp)))
    missing = {k: v for k, v in comp.items() if k != ("b", "b")}
    assert kinds(validate_category(FinCategory(["*"], arrows, {"*": "1"}, missing))) == ["DomCodViolation"]
    with pytest.raises(InvalidInput):
        FinCategory(["*"], [("1", "*", "*"), ("1", "*", "*")], {"*": "1"}, {})


def test_classify_codomain_and_domain():
    c = arrow_category()
    one = catalog.terminal_category()
    F = FinFunctor(c, one, lambda x: "*", lambda a: "1")
    r = classify_fibration(F)
    # 2 -> 1 is a fibration but neither discrete nor a fibration in groupoids
    assert r.is_fibration and not r.is_fibration_in_groupoids
    assert not r.is_discrete_fibration and not r.is_groupoid
    assert validate_functor(compose_functors(F, FinFunctor(c, c, lambda x: x, lambda a: a))) == []
    with pytest.raises(NotAFibration):
        cartesian_lift(F, "1", "*")


def test_group_over_point_is_fibration_in_groupoids():
    z = catalog.monoid_category(["0", "1"], lambda g, f: (int(g) + int(f)) % 2, "0", name="C2")
    one = catalog.terminal_category()
    F = FinFunctor(z, one, lambda x: "*", lambda a: "1")
    r = classify_fibration(F)
    assert r.flags() == {"is_groupoid": True, "is_fibration": True, "is_fibration_in_groupoids": True,
                         "is_discrete_fibration": False, "is_discrete_opfibration": False}
    assert all(is_cartesian(F, a) for a in z.arrows())
    assert cartesian_lift(F, "1", "*") == ["0", "1"]


def test_identity_is_discrete():
    c = catalog.chain3()
    r = classify_fibration(FinFunctor(c, c, lambda x: x, lambda a: a))
    assert r.is_discrete_fibration and r.is_discrete_opfibration and r.is_fibration_in_groupoids


def test_missing_lift():
    # inclusion of the object 1 into 0 -> 1 misses the lift of u
    c = arrow_category()
    pt = FinCategory(["1"], [("i", "1", "1")], {"1": "i"}, {("i", "i"): "i"})
    r = classify_fibration(FinFunctor(pt, c, {"1": "1"}, {"i": "id1"}))
    assert not r.is_fibration and "MissingCartesianLift" in kinds(r.witnesses)


def test_not_a_functor():
    c = catalog.ring_category(2)
    F = FinFunctor(c, c, lambda x: x, {"0": "1", "1": "0"})
    assert validate_functor(F)
    with pytest.raises(InvalidInput):
        classify_fibration(F)
