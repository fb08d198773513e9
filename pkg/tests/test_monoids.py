import pytest

from corpus import boolean_functions, inst
from fibmult import finset as fs
from fibmult.core.monoids import (MonoidInM, commutation_choices, eckmann_hilton, endomorphisms_commute,
                                  verify_monoid)
from fibmult.errors import MissingProducts, ShapeMismatch
from fibmult.standard import cocone_monoid, fold_monoid
from fibmult.violations import kinds


def test_fold_monoids_are_monoids():
    fm, ms = boolean_functions(3)
    for m in ms.values():
        assert verify_monoid(fm, "in-M", m) == [], m


def test_cocone_monoid():
    fm = inst("ring", {"n": 2}, 2)
    assert verify_monoid(fm, "in-M", cocone_monoid(fm, "*")) == []


def test_wrong_unit_fails():
    # xor operations with the unit of and
    fm, ms = boolean_functions(2)
    xor, and_ = ms["xor"], ms["and"]
    mixed = MonoidInM(fm, xor.obj, xor.t, lambda f: and_.a(f) if len(f.dom) == 0 else xor.a(f), name="mixed")
    assert verify_monoid(fm, "in-M", mixed) != []


def test_non_associative_operation_fails():
    fm, _ = boolean_functions(3)
    # implication is not associative
    imp = fold_monoid(fm, "B", lambda a, b: "1" if a == "0" or b == "1" else "0", "1", name="imp")
    assert verify_monoid(fm, "in-M", imp) != []


def test_identity_morphism():
    fm, ms = boolean_functions(2)
    m = ms["and"]
    alpha = {i: fm.M.identity(m.obj(i)) for i in fm.base.objects}
    assert verify_monoid(fm, "morphism", (m, m, alpha)) == []
    # and is not a sub-monoid of or along the identity carrier map
    assert "MorphismViolation" in kinds(verify_monoid(fm, "morphism", (m, ms["or"], alpha)))


def test_negation_is_a_morphism_from_and_to_or():
    fm, ms = boolean_functions(2)
    pres = fm.info["presentation"]
    neg = pres.make(("B",), "B", lambda x: "1" if x == "0" else "0")
    alpha = {}
    for i in fm.base.objects:
        x = ms["and"].obj(i)
        alpha[i] = next(a for a in fm.M.hom(x, x) if a.shape == fs.identity(i) and all(c == neg for c in a.comps))
    assert verify_monoid(fm, "morphism", (ms["and"], ms["or"], alpha)) == []


def test_fibered_mode_rejects_ordinary_instance():
    assert verify_monoid(inst("ring", {"n": 2}, 2), "fibered") != []
    with pytest.raises(ValueError):
        verify_monoid(inst("ring", {"n": 2}, 2), "bogus")


def test_commutation_oracle():
    fm, ms = boolean_functions(4)
    two, one = fs.skeleton(2), fs.skeleton(1)
    (bang,) = fm.base.hom(two, one)
    # binary operations commute with themselves; xor and or do not interchange
    for k in ms:
        assert endomorphisms_commute(fm, ms[k].endo(bang), ms[k].endo(bang))
    assert not endomorphisms_commute(fm, ms["xor"].endo(bang), ms["or"].endo(bang))
    assert len(commutation_choices(fm, ms["xor"].endo(bang), ms["or"].endo(bang))) > 1


def test_commutation_needs_shared_codomain():
    fm, ms = boolean_functions(2)
    one, zero = fs.skeleton(1), fs.skeleton(0)
    (u,) = fm.base.hom(zero, one)
    e = ms["xor"].endo(u)
    e2 = ms["xor"].endo(fs.identity(zero))
    with pytest.raises(ShapeMismatch):
        endomorphisms_commute(fm, e, e2)


def test_eckmann_hilton_needs_products():
    fm, ms = boolean_functions(2)
    with pytest.raises(MissingProducts):
        eckmann_hilton(fm, ms["xor"], ms["or"], fs.skeleton(2))
