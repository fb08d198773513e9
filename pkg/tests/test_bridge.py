import pytest

from corpus import arrow_pseudofunctor, family_instance, inst
from fibmult import catalog
from fibmult.core.base import arrow_category
from fibmult.core.multicategory import verify_axioms
from fibmult.errors import InvalidInput, NotAFibration, NotUnary
from fibmult.fibration_bridge import (Pseudofunctor, candidate_functors, check_isomorphism, codomain_fibration,
                                      family_fibration, family_to_sequential_maps, fibchar_check, from_fibration,
                                      from_pseudofunctor, grothendieck_unary, identity_fibration,
                                      inclusion_functor, is_pullback_in, section_via, unary_embedding, unary_part)
from fibmult.fincat import FinCategory, FinFunctor
from fibmult.violations import kinds


def _flags(rep):
    return rep.hypothesis, rep.conclusion


@pytest.mark.parametrize("make, squares", [(identity_fibration, 5), (codomain_fibration, 11)])
def test_fibrations_over_arrow(make, squares):
    fm = from_fibration(make(arrow_category()))
    assert verify_axioms(fm) == [] and len(fm.special) == squares
    assert _flags(fibchar_check(fm, inclusion_functor(fm))) == (True, True)


def test_non_fibration_rejected():
    c = arrow_category()
    pt = FinCategory(["1"], [("i", "1", "1")], {"1": "i"}, {("i", "i"): "i"})
    with pytest.raises(NotAFibration):
        from_fibration(FinFunctor(pt, c, {"1": "1"}, {"i": "id1"}))


def test_family_fibration_is_sequential():
    fm = from_fibration(family_fibration(catalog.ring_category(2), 2))
    seq = inst("sequential", {"category": "Z/2"}, 2)
    assert len(fm.special) == len(seq.special) == 223
    assert check_isomorphism(fm, seq, *family_to_sequential_maps(catalog.ring_category(2))) == []


@pytest.mark.parametrize("n, flags", [(2, [(True, True)]),
                                      (3, [(True, True), (False, True), (False, True), (False, True)])])
def test_candidate_functors(n, flags):
    fm = inst("sequential", {"category": f"Z/{n}"}, 2)
    assert [_flags(fibchar_check(fm, F)) for F in candidate_functors(fm)] == flags
    assert all(fibchar_check(fm, F).sound for F in candidate_functors(fm))


def test_pullbacks_in_finite_category():
    c = catalog.chain3()
    # in a poset the pullback of b <= c along itself is b
    assert is_pullback_in(c, "b<=b", "b<=b", "b<=c", "b<=c")
    assert not is_pullback_in(c, "a<=b", "a<=b", "b<=c", "b<=c")
    assert is_pullback_in(c, "a<=a", "a<=b", "b<=b", "a<=b")


def test_pseudofunctor_instance():
    P = arrow_pseudofunctor()
    fm = from_pseudofunctor(P)
    assert (fm.M.n_arrows(), fm.D.n_arrows(), len(fm.special)) == (8, 12, 48)
    G = grothendieck_unary(fm)
    fg = from_fibration(G)
    assert check_isomorphism(fm, unary_part(fg), *unary_embedding(fm, G)) == []


def test_broken_pseudofunctor():
    P = arrow_pseudofunctor()
    unit = {k: dict(v) for k, v in P.unit.items()}
    unit["1"]["p"] = "1p"  # 1p: p -> p, not p -> id^*p = q
    bad = Pseudofunctor(P.base, P.fibers, P.reindex, P.comp, unit)
    assert kinds(bad.check()) == ["PseudofunctorViolation"]
    with pytest.raises(InvalidInput):
        from_pseudofunctor(bad)


def test_strict_pseudofunctor():
    g = catalog.ring_category(2)
    ident = FinFunctor(g, g, lambda x: x, lambda a: a)
    P = Pseudofunctor.strict(arrow_category(), {"0": g, "1": g}, {"id0": ident, "id1": ident, "u": ident})
    assert P.check() == []
    fm = from_pseudofunctor(P)
    assert verify_axioms(fm) == []


def test_grothendieck_needs_unary():
    with pytest.raises(NotUnary):
        grothendieck_unary(inst("terminal", {}, 2))


def test_section_via():
    fm, _, s = family_instance(2, 2)
    ps, v = section_via(fm, inclusion_functor(fm), s)
    assert v == []
    assert all(fm.p(ps.arrow(f)) == f for f in fm.base.arrows())
    # sending every arrow to an identity breaks the section
    const = FinFunctor(fm.D, fm.M, lambda x: x, lambda t: fm.M.identity(fm.D.dom(t)))
    assert section_via(fm, const, s)[1] != []
