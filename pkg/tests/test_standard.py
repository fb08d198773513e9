import itertools

import pytest

from corpus import boolean_functions, inst
from fibmult import catalog
from fibmult import finset as fs
from fibmult.core.multicategory import verify_axioms
from fibmult.errors import BadParams, LawViolation
from fibmult.standard import (Family, FamilyArrow, FunctionPresentation, Reindex, SequentialPresentation,
                              TablePresentation, build_standard, check_extensivity, check_presentation,
                              family_split, family_split_assemble, gen_example, pullback_family,
                              standard_triangle)


def _whole(fm, a, x_vals):
    """Evaluate a family of functions on an assignment to its domain family."""
    pres = fm.info["presentation"]
    fib = [[i for i, j in enumerate(a.shape.positions()) if j == k] for k in range(len(a.cod.index))]
    return tuple(pres.eval(c, tuple(x_vals[i] for i in fib[k])) for k, c in enumerate(a.comps))


def test_presentation_laws():
    assert check_presentation(SequentialPresentation(catalog.ring_category(2)), 2) == []
    assert check_presentation(SequentialPresentation(catalog.left_zero_monoid()), 2) == []
    assert check_presentation(FunctionPresentation({"B": ["0", "1"]}), 2) == []


def test_tampered_table_presentation():
    t = TablePresentation.tabulate(SequentialPresentation(catalog.ring_category(2)), 2)
    s = next(s for s in t.arrows(("*", "*"), "*") if s.comps == ("0", "1"))
    t._act[(s, (1, 0))] = s
    assert {v.message for v in check_presentation(t, 2)} >= {"action not functorial"}
    with pytest.raises(LawViolation):
        build_standard(t, 2)


def test_extensivity_holds():
    for fm in [inst("terminal", {}, 2), inst("ring", {"n": 2}, 2), inst("ring", {"n": 3}, 2)]:
        assert check_extensivity(fm) == []


def test_split_assemble_round_trip():
    fm = inst("ring", {"n": 2}, 2)
    for a in fm.M.arrows():
        singles, back = family_split_assemble(fm, a)
        assert back == a and len(singles) == len(fm.over(fm.M.cod(a)))


def test_split_into_points():
    fm = inst("ring", {"n": 3}, 2)
    X = Family(fs.skeleton(2), ("*", "*"))
    a = FamilyArrow(fs.identity(fs.skeleton(2)), X, X,
                    tuple(fm.info["presentation"].arrows(("*",), "*")[k] for k in (2, 1)))
    assert [s.comps[0].comps for s in family_split(fm, a)] == [("2",), ("1",)]


def test_special_squares_semantically():
    # a special square restricts a family of functions along a pullback
    fm, _ = boolean_functions(2)
    checked = 0
    for s in fm.special:
        a, b, k = s.right, s.left, s.top.shape
        for u in itertools.product("01", repeat=len(a.dom.index)):
            x = tuple(u[i] for i in k.positions())
            out = _whole(fm, a, u)
            assert _whole(fm, b, x) == tuple(out[j] for j in s.bottom.shape.positions())
        checked += 1
    assert checked == len(fm.special) > 500


def test_triangle_duplicates_and_deletes_variables():
    fm, _ = boolean_functions(3)
    pres = fm.info["presentation"]
    one = fs.skeleton(1)
    Z = Family(one, ("B",))
    for n_x, n_y in [(3, 2), (2, 1), (2, 3), (0, 1)]:
        X, Y = Family(fs.skeleton(n_x), ("B",) * n_x), Family(fs.skeleton(n_y), ("B",) * n_y)
        for f in fm.base.hom(X.index, Y.index):
            assert pullback_family(f, Y) == X
            bang_x = fs.FinMap(X.index, one, ["1"] * n_x)
            bang_y = fs.FinMap(Y.index, one, ["1"] * n_y)
            for comps in pres.arrows(("B",) * n_x, "B")[:6]:
                a = FamilyArrow(bang_x, X, Z, (comps,))
                b = standard_triangle(pres, a, Reindex(f, X, Y), bang_y)
                for y in itertools.product("01", repeat=n_y):
                    assert _whole(fm, b, y) == _whole(fm, a, tuple(y[j] for j in f.positions()))


def test_generators_validate():
    with pytest.raises(BadParams):
        gen_example("nope")
    with pytest.raises(BadParams):
        gen_example("ring", {"n": 0})
    with pytest.raises(BadParams):
        gen_example("terminal", {}, -1)
    with pytest.raises(BadParams):
        gen_example("sequential", {"category": "Q"})
    bad = {"elements": ["0", "1"], "zero": "0", "one": "1",
           "add": {"0,0": "0", "0,1": "1", "1,0": "0", "1,1": "0"},
           "mul": {"0,0": "0", "0,1": "0", "1,0": "0", "1,1": "1"}}
    with pytest.raises(BadParams):
        gen_example("ring", {"table": bad})


def test_ring_from_table_matches_builtin():
    t = {"elements": ["0", "1"], "zero": "0", "one": "1",
         "add": {"0,0": "0", "0,1": "1", "1,0": "1", "1,1": "0"},
         "mul": {"0,0": "0", "0,1": "0", "1,0": "0", "1,1": "1"}}
    fm = gen_example("ring", {"table": t}, 2)
    assert len(fm.special) == len(inst("ring", {"n": 2}, 2).special) == 223
    assert fm.info["generator"] == {"name": "ring", "params": {"table": t}, "bound": 2}


def test_pseudo_identity():
    fm = gen_example("pseudo_identity", {}, 1)
    assert verify_axioms(fm) == []
    a = fm.info["pseudo_identity"]
    assert a.dom.index.label == "pt" and a.cod.index == fs.skeleton(1)
