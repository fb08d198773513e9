import itertools

import pytest
from hypothesis import given, strategies as st

from fibmult import finset as fs
from fibmult.errors import CodomainMismatch, ReservedLabel


@st.composite
def maps(draw, dom=None, cod=None, max_size=4):
    if dom is None:
        dom = fs.skeleton(draw(st.integers(0, max_size)))
    if cod is None:
        cod = fs.skeleton(draw(st.integers(1 if len(dom) else 0, max_size)))
    return fs.FinMap(dom, cod, draw(st.lists(st.sampled_from(cod.elements), min_size=len(dom), max_size=len(dom)))
                     if len(cod) else [])


@st.composite
def cospans(draw):
    J = fs.skeleton(draw(st.integers(1, 3)))
    return draw(maps(cod=J)), draw(maps(cod=J))


def test_reserved_labels():
    with pytest.raises(ReservedLabel):
        fs.FinSet("A", ["x|y"], user=True)
    with pytest.raises(ReservedLabel):
        fs.FinSet("A:1", ["x"], user=True)
    # internal constructions may use them
    assert "a|b" in fs.FinSet("P", ["a|b"])


def test_finset_basics():
    s = fs.FinSet("S", ["a", "b"])
    assert len(s) == 2 and s.index("b") == 1 and list(s) == ["a", "b"]
    assert s == fs.FinSet("S", ("a", "b")) and s != fs.FinSet("T", ["a", "b"])
    with pytest.raises(ValueError):
        fs.FinSet("S", ["a", "a"])
    assert fs.skeleton(3).elements == ("1", "2", "3") and len(fs.terminal()) == 1


def test_map_validation():
    s = fs.skeleton(2)
    with pytest.raises(ValueError):
        fs.FinMap(s, s, ["1"])
    with pytest.raises(ValueError):
        fs.FinMap(s, s, ["1", "3"])
    f = fs.FinMap(s, fs.skeleton(3), {"1": "3", "2": "1"})
    assert f("1") == "3" and f.positions() == (2, 0) and f.fiber("3") == ["1"]
    with pytest.raises(CodomainMismatch):
        fs.compose(f, f)


@given(maps())
def test_identity_laws(f):
    assert fs.compose(fs.identity(f.cod), f) == f == fs.compose(f, fs.identity(f.dom))


@given(st.data())
def test_composition_associative(data):
    f = data.draw(maps())
    g = data.draw(maps(dom=f.cod))
    h = data.draw(maps(dom=g.cod))
    assert fs.compose(h, fs.compose(g, f)) == fs.compose(fs.compose(h, g), f)


def test_map_counts():
    a, b = fs.skeleton(3), fs.skeleton(2)
    assert len(list(fs.all_maps(a, b))) == 8
    assert len(list(fs.all_maps(fs.skeleton(0), b))) == 1
    assert len(list(fs.all_bijections(a, a))) == 6
    assert list(fs.all_bijections(a, b)) == []


@given(maps(dom=fs.skeleton(3), cod=fs.skeleton(3)))
def test_inverse(f):
    if f.is_bijective():
        assert fs.compose(fs.inverse(f), f) == fs.identity(f.dom)
    else:
        with pytest.raises(ValueError):
            fs.inverse(f)


@given(cospans())
def test_chosen_pullback(fg):
    f, g = fg
    sq = fs.chosen_pullback(f, g)
    assert sq.commutes() and sq.is_pullback()
    # brute force: the apex counts compatible pairs
    assert len(sq.apex) == sum(f(x) == g(y) for x, y in itertools.product(f.dom, g.dom))
    for a in sq.apex:
        assert a == f"({sq.left(a)}|{sq.top(a)})"


@given(cospans())
def test_pullback_stable_under_apex_iso(fg):
    f, g = fg
    sq = fs.chosen_pullback(f, g)
    for perm in itertools.islice(fs.all_bijections(sq.apex, sq.apex), 6):
        assert fs.is_pullback(fs.compose(sq.top, perm), fs.compose(sq.left, perm), f, g)


def test_not_pullback():
    one, two = fs.skeleton(1), fs.skeleton(2)
    bang = fs.FinMap(two, one, ["1", "1"])
    # [1] with the diagonal misses the off-diagonal pairs
    d = fs.FinMap(one, two, ["1"])
    assert not fs.is_pullback(d, d, bang, bang)
    # a doubled apex is too big
    ap = fs.FinMap(two, one, ["1", "1"])
    assert not fs.is_pullback(ap, ap, fs.identity(one), fs.identity(one))


def test_sum_and_diagonal():
    total, (i, j) = fs.finite_sum([fs.skeleton(2), fs.skeleton(1)])
    assert total.elements == ("0:1", "0:2", "1:1") and j("1") == "1:1"
    f = fs.FinMap(fs.skeleton(3), fs.skeleton(2), ["1", "1", "2"])
    sq, diag = fs.diagonal_data(f)
    assert len(sq.apex) == 5
    assert fs.compose(sq.top, diag) == fs.identity(f.dom) == fs.compose(sq.left, diag)


def test_canonical_relabel():
    s = fs.FinSet("S", ["x", "y"])
    r = fs.canonical_relabel(s, fs.skeleton(2))
    assert r.images == ("1", "2")
    with pytest.raises(ValueError):
        fs.canonical_relabel(s, fs.skeleton(3))
