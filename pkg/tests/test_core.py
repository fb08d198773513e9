import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corpus import inst
from fibmult import finset as fs
from fibmult import kernels
from fibmult.core import ExplicitBase, FinSetBase, arrow_category
from fibmult.core.multicategory import (identity_square, pullback_square_with, reindex_along, special_lift,
                                        symmetry_action, verify_axioms)
from fibmult.errors import BoundTooSmall, NoLift, NotIso, ShapeMismatch
from fibmult.standard import Family, Reindex
from fibmult.violations import kinds


def wrong_left(fm):
    """Replace one left side by another arrow over the same base map."""
    D, M, p = fm.D, fm.M, fm.p
    sp = list(fm.special)
    for k, s in enumerate(sp):
        if s.top == D.identity(D.dom(s.top)) or s.bottom == D.identity(D.dom(s.bottom)):
            continue
        alts = [b for b in M.hom(M.dom(s.left), M.cod(s.left)) if p(b) == p(s.left) and b != s.left]
        if alts:
            return fm.with_special(sp[:k] + [s._replace(left=alts[0])] + sp[k + 1:], name="wrong-left")
    raise AssertionError("no square with an alternative left side")


# ----------------------------------------------------------------- bases

def test_finset_base_universe():
    b = FinSetBase(3)
    assert [len(s) for s in b.objects] == [0, 1, 2, 3]
    assert b.describe() == {"kind": "finset", "size_bound": 3}
    assert len(b.hom(fs.skeleton(3), fs.skeleton(2))) == 8
    with pytest.raises(BoundTooSmall):
        FinSetBase(1, extra=[fs.FinSet("S", "ab")])
    with pytest.raises(BoundTooSmall):
        FinSetBase(-1)


def test_pullback_squares_all_apexes():
    b = FinSetBase(2, extra=[fs.FinSet("S", "ab")])
    bang = fs.FinMap(fs.skeleton(2), fs.skeleton(1), ["1", "1"])
    one = fs.identity(fs.skeleton(1))
    # apex of size 2: two skeletal orderings plus two on the extra set
    assert len(b.pullback_squares(bang, one)) == 4
    assert all(sq.is_pullback() for sq in b.pullback_squares(bang, one))
    assert b.pullback_squares(bang, bang) == ()
    with pytest.raises(BoundTooSmall):
        b.chosen_pullback(bang, bang)


def test_explicit_base_pullbacks():
    b = ExplicitBase(arrow_category())
    # u along u pulls back to 0 with identity legs; id1 along u to u
    assert [(sq.apex, sq.top, sq.left) for sq in b.pullback_squares("u", "u")] == [("0", "id0", "id0")]
    assert [(sq.apex, sq.top, sq.left) for sq in b.pullback_squares("id1", "u")] == [("0", "id0", "u")]
    assert b.terminal() == "1"
    assert b.diagonal("u")[1] == "id0"


# ---------------------------------------------------------- multicategory

def test_instance_sizes():
    fm = inst("ring", {"n": 2}, 2)
    assert (len(fm.objects), fm.D.n_arrows(), fm.M.n_arrows(), len(fm.special)) == (3, 11, 29, 223)
    fm = inst("terminal", {}, 2)
    assert (len(fm.objects), fm.D.n_arrows(), fm.M.n_arrows(), len(fm.special)) == (3, 11, 11, 74)


def test_identity_squares_are_special():
    fm = inst("ring", {"n": 2}, 2)
    assert all(fm.is_special(*identity_square(fm, a)) for a in fm.M.arrows())


def test_reindex_matches_square_index():
    fm = inst("ring", {"n": 2}, 2)
    for s in fm.special[:40]:
        sq = pullback_square_with(fm, fm.d(s.top), fm.p(s.left), fm.d(s.bottom), fm.p(s.right))
        assert special_lift(fm, s.right, sq, s.top, s.bottom) == s.left
        assert fm.p(reindex_along(fm, s.right, sq)) == fm.p(s.left)


def test_special_lift_errors():
    fm = inst("ring", {"n": 2}, 2)
    s = next(s for s in fm.special if fm.d(s.top) != fm.d(s.bottom))
    sq = pullback_square_with(fm, fm.d(s.top), fm.p(s.left), fm.d(s.bottom), fm.p(s.right))
    with pytest.raises(ShapeMismatch):
        special_lift(fm, s.right, sq, s.bottom, s.top)
    ext = fm.with_special([t for t in fm.special if t != s])
    with pytest.raises(NoLift):
        special_lift(ext, s.right, sq, s.top, s.bottom)


def test_symmetry_action_swaps_inputs():
    fm = inst("ring", {"n": 2}, 2)
    X, Y = Family(fs.skeleton(2), ("*", "*")), Family(fs.skeleton(1), ("*",))
    g = Reindex(fs.FinMap(fs.skeleton(2), fs.skeleton(2), ["2", "1"]), X, X)
    sigma = symmetry_action(fm, Y, g)
    assert {a.comps[0].comps: b.comps[0].comps for a, b in sigma.items()} == {
        ("0", "0"): ("0", "0"), ("0", "1"): ("1", "0"), ("1", "0"): ("0", "1"), ("1", "1"): ("1", "1")}
    assert all(sigma[sigma[a]] == a for a in sigma)
    e = Reindex(fs.identity(fs.skeleton(2)), X, X)
    assert all(b == a for a, b in symmetry_action(fm, Y, e).items())


def test_symmetry_action_needs_iso():
    fm = inst("ring", {"n": 2}, 2)
    X, Y = Family(fs.skeleton(2), ("*", "*")), Family(fs.skeleton(1), ("*",))
    g = Reindex(fs.FinMap(fs.skeleton(2), fs.skeleton(1), ["1", "1"]), X, Y)
    with pytest.raises(NotIso):
        symmetry_action(fm, Y, g)


def test_wrong_left_breaks_closure_only():
    v = verify_axioms(wrong_left(inst("ring", {"n": 2}, 2)))
    assert "ClosureViolation" in kinds(v)
    assert not {"ExistenceViolation", "UniquenessViolation"} & set(kinds(v))


def test_shape_violation():
    fm = inst("terminal", {}, 2)
    s = next(s for s in fm.special if fm.d(s.top) != fm.d(s.bottom))
    # swapping top and bottom of a non-trivial square breaks the shape
    assert kinds(verify_axioms(fm.with_special(list(fm.special) + [s._replace(top=s.bottom, bottom=s.top)]))) \
        == ["ShapeViolation"]


# ---------------------------------------------------------------- kernels

@pytest.mark.parametrize("mutate", [lambda fm: fm, wrong_left])
def test_backends_agree_on_axioms(monkeypatch, mutate):
    fm = mutate(inst("ring", {"n": 2}, 2))
    fast = verify_axioms(fm)
    for name in ("horizontal_closure", "vertical_closure", "associativity_violations"):
        monkeypatch.setattr(kernels, name, getattr(kernels.python, name))
    assert verify_axioms(fm) == fast


@pytest.mark.skipif(kernels.compiled is None, reason="extension not built")
@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.data())
def test_associativity_kernel_twins(n, data):
    # one object, arrow 0 the identity, the rest composed at random
    rows = data.draw(st.lists(st.lists(st.integers(0, n - 1), min_size=n - 1, max_size=n - 1),
                              min_size=n - 1, max_size=n - 1))
    t = np.zeros((n, n), dtype=np.int32)
    t[0, :] = t[:, 0] = np.arange(n)
    t[1:, 1:] = np.array(rows, dtype=np.int32)
    z = np.zeros(n, dtype=np.int32)
    ids = np.array([0], dtype=np.int32)
    got = kernels.compiled.associativity_violations(t, z, z, 1, ids, 10 ** 6)
    assert list(map(tuple, got)) == list(map(tuple, kernels.python.associativity_violations(t, z, z, 1, ids, 10 ** 6)))


def test_pure_backend_selected_by_env():
    env = dict(os.environ, FIBMULT_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from fibmult import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
