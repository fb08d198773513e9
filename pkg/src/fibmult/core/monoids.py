"""Endomorphisms, commuting endomorphisms, monoids and Eckmann-Hilton checks."""
from __future__ import annotations

from typing import NamedTuple

from ..errors import MissingProducts, NoLift, ShapeMismatch, AmbiguousLift
from ..fincat import classify_fibration
from ..violations import Violation
from .multicategory import pullback_square_with, special_lift


class Endomorphism(NamedTuple):
    """An M-arrow ``a`` with a parallel D-arrow ``t`` over the same base arrow."""

    a: object
    t: object


def check_endomorphism(fm, e):
    D, M = fm.D, fm.M
    if fm.d(e.t) != fm.p(e.a) or D.dom(e.t) != M.dom(e.a) or D.cod(e.t) != M.cod(e.a):
        raise ShapeMismatch(f"{e.t} is not parallel to {e.a} over the same base arrow")


def _transpose(fm, sq):
    return pullback_square_with(fm, sq.left, sq.top, sq.right, sq.bottom)


def commute_endomorphisms(fm, e1, e2, sq, lifted_completion):
    """Whether ``a b' == a' b`` for the reindexings along ``sq`` and its d-lift.

    ``sq`` has right side ``p(a)`` and bottom ``p(a')``; ``lifted_completion``
    is ``(k, l)`` with ``k: Z -> X`` over ``sq.top`` and ``l: Z -> X'`` over
    ``sq.left`` such that ``t k == t' l``.
    """
    check_endomorphism(fm, e1)
    check_endomorphism(fm, e2)
    D, M, d, p = fm.D, fm.M, fm.d, fm.p
    (a, t), (a2, t2) = e1, e2
    k, l = lifted_completion
    if M.cod(a) != M.cod(a2):
        raise ShapeMismatch("endomorphisms do not share a codomain")
    if sq.right != p(a) or sq.bottom != p(a2):
        raise ShapeMismatch("square does not complete the endomorphisms")
    if d(k) != sq.top or d(l) != sq.left or D.dom(k) != D.dom(l):
        raise ShapeMismatch("completion does not lie over the square")
    if D.cod(k) != M.dom(a) or D.cod(l) != M.dom(a2) or D.compose(t, k) != D.compose(t2, l):
        raise ShapeMismatch("completion does not commute with t, t'")
    b = special_lift(fm, a, sq, k, t2)
    b2 = special_lift(fm, a2, _transpose(fm, sq), l, t)
    return M.compose(a, b2) == M.compose(a2, b)


def commutation_choices(fm, e1, e2):
    """Every admissible ``(sq, (k, l))`` for the pair, over all pullbacks in the base."""
    D, M, p = fm.D, fm.M, fm.p
    (a, t), (a2, t2) = e1, e2
    x, x2 = M.dom(a), M.dom(a2)
    out = []
    for sq in fm.base.pullback_squares(p(a2), p(a)):
        for k in fm.d_lifts(sq.top, x):
            for l in fm.d_lifts(sq.left, x2):
                if D.dom(k) == D.dom(l) and D.compose(t, k) == D.compose(t2, l):
                    out.append((sq, (k, l)))
    return out


def commutation_flags(fm, e1, e2):
    """Flag for every admissible choice; independence means all are equal."""
    return [commute_endomorphisms(fm, e1, e2, sq, c) for sq, c in commutation_choices(fm, e1, e2)]


def endomorphisms_commute(fm, e1, e2):
    choices = commutation_choices(fm, e1, e2)
    if not choices:
        raise ShapeMismatch("no admissible pullback completion")
    sq, c = choices[0]
    return commute_endomorphisms(fm, e1, e2, sq, c)


# ----------------------------------------------------------------- monoids

class MonoidInM:
    """A section of d and a section of p agreeing on objects.

    Given by functions on base objects and arrows, memoized.
    """

    def __init__(self, fm, obj, t, a, name=""):
        self.fm = fm
        self.name = name
        self._obj, self._t, self._a = obj, t, a
        self._memo = {}

    def _get(self, tag, fn, key):
        k = (tag, key)
        if k not in self._memo:
            self._memo[k] = fn(key)
        return self._memo[k]

    def obj(self, i):
        return self._get("o", self._obj, i)

    def t(self, f):
        return self._get("t", self._t, f)

    def a(self, f):
        return self._get("a", self._a, f)

    def endo(self, f):
        return Endomorphism(self.a(f), self.t(f))

    def __repr__(self):
        return f"MonoidInM({self.name or '?'})"


def _base_arrows(base):
    for i in base.objects:
        for j in base.objects:
            yield from base.hom(i, j)


def verify_monoid(fm, mode, data=None):
    """Violations of the monoid conditions in one of three modes.

    ``in-M``: ``data`` is a ``MonoidInM``; ``fibered``: ``data`` is a fibered
    multicategory (default ``fm``) that should be a fibered monoid;
    ``morphism``: ``data`` is ``(m, m2, alpha)`` with ``alpha`` mapping base
    objects to vertical M-arrows.
    """
    if mode == "in-M":
        return _verify_in_m(fm, data)
    if mode == "fibered":
        return _verify_fibered(data if data is not None else fm)
    if mode == "morphism":
        return _verify_morphism(fm, *data)
    raise ValueError(f"unknown mode {mode!r}")


def _verify_in_m(fm, m):
    base, D, M, d, p = fm.base, fm.D, fm.M, fm.d, fm.p
    out = []
    for i in base.objects:
        x = m.obj(i)
        if fm.over(x) != i:
            out.append(Violation.of("SectionViolation", object=i, message="object not over base object"))
        if m.t(base.identity(i)) != D.identity(x) or m.a(base.identity(i)) != M.identity(x):
            out.append(Violation.of("SectionViolation", object=i, message="identity not preserved"))
    arrows = list(_base_arrows(base))
    for f in arrows:
        i, j = base.dom(f), base.cod(f)
        t, a = m.t(f), m.a(f)
        if d(t) != f or p(a) != f:
            out.append(Violation.of("SectionViolation", arrow=f, message="not a section"))
            continue
        if D.dom(t) != m.obj(i) or D.cod(t) != m.obj(j) or M.dom(a) != m.obj(i) or M.cod(a) != m.obj(j):
            out.append(Violation.of("SectionViolation", arrow=f, message="sections disagree on objects"))
    if out:
        return out
    by_dom = {}
    for f in arrows:
        by_dom.setdefault(base.dom(f), []).append(f)
    for f in arrows:
        for g in by_dom.get(base.cod(f), ()):
            gf = base.compose(g, f)
            if m.t(gf) != D.compose(m.t(g), m.t(f)):
                out.append(Violation.of("FunctorialityViolation", g=g, f=f, section="d"))
            if m.a(gf) != M.compose(m.a(g), m.a(f)):
                out.append(Violation.of("FunctorialityViolation", g=g, f=f, section="p"))
    seen = set()
    for f in arrows:
        for right in arrows:
            if base.cod(right) != base.cod(f) or (f, right) in seen:
                continue
            seen.add((f, right))
            for sq in base.pullback_squares(f, right):
                try:
                    left = special_lift(fm, m.a(right), sq, m.t(sq.top), m.t(f))
                except (NoLift, AmbiguousLift, ShapeMismatch) as e:
                    out.append(Violation.of("SpecialViolation", bottom=f, right=right, top=sq.top,
                                            message=str(e)))
                    continue
                if left != m.a(sq.left):
                    out.append(Violation.of("SpecialViolation", bottom=f, right=right, top=sq.top,
                                            left=sq.left, message="pullback not lifted to a special square"))
    return out


def _verify_fibered(fm):
    out = []
    drep = classify_fibration(fm.d, check_functor=False)
    if not drep.is_fibration_in_groupoids:
        out.append(Violation.of("FibrationViolation", functor="d", message="not a fibration in groupoids"))
    prep = classify_fibration(fm.p, check_functor=False)
    if not prep.is_discrete_opfibration:
        for w in prep.witnesses:
            if w.kind == "DiscreteOpfibrationViolation":
                out.append(Violation("OpfibrationViolation", w.config, w.message))
    if out or not drep.is_discrete_fibration:
        return out
    base = fm.base
    opl = fm.p.lifts_by_dom()
    D, M = fm.D, fm.M
    for sq in _all_pullbacks(base):
        for x in fm.d.objects_over(base.dom(sq.right)):
            (v1,) = opl[(sq.right, x)]
            (u,) = fm.d_lifts(sq.top, x)
            (w1,) = opl[(sq.left, D.dom(u))]
            (v,) = fm.d_lifts(sq.bottom, M.cod(v1))
            if M.cod(w1) != D.dom(v):
                out.append(Violation.of("CoherenceViolation", object=x, top=sq.top, left=sq.left,
                                        bottom=sq.bottom, right=sq.right,
                                        message="the two paths end at different objects"))
    return out


def _all_pullbacks(base):
    arrows = list(_base_arrows(base))
    for f in arrows:
        for g in arrows:
            if base.cod(f) == base.cod(g):
                yield from base.pullback_squares(f, g)


def _verify_morphism(fm, m1, m2, alpha):
    base, M = fm.base, fm.M
    out = []
    for i in base.objects:
        al = alpha[i]
        if M.dom(al) != m1.obj(i) or M.cod(al) != m2.obj(i) or fm.p(al) != base.identity(i):
            out.append(Violation.of("MorphismViolation", object=i, message="component is not vertical"))
    if out:
        return out
    for f in _base_arrows(base):
        i, j = base.dom(f), base.cod(f)
        sq = pullback_square_with(fm, f, base.identity(i), f, base.identity(j))
        try:
            left = special_lift(fm, alpha[j], sq, m1.t(f), m2.t(f))
        except (NoLift, AmbiguousLift, ShapeMismatch) as e:
            out.append(Violation.of("MorphismViolation", arrow=f, message=str(e)))
            continue
        if left != alpha[i]:
            out.append(Violation.of("MorphismViolation", arrow=f, message="square not special"))
        if M.compose(alpha[j], m1.a(f)) != M.compose(m2.a(f), alpha[i]):
            out.append(Violation.of("MorphismViolation", arrow=f, message="square does not commute"))
    return out


# ----------------------------------------------------------- Eckmann-Hilton

def _bang(base, i):
    one = base.terminal()
    if one is None:
        raise MissingProducts("base has no terminal object")
    (f,) = base.hom(i, one)
    return f


def eckmann_hilton(fm, m1, m2, i):
    """Flags for the two collapse propositions over the base object ``i``."""
    base = fm.base
    bang = _bang(base, i)
    try:
        sq, delta = base.diagonal(bang)
    except Exception as e:  # bound too small for I x I
        raise MissingProducts(f"no I x I for {i}: {e}") from None
    e_bang1, e_bang2 = m1.endo(bang), m2.endo(bang)
    e_d1, e_d2 = m1.endo(delta), m2.endo(delta)
    shared = e_d1 == e_d2
    same_obj = m1.obj(base.cod(bang)) == m2.obj(base.cod(bang))
    commuting = same_obj and endomorphisms_commute(fm, e_bang1, e_bang2)
    delta_commuting = (m1.obj(sq.apex) == m2.obj(sq.apex)) and endomorphisms_commute(fm, e_d1, e_d2)
    collapse = e_bang1.a == e_bang2.a
    ident = e_d1.a == e_d2.a
    return {
        "shared_identity": shared,
        "commuting": commuting,
        "collapse_over_I": collapse,
        "delta_commuting": delta_commuting,
        "identities_coincide": ident,
        "collapse_sound": (not (shared and commuting)) or collapse,
        "identity_sound": (not delta_commuting) or ident,
    }
