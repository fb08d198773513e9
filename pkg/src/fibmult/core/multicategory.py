"""Fibered multicategories: data, unique special lifting and the axiom check."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .. import kernels
from ..errors import AmbiguousLift, InvalidInput, NoLift, NotIso, ShapeMismatch
from ..fincat import classify_fibration
from ..violations import Violation


class SpecialSquare(NamedTuple):
    """``top: U -> X`` and ``bottom: V -> Y`` in D, ``right: X -> Y`` and
    ``left: U -> V`` in M."""

    top: object
    bottom: object
    right: object
    left: object


class FiberedMulticategory:
    """The data ``(d, p, sp(M, D))`` over a base with pullbacks.

    Special squares are either given extensionally (``special``) or by a
    ``lift_rule(a, square, top, bottom) -> left`` that is evaluated lazily over
    every lifting problem and memoized.
    """

    def __init__(self, base, D, M, d, p, special=None, *, lift_rule=None, name="", info=None):
        if special is None and lift_rule is None:
            raise InvalidInput("need special squares or a lift rule")
        self.base = base
        self.D = D
        self.M = M
        self.d = d
        self.p = p
        self.name = name
        self.info = dict(info or {})
        self.lift_rule = lift_rule
        self._special = None if special is None else tuple(dict.fromkeys(SpecialSquare(*s) for s in special))
        self._index = None
        self._members = None

    @property
    def objects(self):
        return self.M.objects

    def over(self, x):
        return self.d.ob(x)

    @property
    def bound(self):
        return getattr(self.base, "size_bound", None)

    # -------------------------------------------------------------- squares

    @property
    def special(self):
        if self._special is None:
            out = []
            for a, sq, top, bottom in lifting_problems(self):
                out.append(SpecialSquare(top, bottom, a, self.lift_rule(a, sq, top, bottom)))
            self._special = tuple(dict.fromkeys(out))
        return self._special

    def square_index(self):
        """``(top, bottom, right, p(left)) -> [left, ...]``."""
        if self._index is None:
            idx = {}
            p = self.p
            for s in self.special:
                idx.setdefault((s.top, s.bottom, s.right, p(s.left)), []).append(s.left)
            self._index = idx
        return self._index

    def is_special(self, top, bottom, right, left):
        if self._members is None:
            self._members = set(self.special)
        return SpecialSquare(top, bottom, right, left) in self._members

    def base_square(self, s):
        d, p = self.d, self.p
        return d(s.top), p(s.left), d(s.bottom), p(s.right)

    def d_lifts(self, f, y):
        return self.d.lifts_by_cod().get((f, y), [])

    def with_special(self, special, name=None):
        """Same data with a replaced square set (used for mutants)."""
        fm = FiberedMulticategory(self.base, self.D, self.M, self.d, self.p, special,
                                  name=name or self.name, info=self.info)
        return fm

    def __repr__(self):
        return f"FiberedMulticategory({self.name or '?'} over {getattr(self.base, 'name', '?')})"


def lifting_problems(fm):
    """Every ``(a, pullback square with right side p(a), top lift, bottom lift)``."""
    base, M, p = fm.base, fm.M, fm.p
    by_cod = fm.d.lifts_by_cod()
    objs = base.objects
    for a in M.arrows():
        x, y = M.dom(a), M.cod(a)
        pa = p(a)
        j = base.cod(pa)
        for l_obj in objs:
            for f in base.hom(l_obj, j):
                bottoms = by_cod.get((f, y))
                if not bottoms:
                    continue
                for sq in base.pullback_squares(f, pa):
                    tops = by_cod.get((sq.top, x))
                    if not tops:
                        continue
                    for top in tops:
                        for bottom in bottoms:
                            yield a, sq, top, bottom


# ------------------------------------------------------------- verification

def _shape_violations(fm):
    out = []
    D, M, d, p, base = fm.D, fm.M, fm.d, fm.p, fm.base
    if set(D.objects) != set(M.objects):
        out.append(Violation.of("ShapeViolation", message="obj D != obj M"))
    for x in M.objects:
        if d.ob(x) != p.ob(x):
            out.append(Violation.of("ShapeViolation", object=x, message="d and p disagree on objects"))
    for s in fm.special:
        top, bottom, right, left = s
        ok = (D.cod(top) == M.dom(right) and D.cod(bottom) == M.cod(right)
              and M.dom(left) == D.dom(top) and M.cod(left) == D.dom(bottom))
        if not ok:
            out.append(Violation.of("ShapeViolation", top=top, bottom=bottom, right=right, left=left,
                                    message="square sides do not match up"))
            continue
        if not base.is_pullback(d(top), p(left), d(bottom), p(right)):
            out.append(Violation.of("ShapeViolation", top=top, bottom=bottom, right=right, left=left,
                                    message="square does not project to a pullback"))
    return out


class _Encoding:
    """Integer encoding of D, M, base arrows and the special squares."""

    def __init__(self, fm):
        D, M = fm.D, fm.M
        self.d_arrows = list(D.arrows())
        self.m_arrows = list(M.arrows())
        self.dpos = {a: i for i, a in enumerate(self.d_arrows)}
        self.mpos = {a: i for i, a in enumerate(self.m_arrows)}
        base_arrows = {}
        for a in self.m_arrows:
            base_arrows.setdefault(fm.p(a), len(base_arrows))
        self.bpos = base_arrows
        self.nD, self.nM, self.nB = len(self.d_arrows), len(self.m_arrows), len(base_arrows)

    def d_table(self, D):
        n = self.nD
        t = np.full((n, n), -1, dtype=np.int32)
        pos = self.dpos
        by_cod = {}
        for a in self.d_arrows:
            by_cod.setdefault(D.cod(a), []).append(a)
        for g in self.d_arrows:
            for f in by_cod.get(D.dom(g), ()):
                t[pos[g], pos[f]] = pos[D.compose(g, f)]
        return t

    def m_table(self, M):
        """Sparse composition: ``comp[off[g] + lin[f]] = g . f`` for composable pairs."""
        pos = self.mpos
        off = np.zeros(self.nM, dtype=np.int64)
        lin = np.zeros(self.nM, dtype=np.int64)
        comp = []
        for y in M.objects:
            ins = list(M.in_arrows(y))
            for k, f in enumerate(ins):
                lin[pos[f]] = k
            for g in M.out_arrows(y):
                off[pos[g]] = len(comp)
                comp.extend(pos[M.compose(g, f)] for f in ins)
        return np.array(comp, dtype=np.int64), off, lin


def verify_axioms(fm, *, fibration_report=None):
    """Empty list iff ``fm`` is a fibered multicategory (within the base universe).

    Checked: shape, d a fibration in groupoids, unique special lifting for
    every lifting problem, identity squares, horizontal and vertical closure.
    Closure is only tested among squares whose lifting problem is sound, so
    a broken configuration is reported once, at its root.
    """
    out = _shape_violations(fm)
    if out:
        return out
    rep = fibration_report or classify_fibration(fm.d, check_functor=False)
    if not rep.is_fibration_in_groupoids:
        for w in rep.witnesses:
            if w.kind in ("MissingCartesianLift", "NonCartesianArrow"):
                out.append(Violation("FibrationViolation", w.config, w.kind))
    idx = fm.square_index()
    p = fm.p
    bad = set()
    seen = set()
    for a, sq, top, bottom in lifting_problems(fm):
        key = (top, bottom, a, sq.left)
        seen.add(key)
        lefts = idx.get(key, ())
        if len(lefts) == 1:
            continue
        bad.add(key)
        kind = "ExistenceViolation" if not lefts else "UniquenessViolation"
        out.append(Violation.of(kind, right=a, top=top, bottom=bottom, base_left=sq.left,
                                lefts="[" + ", ".join(map(str, lefts)) + "]"))
    for key in idx:
        if key not in seen:
            out.append(Violation.of("ShapeViolation", top=key[0], bottom=key[1], right=key[2],
                                    message="special square outside every lifting problem"))
    out.extend(_identity_violations(fm, bad))
    out.extend(_closure_violations(fm, bad))
    return out


def _identity_violations(fm, bad):
    out = []
    D, M, p, d = fm.D, fm.M, fm.p, fm.d
    idx = fm.square_index()
    for a in M.arrows():
        x, y = M.dom(a), M.cod(a)
        key = (D.identity(x), D.identity(y), a, p(a))
        if key in bad:
            continue
        if idx.get(key) != [a]:
            out.append(Violation.of("IdentityViolation", arrow=a, message="horizontal identity square not special"))
    for f in D.arrows():
        u, x = D.dom(f), D.cod(f)
        key = (f, f, M.identity(x), p(M.identity(u)))
        if key in bad:
            continue
        if idx.get(key) != [M.identity(u)]:
            out.append(Violation.of("IdentityViolation", arrow=f, message="vertical identity square not special"))
    return out


def _closure_violations(fm, bad):
    D, M, p = fm.D, fm.M, fm.p
    enc = _Encoding(fm)
    dpos, mpos, bpos = enc.dpos, enc.mpos, enc.bpos
    idx = fm.square_index()
    good = [s for s in fm.special if (s.top, s.bottom, s.right, p(s.left)) not in bad]
    sq = np.array([(dpos[s.top], dpos[s.bottom], mpos[s.right], mpos[s.left]) for s in good],
                  dtype=np.int64).reshape(-1, 4)
    m_base = np.array([bpos.get(p(a), -1) for a in enc.m_arrows], dtype=np.int64)
    # lift table: sorted keys -> left
    keys, vals = [], []
    badkeys = []
    nD, nM, nB = enc.nD, enc.nM, enc.nB
    for (top, bottom, right, g), lefts in idx.items():
        if g in bpos and (top, bottom, right, g) not in bad:
            keys.append(((dpos[top] * nD + dpos[bottom]) * nM + mpos[right]) * nB + bpos[g])
            vals.append(mpos[lefts[0]])
    for top, bottom, right, g in bad:
        if g in bpos:
            badkeys.append(((dpos[top] * nD + dpos[bottom]) * nM + mpos[right]) * nB + bpos[g])
    order = np.argsort(np.array(keys, dtype=np.int64), kind="stable")
    keys = np.array(keys, dtype=np.int64)[order]
    vals = np.array(vals, dtype=np.int64)[order]
    badkeys = np.sort(np.array(badkeys, dtype=np.int64))
    dtab = enc.d_table(D)
    out = []
    for i, j in kernels.horizontal_closure(sq, dtab, m_base, keys, vals, badkeys, nD, nM, nB):
        s1, s2 = good[i], good[j]
        out.append(Violation.of("ClosureViolation", direction="horizontal",
                                first=square_str(s1), second=square_str(s2)))
    mcomp, m_off, m_lin = enc.m_table(M)
    for i, j in kernels.vertical_closure(sq, mcomp, m_off, m_lin, m_base, keys, vals, badkeys,
                                         nD, nM, nB):
        s1, s2 = good[i], good[j]
        out.append(Violation.of("ClosureViolation", direction="vertical",
                                first=square_str(s1), second=square_str(s2)))
    return out


# ------------------------------------------------------------- operations

def special_lift(fm, a, sq, lift_top, lift_bottom):
    """The unique ``b`` making ``(lift_top, lift_bottom, a, b)`` special."""
    d, p, base = fm.d, fm.p, fm.base
    if sq.right != p(a) or d(lift_top) != sq.top or d(lift_bottom) != sq.bottom:
        raise ShapeMismatch("lifts and square do not match the arrow")
    if fm.D.cod(lift_top) != fm.M.dom(a) or fm.D.cod(lift_bottom) != fm.M.cod(a):
        raise ShapeMismatch("lifts do not end at the arrow's ends")
    if fm._special is None and fm.lift_rule is not None:
        if not base.is_pullback(sq.top, sq.left, sq.bottom, sq.right):
            raise ShapeMismatch("square is not a pullback")
        return fm.lift_rule(a, sq, lift_top, lift_bottom)
    lefts = fm.square_index().get((lift_top, lift_bottom, a, sq.left), [])
    if not lefts:
        raise NoLift(f"no special square over {sq} for {a}")
    if len(lefts) > 1:
        raise AmbiguousLift(f"{len(lefts)} special squares over {sq} for {a}")
    return lefts[0]


def reindex_along(fm, a, sq):
    """``f^*a`` along a pullback square using the first d-lifts."""
    tops = fm.d_lifts(sq.top, fm.M.dom(a))
    bottoms = fm.d_lifts(sq.bottom, fm.M.cod(a))
    if not tops or not bottoms:
        raise NoLift("missing d-lift")
    return special_lift(fm, a, sq, tops[0], bottoms[0])


def pullback_square_with(fm, top, left, bottom, right):
    """The base ``PullbackSquare`` record with the given sides."""
    for sq in fm.base.pullback_squares(bottom, right):
        if sq.top == top and sq.left == left:
            return sq
    raise ShapeMismatch("not a pullback square in the base universe")


def symmetry_action(fm, y, g):
    """The bijection ``M(X, Y) -> M(U, Y)``, ``a -> g^*a``, for an iso ``g: U -> X`` in D."""
    D, M, base, d, p = fm.D, fm.M, fm.base, fm.d, fm.p
    ginv = D.inverse(g)
    if ginv is None:
        raise NotIso(f"{g} is not invertible in D")
    sigma = d(g)
    u, x = D.dom(g), D.cod(g)
    idy = D.identity(y)
    jy = fm.over(y)
    out = {}
    for a in M.hom(x, y):
        pa = p(a)
        sq = pullback_square_with(fm, sigma, base.compose(pa, sigma), base.identity(jy), pa)
        out[a] = special_lift(fm, a, sq, g, idy)
    return out


def square_str(s):
    """Compact witness rendering ``top | bottom | right | left``."""
    return " | ".join(map(str, s))


def identity_square(fm, a):
    D, M = fm.D, fm.M
    return SpecialSquare(D.identity(M.dom(a)), D.identity(M.cod(a)), a, a)
