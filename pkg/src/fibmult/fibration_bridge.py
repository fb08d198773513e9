"""Fibered categories as fibered multicategories, and back.

``from_fibration`` takes D to be the cartesian arrows of a fibration;
``grothendieck_unary`` turns a unary fibered multicategory (every M-arrow
over a base iso) into a fibration via a computed cleavage.
"""
from __future__ import annotations

import itertools
from typing import NamedTuple

from . import finset as fs
from .core.base import ExplicitBase, FinSetBase
from .core.multicategory import FiberedMulticategory, special_lift, pullback_square_with
from .errors import InvalidInput, NoLift, NotAFibration, NotUnary, ShapeMismatch
from .fincat import Category, FinFunctor, RuleCategory, classify_fibration, is_cartesian, validate_functor
from .violations import Violation


def _as_base(cat):
    if isinstance(cat, (FinSetBase, ExplicitBase)):
        return cat
    return ExplicitBase(cat)


class _Sub(Category):
    """Wide subcategory of ``cat`` on the arrows satisfying ``keep``."""

    def __init__(self, cat, keep, name=""):
        self.cat = cat
        self.objects = cat.objects
        self.name = name
        self._keep = keep
        self._hom = {}

    def hom(self, x, y):
        h = self._hom.get((x, y))
        if h is None:
            h = self._hom[(x, y)] = tuple(a for a in self.cat.hom(x, y) if self._keep(a))
        return h

    def dom(self, a):
        return self.cat.dom(a)

    def cod(self, a):
        return self.cat.cod(a)

    def identity(self, x):
        return self.cat.identity(x)

    def compose(self, g, f):
        return self.cat.compose(g, f)


def from_fibration(p, *, report=None, name=None):
    """The fibered multicategory of a fibration ``p: E -> B``."""
    rep = report or classify_fibration(p)
    if not rep.is_fibration:
        raise NotAFibration(f"{getattr(p, 'name', 'functor')} is not a fibration")
    E = p.dom
    base = _as_base(p.cod)
    cart = {a: is_cartesian(p, a) for a in E.arrows()}
    D = _Sub(E, cart.__getitem__, name="cart")
    d = FinFunctor(D, base, p.ob, p, name="d")
    q = FinFunctor(E, base, p.ob, p, name="p")
    over = {}
    for a in E.arrows():
        over.setdefault((E.dom(a), E.cod(a), p(a)), []).append(a)

    def lift_rule(a, sq, top, bottom):
        target = E.compose(a, top)
        u, v = E.dom(top), E.dom(bottom)
        found = [b for b in over.get((u, v, sq.left), ()) if E.compose(bottom, b) == target]
        if len(found) != 1:
            raise NoLift(f"{len(found)} factorizations of {target} through {bottom}")
        return found[0]

    return FiberedMulticategory(base, D, E, d, q, lift_rule=lift_rule,
                                name=name or f"fib({getattr(p, 'name', '?')})",
                                info={"kind": "from_fibration", "fibration": p})


def inclusion_functor(fm):
    """``D -> M`` for instances produced by ``from_fibration``."""
    return FinFunctor(fm.D, fm.M, lambda x: x, lambda a: a, name="incl")


def section_via(fm, F, s):
    """The p-section ``F . s`` of a d-section ``s`` and its violations."""
    from .cartesian import DSection, check_section
    check_section(fm, s)
    base, M, p = fm.base, fm.M, fm.p
    ps = DSection(s.obj, lambda f: F(s.arrow(f)), name=f"{getattr(F, 'name', 'F')}.{s.name}")
    out = []
    for f in base.arrows():
        a = ps.arrow(f)
        if p(a) != f or M.dom(a) != s.obj(base.dom(f)) or M.cod(a) != s.obj(base.cod(f)):
            out.append(Violation.of("SectionViolation", arrow=f, image=a, message="not over the base arrow"))
            continue
        for g in base.out_arrows(base.cod(f)):
            if ps.arrow(base.compose(g, f)) != M.compose(ps.arrow(g), a):
                out.append(Violation.of("FunctorialityViolation", g=g, f=f))
    return ps, out


# ------------------------------------------------------------- fibchar

def is_pullback_in(M, top, left, bottom, right):
    """Pullback test inside a finite category by counting cones from every object."""
    if M.compose(right, top) != M.compose(bottom, left):
        return False
    u, x, v = M.dom(top), M.cod(top), M.cod(left)
    for w in M.objects:
        hx = M.hom(w, x)
        hv = M.hom(w, v)
        hu = M.hom(w, u)
        cx, cv = {}, {}
        for a in hx:
            k = M.compose(right, a)
            cx[k] = cx.get(k, 0) + 1
        for b in hv:
            k = M.compose(bottom, b)
            cv[k] = cv.get(k, 0) + 1
        cones = sum(n * cv.get(k, 0) for k, n in cx.items())
        images = {(M.compose(top, c), M.compose(left, c)) for c in hu}
        if len(images) != len(hu) or len(hu) != cones:
            return False
    return True


class FibcharReport(NamedTuple):
    hypothesis: bool
    conclusion: bool
    failed_square: object
    non_cartesian: object

    @property
    def sound(self):
        return (not self.hypothesis) or self.conclusion


def fibchar_check(fm, F):
    """Hypothesis: F sends special squares to pullbacks; conclusion: every F(f) is p-cartesian."""
    D, M = fm.D, fm.M
    for x in D.objects:
        if F.ob(x) != x:
            raise ShapeMismatch("F is not the identity on objects")
    for t in D.arrows():
        a = F(t)
        if fm.p(a) != fm.d(t) or M.dom(a) != D.dom(t) or M.cod(a) != D.cod(t):
            raise ShapeMismatch(f"F({t}) is not over d({t})")
    failed = None
    for s in fm.special:
        if not is_pullback_in(M, F(s.top), s.left, F(s.bottom), s.right):
            failed = s
            break
    bad = None
    for t in D.arrows():
        if not is_cartesian(fm.p, F(t)):
            bad = t
            break
    return FibcharReport(failed is None, bad is None, failed, bad)


def candidate_functors(fm, limit=None):
    """Identity-on-objects functors ``D -> M`` over the base, by backtracking."""
    D, M, d, p = fm.D, fm.M, fm.d, fm.p
    darrows = list(D.arrows())
    ids = {D.identity(x): M.identity(x) for x in D.objects}
    choices = []
    for t in darrows:
        if t in ids:
            choices.append([ids[t]])
        else:
            choices.append([a for a in M.hom(D.dom(t), D.cod(t)) if p(a) == d(t)])
    pos = {t: k for k, t in enumerate(darrows)}
    checks = [[] for _ in darrows]
    for g in darrows:
        for f in D.in_arrows(D.dom(g)):
            h = D.compose(g, f)
            last = max(pos[g], pos[f], pos[h])
            checks[last].append((g, f, h))
    assign = {}
    found = []

    def rec(k):
        if limit is not None and len(found) >= limit:
            return
        if k == len(darrows):
            found.append(FinFunctor(D, M, lambda x: x, dict(assign), name=f"F{len(found)}"))
            return
        t = darrows[k]
        for a in choices[k]:
            assign[t] = a
            if all(assign[h] == M.compose(assign[g], assign[f]) for g, f, h in checks[k]):
                rec(k + 1)
            del assign[t]

    rec(0)
    return found


# ------------------------------------------------------------ pseudofunctors

class Pseudofunctor:
    """A pseudofunctor ``B^op -> Cat`` on a finite base.

    ``reindex[f]`` is a functor ``fibers[J] -> fibers[I]`` for ``f: I -> J``;
    ``comp[(g, f)][Z]: f^* g^* Z -> (gf)^* Z`` and ``unit[I][X]: X -> id^* X``.
    """

    def __init__(self, base, fibers, reindex, comp, unit, name="P"):
        self.base = base
        self.fibers = dict(fibers)
        self.reindex = dict(reindex)
        self.comp = {k: dict(v) for k, v in comp.items()}
        self.unit = {k: dict(v) for k, v in unit.items()}
        self.name = name

    @classmethod
    def strict(cls, base, fibers, reindex, name="P"):
        """Identity coherence isos; only valid when the reindexings compose strictly."""
        comp, unit = {}, {}
        for g in base.arrows():
            for f in base.in_arrows(base.dom(g)):
                i = base.dom(f)
                fg = base.compose(g, f)
                comp[(g, f)] = {z: fibers[i].identity(reindex[fg].ob(z)) for z in fibers[base.cod(g)].objects}
        for i in base.objects:
            unit[i] = {x: fibers[i].identity(x) for x in fibers[i].objects}
        return cls(base, fibers, reindex, comp, unit, name=name)

    def check(self):
        """Functoriality of each reindexing, naturality, invertibility and coherence laws."""
        B, P, R = self.base, self.fibers, self.reindex
        out = []
        for f in B.arrows():
            if R[f].dom is not P[B.cod(f)] or R[f].cod is not P[B.dom(f)]:
                out.append(Violation.of("PseudofunctorViolation", arrow=f, message="reindexing has wrong fibers"))
                continue
            out.extend(Violation("PseudofunctorViolation", v.config, f"reindexing {f}: {v.message}")
                       for v in validate_functor(R[f]))
        if out:
            return out
        for i in B.objects:
            C = P[i]
            ri = R[B.identity(i)]
            typed = True
            for x in C.objects:
                e = self.unit[i][x]
                if C.dom(e) != x or C.cod(e) != ri.ob(x) or not C.is_iso(e):
                    typed = False
                    out.append(Violation.of("PseudofunctorViolation", object=x, message="unit not an iso X -> id^*X"))
            if not typed:
                continue
            for a in C.arrows():
                x, y = C.dom(a), C.cod(a)
                if C.compose(self.unit[i][y], a) != C.compose(ri(a), self.unit[i][x]):
                    out.append(Violation.of("PseudofunctorViolation", arrow=a, message="unit not natural"))
        for g in B.arrows():
            for f in B.in_arrows(B.dom(g)):
                gf = B.compose(g, f)
                C = P[B.dom(f)]
                mu = self.comp[(g, f)]
                typed = True
                for z in P[B.cod(g)].objects:
                    e = mu[z]
                    if C.dom(e) != R[f].ob(R[g].ob(z)) or C.cod(e) != R[gf].ob(z) or not C.is_iso(e):
                        typed = False
                        out.append(Violation.of("PseudofunctorViolation", g=g, f=f, object=z,
                                                message="composition comparison not an iso f^*g^*Z -> (gf)^*Z"))
                if not typed:
                    continue
                for b in P[B.cod(g)].arrows():
                    z, z2 = P[B.cod(g)].dom(b), P[B.cod(g)].cod(b)
                    if C.compose(mu[z2], R[f](R[g](b))) != C.compose(R[gf](b), mu[z]):
                        out.append(Violation.of("PseudofunctorViolation", g=g, f=f, arrow=b,
                                                message="composition comparison not natural"))
        if out:
            return out
        for f in B.arrows():
            i, j = B.dom(f), B.cod(f)
            C = P[i]
            for y in P[j].objects:
                fy = R[f].ob(y)
                lhs = C.compose(self.comp[(B.identity(j), f)][y], R[f](self.unit[j][y]))
                rhs = C.compose(self.comp[(f, B.identity(i))][y], self.unit[i][fy])
                if lhs != C.identity(fy) or rhs != C.identity(fy):
                    out.append(Violation.of("PseudofunctorViolation", arrow=f, object=y, message="unit law"))
        for h in B.arrows():
            for g in B.in_arrows(B.dom(h)):
                hg = B.compose(h, g)
                for f in B.in_arrows(B.dom(g)):
                    gf = B.compose(g, f)
                    C = P[B.dom(f)]
                    for w in P[B.cod(h)].objects:
                        lhs = C.compose(self.comp[(hg, f)][w], R[f](self.comp[(h, g)][w]))
                        rhs = C.compose(self.comp[(h, gf)][w], self.comp[(g, f)][R[h].ob(w)])
                        if lhs != rhs:
                            out.append(Violation.of("PseudofunctorViolation", h=h, g=g, f=f, object=w,
                                                    message="associativity coherence"))
        return out


class GObj(NamedTuple):
    base: object
    obj: object

    def __str__(self):
        return f"{self.base}/{self.obj}"


class GArrow(NamedTuple):
    """Grothendieck arrow: base arrow ``f`` and ``alpha: X -> f^*Y`` in the fiber."""

    f: object
    dom: object
    cod: object
    alpha: object

    def __str__(self):
        return f"<{self.f};{self.alpha}>"


def grothendieck(P, name=None):
    """Total category of ``P`` and its projection, a fibration."""
    B, F, R = P.base, P.fibers, P.reindex
    objs = tuple(GObj(i, x) for i in B.objects for x in F[i].objects)

    def hom(a, b):
        out = []
        for f in B.hom(a.base, b.base):
            fy = R[f].ob(b.obj)
            out.extend(GArrow(f, a, b, al) for al in F[a.base].hom(a.obj, fy))
        return out

    def compose(g, f):
        i = f.dom.base
        C = F[i]
        gf = B.compose(g.f, f.f)
        mu = P.comp[(g.f, f.f)][g.cod.obj]
        return GArrow(gf, f.dom, g.cod, C.compose(mu, C.compose(R[f.f](g.alpha), f.alpha)))

    def identity(a):
        return GArrow(B.identity(a.base), a, a, P.unit[a.base][a.obj])

    E = RuleCategory(objs, hom, lambda a: a.dom, lambda a: a.cod, identity, compose,
                     name=name or f"Gr({P.name})")
    return FinFunctor(E, B, lambda a: a.base, lambda a: a.f, name=f"p_{P.name}")


def unary_part(fm, name=None):
    """Restriction of M (and the special squares) to arrows over base isomorphisms."""
    base = fm.base
    keep = lambda a: base.is_iso(fm.p(a))  # noqa: E731
    M = _Sub(fm.M, keep, name="M_iso")
    p = FinFunctor(M, base, fm.p.ob, fm.p, name="p")
    return FiberedMulticategory(base, fm.D, M, fm.d, p, lift_rule=fm.lift_rule,
                                name=name or f"unary({fm.name})", info=dict(fm.info, kind="unary"))


def from_pseudofunctor(P, name=None):
    """The unary fibered multicategory of a pseudofunctor."""
    bad = P.check()
    if bad:
        raise InvalidInput(f"not a pseudofunctor: {bad[0]}")
    gp = grothendieck(P)
    return unary_part(from_fibration(gp), name=name or f"unary({P.name})")


def check_unary(fm):
    base = fm.base
    for a in fm.M.arrows():
        if not base.is_iso(fm.p(a)):
            raise NotUnary(f"{a} lies over the non-invertible {fm.p(a)}")


class Cleavage:
    """Chosen d-lifts ``c(f, Y): f^*Y -> Y`` with ``c(id, Y) = id`` and the induced data."""

    def __init__(self, fm):
        self.fm = fm
        self._c = {}

    def lift(self, f, y):
        key = (f, y)
        c = self._c.get(key)
        if c is None:
            fm = self.fm
            if f == fm.base.identity(fm.over(y)):
                c = fm.D.identity(y)
            else:
                lifts = fm.d_lifts(f, y)
                if not lifts:
                    raise NotAFibration(f"no d-lift of {f} at {y}")
                c = lifts[0]
            self._c[key] = c
        return c

    def pull(self, f, y):
        return self.fm.D.dom(self.lift(f, y))

    def reindex_vertical(self, f, beta):
        """``f^*beta`` for a vertical ``beta: Y -> Y'``."""
        fm = self.fm
        base, M = fm.base, fm.M
        y, y2 = M.dom(beta), M.cod(beta)
        j = fm.over(y)
        sq = pullback_square_with(fm, f, base.identity(base.dom(f)), f, base.identity(j))
        return special_lift(fm, beta, sq, self.lift(f, y), self.lift(f, y2))

    def vertical_from_d(self, v):
        """The vertical M-iso attached to a vertical D-iso ``v: U -> U'``."""
        fm = self.fm
        base = fm.base
        u2 = fm.D.cod(v)
        i = fm.over(u2)
        idi = base.identity(i)
        sq = pullback_square_with(fm, idi, idi, idi, idi)
        return special_lift(fm, fm.M.identity(u2), sq, v, fm.D.identity(u2))

    def comparison(self, t):
        """For a D-arrow ``t: X -> Y`` over f, the vertical D-iso ``v`` with ``c(f, Y) v = t``."""
        fm = self.fm
        D = fm.D
        f, y = fm.d(t), D.cod(t)
        c = self.lift(f, y)
        x, fy = D.dom(t), D.dom(c)
        idi = fm.base.identity(fm.over(x))
        found = [v for v in D.hom(x, fy) if fm.d(v) == idi and D.compose(c, v) == t]
        if len(found) != 1:
            raise NotAFibration(f"no unique comparison for {t}")
        return found[0]


def grothendieck_unary(fm, name=None):
    """The fibration freely generated by a unary fibered multicategory."""
    check_unary(fm)
    base, D, M = fm.base, fm.D, fm.M
    cl = Cleavage(fm)
    vertical = {}
    for a in M.arrows():
        if fm.p(a) == base.identity(fm.over(M.dom(a))):
            vertical.setdefault((M.dom(a), M.cod(a)), []).append(a)

    def hom(x, y):
        out = []
        for f in base.hom(fm.over(x), fm.over(y)):
            fy = cl.pull(f, y)
            out.extend(GArrow(f, x, y, al) for al in vertical.get((x, fy), ()))
        return out

    def compose(g, f):
        z = g.cod
        gz = cl.pull(g.f, z)
        fgz = cl.pull(f.f, gz)
        gf = base.compose(g.f, f.f)
        chain = D.compose(cl.lift(g.f, z), cl.lift(f.f, gz))
        theta = cl.vertical_from_d(_vertical_iso(fm, cl, chain, gf, z))
        assert M.dom(theta) == fgz
        alpha = M.compose(theta, M.compose(cl.reindex_vertical(f.f, g.alpha), f.alpha))
        return GArrow(gf, f.dom, z, alpha)

    def identity(x):
        return GArrow(base.identity(fm.over(x)), x, x, M.identity(x))

    E = RuleCategory(fm.objects, hom, lambda a: a.dom, lambda a: a.cod, identity, compose,
                     name=name or f"Gr({fm.name})")
    G = FinFunctor(E, base, fm.over, lambda a: a.f, name=name or f"Gr({fm.name})")
    G.cleavage = cl
    return G


def _vertical_iso(fm, cl, t, f, z):
    """Vertical D-iso ``v`` with ``c(f, z) v = t`` for ``t`` over ``f``."""
    D = fm.D
    c = cl.lift(f, z)
    x = D.dom(t)
    idi = fm.base.identity(fm.over(x))
    for v in D.hom(x, D.dom(c)):
        if fm.d(v) == idi and D.compose(c, v) == t:
            return v
    raise NotAFibration(f"no comparison iso for {t}")


def unary_embedding(fm, G):
    """Maps sending fm's D- and M-arrows to arrows of ``from_fibration(G)``."""
    cl = G.cleavage
    M, base = fm.M, fm.base

    def m_map(a):
        s = fm.p(a)
        x, y = M.dom(a), M.cod(a)
        i = fm.over(x)
        sq = pullback_square_with(fm, base.identity(i), base.identity(i), s, s)
        alpha = special_lift(fm, a, sq, fm.D.identity(x), cl.lift(s, y))
        return GArrow(s, x, y, alpha)

    def d_map(t):
        return GArrow(fm.d(t), fm.D.dom(t), fm.D.cod(t), cl.vertical_from_d(cl.comparison(t)))

    return d_map, m_map


def check_isomorphism(fm1, fm2, d_map, m_map, ob_map=lambda x: x):
    """Violations of ``(ob_map, d_map, m_map)`` being an isomorphism ``fm1 -> fm2`` over the base."""
    out = []
    for C1, C2, F, proj1, proj2, tag in ((fm1.D, fm2.D, d_map, fm1.d, fm2.d, "D"),
                                        (fm1.M, fm2.M, m_map, fm1.p, fm2.p, "M")):
        a1 = list(C1.arrows())
        img = [F(a) for a in a1]
        if len(set(img)) != len(a1) or set(img) != set(C2.arrows()):
            out.append(Violation.of("IsomorphismViolation", part=tag, message="arrow map is not a bijection"))
            continue
        for a, b in zip(a1, img):
            if proj1(a) != proj2(b) or ob_map(C1.dom(a)) != C2.dom(b) or ob_map(C1.cod(a)) != C2.cod(b):
                out.append(Violation.of("IsomorphismViolation", part=tag, arrow=a, message="not over the same data"))
        for g in a1:
            for f in C1.in_arrows(C1.dom(g)):
                if F(C1.compose(g, f)) != C2.compose(F(g), F(f)):
                    out.append(Violation.of("IsomorphismViolation", part=tag, g=g, f=f, message="composition"))
    if out:
        return out
    s1 = {(d_map(s.top), d_map(s.bottom), m_map(s.right), m_map(s.left)) for s in fm1.special}
    s2 = {tuple(s) for s in fm2.special}
    if s1 != s2:
        out.append(Violation.of("IsomorphismViolation", part="special",
                                missing=len(s2 - s1), extra=len(s1 - s2)))
    return out


# --------------------------------------------------------- family fibration

class FamArrow(NamedTuple):
    """Arrow of Fam(C) over ``shape``: ``comps[i]: x_i -> y_{shape(i)}``."""

    shape: object
    dom: object
    cod: object
    comps: tuple

    def __str__(self):
        return f"fam[{self.shape}|" + ",".join(map(str, self.comps)) + "]"


def family_fibration(cat, bound):
    """``Fam(C) -> Set_f`` truncated at ``bound``."""
    from .standard import families
    base = FinSetBase(bound)
    objs = tuple(families(cat.objects, base))

    def hom(x, y):
        out = []
        for f in base.hom(x.index, y.index):
            pos = f.positions()
            homs = [cat.hom(x.entries[i], y.entries[pos[i]]) for i in range(len(pos))]
            out.extend(FamArrow(f, x, y, c) for c in itertools.product(*homs))
        return out

    def compose(g, f):
        pos = f.shape.positions()
        comps = tuple(cat.compose(g.comps[pos[i]], c) for i, c in enumerate(f.comps))
        return FamArrow(fs.compose(g.shape, f.shape), f.dom, g.cod, comps)

    def identity(x):
        return FamArrow(fs.identity(x.index), x, x, tuple(cat.identity(e) for e in x.entries))

    E = RuleCategory(objs, hom, lambda a: a.dom, lambda a: a.cod, identity, compose,
                     name=f"Fam({getattr(cat, 'name', '?')})")
    return FinFunctor(E, base, lambda x: x.index, lambda a: a.shape, name=f"fam({getattr(cat, 'name', '?')})")


def family_to_sequential_maps(cat):
    """Renamings from ``from_fibration(family_fibration(C))`` to the sequential instance.

    Valid when the only isomorphisms of C are identities.
    """
    from .standard import FamilyArrow, Reindex, SeqSingle, _fibers

    def d_map(a):
        return Reindex(a.shape, a.dom, a.cod)

    def m_map(a):
        comps = tuple(SeqSingle(a.cod.entries[j], tuple(a.comps[i] for i in fib))
                      for j, fib in enumerate(_fibers(a.shape)))
        return FamilyArrow(a.shape, a.dom, a.cod, comps)

    return d_map, m_map


def codomain_fibration(cat, name=None):
    """``cod: C^2 -> C`` for a finite category ``C``; a fibration when C has pullbacks."""

    class Sq(NamedTuple):
        top: object
        bottom: object
        dom: object
        cod: object

        def __str__(self):
            return f"({self.top},{self.bottom})"

    C = cat
    objs = tuple(C.arrows())

    def hom(a, b):
        out = []
        for h in C.hom(C.dom(a), C.dom(b)):
            for k in C.hom(C.cod(a), C.cod(b)):
                if C.compose(b, h) == C.compose(k, a):
                    out.append(Sq(h, k, a, b))
        return out

    E = RuleCategory(objs, hom, lambda s: s.dom, lambda s: s.cod,
                     lambda a: Sq(C.identity(C.dom(a)), C.identity(C.cod(a)), a, a),
                     lambda g, f: Sq(C.compose(g.top, f.top), C.compose(g.bottom, f.bottom), f.dom, g.cod),
                     name=f"{getattr(C, 'name', 'C')}^2")
    return FinFunctor(E, C, C.cod, lambda s: s.bottom, name=name or "cod")


def identity_fibration(cat):
    return FinFunctor(cat, cat, lambda x: x, lambda a: a, name="id")


__all__ = [
    "from_fibration", "fibchar_check", "candidate_functors", "inclusion_functor", "section_via", "is_pullback_in",
    "Pseudofunctor", "grothendieck", "from_pseudofunctor", "unary_part", "grothendieck_unary",
    "unary_embedding", "check_isomorphism", "family_fibration", "family_to_sequential_maps",
    "codomain_fibration", "identity_fibration", "FibcharReport", "GObj", "GArrow", "FamArrow",
]
