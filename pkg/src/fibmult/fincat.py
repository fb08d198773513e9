"""Finite categories, functors and fibration classification.

Two concrete category types share one interface: ``FinCategory`` stores
composition extensionally, ``RuleCategory`` computes hom-sets and composites
from functions (memoized).  Everything downstream only uses ``objects``,
``hom``, ``dom``, ``cod``, ``identity`` and ``compose``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import InvalidInput, NotAFibration
from .violations import Violation


class Category:
    objects: tuple

    def hom(self, x, y):
        raise NotImplementedError

    def dom(self, a):
        raise NotImplementedError

    def cod(self, a):
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def arrows(self):
        for x in self.objects:
            for y in self.objects:
                yield from self.hom(x, y)

    def out_arrows(self, x):
        for y in self.objects:
            yield from self.hom(x, y)

    def in_arrows(self, y):
        for x in self.objects:
            yield from self.hom(x, y)

    def is_iso(self, a):
        return self.inverse(a) is not None

    def inverse(self, a):
        x, y = self.dom(a), self.cod(a)
        ix, iy = self.identity(x), self.identity(y)
        for b in self.hom(y, x):
            if self.compose(b, a) == ix and self.compose(a, b) == iy:
                return b
        return None

    def n_arrows(self):
        return sum(1 for _ in self.arrows())


class FinCategory(Category):
    """Extensional finite category.

    ``arrows`` is a list of ``(id, dom, cod)`` records, ``identity`` maps each
    object to an arrow id and ``compose`` maps ``(g, f)`` to ``g . f``.
    """

    def __init__(self, objects, arrows, identity, compose, name=""):
        self.name = name
        self.objects = tuple(objects)
        self._dc = {}
        self._hom = {}
        for a, x, y in arrows:
            if a in self._dc:
                raise InvalidInput(f"duplicate arrow id {a!r}")
            self._dc[a] = (x, y)
            self._hom.setdefault((x, y), []).append(a)
        self._hom = {k: tuple(v) for k, v in self._hom.items()}
        self._id = dict(identity)
        self._comp = dict(compose)

    @property
    def arrow_records(self):
        return [(a, x, y) for a, (x, y) in self._dc.items()]

    @property
    def identity_table(self):
        return dict(self._id)

    @property
    def compose_table(self):
        return dict(self._comp)

    def hom(self, x, y):
        return self._hom.get((x, y), ())

    def arrows(self):
        return iter(self._dc)

    def n_arrows(self):
        return len(self._dc)

    def has_arrow(self, a):
        return a in self._dc

    def dom(self, a):
        return self._dc[a][0]

    def cod(self, a):
        return self._dc[a][1]

    def identity(self, x):
        return self._id[x]

    def compose(self, g, f):
        return self._comp[(g, f)]

    def __repr__(self):
        return f"FinCategory({self.name or '?'}: {len(self.objects)} objects, {len(self._dc)} arrows)"


class RuleCategory(Category):
    """Category given by functions; hom-sets and composites are memoized."""

    def __init__(self, objects, hom, dom, cod, identity, compose, name=""):
        self.name = name
        self.objects = tuple(objects)
        self._hom_fn = hom
        self._dom = dom
        self._cod = cod
        self._id_fn = identity
        self._comp_fn = compose
        self._hom = {}
        self._comp = {}

    def hom(self, x, y):
        key = (x, y)
        h = self._hom.get(key)
        if h is None:
            h = self._hom[key] = tuple(self._hom_fn(x, y))
        return h

    def dom(self, a):
        return self._dom(a)

    def cod(self, a):
        return self._cod(a)

    def identity(self, x):
        return self._id_fn(x)

    def compose(self, g, f):
        key = (g, f)
        h = self._comp.get(key)
        if h is None:
            h = self._comp[key] = self._comp_fn(g, f)
        return h

    def __repr__(self):
        return f"RuleCategory({self.name or '?'}: {len(self.objects)} objects)"


def tabulate(cat, name=None):
    """Materialize any category into a ``FinCategory``."""
    arrows = [(a, cat.dom(a), cat.cod(a)) for a in cat.arrows()]
    comp = {}
    for g, y, _ in arrows:
        for f in cat.in_arrows(y):
            comp[(g, f)] = cat.compose(g, f)
    ident = {x: cat.identity(x) for x in cat.objects}
    return FinCategory(cat.objects, arrows, ident, comp, name=name or getattr(cat, "name", ""))


class FinFunctor:
    """Functor between categories; the maps may be dicts or callables."""

    def __init__(self, dom, cod, on_objects, on_arrows, name=""):
        self.dom = dom
        self.cod = cod
        self.name = name
        self._ob = on_objects
        self._ar = on_arrows
        self._cache = {}

    def ob(self, x):
        o = self._ob
        return o[x] if isinstance(o, dict) else o(x)

    def __call__(self, a):
        r = self._cache.get(a)
        if r is None:
            o = self._ar
            r = self._cache[a] = o[a] if isinstance(o, dict) else o(a)
        return r

    def lifts_by_cod(self):
        """``(base arrow, codomain object) -> [arrows]`` index."""
        idx = self._cache.get("__by_cod")
        if idx is None:
            idx = {}
            for a in self.dom.arrows():
                idx.setdefault((self(a), self.dom.cod(a)), []).append(a)
            self._cache["__by_cod"] = idx
        return idx

    def lifts_by_dom(self):
        idx = self._cache.get("__by_dom")
        if idx is None:
            idx = {}
            for a in self.dom.arrows():
                idx.setdefault((self(a), self.dom.dom(a)), []).append(a)
            self._cache["__by_dom"] = idx
        return idx

    def objects_over(self, i):
        idx = self._cache.get("__over")
        if idx is None:
            idx = {}
            for x in self.dom.objects:
                idx.setdefault(self.ob(x), []).append(x)
            self._cache["__over"] = idx
        return idx.get(i, [])


def compose_functors(G, F):
    return FinFunctor(F.dom, G.cod, lambda x: G.ob(F.ob(x)), lambda a: G(F(a)),
                      name=f"{G.name}.{F.name}")


# ---------------------------------------------------------------- validation

def arrow_index(cat):
    """Integer encoding of a finite category for the kernels."""
    arrows = list(cat.arrows())
    pos = {a: i for i, a in enumerate(arrows)}
    opos = {x: i for i, x in enumerate(cat.objects)}
    dom = np.array([opos[cat.dom(a)] for a in arrows], dtype=np.int32)
    cod = np.array([opos[cat.cod(a)] for a in arrows], dtype=np.int32)
    return arrows, pos, opos, dom, cod


def validate_category(c):
    """Exhaustive check of dom/cod coherence, unit laws and associativity."""
    out = []
    arrows, pos, opos, dom, cod = arrow_index(c)
    n = len(arrows)
    for x in c.objects:
        try:
            i = c.identity(x)
        except KeyError:
            out.append(Violation.of("IdentityViolation", object=x, message="missing identity"))
            continue
        if i not in pos or c.dom(i) != x or c.cod(i) != x:
            out.append(Violation.of("IdentityViolation", object=x, arrow=i))
    if out:
        return out
    table = np.full((n, n), -1, dtype=np.int32)
    for g in arrows:
        y = c.dom(g)
        for f in c.in_arrows(y):
            try:
                h = c.compose(g, f)
            except KeyError:
                out.append(Violation.of("DomCodViolation", g=g, f=f, message="composite undefined"))
                continue
            if h not in pos or c.dom(h) != c.dom(f) or c.cod(h) != c.cod(g):
                out.append(Violation.of("DomCodViolation", g=g, f=f, composite=h))
                continue
            table[pos[g], pos[f]] = pos[h]
    if out:
        return out
    for a in arrows:
        ia, ib = c.identity(c.dom(a)), c.identity(c.cod(a))
        if table[pos[a], pos[ia]] != pos[a] or table[pos[ib], pos[a]] != pos[a]:
            out.append(Violation.of("UnitViolation", arrow=a))
    ids = np.array(sorted(pos[c.identity(x)] for x in c.objects), dtype=np.int32)
    for h, g, f in kernels.associativity_violations(table, dom, cod, len(c.objects), ids):
        out.append(Violation.of("AssociativityViolation", h=arrows[h], g=arrows[g], f=arrows[f]))
    return out


def validate_functor(F):
    out = []
    C, D = F.dom, F.cod
    for x in C.objects:
        if F(C.identity(x)) != D.identity(F.ob(x)):
            out.append(Violation.of("FunctorViolation", object=x, message="identity not preserved"))
    for g in C.arrows():
        if D.dom(F(g)) != F.ob(C.dom(g)) or D.cod(F(g)) != F.ob(C.cod(g)):
            out.append(Violation.of("FunctorViolation", arrow=g, message="dom/cod not preserved"))
            continue
        for f in C.in_arrows(C.dom(g)):
            if F(C.compose(g, f)) != D.compose(F(g), F(f)):
                out.append(Violation.of("FunctorViolation", g=g, f=f, message="composite not preserved"))
    return out


# ---------------------------------------------------------------- fibrations

def is_cartesian(F, phi):
    """Exhaustive test that ``phi`` is F-cartesian."""
    E, B = F.dom, F.cod
    x, y = E.dom(phi), E.cod(phi)
    f = F(phi)
    bx = F.ob(x)
    for w in E.objects:
        counts = {}
        for chi in E.hom(w, x):
            key = (F(chi), E.compose(phi, chi))
            counts[key] = counts.get(key, 0) + 1
        bw = F.ob(w)
        gs = B.hom(bw, bx)
        for psi in E.hom(w, y):
            fp = F(psi)
            for g in gs:
                if B.compose(f, g) == fp and counts.get((g, psi), 0) != 1:
                    return False
    return True


@dataclass
class FibrationReport:
    is_groupoid: bool
    is_fibration: bool
    is_fibration_in_groupoids: bool
    is_discrete_fibration: bool
    is_discrete_opfibration: bool
    witnesses: list = field(default_factory=list)

    def flags(self):
        return {k: getattr(self, k) for k in (
            "is_groupoid", "is_fibration", "is_fibration_in_groupoids",
            "is_discrete_fibration", "is_discrete_opfibration")}


def _base_arrows(B):
    return list(B.arrows())


def classify_fibration(F, *, check_functor=True):
    """Decide the fibration flags of ``F`` by exhaustive lifting search."""
    if check_functor:
        bad = validate_functor(F)
        if bad:
            raise InvalidInput(f"not a functor: {bad[0]}")
    E, B = F.dom, F.cod
    witnesses = []
    by_cod = F.lifts_by_cod()
    by_dom = F.lifts_by_dom()
    cart = {a: is_cartesian(F, a) for a in E.arrows()}
    is_groupoid = all(E.is_iso(a) for a in E.arrows())
    fib = disc = opdisc = True
    for f in _base_arrows(B):
        i, j = B.dom(f), B.cod(f)
        for y in F.objects_over(j):
            lifts = by_cod.get((f, y), [])
            if not any(cart[a] for a in lifts):
                fib = False
                witnesses.append(Violation.of("MissingCartesianLift", base=f, object=y))
            if len(lifts) != 1:
                disc = False
                witnesses.append(Violation.of("DiscreteFibrationViolation", base=f, object=y,
                                              message=f"{len(lifts)} lifts"))
        for x in F.objects_over(i):
            lifts = by_dom.get((f, x), [])
            if len(lifts) != 1:
                opdisc = False
                witnesses.append(Violation.of("DiscreteOpfibrationViolation", base=f, object=x,
                                              message=f"{len(lifts)} lifts"))
    all_cart = True
    for a, ok in cart.items():
        if not ok:
            all_cart = False
            witnesses.append(Violation.of("NonCartesianArrow", arrow=a))
    return FibrationReport(
        is_groupoid=is_groupoid,
        is_fibration=fib,
        is_fibration_in_groupoids=fib and all_cart,
        is_discrete_fibration=disc,
        is_discrete_opfibration=opdisc,
        witnesses=witnesses,
    )


def cartesian_lift(d, f, y, *, report=None):
    """All arrows over ``f`` with codomain ``y`` (d a fibration in groupoids)."""
    if report is None:
        report = classify_fibration(d)
    if not report.is_fibration_in_groupoids:
        raise NotAFibration("functor is not a fibration in groupoids")
    return list(d.lifts_by_cod().get((f, y), []))
