"""Standard multicategories over finite sets.

A symmetric presentation gives single arrows ``(x_1 .. x_n) -> y`` with
composition and a symmetric action.  ``build_standard`` turns it into a
fibered multicategory: objects are families ``I -> M0``, D-arrows are the
reindexings ``f^*Y -> Y`` and M-arrows over ``f: I -> J`` are J-indexed
families of single arrows whose j-th domain is the fiber ``f^{-1}(j)`` in
I-order.
"""
from __future__ import annotations

import itertools
from typing import NamedTuple

from . import catalog
from . import finset as fs
from .core.base import FinSetBase
from .core.multicategory import FiberedMulticategory, special_lift
from .errors import BadParams, LawViolation, NoLift, NotExtensive
from .fincat import FinCategory, FinFunctor, RuleCategory
from .finset import FinMap, FinSet
from .violations import Violation


# ----------------------------------------------------------- presentations

class SeqSingle(NamedTuple):
    """Single arrow of a sequential presentation: a cocone ``comps -> cod``."""

    cod: object
    comps: tuple

    def __str__(self):
        return "(" + ",".join(map(str, self.comps)) + ")>" + str(self.cod)


class SymmetricPresentation:
    """Interface of a classical symmetric multicategory given by rules.

    ``act(s, perm)`` has domain ``dom(s)[perm[t]]`` at slot ``t`` and
    precomposes with the permutation.  ``cov(s, phi, new_dom)``, when
    present, is covariant reindexing of the domain along ``phi``.
    """

    objects: tuple = ()
    name = "presentation"

    def arrows(self, dom, cod):
        raise NotImplementedError

    def source(self, s):
        raise NotImplementedError

    def target(self, s):
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    def compose(self, b, parts):
        raise NotImplementedError

    def act(self, s, perm):
        raise NotImplementedError

    cov = None


class SequentialPresentation(SymmetricPresentation):
    """Cocones in a category C; cartesian when C is enriched in commutative monoids."""

    def __init__(self, cat, enrichment=None, name=None):
        self.cat = cat
        self.objects = tuple(cat.objects)
        self.enrichment = enrichment if enrichment is not None else getattr(cat, "enrichment", None)
        self.name = name or f"seq({getattr(cat, 'name', '?')})"
        self._src = {}
        if self.enrichment is not None:
            self.cov = self._cov

    def arrows(self, dom, cod):
        homs = [self.cat.hom(x, cod) for x in dom]
        return [SeqSingle(cod, c) for c in itertools.product(*homs)]

    def source(self, s):
        r = self._src.get(s)
        if r is None:
            r = self._src[s] = tuple(self.cat.dom(c) for c in s.comps)
        return r

    def target(self, s):
        return s.cod

    def identity(self, x):
        return SeqSingle(x, (self.cat.identity(x),))

    def compose(self, b, parts):
        c = self.cat
        return SeqSingle(b.cod, tuple(c.compose(bj, ak) for bj, a in zip(b.comps, parts) for ak in a.comps))

    def act(self, s, perm):
        return SeqSingle(s.cod, tuple(s.comps[k] for k in perm))

    def _cov(self, s, phi, new_dom):
        e = self.enrichment
        out = []
        for j, y in enumerate(new_dom):
            out.append(e.sum([c for c, t in zip(s.comps, phi) if t == j], y, s.cod))
        return SeqSingle(s.cod, tuple(out))


class FnSingle(NamedTuple):
    """A many-variable function ``dom[0] x ... -> cod`` as a value table."""

    dom: tuple
    cod: str
    table: tuple

    def __str__(self):
        return f"({','.join(self.dom)})>{self.cod}:" + ",".join(self.table)


class FunctionPresentation(SymmetricPresentation):
    """Finite sets and many-variable functions (a cartesian multicategory).

    ``carriers`` maps each object name to its list of element labels; tables
    are indexed by the product of the domain carriers in row-major order.
    """

    def __init__(self, carriers, name="functions"):
        self.carriers = {k: tuple(v) for k, v in carriers.items()}
        self.objects = tuple(self.carriers)
        self.name = name
        self.cov = self._cov

    def _inputs(self, dom):
        return list(itertools.product(*[self.carriers[x] for x in dom]))

    def _pos(self, dom):
        return {v: i for i, v in enumerate(self._inputs(dom))}

    def eval(self, s, args):
        pos = self._pos(s.dom)
        return s.table[pos[tuple(args)]]

    def make(self, dom, cod, fn):
        dom = tuple(dom)
        return FnSingle(dom, cod, tuple(fn(*v) for v in self._inputs(dom)))

    def arrows(self, dom, cod):
        dom = tuple(dom)
        n = len(self._inputs(dom))
        return [FnSingle(dom, cod, t) for t in itertools.product(self.carriers[cod], repeat=n)]

    def source(self, s):
        return s.dom

    def target(self, s):
        return s.cod

    def identity(self, x):
        return FnSingle((x,), x, self.carriers[x])

    def compose(self, b, parts):
        dom = tuple(x for a in parts for x in a.dom)
        cuts = list(itertools.accumulate([0] + [len(a.dom) for a in parts]))
        bpos = self._pos(b.dom)
        ppos = [self._pos(a.dom) for a in parts]
        table = []
        for v in self._inputs(dom):
            mid = tuple(a.table[pp[v[cuts[k]:cuts[k + 1]]]] for k, (a, pp) in enumerate(zip(parts, ppos)))
            table.append(b.table[bpos[mid]])
        return FnSingle(dom, b.cod, tuple(table))

    def act(self, s, perm):
        dom = tuple(s.dom[k] for k in perm)
        spos = self._pos(s.dom)
        table = []
        for w in self._inputs(dom):
            v = [None] * len(perm)
            for t, k in enumerate(perm):
                v[k] = w[t]
            table.append(s.table[spos[tuple(v)]])
        return FnSingle(dom, s.cod, tuple(table))

    def _cov(self, s, phi, new_dom):
        new_dom = tuple(new_dom)
        spos = self._pos(s.dom)
        table = [s.table[spos[tuple(w[t] for t in phi)]] for w in self._inputs(new_dom)]
        return FnSingle(new_dom, s.cod, tuple(table))


class TablePresentation(SymmetricPresentation):
    """Extensional presentation: declared single arrows plus composition/action tables.

    ``single_arrows`` is a list of ``(id, domain tuple, codomain)``;
    ``composition`` maps ``(b, (a_1, ..))`` and ``action`` maps ``(s, perm)``
    to arrow ids.  Identities are given per object.
    """

    def __init__(self, objects, single_arrows, identity, composition, action, name="table"):
        self.objects = tuple(objects)
        self.name = name
        self._src, self._tgt, self._hom = {}, {}, {}
        for sid, dom, cod in single_arrows:
            self._src[sid] = tuple(dom)
            self._tgt[sid] = cod
            self._hom.setdefault((tuple(dom), cod), []).append(sid)
        self._id = dict(identity)
        self._comp = dict(composition)
        self._act = dict(action)

    @classmethod
    def tabulate(cls, pres, max_arity):
        """Tabulate a rule presentation on all arities ``<= max_arity``."""
        singles, comp, act = [], {}, {}
        by_arity = {}
        for n in range(max_arity + 1):
            for dom in itertools.product(pres.objects, repeat=n):
                for y in pres.objects:
                    for s in pres.arrows(dom, y):
                        singles.append((s, dom, y))
                        by_arity.setdefault(n, []).append(s)
                        for perm in itertools.permutations(range(n)):
                            act[(s, perm)] = pres.act(s, perm)
        by_cod = {}
        for s, dom, y in singles:
            by_cod.setdefault(y, []).append((s, dom))
        for b, bdom, _ in singles:
            m = len(bdom)
            choices = [[(a, len(adom)) for a, adom in by_cod.get(x, ())] for x in bdom]
            for parts in itertools.product(*choices):
                if sum(k for _, k in parts) <= max_arity:
                    pa = tuple(a for a, _ in parts)
                    comp[(b, pa)] = pres.compose(b, list(pa))
            del m
        ident = {x: pres.identity(x) for x in pres.objects}
        return cls(pres.objects, singles, ident, comp, act, name=f"table({pres.name})")

    def arrows(self, dom, cod):
        return list(self._hom.get((tuple(dom), cod), ()))

    def source(self, s):
        return self._src[s]

    def target(self, s):
        return self._tgt[s]

    def identity(self, x):
        return self._id[x]

    def compose(self, b, parts):
        return self._comp[(b, tuple(parts))]

    def act(self, s, perm):
        return self._act[(s, tuple(perm))]


# ------------------------------------------------------ family multicategory

class Family(NamedTuple):
    index: FinSet
    entries: tuple

    def __str__(self):
        return f"{self.index.label}(" + ",".join(map(str, self.entries)) + ")"


class Reindex(NamedTuple):
    """The D-arrow ``f^*Y -> Y`` over ``f``."""

    shape: FinMap
    dom: Family
    cod: Family

    def __str__(self):
        return f"r[{self.shape}]"


class FamilyArrow(NamedTuple):
    """M-arrow over ``shape``; ``comps[j]`` is a single arrow into ``cod.entries[j]``."""

    shape: FinMap
    dom: Family
    cod: Family
    comps: tuple

    def __str__(self):
        return f"{self.dom}=[{self.shape}|" + ";".join(map(str, self.comps)) + f"]=>{self.cod}"


def pullback_family(f, y):
    pos = f.positions()
    return Family(f.dom, tuple(y.entries[k] for k in pos))


def _fibers(f):
    pos = f.positions()
    out = [[] for _ in range(len(f.cod))]
    for i, j in enumerate(pos):
        out[j].append(i)
    return out


def families(objects, base):
    for s in base.objects:
        for e in itertools.product(objects, repeat=len(s)):
            yield Family(s, e)


def build_standard(pres, bound, *, extra=(), name=None, check=True):
    """The standard multicategory of ``pres`` over Set_f truncated at ``bound``."""
    if check:
        bad = check_presentation(pres, min(bound, 2))
        if bad:
            raise LawViolation(f"presentation laws fail: {bad[0]}")
    base = bound if isinstance(bound, FinSetBase) else FinSetBase(bound, extra)
    objs = tuple(families(pres.objects, base))
    fib_cache = {}

    def fibers(f):
        r = fib_cache.get(f)
        if r is None:
            r = fib_cache[f] = _fibers(f)
        return r

    def d_hom(x, y):
        return [Reindex(f, x, y) for f in base.hom(x.index, y.index) if pullback_family(f, y) == x]

    def d_comp(g, f):
        return Reindex(fs.compose(g.shape, f.shape), f.dom, g.cod)

    def m_hom(x, y):
        out = []
        for f in base.hom(x.index, y.index):
            singles = [pres.arrows(tuple(x.entries[i] for i in fib), y.entries[j])
                       for j, fib in enumerate(fibers(f))]
            out.extend(FamilyArrow(f, x, y, c) for c in itertools.product(*singles))
        return out

    def m_comp(b, a):
        f, g = a.shape, b.shape
        ff, gf = fibers(f), fibers(g)
        comps = []
        for k, js in enumerate(gf):
            order = [i for j in js for i in ff[j]]
            target = sorted(order)
            where = {i: t for t, i in enumerate(order)}
            c = pres.compose(b.comps[k], [a.comps[j] for j in js])
            perm = tuple(where[i] for i in target)
            if perm != tuple(range(len(perm))):
                c = pres.act(c, perm)
            comps.append(c)
        return FamilyArrow(fs.compose(g, f), a.dom, b.cod, tuple(comps))

    def m_id(x):
        return FamilyArrow(fs.identity(x.index), x, x, tuple(pres.identity(e) for e in x.entries))

    D = RuleCategory(objs, d_hom, lambda r: r.dom, lambda r: r.cod,
                     lambda x: Reindex(fs.identity(x.index), x, x), d_comp, name="D")
    M = RuleCategory(objs, m_hom, lambda a: a.dom, lambda a: a.cod, m_id, m_comp, name="M")
    d = FinFunctor(D, base, lambda x: x.index, lambda r: r.shape, name="d")
    p = FinFunctor(M, base, lambda x: x.index, lambda a: a.shape, name="p")

    def lift_rule(a, sq, top, bottom):
        return standard_lift(pres, a, sq, top.dom, bottom.dom)

    fm = FiberedMulticategory(base, D, M, d, p, lift_rule=lift_rule,
                              name=name or f"std({pres.name})<={base.bound}",
                              info={"presentation": pres, "kind": "standard"})
    if pres.cov is not None:
        fm.info["triangle_rule"] = lambda a, f, h: standard_triangle(pres, a, f, h)
    return fm


def standard_lift(pres, a, sq, u, v):
    """Left side of the special square over ``sq`` with right side ``a``.

    Our reading: component lambda is the component of ``a`` at l(lambda),
    with inputs permuted to follow the apex order.
    """
    k, g, l = sq.top, sq.left, sq.bottom
    kp, lp = k.positions(), l.positions()
    pa_f = _fibers(a.shape)
    comps = []
    for lam, ks in enumerate(_fibers(g)):
        fib = pa_f[lp[lam]]
        where = {i: t for t, i in enumerate(fib)}
        perm = tuple(where[kp[kappa]] for kappa in ks)
        c = a.comps[lp[lam]]
        if perm != tuple(range(len(perm))):
            c = pres.act(c, perm)
        comps.append(c)
    return FamilyArrow(g, u, v, tuple(comps))


def standard_triangle(pres, a, f, h):
    """``f_!a``: the unique ``b`` over ``h`` with ``b . f`` special-triangle related to ``a``."""
    y = f.cod
    phi = f.shape.positions()
    hf = _fibers(h)
    z = a.cod
    comps = []
    for zi, ys in enumerate(hf):
        src_pos = _fibers(a.shape)[zi]
        where = {yy: t for t, yy in enumerate(ys)}
        new_dom = tuple(y.entries[yy] for yy in ys)
        comps.append(pres.cov(a.comps[zi], tuple(where[phi[i]] for i in src_pos), new_dom))
    return FamilyArrow(h, y, z, tuple(comps))


# ------------------------------------------------------- presentation laws

def check_presentation(pres, max_arity=2, limit=20000):
    """Symmetric-multicategory laws on arities ``<= max_arity``.

    Checked: unit laws, action functoriality, associativity with unary and
    binary inner parts, and equivariance of composition.  Each family of
    instances is capped at ``limit`` configurations in enumeration order.
    """
    out = []
    singles = []
    for n in range(max_arity + 1):
        for dom in itertools.product(pres.objects, repeat=n):
            for y in pres.objects:
                for s in pres.arrows(dom, y):
                    singles.append((s, tuple(dom), y))
    by_cod = {}
    for s, dom, y in singles:
        by_cod.setdefault(y, []).append((s, dom))
    for s, dom, y in singles:
        if pres.compose(pres.identity(y), [s]) != s:
            out.append(Violation.of("LawViolation", arrow=s, message="left unit"))
        if pres.compose(s, [pres.identity(x) for x in dom]) != s:
            out.append(Violation.of("LawViolation", arrow=s, message="right unit"))
        n = len(dom)
        ident = tuple(range(n))
        if n and pres.act(s, ident) != s:
            out.append(Violation.of("LawViolation", arrow=s, message="identity action"))
        for sig in itertools.permutations(range(n)):
            for tau in itertools.permutations(range(n)):
                lhs = pres.act(pres.act(s, sig), tau)
                rhs = pres.act(s, tuple(sig[t] for t in tau))
                if lhs != rhs:
                    out.append(Violation.of("LawViolation", arrow=s, sigma=sig, tau=tau,
                                            message="action not functorial"))
    def inner_choices(c, cdom):
        """Families of inner arrows whose total arity stays within ``max_arity``."""
        def rec(k, used):
            if k == len(cdom):
                yield ()
                return
            for b in by_cod.get(cdom[k], ()):
                if used + len(b[1]) <= max_arity:
                    for rest in rec(k + 1, used + len(b[1])):
                        yield (b,) + rest
        return rec(0, 0)

    def assoc_configs():
        for c, cdom, _ in singles:
            for bs in inner_choices(c, cdom):
                inner = tuple(x for _, bd in bs for x in bd)
                for as_ in inner_choices(None, inner):
                    yield c, bs, as_

    for c, bs, as_ in itertools.islice(assoc_configs(), limit):
        parts, k = [], 0
        for b, bd in bs:
            parts.append(pres.compose(b, [a for a, _ in as_[k:k + len(bd)]]))
            k += len(bd)
        lhs = pres.compose(c, parts)
        rhs = pres.compose(pres.compose(c, [b for b, _ in bs]), [a for a, _ in as_])
        if lhs != rhs:
            out.append(Violation.of("LawViolation", outer=c, message="associativity"))

    def equiv_configs():
        for c, cdom, _ in singles:
            for bs in inner_choices(c, cdom):
                for sig in itertools.permutations(range(len(bs))):
                    yield c, bs, sig

    for c, bs, sig in itertools.islice(equiv_configs(), limit):
        lhs = pres.compose(pres.act(c, sig), [bs[k][0] for k in sig])
        sizes = [len(bd) for _, bd in bs]
        starts = list(itertools.accumulate([0] + sizes))
        block = tuple(starts[k] + r for k in sig for r in range(sizes[k]))
        rhs = pres.act(pres.compose(c, [b for b, _ in bs]), block)
        if lhs != rhs:
            out.append(Violation.of("LawViolation", outer=c, sigma=sig, message="equivariance"))
    return out


# ----------------------------------------------------------- extensivity

def _decompositions(j):
    """Sum decompositions of ``j`` into 0, 1 or 2 parts, as lists of injections."""
    n = len(j)
    if n == 0:
        yield []
    yield [fs.identity(j)] if j.label == f"[{n}]" else [FinMap(fs.skeleton(n), j, j.elements)]
    for colour in itertools.product((0, 1), repeat=n):
        injs = []
        for k in (0, 1):
            elems = [x for x, c in zip(j.elements, colour) if c == k]
            injs.append(FinMap(fs.skeleton(len(elems)), j, elems))
        yield injs


def _restrict(fm, a, sq, tops, bottoms):
    try:
        return special_lift(fm, a, sq, tops, bottoms)
    except NoLift:
        return None


def check_extensivity(fm):
    """Violations of unique amalgamation over every sum decomposition within bound."""
    base, M, p = fm.base, fm.M, fm.p
    out = []
    groups = {}
    for a in M.arrows():
        groups.setdefault((M.dom(a), M.cod(a), p(a)), []).append(a)
    for x in fm.objects:
        for y in fm.objects:
            i, j = fm.over(x), fm.over(y)
            for f in base.hom(i, j):
                arrows = groups.get((x, y, f), [])
                for injs in _decompositions(j):
                    out.extend(_amalgamation(fm, x, y, f, injs, arrows, groups))
    return out


def _amalgamation(fm, x, y, f, injs, arrows, groups):
    base = fm.base
    parts = []
    for inj in injs:
        sq = base.chosen_pullback(inj, f)
        parts.append((inj, sq))
    bottom_sets = [fm.d_lifts(inj, y) for inj, _ in parts]
    top_sets = [fm.d_lifts(sq.top, x) for _, sq in parts]
    out = []
    for bottoms in itertools.product(*bottom_sets):
        for tops in itertools.product(*top_sets):
            targets = []
            for (inj, sq), t, b in zip(parts, tops, bottoms):
                targets.append(groups.get((fm.D.dom(t), fm.D.dom(b), sq.left), []))
            seen = {}
            for a in arrows:
                img = tuple(_restrict(fm, a, sq, t, b) for (_, sq), t, b in zip(parts, tops, bottoms))
                if any(c is None for c in img):
                    out.append(Violation.of("ExistenceViolation", arrow=a, decomposition=_dec(injs),
                                            message="restriction missing"))
                    continue
                if img in seen:
                    out.append(Violation.of("UniquenessViolation", arrow=a, other=seen[img],
                                            decomposition=_dec(injs), message="two amalgamations"))
                    continue
                seen[img] = a
            expected = 1
            for t in targets:
                expected *= len(t)
            if len(seen) < expected:
                for combo in itertools.product(*targets):
                    if combo not in seen:
                        out.append(Violation.of("ExistenceViolation", family=_dec(combo), dom=x, cod=y,
                                                base=f, decomposition=_dec(injs),
                                                message="no amalgamation"))
                        break
    return out


def _dec(items):
    return "[" + ", ".join(map(str, items)) + "]"


def family_split(fm, a):
    """The single arrows ``j^*a`` obtained along each point ``j: 1 -> pY``."""
    base, M = fm.base, fm.M
    y = M.cod(a)
    j = fm.over(y)
    one = fs.skeleton(1)
    out = []
    for elem in j.elements:
        pt = FinMap(one, j, [elem])
        sq = base.chosen_pullback(pt, fm.p(a))
        tops = fm.d_lifts(sq.top, M.dom(a))
        bottoms = fm.d_lifts(pt, y)
        if not tops or not bottoms:
            raise NotExtensive(f"missing d-lift at point {elem}")
        out.append(special_lift(fm, a, sq, tops[0], bottoms[0]))
    return out


def family_assemble(fm, x, y, f, singles):
    """Inverse of ``family_split``: the unique arrow over ``f`` with these restrictions."""
    found = [a for a in fm.M.hom(x, y) if fm.p(a) == f and family_split(fm, a) == list(singles)]
    if len(found) != 1:
        raise NotExtensive(f"{len(found)} amalgamations of {_dec(singles)}")
    return found[0]


def family_split_assemble(fm, a):
    """``(split(a), assemble(split(a)))``; the second component equals ``a``."""
    singles = family_split(fm, a)
    return singles, family_assemble(fm, fm.M.dom(a), fm.M.cod(a), fm.p(a), singles)


# ------------------------------------------------------------------ monoids

def standard_monoid(fm, x, single, name=""):
    """The monoid on the constant families at ``x`` with n-ary operations ``single(n)``."""
    from .core.monoids import MonoidInM

    def obj(i):
        return Family(i, (x,) * len(i))

    def t(f):
        return Reindex(f, obj(f.dom), obj(f.cod))

    def a(f):
        return FamilyArrow(f, obj(f.dom), obj(f.cod), tuple(single(len(fib)) for fib in _fibers(f)))

    return MonoidInM(fm, obj, t, a, name=name or f"monoid({x})")


def fold_monoid(fm, x, op, unit, name=""):
    """Unbiased commutative monoid on the carrier of ``x`` in a function presentation."""
    pres = fm.info["presentation"]

    def single(n):
        def fold(*v):
            acc = unit
            for e in v:
                acc = op(acc, e)
            return acc
        return pres.make((x,) * n, x, fold)

    return standard_monoid(fm, x, single, name=name)


def cocone_monoid(fm, x, name=""):
    """The monoid of identity cocones on ``x`` in a sequential presentation."""
    pres = fm.info["presentation"]
    ident = pres.cat.identity(x)
    return standard_monoid(fm, x, lambda n: SeqSingle(x, (ident,) * n), name=name or f"cocones({x})")


# -------------------------------------------------- self-indexed finite sets

class SetFamily(NamedTuple):
    """``q: X -> I`` with skeletal fibers, recorded by the fiber sizes."""

    index: FinSet
    sizes: tuple

    def __str__(self):
        return f"{self.index.label}<" + ",".join(map(str, self.sizes)) + ">"


class FiberIso(NamedTuple):
    """D-arrow over ``shape``: bijections ``X_i -> Y_{shape(i)}``."""

    shape: FinMap
    dom: SetFamily
    cod: SetFamily
    perms: tuple

    def __str__(self):
        return f"iso[{self.shape}|" + ";".join("".join(map(str, p)) for p in self.perms) + "]"


class FiberMap(NamedTuple):
    """M-arrow over ``shape``: for each j, a function of the fiber variables.

    ``tables[j]`` lists the value in ``Y_j`` for each tuple of
    ``(x_i)_{i in shape^-1(j)}`` in row-major I-order.
    """

    shape: FinMap
    dom: SetFamily
    cod: SetFamily
    tables: tuple

    def __str__(self):
        return f"map[{self.shape}|" + ";".join("".join(map(str, t)) for t in self.tables) + "]"


def _inputs(sizes):
    return list(itertools.product(*[range(n) for n in sizes]))


def _radix(sizes):
    w, out = 1, []
    for n in reversed(sizes):
        out.append(w)
        w *= n
    return tuple(reversed(out))


def _eval(table, sizes, args):
    return table[sum(a * w for a, w in zip(args, _radix(sizes)))]


def build_finset_self_indexed(bound, fiber_bound=None, name=None):
    """Finite sets indexed over finite sets; d is not discrete."""
    fiber_bound = bound if fiber_bound is None else fiber_bound
    base = FinSetBase(bound)
    objs = tuple(SetFamily(s, sz) for s in base.objects
                 for sz in itertools.product(range(fiber_bound + 1), repeat=len(s)))

    def d_hom(x, y):
        out = []
        for f in base.hom(x.index, y.index):
            pos = f.positions()
            if any(x.sizes[i] != y.sizes[pos[i]] for i in range(len(pos))):
                continue
            choices = [list(itertools.permutations(range(n))) for n in x.sizes]
            out.extend(FiberIso(f, x, y, p) for p in itertools.product(*choices))
        return out

    def d_comp(g, f):
        pos = f.shape.positions()
        perms = tuple(tuple(g.perms[pos[i]][e] for e in f.perms[i]) for i in range(len(pos)))
        return FiberIso(fs.compose(g.shape, f.shape), f.dom, g.cod, perms)

    def d_id(x):
        return FiberIso(fs.identity(x.index), x, x, tuple(tuple(range(n)) for n in x.sizes))

    def m_hom(x, y):
        out = []
        for f in base.hom(x.index, y.index):
            per_j = []
            for j, fib in enumerate(_fibers(f)):
                n = len(_inputs([x.sizes[i] for i in fib]))
                per_j.append(list(itertools.product(range(y.sizes[j]), repeat=n)))
            out.extend(FiberMap(f, x, y, t) for t in itertools.product(*per_j))
        return out

    def m_comp(b, a):
        f, g = a.shape, b.shape
        ff, gf = _fibers(f), _fibers(g)
        xs, ys = a.dom.sizes, a.cod.sizes
        tables = []
        for k, js in enumerate(gf):
            src = sorted(i for j in js for i in ff[j])
            col = {i: t for t, i in enumerate(src)}
            vals = []
            for v in _inputs([xs[i] for i in src]):
                mid = tuple(_eval(a.tables[j], [xs[i] for i in ff[j]], [v[col[i]] for i in ff[j]])
                            for j in js)
                vals.append(_eval(b.tables[k], [ys[j] for j in js], mid))
            tables.append(tuple(vals))
        return FiberMap(fs.compose(g, f), a.dom, b.cod, tuple(tables))

    def m_id(x):
        return FiberMap(fs.identity(x.index), x, x, tuple(tuple(range(n)) for n in x.sizes))

    D = RuleCategory(objs, d_hom, lambda r: r.dom, lambda r: r.cod, d_id, d_comp, name="D")
    M = RuleCategory(objs, m_hom, lambda a: a.dom, lambda a: a.cod, m_id, m_comp, name="M")
    d = FinFunctor(D, base, lambda x: x.index, lambda r: r.shape, name="d")
    p = FinFunctor(M, base, lambda x: x.index, lambda a: a.shape, name="p")

    def lift_rule(a, sq, top, bottom):
        # b_l(u) = bottom_l^{-1}( a_{l'}(x) ), x_i = top_kappa(u_kappa) for the kappa over i
        k, g, l = sq.top, sq.left, sq.bottom
        kp, lp = k.positions(), l.positions()
        u, v = top.dom, bottom.dom
        xs = a.dom.sizes
        afib = _fibers(a.shape)
        tables = []
        for lam, ks in enumerate(_fibers(g)):
            fib = afib[lp[lam]]
            kappa_of = {kp[kappa]: kappa for kappa in ks}
            col = {kappa: t for t, kappa in enumerate(ks)}
            inv = {w: e for e, w in enumerate(bottom.perms[lam])}
            vals = []
            for uu in _inputs([u.sizes[kappa] for kappa in ks]):
                xv = [top.perms[kappa_of[i]][uu[col[kappa_of[i]]]] for i in fib]
                vals.append(inv[_eval(a.tables[lp[lam]], [xs[i] for i in fib], xv)])
            tables.append(tuple(vals))
        return FiberMap(g, u, v, tuple(tables))

    return FiberedMulticategory(base, D, M, d, p, lift_rule=lift_rule,
                                name=name or f"SetSet<={bound}",
                                info={"kind": "finset_self_indexed", "fiber_bound": fiber_bound})


# -------------------------------------------------------------- generators

def ring_table(n):
    """``Z/n`` as a commutative-ring table."""
    el = [str(i) for i in range(n)]
    return {"elements": el, "zero": "0", "one": "1" if n > 1 else "0",
            "add": {(a, b): str((int(a) + int(b)) % n) for a in el for b in el},
            "mul": {(a, b): str((int(a) * int(b)) % n) for a in el for b in el}}


def ring_from_table(t):
    try:
        el = [str(e) for e in t["elements"]]
        add, mul = t["add"], t["mul"]
        zero, one = str(t["zero"]), str(t["one"])
    except (KeyError, TypeError) as e:
        raise BadParams(f"ring table needs elements/add/mul/zero/one: {e}") from None
    look = lambda tab, a, b: str(tab[(a, b)] if (a, b) in tab else tab[f"{a},{b}"])  # noqa: E731
    try:
        cat = catalog.monoid_category(el, lambda g, f: look(mul, g, f), one, name=t.get("name", "R"))
        cat.enrichment = catalog.Enrichment(lambda a, b: look(add, a, b), lambda x, y: zero)
        for a in el:
            for b in el:
                if look(add, a, b) != look(add, b, a):
                    raise BadParams("addition is not commutative")
                if look(mul, a, b) not in el:
                    raise BadParams("multiplication leaves the carrier")
    except KeyError as e:
        raise BadParams(f"incomplete ring table: {e}") from None
    return cat


def _category_param(spec):
    if isinstance(spec, (FinCategory, RuleCategory)):
        return spec
    named = {"terminal": catalog.terminal_category, "chain3": catalog.chain3,
             "mat2": lambda: catalog.matrix_category(2, 2), "mat2_1": lambda: catalog.matrix_category(2, 1)}
    if isinstance(spec, str):
        if spec in named:
            return named[spec]()
        if spec.startswith("Z/") and spec[2:].isdigit():
            return catalog.ring_category(int(spec[2:]))
    raise BadParams(f"unknown category {spec!r}")


GENERATORS = ("terminal", "ring", "sequential", "pseudo_identity", "finset_self_indexed")


def gen_example(name, params=None, bound=2):
    """One of the named example instances."""
    params = dict(params or {})
    if not isinstance(bound, int) or bound < 0:
        raise BadParams("bound must be a non-negative integer")
    if name == "terminal":
        fm = build_standard(SequentialPresentation(catalog.terminal_category()), bound, name=f"terminal<={bound}")
    elif name == "ring":
        if "table" in params:
            cat = ring_from_table(params["table"])
        else:
            n = params.get("n", 2)
            if not isinstance(n, int) or n < 1:
                raise BadParams("ring needs a positive integer n")
            cat = catalog.ring_category(n)
        fm = build_standard(SequentialPresentation(cat), bound, name=f"ring({cat.name})<={bound}")
    elif name == "sequential":
        cat = _category_param(params.get("category", "chain3"))
        fm = build_standard(SequentialPresentation(cat), bound, name=f"seq({cat.name})<={bound}")
    elif name == "pseudo_identity":
        if bound < 1:
            raise BadParams("pseudo_identity needs bound >= 1")
        other = FinSet(params.get("label", "pt"), [params.get("element", "u")], user=True)
        cat = _category_param(params.get("category", "terminal"))
        pres = SequentialPresentation(cat)
        fm = build_standard(pres, bound, extra=[other], name=f"pseudo({cat.name})<={bound}")
        x = pres.objects[0]
        one = fs.skeleton(1)
        i_fam, j_fam = Family(one, (x,)), Family(other, (x,))
        # the identity of x over [1], reindexed along the bijection other -> [1]
        sigma = FinMap(other, one, one.elements)
        a = fm.M.identity(i_fam)
        sq = next(s for s in fm.base.pullback_squares(fs.identity(one), a.shape)
                  if s.apex == other and s.top == sigma)
        top = fm.d_lifts(sigma, i_fam)[0]
        fm.info["pseudo_identity"] = special_lift(fm, a, sq, top, fm.D.identity(i_fam))
        assert fm.D.cod(top) == i_fam and fm.D.dom(top) == j_fam
    elif name == "finset_self_indexed":
        fb = params.get("fiber_bound", bound)
        if not isinstance(fb, int) or fb < 0:
            raise BadParams("fiber_bound must be a non-negative integer")
        fm = build_finset_self_indexed(bound, fb)
    else:
        raise BadParams(f"unknown generator {name!r}; expected one of {', '.join(GENERATORS)}")
    fm.info["generator"] = {"name": name, "params": _jsonable(params), "bound": bound}
    return fm


def _jsonable(params):
    out = {}
    for k, v in params.items():
        out[k] = v if isinstance(v, (int, str, float, bool, type(None), dict, list)) else getattr(v, "name", str(v))
    return out


__all__ = [
    "SymmetricPresentation", "SequentialPresentation", "FunctionPresentation", "TablePresentation",
    "SeqSingle", "FnSingle", "Family", "Reindex", "FamilyArrow", "SetFamily", "FiberIso", "FiberMap",
    "build_standard", "build_finset_self_indexed", "check_presentation", "check_extensivity",
    "family_split", "family_assemble", "family_split_assemble", "gen_example", "GENERATORS",
    "pullback_family", "standard_lift", "standard_triangle", "standard_monoid", "fold_monoid",
    "cocone_monoid",
]
