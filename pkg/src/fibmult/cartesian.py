"""Cartesian structures: special triangles, covariant reindexing and products.

A special triangle ``(f, a, b)`` has top ``f: X -> Y`` in D and sides
``a: X -> Z``, ``b: Y -> Z`` in M; ``b`` is the covariant reindexing ``f_!a``
over ``h = p(b)``.
"""
from __future__ import annotations

from typing import NamedTuple

from .core.multicategory import FiberedMulticategory, pullback_square_with, special_lift, square_str
from .core.monoids import verify_monoid
from .core.base import FinSetBase
from .errors import (Ambiguous, BoundTooSmall, InvalidInput, InvalidPresentation, MissingDiagonal,
                     MissingProducts, NoLift, NoTriangle, NotASection, ShapeMismatch)
from .fincat import FinFunctor, RuleCategory
from .violations import Violation


class SpecialTriangle(NamedTuple):
    top: object
    left: object
    right: object

    def __str__(self):
        return f"{self.top} ; {self.left} => {self.right}"


class CovariantSquare(NamedTuple):
    """``top: X -> Y`` in D; ``left: X -> Z``, ``bottom: Z -> W``, ``right: Y -> W`` in M."""

    top: object
    left: object
    bottom: object
    right: object

    def __str__(self):
        return " | ".join(map(str, self))


def tri_str(t):
    return " | ".join(map(str, t))


def triangle_problems(fm):
    """Every ``(a, f, h)`` with ``f`` a D-arrow out of ``dom a`` and ``h . d(f) = p(a)``."""
    base, D, M, d, p = fm.base, fm.D, fm.M, fm.d, fm.p
    for a in M.arrows():
        pa = p(a)
        k = base.cod(pa)
        for f in D.out_arrows(M.dom(a)):
            df = d(f)
            for h in base.hom(base.cod(df), k):
                if base.compose(h, df) == pa:
                    yield a, f, h


class CartesianStructure:
    """Special triangles on a host, given extensionally or by ``rule(a, f, h) -> b``."""

    def __init__(self, host, triangles=None, rule=None, name=""):
        if triangles is None and rule is None:
            rule = host.info.get("triangle_rule")
            if rule is None:
                raise InvalidInput(f"{host.name} carries no cartesian structure")
        self.host = host
        self.rule = rule
        self.name = name or f"cart({host.name})"
        self._triangles = None if triangles is None else tuple(dict.fromkeys(SpecialTriangle(*t) for t in triangles))
        self._index = None
        self._members = None

    @property
    def triangles(self):
        if self._triangles is None:
            self._triangles = tuple(dict.fromkeys(
                SpecialTriangle(f, a, self.rule(a, f, h)) for a, f, h in triangle_problems(self.host)))
        return self._triangles

    def index(self):
        """``(a, f, h) -> [b, ...]``."""
        if self._index is None:
            idx = {}
            p = self.host.p
            for t in self.triangles:
                idx.setdefault((t.left, t.top, p(t.right)), []).append(t.right)
            self._index = idx
        return self._index

    def is_special(self, top, left, right):
        if self._members is None:
            self._members = set(self.triangles)
        return SpecialTriangle(top, left, right) in self._members

    def with_triangles(self, triangles, name=None):
        return CartesianStructure(self.host, triangles=triangles, name=name or self.name)

    def __repr__(self):
        return f"CartesianStructure({self.name})"


def coreindex(cs, a, lift_f, h):
    """``f_!a``: the unique ``b`` over ``h`` making ``(lift_f, a, b)`` special."""
    fm = cs.host
    base = fm.base
    df = fm.d(lift_f)
    if fm.D.dom(lift_f) != fm.M.dom(a) or base.dom(h) != base.cod(df) or base.compose(h, df) != fm.p(a):
        raise ShapeMismatch("base triangle does not commute")
    if cs._triangles is None:
        return cs.rule(a, lift_f, h)
    bs = cs.index().get((a, lift_f, h), [])
    if not bs:
        raise NoTriangle(f"no special triangle for {a} along {lift_f}")
    if len(bs) > 1:
        raise Ambiguous(f"{len(bs)} special triangles for {a} along {lift_f}")
    return bs[0]


# ------------------------------------------------------------ verification

def _index_squares(fm):
    by_right, by_rb = {}, {}
    for s in fm.special:
        by_right.setdefault(s.right, []).append(s)
        by_rb.setdefault((s.right, s.bottom), []).append(s)
    return by_right, by_rb


def _commuting_tops(fm, f, gx, gy):
    """D-arrows ``f'`` with ``f . gx == gy . f'``."""
    D = fm.D
    target = D.compose(f, gx)
    return [f2 for f2 in D.hom(D.dom(gx), D.dom(gy)) if D.compose(gy, f2) == target]


def verify_cartesian_structure(cs, *, limit=None):
    """Violations of the four conditions and of subcategory closure."""
    fm = cs.host
    base, D, M, d, p = fm.base, fm.D, fm.M, fm.d, fm.p
    out = []

    def add(v):
        out.append(v)
        return limit is not None and len(out) >= limit

    T = cs.triangles
    for t in T:
        f, a, b = t
        if (D.dom(f) != M.dom(a) or D.cod(f) != M.dom(b) or M.cod(a) != M.cod(b)
                or base.compose(p(b), d(f)) != p(a)):
            if add(Violation.of("TriangleShapeViolation", triangle=tri_str(t))):
                return out
    if out:
        return out
    idx = cs.index()
    for a, f, h in triangle_problems(fm):
        n = len(idx.get((a, f, h), ()))
        if n == 0:
            if add(Violation.of("ExistenceViolation", arrow=a, top=f, base=h,
                                message="no special triangle (covariant reindexing missing)")):
                return out
        elif n > 1:
            if add(Violation.of("UniquenessViolation", arrow=a, top=f, base=h,
                                message=f"{n} special triangles")):
                return out
    member = cs.is_special
    for a in M.arrows():
        x = M.dom(a)
        if not member(D.identity(x), a, a):
            if add(Violation.of("SubcategoryViolation", arrow=a, message="identity triangle not special")):
                return out
    by_left = {}
    for t in T:
        by_left.setdefault(t.left, []).append(t)
    for t in T:
        for t2 in by_left.get(t.right, ()):
            if not member(D.compose(t2.top, t.top), t.left, t2.right):
                if add(Violation.of("SubcategoryViolation", first=tri_str(t), second=tri_str(t2),
                                    message="composite triangle not special")):
                    return out
    for t in T:
        for c in M.out_arrows(M.cod(t.left)):
            if not member(t.top, M.compose(c, t.left), M.compose(c, t.right)):
                if add(Violation.of("PostCompositionViolation", triangle=tri_str(t), arrow=c)):
                    return out
    by_top = {}
    for t in T:
        by_top.setdefault(t.top, []).append(t)
    for s in fm.special:
        for t in by_top.get(s.bottom, ()):
            if not member(s.top, M.compose(t.left, s.left), M.compose(t.right, s.right)):
                if add(Violation.of("FrobeniusViolation", square=square_str(s), triangle=tri_str(t),
                                    message="pasting of square atop triangle not special")):
                    return out
    by_right, by_rb = _index_squares(fm)
    tops = {}
    for t in T:
        f, a, b = t
        for sa in by_right.get(a, ()):
            for sb in by_rb.get((b, sa.bottom), ()):
                key = (f, sa.top, sb.top, sb.left, sa.left)
                if key not in tops:
                    tops[key] = [f2 for f2 in _commuting_tops(fm, f, sa.top, sb.top)
                                 if base.compose(p(sb.left), d(f2)) == p(sa.left)]
                for f2 in tops[key]:
                    if not member(f2, sa.left, sb.left):
                        if add(Violation.of("BeckChevalleyViolation", triangle=tri_str(t), front=square_str(sa),
                                            back=square_str(sb), top=f2, message="left face not special")):
                            return out
    return out


# ------------------------------------------------------------ equations

def frobenius_equation_violations(cs, limit=100):
    """``f'_!(c . f^*b) == (f_!c) . b`` over every special square and every ``c``."""
    fm = cs.host
    base, M, p, d = fm.base, fm.M, fm.p, fm.d
    out = []
    for s in fm.special:
        f2, f, b, a = s
        for c in M.out_arrows(M.cod(a)):
            pc = p(c)
            df = d(f)
            for h in base.hom(base.cod(df), base.cod(pc)):
                if base.compose(h, df) != pc:
                    continue
                fc = coreindex(cs, c, f, h)
                lhs = coreindex(cs, M.compose(c, a), f2, base.compose(h, p(b)))
                if lhs != M.compose(fc, b):
                    out.append(Violation.of("FrobeniusViolation", square=square_str(s), arrow=c, base=h))
                    if len(out) >= limit:
                        return out
    return out


def beck_chevalley_equation_violations(cs, limit=100):
    """``g^*(f_!a) == f'_!(g^*a)`` over every admissible configuration."""
    fm = cs.host
    base, D, M, p, d = fm.base, fm.D, fm.M, fm.p, fm.d
    by_right, by_rb = _index_squares(fm)
    out = []
    for a, f, h in triangle_problems(fm):
        b = coreindex(cs, a, f, h)
        for sa in by_right.get(a, ()):
            for sb in by_rb.get((b, sa.bottom), ()):
                for f2 in _commuting_tops(fm, f, sa.top, sb.top):
                    h2 = p(sb.left)
                    if base.compose(h2, d(f2)) != p(sa.left):
                        continue
                    if coreindex(cs, sa.left, f2, h2) != sb.left:
                        out.append(Violation.of("BeckChevalleyViolation", arrow=a, top=f, front=square_str(sa),
                                                back=square_str(sb)))
                        if len(out) >= limit:
                            return out
    return out


def coherence_violations(cs, limit=100):
    """For iso tops, covariant reindexing along ``f`` equals contravariant along ``f^-1``."""
    fm = cs.host
    base, D, M, d, p = fm.base, fm.D, fm.M, fm.d, fm.p
    out = []
    checked = 0
    for a, f, h in triangle_problems(fm):
        g = D.inverse(f)
        if g is None:
            continue
        checked += 1
        z = M.cod(a)
        sq = pullback_square_with(fm, d(g), h, base.identity(base.cod(p(a))), p(a))
        if coreindex(cs, a, f, h) != special_lift(fm, a, sq, g, D.identity(z)):
            out.append(Violation.of("CoherenceViolation", arrow=a, top=f))
            if len(out) >= limit:
                break
    return out, checked


# -------------------------------------------------------- covariant squares

class CovariantPresentation:
    def __init__(self, host, squares):
        self.host = host
        self.squares = frozenset(CovariantSquare(*s) for s in squares)


def cosquare_problems(fm):
    base, M, p, d = fm.base, fm.M, fm.p, fm.d
    D = fm.D
    for a in M.arrows():
        pa = p(a)
        for c in M.out_arrows(M.cod(a)):
            pca = base.compose(p(c), pa)
            k = base.cod(pca)
            for f in D.out_arrows(M.dom(a)):
                df = d(f)
                for h in base.hom(base.cod(df), k):
                    if base.compose(h, df) == pca:
                        yield a, f, c, h


def to_cosquares(cs):
    M = cs.host.M
    return CovariantPresentation(cs.host, (CovariantSquare(f, a, c, coreindex(cs, M.compose(c, a), f, h))
                                           for a, f, c, h in cosquare_problems(cs.host)))


def from_cosquares(cp):
    M = cp.host.M
    tris = [(s.top, s.left, s.right) for s in cp.squares if s.bottom == M.identity(M.cod(s.left))]
    return CartesianStructure(cp.host, triangles=sorted(tris, key=str))


def verify_cosquares(cp, *, limit=None):
    """Opfibration uniqueness, horizontal pasting, Frobenius and the cube law."""
    fm = cp.host
    base, D, M, d, p = fm.base, fm.D, fm.M, fm.d, fm.p
    S = cp.squares
    out = []

    def add(v):
        out.append(v)
        return limit is not None and len(out) >= limit

    idx = {}
    for s in S:
        f, a, c, b = s
        if (D.dom(f) != M.dom(a) or M.cod(a) != M.dom(c) or D.cod(f) != M.dom(b) or M.cod(b) != M.cod(c)
                or base.compose(p(b), d(f)) != base.compose(p(c), p(a))):
            if add(Violation.of("CosquareShapeViolation", square=str(s))):
                return out
            continue
        idx.setdefault((a, f, c, p(b)), []).append(b)
    for a, f, c, h in cosquare_problems(fm):
        n = len(idx.get((a, f, c, h), ()))
        if n != 1:
            kind = "ExistenceViolation" if n == 0 else "UniquenessViolation"
            if add(Violation.of(kind, arrow=a, top=f, bottom=c, base=h, message=f"{n} covariant squares")):
                return out
    by_left = {}
    for s in S:
        by_left.setdefault(s.left, []).append(s)
    for s in S:
        for s2 in by_left.get(s.right, ()):
            pasted = CovariantSquare(D.compose(s2.top, s.top), s.left, M.compose(s2.bottom, s.bottom), s2.right)
            if pasted not in S:
                if add(Violation.of("PastingViolation", first=str(s), second=str(s2))):
                    return out
    by_top = {}
    for s in S:
        by_top.setdefault(s.top, []).append(s)
    for q in fm.special:
        for s in by_top.get(q.bottom, ()):
            pasted = CovariantSquare(q.top, M.compose(s.left, q.left), s.bottom, M.compose(s.right, q.right))
            if pasted not in S:
                if add(Violation.of("FrobeniusViolation", square=square_str(q), cosquare=str(s))):
                    return out
    by_right, by_rb = _index_squares(fm)
    for s in S:
        f, a, c, b = s
        for sc in by_right.get(c, ()):
            for sa in by_rb.get((a, sc.top), ()):
                for sb in by_rb.get((b, sc.bottom), ()):
                    for f2 in _commuting_tops(fm, f, sa.top, sb.top):
                        if base.compose(p(sb.left), d(f2)) != base.compose(p(sc.left), p(sa.left)):
                            continue
                        if CovariantSquare(f2, sa.left, sc.left, sb.left) not in S:
                            if add(Violation.of("BC2Violation", cosquare=str(s), bottom=square_str(sc),
                                                front=square_str(sa), back=square_str(sb), top=f2)):
                                return out
    return out


def triangles_cosquares_convert(x, *, check=True):
    """Triangles to covariant squares or back; invalid input raises InvalidPresentation."""
    if isinstance(x, CartesianStructure):
        if check:
            bad = verify_cartesian_structure(x, limit=1)
            if bad:
                raise InvalidPresentation(f"triangle presentation invalid: {bad[0]}")
        return to_cosquares(x)
    if isinstance(x, CovariantPresentation):
        if check:
            bad = verify_cosquares(x, limit=1)
            if bad:
                raise InvalidPresentation(f"covariant presentation invalid: {bad[0]}")
        return from_cosquares(x)
    raise InvalidPresentation(f"cannot convert {type(x).__name__}")


# ---------------------------------------------------------------- products

class ProductCertificate(NamedTuple):
    kind: str
    X: object
    f: object
    P: object
    pi: object
    u: object
    evidence: dict


def _size(base, obj):
    return len(obj) if isinstance(base, FinSetBase) else 0


def _test_bound(fm, tb):
    if tb is not None:
        return tb
    b = fm.bound
    return b if b is not None else 0


def _lift(fm, f, y):
    lifts = fm.d_lifts(f, y)
    if not lifts:
        raise NoLift(f"no d-lift of {f} at {y}")
    return lifts[0]


def _check_source(fm, x, f):
    if fm.base.dom(f) != fm.over(x):
        raise ShapeMismatch(f"{f} does not start at the base object under {x}")


def _bijective(images, targets):
    return len(images) == len(targets) and set(images) == targets


def _hom_by_p(fm, x, y):
    """``M(x, y)`` grouped by base arrow; memoized on the instance."""
    memo = fm.__dict__.setdefault("_hom_by_p", {})
    r = memo.get((x, y))
    if r is None:
        r = {}
        for a in fm.M.hom(x, y):
            r.setdefault(fm.p(a), []).append(a)
        memo[(x, y)] = r
    return r


class _Replay:
    """Iterate a generator once; later passes replay what was produced so far first."""

    def __init__(self, it):
        self.it, self.seen = iter(it), []

    def __iter__(self):
        i = 0
        while True:
            if i == len(self.seen):
                try:
                    self.seen.append(next(self.it))
                except StopIteration:
                    return
            yield self.seen[i]
            i += 1


def _cone_problems(fm, X, f, P, c, tb):
    """``(square, lifted test arrows, target cones)`` for each test square and d-lift."""
    base = fm.base
    J = base.cod(f)
    for K in base.objects:
        if _size(base, K) > tb:
            continue
        for h in base.hom(K, J):
            for sq in base.pullback_squares(f, h):
                for Q in fm.d.objects_over(K):
                    ts = _hom_by_p(fm, Q, P).get(h, ())
                    for fl in fm.d_lifts(sq.top, Q):
                        targets = set(_hom_by_p(fm, fm.D.dom(fl), X).get(sq.left, ()))
                        yield sq, [special_lift(fm, t, sq, fl, c) for t in ts], targets


def _universal_evidence(fm, pi, problems, tb):
    """Counts of the test cones if ``pi`` is universal, else None."""
    M = fm.M
    cones, squares = 0, set()
    for sq, lifted, targets in problems:
        squares.add(sq)
        cones += len(targets)
        if not _bijective([M.compose(pi, t) for t in lifted], targets):
            return None
    return {"test_bound": tb, "pullback_squares": len(squares), "cones": cones}


def find_universal_product(fm, X, f, *, test_bound=None):
    _check_source(fm, X, f)
    base, M, p = fm.base, fm.M, fm.p
    tb = _test_bound(fm, test_bound)
    idx = base.identity(fm.over(X))
    for P in fm.d.objects_over(base.cod(f)):
        c = _lift(fm, f, P)
        problems = _Replay(_cone_problems(fm, X, f, P, c, tb))
        for pi in _hom_by_p(fm, fm.D.dom(c), X).get(idx, ()):
            ev = _universal_evidence(fm, pi, problems, tb)
            if ev is not None:
                return ProductCertificate("universal", X, f, P, pi, None, ev)
    return None


def _opcart_evidence(fm, u, tb):
    base, M, p = fm.base, fm.M, fm.p
    X, P = M.dom(u), M.cod(u)
    f = p(u)
    J = base.cod(f)
    tested = 0
    for Q in M.objects:
        if _size(base, fm.over(Q)) > tb and Q != P:
            continue
        by_g = _hom_by_p(fm, P, Q)
        by_v = _hom_by_p(fm, X, Q)
        for g in base.hom(J, fm.over(Q)):
            targets = set(by_v.get(base.compose(g, f), ()))
            tested += len(targets)
            if not _bijective([M.compose(t, u) for t in by_g.get(g, ())], targets):
                return None
    return tested


def _stability(fm, u, tb):
    base, M, p = fm.base, fm.M, fm.p
    f = p(u)
    J = base.cod(f)
    X, P = M.dom(u), M.cod(u)
    reindexings = 0
    for L in base.objects:
        if _size(base, L) > tb:
            continue
        for l in base.hom(L, J):
            for sq in base.pullback_squares(l, f):
                for tl in fm.d_lifts(sq.top, X):
                    for bl in fm.d_lifts(l, P):
                        u2 = special_lift(fm, u, sq, tl, bl)
                        reindexings += 1
                        if _opcart_evidence(fm, u2, tb) is None:
                            return None
    return reindexings


def find_opcartesian(fm, X, f, *, stable=False, test_bound=None):
    _check_source(fm, X, f)
    M, p = fm.M, fm.p
    tb = _test_bound(fm, test_bound)
    for P in fm.d.objects_over(fm.base.cod(f)):
        for u in M.hom(X, P):
            if p(u) != f:
                continue
            tested = _opcart_evidence(fm, u, tb)
            if tested is None:
                continue
            ev = {"test_bound": tb, "factorizations": tested}
            if stable:
                r = _stability(fm, u, tb)
                if r is None:
                    continue
                ev["reindexings"] = r
            return ProductCertificate("stably-opcartesian" if stable else "opcartesian", X, f, P, None, u, ev)
    return None


def diagonal_data(fm, X, f):
    """Kernel pair square of ``f``, the d-lift ``h`` of its top at X and ``Delta`` with ``h Delta = id``."""
    base, D = fm.base, fm.D
    try:
        sq, delta = base.diagonal(f)
    except (BoundTooSmall, MissingProducts) as e:
        raise MissingDiagonal(str(e)) from None
    ix = D.identity(X)
    for hl in fm.d_lifts(sq.top, X):
        for dl in D.hom(X, D.dom(hl)):
            if fm.d(dl) == delta and D.compose(hl, dl) == ix:
                return sq, hl, dl
    raise MissingDiagonal(f"no d-lift of the diagonal of {f} at {X}")


def _algebraic_pairs(cs, X, f, P, sq, hl, dl):
    fm = cs.host
    base, M, p = fm.base, fm.M, fm.p
    c = _lift(fm, f, P)
    fp = fm.D.dom(c)
    idx = base.identity(fm.over(X))
    idj = base.identity(base.cod(f))
    idp = M.identity(P)
    target = coreindex(cs, M.identity(X), dl, sq.left)
    pis = _hom_by_p(fm, fp, X).get(idx, ())
    for u in M.hom(X, P):
        if p(u) != f:
            continue
        fu = special_lift(fm, u, sq, hl, c)
        for pi in pis:
            if M.compose(pi, fu) == target and coreindex(cs, M.compose(u, pi), c, idj) == idp:
                yield pi, u


def find_algebraic_product(cs, X, f):
    fm = cs.host
    _check_source(fm, X, f)
    sq, hl, dl = diagonal_data(fm, X, f)
    for P in fm.d.objects_over(fm.base.cod(f)):
        for pi, u in _algebraic_pairs(cs, X, f, P, sq, hl, dl):
            return ProductCertificate("algebraic", X, f, P, pi, u, {"diagonal": str(dl), "kernel_pair": str(sq.apex)})
    return None


def vertical_iso(fm, x, y):
    """A vertical isomorphism ``x -> y`` in M, or None."""
    M = fm.M
    idx = fm.base.identity(fm.over(x))
    for a in M.hom(x, y):
        if fm.p(a) == idx and M.is_iso(a):
            return a
    return None


def algebraic_stability_violations(cs, cert, *, test_bound=None):
    """Reindexing an algebraic product along base arrows into its codomain gives one again."""
    fm = cs.host
    base, D = fm.base, fm.D
    tb = _test_bound(fm, test_bound)
    J = base.cod(cert.f)
    out = []
    for L in base.objects:
        if _size(base, L) > tb:
            continue
        for l in base.hom(L, J):
            sq = base.chosen_pullback(l, cert.f)
            tl = _lift(fm, sq.top, cert.X)
            bl = _lift(fm, l, cert.P)
            u2 = special_lift(fm, cert.u, sq, tl, bl)
            X2, P2, f2 = D.dom(tl), D.dom(bl), sq.left
            try:
                dsq, hl, dl = diagonal_data(fm, X2, f2)
            except MissingDiagonal:
                continue
            if not any(u == u2 for _, u in _algebraic_pairs(cs, X2, f2, P2, dsq, hl, dl)):
                out.append(Violation.of("StabilityViolation", along=l, X=cert.X, f=cert.f))
    return out


class ProductsReport(NamedTuple):
    rows: list
    equivalent: bool
    counterexamples: list
    out_of_range: list

    @property
    def verdict(self):
        return "equivalent" if self.equivalent else "NOT equivalent"


def candidate_pairs(fm, bound):
    base = fm.base
    for X in fm.objects:
        i = fm.over(X)
        if _size(base, i) > bound:
            continue
        for J in base.objects:
            if _size(base, J) > bound:
                continue
            for f in base.hom(i, J):
                yield X, f


def products_equivalence_report(cs, bound=None, *, pairs=None, test_bound=None):
    """AP, UP and SR at every ``(X, f)`` in range; equivalence means pointwise equality.

    AP is None where the base holds no kernel pair of ``f``; those pairs are
    also listed in ``out_of_range``.
    """
    fm = cs.host
    bound = _test_bound(fm, bound)
    tb = bound if test_bound is None else test_bound
    rows, bad, skipped = [], [], []
    for X, f in (pairs if pairs is not None else candidate_pairs(fm, bound)):
        up = find_universal_product(fm, X, f, test_bound=tb)
        sr = find_opcartesian(fm, X, f, stable=True, test_bound=tb)
        try:
            ap = find_algebraic_product(cs, X, f)
        except MissingDiagonal as e:
            # AP undecidable here; UP and SR must still agree
            skipped.append((X, f, str(e)))
            row = {"X": X, "f": f, "AP": None, "UP": up is not None, "SR": sr is not None,
                   "carriers_agree": None}
            rows.append(row)
            if row["UP"] != row["SR"] or (up is not None and vertical_iso(fm, up.P, sr.P) is None):
                bad.append(row)
            continue
        flags = (ap is not None, up is not None, sr is not None)
        carriers = all(flags) and vertical_iso(fm, ap.P, up.P) is not None and vertical_iso(fm, ap.P, sr.P) is not None
        row = {"X": X, "f": f, "AP": flags[0], "UP": flags[1], "SR": flags[2],
               "carriers_agree": carriers if all(flags) else None}
        rows.append(row)
        if len(set(flags)) != 1 or (all(flags) and not carriers):
            bad.append(row)
    return ProductsReport(rows, not bad, bad, skipped)


def sums_products_report(cs, bound=None, *, test_bound=None):
    """Certified sums (stably opcartesian arrows) exist exactly where universal products do, on the same carrier."""
    fm = cs.host
    bound = _test_bound(fm, bound)
    tb = bound if test_bound is None else test_bound
    rows, bad = [], []
    for X, f in candidate_pairs(fm, bound):
        up = find_universal_product(fm, X, f, test_bound=tb)
        sr = find_opcartesian(fm, X, f, stable=True, test_bound=tb)
        same = (up is None) == (sr is None) and (up is None or vertical_iso(fm, up.P, sr.P) is not None)
        row = {"X": X, "f": f, "sum": sr is not None, "product": up is not None, "agree": same}
        rows.append(row)
        if not same:
            bad.append(row)
    return ProductsReport(rows, not bad, bad, [])


# ------------------------------------------------------ fibered hom monoid

class DSection:
    """A section of d: base objects to objects, base arrows to D-arrows."""

    def __init__(self, obj, arrow, name="s"):
        self._obj, self._arrow, self.name = obj, arrow, name

    def obj(self, i):
        return self._obj[i] if isinstance(self._obj, dict) else self._obj(i)

    def arrow(self, f):
        return self._arrow[f] if isinstance(self._arrow, dict) else self._arrow(f)


def check_section(fm, s):
    base, D = fm.base, fm.D
    for i in base.objects:
        if fm.over(s.obj(i)) != i:
            raise NotASection(f"{s.name}({i}) is not over {i}")
    for f in base.arrows():
        a = s.arrow(f)
        x, y = s.obj(base.dom(f)), s.obj(base.cod(f))
        if a not in D.hom(x, y) or fm.d(a) != f:
            raise NotASection(f"{s.name}({f}) = {a} is not a D-arrow over {f}")
        for g in base.out_arrows(base.cod(f)):
            if s.arrow(base.compose(g, f)) != D.compose(s.arrow(g), a):
                raise NotASection(f"{s.name} is not functorial at {g} . {f}")
    for i in base.objects:
        if s.arrow(base.identity(i)) != D.identity(s.obj(i)):
            raise NotASection(f"{s.name} does not preserve the identity of {i}")


class HObj(NamedTuple):
    base: object
    arrow: object

    def __str__(self):
        return f"<{self.base};{self.arrow}>"


class HArrow(NamedTuple):
    kind: str
    f: object
    dom: HObj
    cod: HObj

    def __str__(self):
        return f"{self.kind}[{self.f}]"


def fibered_hom_monoid(cs, s, t):
    """The fibered hom-set of sections ``s, t`` as a fibered multicategory, with its violations."""
    fm = cs.host
    base, M, p = fm.base, fm.M, fm.p
    check_section(fm, s)
    check_section(fm, t)

    def pull(f, beta):
        i, j = base.dom(f), base.cod(f)
        sq = pullback_square_with(fm, f, base.identity(i), f, base.identity(j))
        return special_lift(fm, beta, sq, s.arrow(f), t.arrow(f))

    def push(f, alpha):
        return coreindex(cs, M.compose(t.arrow(f), alpha), s.arrow(f), base.identity(base.cod(f)))

    objs = tuple(HObj(i, a) for i in base.objects for a in M.hom(s.obj(i), t.obj(i)) if p(a) == base.identity(i))

    def make(kind, ok):
        def hom(x, y):
            return [HArrow(kind, f, x, y) for f in base.hom(x.base, y.base) if ok(f, x, y)]
        return RuleCategory(objs, hom, lambda a: a.dom, lambda a: a.cod,
                            lambda x: HArrow(kind, base.identity(x.base), x, x),
                            lambda g, f: HArrow(kind, base.compose(g.f, f.f), f.dom, g.cod), name=f"H_{kind}")

    HD = make("d", lambda f, x, y: pull(f, y.arrow) == x.arrow)
    HM = make("m", lambda f, x, y: push(f, x.arrow) == y.arrow)
    d = FinFunctor(HD, base, lambda x: x.base, lambda a: a.f, name="d")
    q = FinFunctor(HM, base, lambda x: x.base, lambda a: a.f, name="p")

    def lift_rule(a, sq, top, bottom):
        for m in HM.hom(top.dom, bottom.dom):
            if m.f == sq.left:
                return m
        raise NoLift(f"no transport of {top.dom} along {sq.left}")

    H = FiberedMulticategory(base, HD, HM, d, q, lift_rule=lift_rule, name=f"hom({s.name},{t.name})",
                             info={"kind": "fibered_hom", "pull": pull, "push": push})
    return H, verify_monoid(H, "fibered")


# -------------------------------------------------------- family structure

def family_triangle_rule(cat, enrichment=None):
    """Covariant reindexing on ``Fam(C)`` arrows: sum over fibers after undoing the iso components."""
    from .fibration_bridge import FamArrow
    from .standard import _fibers
    e = enrichment if enrichment is not None else getattr(cat, "enrichment", None)
    if e is None:
        raise InvalidInput(f"{getattr(cat, 'name', 'category')} carries no enrichment")

    def rule(a, f, h):
        y, z = f.cod, a.cod
        hp = h.positions()
        comps = []
        for j, fib in enumerate(_fibers(f.shape)):
            terms = [cat.compose(a.comps[i], cat.inverse(f.comps[i])) for i in fib]
            comps.append(e.sum(terms, y.entries[j], z.entries[hp[j]]))
        return FamArrow(h, y, z, tuple(comps))

    return rule


def family_cartesian_structure(fm, cat, enrichment=None):
    return CartesianStructure(fm, rule=family_triangle_rule(cat, enrichment), name=f"cart(Fam({cat.name}))")


def family_section(fm, cat):
    """The section picking, over each index set, the constant family at the single object of ``cat``."""
    from .fibration_bridge import FamArrow
    from .standard import Family
    (x,) = cat.objects
    one = cat.identity(x)
    base = fm.base

    def obj(i):
        return Family(i, (x,) * len(i))

    def arrow(f):
        return FamArrow(f, obj(base.dom(f)), obj(base.cod(f)), (one,) * len(base.dom(f)))

    return DSection(obj, arrow, name="const")


__all__ = [
    "SpecialTriangle", "CovariantSquare", "CartesianStructure", "CovariantPresentation", "ProductCertificate",
    "ProductsReport", "DSection", "triangle_problems", "coreindex", "verify_cartesian_structure",
    "frobenius_equation_violations", "beck_chevalley_equation_violations", "coherence_violations",
    "to_cosquares", "from_cosquares", "verify_cosquares", "triangles_cosquares_convert",
    "find_universal_product", "find_algebraic_product", "find_opcartesian", "diagonal_data",
    "algebraic_stability_violations", "products_equivalence_report", "sums_products_report",
    "vertical_iso", "check_section", "fibered_hom_monoid", "family_triangle_rule",
    "family_cartesian_structure", "family_section",
]
