"""Base categories with pullbacks.

``FinSetBase`` is Set_f truncated to a finite universe of index sets: the
skeletal sets ``[0] .. [bound]`` plus optional extra sets of size <= bound.
Pullback squares are enumerated over *all* apexes in the universe, not only
the chosen one, since composites of chosen squares are rarely chosen.
"""
from __future__ import annotations

import itertools

from .. import finset as fs
from ..errors import BoundTooSmall
from ..fincat import Category
from ..finset import FinMap, FinSet, PullbackSquare


class FinSetBase(Category):
    kind = "finset"

    def __init__(self, bound, extra=()):
        if bound < 0:
            raise BoundTooSmall("size bound must be non-negative")
        self.bound = bound
        objs = [fs.skeleton(n) for n in range(bound + 1)]
        for s in extra:
            if len(s) > bound:
                raise BoundTooSmall(f"extra set {s.label} exceeds bound {bound}")
            if s not in objs:
                objs.append(s)
        self.objects = tuple(objs)
        self.name = f"Set_f<={bound}"
        self._hom = {}
        self._squares = {}
        self._by_size = {}
        for s in self.objects:
            self._by_size.setdefault(len(s), []).append(s)

    @property
    def size_bound(self):
        return self.bound

    def describe(self):
        d = {"kind": "finset", "size_bound": self.bound}
        extra = [s for s in self.objects if s.label != f"[{len(s)}]"]
        if extra:
            d["extra"] = [{"label": s.label, "elements": list(s.elements)} for s in extra]
        return d

    def contains(self, s):
        return s in self._by_size.get(len(s), ())

    def hom(self, x, y):
        key = (x, y)
        h = self._hom.get(key)
        if h is None:
            h = self._hom[key] = tuple(fs.all_maps(x, y))
        return h

    def dom(self, a):
        return a.dom

    def cod(self, a):
        return a.cod

    def identity(self, x):
        return fs.identity(x)

    def compose(self, g, f):
        return fs.compose(g, f)

    def is_iso(self, a):
        return a.is_bijective()

    def inverse(self, a):
        return fs.inverse(a) if a.is_bijective() else None

    def sets_of_size(self, n):
        return self._by_size.get(n, [])

    def pullback_squares(self, bottom, right):
        """Every pullback square over the cospan with apex in the universe."""
        key = (bottom, right)
        sq = self._squares.get(key)
        if sq is None:
            pairs = [(x, y) for x, bx in zip(bottom.dom.elements, bottom.images)
                     for y, ry in zip(right.dom.elements, right.images) if bx == ry]
            out = []
            for apex in self._by_size.get(len(pairs), ()):
                for perm in itertools.permutations(pairs):
                    top = FinMap(apex, right.dom, [y for _, y in perm])
                    left = FinMap(apex, bottom.dom, [x for x, _ in perm])
                    out.append(PullbackSquare(bottom, right, apex, top, left))
            sq = self._squares[key] = tuple(out)
        return sq

    def chosen_pullback(self, bottom, right):
        """The canonical pair-set pullback transported onto the skeleton."""
        raw = fs.chosen_pullback(bottom, right)
        n = len(raw.apex)
        if n > self.bound:
            raise BoundTooSmall(f"pullback of {bottom} and {right} has {n} > {self.bound} elements")
        target = fs.skeleton(n)
        back = fs.inverse(fs.canonical_relabel(raw.apex, target))
        return PullbackSquare(bottom, right, target, fs.compose(raw.top, back),
                              fs.compose(raw.left, back))

    def is_pullback(self, top, left, bottom, right):
        return fs.is_pullback(top, left, bottom, right)

    def terminal(self):
        return fs.skeleton(1) if self.bound >= 1 else None

    def diagonal(self, f):
        """Chosen kernel pair of ``f`` and its diagonal, inside the universe."""
        sq = self.chosen_pullback(f, f)
        pos = {(l, t): k for k, l, t in zip(sq.apex.elements, sq.left.images, sq.top.images)}
        diag = FinMap(f.dom, sq.apex, [pos[(x, x)] for x in f.dom.elements])
        return sq, diag


class ExplicitBase(Category):
    """A materialized finite base category; pullbacks found by search."""

    kind = "explicit"

    def __init__(self, cat, chosen=None):
        self.cat = cat
        self.objects = cat.objects
        self.name = getattr(cat, "name", "explicit")
        self._chosen = dict(chosen or {})
        self._squares = {}

    size_bound = None

    def describe(self):
        return {"kind": "explicit"}

    def hom(self, x, y):
        return self.cat.hom(x, y)

    def dom(self, a):
        return self.cat.dom(a)

    def cod(self, a):
        return self.cat.cod(a)

    def identity(self, x):
        return self.cat.identity(x)

    def compose(self, g, f):
        return self.cat.compose(g, f)

    def contains(self, x):
        return x in self.objects

    def is_pullback(self, top, left, bottom, right):
        c = self.cat
        if c.compose(right, top) != c.compose(bottom, left):
            return False
        k, i, l = c.dom(top), c.cod(top), c.cod(left)
        for w in self.objects:
            for x in c.hom(w, i):
                for y in c.hom(w, l):
                    if c.compose(right, x) != c.compose(bottom, y):
                        continue
                    n = sum(1 for u in c.hom(w, k)
                            if c.compose(top, u) == x and c.compose(left, u) == y)
                    if n != 1:
                        return False
        return True

    def pullback_squares(self, bottom, right):
        key = (bottom, right)
        sq = self._squares.get(key)
        if sq is None:
            c = self.cat
            i, l = c.dom(right), c.dom(bottom)
            out = []
            for k in self.objects:
                for top in c.hom(k, i):
                    for left in c.hom(k, l):
                        if self.is_pullback(top, left, bottom, right):
                            out.append(PullbackSquare(bottom, right, k, top, left))
            sq = self._squares[key] = tuple(out)
        return sq

    def chosen_pullback(self, bottom, right):
        key = (bottom, right)
        if key in self._chosen:
            k, top, left = self._chosen[key]
            return PullbackSquare(bottom, right, k, top, left)
        squares = self.pullback_squares(bottom, right)
        if not squares:
            raise BoundTooSmall(f"no pullback of {bottom} and {right} in the base")
        return squares[0]

    def terminal(self):
        for t in self.objects:
            if all(len(self.hom(x, t)) == 1 for x in self.objects):
                return t
        return None

    def diagonal(self, f):
        sq = self.chosen_pullback(f, f)
        c = self.cat
        x = c.dom(f)
        ix = c.identity(x)
        for u in c.hom(x, sq.apex):
            if c.compose(sq.top, u) == ix and c.compose(sq.left, u) == ix:
                return sq, u
        raise BoundTooSmall(f"no diagonal for {f}")


def point_category():
    from ..fincat import FinCategory
    return FinCategory(["pt"], [("id_pt", "pt", "pt")], {"pt": "id_pt"},
                       {("id_pt", "id_pt"): "id_pt"}, name="point")


def arrow_category():
    """The poset ``0 -> 1`` as a finite category."""
    from ..fincat import FinCategory
    arrows = [("id0", "0", "0"), ("id1", "1", "1"), ("u", "0", "1")]
    comp = {("id0", "id0"): "id0", ("id1", "id1"): "id1",
            ("u", "id0"): "u", ("id1", "u"): "u"}
    return FinCategory(["0", "1"], arrows, {"0": "id0", "1": "id1"}, comp, name="2")


__all__ = ["FinSetBase", "ExplicitBase", "FinSet", "point_category", "arrow_category"]
