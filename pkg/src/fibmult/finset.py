"""Finite sets, mappings and their canonical limits/colimits.

Everything here is immutable.  Labels produced by the canonical constructions
use ``|`` (pullback pairs) and ``:`` (sum tags); user supplied labels may not
contain either character.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CodomainMismatch, ReservedLabel

RESERVED = ("|", ":")


def check_label(label):
    if any(ch in label for ch in RESERVED):
        raise ReservedLabel(f"label {label!r} uses a reserved character")
    return label


class FinSet:
    """A labeled finite set with an ordered list of distinct element labels."""

    __slots__ = ("label", "elements", "_pos", "_hash")

    def __init__(self, label, elements, *, user=False):
        elements = tuple(str(e) for e in elements)
        if user:
            check_label(label)
            for e in elements:
                check_label(e)
        pos = {e: i for i, e in enumerate(elements)}
        if len(pos) != len(elements):
            raise ValueError(f"duplicate elements in {label}: {elements}")
        self.label = label
        self.elements = elements
        self._pos = pos
        self._hash = hash((label, elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._pos

    def index(self, x):
        return self._pos[x]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinSet):
            return NotImplemented
        return self._hash == other._hash and self.label == other.label \
            and self.elements == other.elements

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (len(self), self.label, self.elements) < (len(other), other.label, other.elements)

    def __repr__(self):
        return f"FinSet({self.label!r}, {list(self.elements)})"

    def __str__(self):
        return self.label


def skeleton(n):
    """The canonical n-element set ``[n] = {1, ..., n}``."""
    return FinSet(f"[{n}]", [str(i) for i in range(1, n + 1)])


def terminal():
    return skeleton(1)


class FinMap:
    """A total mapping between finite sets, stored as the tuple of images."""

    __slots__ = ("dom", "cod", "images", "_hash", "_positions")

    def __init__(self, dom, cod, assignment):
        if isinstance(assignment, dict):
            images = tuple(assignment[x] for x in dom.elements)
        else:
            images = tuple(assignment)
        if len(images) != len(dom):
            raise ValueError("assignment is not total on the domain")
        for y in images:
            if y not in cod:
                raise ValueError(f"image {y!r} not in codomain {cod.label}")
        self.dom = dom
        self.cod = cod
        self.images = images
        self._hash = hash((dom, cod, images))
        self._positions = None

    @classmethod
    def _from_positions(cls, dom, cod, positions):
        """Unchecked constructor used by internal composition."""
        m = object.__new__(cls)
        m.dom = dom
        m.cod = cod
        els = cod.elements
        m.images = images = tuple(els[k] for k in positions)
        m._hash = hash((dom, cod, images))
        m._positions = tuple(positions)
        return m

    def __call__(self, x):
        return self.images[self.dom.index(x)]

    def at(self, i):
        """Image of the i-th domain element, as a codomain position."""
        return self.cod.index(self.images[i])

    @property
    def table(self):
        return dict(zip(self.dom.elements, self.images))

    def positions(self):
        p = self._positions
        if p is None:
            idx = self.cod.index
            p = self._positions = tuple(idx(y) for y in self.images)
        return p

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinMap):
            return NotImplemented
        return self._hash == other._hash and self.images == other.images \
            and self.dom == other.dom and self.cod == other.cod

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FinMap({self.dom.label}->{self.cod.label}: {self.table})"

    def __str__(self):
        return f"{self.dom.label}>{self.cod.label}:{','.join(self.images)}"

    def fiber(self, y):
        return [x for x, fx in zip(self.dom.elements, self.images) if fx == y]

    def fiber_positions(self, j):
        y = self.cod.elements[j]
        return [i for i, fx in enumerate(self.images) if fx == y]

    def is_injective(self):
        return len(set(self.images)) == len(self.images)

    def is_surjective(self):
        return set(self.images) == set(self.cod.elements)

    def is_bijective(self):
        return len(self.dom) == len(self.cod) and self.is_injective()


def identity(s):
    return FinMap._from_positions(s, s, range(len(s)))


def compose(g, f):
    """``g . f``; raises CodomainMismatch unless ``f.cod == g.dom``."""
    if f.cod != g.dom:
        raise CodomainMismatch(f"cannot compose {g} after {f}")
    gp = g.positions()
    return FinMap._from_positions(f.dom, g.cod, [gp[k] for k in f.positions()])


def inverse(f):
    if not f.is_bijective():
        raise ValueError(f"{f} is not a bijection")
    back = {y: x for x, y in zip(f.dom.elements, f.images)}
    return FinMap(f.cod, f.dom, [back[y] for y in f.cod.elements])


def all_maps(dom, cod):
    for images in itertools.product(cod.elements, repeat=len(dom)):
        yield FinMap(dom, cod, images)


def all_bijections(dom, cod):
    if len(dom) != len(cod):
        return
    for images in itertools.permutations(cod.elements):
        yield FinMap(dom, cod, images)


@dataclass(frozen=True)
class PullbackSquare:
    """A square ``right . top == bottom . left`` with apex ``apex``.

    ``bottom: L -> J``, ``right: I -> J``, ``top: apex -> I``, ``left: apex -> L``.
    """

    bottom: FinMap
    right: FinMap
    apex: FinSet
    top: FinMap
    left: FinMap

    def commutes(self):
        return compose(self.right, self.top) == compose(self.bottom, self.left)

    def is_pullback(self):
        return is_pullback(self.top, self.left, self.bottom, self.right)


def is_pullback(top, left, bottom, right):
    """Element-wise pullback test: (left, top) is a bijection onto the pair set."""
    if top.dom != left.dom or top.cod != right.dom or left.cod != bottom.dom \
            or right.cod != bottom.cod:
        return False
    pairs = set()
    for x, y in zip(left.images, top.images):
        if bottom(x) != right(y):
            return False
        pairs.add((x, y))
    if len(pairs) != len(top.dom):
        return False
    expected = sum(1 for x in bottom.dom for y in right.dom if bottom(x) == right(y))
    return expected == len(pairs)


def chosen_pullback(f, g):
    """Canonical pullback of ``f: L -> J`` and ``g: I -> J``.

    The apex consists of the labels ``(x|y)`` with ``f(x) == g(y)``, in
    lexicographic order of the pair positions.
    """
    if f.cod != g.cod:
        raise CodomainMismatch(f"{f} and {g} do not share a codomain")
    pairs = [(x, y) for x in f.dom for y in g.dom if f(x) == g(y)]
    apex = FinSet(f"({f.dom.label}|{g.dom.label})", [f"({x}|{y})" for x, y in pairs])
    top = FinMap(apex, g.dom, [y for _, y in pairs])
    left = FinMap(apex, f.dom, [x for x, _ in pairs])
    return PullbackSquare(bottom=f, right=g, apex=apex, top=top, left=left)


def finite_sum(parts):
    """Tagged union of ``parts`` with elements ``k:x``, plus its injections."""
    elements = [f"{k}:{x}" for k, part in enumerate(parts) for x in part]
    label = "(" + "+".join(p.label for p in parts) + ")"
    total = FinSet(label, elements)
    injections = [FinMap(part, total, [f"{k}:{x}" for x in part])
                  for k, part in enumerate(parts)]
    return total, injections


def diagonal_data(f):
    """Kernel pair of ``f`` with its diagonal ``f.dom -> apex``."""
    sq = chosen_pullback(f, f)
    diag = FinMap(f.dom, sq.apex, [f"({x}|{x})" for x in f.dom])
    return sq, diag


def canonical_relabel(s, target):
    """Order-preserving bijection ``s -> target`` (sets of equal size)."""
    if len(s) != len(target):
        raise ValueError("sizes differ")
    return FinMap(s, target, target.elements)
