"""Small ordinary categories used to generate example instances.

Some carry an enrichment in commutative monoids (``add``/``zero``), which is
what a cartesian structure on the sequential multicategory needs.
"""
from __future__ import annotations

import itertools
from typing import NamedTuple

from .fincat import FinCategory, RuleCategory


class Enrichment:
    """Commutative-monoid enrichment of a category's hom-sets."""

    def __init__(self, add, zero):
        self.add = add
        self.zero = zero

    def sum(self, arrows, x, y):
        total = self.zero(x, y)
        for a in arrows:
            total = self.add(total, a)
        return total


def terminal_category():
    cat = FinCategory(["*"], [("1", "*", "*")], {"*": "1"}, {("1", "1"): "1"}, name="1")
    cat.enrichment = Enrichment(lambda a, b: "1", lambda x, y: "1")
    return cat


def monoid_category(elements, mul, unit, name="monoid"):
    """One-object category whose arrows are the monoid elements; ``g.f = mul(g, f)``."""
    elements = [str(e) for e in elements]
    comp = {(g, f): str(mul(g, f)) for g in elements for f in elements}
    return FinCategory(["*"], [(e, "*", "*") for e in elements], {"*": str(unit)}, comp, name=name)


def ring_category(n):
    """Z/n as a one-object category under multiplication, enriched by addition."""
    elements = [str(i) for i in range(n)]
    cat = monoid_category(elements, lambda g, f: (int(g) * int(f)) % n, 1, name=f"Z/{n}")
    cat.enrichment = Enrichment(lambda a, b: str((int(a) + int(b)) % n), lambda x, y: "0")
    return cat


def left_zero_monoid():
    """``{1, a, b}`` with ``xy = x`` for ``x, y`` in ``{a, b}``; not commutative."""
    def mul(g, f):
        if g == "1":
            return f
        return g
    return monoid_category(["1", "a", "b"], mul, "1", name="LZ3")


def poset_category(elements, leq, name="poset"):
    """Thin category; ``leq`` is the (reflexive, transitive) set of pairs."""
    elements = [str(e) for e in elements]
    leq = {(str(a), str(b)) for a, b in leq} | {(e, e) for e in elements}
    arrows = [(f"{a}<={b}", a, b) for a in elements for b in elements if (a, b) in leq]
    comp = {}
    for a, b in leq:
        for b2, c in leq:
            if b == b2:
                comp[(f"{b}<={c}", f"{a}<={b}")] = f"{a}<={c}"
    return FinCategory(elements, arrows, {e: f"{e}<={e}" for e in elements}, comp, name=name)


def chain3():
    return poset_category("abc", {("a", "b"), ("b", "c"), ("a", "c")}, name="chain3")


class Matrix(NamedTuple):
    """A ``tgt x src`` matrix over Z/q, rows flattened."""

    src: int
    tgt: int
    entries: tuple

    def __str__(self):
        rows = [self.entries[r * self.src:(r + 1) * self.src] for r in range(self.tgt)]
        return f"M{self.src}>{self.tgt}[" + ";".join("".join(map(str, r)) for r in rows) + "]"

    def at(self, r, c):
        return self.entries[r * self.src + c]


def matrix_category(q=2, max_dim=2):
    """Mat(Z/q) on dimensions ``0..max_dim``, enriched by matrix addition."""
    dims = tuple(str(k) for k in range(max_dim + 1))

    def hom(x, y):
        m, n = int(x), int(y)
        return [Matrix(m, n, e) for e in itertools.product(range(q), repeat=m * n)]

    def compose(g, f):
        m, k, n = f.src, f.tgt, g.tgt
        e = tuple(sum(g.at(r, j) * f.at(j, c) for j in range(k)) % q
                  for r in range(n) for c in range(m))
        return Matrix(m, n, e)

    def identity(x):
        m = int(x)
        return Matrix(m, m, tuple(int(r == c) for r in range(m) for c in range(m)))

    cat = RuleCategory(dims, hom, lambda a: str(a.src), lambda a: str(a.tgt), identity, compose,
                       name=f"Mat(Z/{q})<={max_dim}")
    cat.enrichment = Enrichment(
        lambda a, b: Matrix(a.src, a.tgt, tuple((u + v) % q for u, v in zip(a.entries, b.entries))),
        lambda x, y: Matrix(int(x), int(y), (0,) * (int(x) * int(y))),
    )
    return cat
