"""Reference implementations of the hot loops (Python/numpy).

Each function has the signature of its compiled twin in ``_ckernels.pyx``
and returns violations in the same order: ascending first index, then
ascending second index.

Squares are rows ``(top, bottom, right, left)`` of integer ids.  A special
square is looked up by the key ``((top*nD + bottom)*nM + right)*nB + g``
with ``g`` the base arrow under its left side; ``keys`` is sorted and
``vals`` holds the left side for each key.
"""
import numpy as np

CHUNK = 1 << 20


def _buckets(keys, n):
    out = [[] for _ in range(n)]
    for i, k in enumerate(keys):
        out[k].append(i)
    return out


def associativity_violations(table, dom, cod, n_objects, identities, limit=100):
    """Triples ``(h, g, f)`` with ``(h.g).f != h.(g.f)``; identities skipped."""
    skip = set(int(i) for i in identities)
    t = table.tolist()
    ins = _buckets(cod.tolist(), n_objects)
    outs = _buckets(dom.tolist(), n_objects)
    dl, cl = dom.tolist(), cod.tolist()
    bad = []
    for g in range(len(dl)):
        if g in skip:
            continue
        tg = t[g]
        fs = [f for f in ins[dl[g]] if f not in skip]
        hs = [h for h in outs[cl[g]] if h not in skip]
        for h in hs:
            th = t[h]
            thg = t[th[g]]
            for f in fs:
                if thg[f] != th[tg[f]]:
                    bad.append((h, g, f))
                    if len(bad) >= limit:
                        return bad
    return bad


def buckets(col, n):
    """CSR grouping: ``order[starts[v]:starts[v+1]]`` are the rows with value ``v``."""
    order = np.argsort(col, kind="stable").astype(np.int64)
    counts = np.bincount(col, minlength=n).astype(np.int64)
    starts = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    return order, starts


def _pair_chunks(probe, order, starts, chunk=CHUNK):
    """Yield ``(i, j)`` arrays pairing row ``i`` with every ``j`` in bucket ``probe[i]``."""
    cnt = starts[probe + 1] - starts[probe]
    n = len(probe)
    lo = 0
    while lo < n:
        acc = np.cumsum(cnt[lo:])
        hi = lo + max(1, int(np.searchsorted(acc, chunk, side="right")))
        c = cnt[lo:hi]
        total = int(c.sum())
        if total:
            i = np.repeat(np.arange(lo, hi, dtype=np.int64), c)
            first = np.repeat(np.cumsum(c) - c, c)
            off = np.arange(total, dtype=np.int64) - first
            j = order[np.repeat(starts[probe[lo:hi]], c) + off]
            yield i, j
        lo = hi


def _find(sorted_keys, q):
    if len(sorted_keys) == 0:
        return np.zeros(len(q), dtype=bool), np.zeros(len(q), dtype=np.int64)
    pos = np.searchsorted(sorted_keys, q)
    pos_c = np.minimum(pos, len(sorted_keys) - 1)
    return sorted_keys[pos_c] == q, pos_c


def _judge(i, j, q, expected, keys, vals, badkeys):
    in_bad, _ = _find(badkeys, q)
    found, pos = _find(keys, q)
    got = np.where(found, vals[pos] if len(vals) else -1, -1)
    wrong = ~in_bad & (got != expected)
    return i[wrong], j[wrong]


def _collect(chunks, limit):
    out = []
    for i, j in chunks:
        out.extend(zip(i.tolist(), j.tolist()))
        if len(out) >= limit:
            return out[:limit]
    return out


def horizontal_closure(sq, dtab, m_base, keys, vals, badkeys, nD, nM, nB, limit=100):
    """Pairs ``(i, j)`` of squares whose horizontal composite is not special.

    Square ``j`` sits to the left of ``i`` (its right side is ``i``'s left
    side); the composite ``(t_i t_j, b_i b_j, r_i, l_j)`` must be special.
    """
    if len(sq) == 0:
        return []
    order, starts = buckets(sq[:, 2], nM)

    def gen():
        for i, j in _pair_chunks(sq[:, 3], order, starts):
            t = dtab[sq[i, 0], sq[j, 0]].astype(np.int64)
            b = dtab[sq[i, 1], sq[j, 1]].astype(np.int64)
            l2 = sq[j, 3]
            q = ((t * nD + b) * nM + sq[i, 2]) * nB + m_base[l2]
            bad = (t < 0) | (b < 0)
            q = np.where(bad, -1, q)
            yield _judge(i, j, q, l2, keys, vals, badkeys)

    return _collect(gen(), limit)


def vertical_closure(sq, mcomp, m_off, m_lin, m_base, keys, vals, badkeys, nD, nM, nB, limit=100):
    """Stacked pairs ``(i, j)`` (``j`` below ``i``) whose vertical composite is not special.

    ``mcomp[m_off[g] + m_lin[f]]`` is the M-composite ``g . f``.
    """
    if len(sq) == 0:
        return []
    order, starts = buckets(sq[:, 0], nD)

    def gen():
        for i, j in _pair_chunks(sq[:, 1], order, starts):
            r = mcomp[m_off[sq[j, 2]] + m_lin[sq[i, 2]]]
            l = mcomp[m_off[sq[j, 3]] + m_lin[sq[i, 3]]]
            q = ((sq[i, 0] * nD + sq[j, 1]) * nM + r) * nB + m_base[l]
            yield _judge(i, j, q, l, keys, vals, badkeys)

    return _collect(gen(), limit)
