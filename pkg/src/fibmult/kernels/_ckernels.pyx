# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of ``_pykernels``; same signatures, same output order."""
import numpy as np
cimport numpy as cnp

from ._pykernels import buckets

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32


cdef inline Py_ssize_t _search(const i64[:] keys, i64 q) nogil:
    cdef Py_ssize_t lo = 0, hi = keys.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < q:
            lo = mid + 1
        else:
            hi = mid
    if lo < keys.shape[0] and keys[lo] == q:
        return lo
    return -1


def associativity_violations(i32[:, :] table, i32[:] dom, i32[:] cod, int n_objects,
                             i32[:] identities, int limit=100):
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t g, h, f, a, b
    skip = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[:] sk = skip
    for a in range(identities.shape[0]):
        sk[identities[a]] = 1
    in_order, in_starts = buckets(np.asarray(cod, dtype=np.int64), n_objects)
    out_order, out_starts = buckets(np.asarray(dom, dtype=np.int64), n_objects)
    cdef i64[:] io = in_order, ist = in_starts, oo = out_order, ost = out_starts
    cdef i32 hg
    out = []
    for g in range(n):
        if sk[g]:
            continue
        for a in range(ost[cod[g]], ost[cod[g] + 1]):
            h = oo[a]
            if sk[h]:
                continue
            hg = table[h, g]
            for b in range(ist[dom[g]], ist[dom[g] + 1]):
                f = io[b]
                if sk[f]:
                    continue
                if table[hg, f] != table[h, table[g, f]]:
                    out.append((h, g, f))
                    if len(out) >= limit:
                        return out
    return out


def horizontal_closure(i64[:, :] sq, i32[:, :] dtab, i64[:] m_base, i64[:] keys, i64[:] vals,
                       i64[:] badkeys, i64 nD, i64 nM, i64 nB, int limit=100):
    cdef Py_ssize_t n = sq.shape[0]
    if n == 0:
        return []
    order, starts = buckets(np.asarray(sq[:, 2]), nM)
    cdef i64[:] od = order, st = starts
    cdef Py_ssize_t i, a, j, p
    cdef i64 t, b, q, l2
    out = []
    for i in range(n):
        for a in range(st[sq[i, 3]], st[sq[i, 3] + 1]):
            j = od[a]
            t = dtab[sq[i, 0], sq[j, 0]]
            b = dtab[sq[i, 1], sq[j, 1]]
            l2 = sq[j, 3]
            if t < 0 or b < 0:
                q = -1
            else:
                q = ((t * nD + b) * nM + sq[i, 2]) * nB + m_base[l2]
            if _search(badkeys, q) >= 0:
                continue
            p = _search(keys, q)
            if p < 0 or vals[p] != l2:
                out.append((i, j))
                if len(out) >= limit:
                    return out
    return out


def vertical_closure(i64[:, :] sq, i64[:] mcomp, i64[:] m_off, i64[:] m_lin, i64[:] m_base,
                     i64[:] keys, i64[:] vals, i64[:] badkeys, i64 nD, i64 nM, i64 nB,
                     int limit=100):
    cdef Py_ssize_t n = sq.shape[0]
    if n == 0:
        return []
    order, starts = buckets(np.asarray(sq[:, 0]), nD)
    cdef i64[:] od = order, st = starts
    cdef Py_ssize_t i, a, j, p
    cdef i64 r, l, q
    out = []
    for i in range(n):
        for a in range(st[sq[i, 1]], st[sq[i, 1] + 1]):
            j = od[a]
            r = mcomp[m_off[sq[j, 2]] + m_lin[sq[i, 2]]]
            l = mcomp[m_off[sq[j, 3]] + m_lin[sq[i, 3]]]
            q = ((sq[i, 0] * nD + sq[j, 1]) * nM + r) * nB + m_base[l]
            if _search(badkeys, q) >= 0:
                continue
            p = _search(keys, q)
            if p < 0 or vals[p] != l:
                out.append((i, j))
                if len(out) >= limit:
                    return out
    return out
