"""Compiled core of the clique search.

Weights are exponent-count vectors (entry e counts the members weighing q^e).
The sign of a difference at an integer q is found by carrying digits in base
q, so comparisons stay exact in int64 for every q without big integers.

The depth-first search is iterative and resumable: all state lives in arrays
owned by the caller, and :func:`run_chunk` returns after a bounded number of
dive calls so the caller can check time budgets and signals in between.
"""
from __future__ import annotations

import numpy as np
from numba import njit

DONE = 0
PAUSED = 1
GROW = 2
FULL = 3


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def _sign_at(h, top, q):
    carry = 0
    nonzero = False
    for e in range(top + 1):
        t = h[e] + carry
        r = t % q
        carry = (t - r) // q
        if r != 0:
            nonzero = True
    if carry > 0:
        return 1
    if carry < 0:
        return -1
    return 1 if nonzero else 0


@njit(cache=True)
def positive_somewhere(h, lo, hi):
    """Is sum h[e] q^e > 0 for some integer q in [lo, hi]?  hi < 0 means unbounded."""
    top = -1
    for e in range(h.shape[0] - 1, -1, -1):
        if h[e] != 0:
            top = e
            break
    if top < 0:
        return False
    lead = h[top]
    if lead > 0 and hi < 0:
        return True
    if _sign_at(h, top, lo) > 0:
        return True
    if hi == lo:
        return False
    big = 0
    pos = 0
    for e in range(top):
        a = abs(h[e])
        if a > big:
            big = a
        if h[e] > 0:
            pos += h[e]
    if lead > 0:
        # past the Cauchy radius the sign is that of the leading term
        if hi >= 1 + (big + lead - 1) // lead:
            return True
        for q in range(lo + 1, hi + 1):
            if _sign_at(h, top, q) > 0:
                return True
        return False
    neg = -lead
    if pos == 0:
        return False
    # positive part over q^top only shrinks as q grows
    s = 0.0
    inv = 1.0 / lo
    for e in range(top - 1, -1, -1):
        if h[e] > 0:
            s += h[e] * inv ** (top - e)
    if s < neg * (1.0 - 1e-9):
        return False
    maxpos = 0
    for e in range(top):
        if h[e] > maxpos:
            maxpos = h[e]
    limit = min((pos + neg - 1) // neg, 1 + (maxpos + neg - 1) // neg)
    if hi >= 0 and hi + 1 < limit:
        limit = hi + 1
    for q in range(lo + 1, limit):
        if _sign_at(h, top, q) > 0:
            return True
    return False


@njit(cache=True)
def better(a, b, lo, hi, tmp):
    for e in range(a.shape[0]):
        tmp[e] = a[e] - b[e]
    return positive_somewhere(tmp, lo, hi)


@njit(cache=True)
def _beats_all(w, fw, nf, lo, hi, tmp):
    for j in range(nf):
        if not better(w, fw[j], lo, hi, tmp):
            return False
    return True


@njit(cache=True)
def insert(w, members, size, fw, fmem, flen, meta, which, lo, hi, tmp):
    """Offer a clique to front ``which`` (0: U, 1: U_hat); meta[which] is its size.
    Returns -1 when the front is full, else 1 if inserted and 0 if not."""
    nf = meta[which]
    if not _beats_all(w, fw, nf, lo, hi, tmp):
        return 0
    if nf >= fw.shape[0]:
        return -1
    fw[nf, :] = w
    fmem[nf, :size] = members[:size]
    flen[nf] = size
    nf += 1
    i = 0
    while i < nf:
        gone = False
        for j in range(nf):
            if j != i and not better(fw[i], fw[j], lo, hi, tmp):
                gone = True
                break
        if gone:
            for t in range(i, nf - 1):
                fw[t, :] = fw[t + 1]
                fmem[t, :] = fmem[t + 1]
                flen[t] = flen[t + 1]
            nf -= 1
        else:
            i += 1
    meta[which] = nf
    return 1


@njit(cache=True)
def run_chunk(
    verts, exps, d, ub, md, lo, hi,
    nbuf, off, length, cursor, phase, sol, wsol,
    uw, umem, ulen, hw, hmem, hlen, meta,
    calls, call_limit,
):
    """Advance the search until it finishes, reaches ``call_limit`` dive calls,
    runs out of neighbourhood buffer (GROW) or front capacity (FULL).

    meta holds [size of U, size of U_hat, depth].  Returns (status, calls)."""
    E = wsol.shape[1]
    tmp = np.zeros(E, dtype=np.int64)
    f = np.zeros(E, dtype=np.int64)
    fh = np.zeros(E, dtype=np.int64)
    while True:
        s = meta[2]
        base = off[s]
        n_nb = length[s]
        if phase[s] == 0:
            if calls >= call_limit:
                return PAUSED, calls
            # new record: the clique itself, and its completion bound
            if meta[0] >= uw.shape[0] or meta[1] >= hw.shape[0]:
                return FULL, calls
            calls += 1
            phase[s] = 1
            insert(wsol[s], sol, s, uw, umem, ulen, meta, 0, lo, hi, tmp)
            fh[:] = wsol[s]
            room = ub - s
            if room > n_nb:
                room = n_nb
            for t in range(room):
                fh[exps[nbuf[base + t]]] += 1
            insert(fh, sol, s, hw, hmem, hlen, meta, 1, lo, hi, tmp)
            if s >= md:
                phase[s] = 2
            else:
                start = sol[s - 1] + 1 if s > 0 else 0
                p = 0
                while p < n_nb and nbuf[base + p] < start:
                    p += 1
                cursor[s] = p
        pos = cursor[s]
        if phase[s] == 2 or pos >= n_nb:
            if s == 0:
                return DONE, calls
            meta[2] = s - 1
            continue
        i = nbuf[base + pos]
        e = exps[i]
        w = wsol[s]
        f[:] = w
        f[e] += md - s
        fh[:] = w
        fh[e] += ub - s
        # heaviest first: once both cuts fire, no later vertex can do better
        if (not _beats_all(f, uw, meta[0], lo, hi, tmp)) and (not _beats_all(fh, hw, meta[1], lo, hi, tmp)):
            phase[s] = 2
            continue
        # completion bounds for sol + i
        f[:] = w
        f[e] += 1
        fh[:] = f
        need_md = md - s - 1
        need_ub = ub - s - 1
        got = 0
        v = verts[i]
        if need_ub > 0:
            for t in range(n_nb):
                j = nbuf[base + t]
                if _popcount(verts[j] ^ v) >= d:
                    x = exps[j]
                    if got < need_md:
                        f[x] += 1
                    fh[x] += 1
                    got += 1
                    if got >= need_ub:
                        break
        go = _beats_all(f, uw, meta[0], lo, hi, tmp) or _beats_all(fh, hw, meta[1], lo, hi, tmp)
        if not go:
            cursor[s] = pos + 1
            continue
        cbase = base + n_nb
        if cbase + n_nb > nbuf.shape[0]:
            return GROW, calls
        cursor[s] = pos + 1
        c = 0
        for t in range(n_nb):
            j = nbuf[base + t]
            if _popcount(verts[j] ^ v) >= d:
                nbuf[cbase + c] = j
                c += 1
        sol[s] = i
        off[s + 1] = cbase
        length[s + 1] = c
        phase[s + 1] = 0
        wsol[s + 1, :] = w
        wsol[s + 1, e] += 1
        meta[2] = s + 1
