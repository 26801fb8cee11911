"""Compiled inner loops.

Codewords are packed as four uint64 words: plane a (bits 0-63, 64-127)
then plane b.  Lengths above 128 are rejected before reaching here.
"""

from __future__ import annotations

import numpy as np
from numba import njit, types
from numba.extending import intrinsic


@intrinsic
def popcnt(typingctx, x):
    sig = types.uint64(types.uint64)

    def codegen(context, builder, signature, args):
        return builder.ctpop(args[0])

    return sig, codegen


@intrinsic
def ctz(typingctx, x):
    sig = types.uint64(types.uint64)

    def codegen(context, builder, signature, args):
        return builder.cttz(args[0], context.get_constant(types.boolean, False))

    return sig, codegen


@njit(cache=True, inline="always")
def _wt(a0, a1, b0, b1):
    return np.int64(popcnt(a0 | b0) + popcnt(a1 | b1))


# -- full enumeration --------------------------------------------------------

@njit(cache=True, nogil=True)
def gray_walk(gens, lo, hi, hist, best):
    """Visit Gray-code indices lo..hi-1 of the span of ``gens``.

    Adds every weight to ``hist``; ``best`` receives [weight, gray index]
    of the first minimum-weight nonzero word met.
    """
    k = gens.shape[0]
    a0 = np.uint64(0)
    a1 = np.uint64(0)
    b0 = np.uint64(0)
    b1 = np.uint64(0)
    g = lo ^ (lo >> 1)
    for j in range(k):
        if (g >> j) & 1:
            a0 ^= gens[j, 0]
            a1 ^= gens[j, 1]
            b0 ^= gens[j, 2]
            b1 ^= gens[j, 3]
    bw = best[0]
    bi = best[1]
    i = lo
    while True:
        w = _wt(a0, a1, b0, b1)
        hist[w] += 1
        if w > 0 and w < bw:
            bw = w
            bi = i ^ (i >> 1)
        i += 1
        if i >= hi:
            break
        j = np.int64(ctz(np.uint64(i)))
        a0 ^= gens[j, 0]
        a1 ^= gens[j, 1]
        b0 ^= gens[j, 2]
        b1 ^= gens[j, 3]
    best[0] = bw
    best[1] = bi


# -- window preparation ------------------------------------------------------

@njit(cache=True, nogil=True)
def prepare_window(gens, coords):
    """Row-reduce the projection of the code onto ``coords``.

    Window bit 2t is plane a of coords[t], bit 2t+1 plane b.  Returns
    (delta, res, kern, rank): delta[t, v] is the codeword contributed when
    window position t carries value v+1 (1, w, W), res[t, v] its residual on
    the non-pivot window bits (a pattern is a codeword projection iff the
    residual XOR vanishes), kern a basis of codewords vanishing on the window.
    """
    k = gens.shape[0]
    m = coords.shape[0]
    nb = 2 * m
    P = np.zeros((k, nb), dtype=np.uint8)
    W = gens.copy()
    for r in range(k):
        for t in range(m):
            c = coords[t]
            word = c >> 6
            bit = np.uint64(c & 63)
            P[r, 2 * t] = np.uint8((W[r, word] >> bit) & np.uint64(1))
            P[r, 2 * t + 1] = np.uint8((W[r, 2 + word] >> bit) & np.uint64(1))
    pivrow = np.full(nb, -1, dtype=np.int64)
    row = 0
    for col in range(nb):
        if row == k:
            break
        sel = -1
        for r in range(row, k):
            if P[r, col]:
                sel = r
                break
        if sel < 0:
            continue
        if sel != row:
            for c2 in range(nb):
                tmp = P[sel, c2]
                P[sel, c2] = P[row, c2]
                P[row, c2] = tmp
            for w in range(4):
                tw = W[sel, w]
                W[sel, w] = W[row, w]
                W[row, w] = tw
        for r in range(k):
            if r != row and P[r, col]:
                for c2 in range(nb):
                    P[r, c2] ^= P[row, c2]
                for w in range(4):
                    W[r, w] ^= W[row, w]
        pivrow[col] = row
        row += 1
    rank = row
    # index of each non-pivot bit in the residual
    resix = np.full(nb, -1, dtype=np.int64)
    nres = 0
    for col in range(nb):
        if pivrow[col] < 0:
            resix[col] = nres
            nres += 1
    bitdelta = np.zeros((nb, 4), dtype=np.uint64)
    bitres = np.zeros((nb, 2), dtype=np.uint64)
    for col in range(nb):
        r = pivrow[col]
        if r >= 0:
            for w in range(4):
                bitdelta[col, w] = W[r, w]
            for c2 in range(nb):
                if P[r, c2] and resix[c2] >= 0:
                    q = resix[c2]
                    bitres[col, q >> 6] |= np.uint64(1) << np.uint64(q & 63)
        else:
            q = resix[col]
            bitres[col, q >> 6] |= np.uint64(1) << np.uint64(q & 63)
    delta = np.zeros((m, 3, 4), dtype=np.uint64)
    res = np.zeros((m, 3, 2), dtype=np.uint64)
    for t in range(m):
        for w in range(4):
            delta[t, 0, w] = bitdelta[2 * t, w]
            delta[t, 1, w] = bitdelta[2 * t + 1, w]
            delta[t, 2, w] = bitdelta[2 * t, w] ^ bitdelta[2 * t + 1, w]
        for w in range(2):
            res[t, 0, w] = bitres[2 * t, w]
            res[t, 1, w] = bitres[2 * t + 1, w]
            res[t, 2, w] = bitres[2 * t, w] ^ bitres[2 * t + 1, w]
    kern = W[rank:].copy()
    return delta, res, kern, rank


# -- window enumeration ------------------------------------------------------

@njit(cache=True, nogil=True)
def _canonical(pos, level, m):
    """(is_canonical, stabiliser size) of a support containing 0 under rotation."""
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    if m < 64:
        mask = (np.uint64(1) << np.uint64(m)) - np.uint64(1)
    else:
        mask = full
    s = np.uint64(0)
    for t in range(level):
        s |= np.uint64(1) << np.uint64(pos[t])
    stab = 1
    for t in range(1, level):
        sh = np.uint64(pos[t])
        r = ((s >> sh) | (s << (np.uint64(m) - sh))) & mask
        if r < s:
            return False, 0
        if r == s:
            stab += 1
    return True, stab


@njit(cache=True, nogil=True)
def _slow_visit(ya0, ya1, yb0, yb1, kern, sidx, vkey, stop_at, hist_max,
                cond_mask, cond_thr, cond_group, okg, hist, mult, best, best_word):
    """Handle the coset y + span(kern); returns True when the scan must stop."""
    kdim = kern.shape[0]
    ncond = cond_mask.shape[0]
    ngroups = hist.shape[0]
    kidx = 0
    while True:
        w = _wt(ya0, ya1, yb0, yb1)
        if w > 0:
            if w < best[0]:
                best[0] = w
                best[1] = sidx
                best[2] = vkey
                best[3] = kidx
                best_word[0] = ya0
                best_word[1] = ya1
                best_word[2] = yb0
                best_word[3] = yb1
                if w <= stop_at:
                    best[4] = 1
                    return True
            if w <= hist_max:
                for gi in range(ngroups):
                    okg[gi] = True
                for ci in range(ncond):
                    gi = cond_group[ci]
                    if okg[gi]:
                        cw = _wt(ya0 & cond_mask[ci, 0], ya1 & cond_mask[ci, 1],
                                 yb0 & cond_mask[ci, 0], yb1 & cond_mask[ci, 1])
                        if cw <= cond_thr[ci]:
                            okg[gi] = False
                for gi in range(ngroups):
                    if okg[gi]:
                        hist[gi, w] += mult
        kidx += 1
        if kidx >= (np.int64(1) << kdim):
            return False
        j = np.int64(ctz(np.uint64(kidx)))
        ya0 ^= kern[j, 0]
        ya1 ^= kern[j, 1]
        yb0 ^= kern[j, 2]
        yb1 ^= kern[j, 3]


@njit(cache=True, nogil=True)
def pack_coords(words, comp):
    """Rows of ``words`` restricted to ``comp`` (at most 64 coordinates), one word per plane."""
    out = np.zeros((words.shape[0], 2), dtype=np.uint64)
    for r in range(words.shape[0]):
        for t in range(comp.shape[0]):
            c = comp[t]
            word = c >> 6
            bit = np.uint64(c & 63)
            one = np.uint64(1) << np.uint64(t)
            if (words[r, word] >> bit) & np.uint64(1):
                out[r, 0] |= one
            if (words[r, 2 + word] >> bit) & np.uint64(1):
                out[r, 1] |= one
    return out


@njit(cache=True, nogil=True)
def window_level(delta, res, kern, cdelta, ckern, level, rotate, chunk, nchunks, stop_at,
                 hist_max, cond_mask, cond_thr, cond_group, hist, best, best_word):
    """Enumerate codewords whose window pattern has exactly ``level`` nonzero positions.

    Supports are visited in lexicographic order (``rotate``: only rotation
    orbit representatives, weighted by orbit size in ``hist``); support
    number s is handled iff s % nchunks == chunk.  ``best`` holds
    [weight, support no., value no., kernel no., stopped]; the scan stops at
    the first word of weight <= stop_at.  Words of weight <= hist_max are
    added to hist[g] when every condition (mask, thr) of group g has
    window weight > thr.

    The walk only tracks ``cdelta``/``ckern``, the words restricted to (up
    to 64) coordinates outside the window: the window itself always weighs
    ``level``, so level + popcount is a lower bound on the weight and full
    words are rebuilt only when it passes.
    """
    m = delta.shape[0]
    kdim = kern.shape[0]
    ngroups = hist.shape[0]
    okg = np.zeros(ngroups, dtype=np.bool_)
    L = max(level, 2)
    pos = np.zeros(L, dtype=np.int64)
    gapmax = np.zeros(L, dtype=np.int64)
    dig = np.zeros(L, dtype=np.int64)
    drc = np.ones(L, dtype=np.int64)
    ta = np.zeros(27, dtype=np.uint64)
    tb = np.zeros(27, dtype=np.uint64)
    tdig = np.zeros((27, 3), dtype=np.int64)
    k0a = ckern[0, 0] if kdim > 0 else np.uint64(0)
    k0b = ckern[0, 1] if kdim > 0 else np.uint64(0)
    tr0 = np.zeros(27, dtype=np.uint64)
    tr1 = np.zeros(27, dtype=np.uint64)
    zero = np.uint64(0)

    if level > m:
        return
    if level == 0:
        if chunk == 0:
            _slow_visit(zero, zero, zero, zero, kern, 0, 0, stop_at, hist_max,
                        cond_mask, cond_thr, cond_group, okg, hist, 1, best, best_word)
        return

    t = 0
    if rotate:
        pos[0] = 0
        if level > 1:
            t = 1
            pos[1] = 0
    else:
        for i in range(level):
            pos[i] = i
    first = True
    sidx = -1
    while True:
        # ---- next support ----
        if rotate and level > 1:
            found = False
            while t >= 1:
                p = pos[t] + 1
                rem = level - 1 - t
                g = gapmax[t - 1]
                if p - pos[t - 1] > g:
                    g = p - pos[t - 1]
                if p + rem <= m - 1 and p + rem <= m - g:
                    pos[t] = p
                    gapmax[t] = g
                    if t == level - 1:
                        found = True
                        break
                    t += 1
                    pos[t] = pos[t - 1]
                else:
                    t -= 1
            if not found:
                return
        elif not first:
            if rotate:
                return
            i = level - 1
            while i >= 0 and pos[i] == m - level + i:
                i -= 1
            if i < 0:
                return
            pos[i] += 1
            for j in range(i + 1, level):
                pos[j] = pos[j - 1] + 1
        first = False
        mult = 1
        if rotate:
            canon, stab = _canonical(pos, level, m)
            if not canon:
                continue
            mult = m // stab
        sidx += 1
        if sidx % nchunks != chunk:
            continue

        # ---- value assignments: the last (up to) three digits tabulated ----
        ntab = min(level, 3)
        nouter = level - ntab
        nq = 3 ** ntab
        for q in range(nq):
            x = q
            ta[q] = zero
            tb[q] = zero
            tr0[q] = zero
            tr1[q] = zero
            for i in range(ntab - 1, -1, -1):
                d = x % 3
                x //= 3
                p = pos[nouter + i]
                tdig[q, i] = d
                ta[q] ^= cdelta[p, d, 0]
                tb[q] ^= cdelta[p, d, 1]
                tr0[q] ^= res[p, d, 0]
                tr1[q] ^= res[p, d, 1]
        ba = zero
        bb = zero
        br0 = zero
        br1 = zero
        for i in range(nouter):
            dig[i] = 0
            drc[i] = 1
            ba ^= cdelta[pos[i], 0, 0]
            bb ^= cdelta[pos[i], 0, 1]
            br0 ^= res[pos[i], 0, 0]
            br1 ^= res[pos[i], 0, 1]
        vidx = 0
        while True:
            thresh = best[0] - 1
            if hist_max > thresh:
                thresh = hist_max
            thresh -= level
            for q in range(nq):
                ya = ba ^ ta[q]
                yb = bb ^ tb[q]
                # branch-free for the usual kernel dimensions 0 and 1
                wmin = np.int64(popcnt(ya | yb))
                if kdim > 0:
                    w1 = np.int64(popcnt((ya ^ k0a) | (yb ^ k0b)))
                    wmin = min(wmin, w1)
                rz = (br0 ^ tr0[q]) | (br1 ^ tr1[q])
                hit = rz == zero and wmin <= thresh
                if kdim > 1 and rz == zero and not hit:
                    za = ya
                    zb = yb
                    for kk in range(1, np.int64(1) << kdim):
                        jj = np.int64(ctz(np.uint64(kk)))
                        za ^= ckern[jj, 0]
                        zb ^= ckern[jj, 1]
                        if np.int64(popcnt(za | zb)) <= thresh:
                            hit = True
                            break
                if hit:
                    fa0 = zero
                    fa1 = zero
                    fb0 = zero
                    fb1 = zero
                    for i in range(ntab):
                        p = pos[nouter + i]
                        d = tdig[q, i]
                        fa0 ^= delta[p, d, 0]
                        fa1 ^= delta[p, d, 1]
                        fb0 ^= delta[p, d, 2]
                        fb1 ^= delta[p, d, 3]
                    for i in range(nouter):
                        fa0 ^= delta[pos[i], dig[i], 0]
                        fa1 ^= delta[pos[i], dig[i], 1]
                        fb0 ^= delta[pos[i], dig[i], 2]
                        fb1 ^= delta[pos[i], dig[i], 3]
                    if _slow_visit(fa0, fa1, fb0, fb1, kern, sidx, vidx * nq + q, stop_at,
                                   hist_max, cond_mask, cond_thr, cond_group, okg, hist,
                                   mult, best, best_word):
                        return
                    thresh = best[0] - 1
                    if hist_max > thresh:
                        thresh = hist_max
                    thresh -= level
            # reflected ternary Gray step on the outer digits
            j = 0
            nv = 0
            while j < nouter:
                nv = dig[j] + drc[j]
                if nv >= 0 and nv <= 2:
                    break
                drc[j] = -drc[j]
                j += 1
            if j >= nouter:
                break
            # 0<->1 differs by W (index 2), 1<->2 by 1 (index 0)
            di = 2 if dig[j] + nv == 1 else 0
            p = pos[j]
            ba ^= cdelta[p, di, 0]
            bb ^= cdelta[p, di, 1]
            br0 ^= res[p, di, 0]
            br1 ^= res[p, di, 1]
            dig[j] = nv
            vidx += 1
