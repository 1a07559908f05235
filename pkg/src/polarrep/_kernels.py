# Numba kernels for successive decoding in natural index order.
#
# Per-path workspace, all of length 2N with stage s stored at [2**s, 2**(s+1)):
#   alpha  decision LLRs (stage n holds the channel LLRs)
#   bl/br  re-encoded partial sums of the left/right child at each stage
from __future__ import annotations

import math

import numpy as np
from numba import njit

FROZEN = 0
INFO = 1
HEAD = 2
MEMBER = 3
LAST = 4


@njit(cache=True, inline="always")
def boxplus(a, b, min_sum):
    """Check-node combination 2 atanh(tanh(a/2) tanh(b/2)), overflow-safe."""
    if a == 0.0 or b == 0.0:
        return 0.0
    aa = abs(a)
    ab = abs(b)
    sign = math.copysign(1.0, a) * math.copysign(1.0, b)
    m = min(aa, ab)
    if min_sum:
        return sign * m
    d = abs(aa - ab)
    if m > 20.0:
        # log1p(exp(-(aa + ab))) < 1e-17
        if d > 40.0:
            return sign * m
        return sign * (m - math.log1p(math.exp(-d)))
    return sign * (m + math.log((1.0 + math.exp(-(aa + ab))) / (1.0 + math.exp(-d))))


@njit(cache=True, inline="always")
def metric_increment(llr, u):
    # -log Pr(u | llr) for a binary decision with log-likelihood ratio llr
    x = llr if u else -llr
    if x > 0.0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


@njit(cache=True)
def update_alpha(alpha, bl, i, n, stop, min_sum):
    """Decision LLRs of the stage-``stop`` node whose first leaf is ``i``."""
    if i == 0:
        s = n
    else:
        p = 0
        while not (i >> p) & 1:
            p += 1
        h = 1 << p
        src = 2 * h
        for j in range(h):
            a = alpha[src + j]
            b = alpha[src + h + j]
            alpha[h + j] = b - a if bl[h + j] else b + a
        s = p
    while s > stop:
        h = 1 << (s - 1)
        src = 2 * h
        for j in range(h):
            alpha[h + j] = boxplus(alpha[src + j], alpha[src + h + j], min_sum)
        s -= 1


@njit(cache=True)
def propagate(bl, br, i, s, n):
    # the stage-s node containing leaf i is complete; combine finished right children upward
    while s + 1 <= n and (i >> s) & 1:
        h = 1 << s
        dst = br if (i >> (s + 1)) & 1 else bl
        base = 2 * h
        for j in range(h):
            dst[base + j] = bl[h + j] ^ br[h + j]
            dst[base + h + j] = br[h + j]
        s += 1


@njit(cache=True)
def update_bits(bl, br, i, u, n):
    if i & 1:
        br[1] = u
        propagate(bl, br, i, 0, n)
    else:
        bl[1] = u


@njit(cache=True)
def frozen_node(alpha, bl, br, i, s, n, min_sum):
    """All-zero decisions for the frozen stage-s node starting at leaf i; returns its metric.

    The node's decisions are all zero iff its codeword is, and its input LLRs
    are independent, so the summed metric is ``sum(-log Pr(x_j = 0))``.
    """
    update_alpha(alpha, bl, i, n, s, min_sum)
    h = 1 << s
    m = 0.0
    for j in range(h):
        m += metric_increment(alpha[h + j], 0)
    dst = br if (i >> s) & 1 else bl
    for j in range(h):
        dst[h + j] = 0
    propagate(bl, br, i + h - 1, s, n)
    return m


def zero_stages(frozen) -> np.ndarray:
    """For each leaf, the stage of the largest all-frozen node starting there (0 otherwise)."""
    frozen = np.asarray(frozen, dtype=bool)
    N = frozen.size
    out = np.zeros(N, dtype=np.int64)
    s = 1
    while (1 << s) <= N:
        h = 1 << s
        full = frozen.reshape(-1, h).all(axis=1)
        starts = np.flatnonzero(full) * h
        out[starts] = s
        s += 1
    return out


@njit(cache=True)
def _log2(N):
    n = 0
    while (1 << n) < N:
        n += 1
    return n


@njit(cache=True)
def sc_word(llr, frozen, zstage, min_sum, u_out):
    N = llr.shape[0]
    n = _log2(N)
    alpha = np.empty(2 * N)
    bl = np.zeros(2 * N, dtype=np.uint8)
    br = np.zeros(2 * N, dtype=np.uint8)
    alpha[N:] = llr
    metric = 0.0
    i = 0
    while i < N:
        s = zstage[i]
        if s > 0:
            metric += frozen_node(alpha, bl, br, i, s, n, min_sum)
            u_out[i : i + (1 << s)] = 0
            i += 1 << s
            continue
        update_alpha(alpha, bl, i, n, 0, min_sum)
        lam = alpha[1]
        u = 0
        if not frozen[i] and lam < 0.0:
            u = 1
        metric += metric_increment(lam, u)
        u_out[i] = u
        update_bits(bl, br, i, u, n)
        i += 1
    return metric


@njit(cache=True)
def sc_batch(llrs, frozen, zstage, min_sum, u_out, metrics):
    for t in range(llrs.shape[0]):
        metrics[t] = sc_word(llrs[t], frozen, zstage, min_sum, u_out[t])


@njit(cache=True)
def genie_word(llr, u, min_sum, lam_out):
    """Decision LLRs when every earlier decision equals ``u`` (genie aided)."""
    N = llr.shape[0]
    n = _log2(N)
    alpha = np.empty(2 * N)
    bl = np.zeros(2 * N, dtype=np.uint8)
    br = np.zeros(2 * N, dtype=np.uint8)
    alpha[N:] = llr
    for i in range(N):
        update_alpha(alpha, bl, i, n, 0, min_sum)
        lam_out[i] = alpha[1]
        update_bits(bl, br, i, u[i], n)


@njit(cache=True)
def genie_batch(llrs, us, min_sum, lam_out):
    for t in range(llrs.shape[0]):
        genie_word(llrs[t], us[t], min_sum, lam_out[t])


@njit(cache=True)
def rep_sc_word(llr, kind, head_of, zstage, min_sum, u_out):
    """SC with repetition blocks: two branches while a block is open."""
    N = llr.shape[0]
    n = _log2(N)
    alpha = np.empty((2, 2 * N))
    bl = np.zeros((2, 2 * N), dtype=np.uint8)
    br = np.zeros((2, 2 * N), dtype=np.uint8)
    u = np.zeros((2, N), dtype=np.uint8)
    metric = np.zeros(2)
    alpha[0, N:] = llr
    cur = 0
    nb = 1  # live branches; branch b lives in slot (cur + b) % 2
    i = 0
    while i < N:
        s = zstage[i]
        if s > 0:
            for b in range(nb):
                slot = (cur + b) % 2
                metric[slot] += frozen_node(alpha[slot], bl[slot], br[slot], i, s, n, min_sum)
                u[slot, i : i + (1 << s)] = 0
            i += 1 << s
            continue
        k = kind[i]
        if k == HEAD:
            oth = 1 - cur
            alpha[oth, :] = alpha[cur, :]
            bl[oth, :] = bl[cur, :]
            br[oth, :] = br[cur, :]
            u[oth, :i] = u[cur, :i]
            metric[oth] = metric[cur]
            nb = 2
        for b in range(nb):
            slot = (cur + b) % 2
            update_alpha(alpha[slot], bl[slot], i, n, 0, min_sum)
            lam = alpha[slot, 1]
            if k == FROZEN:
                d = 0
            elif k == INFO:
                d = 1 if lam < 0.0 else 0
            elif k == HEAD:
                d = b
            else:
                d = u[slot, head_of[i]]
            u[slot, i] = d
            metric[slot] += metric_increment(lam, d)
            update_bits(bl[slot], br[slot], i, d, n)
        if k == LAST:
            if metric[1 - cur] < metric[cur]:
                cur = 1 - cur
            nb = 1
        i += 1
    u_out[:] = u[cur]
    return metric[cur]


@njit(cache=True)
def rep_sc_batch(llrs, kind, head_of, zstage, min_sum, u_out, metrics):
    for t in range(llrs.shape[0]):
        metrics[t] = rep_sc_word(llrs[t], kind, head_of, zstage, min_sum, u_out[t])


@njit(cache=True)
def _less(m1, b1, p1, m2, b2, p2):
    if m1 != m2:
        return m1 < m2
    if b1 != b2:
        return b1 < b2
    return p1 < p2


@njit(cache=True)
def _sort_candidates(cm, cb, cp, count):
    # insertion sort on (metric, bit, parent rank); count is small (<= 4L)
    for a in range(1, count):
        m = cm[a]
        b = cb[a]
        p = cp[a]
        j = a - 1
        while j >= 0 and _less(m, b, p, cm[j], cb[j], cp[j]):
            cm[j + 1] = cm[j]
            cb[j + 1] = cb[j]
            cp[j + 1] = cp[j]
            j -= 1
        cm[j + 1] = m
        cb[j + 1] = b
        cp[j + 1] = p


@njit(cache=True)
def list_word(llr, kind, head_of, zstage, L, min_sum, u_out):
    """Successive list decoding, optionally aware of repetition blocks.

    Paths are kept in rank order; rank breaks metric ties (lower rank wins).
    A block head forks every path without pruning, so up to 2L paths live while
    a block is open. Inside the block, forks are pruned to L per value of the
    block bit, and the block's last index prunes the union back to L.
    """
    N = llr.shape[0]
    n = _log2(N)
    cap = 2 * L
    alpha = np.empty((cap, 2 * N))
    bl = np.zeros((cap, 2 * N), dtype=np.uint8)
    br = np.zeros((cap, 2 * N), dtype=np.uint8)
    u = np.zeros((cap, N), dtype=np.uint8)
    metric = np.zeros(cap)
    lam = np.empty(cap)
    order = np.empty(cap, dtype=np.int64)  # rank -> storage slot
    new_order = np.empty(cap, dtype=np.int64)
    used = np.zeros(cap, dtype=np.bool_)
    first = np.empty(cap, dtype=np.bool_)
    cm = np.empty(2 * cap)
    cb = np.empty(2 * cap, dtype=np.int64)
    cp = np.empty(2 * cap, dtype=np.int64)
    keep_m = np.empty(2 * cap)
    keep_b = np.empty(2 * cap, dtype=np.int64)
    keep_p = np.empty(2 * cap, dtype=np.int64)
    alpha[0, N:] = llr
    order[0] = 0
    P = 1
    open_head = -1
    i = 0
    while i < N:
        s = zstage[i]
        if s > 0:
            for r in range(P):
                slot = order[r]
                metric[slot] += frozen_node(alpha[slot], bl[slot], br[slot], i, s, n, min_sum)
                u[slot, i : i + (1 << s)] = 0
            i += 1 << s
            continue
        k = kind[i]
        for r in range(P):
            slot = order[r]
            update_alpha(alpha[slot], bl[slot], i, n, 0, min_sum)
            lam[r] = alpha[slot, 1]
        if k == FROZEN or k == MEMBER or k == LAST:
            for r in range(P):
                slot = order[r]
                d = 0 if k == FROZEN else u[slot, head_of[i]]
                u[slot, i] = d
                metric[slot] += metric_increment(lam[r], d)
                update_bits(bl[slot], br[slot], i, d, n)
            if k == LAST:
                open_head = -1
                if P > L:
                    # merge both block hypotheses back to L paths
                    for r in range(P):
                        slot = order[r]
                        cm[r] = metric[slot]
                        cb[r] = u[slot, head_of[i]]
                        cp[r] = r
                    _sort_candidates(cm, cb, cp, P)
                    for q in range(L):
                        new_order[q] = order[cp[q]]
                    for q in range(L):
                        order[q] = new_order[q]
                    P = L
            i += 1
            continue
        # fork: candidates (metric, bit, parent rank)
        cnt = 0
        for r in range(P):
            slot = order[r]
            for d in range(2):
                cm[cnt] = metric[slot] + metric_increment(lam[r], d)
                cb[cnt] = d
                cp[cnt] = r
                cnt += 1
        _sort_candidates(cm, cb, cp, cnt)
        nk = 0
        if k == HEAD:
            open_head = i
            for q in range(cnt):
                keep_m[nk] = cm[q]
                keep_b[nk] = cb[q]
                keep_p[nk] = cp[q]
                nk += 1
        elif open_head >= 0:
            c0 = 0
            c1 = 0
            for q in range(cnt):
                if u[order[cp[q]], open_head] == 0:
                    if c0 >= L:
                        continue
                    c0 += 1
                else:
                    if c1 >= L:
                        continue
                    c1 += 1
                keep_m[nk] = cm[q]
                keep_b[nk] = cb[q]
                keep_p[nk] = cp[q]
                nk += 1
        else:
            nk = min(cnt, L)
            for q in range(nk):
                keep_m[q] = cm[q]
                keep_b[q] = cb[q]
                keep_p[q] = cp[q]
        # storage: the first surviving child of a parent reuses its slot, others copy
        for q in range(cap):
            used[q] = False
        for r in range(P):
            first[r] = True
        for q in range(nk):
            used[order[keep_p[q]]] = True
        for q in range(nk):
            r = keep_p[q]
            src = order[r]
            if first[r]:
                first[r] = False
                new_order[q] = src
            else:
                dst = 0
                while used[dst]:
                    dst += 1
                used[dst] = True
                alpha[dst, :] = alpha[src, :]
                bl[dst, :] = bl[src, :]
                br[dst, :] = br[src, :]
                u[dst, :i] = u[src, :i]
                new_order[q] = dst
        for q in range(nk):
            slot = new_order[q]
            order[q] = slot
            u[slot, i] = keep_b[q]
            metric[slot] = keep_m[q]
            update_bits(bl[slot], br[slot], i, keep_b[q], n)
        P = nk
        i += 1
    best = 0
    for r in range(1, P):
        if metric[order[r]] < metric[order[best]]:
            best = r
    slot = order[best]
    u_out[:] = u[slot]
    return metric[slot]


@njit(cache=True)
def list_batch(llrs, kind, head_of, zstage, L, min_sum, u_out, metrics):
    for t in range(llrs.shape[0]):
        metrics[t] = list_word(llrs[t], kind, head_of, zstage, L, min_sum, u_out[t])
