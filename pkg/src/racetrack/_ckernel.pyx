# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot loops; see ``_pykernel`` for the reference."""

import numpy as np
from libc.math cimport sqrt
from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memset

ctypedef long long i64
ctypedef unsigned long long u64

cdef i64 INF_ = 1LL << 60
INF = INF_
NAME = "cython"


cdef inline i64 isqrt_floor(i64 n) nogil:
    if n <= 0:
        return 0
    cdef i64 r = <i64>sqrt(<double>n)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


cdef inline i64 ceil_sqrt(i64 n) nogil:
    if n <= 0:
        return 0
    cdef i64 r = isqrt_floor(n)
    if r * r == n:
        return r
    return r + 1


cdef inline i64 floor_div4(i64 a) nogil:
    # floor(a / 4) for any sign
    if a >= 0:
        return a // 4
    return -((-a + 3) // 4)


cdef inline i64 ceil_div4(i64 a) nogil:
    return -floor_div4(-a)


cdef inline i64 iabs(i64 a) nogil:
    return -a if a < 0 else a


cdef inline i64 curve_lo(i64 s, i64 s2, i64 t) nogil:
    return ceil_div4((3 * s - t + s2) * (t - s2 + s) + 2 * (s2 + s + 1) * (s2 - s))


cdef inline i64 curve_hi(i64 s, i64 s2, i64 t) nogil:
    return floor_div4((3 * s2 + t + s) * (t - s2 + s) + 2 * (s2 + s + 1) * (s2 - s))


cdef void case4(i64 s, i64 s2, i64 delta, i64* a, i64* b, i64* tail) nogil:
    cdef i64 tmin = iabs(s2 - s)
    cdef i64 peak = s + s2
    cdef i64 dmax = 2 * s2 * s2 + 2 * s * s - 2 * s2 + 2 * s + 4 * delta
    cdef i64 dmin = 2 * s2 * s2 + 2 * s * s + 2 * s2 - 2 * s - 4 * delta
    cdef i64 t1 = ceil_sqrt(dmax) - peak
    cdef i64 root, t2, t3
    if t1 < tmin:
        t1 = tmin
    while t1 > tmin and curve_hi(s, s2, t1 - 1) >= delta:
        t1 -= 1
    while curve_hi(s, s2, t1) < delta:
        t1 += 1
    if dmin <= 0:
        a[0] = 1; b[0] = 0; tail[0] = t1
        return
    root = ceil_sqrt(dmin)
    t3 = peak + root
    if t3 < tmin:
        t3 = tmin
    while curve_lo(s, s2, t3) > delta:
        t3 += 1
    while t3 - 1 >= tmin and t3 - 1 >= peak and curve_lo(s, s2, t3 - 1) <= delta:
        t3 -= 1
    if t3 < t1:
        t3 = t1
    t2 = peak - root
    while t2 >= tmin and curve_lo(s, s2, t2) > delta:
        t2 -= 1
    while t2 + 1 < peak and t2 + 1 >= tmin and curve_lo(s, s2, t2 + 1) <= delta:
        t2 += 1
    if t2 >= t1:
        a[0] = t1; b[0] = t2; tail[0] = t3
    else:
        a[0] = 1; b[0] = 0; tail[0] = t3


cdef inline i64 brake(i64 s) nogil:
    s = iabs(s)
    return s * (s - 1) // 2


cdef inline i64 accel(i64 s) nogil:
    s = iabs(s)
    return s * (s + 1) // 2


cdef void feasible(i64 x, i64 s, i64 x2, i64 s2, i64* a, i64* b, i64* tail) nogil:
    cdef i64 delta = x2 - x
    cdef i64 p1, p2, shift = 0
    if delta < 0 or (delta == 0 and s <= 0 and s2 <= 0):
        delta = -delta; s = -s; s2 = -s2
    if s >= 0 and s2 >= 0:
        if s == 0 and s2 == 0:
            a[0] = 1; b[0] = 0; tail[0] = ceil_sqrt(4 * delta)
        else:
            case4(s, s2, delta, a, b, tail)
        return
    if s <= 0 and s2 <= 0:
        p1 = -brake(s)
        p2 = delta + accel(s2)
        a[0] = 1; b[0] = 0; tail[0] = -s - s2 + ceil_sqrt(4 * (p2 - p1))
        return
    if s < 0 and s2 > 0:
        p1 = -brake(s)
        p2 = delta - accel(s2)
        if p1 <= p2:
            case4(0, s2, delta - p1, a, b, tail)
            shift = -s
        else:
            case4(-s, 0, -p2, a, b, tail)
            shift = s2
    else:
        p1 = brake(s)
        p2 = delta + accel(s2)
        if p1 >= p2:
            case4(0, -s2, p1 - delta, a, b, tail)
            shift = s
        else:
            case4(s, 0, p2, a, b, tail)
            shift = -s2
    tail[0] += shift
    if a[0] <= b[0]:
        a[0] += shift; b[0] += shift


cdef i64 combine(const i64* A, const i64* B, const i64* T, int d, i64 tmin) nogil:
    cdef i64 best = INF_, t
    cdef int j, k, ok, c
    # the minimum is tmin or the start of some component
    for c in range(2 * d + 1):
        if c == 2 * d:
            t = tmin
        elif c % 2 == 0:
            j = c // 2
            if A[j] > B[j] or B[j] < tmin:
                continue
            t = A[j] if A[j] > tmin else tmin
        else:
            j = c // 2
            t = T[j] if T[j] > tmin else tmin
        if t >= best:
            continue
        ok = 1
        for k in range(d):
            if not ((A[k] <= t and t <= B[k]) or t >= T[k]):
                ok = 0
                break
        if ok:
            best = t
    return best


cdef i64 cost_rows(const i64* p, const i64* v, const i64* p2, const i64* v2, int d, i64 tmin) nogil:
    cdef i64 A[8]
    cdef i64 B[8]
    cdef i64 T[8]
    cdef int j
    for j in range(d):
        feasible(p[j], v[j], p2[j], v2[j], &A[j], &B[j], &T[j])
    return combine(A, B, T, d, tmin)


def raw_table(i64 dlo, i64 dhi, i64 slo, i64 shi):
    """(a, b, tail) for every displacement in [dlo, dhi] and speed pair in [slo, shi]^2."""
    cdef Py_ssize_t nd = dhi - dlo + 1, ns = shi - slo + 1, i, j, k
    cdef i64 a, b, tail
    out = np.empty((nd, ns, ns, 3), dtype=np.int32)
    cdef int[:, :, :, ::1] o = out
    with nogil:
        for i in range(nd):
            for j in range(ns):
                for k in range(ns):
                    feasible(0, slo + j, dlo + i, slo + k, &a, &b, &tail)
                    o[i, j, k, 0] = <int>a
                    o[i, j, k, 1] = <int>b
                    o[i, j, k, 2] = <int>tail
    return out


def feasible_1d(i64 x, i64 s, i64 x2, i64 s2):
    cdef i64 a, b, tail
    feasible(x, s, x2, s2, &a, &b, &tail)
    return a, b, tail


def cost_nd(p, v, p2, v2, i64 tmin=0):
    cdef int d = len(p)
    cdef i64 P[8]
    cdef i64 V[8]
    cdef i64 P2[8]
    cdef i64 V2[8]
    cdef int j
    if d > 8:
        raise ValueError("compiled kernel supports d <= 8")
    for j in range(d):
        P[j] = p[j]; V[j] = v[j]; P2[j] = p2[j]; V2[j] = v2[j]
    return cost_rows(P, V, P2, V2, d, tmin)


def filter_mask(const i64[:, ::1] P, const i64[:, ::1] V, first_p, first_v, last_p, last_v, i64 budget):
    cdef Py_ssize_t n = P.shape[0], i
    cdef int d = P.shape[1], j
    cdef i64 F[8]
    cdef i64 FV[8]
    cdef i64 L[8]
    cdef i64 LV[8]
    for j in range(d):
        F[j] = first_p[j]; FV[j] = first_v[j]; L[j] = last_p[j]; LV[j] = last_v[j]
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    with nogil:
        for i in range(n):
            if cost_rows(F, FV, &P[i, 0], &V[i, 0], d, 0) + cost_rows(&P[i, 0], &V[i, 0], L, LV, d, 0) <= budget:
                o[i] = 1
    return out.astype(bool)


cdef inline void shift_into(const u64* src, u64* dst, int nw, i64 u, int width) nogil:
    """dst |= (src shifted by u bits), truncated to ``width`` bits."""
    cdef int ws, bs, k
    cdef u64 w
    if u >= 0:
        ws = <int>(u // 64); bs = <int>(u % 64)
        for k in range(nw - 1, ws - 1, -1):
            w = src[k - ws] << bs
            if bs and k - ws - 1 >= 0:
                w |= src[k - ws - 1] >> (64 - bs)
            dst[k] |= w
    else:
        u = -u
        ws = <int>(u // 64); bs = <int>(u % 64)
        for k in range(0, nw - ws):
            w = src[k + ws] >> bs
            if bs and k + ws + 1 < nw:
                w |= src[k + ws + 1] << (64 - bs)
            dst[k] |= w
    if width % 64:
        dst[nw - 1] &= (1ULL << (width % 64)) - 1


def box_tables(const i64[::1] src_x, const i64[::1] src_s, const i64[::1] tgt_x, const i64[::1] tgt_s,
               i64 lo, i64 hi, int tcap):
    """Per (source, target) bitmask of lengths t <= tcap realizable inside [lo, hi]."""
    cdef Py_ssize_t ns = src_x.shape[0], nt = tgt_x.shape[0]
    cdef int width = <int>(hi - lo + 1)
    cdef int nw = (width + 63) // 64
    cdef i64 cap = hi - lo
    cdef i64 vmin_s = 0, vmax_s = 0, off
    cdef Py_ssize_t i, j
    for i in range(ns):
        if src_s[i] < vmin_s: vmin_s = src_s[i]
        if src_s[i] > vmax_s: vmax_s = src_s[i]
    # propagated speeds lie within [vmin_s - tcap, vmax_s + tcap] and [-cap, cap]
    cdef i64 plo = vmin_s - tcap, phi = vmax_s + tcap
    if plo < -cap: plo = -cap
    if phi > cap: phi = cap
    # rows must also cover every source and target speed (matched at t = 0)
    cdef i64 vlo = plo, vhi = phi
    for i in range(ns):
        if src_s[i] < vlo: vlo = src_s[i]
        if src_s[i] > vhi: vhi = src_s[i]
    for j in range(nt):
        if tgt_s[j] < vlo: vlo = tgt_s[j]
        if tgt_s[j] > vhi: vhi = tgt_s[j]
    cdef int nv = <int>(vhi - vlo + 1)
    out = np.zeros((ns, nt), dtype=np.uint64)
    cdef u64[:, ::1] o = out
    cdef u64* cur = <u64*>calloc(<size_t>(nv + 2) * nw, sizeof(u64))
    cdef u64* nxt = <u64*>calloc(<size_t>(nv + 2) * nw, sizeof(u64))
    cdef u64* tmp
    cdef u64* srcbuf = <u64*>calloc(nw, sizeof(u64))
    cdef i64 ulo, uhi, nlo, nhi, u
    cdef int t, k, row
    cdef i64 bitpos
    if cur == NULL or nxt == NULL or srcbuf == NULL:
        free(cur); free(nxt); free(srcbuf)
        raise MemoryError()
    try:
        with nogil:
            for i in range(ns):
                memset(cur, 0, (nv + 2) * nw * sizeof(u64))
                # row r holds speed vlo - 1 + r; rows 0 and nv + 1 stay empty
                if src_x[i] < lo or src_x[i] > hi:
                    continue
                row = <int>(src_s[i] - vlo + 1)
                bitpos = src_x[i] - lo
                cur[row * nw + bitpos // 64] |= 1ULL << (bitpos % 64)
                ulo = src_s[i]; uhi = src_s[i]
                for t in range(tcap + 1):
                    for j in range(nt):
                        if tgt_s[j] < ulo or tgt_s[j] > uhi or tgt_x[j] < lo or tgt_x[j] > hi:
                            continue
                        row = <int>(tgt_s[j] - vlo + 1)
                        bitpos = tgt_x[j] - lo
                        if (cur[row * nw + bitpos // 64] >> (bitpos % 64)) & 1ULL:
                            o[i, j] |= 1ULL << t
                    if t == tcap:
                        break
                    nlo = ulo - 1 if ulo - 1 >= plo else plo
                    nhi = uhi + 1 if uhi + 1 <= phi else phi
                    memset(nxt, 0, (nv + 2) * nw * sizeof(u64))
                    for u in range(nlo, nhi + 1):
                        row = <int>(u - vlo + 1)
                        for k in range(nw):
                            srcbuf[k] = cur[(row - 1) * nw + k] | cur[row * nw + k] | cur[(row + 1) * nw + k]
                        shift_into(srcbuf, &nxt[row * nw], nw, u, width)
                    # tighten the active speed range
                    ulo = nhi + 1; uhi = nlo - 1
                    for u in range(nlo, nhi + 1):
                        row = <int>(u - vlo + 1)
                        for k in range(nw):
                            if nxt[row * nw + k]:
                                if u < ulo: ulo = u
                                uhi = u
                                break
                    tmp = cur; cur = nxt; nxt = tmp
                    if ulo > uhi:
                        break
    finally:
        free(cur); free(nxt); free(srcbuf)
    return out


cdef inline i64 cheb(const i64* a, const i64* b, int d) nogil:
    cdef i64 m = 0, x
    cdef int j
    for j in range(d):
        x = iabs(a[j] - b[j])
        if x > m:
            m = x
    return m


cdef inline i64 lowest_bit(u64 m) nogil:
    if m == 0:
        return INF_
    cdef i64 k = 0
    while not (m & 1ULL):
        m >>= 1
        k += 1
    return k


def dp_stage(const i64[:, ::1] prev_P, const i64[:, ::1] prev_V, const i64[::1] prev_cost,
             const i64[:, ::1] cur_P, const i64[:, ::1] cur_V,
             const i64[::1] self_idx, const unsigned char[::1] self_zero,
             const i64[::1] group_start, const i64[::1] members, const i64[::1] group_min,
             const i64[:, ::1] group_vel,
             src_id=None, tgt_id=None, tables=None, raw=None, i64 dlo=0, i64 slo=0):
    """Pruned DP relaxation.

    Predecessors are grouped by velocity; groups come sorted by their
    cheapest member and members by (cost, index). A transition costs at
    least max(1, |dv|_inf) steps, so whole groups and group tails are
    skipped once they cannot beat or tie the best total found so far.
    Ties go to the lowest predecessor index (lexicographic order).
    With ``raw`` (from raw_table) per-coordinate intervals are looked up
    instead of recomputed, and the largest per-coordinate minimum serves
    as a cheap bound before intersecting.
    """
    cdef Py_ssize_t k = cur_P.shape[0], m = prev_P.shape[0], G = group_min.shape[0]
    cdef int d = cur_P.shape[1]
    cdef Py_ssize_t c, g, q, i, j
    cdef i64 best, arg, lb, step, total, base
    cdef int boxed = tables is not None
    cdef const i64[:, ::1] sid
    cdef const i64[:, ::1] tid
    cdef const u64[:, :, ::1] tab
    cdef u64 mask
    cdef int tabled = raw is not None and not boxed
    cdef const int[:, :, :, ::1] rt
    cdef i64 A[8]
    cdef i64 B[8]
    cdef i64 T[8]
    cdef i64 lb2, m1
    cdef const int* e
    if d > 8:
        raise ValueError("at most 8 dimensions")
    if boxed:
        sid = src_id; tid = tgt_id; tab = tables
    if tabled:
        rt = raw
    costs = np.full(k, INF_, dtype=np.int64)
    preds = np.full(k, -1, dtype=np.int64)
    cdef i64[::1] oc = costs
    cdef i64[::1] op = preds
    with nogil:
        for c in range(k):
            best = INF_; arg = -1
            i = self_idx[c]
            if i >= 0 and prev_cost[i] < INF_:
                if self_zero[c]:
                    step = 0
                elif boxed:
                    mask = ~1ULL
                    for j in range(d):
                        mask &= tab[j, sid[i, j], tid[c, j]]
                    step = lowest_bit(mask)
                else:
                    step = cost_rows(&prev_P[i, 0], &prev_V[i, 0], &cur_P[c, 0], &cur_V[c, 0], d, 1)
                if step < INF_:
                    best = prev_cost[i] + step; arg = i
            for g in range(G):
                if group_min[g] + 1 > best:
                    break
                lb = cheb(&group_vel[g, 0], &cur_V[c, 0], d)
                if lb < 1:
                    lb = 1
                if group_min[g] + lb > best:
                    continue
                for q in range(group_start[g], group_start[g + 1]):
                    i = members[q]
                    base = prev_cost[i]
                    if base + lb > best:
                        break
                    if i == self_idx[c]:
                        continue
                    if boxed:
                        mask = ~0ULL
                        for j in range(d):
                            mask &= tab[j, sid[i, j], tid[c, j]]
                        step = lowest_bit(mask)
                    elif tabled:
                        lb2 = 0
                        for j in range(d):
                            e = &rt[cur_P[c, j] - prev_P[i, j] - dlo, prev_V[i, j] - slo, cur_V[c, j] - slo, 0]
                            A[j] = e[0]; B[j] = e[1]; T[j] = e[2]
                            m1 = A[j] if A[j] <= B[j] else T[j]
                            if m1 > lb2:
                                lb2 = m1
                        if base + lb2 > best:
                            continue
                        step = combine(A, B, T, d, 0)
                    else:
                        step = cost_rows(&prev_P[i, 0], &prev_V[i, 0], &cur_P[c, 0], &cur_V[c, 0], d, 0)
                    if step >= INF_:
                        continue
                    total = base + step
                    if total < best or (total == best and i < arg):
                        best = total; arg = i
            oc[c] = best
            op[c] = arg
    return costs, preds
