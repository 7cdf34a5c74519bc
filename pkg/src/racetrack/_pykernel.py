"""Pure-Python implementations of the hot loops.

Mirrors ``_ckernel`` function for function. Used when the compiled module
is unavailable or ``RACETRACK_BACKEND=python`` is set, and as the
reference the compiled version is tested against. The DP stage here is a
plain double loop with no pruning.
"""

from __future__ import annotations

from .branching_cost import feasible_raw

INF = 1 << 60
NAME = "python"


def cost_nd(p, v, p2, v2, tmin=0):
    """Least t >= tmin feasible in every coordinate."""
    sets = [feasible_raw(p[j], v[j], p2[j], v2[j]) for j in range(len(p))]
    cands = {tmin}
    for a, b, tail in sets:
        if a <= b and b >= tmin:
            cands.add(max(a, tmin))
        cands.add(max(tail, tmin))
    for t in sorted(cands):
        if all((a <= t <= b) or t >= tail for a, b, tail in sets):
            return t
    raise AssertionError("unbounded tails always intersect")


def filter_mask(P, V, first_p, first_v, last_p, last_v, budget):
    """keep[i] iff cost(first -> c_i) + cost(c_i -> last) <= budget."""
    return [
        cost_nd(first_p, first_v, p, v) + cost_nd(p, v, last_p, last_v) <= budget
        for p, v in zip(P, V)
    ]


def _shift(bits: int, u: int) -> int:
    return bits << u if u >= 0 else bits >> -u


def box_tables(src_x, src_s, tgt_x, tgt_s, lo, hi, tcap):
    """mask[i][j]: bit t set iff a t-step path from source i to target j
    stays within [lo, hi] (t <= tcap)."""
    full = (1 << (hi - lo + 1)) - 1
    cap = hi - lo
    out = []
    for x, s in zip(src_x, src_s):
        row = [0] * len(tgt_x)
        if not lo <= x <= hi:
            out.append(row)
            continue
        layer = {s: 1 << (x - lo)}
        for t in range(tcap + 1):
            for j, (x2, s2) in enumerate(zip(tgt_x, tgt_s)):
                if lo <= x2 <= hi and (layer.get(s2, 0) >> (x2 - lo)) & 1:
                    row[j] |= 1 << t
            if t == tcap:
                break
            nxt = {}
            for u in range(min(layer) - 1, max(layer) + 2):
                if abs(u) > cap:
                    continue
                src = layer.get(u - 1, 0) | layer.get(u, 0) | layer.get(u + 1, 0)
                moved = _shift(src, u) & full
                if moved:
                    nxt[u] = moved
            if not nxt:
                break
            layer = nxt
        out.append(row)
    return out


def _lowest(m: int) -> int:
    return (m & -m).bit_length() - 1 if m else INF


def dp_stage(prev_P, prev_V, prev_cost, cur_P, cur_V, self_idx, self_zero,
             src_id=None, tgt_id=None, tables=None):
    """One relaxation of the DP.

    Predecessors are given in lexicographic (p, v) order, so the lowest
    index wins ties. ``self_idx[c]`` is the predecessor equal to cur
    config c (or -1), and ``self_zero[c]`` whether that pair may be
    reused at zero cost. With ``tables`` the transition cost is the
    lowest set bit of the AND of per-coordinate box masks.
    """
    d = len(cur_P[0]) if cur_P else 0
    costs, preds = [], []
    for c, (p, v) in enumerate(zip(cur_P, cur_V)):
        best, arg = INF, -1
        for i, (pp, pv) in enumerate(zip(prev_P, prev_V)):
            base = prev_cost[i]
            if base >= INF:
                continue
            is_self = i == self_idx[c]
            if is_self and self_zero[c]:
                step = 0
            elif tables is not None:
                m = -1
                for j in range(d):
                    m &= tables[j][src_id[i][j]][tgt_id[c][j]]
                if is_self:
                    m &= ~1
                step = _lowest(m)
            else:
                step = cost_nd(pp, pv, p, v, 1 if is_self else 0)
            if step >= INF:
                continue
            total = base + step
            if total < best:
                best, arg = total, i
        costs.append(best)
        preds.append(arg)
    return costs, preds
