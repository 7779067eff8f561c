"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Set ``TTPSOLVE_NO_NUMBA=1`` to force the fallback path (useful for
debugging and for the kernel benchmark).  Both paths produce identical
results for the DP merge; the Inver-over loops are stream-compatible only
within one backend because numba's np.random is a separate Mersenne
Twister instance.
"""

import os

import numpy as np

NUMBA_ENABLED = os.environ.get("TTPSOLVE_NO_NUMBA", "").lower() not in ("1", "true", "yes")
if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda func: func


# ---------------------------------------------------------------------------
# DP column merge
# ---------------------------------------------------------------------------

def dp_merge_py(old_w, old_b, item_w, item_p, rdist, vmax, nu, cap):
    """Vectorised keep-vs-take column update with dominance pruning.

    ``old_w``/``old_b`` is the predecessor column as a strictly increasing
    staircase (weight ascending, reward strictly increasing).  ``rdist`` is
    the rent-weighted distance remaining after the item's node.  Returns the
    pruned successor column plus back-links for plan reconstruction:
    ``(w, b, took, prev)`` where ``prev`` indexes the predecessor column.
    """
    k = int(np.searchsorted(old_w, cap - item_w, side="right"))
    tw = old_w[:k] + item_w
    tb = old_b[:k] + item_p - rdist * (1.0 / (vmax - nu * tw) - 1.0 / (vmax - nu * old_w[:k]))

    n_old = old_w.size
    w_all = np.concatenate((old_w, tw))
    b_all = np.concatenate((old_b, tb))
    took = np.zeros(n_old + k, np.uint8)
    took[n_old:] = 1
    prev = np.concatenate((np.arange(n_old), np.arange(k)))

    # weight ascending, then best reward first; on full ties the keep side
    # (earlier-constructed) wins
    order = np.lexsort((took, -b_all, w_all))
    b_sorted = b_all[order]
    runmax = np.maximum.accumulate(b_sorted)
    keep = np.empty(b_sorted.size, bool)
    keep[0] = True
    keep[1:] = b_sorted[1:] > runmax[:-1]
    sel = order[keep]
    return w_all[sel], b_all[sel], took[sel], prev[sel]


@njit(cache=True)
def _dp_merge_loop(old_w, old_b, item_w, item_p, rdist, vmax, nu, cap):
    n_old = old_w.size
    k = 0
    while k < n_old and old_w[k] + item_w <= cap:
        k += 1
    tw = np.empty(k, np.int64)
    tb = np.empty(k, np.float64)
    for t in range(k):
        tw[t] = old_w[t] + item_w
        tb[t] = old_b[t] + item_p - rdist * (
            1.0 / (vmax - nu * tw[t]) - 1.0 / (vmax - nu * old_w[t])
        )

    out_w = np.empty(n_old + k, np.int64)
    out_b = np.empty(n_old + k, np.float64)
    out_t = np.empty(n_old + k, np.uint8)
    out_p = np.empty(n_old + k, np.int64)
    i = 0
    j = 0
    cnt = 0
    last_b = -np.inf
    while i < n_old or j < k:
        if j >= k:
            pick_keep = True
        elif i >= n_old:
            pick_keep = False
        elif old_w[i] < tw[j]:
            pick_keep = True
        elif old_w[i] > tw[j]:
            pick_keep = False
        else:
            pick_keep = old_b[i] >= tb[j]
        if pick_keep:
            w, b, tk, pv = old_w[i], old_b[i], 0, i
            i += 1
        else:
            w, b, tk, pv = tw[j], tb[j], 1, j
            j += 1
        if b > last_b:
            out_w[cnt] = w
            out_b[cnt] = b
            out_t[cnt] = tk
            out_p[cnt] = pv
            last_b = b
            cnt += 1
    return out_w[:cnt], out_b[:cnt], out_t[:cnt], out_p[:cnt]


dp_merge_jit = _dp_merge_loop if NUMBA_ENABLED else None
dp_merge = dp_merge_jit if NUMBA_ENABLED else dp_merge_py


# ---------------------------------------------------------------------------
# Inver-over generation loop
# ---------------------------------------------------------------------------

@njit(cache=True)
def _inver_over_loop(pop, dist, generations, p_random, seed):
    """Canonical Inver-over over a population of cyclic 0-based tours.

    Mutates ``pop`` in place and returns the tour lengths.  Acceptance is
    monotone: a mutated individual replaces its ancestor only when not
    longer.
    """
    np.random.seed(seed)
    ps, n = pop.shape
    pos = np.empty((ps, n), np.int64)
    for s in range(ps):
        for idx in range(n):
            pos[s, pop[s, idx]] = idx
    lengths = np.zeros(ps, np.int64)
    for s in range(ps):
        for idx in range(n):
            lengths[s] += dist[pop[s, idx], pop[s, (idx + 1) % n]]

    cur = np.empty(n, np.int64)
    curpos = np.empty(n, np.int64)
    for _ in range(generations):
        for s in range(ps):
            cur[:] = pop[s]
            curpos[:] = pos[s]
            delta = 0
            c = cur[np.random.randint(n)]
            while True:
                if np.random.random() <= p_random:
                    c2 = cur[np.random.randint(n)]
                    while c2 == c:
                        c2 = cur[np.random.randint(n)]
                else:
                    other = np.random.randint(ps)
                    while other == s:
                        other = np.random.randint(ps)
                    c2 = pop[other, (pos[other, c] + 1) % n]
                i = curpos[c]
                succ = cur[(i + 1) % n]
                pred = cur[(i - 1) % n]
                if c2 == succ or c2 == pred:
                    break
                j = curpos[c2]
                nxt2 = cur[(j + 1) % n]
                delta += dist[c, c2] + dist[succ, nxt2] - dist[c, succ] - dist[c2, nxt2]
                # reverse the cyclic segment succ(c) .. c2
                a = (i + 1) % n
                b = j
                seg = (b - a) % n + 1
                for t in range(seg // 2):
                    ia = (a + t) % n
                    ib = (b - t) % n
                    ca, cb = cur[ia], cur[ib]
                    cur[ia], cur[ib] = cb, ca
                    curpos[ca], curpos[cb] = ib, ia
                c = c2
            if delta <= 0:
                pop[s] = cur
                pos[s] = curpos
                lengths[s] += delta
    return lengths


def inver_over_py(pop, dist, generations, p_random, seed, hook=None):
    """Pure-python twin of the Inver-over loop; supports an acceptance hook.

    ``hook(ancestor_length, accepted_length)`` fires on every acceptance,
    which lets tests assert the monotone-acceptance property directly.
    """
    rng = np.random.RandomState(seed)
    ps, n = pop.shape
    pos = np.argsort(pop, axis=1)
    lengths = np.array(
        [int(dist[pop[s], np.roll(pop[s], -1)].sum()) for s in range(ps)], np.int64
    )
    for _ in range(generations):
        for s in range(ps):
            cur = pop[s].copy()
            curpos = pos[s].copy()
            delta = 0
            c = cur[rng.randint(n)]
            while True:
                if rng.random_sample() <= p_random:
                    c2 = cur[rng.randint(n)]
                    while c2 == c:
                        c2 = cur[rng.randint(n)]
                else:
                    other = rng.randint(ps)
                    while other == s:
                        other = rng.randint(ps)
                    c2 = pop[other, (pos[other, c] + 1) % n]
                i = curpos[c]
                succ = cur[(i + 1) % n]
                if c2 == succ or c2 == cur[(i - 1) % n]:
                    break
                j = curpos[c2]
                nxt2 = cur[(j + 1) % n]
                delta += dist[c, c2] + dist[succ, nxt2] - dist[c, succ] - dist[c2, nxt2]
                a, b = (i + 1) % n, j
                seg = (b - a) % n + 1
                for t in range(seg // 2):
                    ia = (a + t) % n
                    ib = (b - t) % n
                    ca, cb = cur[ia], cur[ib]
                    cur[ia], cur[ib] = cb, ca
                    curpos[ca], curpos[cb] = ib, ia
                c = c2
            if delta <= 0:
                if hook is not None:
                    hook(int(lengths[s]), int(lengths[s] + delta))
                pop[s] = cur
                pos[s] = curpos
                lengths[s] += delta
    return lengths


inver_over_jit = _inver_over_loop if NUMBA_ENABLED else None


def run_inver_over(pop, dist, generations, p_random, seed, hook=None):
    """Dispatch to the jitted loop unless a hook demands the python twin."""
    if hook is None and inver_over_jit is not None:
        return inver_over_jit(pop, dist, generations, p_random, seed)
    return inver_over_py(pop, dist, generations, p_random, seed, hook=hook)
