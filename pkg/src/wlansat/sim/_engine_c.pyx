# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel: bit-for-bit twin of ``_engine.run_kernel``.

Any behavioral change must land in both backends; the cross-backend test
compares complete kernel outputs on fixed seeds. Only the hot per-node scans
are lowered to C -- the per-event statistics stay ordinary Python objects.
"""

from libc.stdlib cimport calloc, free

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    # widened multiply for the uniform draw; GCC/Clang builtin type
    ctypedef unsigned long long u128 "unsigned __int128"


cdef inline u64 _mix64(u64* state) noexcept:
    cdef u64 z
    state[0] = state[0] + <u64>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline i64 _draw(u64* state, u64 cw) noexcept:
    return <i64>((<u128>_mix64(state) * <u128>cw) >> 64)


def run_kernel(
    node_wlan,
    neigh_masks,
    cw_min,
    m_stages,
    d_succ,
    d_coll,
    warmup_slot,
    end_slot,
    seed,
    record_events,
):
    """Signature and semantics identical to ``_engine.run_kernel``."""
    cdef int n_nodes = len(node_wlan)
    cdef int n_wlans = len(neigh_masks)
    cdef u64 rng = <u64>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef i64 c_d_succ = d_succ, c_d_coll = d_coll
    cdef i64 c_warmup = warmup_slot, c_end = end_slot
    cdef int c_cwmin = cw_min, c_m = m_stages
    cdef bint c_events = bool(record_events)

    cdef int* nw = <int*>calloc(n_nodes, sizeof(int))
    cdef i64* target = <i64*>calloc(n_nodes, sizeof(i64))
    cdef int* stage = <int*>calloc(n_nodes, sizeof(int))
    cdef i64* tx_end = <i64*>calloc(n_nodes, sizeof(i64))
    cdef char* tx_ok = <char*>calloc(n_nodes, sizeof(char))
    cdef u64* neigh = <u64*>calloc(n_wlans, sizeof(u64))
    cdef i64* v = <i64*>calloc(n_wlans, sizeof(i64))
    cdef int* num_tx = <int*>calloc(n_wlans, sizeof(int))
    cdef i64* succ = <i64*>calloc(n_wlans, sizeof(i64))
    cdef i64* coll = <i64*>calloc(n_wlans, sizeof(i64))
    cdef int* cnt = <int*>calloc(n_wlans, sizeof(int))
    cdef int* starters = <int*>calloc(n_nodes, sizeof(int))
    if not (nw and target and stage and tx_end and tx_ok and neigh and v
            and num_tx and succ and coll and cnt and starters):
        free(nw); free(target); free(stage); free(tx_end); free(tx_ok)
        free(neigh); free(v); free(num_tx); free(succ); free(coll)
        free(cnt); free(starters)
        raise MemoryError()

    state_slots = {}
    probe = {}
    events = [] if c_events else None

    cdef int n, w, k, n_starters
    cdef i64 t, t_next, next_end, next_start, cand, e, dt, lo, hi, dur
    cdef u64 active_mask = 0, pre_mask, any_mask
    cdef bint ok, measured

    try:
        for n in range(n_nodes):
            nw[n] = node_wlan[n]
            tx_end[n] = -1
        for w in range(n_wlans):
            neigh[w] = neigh_masks[w]
        for n in range(n_nodes):
            target[n] = _draw(&rng, <u64>c_cwmin)

        t = 0
        while True:
            next_end = -1
            for n in range(n_nodes):
                e = tx_end[n]
                if e >= 0 and (next_end < 0 or e < next_end):
                    next_end = e
            next_start = -1
            for n in range(n_nodes):
                if tx_end[n] >= 0:
                    continue
                w = nw[n]
                if active_mask & neigh[w]:
                    continue
                cand = t + target[n] - v[w]
                if next_start < 0 or cand < next_start:
                    next_start = cand

            if next_end >= 0 and (next_start < 0 or next_end < next_start):
                t_next = next_end
            else:
                t_next = next_start

            if t_next >= c_end:
                lo = t if t > c_warmup else c_warmup
                if c_end > lo:
                    key = active_mask
                    state_slots[key] = state_slots.get(key, 0) + (c_end - lo)
                break

            lo = t if t > c_warmup else c_warmup
            hi = t_next if t_next < c_end else c_end
            if hi > lo:
                key = active_mask
                state_slots[key] = state_slots.get(key, 0) + (hi - lo)
            dt = t_next - t
            if dt:
                for w in range(n_wlans):
                    if not active_mask & neigh[w]:
                        v[w] += dt
            t = t_next

            for n in range(n_nodes):
                if tx_end[n] == t:
                    w = nw[n]
                    num_tx[w] -= 1
                    if not num_tx[w]:
                        active_mask &= ~(<u64>1 << w)
                    if tx_ok[n]:
                        stage[n] = 0
                    elif stage[n] < c_m:
                        stage[n] += 1
                    target[n] = v[w] + _draw(&rng, <u64>c_cwmin << stage[n])
                    tx_end[n] = -1

            pre_mask = active_mask
            any_mask = 0
            n_starters = 0
            for w in range(n_wlans):
                cnt[w] = 0
            for n in range(n_nodes):
                if tx_end[n] >= 0:
                    continue
                w = nw[n]
                if pre_mask & neigh[w] or target[n] != v[w]:
                    continue
                starters[n_starters] = n
                n_starters += 1
                cnt[w] += 1
                any_mask |= <u64>1 << w

            if not n_starters:
                continue
            measured = c_warmup <= t < c_end
            for k in range(n_starters):
                n = starters[k]
                w = nw[n]
                ok = cnt[w] == 1 and not (any_mask & neigh[w] & ~(<u64>1 << w))
                dur = c_d_succ if ok else c_d_coll
                tx_end[n] = t + dur
                tx_ok[n] = ok
                num_tx[w] += 1
                active_mask |= <u64>1 << w
                if measured:
                    if ok:
                        succ[w] += 1
                    else:
                        coll[w] += 1
                    pkey = (w, pre_mask)
                    rec = probe.get(pkey)
                    if rec is None:
                        rec = [0, 0, 0]
                        probe[pkey] = rec
                    rec[0] = rec[0] + 1
                    if ok:
                        rec[2] = rec[2] + c_d_succ
                    else:
                        rec[1] = rec[1] + 1
                if c_events:
                    events.append((t, w, n, bool(ok), dur))

        successes = [succ[w] for w in range(n_wlans)]
        collisions = [coll[w] for w in range(n_wlans)]
    finally:
        free(nw); free(target); free(stage); free(tx_end); free(tx_ok)
        free(neigh); free(v); free(num_tx); free(succ); free(coll)
        free(cnt); free(starters)

    return successes, collisions, state_slots, probe, events
