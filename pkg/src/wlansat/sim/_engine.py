"""Pure-Python simulation kernel: slotted CSMA/CA over a WLAN conflict graph.

The process is slot-synchronous. Every node holds a backoff counter drawn
uniformly from [0, CW-1]; a node observes a slot as idle when no node of its
own WLAN or of an adjacent WLAN is transmitting during that slot. Counters
decrement only on observed-idle slots, and a node transmits in the idle slot
that follows its countdown (a draw of b transmits in the (b+1)-th idle slot).
All nodes of one sensing neighborhood whose counters expire in the same slot
transmit together: a lone transmitter succeeds and holds the channel for
``d_succ`` slots, otherwise every same-slot transmitter in the neighborhood
collides and holds it for ``d_coll`` slots, doubling its window up to stage
``m_stages``. Success resets the window; traffic is full-buffer, so the
finishing node immediately redraws.

The implementation is event-driven but exactly equivalent to stepping slot by
slot: each WLAN keeps a virtual clock counting the idle slots it has observed,
and a node's pending transmission is a target value on its WLAN's clock.
Between transmission starts/ends nothing else can happen, so time jumps to the
earliest pending end or target.

RNG: SplitMix64 (Steele et al.), one named 64-bit stream per replication;
draws map the next output onto [0, CW-1] by multiply-shift. The compiled
kernel in ``_engine_c`` replicates this stream bit for bit, so both backends
produce identical results for identical seeds.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def mix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step: returns (advanced state, 64-bit output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def derive_seeds(seed: int, count: int) -> list[int]:
    """Per-replication kernel seeds: successive outputs of a master stream."""
    state = seed & _MASK64
    out = []
    for _ in range(count):
        state, z = mix64(state)
        out.append(z)
    return out


def run_kernel(
    node_wlan: list[int],
    neigh_masks: list[int],
    cw_min: int,
    m_stages: int,
    d_succ: int,
    d_coll: int,
    warmup_slot: int,
    end_slot: int,
    seed: int,
    record_events: bool,
):
    """Run one replication; see the module docstring for the process rules.

    Returns ``(successes, collisions, state_slots, probe, events)`` where the
    first two are per-WLAN attempt counts started inside the measurement
    window, ``state_slots`` maps each transmitting-WLAN bitmask to the slots it
    was active within the window, ``probe`` maps ``(wlan, predecessor mask)``
    to ``[attempts, collisions, successful airtime in slots]``, and ``events``
    is ``None`` or a list of ``(start_slot, wlan, node, success, duration)``
    covering the whole run.
    """
    n_nodes = len(node_wlan)
    n_wlans = len(neigh_masks)
    rng = seed & _MASK64

    target = [0] * n_nodes  # WLAN-clock value at which the node transmits
    stage = [0] * n_nodes
    tx_end = [-1] * n_nodes  # end slot of the node's active transmission
    tx_ok = [False] * n_nodes
    v = [0] * n_wlans  # idle slots observed by each WLAN so far
    num_tx = [0] * n_wlans
    active_mask = 0  # WLANs with at least one node transmitting

    successes = [0] * n_wlans
    collisions = [0] * n_wlans
    state_slots: dict[int, int] = {}
    probe: dict[tuple[int, int], list[int]] = {}
    events: list[tuple[int, int, int, bool, int]] | None = [] if record_events else None

    for n in range(n_nodes):
        rng, z = mix64(rng)
        target[n] = (z * cw_min) >> 64

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
            w = node_wlan[n]
            if active_mask & neigh_masks[w]:
                continue  # sensing busy: counter frozen
            cand = t + target[n] - v[w]
            if next_start < 0 or cand < next_start:
                next_start = cand

        if next_end >= 0 and (next_start < 0 or next_end < next_start):
            t_next = next_end
        else:
            t_next = next_start

        if t_next >= end_slot:
            lo = t if t > warmup_slot else warmup_slot
            if end_slot > lo:
                state_slots[active_mask] = state_slots.get(active_mask, 0) + end_slot - lo
            break

        # account the constant-state segment [t, t_next) and advance clocks
        lo = t if t > warmup_slot else warmup_slot
        hi = t_next if t_next < end_slot else end_slot
        if hi > lo:
            state_slots[active_mask] = state_slots.get(active_mask, 0) + hi - lo
        dt = t_next - t
        if dt:
            for w in range(n_wlans):
                if not active_mask & neigh_masks[w]:
                    v[w] += dt
        t = t_next

        # transmission ends first: they free the channel for slot t
        for n in range(n_nodes):
            if tx_end[n] == t:
                w = node_wlan[n]
                num_tx[w] -= 1
                if not num_tx[w]:
                    active_mask &= ~(1 << w)
                stage[n] = 0 if tx_ok[n] else min(stage[n] + 1, m_stages)
                rng, z = mix64(rng)
                target[n] = v[w] + ((z * (cw_min << stage[n])) >> 64)
                tx_end[n] = -1

        # then simultaneous starts, judged against ongoing transmissions only
        pre_mask = active_mask
        starters = []
        cnt = [0] * n_wlans
        any_mask = 0
        for n in range(n_nodes):
            if tx_end[n] >= 0:
                continue
            w = node_wlan[n]
            if pre_mask & neigh_masks[w] or target[n] != v[w]:
                continue
            starters.append(n)
            cnt[w] += 1
            any_mask |= 1 << w

        if not starters:
            continue
        measured = warmup_slot <= t < end_slot
        for n in starters:
            w = node_wlan[n]
            ok = cnt[w] == 1 and not (any_mask & neigh_masks[w] & ~(1 << w))
            dur = d_succ if ok else d_coll
            tx_end[n] = t + dur
            tx_ok[n] = ok
            num_tx[w] += 1
            active_mask |= 1 << w
            if measured:
                if ok:
                    successes[w] += 1
                else:
                    collisions[w] += 1
                rec = probe.get((w, pre_mask))
                if rec is None:
                    rec = [0, 0, 0]
                    probe[(w, pre_mask)] = rec
                rec[0] += 1
                if ok:
                    rec[2] += d_succ
                else:
                    rec[1] += 1
            if events is not None:
                events.append((t, w, n, ok, dur))

    return successes, collisions, state_slots, probe, events
