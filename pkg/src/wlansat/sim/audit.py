"""Consistency audits over simulator event logs.

Events are ``(start_slot, wlan, node, success, duration)`` tuples in
chronological order, as produced by ``simulate(..., record_events=True)``.
"""

from __future__ import annotations

from ..scenario import Scenario

Event = tuple[int, int, int, bool, int]


def mutual_exclusion_violations(events: list[Event] | tuple[Event, ...], scenario: Scenario) -> list[tuple[Event, Event]]:
    """Pairs of time-overlapping transmissions inside one sensing neighborhood.

    Carrier sensing makes such overlaps impossible unless both transmissions
    started in the same slot (a collision), so every returned pair is a
    simulator bug.
    """
    closed = [scenario.graph.closed_mask(i) for i in range(scenario.n_wlans)]
    bad = []
    active: list[Event] = []
    for ev in events:
        start = ev[0]
        active = [a for a in active if a[0] + a[4] > start]
        for a in active:
            if closed[ev[1]] >> a[1] & 1 and a[0] != start:
                bad.append((a, ev))
        active.append(ev)
    return bad


def label_violations(events: list[Event] | tuple[Event, ...], scenario: Scenario) -> list[Event]:
    """Events whose success/collision label contradicts the same-slot starters.

    A success must have no other same-slot transmitter in its sensing
    neighborhood; a collision must have at least one. Also flags collisions
    attributed purely to non-adjacent WLANs, which cannot interfere.
    """
    closed = [scenario.graph.closed_mask(i) for i in range(scenario.n_wlans)]
    by_slot: dict[int, list[Event]] = {}
    for ev in events:
        by_slot.setdefault(ev[0], []).append(ev)
    bad = []
    for ev in events:
        start, wlan, node, ok, _dur = ev
        rivals = sum(
            1 for other in by_slot[start] if other[2] != node and closed[wlan] >> other[1] & 1
        )
        if ok == (rivals > 0):
            bad.append(ev)
    return bad
