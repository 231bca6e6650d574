"""State space and stationary distribution of the WLAN-activity Markov chain.

A feasible system state is a set of WLANs transmitting simultaneously, i.e. an
independent set of the conflict graph. States are plain ``int`` bitmasks (bit i
set = WLAN i active). The chain moves up by one WLAN at rate ``lambda_i`` and
down at rate ``mu``; it is reversible, so the stationary distribution has the
product form ``pi_s ∝ prod_{i in s} theta_i``.

:func:`stationary_generator_solve` computes the same distribution by direct
linear algebra on the explicit generator matrix. It exists purely as an
independent cross-check of the product form and is limited to small spaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError, NumericalError, StateSpaceTooLargeError
from .scenario import MAX_WLANS, Scenario

#: Largest state count accepted by the dense generator solve.
MAX_DENSE_STATES = 4096


def state_members(mask: int) -> tuple[int, ...]:
    """WLAN ids present in a state bitmask, ascending."""
    members = []
    i = 0
    while mask:
        if mask & 1:
            members.append(i)
        mask >>= 1
        i += 1
    return tuple(members)


def format_state(mask: int) -> str:
    """Render a state as ``{}`` or ``{0,2}`` (ids ascending)."""
    return "{" + ",".join(str(i) for i in state_members(mask)) + "}"


@dataclass(frozen=True)
class FeasibleStateSpace:
    """All independent sets of a scenario's conflict graph, in a fixed order.

    States are ordered by (size, numeric mask value); the empty state is always
    index 0. ``index`` maps a mask back to its ordinal.
    """

    scenario: Scenario
    states: tuple[int, ...]
    index: dict[int, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.states)

    def __contains__(self, mask: int) -> bool:
        return mask in self.index

    def size_histogram(self) -> list[int]:
        """Number of states of each cardinality, from 0 up to the largest."""
        counts: list[int] = []
        for s in self.states:
            k = s.bit_count()
            while len(counts) <= k:
                counts.append(0)
            counts[k] += 1
        return counts


@dataclass(frozen=True)
class StationaryDistribution:
    """Long-run occupancy probability of each feasible state."""

    space: FeasibleStateSpace
    pi: np.ndarray = field(repr=False)

    def prob(self, mask: int) -> float:
        return float(self.pi[self.space.index[mask]])


def enumerate_states(scenario: Scenario) -> FeasibleStateSpace:
    """Enumerate every feasible state (independent set), including the empty one.

    States are grown breadth-first by size: each size-k state is extended with
    every non-adjacent WLAN of higher id, which visits each independent set
    exactly once and never touches an infeasible subset. The result is
    downward closed and deterministically ordered by (size, mask value).
    """
    n = scenario.n_wlans
    if n > MAX_WLANS:
        raise StateSpaceTooLargeError(f"{n} WLANs exceed the cap of {MAX_WLANS}")
    adj = [scenario.graph.neighbor_mask(i) for i in range(n)]
    states: list[int] = [0]
    level = [0]
    while level:
        nxt = []
        for s in level:
            high = s.bit_length()  # only extend with ids above the current max
            for j in range(high, n):
                if not adj[j] & s:
                    nxt.append(s | 1 << j)
        nxt.sort()
        states.extend(nxt)
        level = nxt
    return FeasibleStateSpace(
        scenario=scenario,
        states=tuple(states),
        index={s: k for k, s in enumerate(states)},
    )


def dominant_states(space: FeasibleStateSpace) -> tuple[int, ...]:
    """States to which no WLAN can be added: the maximal independent sets.

    These carry most of the occupancy mass for typical parameters and are the
    basis of the reduced computation mode in :func:`wlansat.throughput.analyze`.
    """
    n = space.scenario.n_wlans
    adj = [space.scenario.graph.neighbor_mask(i) for i in range(n)]
    out = []
    for s in space.states:
        extendable = any(not (s >> j & 1) and not (adj[j] & s) for j in range(n))
        if not extendable:
            out.append(s)
    return tuple(out)


def state_weight(mask: int, thetas: Sequence[float]) -> float:
    """Unnormalized product-form weight ``prod_{i in s} theta_i`` (1 for the empty state)."""
    w = 1.0
    for i in state_members(mask):
        w *= thetas[i]
    return w


def stationary_product_form(
    space: FeasibleStateSpace, thetas: Sequence[float]
) -> StationaryDistribution:
    """Closed-form stationary distribution ``pi_s = w_s / sum_z w_z``.

    ``thetas`` must contain one positive, finite ratio per WLAN id. The
    normalizing sum is accumulated with exact (``math.fsum``) summation, so the
    distribution sums to 1 to within a few ulps even for large spaces.
    """
    n = space.scenario.n_wlans
    if len(thetas) != n:
        raise InvalidParameterError(f"thetas must have length {n}, got {len(thetas)}")
    for i, th in enumerate(thetas):
        if not math.isfinite(th) or th <= 0:
            raise InvalidParameterError(f"thetas[{i}] must be finite and > 0, got {th}")
    weights = [state_weight(s, thetas) for s in space.states]
    if not all(math.isfinite(w) for w in weights):
        raise NumericalError("product-form weight overflowed double precision")
    z = math.fsum(sorted(weights, reverse=True))
    if not math.isfinite(z):
        raise NumericalError("product-form normalizing constant overflowed")
    pi = np.asarray(weights, dtype=float) / z
    return StationaryDistribution(space=space, pi=pi)


def stationary_generator_solve(
    space: FeasibleStateSpace, lambdas: Sequence[float], mu: float
) -> StationaryDistribution:
    """Stationary distribution via a dense linear solve of ``pi Q = 0``.

    Builds the explicit generator (up-transitions at ``lambda_i``, down at
    ``mu``), normalizes all rates by ``mu`` for conditioning (the null space is
    scale-invariant), and replaces one balance equation with the normalization
    row. Independent oracle for :func:`stationary_product_form`; restricted to
    ``MAX_DENSE_STATES`` states.
    """
    n_states = len(space.states)
    if n_states > MAX_DENSE_STATES:
        raise StateSpaceTooLargeError(
            f"{n_states} states exceed the dense-solve cap of {MAX_DENSE_STATES}"
        )
    n = space.scenario.n_wlans
    if len(lambdas) != n:
        raise InvalidParameterError(f"lambdas must have length {n}, got {len(lambdas)}")
    if not (math.isfinite(mu) and mu > 0):
        raise InvalidParameterError(f"mu must be finite and > 0, got {mu}")

    q = np.zeros((n_states, n_states))
    for row, s in enumerate(space.states):
        for i in range(n):
            if s >> i & 1:
                q[row, space.index[s & ~(1 << i)]] += 1.0  # departure, rate mu/mu
            else:
                up = s | 1 << i
                col = space.index.get(up)
                if col is not None:
                    q[row, col] += lambdas[i] / mu
    np.fill_diagonal(q, -q.sum(axis=1))

    a = q.T.copy()
    a[-1, :] = 1.0  # replace one balance equation with sum(pi) = 1
    b = np.zeros(n_states)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"generator solve failed (construction bug?): {exc}") from exc
    return StationaryDistribution(space=space, pi=pi)


def occupancy_mass(dist: StationaryDistribution, masks: Iterable[int]) -> float:
    """Total stationary probability carried by the given states.

    Clamped at 1: summing every state can land an ulp above 1.
    """
    return min(1.0, math.fsum(dist.prob(m) for m in set(masks)))
