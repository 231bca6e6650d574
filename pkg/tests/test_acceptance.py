"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria 6 and 7 are implemented exactly at their stated tolerances and scale.
They are expected to FAIL on the deeply starved WLANs (middle of the line
layouts at small windows): there the simulated mean itself carries a 18-32%
standard error at the stated scale, and long-run control experiments show a
genuine stationary-model bias of +/-15-65% on those WLANs (pent-up counters
and short-term capture violate the stationary-backoff assumption behind the
discount). The failures are kept red deliberately instead of loosening the
stated tolerances. All other criteria pass. Every simulation here uses fixed
seeds, so the suite is deterministic.
"""

from __future__ import annotations

import math
import time

import numpy as np

import wlansat as w
from wlansat import bundled_scenario, with_cw_min, with_n_nodes
from wlansat.sim.audit import mutual_exclusion_violations

from test_bianchi import bisect_tau

JOBS = 10
SEED = 20260811
CW_GRID = [4 << k for k in range(12)]  # 4 .. 8192


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"{criterion}: {detail}"


def scenario_grid():
    for name in ("i", "ii", "iii"):
        for n in (1, 16):
            for cw in CW_GRID:
                yield name, n, cw, with_cw_min(with_n_nodes(bundled_scenario(name), n), cw)


def test_criterion_1_ctmc_oracle_equivalence():
    """Product form equals the dense generator solve to 1e-9, in under 1 s."""
    start = time.perf_counter()
    worst = 0.0
    mu = 1.0 / 6.63e-3
    for name in ("i", "ii", "iii"):
        space = w.enumerate_states(bundled_scenario(name))
        n = space.scenario.n_wlans
        for theta in (0.1, 1.0, 47.5):
            closed = w.stationary_product_form(space, [theta] * n)
            solved = w.stationary_generator_solve(space, [theta * mu] * n, mu)
            worst = max(worst, float(np.max(np.abs(closed.pi - solved.pi))))
    elapsed = time.perf_counter() - start
    report(
        "1 (oracle equivalence)",
        worst < 1e-9 and elapsed < 1.0,
        f"max componentwise diff {worst:.2e}, runtime {elapsed:.3f}s",
    )


def test_criterion_2_state_space_counts():
    """Exact state families for the three reference layouts.

    The criterion text says "6 states" for the line layout but its own
    enumeration (empty, 3 singletons, {A,C} - the 1+3theta+theta^2 polynomial)
    lists 5, which is the count of independent sets of a 3-path; the exact
    family is asserted instead of the inconsistent total.
    """
    s1 = w.enumerate_states(bundled_scenario("i"))
    s2 = w.enumerate_states(bundled_scenario("ii"))
    s3 = w.enumerate_states(bundled_scenario("iii"))
    ok = (
        len(s1) == 4
        and len(w.dominant_states(s1)) == 3
        and list(s2.states) == [0, 0b001, 0b010, 0b100, 0b101]
        and [w.format_state(s) for s in w.dominant_states(s2)] == ["{1}", "{0,2}"]
        and len(s3) == 14
        and s3.size_histogram() == [1, 5, 6, 2]
        and len(w.dominant_states(s3)) == 3
    )
    report(
        "2 (state-space counts)",
        ok,
        f"I: {len(s1)}/{len(w.dominant_states(s1))} dominant; "
        f"II: {len(s2)} states {[w.format_state(s) for s in s2.states]}, "
        f"dominant {[w.format_state(s) for s in w.dominant_states(s2)]}; "
        f"III: {len(s3)} states, histogram {s3.size_histogram()}, "
        f"{len(w.dominant_states(s3))} dominant",
    )


def test_criterion_3_fixed_point_solver():
    """Residuals <= 1e-10, bisection-oracle agreement 1e-9, exact n=1, under 1 s."""
    start = time.perf_counter()
    worst_residual = 0.0
    worst_oracle = 0.0
    exact_ok = True
    for cw in (4, 16, 32, 256, 8192):
        for m in (0, 5):
            for n in (1, 2, 4, 8, 16, 32, 48):
                point = w.solve_fixed_point(n, cw, m)
                worst_residual = max(
                    worst_residual,
                    abs(point.tau - 1.0 / (point.e_b + 1.0)),
                    abs(point.p - (1.0 - (1.0 - point.tau) ** (n - 1))),
                )
                worst_oracle = max(worst_oracle, abs(point.tau - bisect_tau(n, cw, m)))
                if n == 1 and not (point.p == 0.0 and point.tau == 2.0 / (cw + 1.0)):
                    exact_ok = False
    elapsed = time.perf_counter() - start
    report(
        "3 (fixed-point solver)",
        worst_residual <= 1e-10 and worst_oracle <= 1e-9 and exact_ok and elapsed < 1.0,
        f"max residual {worst_residual:.2e}, max oracle diff {worst_oracle:.2e}, "
        f"n=1 exact: {exact_ok}, runtime {elapsed:.3f}s",
    )


def test_criterion_4_gamma_identity():
    """Isolated single-node WLAN: the discount vanishes to rounding noise."""
    worst = 0.0
    for cw in (4, 16, 32, 256, 8192):
        scenario = with_cw_min(with_n_nodes(bundled_scenario("i"), 1), cw)
        isolated = w.Scenario(
            wlans=(w.Wlan(0, 1),), graph=w.ConflictGraph(1, []), params=scenario.params
        )
        space = w.enumerate_states(isolated)
        record = w.gamma_factor(isolated.wlans[0], 0, isolated, space)
        worst = max(worst, abs(record.gamma_raw))
    report("4 (gamma identity)", worst < 1e-9, f"max |gamma_raw| {worst:.2e}")


def test_criterion_5_gamma_below_collision_probability():
    """gamma_raw <= p + 1e-9 for every record across the full parameter grid."""
    worst = -math.inf
    count = 0
    for _name, _n, _cw, scenario in scenario_grid():
        for record in w.analyze(scenario).records:
            worst = max(worst, record.gamma_raw - record.p)
            count += 1
    report(
        "5 (gamma <= p)",
        worst <= 1e-9,
        f"max(gamma_raw - p) {worst:.2e} over {count} records",
    )


def test_criterion_6_model_vs_simulation():
    """Analytical per-WLAN throughput vs simulated mean at 10 reps x 60 s.

    EXPECTED PARTIAL FAIL: the starved middle WLANs (<=1% of channel capacity)
    carry 18-32% simulation-side standard error at this scale and a genuine
    stationary-model bias; the dominant WLANs agree within a few percent
    everywhere (see the per-cell breakdown this test prints).
    """
    start = time.perf_counter()
    cells = [("i", 1, 32, 0.10), ("i", 16, 32, 0.10)]
    cells += [("ii", n, cw, 0.10) for n in (1, 16) for cw in (16, 32, 256, 8192)]
    cells += [("iii", 16, 16, 0.10), ("iii", 16, 512, 0.15)]

    lines = []
    all_ok = True
    for name, n, cw, tol in cells:
        scenario = with_cw_min(with_n_nodes(bundled_scenario(name), n), cw)
        analytical = w.analyze(scenario)
        simulated = w.simulate(
            w.SimConfig(scenario, duration=60, warmup=1, seed=SEED, replications=10),
            jobs=JOBS,
        )
        rel = {
            i: abs(analytical.per_wlan[i] - simulated.throughput[i]) / simulated.throughput[i]
            for i in analytical.per_wlan
        }
        worst_wlan = max(rel, key=rel.get)
        ok = rel[worst_wlan] <= tol
        all_ok = all_ok and ok
        lines.append(
            f"{'ok ' if ok else 'BAD'} {name:>3} N={n:<2} cw={cw:<4} "
            f"worst wlan {worst_wlan}: {rel[worst_wlan]:6.2%} (tol {tol:.0%})"
        )
    elapsed = time.perf_counter() - start
    detail = f"runtime {elapsed:.1f}s (< 600s required)\n  " + "\n  ".join(lines)
    report("6 (model vs simulation)", all_ok and elapsed < 600.0, detail)


def test_criterion_7_ctmc_only_inadequacy():
    """Line layout, N=16, cw_min=4: collision-blind model overshoots by > 20%
    on the outer WLANs while the corrected model must stay within 10%.

    EXPECTED PARTIAL FAIL: the corrected value sits ~14% from simulation
    because the slotted process rewards back-to-back winners at cw_min=4
    (short-term capture), which the stationary fixed point cannot represent;
    the > 20% overshoot clause itself holds with a wide margin.
    """
    scenario = with_cw_min(with_n_nodes(bundled_scenario("ii"), 16), 4)
    blind = w.analyze(scenario, collisions=False)
    corrected = w.analyze(scenario)
    simulated = w.simulate(
        w.SimConfig(scenario, duration=60, warmup=1, seed=SEED, replications=10), jobs=JOBS
    )
    overshoot = min(
        (blind.per_wlan[i] - simulated.throughput[i]) / simulated.throughput[i] for i in (0, 2)
    )
    corrected_rel = max(
        abs(corrected.per_wlan[i] - simulated.throughput[i]) / simulated.throughput[i]
        for i in (0, 2)
    )
    report(
        "7 (collision-blind inadequacy)",
        overshoot > 0.20 and corrected_rel <= 0.10,
        f"blind overshoot {overshoot:+.1%} (> 20% required), "
        f"corrected within {corrected_rel:.2%} (<= 10% required)",
    )


def test_criterion_8_dominant_states_mode():
    """Reduced mode stays within 5% of the full sum on the reference layouts."""
    worst = 0.0
    for name in ("i", "ii", "iii"):
        for n in (1, 16):
            scenario = with_n_nodes(bundled_scenario(name), n)
            full = w.analyze(scenario)
            reduced = w.analyze(scenario, "dominant-only")
            for i in full.per_wlan:
                worst = max(
                    worst, abs(reduced.per_wlan[i] - full.per_wlan[i]) / full.per_wlan[i]
                )
    report("8 (dominant-only mode)", worst <= 0.05, f"worst per-WLAN deviation {worst:.3%}")


def test_criterion_9_simulator_sanity():
    """Isolated-node renewal check, mutual-exclusion audit, bit-exact replay."""
    isolated = w.Scenario(
        wlans=(w.Wlan(0, 1),),
        graph=w.ConflictGraph(1, []),
        params=bundled_scenario("i").params,
    )
    p = isolated.params
    expected = p.l_bits / (15.5 * p.t_e + p.e_t)
    res = w.simulate(w.SimConfig(isolated, duration=60, warmup=1, seed=SEED, replications=1))
    single_rel = abs(res.throughput[0] - expected) / expected

    scenario3 = bundled_scenario("iii")
    run1 = w.simulate(
        w.SimConfig(scenario3, duration=60, warmup=1, seed=SEED, replications=1),
        record_events=True,
    )
    run2 = w.simulate(
        w.SimConfig(scenario3, duration=60, warmup=1, seed=SEED, replications=1),
        record_events=True,
    )
    violations = mutual_exclusion_violations(run1.events[0], scenario3)
    identical = run1.events == run2.events and run1.rep_throughput == run2.rep_throughput

    report(
        "9 (simulator sanity)",
        single_rel < 0.01 and not violations and identical,
        f"isolated-node rel err {single_rel:.3%} (< 1%), "
        f"{len(violations)} mutual-exclusion violations over {len(run1.events[0])} events, "
        f"bit-exact replay: {identical}",
    )
