"""Acceptance gate: one test per criterion, each ending in a PASS line.

Budgets are wall-clock seconds measured around the core computation only;
tolerances are stated inline next to each assertion.
"""

import math
import time
from fractions import Fraction


import hedgeplay as hp
from hedgeplay import analysis as an
from hedgeplay import dynamics as dyn
from hedgeplay import periodic_planner as pp
from hedgeplay import sttg_solver as sol

EX1 = [["1", "0"], ["-1", "3"]]
EX3 = [["1", "0"], ["-2", "7"]]


def _rotations(xs):
    return [xs[k:] + xs[:k] for k in range(len(xs))]


def test_criterion_1_myopic_running_example():
    t0 = time.perf_counter()
    spec = hp.validate(EX1, "auto", 700)
    traj = dyn.myopic_path(spec)
    elapsed = time.perf_counter() - t0

    vals = traj.values()[:700]
    assert vals[8:13] == [14, 17, 15, 18, 16]
    for k in range(8, 695):
        assert vals[k] == vals[k + 5]

    window = traj.payoffs[8:13]
    published = [0.6646, 0.6119, 0.6702, 0.6390, 0.6250]
    assert any(all(abs(a - b) <= 5e-4 for a, b in zip(rot, published))
               for rot in _rotations(window)), window

    avg = traj.cycle_average(9, 5)
    assert abs(avg - 0.6421) <= 5e-4
    assert spec.game_value == Fraction(3, 5)
    th = hp.thresholds(spec)
    assert abs(th.s_star - 15.58) <= 0.01
    assert elapsed < 1.0
    print(f"criterion 1 PASS: cycle 14,17,15,18,16 from t=9, "
          f"avg {avg:.4f}, s*={th.s_star:.3f}, {elapsed:.3f}s")


def test_criterion_2_optimal_running_example():
    t0 = time.perf_counter()
    spec = hp.validate(EX1, "auto", 700)
    dp = sol.extract_path(sol.backward_induction(spec))
    lm = pp.compute_landmarks(spec)
    elapsed = time.perf_counter() - t0

    period = hp.t_star(spec)
    traj = dyn.simulate(spec, dyn.scripted_policy(dp.actions))
    per_period = traj.cycle_average(2, period)
    whole = dp.total / spec.T
    hit = [x for x in (per_period, whole) if abs(x - 0.6667) <= 2e-3]
    assert hit, (per_period, whole)

    zero_vals = hp.zero_path(spec, lm.t_d).values()[:lm.t_d]
    dp_vals = [s.value for s in dp.states[:lm.t_d]]
    assert dp_vals == zero_vals
    assert elapsed < 5.0
    print(f"criterion 2 PASS: per-period avg {per_period:.5f} "
          f"(whole-horizon {whole:.5f}), path = zero path through "
          f"t_d={lm.t_d}, {elapsed:.3f}s")


def test_criterion_3_third_example():
    t0 = time.perf_counter()
    spec = hp.validate(EX3, "auto", 1000)
    th = hp.thresholds(spec)
    period = hp.t_star(spec)
    dp = sol.extract_path(sol.backward_induction(spec))
    traj = dyn.simulate(spec, dyn.scripted_policy(dp.actions))
    avg = traj.cycle_average(2, period)
    elapsed = time.perf_counter() - t0

    assert abs(th.s_star - 29.51) <= 0.01
    assert abs(th.s_zero_star - (-1.33)) <= 0.01
    assert period == 10
    assert abs(avg - 0.8941) <= 1e-3
    assert avg > 0.7
    assert elapsed < 10.0
    print(f"criterion 3 PASS: s*={th.s_star:.4f}, s0*={th.s_zero_star:.4f}, "
          f"T*=10, avg {avg:.5f} > 0.7, {elapsed:.3f}s")


def test_criterion_4_landmarks_without_dp():
    t0 = time.perf_counter()
    spec = hp.validate(EX1, "auto", 10000)
    th = hp.thresholds(spec)
    lm = pp.compute_landmarks(spec)
    elapsed = time.perf_counter() - t0

    assert abs(th.s_star - 58.87) <= 0.01
    z = hp.zero_path(spec, 10)
    assert z.values()[:5] == [0, -2, 1, -1, 2]
    assert hp.t_star(spec) == 5
    assert lm.j_star_state == 57
    assert lm.t_cross == 9981
    assert lm.t_d == 9979
    assert elapsed < 1.0
    print(f"criterion 4 PASS: s*={th.s_star:.4f}, s_j*=57, t_cross=9981, "
          f"t_d=9979 in {elapsed * 1e3:.1f}ms (no DP)")


def test_criterion_5_dp_equals_brute():
    t0 = time.perf_counter()
    specs = an.sample_specs(50, seed=20240817, regime="NoDominant",
                            exclude_symmetric=True)
    checked = 0
    for base in specs:
        entries = [[str(e) for e in row] for row in base.user_matrix.entries()]
        for T in (8, 12, 16, 18):
            spec = hp.validate(entries, base.eta, T)
            dp = sol.extract_path(sol.backward_induction(spec))
            bf = sol.brute_force(spec)
            assert abs(dp.total - bf.total) <= 1e-9, (entries, T)
            assert dp.actions == bf.actions, (entries, T)
            checked += 1
    elapsed = time.perf_counter() - t0
    assert checked == 200
    assert elapsed < 120.0
    print(f"criterion 5 PASS: DP == brute on {checked} instances "
          f"(50 matrices x 4 horizons), {elapsed:.1f}s")


def test_criterion_6_periodic_planner_certification():
    t0 = time.perf_counter()
    signs = set()
    done = 0
    seed = 0
    while done < 30:
        seed += 1
        base = an.sample_specs(1, seed=seed, regime="NoDominant",
                               exclude_symmetric=True)[0]
        T = 12 * hp.t_star(base) + 37
        entries = [[str(e) for e in row] for row in base.user_matrix.entries()]
        spec = hp.validate(entries, base.eta, T)
        if T < pp.min_horizon(spec):
            continue
        rep = pp.verify_against_dp(spec)
        assert rep["applicable"], rep
        assert rep["actions_equal"], (entries, T, rep["first_divergence"])
        assert rep["value_diff"] <= 1e-9 * T
        signs.add(hp.thresholds(spec).s_star > 0)
        done += 1
    elapsed = time.perf_counter() - t0
    assert signs == {True, False}, "both s* signs must be exercised"
    assert elapsed < 120.0
    print(f"criterion 6 PASS: plan == DP on {done} seeded games "
          f"(both s* signs), {elapsed:.1f}s")


def test_criterion_7_property_suite_and_mutants():
    t0 = time.perf_counter()
    results = an.run_suite(depth="fast")
    failed = [(r.check_id, r.spec_digest) for r in results if not r.passed]
    assert not failed, failed

    survivors = []
    for mutant, targets in sorted(an.MUTANT_KILLS.items()):
        hit = {r.check_id for r in an.run_suite(depth="fast", mutant=mutant)
               if not r.passed}
        for check_id in targets:
            if check_id not in hit:
                survivors.append((mutant, check_id))
    assert not survivors, survivors
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    print(f"criterion 7 PASS: {len(results)} checks green; "
          f"{len(an.MUTANT_KILLS)} mutants each killed by their registered "
          f"checks, {elapsed:.1f}s")


def test_criterion_8_dominant_regimes():
    t0 = time.perf_counter()
    # learner-dominated games: optimal play is constant R from t_m on
    cases = [
        ([["5", "3"], ["2", "1"]], 0.1),    # both little-deltas positive
        ([["4", "5"], ["1", "-1"]], 0.2),   # mixed deltas, s* > 0
        ([["5", "2"], ["0", "1"]], 0.25),   # mixed deltas, s* <= 0
    ]
    for entries, eta in cases:
        spec = hp.validate(entries, eta, 60)
        assert str(spec.regime) == "XDominant"
        if spec.ld1 * spec.ld2 > 0:
            t_m = 1
        else:
            s_star = -math.log(-spec.ld1 / spec.ld2) / spec.eta_scaled
            t_m = 1 if s_star > 0 else math.ceil(1 - s_star / spec.d2)
        dp = sol.extract_path(sol.backward_induction(spec))
        tail = dp.actions[t_m - 1:]
        assert all(a is hp.Action.R for a in tail), (entries, t_m)

    # opponent-dominated games: constant play is sometimes, not always, best
    flags = []
    for entries in ([["0", "10"], ["1", "2"]],
                    [["0", "10"], ["1.9", "2"]],
                    [["0", "30"], ["19", "20"]]):
        spec = hp.validate(entries, "auto", 100)
        assert str(spec.regime) == "YDominant"
        study = an.y_dominant_study(spec)
        flags.append(study["constant_dominant_optimal"])
    assert flags == [True, False, False], flags
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    print(f"criterion 8 PASS: constant-R tails verified at T=60; "
          f"constant-dominant optimal only for the first of the three "
          f"opponent-dominated games, {elapsed:.1f}s")
