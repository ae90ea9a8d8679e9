"""Structural property suite, regime studies, and mutation hooks.

Every proven statement about play against Hedge that the package relies
on is restated here as an executable check over concrete games: closed
forms against brute recomputation, walk shapes, cycle laws, DP row
structure, threshold splits.  run_suite samples games, runs the
applicable checks and returns one CheckResult per (check, game), sorted
deterministically.

The MUTANTS table deliberately breaks one primitive at a time (module
attribute patching); tests assert that each mutant is caught by the
checks listed in MUTANT_KILLS.  A suite that stays green under a mutant
would be vacuous, so the kill list is part of the contract.
"""

from __future__ import annotations

import hashlib
import json
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import dynamics as dyn
from . import game_core as gc
from . import periodic_planner as pp
from . import sttg_solver as sol
from .errors import HedgeplayError, HorizonTooShort, RegimeMismatch
from .game_core import Action, GameSpec, Regime, State


@dataclass
class CheckResult:
    check_id: str
    spec_digest: str
    passed: bool
    witness: Optional[dict] = None

    def to_json_dict(self) -> dict:
        return {"check_id": self.check_id, "spec_digest": self.spec_digest,
                "passed": self.passed, "witness": self.witness}


def spec_digest(spec: Optional[GameSpec]) -> str:
    if spec is None:
        return "global"
    return hashlib.sha256(spec.to_json().encode()).hexdigest()[:12]


# ---------------------------------------------------------------------
# sampling

def sample_specs(count: int, seed: int, regime: str = "NoDominant",
                 lo: int = -9, hi: int = 9,
                 exclude_symmetric: bool = False) -> list[GameSpec]:
    """Rejection-sample integer games of one regime, deterministic in seed.

    Horizons are sized so the periodic construction and two full body
    periods always fit.  exclude_symmetric drops d1 == -d2 games, whose
    optimum is non-unique and useless for string-equality assertions.
    """
    rng = np.random.default_rng(seed)
    out: list[GameSpec] = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 20000:
            raise RuntimeError("sampler failed to hit the requested regime")
        ints = [int(v) for v in rng.integers(lo, hi + 1, size=4)]
        eta = round(float(rng.uniform(0.05, 0.35)), 3)
        try:
            probe = gc.validate([ints[:2], ints[2:]], eta, 50)
        except HedgeplayError:
            continue
        if str(probe.regime) != regime:
            continue
        if exclude_symmetric and probe.d1 == -probe.d2:
            continue
        if regime == "NoDominant":
            period = dyn.t_star(probe)
            T = pp.min_horizon(probe) + 2 * period + 2 + int(rng.integers(0, period + 3))
        else:
            T = int(rng.integers(40, 90))
        out.append(gc.validate([ints[:2], ints[2:]], eta, T))
    return out


def _s_star_raw(spec: GameSpec) -> float:
    """Myopic indifference point; defined whenever ld1, ld2 straddle 0."""
    if spec.ld1 == -spec.ld2:
        return 0.0
    return -math.log(-spec.ld1 / spec.ld2) / spec.eta_scaled


# ---------------------------------------------------------------------
# individual checks; each returns CheckResult and never raises

def _result(check_id: str, spec, ok: bool, witness=None) -> CheckResult:
    return CheckResult(check_id, spec_digest(spec), bool(ok), witness)


def _guarded(check_id: str):
    def deco(fn):
        def wrapped(spec, rng, depth) -> CheckResult:
            try:
                return fn(spec, rng, depth)
            except Exception as exc:  # a crash is a failure with a witness
                return _result(check_id, spec if isinstance(spec, GameSpec) else None,
                               False, {"error": f"{type(exc).__name__}: {exc}"})
        wrapped.check_id = check_id
        wrapped.__name__ = fn.__name__
        return wrapped
    return deco


@_guarded("hedge-consistency")
def check_hedge_consistency(spec: GameSpec, rng, depth) -> CheckResult:
    """Recorded trajectories match the weight-ratio definition of Hedge."""
    n = min(spec.T, 60)
    acts = [Action.R if b else Action.L for b in rng.integers(0, 2, size=n)]
    traj = dyn.simulate(spec, dyn.scripted_policy(acts), n)
    rows = spec.matrix.scaled_rows()
    l1 = l2 = 0  # cumulative scaled losses of the two pure rows
    bad: list[dict] = []
    for t in range(1, n + 1):
        mn = min(l1, l2)
        w1 = math.exp(-spec.eta_scaled * (l1 - mn))
        w2 = math.exp(-spec.eta_scaled * (l2 - mn))
        p1 = w1 / (w1 + w2)
        st = traj.states[t - 1]
        if abs(p1 - traj.strategies[t - 1].p1) > 1e-12:
            bad.append({"t": t, "p1": p1, "recorded": traj.strategies[t - 1].p1})
        if st.value != l2 - l1:
            bad.append({"t": t, "state": st.value, "loss_gap": l2 - l1})
        gap = (traj.regret1[t - 1] - traj.regret2[t - 1]) - st.value / spec.q
        if abs(gap) > 1e-9:
            bad.append({"t": t, "regret_gap_error": gap})
        a = traj.actions[t - 1]
        col = 0 if a is Action.L else 1
        expect = (p1 * rows[0][col] + (1 - p1) * rows[1][col]) / spec.q
        if abs(expect - traj.payoffs[t - 1]) > 1e-9:
            bad.append({"t": t, "payoff": traj.payoffs[t - 1], "expected": expect})
        l1 += rows[0][col]
        l2 += rows[1][col]
    return _result("hedge-consistency", spec, not bad, {"bad": bad[:4]} if bad else None)


@_guarded("payoff-forms")
def check_payoff_forms(spec: GameSpec, rng, depth) -> CheckResult:
    """Loss monotonicity in the state and the two threshold splits."""
    th = gc.thresholds(spec)
    span = 3 * abs(spec.d2) + 3
    grid = np.linspace(-span, span, 61)
    rl = np.array([gc.payoff(float(s), Action.L, spec) for s in grid])
    rr = np.array([gc.payoff(float(s), Action.R, spec) for s in grid])
    bad: list[str] = []
    if not np.all(np.diff(rl) > 0):
        bad.append("r(.,L) not increasing")
    if not np.all(np.diff(rr) < 0):
        bad.append("r(.,R) not decreasing")
    for s in grid:
        if abs(s - th.s_star) > 1e-6:
            direct = Action.R if gc.payoff(float(s), Action.R, spec) > \
                gc.payoff(float(s), Action.L, spec) else Action.L
            if dyn.mbr(float(s), spec) is not direct:
                bad.append(f"mbr split broken at s={s}")
                break
    for s in grid:
        if abs(s - th.s_zero_star) > 1e-6:
            g = gc.lookahead_gap(spec, float(s))
            if (g > 0) != (s < th.s_zero_star):
                bad.append(f"lookahead split broken at s={s}")
                break
    return _result("payoff-forms", spec, not bad, {"bad": bad} if bad else None)


def _bisect(fn: Callable[[float], float], lo: float, hi: float,
            increasing: bool, iters: int = 200) -> float:
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        v = fn(mid)
        below = (v < 0) if increasing else (v > 0)
        if below:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@_guarded("threshold-structure")
def check_threshold_structure(spec: GameSpec, rng, depth) -> CheckResult:
    """Thresholds agree with bisection of their defining payoff gaps."""
    th = gc.thresholds(spec)
    bad: list[str] = []

    def h(s: float) -> float:
        return gc.payoff(s, Action.L, spec) - gc.payoff(s, Action.R, spec)

    b = 1.0
    while h(-b) >= 0 or h(b) <= 0:
        b *= 2
        if b > 2 ** 40:
            bad.append("no bracket for s*")
            break
    else:
        root = _bisect(h, -b, b, increasing=True)
        if abs(root - th.s_star) > 1e-6 * max(1.0, abs(th.s_star)):
            bad.append(f"s* bisection {root} vs formula {th.s_star}")

    half = (spec.d1 + spec.d2) / 2
    g = lambda s: gc.lookahead_gap(spec, s)
    if spec.d1 == -spec.d2:
        # the open interval collapses; the threshold is exactly 0
        if th.s_zero_star != 0.0:
            bad.append(f"s0*={th.s_zero_star} should be exactly 0 for d1=-d2")
        if abs(g(0.0)) > 1e-12:
            bad.append(f"lookahead gap at 0 is {g(0.0)}, expected 0")
    else:
        if not (g(half) > 0):
            bad.append("lookahead gap not positive at (d1+d2)/2")
        root0 = _bisect(g, half, max(1.0, -half), increasing=False)
        if abs(root0 - th.s_zero_star) > 1e-6:
            bad.append(f"s0* bisection {root0} vs formula {th.s_zero_star}")
        if not (half < th.s_zero_star < 0):
            bad.append(f"s0*={th.s_zero_star} outside ((d1+d2)/2, 0)")
    eta = spec.eta_scaled
    e1, e2 = math.expm1(eta * spec.d1), math.expm1(eta * spec.d2)
    f1 = spec.d2 * e1 - spec.d1 * e2
    f2 = spec.d2 * e1 * math.exp(eta * spec.d2) - spec.d1 * e2 * math.exp(eta * spec.d1)
    if not (f1 < 0):
        bad.append(f"f1={f1} not negative")
    if spec.d1 != -spec.d2 and not (f2 > 0):
        bad.append(f"f2={f2} not positive")
    return _result("threshold-structure", spec, not bad, {"bad": bad} if bad else None)


@_guarded("zero-path-shape")
def check_zero_path_shape(spec: GameSpec, rng, depth) -> CheckResult:
    """The threshold-0 walk: closed form vs simulation, range, period."""
    period = dyn.t_star(spec)
    n = min(spec.T, 3 * period + 2)
    closed = dyn.zero_path(spec, n)
    stepped = dyn.simulate(spec, dyn.zero_policy(), n)
    bad: list[str] = []
    if [s.value for s in closed.states] != [s.value for s in stepped.states]:
        bad.append("closed-form walk disagrees with stepped simulation")
    if closed.actions != stepped.actions:
        bad.append("closed-form actions disagree with stepped simulation")
    vals = [dyn.zero_state_at(spec, t) for t in range(1, 3 * period + 1)]
    rep = dyn.detect_period(vals)
    if (rep.preperiod, rep.period) != (0, period):
        bad.append(f"period {rep.preperiod},{rep.period} != 0,{period}")
    if not all(-spec.d1 <= v < -spec.d2 for v in vals):
        bad.append("walk leaves [-d1, |d2|)")
    if any(vals[k] < 0 and vals[k + 1] < 0 for k in range(len(vals) - 1)):
        bad.append("two consecutive negative walk states")
    word = dyn.zero_word(spec)
    m = math.lcm(abs(spec.d1), abs(spec.d2))
    if word.count("L") != m // abs(spec.d1) or word.count("R") != m // abs(spec.d2):
        bad.append("action counts per period off")
    for t in range(1, 2 * period + 1):
        i0, i0n = dyn.zero_index_at(spec, t), dyn.zero_index_at(spec, t + 1)
        if i0n - i0 != (1 if dyn.zero_state_at(spec, t) < 0 else 0):
            bad.append(f"index recursion broken at t={t}")
            break
        if spec.node_value(t, i0) != dyn.zero_state_at(spec, t):
            bad.append(f"walk node identity broken at t={t}")
            break
    return _result("zero-path-shape", spec, not bad, {"bad": bad} if bad else None)


@_guarded("myopic-cycle")
def check_myopic_cycle(spec: GameSpec, rng, depth) -> CheckResult:
    """Myopic play settles into the T*-cycle with Nash action frequencies."""
    th = gc.thresholds(spec)
    period = dyn.t_star(spec)
    # reaching the cycle band from s=0 climbs in |d2| steps when s* > 0
    # and descends in d1 steps when s* < 0
    bound = (math.ceil(max(th.s_star, 0.0) / -spec.d2)
             + math.ceil(max(-th.s_star, 0.0) / spec.d1) + 2)
    n = min(spec.T, bound + 3 * period + 4)
    traj = dyn.myopic_path(spec, n)
    rep = dyn.detect_period([s.value for s in traj.states])
    bad: list[str] = []
    if rep.period != period:
        bad.append(f"least period {rep.period} != T*={period}")
    if rep.preperiod + 1 > bound:
        bad.append(f"cycle entered at t={rep.preperiod + 1} > bound {bound}")
    t0 = rep.preperiod + 1
    if t0 + 2 * period - 1 <= n:
        cyc_actions = traj.actions[t0 - 1: t0 - 1 + period]
        nL = sum(1 for a in cyc_actions if a is Action.L)
        m = math.lcm(abs(spec.d1), abs(spec.d2))
        if (nL, period - nL) != (m // abs(spec.d1), m // abs(spec.d2)):
            bad.append(f"cycle action counts {nL},{period - nL}")
        freq_L = Fraction(m // abs(spec.d1), period)
        nash_L = Fraction(-spec.d2, spec.d1 - spec.d2)
        if freq_L != nash_L:
            bad.append(f"cycle frequency {freq_L} != stage equilibrium {nash_L}")
        avg = traj.cycle_average(t0, period)
        if not avg > float(spec.game_value):
            bad.append(f"cycle average {avg} not above game value {spec.game_value}")
    return _result("myopic-cycle", spec, not bad, {"bad": bad} if bad else None)


@_guarded("optimal-body-period")
def check_optimal_body_period(spec: GameSpec, rng, depth) -> CheckResult:
    """The optimal action string repeats with least period T* up to t_d."""
    if spec.d1 == -spec.d2:
        return _result("optimal-body-period", spec, True,
                       {"gated": "tied optima break string periodicity"})
    lm = pp.compute_landmarks(spec)
    period = dyn.t_star(spec)
    dp = sol.extract_path(sol.backward_induction(spec))
    body = dp.actions[1: lm.t_d - 1]  # rounds 2 .. t_d - 1
    bad: list[str] = []
    if len(body) < 2 * period:
        return _result("optimal-body-period", spec, True,
                       {"gated": f"body of {len(body)} rounds too short"})
    rep = dyn.detect_period([int(a) for a in body])
    if (rep.preperiod, rep.period) != (0, period):
        bad.append(f"body period {rep.preperiod},{rep.period} != 0,{period}")
    return _result("optimal-body-period", spec, not bad, {"bad": bad} if bad else None)


@_guarded("plan-matches-dp")
def check_plan_matches_dp(spec: GameSpec, rng, depth) -> CheckResult:
    """Assembled plan reproduces the DP string (value-only for d1=-d2)."""
    rep = pp.verify_against_dp(spec)
    if not rep.get("applicable"):
        return _result("plan-matches-dp", spec, True, {"gated": rep.get("reason")})
    tie_family = spec.d1 == -spec.d2
    ok = rep["value_diff"] <= 1e-9 * spec.T
    if not tie_family:
        ok = ok and rep["actions_equal"]
    wit = {"mode": "value-only" if tie_family else "exact",
           "value_diff": rep["value_diff"],
           "actions_equal": rep["actions_equal"],
           "first_divergence": rep["first_divergence"]}
    return _result("plan-matches-dp", spec, ok, wit)


@_guarded("one-step-recurrence")
def check_one_step_recurrence(spec: GameSpec, rng, depth) -> CheckResult:
    """Child actions force parent actions across the s0* split, every node."""
    if spec.d1 == -spec.d2:
        return _result("one-step-recurrence", spec, True,
                       {"gated": "exact ties at s0* = 0 flip on rounding noise"})
    s0 = gc.thresholds(spec).s_zero_star
    table = sol.backward_induction(spec)
    bad: list[dict] = []
    for t in range(1, spec.T):
        yt = table.y_row(t)
        yn = table.y_row(t + 1)
        v = sol.row_values(spec, t).astype(np.float64)
        force_r = (v < s0) & yn[:t] & ~yt
        force_l = (v >= s0) & ~yn[1:t + 1] & yt
        for i in np.flatnonzero(force_r)[:2]:
            bad.append({"t": t, "i": int(i) + 1, "clause": "R"})
        for i in np.flatnonzero(force_l)[:2]:
            bad.append({"t": t, "i": int(i) + 1, "clause": "L"})
        if len(bad) > 8:
            break
    return _result("one-step-recurrence", spec, not bad, {"bad": bad[:8]} if bad else None)


@_guarded("row-structure")
def check_row_structure(spec: GameSpec, rng, depth) -> CheckResult:
    """Which argmax entries are pinned by the walk index, row by row."""
    th = gc.thresholds(spec)
    if th.s_star <= 0:
        return _result("row-structure", spec, True, {"gated": "s* <= 0"})
    if spec.d1 == -spec.d2:
        return _result("row-structure", spec, True,
                       {"gated": "tied optima unpin rows and path"})
    try:
        lm = pp.compute_landmarks(spec)
    except HorizonTooShort as exc:
        return _result("row-structure", spec, True, {"gated": str(exc)})
    table = sol.backward_induction(spec)
    bad: list[str] = []

    def row_expect(t: int, r_upto: int, l_from: int, tag: str) -> None:
        y = table.y_row(t)
        if r_upto >= 1 and not np.all(y[:min(r_upto, t)]):
            bad.append(f"{tag}: row {t} not R through i={r_upto}")
        if l_from <= t and np.any(y[l_from - 1:]):
            bad.append(f"{tag}: row {t} not L from i={l_from}")

    if lm.ray == "R":
        for t in range(lm.t_cross, spec.T + 1):
            row_expect(t, dyn.zero_index_at(spec, t) - 2,
                       lm.j_star - spec.T + t + 1, "horizon-wedge")
    i0d = dyn.zero_index_at(spec, lm.t_d - 1)
    row_expect(lm.t_d - 1, i0d - 1, i0d, "pre-terminal-row")
    for t in range(2, lm.t_d):
        i0 = dyn.zero_index_at(spec, t)
        if dyn.zero_state_at(spec, t) >= 0:
            row_expect(t, i0 - 2, i0, "body-row")
            if dyn.zero_state_at(spec, t + 1) < 0:
                row_expect(t, i0 - 1, i0, "body-row-crossing")
        else:
            row_expect(t, i0 - 1, i0 + 1, "body-row")
        if len(bad) > 8:
            break
    dp = sol.extract_path(table)
    for t in range(1, lm.t_d + 1):
        v = dp.states[t - 1].value
        z = dyn.zero_state_at(spec, t)
        if z < 0:
            if v != z:
                bad.append(f"path not pinned to walk at t={t}")
                break
        elif v not in (z, z - (spec.d1 - spec.d2)):
            bad.append(f"path off the walk pair at t={t}")
            break
    return _result("row-structure", spec, not bad, {"bad": bad[:8]} if bad else None)


@_guarded("threshold-split")
def check_threshold_split(spec: GameSpec, rng, depth) -> CheckResult:
    """On-path actions before t_d sit on the correct side of s0*."""
    if spec.d1 == -spec.d2:
        return _result("threshold-split", spec, True,
                       {"gated": "s0* = 0 exactly; tied nodes make the side arbitrary"})
    try:
        plan = pp.build_periodic_plan(spec)
    except HorizonTooShort as exc:
        return _result("threshold-split", spec, True, {"gated": str(exc)})
    ok = pp.s_star_side_check(plan, spec)
    dp = sol.extract_path(sol.backward_induction(spec))
    s0 = gc.thresholds(spec).s_zero_star
    bad: list[str] = []
    if not ok:
        bad.append("plan actions cross s0*")
    # the action at t_d opens the tail and the last round has no
    # follow-up, so the two-step split covers t < t_d and t < T only
    for t in range(1, min(plan.t_d - 1, spec.T - 1) + 1):
        a, v = dp.actions[t - 1], dp.states[t - 1].value
        if a is Action.L and v < s0:
            bad.append(f"dp L below s0* at t={t}")
            break
        if a is Action.R and v >= s0:
            bad.append(f"dp R above s0* at t={t}")
            break
    return _result("threshold-split", spec, not bad, {"bad": bad} if bad else None)


@_guarded("cycle-payoff-above-value")
def check_cycle_payoff_above_value(spec: GameSpec, rng, depth) -> CheckResult:
    """Per-period averages beat the game value; r bounds at s0* hold."""
    v = float(spec.game_value)
    period = dyn.t_star(spec)
    bad: list[str] = []
    try:
        plan = pp.build_periodic_plan(spec)
        block_traj = dyn.simulate(spec, dyn.scripted_policy(plan.expand()),
                                  min(spec.T, 1 + period))
        body_avg = block_traj.cycle_average(2, period)
        if not body_avg > v:
            bad.append(f"optimal body average {body_avg} not above value {v}")
    except HorizonTooShort:
        pass
    th = gc.thresholds(spec)
    rL0 = gc.payoff(th.s_zero_star, Action.L, spec)
    rR0 = gc.payoff(th.s_zero_star, Action.R, spec)
    for s in np.linspace(th.s_zero_star, th.s_zero_star + 3 * abs(spec.d2), 13):
        if gc.payoff(float(s), Action.L, spec) < rL0 - 1e-12:
            bad.append("r(.,L) dips below its s0* level to the right")
            break
    for s in np.linspace(th.s_zero_star - 3 * abs(spec.d2), th.s_zero_star, 13)[:-1]:
        if not gc.payoff(float(s), Action.R, spec) > rR0:
            bad.append("r(.,R) not above its s0* level to the left")
            break
    return _result("cycle-payoff-above-value", spec, not bad, {"bad": bad} if bad else None)


@_guarded("scaling-invariance")
def check_scaling_invariance(spec: GameSpec, rng, depth) -> CheckResult:
    """Scaling A by k and eta by 1/k changes nothing but payoff units."""
    k = int(rng.choice([2, 3, 5]))
    entries = spec.user_matrix.entries()
    up = [[str(e * k) for e in row] for row in entries]
    down = [[str(e / k) for e in row] for row in entries]
    bad: list[str] = []
    for mat, eta, ratio, tag in ((up, spec.eta / k, k, "up"),
                                 (down, spec.eta * k, Fraction(1, k), "down")):
        other = gc.validate(mat, eta, spec.T)
        if other.game_value != spec.game_value * ratio:
            bad.append(f"{tag}: game value ratio off")
        scale = float(ratio)
        if spec.regime is Regime.NO_DOMINANT:
            n = min(spec.T, 50)
            a = dyn.myopic_path(spec, n)
            b = dyn.myopic_path(other, n)
            if a.actions != b.actions:
                bad.append(f"{tag}: myopic actions differ")
            if any(abs(pb - pa * scale) > 1e-9 * max(1.0, abs(pa * scale))
                   for pa, pb in zip(a.payoffs, b.payoffs)):
                bad.append(f"{tag}: payoffs not scaled by {ratio}")
        small = gc.validate(mat, eta, min(spec.T, 40))
        base = gc.validate([[str(e) for e in row] for row in entries],
                           spec.eta, min(spec.T, 40))
        ps, pb = sol.extract_path(sol.backward_induction(small)), \
            sol.extract_path(sol.backward_induction(base))
        if spec.d1 == -spec.d2:
            # tied nodes make the action string sensitive to rounding order;
            # the value is still unit-covariant
            if abs(ps.total - pb.total * scale) > 1e-7 * max(1.0, abs(pb.total)):
                bad.append(f"{tag}: optimal value not scaled by {ratio}")
        elif ps.actions != pb.actions:
            bad.append(f"{tag}: optimal actions differ")
    return _result("scaling-invariance", spec, not bad, {"bad": bad} if bad else None)


@_guarded("banded-recursion-period")
def check_banded_recursion_period(spec, rng, depth) -> CheckResult:
    """gamma_sequence stays in its band and has least period lcm(p,q)/q."""
    bad: list[str] = []
    for _ in range(6):
        pn, qn = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        pd, qd = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        p, q = Fraction(pn, pd), Fraction(qn, qd)
        lam = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
        g1 = lam - p * Fraction(int(rng.integers(1, 8)), 8)
        m = Fraction(math.lcm(p.numerator * q.denominator,
                              q.numerator * p.denominator),
                     p.denominator * q.denominator)
        want = m / q
        assert want.denominator == 1
        seq = dyn.gamma_sequence(p, q, lam, g1, 3 * int(want) + 2)
        if any(not (lam - p <= g < lam) for g in seq):
            bad.append(f"band violated for p={p}, q={q}")
            continue
        rep = dyn.detect_period(seq)
        if (rep.preperiod, rep.period) != (0, int(want)):
            bad.append(f"period {rep.preperiod},{rep.period} != 0,{want} "
                       f"for p={p}, q={q}")
    return _result("banded-recursion-period", None, not bad, {"bad": bad} if bad else None)


@_guarded("dominant-x-tail")
def check_dominant_x(spec: GameSpec, rng, depth) -> CheckResult:
    """X-dominant games: play collapses to constant R from t_m onward."""
    tm = dominant_x_tail(spec)
    dp = sol.extract_path(sol.backward_induction(spec))
    bad: list[str] = []
    if any(a is not Action.R for a in dp.actions[tm - 1:]):
        bad.append(f"non-R action at or after t_m={tm}")
    if tm >= 2 and dp.actions[tm - 2] is Action.R:
        bad.append(f"t_m={tm} not minimal")
    if spec.ld1 * spec.ld2 > 0 and tm != 1:
        bad.append("dominant-Y subcase should give t_m=1")
    if spec.ld1 * spec.ld2 < 0:
        s_star = _s_star_raw(spec)
        bound = 1 if s_star > 0 else math.ceil(1 - s_star / spec.d2)
        if tm > bound:
            bad.append(f"t_m={tm} above bound {bound}")
    return _result("dominant-x-tail", spec, not bad, {"bad": bad} if bad else None)


@_guarded("y-dominant-consistency")
def check_y_dominant(spec: GameSpec, rng, depth) -> CheckResult:
    """Y-dominant studies are internally consistent; DP beats constant play."""
    rep = y_dominant_study(spec)
    bad: list[str] = []
    if rep["value_dp"] < rep["value_constant"] - 1e-9:
        bad.append("DP value below the constant dominant line")
    if rep["constant_dominant_optimal"] != (rep["num_non_dominant"] == 0):
        bad.append("optimality flag disagrees with action counts")
    if rep["constant_dominant_optimal"] and rep["first_divergence_t"] is not None:
        bad.append("divergence reported for constant-optimal game")
    return _result("y-dominant-consistency", spec, not bad, {"bad": bad} if bad else None)


# ---------------------------------------------------------------------
# regime studies

def dominant_x_tail(spec: GameSpec) -> int:
    """First round from which the optimal play is R forever (X-dominant).

    With a dominant column for Y as well, no search is needed: the
    answer is round 1.  Otherwise the full table decides.
    """
    if spec.regime is not Regime.X_DOMINANT:
        raise RegimeMismatch(f"needs an XDominant game, got {spec.regime}")
    if spec.ld1 * spec.ld2 > 0:
        return 1
    dp = sol.extract_path(sol.backward_induction(spec))
    tm = 1
    for t, a in enumerate(dp.actions, start=1):
        if a is not Action.R:
            tm = t + 1
    return tm


def y_dominant_study(spec: GameSpec) -> dict:
    """Compare optimal play with constantly playing Y's dominant column.

    Returns a JSON-ready report with the played strings (caller's
    labels), Hedge's first-row weights along the optimal path, and both
    totals.  Constant dominant play is sometimes exactly optimal and
    sometimes strictly beaten; the report makes the difference visible.
    """
    if spec.regime is not Regime.Y_DOMINANT:
        raise RegimeMismatch(f"needs a YDominant game, got {spec.regime}")
    dp = sol.extract_path(sol.backward_induction(spec))
    const = dyn.simulate(spec, dyn.const_policy(Action.R), spec.T)
    n_l = sum(1 for a in dp.actions if a is not Action.R)
    first_div = next((t for t, a in enumerate(dp.actions, start=1)
                      if a is not Action.R), None)
    x1s = [gc.hedge_strategy(s, spec).p1 for s in dp.states[:-1]]
    return {
        "T": spec.T,
        "dominant_action": spec.action_label(Action.R),
        "constant_dominant_optimal": n_l == 0,
        "num_non_dominant": n_l,
        "first_divergence_t": first_div,
        "value_dp": dp.total,
        "value_constant": const.total_payoff(),
        "optimal_actions": "".join(spec.action_label(a) for a in dp.actions),
        "x1_optimal": x1s,
        "x1_constant": [st.p1 for st in const.strategies[:-1]],
        "states_optimal": [s.value for s in dp.states],
    }


# ---------------------------------------------------------------------
# the suite

CHECKS: dict[str, tuple[Callable, tuple[str, ...]]] = {
    "hedge-consistency": (check_hedge_consistency, ("NoDominant", "XDominant", "YDominant", "Degenerate")),
    "payoff-forms": (check_payoff_forms, ("NoDominant",)),
    "threshold-structure": (check_threshold_structure, ("NoDominant",)),
    "zero-path-shape": (check_zero_path_shape, ("NoDominant",)),
    "myopic-cycle": (check_myopic_cycle, ("NoDominant",)),
    "optimal-body-period": (check_optimal_body_period, ("NoDominant",)),
    "plan-matches-dp": (check_plan_matches_dp, ("NoDominant",)),
    "one-step-recurrence": (check_one_step_recurrence, ("NoDominant",)),
    "row-structure": (check_row_structure, ("NoDominant",)),
    "threshold-split": (check_threshold_split, ("NoDominant",)),
    "cycle-payoff-above-value": (check_cycle_payoff_above_value, ("NoDominant",)),
    "scaling-invariance": (check_scaling_invariance, ("NoDominant", "XDominant", "YDominant")),
    "banded-recursion-period": (check_banded_recursion_period, ("global",)),
    "dominant-x-tail": (check_dominant_x, ("XDominant",)),
    "y-dominant-consistency": (check_y_dominant, ("YDominant",)),
}


def default_specs(depth: str = "fast", seed: int = 20240817) -> list[GameSpec]:
    nd, xd, yd = (10, 3, 3) if depth == "fast" else (28, 8, 8)
    specs = sample_specs(nd, seed, "NoDominant")
    specs += sample_specs(xd, seed + 1, "XDominant")
    specs += sample_specs(yd, seed + 2, "YDominant")
    specs.append(gc.validate([[1, 0], [-1, 3]], "auto", 120))
    specs.append(gc.validate([[1, 0], [-2, 7]], "auto", 160))
    specs.append(gc.validate([[3, -1], [-1, 3]], 0.2, 80))  # d1 = -d2 family
    specs.append(gc.validate([[0, 10], [1, 2]], "auto", 100))
    specs.append(gc.validate([[0, 10], ["1.9", 2]], "auto", 100))
    specs.append(gc.validate([[0, 30], [19, 20]], "auto", 100))
    return specs


def run_suite(specs: Optional[Sequence[GameSpec]] = None, depth: str = "fast",
              seed: int = 20240817, mutant: Optional[str] = None) -> list[CheckResult]:
    """Run every applicable check on every spec; deterministic order.

    depth widens the sampled spec pool; seed fixes both sampling and
    each check's private randomness.  mutant, if given, patches one
    primitive for the whole run (see MUTANTS).
    """
    if depth not in ("fast", "full"):
        raise ValueError(f"depth must be 'fast' or 'full', got {depth!r}")
    if specs is None:
        specs = default_specs(depth, seed)
    tasks: list[tuple[str, Optional[GameSpec]]] = []
    for cid, (fn, regimes) in sorted(CHECKS.items()):
        if "global" in regimes:
            tasks.append((cid, None))
            continue
        for s in specs:
            if str(s.regime) in regimes:
                tasks.append((cid, s))

    def run_all() -> list[CheckResult]:
        out = []
        for k, (cid, s) in enumerate(tasks):
            rng = np.random.default_rng([seed, k])
            fn = CHECKS[cid][0]
            out.append(fn(s, rng, depth))
        return out

    if mutant is not None:
        with apply_mutant(mutant):
            results = run_all()
    else:
        results = run_all()
    results.sort(key=lambda r: (r.check_id, r.spec_digest))
    return results


def suite_summary(results: Iterable[CheckResult]) -> dict:
    per: dict[str, dict[str, int]] = {}
    total = passed = 0
    for r in results:
        total += 1
        passed += r.passed
        slot = per.setdefault(r.check_id, {"passed": 0, "failed": 0})
        slot["passed" if r.passed else "failed"] += 1
    return {"total": total, "passed": passed, "failed": total - passed,
            "checks": per}


def write_report(results: Sequence[CheckResult], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in results:
            fh.write(json.dumps(r.to_json_dict(), sort_keys=True) + "\n")


# ---------------------------------------------------------------------
# mutation hooks

def _mut_transition(orig):
    def skewed(state, y, spec):
        nxt = orig(state, y, spec)
        if y is Action.L:
            return State(nxt.value - 1, nxt.t, nxt.i)
        return nxt
    return skewed


def _mut_mbr(orig):
    def flipped(state, spec):
        a = orig(state, spec)
        return Action.L if a is Action.R else Action.R
    return flipped


def _mut_payoff(orig):
    def swapped(state, y, spec):
        return orig(state, Action.L if y is Action.R else Action.R, spec)
    return swapped


def _mut_thresholds(orig):
    def nudged(spec):
        th = orig(spec)
        return gc.Thresholds(th.s_star, th.s_zero_star + abs(spec.d2) + 1.0)
    return nudged


def _mut_period(orig):
    def doubled(seq):
        rep = orig(seq)
        return dyn.PeriodReport(rep.preperiod, rep.period * 2,
                                rep.cycle + rep.cycle, rep.certified)
    return doubled


def _mut_gamma(orig):
    def drifted(p, q, lam, gamma1, n):
        seq = orig(p, q, lam, gamma1, n)
        return [g + (p if k % 3 == 2 else 0) for k, g in enumerate(seq)]
    return drifted


MUTANTS: dict[str, tuple[object, str, Callable]] = {
    "transition-skew": (gc, "transition", _mut_transition),
    "mbr-flip": (dyn, "mbr", _mut_mbr),
    "payoff-swap": (gc, "payoff", _mut_payoff),
    "threshold-nudge": (gc, "thresholds", _mut_thresholds),
    "period-double": (dyn, "detect_period", _mut_period),
    "gamma-drift": (dyn, "gamma_sequence", _mut_gamma),
}

MUTANT_KILLS: dict[str, list[str]] = {
    "transition-skew": ["zero-path-shape", "hedge-consistency"],
    "mbr-flip": ["myopic-cycle"],
    "payoff-swap": ["hedge-consistency", "payoff-forms"],
    "threshold-nudge": ["threshold-structure", "one-step-recurrence"],
    "period-double": ["myopic-cycle", "zero-path-shape", "banded-recursion-period"],
    "gamma-drift": ["banded-recursion-period"],
}


@contextmanager
def apply_mutant(name: str):
    """Temporarily replace one primitive with its broken variant."""
    if name not in MUTANTS:
        raise KeyError(f"unknown mutant {name!r}; known: {sorted(MUTANTS)}")
    mod, attr, factory = MUTANTS[name]
    orig = getattr(mod, attr)
    setattr(mod, attr, factory(orig))
    try:
        yield
    finally:
        setattr(mod, attr, orig)
