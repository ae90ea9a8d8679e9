"""Closed-form construction of the optimal opponent play, no full DP.

For mixed-regime games the Bellman-optimal action string against Hedge
has a rigid shape: one forced L, a body that repeats a fixed T*-round
block while the state hugs the threshold-0 walk, and a short terminal
segment where the endgame takes over.  The construction here finds the
two landmark times that separate those phases by intersecting the
threshold-0 walk with a ray of lattice nodes anchored at the horizon
row, then fills the body with a corridor longest path and the terminal
segment with a small cone-shaped DP.  Total work is O(T) plus
O((T - t_d)^2), versus O(T^2) for the full table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import dynamics as dyn
from . import game_core as gc
from . import sttg_solver as sol
from .errors import HorizonTooShort, RegimeMismatch
from .game_core import Action, GameSpec, Regime, State


@dataclass(frozen=True)
class Landmarks:
    """Horizon-row anchor and the two phase boundaries.

    j_star: largest horizon-row index whose value is <= s*.
    t_cross: round where the backward ray from the anchor meets the
        threshold-0 walk.
    t_d: last negative-to-nonnegative crossing of the walk at or before
        t_cross; the terminal segment starts here.
    ray: "R" when the walk's horizon node sits at or below s* (the ray
        follows R edges from j_star), else "L" (constant index j_star+1).
    """

    j_star: int
    t_cross: int
    t_d: int
    j_star_state: int
    ray: str


@dataclass(frozen=True)
class PeriodicPlan:
    spec: GameSpec
    t_d: int
    t_cross: int
    j_star_state: int
    block: tuple[Action, ...]
    repetitions: int
    tail: tuple[Action, ...]

    @property
    def leftover(self) -> int:
        return (self.t_d - 2) % len(self.block)

    def expand(self) -> list[Action]:
        body = list(self.block) * self.repetitions + list(self.block)[: self.leftover]
        return [Action.L] + body + list(self.tail)

    def actions_str(self) -> str:
        return "".join(str(a) for a in self.expand())

    def total(self) -> float:
        s = self.spec.root()
        tot = 0.0
        for a in self.expand():
            tot += gc.payoff(s, a, self.spec)
            s = gc.transition(s, a, self.spec)
        return tot

    def to_json_dict(self) -> dict:
        return {
            "t_d": self.t_d,
            "t_cross": self.t_cross,
            "j_star_state": self.j_star_state,
            "block": "".join(str(a) for a in self.block),
            "repetitions": self.repetitions,
            "tail": "".join(str(a) for a in self.tail),
        }


def _require_mixed(spec: GameSpec, what: str) -> None:
    if spec.regime is not Regime.NO_DOMINANT:
        raise RegimeMismatch(f"{what} needs a mixed regime, got {spec.regime}")


def min_horizon(spec: GameSpec) -> int:
    """Smallest T the landmark construction is specified for."""
    _require_mixed(spec, "landmark construction")
    s_star = gc.thresholds(spec).s_star
    return 2 * dyn.t_star(spec) + math.ceil(s_star / abs(spec.d2)) + 4


def compute_landmarks(spec: GameSpec, method: str = "exploring") -> Landmarks:
    """Locate j*, t_cross and t_d by pure lattice arithmetic.

    "exploring" scans the ray-walk intersection down from the horizon;
    "closed" seeds the scan from the bound T - t_d <= T* + ceil(s*/|d2|)
    and only sweeps that window.  Both return identical landmarks.
    """
    _require_mixed(spec, "landmark construction")
    if method not in ("exploring", "closed"):
        raise ValueError(f"unknown landmark method {method!r}")
    T = spec.T
    if T < min_horizon(spec):
        raise HorizonTooShort(
            f"T={T} below the minimum {min_horizon(spec)} for the periodic "
            f"construction; solve with the full DP instead")
    s_star = gc.thresholds(spec).s_star
    d1, d2 = spec.d1, spec.d2
    period = dyn.t_star(spec)

    # horizon-row values increase by d1 - d2 per index step
    j = math.floor((s_star + T * d1 - d2) / (d1 - d2))
    while spec.node_value(T, j) > s_star:
        j -= 1
    while j + 1 <= T and spec.node_value(T, j + 1) <= s_star:
        j += 1
    if not 1 <= j <= T - 1:
        raise HorizonTooShort(f"threshold anchor j*={j} falls off row T={T}")
    j_star = j
    j_star_state = spec.node_value(T, j_star)

    z_T = dyn.zero_state_at(spec, T)
    ray = "R" if z_T <= s_star else "L"

    def ray_index(t: int) -> int:
        return j_star - (T - t) if ray == "R" else j_star + 1

    if method == "closed":
        window = period + max(0, math.ceil(s_star / abs(d2))) + 2
    else:
        window = T
    t_cross = 0
    for t in range(T, max(1, T - window) - 1, -1):
        idx = ray_index(t)
        if not 1 <= idx <= t:
            continue
        if dyn.zero_index_at(spec, t) == idx:
            t_cross = t
            break
    if t_cross == 0:
        raise HorizonTooShort("ray never meets the threshold-0 walk in the window")

    t_d = 0
    for t in range(t_cross, 1, -1):
        if dyn.zero_state_at(spec, t) < 0 <= dyn.zero_state_at(spec, t + 1):
            t_d = t
            break
    if t_d < 2:
        raise HorizonTooShort("no negative crossing of the walk before t_cross")
    return Landmarks(j_star=j_star, t_cross=t_cross, t_d=t_d,
                     j_star_state=j_star_state, ray=ray)


def _cone_dp(spec: GameSpec, t_d: int, i0: int) -> tuple[list[Action], float]:
    """Backward induction on the cone of nodes reachable from (t_d, i0).

    Row arithmetic reuses sol.row_payoffs so the floats match the full
    table bit for bit; the returned actions therefore coincide with
    extract_path wherever the optimum is unique.
    """
    T = spec.T
    rows: list[np.ndarray] = [np.empty(0, dtype=np.uint8)] * (T - t_d + 1)
    fnext = np.zeros(T - t_d + 2, dtype=np.float64)
    for t in range(T, t_d - 1, -1):
        w = t - t_d + 1
        i = np.arange(i0, i0 + w, dtype=np.int64)
        vals = -(t - i) * spec.d1 - (i - 1) * spec.d2
        rl, rr = sol.row_payoffs(spec, vals)
        vl = rl + fnext[:w]
        vr = rr + fnext[1:w + 1]
        y = vr > vl
        fnext = np.where(y, vr, vl)
        rows[t - t_d] = np.packbits(y)
    actions: list[Action] = []
    k = 0
    for t in range(t_d, T + 1):
        byte, bit = divmod(k, 8)
        r = (rows[t - t_d][byte] >> (7 - bit)) & 1
        actions.append(Action.R if r else Action.L)
        if r:
            k += 1
    return actions, float(fnext[0])


def build_periodic_plan(spec: GameSpec, method: str = "exploring") -> PeriodicPlan:
    """Assemble the full optimal action string from its three phases.

    Round 1 plays L (the root payoff is maximized by R only in games
    this construction does not cover; on the lattice the optimum opens
    with L).  Rounds 2 .. t_d - 1 repeat the corridor-optimal block that
    starts and ends on the node of value -d1; the walk re-enters that
    node every T* rounds, so a partial block prefix lands exactly on the
    t_d node.  Rounds t_d .. T come from the cone DP.
    """
    lm = compute_landmarks(spec, method)
    period = dyn.t_star(spec)
    start = State(-spec.d1, 2, 1)
    block, _ = sol.local_longest_path(spec, start, -spec.d1, 2 + period)
    reps, _ = divmod(lm.t_d - 2, period)
    i0 = dyn.zero_index_at(spec, lm.t_d)
    tail, _ = _cone_dp(spec, lm.t_d, i0)
    return PeriodicPlan(spec=spec, t_d=lm.t_d, t_cross=lm.t_cross,
                        j_star_state=lm.j_star_state, block=tuple(block),
                        repetitions=reps, tail=tuple(tail))


def verify_against_dp(spec: GameSpec, method: str = "exploring") -> dict:
    """Cross-check the plan against the full table on one spec.

    Always returns a JSON-ready report; inapplicable regimes and short
    horizons are reported rather than raised.
    """
    report: dict = {"regime": str(spec.regime), "T": spec.T,
                    "applicable": False}
    if spec.regime is not Regime.NO_DOMINANT:
        report["reason"] = (f"periodic planner not applicable to "
                            f"{spec.regime} games; use the full DP")
        return report
    try:
        plan = build_periodic_plan(spec, method)
    except HorizonTooShort as exc:
        report["reason"] = str(exc)
        return report
    report["applicable"] = True
    table = sol.backward_induction(spec)
    dp = sol.extract_path(table)
    expanded = plan.expand()
    equal = expanded == dp.actions
    first_div: Optional[int] = None
    if not equal:
        first_div = next(t + 1 for t, (a, b)
                         in enumerate(zip(expanded, dp.actions)) if a != b)
    report.update({
        "t_d": plan.t_d,
        "t_cross": plan.t_cross,
        "j_star_state": plan.j_star_state,
        "block": "".join(str(a) for a in plan.block),
        "repetitions": plan.repetitions,
        "value_dp": dp.total,
        "value_plan": plan.total(),
        "value_diff": abs(dp.total - plan.total()),
        "actions_equal": equal,
        "first_divergence": first_div,
        "dp_root_value": table.root_value,
    })
    return report


def s_star_side_check(plan: PeriodicPlan, spec: GameSpec) -> bool:
    """Do plan actions before t_d sit on the right side of s0*?

    L is only played from states at or above the lookahead threshold,
    R only strictly below it.  The action at t_d opens the tail and can
    land on either side, and the final round is myopic (judged against
    s*, not s0*), so the scan stops at min(t_d - 1, T - 1).
    """
    s0 = gc.thresholds(spec).s_zero_star
    s = spec.root()
    stop = min(plan.t_d - 1, spec.T - 1)
    for t, a in enumerate(plan.expand(), start=1):
        if t > stop:
            break
        if a is Action.L and s.value < s0:
            return False
        if a is Action.R and s.value >= s0:
            return False
        s = gc.transition(s, a, spec)
    return True
