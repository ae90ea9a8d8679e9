"""Build the optimal action string without running the full DP.

Three landmarks (the anchor state at the horizon, the crossing time, and
the last descent time) pin down the optimal play: an aperiodic prefix of
one round, a repeated block, and a short solved tail.  Computing them
takes microseconds even when the horizon has ten thousand rounds.
"""

import time

import hedgeplay as hp
from hedgeplay import periodic_planner as pp
from hedgeplay import sttg_solver as sol

big = hp.validate([["1", "0"], ["-1", "3"]], "auto", 10000)
t0 = time.perf_counter()
lm = pp.compute_landmarks(big)
dt = time.perf_counter() - t0
print(f"T = 10000: anchor state {lm.j_star_state}, "
      f"crossing at t = {lm.t_cross}, last descent at t = {lm.t_d}")
print(f"landmarks in {dt * 1e6:.0f} microseconds\n")

spec = hp.validate([["1", "0"], ["-1", "3"]], "auto", 700)
plan = pp.build_periodic_plan(spec)
block = "".join(str(a) for a in plan.block)
print(f"T = 700 plan: 'L' + {block!r} x {plan.repetitions} "
      f"+ {plan.leftover} leftover + solved tail of {len(plan.tail)}")

t0 = time.perf_counter()
dp = sol.extract_path(sol.backward_induction(spec))
dt_dp = time.perf_counter() - t0
same = "".join(str(a) for a in plan.expand()) == dp.actions_str()
print(f"matches the {dt_dp * 1e3:.0f}ms full DP string exactly: {same}")
print(f"plan total {plan.total():.6f}  dp total {dp.total:.6f}")
