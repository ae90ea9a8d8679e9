"""Solve for the exact whole-horizon best response and compare it to greed.

Backward induction over the state lattice gives the optimal action string.
Playing optimally is not greedy round by round: the opponent sacrifices
early payoff to steer the learner's weights, then harvests.
"""

import hedgeplay as hp
from hedgeplay import dynamics as dyn
from hedgeplay import sttg_solver as sol

spec = hp.validate([["1", "0"], ["-2", "7"]], "auto", 1000)
th = hp.thresholds(spec)
print(f"game value {spec.game_value}, s* = {th.s_star:.4f}, "
      f"lookahead threshold s0* = {th.s_zero_star:.4f}")

dp = sol.extract_path(sol.backward_induction(spec))
myopic = dyn.myopic_path(spec)

period = hp.t_star(spec)
opt = dyn.simulate(spec, dyn.scripted_policy(dp.actions))
cycle_start = hp.detect_period(myopic.values()[:1000]).preperiod + 1
print(f"\noptimal total {dp.total:.3f} "
      f"(steady per-period average {opt.cycle_average(2, period):.5f})")
print(f"myopic  total {myopic.total_payoff():.3f} "
      f"(cycle average {myopic.cycle_average(cycle_start, period):.5f})")
print(f"value per round: {float(spec.game_value):.5f}")

print(f"\noptimal opening: {dp.actions_str()[:24]}...")
print(f"myopic  opening: {myopic.actions_str()[:24]}...")
print("\nthe optimal line keeps the state hugging zero (period "
      f"{period} block), where each round's payoff stays above the value")
