"""Watch a Hedge learner get trapped in a cycle by myopic exploitation.

The opponent plays the one-step best response every round.  After a short
transient the learner's state falls into a five-round orbit, and the
opponent's average payoff settles strictly above the game value.
"""

import hedgeplay as hp
from hedgeplay import dynamics as dyn

spec = hp.validate([["1", "0"], ["-1", "3"]], "auto", 700)
print(f"game value {spec.game_value}, regime {spec.regime}")
th = hp.thresholds(spec)
print(f"myopic threshold s* = {th.s_star:.4f}\n")

traj = dyn.myopic_path(spec)
report = hp.detect_period(traj.values()[:700])
start = report.preperiod + 1
print(f"state sequence becomes periodic at round {start}, "
      f"period {report.period}, cycle {list(report.cycle)}")

avg = traj.cycle_average(start, report.period)
print(f"per-cycle payoff {avg:.5f} vs game value {float(spec.game_value):.5f}")
print(f"exploitation margin: {avg - float(spec.game_value):+.5f} per round")

print("\nfirst twelve rounds:")
print("  t  state  x1      action payoff")
for t in range(1, 13):
    s = traj.states[t - 1]
    x1, _ = spec.x_pair_user(traj.strategies[t - 1])
    print(f"{t:3d}  {s.value:5d}  {x1:.4f} {spec.action_label(traj.actions[t-1]):>5s}"
          f"  {traj.payoffs[t-1]:.4f}")
