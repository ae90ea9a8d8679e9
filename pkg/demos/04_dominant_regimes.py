"""What happens when one side has a dominant action.

If the learner has a dominated row, its weights collapse onto the better
row and the opponent's best response goes constant after a computable
time.  If instead the opponent holds the dominant action, always playing
it is sometimes exactly optimal and sometimes provably not, depending on
the payoff gaps.
"""

import hedgeplay as hp
from hedgeplay import analysis as an
from hedgeplay import sttg_solver as sol

print("== learner dominated ==")
spec = hp.validate([["5", "2"], ["0", "1"]], 0.25, 60)
tail = an.dominant_x_tail(spec)
dp = sol.extract_path(sol.backward_induction(spec))
print(f"regime {spec.regime}: optimal play goes constant at round {tail}")
print(f"DP string: {dp.actions_str()}\n")

print("== opponent dominant ==")
for entries in ([["0", "10"], ["1", "2"]],
                [["0", "10"], ["1.9", "2"]],
                [["0", "30"], ["19", "20"]]):
    spec = hp.validate(entries, "auto", 100)
    study = an.y_dominant_study(spec)
    label = study["dominant_action"]
    if study["constant_dominant_optimal"]:
        verdict = f"always playing {label} is optimal"
    else:
        verdict = (f"always playing {label} is NOT optimal: the best string "
                   f"deviates {study['num_non_dominant']} times, first at "
                   f"round {study['first_divergence_t']}, gaining "
                   f"{study['value_dp'] - study['value_constant']:.4f}")
    print(f"{entries}: {verdict}")
