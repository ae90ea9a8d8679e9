"""Playing against a two-action Hedge learner in repeated zero-sum games.

The learner updates multiplicative weights over its two rows; the opponent
either follows a simple policy (simulate) or plays the exact finite-horizon
best response (solve).  The solver family includes quadratic backward
induction, exponential brute force for cross-checking, and a near-linear
periodic construction built from the game's structural landmarks.
"""

from .errors import (DomainError, HedgeplayError, HorizonExceeded,
                     HorizonTooShort, IrrationalEntries, NoPeriodFound,
                     NotAccessible, PolicyFault, RegimeMismatch,
                     ResourceLimit, TieWarning, ValidationError, ZeroGame)
from .game_core import (Action, GameSpec, LossMatrix, MixedStrategy, Regime,
                        State, Thresholds, default_eta, hedge_strategy,
                        lookahead_gap, payoff, thresholds, transition,
                        validate)
from .dynamics import (PeriodReport, Trajectory, detect_period,
                       gamma_sequence, make_policy, myopic_path,
                       simulate, stage_nash_mix, t_star, zero_path,
                       zero_word)
from .sttg_solver import (OptimalSolution, ValueTable, backward_induction,
                          brute_force, extract_path, local_longest_path)
from .periodic_planner import (Landmarks, PeriodicPlan, build_periodic_plan,
                               compute_landmarks, min_horizon,
                               verify_against_dp)
from .analysis import (CheckResult, dominant_x_tail, run_suite, sample_specs,
                       suite_summary, write_report, y_dominant_study)

__version__ = "0.1.0"

__all__ = [
    "Action", "CheckResult", "DomainError", "GameSpec", "HedgeplayError",
    "HorizonExceeded", "HorizonTooShort", "IrrationalEntries", "Landmarks",
    "LossMatrix", "MixedStrategy", "NoPeriodFound", "NotAccessible",
    "OptimalSolution", "PeriodReport", "PeriodicPlan", "PolicyFault",
    "Regime", "RegimeMismatch", "ResourceLimit", "State", "Thresholds",
    "TieWarning", "Trajectory", "ValidationError", "ValueTable", "ZeroGame",
    "backward_induction", "brute_force", "build_periodic_plan",
    "compute_landmarks", "default_eta", "detect_period", "dominant_x_tail",
    "extract_path", "gamma_sequence", "hedge_strategy", "local_longest_path",
    "lookahead_gap", "make_policy", "min_horizon", "myopic_path", "payoff",
    "run_suite", "sample_specs", "simulate", "stage_nash_mix",
    "suite_summary", "t_star", "thresholds", "transition", "validate",
    "verify_against_dp", "write_report", "y_dominant_study", "zero_path",
    "zero_word",
]
