import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import hedgeplay as hp
from hedgeplay import analysis as an
from hedgeplay import dynamics as dyn
from hedgeplay.errors import (DomainError, HorizonExceeded, NoPeriodFound,
                              PolicyFault)
from hedgeplay.game_core import Action


def test_myopic_running_example_cycle(ex1_spec):
    traj = dyn.myopic_path(ex1_spec)
    vals = traj.values()[:700]
    # periodic from round 9 with the published cycle
    assert vals[8:13] == [14, 17, 15, 18, 16]
    for k in range(8, 695):
        assert vals[k] == vals[k + 5]
    rep = hp.detect_period(vals)
    assert rep.period == 5
    assert rep.preperiod <= 8
    assert rep.certified


def test_myopic_cycle_average_beats_value(ex1_spec):
    traj = dyn.myopic_path(ex1_spec)
    avg = traj.cycle_average(9, 5)
    assert avg == pytest.approx(0.6421, abs=5e-4)
    assert avg > float(ex1_spec.game_value)


def test_zero_path_running_example(ex1_spec):
    assert hp.zero_word(ex1_spec) == "LRLRL"
    assert hp.t_star(ex1_spec) == 5
    z = hp.zero_path(ex1_spec, 12)
    assert z.values()[:6] == [0, -2, 1, -1, 2, 0]


def test_t_star_third_example(ex3_spec):
    assert hp.t_star(ex3_spec) == 10
    assert hp.zero_word(ex3_spec).count("L") == 7
    assert hp.zero_word(ex3_spec).count("R") == 3


@given(st.integers(min_value=0, max_value=400))
def test_zero_path_properties(seed):
    spec = an.sample_specs(1, seed=seed, regime="NoDominant")[0]
    period = hp.t_star(spec)
    z = hp.zero_path(spec, 3 * period)
    vals = z.values()
    # closure, band, and no two consecutive drops below zero
    assert vals[0] == 0 and vals[period] == 0
    for v in vals:
        assert -spec.d1 <= v < -spec.d2
    for a, b in zip(vals, vals[1:]):
        assert not (a < 0 and b < 0)
    counts = hp.zero_word(spec)
    m = math.lcm(spec.d1, -spec.d2)
    assert counts.count("L") == m // spec.d1
    assert counts.count("R") == m // -spec.d2


def test_policies_const_and_script(ex1_spec):
    cl = dyn.simulate(ex1_spec, dyn.make_policy("const-L", ex1_spec), 6)
    assert cl.actions_str() == "LLLLLL"
    script = dyn.scripted_policy([Action.R, Action.L])
    tr = dyn.simulate(ex1_spec, script, 2)
    assert tr.actions_str() == "RL"
    with pytest.raises(PolicyFault):
        dyn.simulate(ex1_spec, script, 3)


def test_policy_type_check(ex1_spec):
    with pytest.raises(PolicyFault):
        dyn.simulate(ex1_spec, lambda s, t: "L", 3)


def test_make_policy_unknown(ex1_spec):
    with pytest.raises(PolicyFault):
        dyn.make_policy("banana", ex1_spec)


def test_simulate_length_bounds(ex1_spec):
    with pytest.raises(HorizonExceeded):
        dyn.simulate(ex1_spec, dyn.zero_policy(), 701)
    with pytest.raises(DomainError):
        dyn.simulate(ex1_spec, dyn.zero_policy(), 0)


def test_regret_gap_tracks_state(ex3_spec):
    traj = dyn.myopic_path(ex3_spec, 80)
    q = ex3_spec.q
    for t in range(81):
        gap = traj.regret1[t] - traj.regret2[t]
        want = traj.states[t].value / q if t < 80 else traj.states[-1].value / q
        assert gap == pytest.approx(want, abs=1e-9)


def test_stage_nash_seeded_reproducible(ex1_spec):
    a = dyn.simulate(ex1_spec, dyn.make_policy("stage-nash", ex1_spec, seed=5), 40)
    b = dyn.simulate(ex1_spec, dyn.make_policy("stage-nash", ex1_spec, seed=5), 40)
    assert a.actions_str() == b.actions_str()


def test_cycle_average_window_check(ex1_spec):
    traj = dyn.myopic_path(ex1_spec, 10)
    with pytest.raises(ValueError):
        traj.cycle_average(8, 5)


def test_detect_period_edges():
    rep = hp.detect_period([7] * 10)
    assert (rep.preperiod, rep.period) == (0, 1)
    rep = hp.detect_period([1, 2, 3, 1, 2, 3, 1, 2, 3])
    assert (rep.preperiod, rep.period) == (0, 3)
    rep = hp.detect_period([9, 9, 1, 2, 1, 2, 1, 2])
    assert (rep.preperiod, rep.period) == (2, 2)
    with pytest.raises(NoPeriodFound):
        hp.detect_period(list(range(50)))


def test_detect_period_prefers_smallest():
    # period 2 also repeats with period 4; the report must say 2
    rep = hp.detect_period([0, 1] * 8)
    assert rep.period == 2
    assert rep.preperiod == 0


def test_gamma_sequence_band_and_period():
    p, q = Fraction(3), Fraction(2)
    lam = Fraction(1)
    seq = dyn.gamma_sequence(p, q, lam, Fraction(0), 14)
    assert all(lam - p <= g < lam for g in seq)
    period = math.lcm(3, 2) // 2
    assert seq[:14 - period] == seq[period:]


def test_gamma_sequence_rejects_bad_inputs():
    with pytest.raises(DomainError):
        dyn.gamma_sequence(Fraction(-1), Fraction(2), 0, 0, 5)
    with pytest.raises(DomainError):
        dyn.gamma_sequence(Fraction(1), Fraction(2), 0, Fraction(5), 5)


def test_trajectory_actions_in_canonical_enum(ex1_spec):
    traj = dyn.myopic_path(ex1_spec, 20)
    assert all(isinstance(a, Action) for a in traj.actions)
    assert len(traj.states) == 21  # includes the post-horizon state
