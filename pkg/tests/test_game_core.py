import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import hedgeplay as hp
from hedgeplay import game_core as gc
from hedgeplay.errors import (IrrationalEntries, RegimeMismatch,
                              ValidationError, ZeroGame)
from hedgeplay.game_core import Action, Regime

entry = st.integers(min_value=-9, max_value=9)
matrix4 = st.tuples(entry, entry, entry, entry)


def _spec(a, b, c, d, eta=0.1, T=40):
    return hp.validate([[str(a), str(b)], [str(c), str(d)]], eta, T)


def test_running_example_classification():
    spec = hp.validate([["1", "0"], ["-1", "3"]], "auto", 700)
    assert spec.regime is Regime.NO_DOMINANT
    assert (spec.d1, spec.d2, spec.ld1, spec.ld2) == (2, -3, 1, -4)
    assert spec.game_value == Fraction(3, 5)
    assert spec.q == 1
    assert not spec.row_swapped and not spec.col_swapped


def test_y_dominant_example():
    spec = hp.validate([["0", "10"], ["1", "2"]], "auto", 100)
    assert spec.regime is Regime.Y_DOMINANT


def test_zero_game_rejected():
    with pytest.raises(ZeroGame):
        hp.validate([["1", "1"], ["1", "1"]], 0.1, 10)


def test_decimal_entries_scale_out_denominator():
    spec = hp.validate([["0", "10"], ["1.9", "2"]], 0.2, 100)
    assert spec.q == 10
    assert spec.user_matrix.scaled_rows() == [[0, 100], [19, 20]]
    assert spec.eta_scaled == pytest.approx(0.2 / 10)


def test_float_entries_rejected_with_hint():
    with pytest.raises(IrrationalEntries) as err:
        hp.validate([[1.9, 2], [0, 10]], 0.1, 10)
    assert "1.9" in str(err.value)


def test_bad_shapes_and_horizons():
    with pytest.raises(ValidationError):
        hp.validate([[1, 2, 3], [4, 5, 6]], 0.1, 10)
    with pytest.raises(ValidationError):
        hp.validate([[1, 2], [3, 4]], 0.1, 0)
    with pytest.raises(ValidationError):
        hp.validate([[1, 2], [3, 4]], -0.3, 10)


def test_default_eta_formula():
    spec = hp.validate([["1", "0"], ["-1", "3"]], "auto", 700)
    assert spec.eta == pytest.approx(math.sqrt(8 * math.log(2) / 700))
    assert spec.eta_was_auto
    explicit = hp.validate([["1", "0"], ["-1", "3"]], 0.25, 700)
    assert not explicit.eta_was_auto


@given(matrix4)
def test_canonical_orientation_invariants(m):
    a, b, c, d = m
    try:
        spec = _spec(a, b, c, d)
    except (ZeroGame, ValidationError):
        return
    if spec.regime is Regime.NO_DOMINANT:
        assert spec.d1 > 0 > spec.d2
        assert abs(spec.d1) <= abs(spec.d2)
        assert spec.ld1 > 0 > spec.ld2
    elif spec.regime is Regime.X_DOMINANT:
        assert spec.d1 > 0 and spec.d2 > 0


@given(matrix4)
def test_game_value_is_maximin(m):
    a, b, c, d = m
    try:
        spec = _spec(a, b, c, d)
    except (ZeroGame, ValidationError):
        return
    v = spec.game_value
    y1, y2 = hp.stage_nash_mix(spec)
    rows = spec.matrix.entries()  # the mix is in canonical orientation
    # the maximin mix guarantees at least v against both learner rows
    for r in rows:
        assert y1 * r[0] + y2 * r[1] >= v
    # the learner caps the loss at the best pure row's worst case
    assert v <= min(max(r) for r in rows)


@given(matrix4, st.integers(min_value=1, max_value=30),
       st.integers(min_value=1, max_value=30))
def test_node_lattice_identity(m, t, i):
    a, b, c, d = m
    if i > t:
        return
    try:
        spec = _spec(a, b, c, d)
    except (ZeroGame, ValidationError):
        return
    v = spec.node_value(t, i)
    assert v == -(t - i) * spec.d1 - (i - 1) * spec.d2


def test_transition_children(ex1_spec):
    root = ex1_spec.root()
    left = hp.transition(root, Action.L, ex1_spec)
    right = hp.transition(root, Action.R, ex1_spec)
    assert (left.t, left.i) == (2, 1)
    assert (right.t, right.i) == (2, 2)
    assert left.value == root.value - ex1_spec.d1
    assert right.value == root.value - ex1_spec.d2


def test_transition_past_horizon(ex1_spec):
    s = ex1_spec.node(ex1_spec.T, 1)
    end = hp.transition(s, Action.L, ex1_spec)
    assert end.t == ex1_spec.T + 1
    with pytest.raises(hp.HorizonExceeded):
        hp.transition(end, Action.L, ex1_spec)


@given(st.integers(min_value=-200, max_value=200))
def test_hedge_strategy_matches_weight_ratio(s):
    spec = hp.validate([["1", "0"], ["-1", "3"]], 0.17, 100)
    x = hp.hedge_strategy(float(s), spec)
    assert x.p1 + x.p2 == pytest.approx(1.0)
    # weights exp(-eta * cumulative loss); the state is l2 - l1
    w1, w2 = math.exp(spec.eta_scaled * s), 1.0
    assert x.p1 == pytest.approx(w1 / (w1 + w2), rel=1e-12)


def test_thresholds_running_example(ex1_spec):
    th = hp.thresholds(ex1_spec)
    assert th.s_star == pytest.approx(15.58, abs=0.01)
    assert th.s_zero_star < 0
    # crossing s* flips the myopic comparison
    assert gc.payoff(th.s_star, Action.L, ex1_spec) == pytest.approx(
        gc.payoff(th.s_star, Action.R, ex1_spec), abs=1e-9)


def test_thresholds_zero_iff_antisymmetric():
    tie = hp.validate([["3", "-1"], ["-1", "3"]], 0.2, 40)
    assert tie.d1 == -tie.d2
    th = hp.thresholds(tie)
    assert th.s_star == 0.0
    assert th.s_zero_star == 0.0


def test_thresholds_need_mixed_regime():
    spec = hp.validate([["3", "2"], ["1", "0"]], 0.1, 40)
    assert spec.regime is Regime.X_DOMINANT
    with pytest.raises(RegimeMismatch):
        hp.thresholds(spec)


def test_lookahead_gap_sign(ex3_spec):
    th = hp.thresholds(ex3_spec)
    assert hp.lookahead_gap(ex3_spec, th.s_zero_star - 0.5) > 0
    assert hp.lookahead_gap(ex3_spec, th.s_zero_star + 0.5) < 0
    assert hp.lookahead_gap(ex3_spec, th.s_zero_star) == pytest.approx(0, abs=1e-9)


def test_spec_json_round_trip(ex3_spec):
    doc = ex3_spec.to_json_dict()
    again = hp.GameSpec.from_json_dict(doc)
    assert again.matrix == ex3_spec.matrix
    assert again.T == ex3_spec.T
    assert again.game_value == ex3_spec.game_value
    assert json.loads(ex3_spec.to_json())["regime"] == "NoDominant"


def test_spec_json_tamper_detected(ex3_spec):
    doc = ex3_spec.to_json_dict()
    doc["game_value"] = "1/2"
    with pytest.raises(ValidationError):
        hp.GameSpec.from_json_dict(doc)


def test_orientation_reexpresses_labels():
    # swap the rows of the running example; outputs must stay in user labels
    spec = hp.validate([["-1", "3"], ["1", "0"]], "auto", 700)
    assert spec.regime is Regime.NO_DOMINANT
    assert spec.row_swapped
    base = hp.validate([["1", "0"], ["-1", "3"]], "auto", 700)
    assert spec.game_value == base.game_value
    assert (spec.d1, spec.d2) == (base.d1, base.d2)
