import json

import pytest

import hedgeplay as hp
from hedgeplay import analysis as an
from hedgeplay.game_core import Regime


def test_fast_suite_green():
    results = an.run_suite(depth="fast")
    failed = [r for r in results if not r.passed]
    assert not failed, [(r.check_id, r.spec_digest, r.witness) for r in failed]


def test_suite_deterministic(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    an.write_report(an.run_suite(depth="fast", seed=99), a)
    an.write_report(an.run_suite(depth="fast", seed=99), b)
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    rows = [json.loads(ln) for ln in lines]
    assert all({"check_id", "spec_digest", "passed"} <= set(r) for r in rows)


def test_different_seed_changes_sample():
    a = an.run_suite(depth="fast", seed=1)
    b = an.run_suite(depth="fast", seed=2)
    assert {r.spec_digest for r in a} != {r.spec_digest for r in b}


@pytest.mark.parametrize("mutant", sorted(an.MUTANTS))
def test_mutants_are_killed(mutant):
    results = an.run_suite(depth="fast", mutant=mutant)
    failed = {r.check_id for r in results if not r.passed}
    for check_id in an.MUTANT_KILLS[mutant]:
        assert check_id in failed, f"{mutant} survived {check_id}"


def test_clean_modules_after_mutant_run():
    an.run_suite(depth="fast", mutant="mbr-flip")
    results = an.run_suite(depth="fast")
    assert all(r.passed for r in results)


def test_myopic_cycle_check_with_deep_negative_threshold():
    # s* = -34.27 here, so myopic play needs ~11 descent rounds before
    # the cycle band; the settle bound must cover both signs of s*
    spec = hp.validate([[4, 3], [-9, 5]], 0.077, 68)
    res = an.check_myopic_cycle(spec, None, "fast")
    assert res.passed, res.witness


def test_threshold_split_stops_before_t_d():
    # the round-t_d action opens the tail: here DP strictly prefers L
    # from a state below s0*, so the side rule covers t < t_d only
    from hedgeplay import periodic_planner as pp
    from hedgeplay import sttg_solver as sol
    from hedgeplay.game_core import Action, thresholds

    spec = hp.validate([[-4, -2], [-2, -7]], 0.109, 39)
    plan = pp.build_periodic_plan(spec)
    dp = sol.extract_path(sol.backward_induction(spec))
    off = dp.states[plan.t_d - 1].value
    assert off < thresholds(spec).s_zero_star
    assert dp.actions[plan.t_d - 1] is Action.L
    res = an.check_threshold_split(spec, None, "fast")
    assert res.passed, res.witness


def test_row_structure_gated_for_tie_family():
    # d1 = -d2 ties the lattice values, so argmax rows follow the
    # tie-break convention rather than the walk; the check must gate
    spec = hp.validate([[-1, -3], [-6, 2]], 0.258, 16)
    assert spec.d1 == -spec.d2
    res = an.check_row_structure(spec, None, "fast")
    assert res.passed
    assert "gated" in res.witness


def test_sample_specs_regime_filter():
    for regime in ("NoDominant", "XDominant", "YDominant"):
        specs = an.sample_specs(5, seed=42, regime=regime)
        assert len(specs) == 5
        assert all(str(s.regime) == regime for s in specs)


def test_sample_specs_exclude_symmetric():
    specs = an.sample_specs(12, seed=7, regime="NoDominant",
                            exclude_symmetric=True)
    assert all(s.d1 != -s.d2 for s in specs)


def test_suite_summary_shape():
    results = an.run_suite(depth="fast")
    s = an.suite_summary(results)
    assert s["total"] == s["passed"] + s["failed"]
    assert set(s["checks"]) == {r.check_id for r in results}


def test_dominant_x_tail_shortcut():
    # both little-deltas on the same side: constant from the first round
    spec = hp.validate([["5", "3"], ["2", "1"]], 0.1, 60)
    assert spec.regime is Regime.X_DOMINANT
    assert spec.ld1 * spec.ld2 > 0
    assert an.dominant_x_tail(spec) == 1


def test_dominant_x_tail_requires_regime(ex1_spec):
    with pytest.raises(hp.RegimeMismatch):
        an.dominant_x_tail(ex1_spec)


def test_y_dominant_study_keys():
    spec = hp.validate([["0", "10"], ["1", "2"]], "auto", 100)
    study = an.y_dominant_study(spec)
    assert study["dominant_action"] in ("L", "R")
    assert isinstance(study["constant_dominant_optimal"], bool)
    assert study["num_non_dominant"] >= 0
    assert len(study["optimal_actions"]) == 100


def test_check_result_digest_stability(ex1_spec):
    assert an.spec_digest(ex1_spec) == an.spec_digest(ex1_spec)
    other = hp.validate([["1", "0"], ["-1", "3"]], "auto", 701)
    assert an.spec_digest(other) != an.spec_digest(ex1_spec)
