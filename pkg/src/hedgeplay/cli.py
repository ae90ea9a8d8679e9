"""Command-line driver: simulate, solve, analyze, verify.

Matrices are given as "a,b;c,d" with decimal or p/q entries.  Every run
records its configuration to config.json in the output directory; passing
--config re-executes that run and reproduces the exports byte for byte.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 resource
limit, 4 method unsupported for this game or horizon.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import analysis as an
from . import dynamics as dyn
from . import game_core as gc
from . import periodic_planner as pp
from . import serialize as ser
from . import sttg_solver as sol
from .errors import (HedgeplayError, HorizonTooShort, NoPeriodFound,
                     RegimeMismatch, ResourceLimit, ValidationError)
from .game_core import Regime

DEFAULT_MATRIX = "1,0;-1,3"

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_UNSUPPORTED = 4


def parse_matrix(text: str) -> list[list[str]]:
    rows = [r for r in text.strip().split(";") if r.strip()]
    out = [[e.strip() for e in r.split(",")] for r in rows]
    if len(out) != 2 or any(len(r) != 2 for r in out):
        raise ValidationError(f"matrix must be 2x2, got {text!r}")
    return out


def load_matrix(args) -> list[list[str]]:
    if getattr(args, "matrix_file", None):
        text = Path(args.matrix_file).read_text(encoding="utf-8")
        return parse_matrix(text.replace("\n", ";"))
    return parse_matrix(args.matrix)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hedgeplay",
        description="Play against a two-action Hedge learner: simulate "
                    "opponent policies, solve for the optimal action string, "
                    "and verify the structural properties of the solution.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, default_T=100):
        sp.add_argument("--matrix", default=DEFAULT_MATRIX,
                        help="2x2 loss matrix 'a,b;c,d' (decimal or p/q "
                             f"entries; default {DEFAULT_MATRIX!r})")
        sp.add_argument("--matrix-file", default=None,
                        help="read the matrix from a file instead "
                             "(rows on separate lines or ';'-separated)")
        sp.add_argument("--eta", default="auto",
                        help="learning rate; 'auto' means sqrt(8 ln 2 / T)")
        sp.add_argument("--T", type=int, default=default_T, help="horizon")
        sp.add_argument("--seed", type=int, default=None, help="RNG seed")
        sp.add_argument("--out", default="hedgeplay_out",
                        help="output directory (created if missing)")
        sp.add_argument("--format", choices=("csv", "json", "both"),
                        default="both", help="export formats")
        sp.add_argument("--config", default=None,
                        help="re-execute a recorded config.json "
                             "(other input flags are ignored)")

    sp = sub.add_parser("simulate", help="run a policy against the learner")
    common(sp)
    sp.add_argument("--policy", default="mbr",
                    help="mbr | zero | const-L | const-R | stage-nash | "
                         "script:<path>")

    sp = sub.add_parser("solve", help="best response for the whole horizon")
    common(sp)
    sp.add_argument("--method", choices=("dp", "periodic", "brute"),
                    default="dp")
    sp.add_argument("--grid", action="store_true",
                    help="also write the argmax triangle as grid.txt "
                         "(dp method only)")

    sp = sub.add_parser("analyze", help="thresholds, period, and landmarks")
    common(sp)

    sp = sub.add_parser("verify", help="run the structural check suite")
    common(sp)
    sp.add_argument("--depth", choices=("fast", "full"), default="fast")
    sp.add_argument("--mutate", default=None,
                    help="apply a named mutant first (expects failures); "
                         "unique prefixes are accepted")
    return p


# -- run configs ---------------------------------------------------------

_CONFIG_KEYS = ("command", "matrix_entries", "eta", "T", "seed", "format",
                "policy", "method", "grid", "depth", "mutate")


def run_config(args, entries) -> dict:
    cfg = {"command": args.command, "matrix_entries": entries,
           "eta": args.eta, "T": args.T, "seed": args.seed,
           "format": args.format}
    for k in ("policy", "method", "grid", "depth", "mutate"):
        if hasattr(args, k):
            cfg[k] = getattr(args, k)
    return cfg


def apply_config(args, path: str) -> list[list[str]]:
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if cfg.get("command") != args.command:
        raise ValidationError(
            f"config records command {cfg.get('command')!r}, "
            f"not {args.command!r}")
    for k in _CONFIG_KEYS:
        if k in cfg and k not in ("command", "matrix_entries"):
            setattr(args, k, cfg[k])
    return cfg["matrix_entries"]


def prepare(args):
    if args.config:
        entries = apply_config(args, args.config)
    else:
        entries = load_matrix(args)
    eta = args.eta
    if isinstance(eta, str) and eta.lower() != "auto":
        eta = float(eta)
    spec = gc.validate(entries, eta, args.T)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    ser.write_json(outdir / "config.json", run_config(args, entries))
    return spec, outdir


def want(args, kind: str) -> bool:
    return args.format in (kind, "both")


# -- subcommands ---------------------------------------------------------

def cmd_simulate(args) -> int:
    spec, outdir = prepare(args)
    policy = dyn.make_policy(args.policy, spec, seed=args.seed)
    traj = dyn.simulate(spec, policy, policy_name=args.policy)
    if want(args, "csv"):
        ser.write_text(outdir / "trajectory.csv", ser.trajectory_csv(traj))
    if want(args, "json"):
        ser.write_json(outdir / "trajectory.json",
                       ser.trajectory_json_dict(traj))
    print(f"policy={args.policy} rounds={len(traj)} "
          f"total={traj.total_payoff():.6g} avg={traj.average_payoff():.6g}")
    try:
        report = dyn.detect_period(traj.values()[:len(traj)])
    except NoPeriodFound as exc:
        ser.write_json(outdir / "period_report.json",
                       {"found": False, "reason": str(exc)})
        print(f"period report: none found ({exc})")
    else:
        ser.write_json(outdir / "period_report.json",
                       {"found": True, **report.to_json_dict()})
        print(f"period report: cycle starts at round {report.preperiod + 1} "
              f"(1-indexed), period {report.period}"
              + ("" if report.certified else
                 " (uncertified: horizon too short)"))
    return EXIT_OK


def cmd_solve(args) -> int:
    spec, outdir = prepare(args)
    t0 = time.perf_counter()
    if args.method == "dp":
        table = sol.backward_induction(spec)
        best = sol.extract_path(table)
        if args.grid:
            ser.write_text(outdir / "grid.txt",
                           "\n".join(ser.grid_lines(table, spec)) + "\n")
    elif args.method == "brute":
        best = sol.brute_force(spec)
    else:
        plan = pp.build_periodic_plan(spec)
        ser.write_json(outdir / "plan.json", plan.to_json_dict())
        acts = plan.expand()
        best = sol.OptimalSolution(
            actions=acts,
            states=[],
            total=plan.total(),
            method="periodic")
    elapsed = time.perf_counter() - t0

    if want(args, "csv") or want(args, "json"):
        traj = ser.solution_trajectory(spec, best)
        if want(args, "csv"):
            ser.write_text(outdir / "solution.csv", ser.trajectory_csv(traj))
        if want(args, "json"):
            doc = ser.solution_json_dict(spec, best)
            ser.write_json(outdir / "solution.json", doc)

    n = len(best.actions)
    period = None
    if spec.regime is Regime.NO_DOMINANT:
        period = dyn.t_star(spec)
    print(f"method={args.method} T={n} time={elapsed:.3f}s")
    print(f"total payoff: {best.total:.6g}")
    print(f"average payoff (whole horizon): {best.total / n:.6g}")
    if period is not None and n >= 1 + period:
        body = sum(gc.payoff(s_, a_, spec) for s_, a_ in _replay(spec, best)[1:1 + period])
        print(f"steady per-period average (rounds 2..{1 + period}): "
              f"{body / period:.6g}")
    print(f"game value: {spec.game_value} = {float(spec.game_value):.6g}")
    return EXIT_OK


def _replay(spec, best):
    s = spec.root()
    out = []
    for a in best.actions:
        out.append((s, a))
        s = gc.transition(s, a, spec)
    return out


def cmd_analyze(args) -> int:
    spec, outdir = prepare(args)
    if spec.regime is Regime.DEGENERATE:
        raise ValidationError(
            "degenerate game: a payoff-difference product vanishes, so the "
            "threshold analysis is undefined")
    doc = {"spec": spec.to_json_dict(), "regime": str(spec.regime),
           "game_value": str(spec.game_value)}
    print(f"regime: {spec.regime}")
    print(f"game value: {spec.game_value} = {float(spec.game_value):.6g}")
    if spec.regime is Regime.NO_DOMINANT:
        th = gc.thresholds(spec)
        period = dyn.t_star(spec)
        doc.update({"s_star": th.s_star, "s_zero_star": th.s_zero_star,
                    "t_star": period, "zero_word": dyn.zero_word(spec)})
        print(f"s* = {th.s_star:.6g}   s0* = {th.s_zero_star:.6g}   "
              f"T* = {period}   zero word = {dyn.zero_word(spec)}")
        try:
            lm = pp.compute_landmarks(spec)
            doc["landmarks"] = {"j_star_state": lm.j_star_state,
                                "t_cross": lm.t_cross, "t_d": lm.t_d,
                                "ray": lm.ray}
            print(f"landmarks: s_j* = {lm.j_star_state}, "
                  f"t_cross = {lm.t_cross}, t_d = {lm.t_d} (ray {lm.ray})")
        except HorizonTooShort as exc:
            doc["landmarks"] = None
            print(f"landmarks: not available ({exc})")
    elif spec.regime is Regime.X_DOMINANT:
        tail = an.dominant_x_tail(spec)
        doc["constant_tail_from"] = tail
        print(f"learner's first row dominates; optimal play is constant "
              f"from round {tail}")
    else:
        study = an.y_dominant_study(spec)
        doc["dominant_action"] = study["dominant_action"]
        doc["constant_dominant_optimal"] = study["constant_dominant_optimal"]
        print(f"dominant column: {study['dominant_action']}; constant play "
              f"{'is' if study['constant_dominant_optimal'] else 'is not'} "
              f"optimal at this horizon")
    ser.write_json(outdir / "analyze.json", doc)
    return EXIT_OK


def _resolve_mutant(name: str) -> str:
    if name in an.MUTANTS:
        return name
    hits = [k for k in an.MUTANTS if k.startswith(name)]
    if len(hits) != 1:
        raise ValidationError(
            f"unknown mutant {name!r}; choose from {sorted(an.MUTANTS)}")
    return hits[0]


def cmd_verify(args) -> int:
    spec, outdir = prepare(args)
    mutant = _resolve_mutant(args.mutate) if args.mutate else None
    seed = args.seed if args.seed is not None else 20240817
    t0 = time.perf_counter()
    results = an.run_suite(depth=args.depth, seed=seed, mutant=mutant)
    elapsed = time.perf_counter() - t0
    an.write_report(results, outdir / "report.jsonl")
    summary = an.suite_summary(results)
    width = max(len(k) for k in summary["checks"])
    print(f"{'check':<{width}}  pass  fail")
    for cid, row in sorted(summary["checks"].items()):
        print(f"{cid:<{width}}  {row['passed']:4d}  {row['failed']:4d}")
    status = "ok" if summary["failed"] == 0 else "FAILED"
    print(f"{summary['passed']}/{summary['total']} checks passed "
          f"in {elapsed:.1f}s ({args.depth} depth"
          + (f", mutant {mutant}" if mutant else "") + f"): {status}")
    return EXIT_OK if summary["failed"] == 0 else EXIT_VERIFY


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"simulate": cmd_simulate, "solve": cmd_solve,
               "analyze": cmd_analyze, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (RegimeMismatch, HorizonTooShort) as exc:
        hint = " (try --method dp)" if args.command == "solve" else ""
        print(f"error: {exc}{hint}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except HedgeplayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
