"""Deterministic CSV / JSON export of trajectories, solutions, and grids.

All files use LF line endings and '.' decimal points.  Floats are written
with 12 significant digits; states and indices are exact integers.  Exports
are re-expressed in the caller's original row/column labels.
"""

from __future__ import annotations

import json

from . import dynamics as dyn
from . import game_core as gc
from .dynamics import Trajectory
from .game_core import GameSpec
from .sttg_solver import OptimalSolution, ValueTable

TRAJECTORY_COLUMNS = ("t", "s", "i", "x1", "x2", "action", "payoff", "R1", "R2")

_SAFE_INT = 2 ** 53


def fmt(x) -> str:
    if isinstance(x, bool):
        raise TypeError("no boolean columns")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def json_int(n: int):
    # JSON numbers lose exactness past 2^53; fall back to strings there
    return n if abs(n) < _SAFE_INT else str(n)


def trajectory_rows(traj: Trajectory) -> list[tuple]:
    spec = traj.spec
    rows = []
    swap = spec.row_swapped
    for t in range(1, len(traj) + 1):
        st = traj.states[t - 1]
        x1, x2 = spec.x_pair_user(traj.strategies[t - 1])
        r1, r2 = traj.regret1[t], traj.regret2[t]
        if swap:
            r1, r2 = r2, r1
        rows.append((t, st.value, st.i, x1, x2,
                     spec.action_label(traj.actions[t - 1]),
                     traj.payoffs[t - 1], r1, r2))
    return rows


def trajectory_csv(traj: Trajectory) -> str:
    lines = [",".join(TRAJECTORY_COLUMNS)]
    for row in trajectory_rows(traj):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def trajectory_json_dict(traj: Trajectory) -> dict:
    spec = traj.spec
    cols = list(zip(*trajectory_rows(traj)))
    return {
        "spec": spec.to_json_dict(),
        "policy": traj.policy_name,
        "t": [json_int(v) for v in cols[0]],
        "s": [json_int(v) for v in cols[1]],
        "i": [json_int(v) for v in cols[2]],
        "x1": list(cols[3]),
        "x2": list(cols[4]),
        "action": "".join(cols[5]),
        "payoff": list(cols[6]),
        "R1": list(cols[7]),
        "R2": list(cols[8]),
        "total_payoff": traj.total_payoff(),
        "average_payoff": traj.average_payoff(),
    }


def trajectory_from_json_dict(doc: dict) -> Trajectory:
    """Rebuild a trajectory by replaying the recorded actions.

    The replayed run must agree with every recorded column; a mismatch
    means the file was edited or written by an incompatible build.
    """
    spec = GameSpec.from_json_dict(doc["spec"])
    letters = doc["action"]
    policy = dyn.scripted_policy([dyn._user_action(spec, c) for c in letters])
    traj = dyn.simulate(spec, policy, len(letters),
                        policy_name=doc.get("policy", "script"))
    rows = trajectory_rows(traj)
    for k, key in enumerate(TRAJECTORY_COLUMNS):
        got = [row[k] for row in rows]
        want = list(doc[key]) if key != "action" else list(doc["action"])
        if key in ("t", "s", "i"):
            want = [int(w) for w in want]
        if got != want:
            raise ValueError(f"column {key!r} does not match the replay")
    return traj


def solution_trajectory(spec: GameSpec, sol: OptimalSolution) -> Trajectory:
    policy = dyn.scripted_policy(list(sol.actions))
    return dyn.simulate(spec, policy, len(sol.actions),
                        policy_name=f"optimal-{sol.method}")


def solution_json_dict(spec: GameSpec, sol: OptimalSolution) -> dict:
    doc = {
        "spec": spec.to_json_dict(),
        "method": sol.method,
        "actions": "".join(spec.action_label(a) for a in sol.actions),
        "total": sol.total,
        "average": sol.total / len(sol.actions),
    }
    if sol.root_value is not None:
        doc["root_value"] = sol.root_value
    if sol.n_optima is not None:
        doc["n_optima"] = sol.n_optima
    return doc


def grid_lines(table: ValueTable, spec: GameSpec) -> list[str]:
    """One line per round; character i is the argmax at node (i+1, t)."""
    out = []
    for t in range(1, table.T + 1):
        y = table.y_row(t)
        out.append("".join(spec.action_label(gc.Action(int(b))) for b in y))
    return out


def dumps_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_json(path, doc: dict) -> None:
    write_text(path, dumps_json(doc))
