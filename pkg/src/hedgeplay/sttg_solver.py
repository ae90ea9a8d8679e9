"""Exact finite-horizon optimization for the opponent of a Hedge learner.

The reachable states form a triangular lattice (round t has t nodes, one
per count of R plays so far).  backward_induction computes, row by row
and fully vectorized, the Bellman value and argmax action of every node;
extract_path walks the stored argmax bits forward.  brute_force
enumerates every action string for small horizons and is the oracle the
DP is tested against.  local_longest_path solves the same maximization
restricted to a short corridor between two lattice nodes.

Ties are broken toward L everywhere (R needs a strictly larger
continuation), which makes the DP string the lexicographically smallest
optimum and lets the exhaustive search reproduce it exactly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotAccessible, ResourceLimit, DomainError
from .game_core import Action, GameSpec, State
from . import game_core as gc

DP_CAP_ENV = "HEDGEPLAY_DP_CAP"
DP_CAP_DEFAULT = 20000
BRUTE_CAP = 22
_CHUNK = 1 << 20


def dp_cap() -> int:
    return int(os.environ.get(DP_CAP_ENV, DP_CAP_DEFAULT))


def row_values(spec: GameSpec, t: int) -> np.ndarray:
    """Scaled lattice values of row t, index i = 1..t, as int64."""
    i = np.arange(1, t + 1, dtype=np.int64)
    return -(t - i) * spec.d1 - (i - 1) * spec.d2


def x1_of_values(spec: GameSpec, values: np.ndarray) -> np.ndarray:
    """Hedge first-row probability, overflow-free on both tails."""
    z = spec.eta_scaled * values.astype(np.float64)
    e = np.exp(-np.abs(z))
    return np.where(z >= 0.0, 1.0 / (1.0 + e), e / (1.0 + e))


def row_payoffs(spec: GameSpec, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-node one-round losses (user units) for Y playing L and R.

    Shared by the full DP and the planner's corridor DP so both see
    bit-identical floats.
    """
    x1 = x1_of_values(spec, values)
    rl = spec._a21u + spec._d1u * x1
    rr = spec._a22u + spec._d2u * x1
    return rl, rr


@dataclass
class ValueTable:
    """Backward-induction output: argmax bits per row, packed."""

    spec: GameSpec
    root_value: float
    ybits: list[np.ndarray]           # ybits[t-1] packs row t (1 = R)
    tie_count: int
    f_rows: Optional[list[np.ndarray]] = None
    x1_override: Optional[float] = None

    def y_row(self, t: int) -> np.ndarray:
        if not 1 <= t <= len(self.ybits):
            raise ValueError(f"row {t} outside 1..{len(self.ybits)}")
        return np.unpackbits(self.ybits[t - 1], count=t).astype(bool)

    def y_star(self, t: int, i: int) -> Action:
        if not 1 <= i <= t:
            raise ValueError(f"index i={i} outside 1..{t}")
        byte, bit = divmod(i - 1, 8)
        return Action.R if (self.ybits[t - 1][byte] >> (7 - bit)) & 1 else Action.L

    def f_star(self, t: int, i: int) -> float:
        if self.f_rows is None:
            raise ValueError("values were not kept; rerun with keep_values=True")
        return float(self.f_rows[t - 1][i - 1])

    @property
    def T(self) -> int:
        return len(self.ybits)


@dataclass
class OptimalSolution:
    actions: list[Action]
    states: list[State]
    total: float
    method: str
    root_value: Optional[float] = None
    n_optima: Optional[int] = None

    def actions_str(self) -> str:
        return "".join(str(a) for a in self.actions)


def backward_induction(spec: GameSpec, keep_values: bool = False,
                       x1_override: Optional[float] = None) -> ValueTable:
    """Solve the full horizon by backward induction over lattice rows.

    x1_override replaces Hedge's round-1 mixture (the root payoff only);
    later rounds still respond to the accumulated state.  Memory is one
    packed bit per node plus, with keep_values, one float per node.
    """
    T = spec.T
    cap = dp_cap()
    if T > cap:
        raise ResourceLimit(
            f"T={T} exceeds the DP cap {cap}; raise {DP_CAP_ENV} to override")
    ybits: list[np.ndarray] = [np.empty(0, dtype=np.uint8)] * T
    f_rows: Optional[list[np.ndarray]] = [None] * T if keep_values else None  # type: ignore[list-item]
    fnext = np.zeros(T + 1, dtype=np.float64)
    ties = 0
    for t in range(T, 0, -1):
        vals = row_values(spec, t)
        rl, rr = row_payoffs(spec, vals)
        if t == 1 and x1_override is not None:
            x1 = float(x1_override)
            rl = np.array([spec._a21u + spec._d1u * x1])
            rr = np.array([spec._a22u + spec._d2u * x1])
        vl = rl + fnext[:t]
        vr = rr + fnext[1:t + 1]
        y = vr > vl
        ties += int(np.count_nonzero(vr == vl))
        fnext = np.where(y, vr, vl)
        ybits[t - 1] = np.packbits(y)
        if f_rows is not None:
            f_rows[t - 1] = fnext.copy()
    return ValueTable(spec=spec, root_value=float(fnext[0]), ybits=ybits,
                      tie_count=ties, f_rows=f_rows, x1_override=x1_override)


def extract_path(table: ValueTable) -> OptimalSolution:
    """Forward walk through the stored argmax bits."""
    spec = table.spec
    s = spec.root()
    states = [s]
    actions: list[Action] = []
    total = 0.0
    for t in range(1, table.T + 1):
        a = table.y_star(t, s.i)
        if t == 1 and table.x1_override is not None:
            x1 = float(table.x1_override)
            total += (spec._a21u + spec._d1u * x1) if a is Action.L \
                else (spec._a22u + spec._d2u * x1)
        else:
            total += gc.payoff(s, a, spec)
        actions.append(a)
        s = gc.transition(s, a, spec)
        states.append(s)
    return OptimalSolution(actions=actions, states=states, total=total,
                           method="dp", root_value=table.root_value)


def brute_force(spec: GameSpec, T_small: Optional[int] = None) -> OptimalSolution:
    """Enumerate all 2^T action strings; the argmax of record.

    The first action is the most significant code bit, so the first
    maximizing code is also the lexicographically smallest optimal
    string (L < R), matching the DP's tie convention.  n_optima counts
    strings within 1e-9 of the maximum.
    """
    T = spec.T if T_small is None else int(T_small)
    if T > BRUTE_CAP:
        raise ResourceLimit(f"T={T} exceeds the exhaustive-search cap {BRUTE_CAP}")
    if T < 1:
        raise DomainError(f"need T >= 1, got {T}")
    n = 1 << T
    shifts = np.arange(T - 1, -1, -1, dtype=np.uint64)

    def totals_for(codes: np.ndarray) -> np.ndarray:
        bits = (codes[:, None] >> shifts) & 1
        v = np.zeros(codes.shape[0], dtype=np.float64)
        tot = np.zeros(codes.shape[0], dtype=np.float64)
        for t in range(T):
            rl, rr = row_payoffs(spec, v)
            b = bits[:, t].astype(bool)
            tot += np.where(b, rr, rl)
            v = v - np.where(b, spec.d2, spec.d1)
        return tot

    best = -np.inf
    best_code = 0
    for lo in range(0, n, _CHUNK):
        codes = np.arange(lo, min(lo + _CHUNK, n), dtype=np.uint64)
        tot = totals_for(codes)
        k = int(np.argmax(tot))
        if tot[k] > best:
            best = float(tot[k])
            best_code = lo + k
    n_opt = 0
    for lo in range(0, n, _CHUNK):
        codes = np.arange(lo, min(lo + _CHUNK, n), dtype=np.uint64)
        n_opt += int(np.count_nonzero(totals_for(codes) >= best - 1e-9))

    actions = [Action.R if (best_code >> (T - 1 - t)) & 1 else Action.L
               for t in range(T)]
    s = spec.root()
    states = [s]
    total = 0.0
    for a in actions:
        total += gc.payoff(s, a, spec)
        s = gc.transition(s, a, spec)
        states.append(s)
    return OptimalSolution(actions=actions, states=states, total=total,
                           method="brute", n_optima=n_opt)


LOCAL_WINDOW_CAP = 64


def local_longest_path(spec: GameSpec, start: State, end_value: int,
                       end_time: int) -> tuple[list[Action], float]:
    """Maximize total loss over paths from start to the node with the
    given scaled value at end_time.  Corridor length is capped at 64.

    Raises NotAccessible when no L/R mix connects the two nodes.
    """
    w = end_time - start.t
    if w < 1:
        raise DomainError(f"end_time {end_time} must exceed start round {start.t}")
    if w > LOCAL_WINDOW_CAP:
        raise DomainError(f"corridor of {w} rounds exceeds cap {LOCAL_WINDOW_CAP}")
    num = end_value - start.value + w * spec.d1
    den = spec.d1 - spec.d2
    nr, rem = divmod(num, den)
    if rem != 0 or not 0 <= nr <= w:
        raise NotAccessible(
            f"no path of {w} steps from value {start.value} to {end_value}: "
            f"needs {num}/{den} R-steps")
    nl = w - nr

    NEG = -np.inf
    g = np.full((w + 1, nr + 1), NEG)
    g[0][0] = 0.0
    came_r = np.zeros((w + 1, nr + 1), dtype=bool)
    for k in range(1, w + 1):
        for j in range(max(0, k - nl), min(k, nr) + 1):
            v_prev_l = start.value - (k - 1 - j) * spec.d1 - j * spec.d2
            cand_l = NEG
            if j <= k - 1 and g[k - 1][j] > NEG:
                cand_l = g[k - 1][j] + gc.payoff(v_prev_l, Action.L, spec)
            cand_r = NEG
            if j >= 1 and g[k - 1][j - 1] > NEG:
                v_prev_r = start.value - (k - j) * spec.d1 - (j - 1) * spec.d2
                cand_r = g[k - 1][j - 1] + gc.payoff(v_prev_r, Action.R, spec)
            if cand_r > cand_l:
                g[k][j] = cand_r
                came_r[k][j] = True
            else:
                g[k][j] = cand_l
    total = float(g[w][nr])
    actions: list[Action] = []
    j = nr
    for k in range(w, 0, -1):
        if came_r[k][j]:
            actions.append(Action.R)
            j -= 1
        else:
            actions.append(Action.L)
    actions.reverse()
    return actions, total
