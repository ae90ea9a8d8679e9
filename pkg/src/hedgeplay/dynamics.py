"""Round-by-round play: policies, trajectories, periodicity helpers.

A trajectory records the Hedge state walk together with the opponent's
actions, the per-round expected losses (caller's units), and both pure
regrets.  The difference regret(U) - regret(D) always equals the scaled
state divided by q, which ties the bookkeeping here back to the lattice
in game_core.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from . import game_core as gc
from .errors import (
    DomainError,
    HorizonExceeded,
    NoPeriodFound,
    PolicyFault,
    RegimeMismatch,
    TieWarning,
)
from .game_core import Action, GameSpec, MixedStrategy, Regime, State

Policy = Callable[[State, int], Action]

TIE_TOL = 1e-9


@dataclass
class Trajectory:
    spec: GameSpec
    states: list[State]
    strategies: list[MixedStrategy]
    actions: list[Action]
    payoffs: list[float]
    regret1: list[float]
    regret2: list[float]
    policy_name: str = "custom"

    def __len__(self) -> int:
        return len(self.actions)

    def actions_str(self) -> str:
        return "".join(str(a) for a in self.actions)

    def values(self) -> list[int]:
        return [s.value for s in self.states]

    def total_payoff(self) -> float:
        return float(sum(self.payoffs))

    def average_payoff(self) -> float:
        return self.total_payoff() / len(self.payoffs)

    def cycle_average(self, t0: int, period: int) -> float:
        """Mean per-round loss over rounds t0 .. t0 + period - 1 (1-based)."""
        chunk = self.payoffs[t0 - 1: t0 - 1 + period]
        if len(chunk) != period:
            raise ValueError("cycle window extends past the trajectory")
        return float(sum(chunk)) / period


def mbr(state, spec: GameSpec) -> Action:
    """Myopic best response for Y: R strictly below s*, else L.

    Emits TieWarning when the state sits within 1e-9 of s* and the
    threshold is not the exact-zero case handled by integer comparison.
    """
    if spec.regime is not Regime.NO_DOMINANT:
        raise RegimeMismatch(f"myopic threshold needs a mixed regime, got {spec.regime}")
    s_star = gc.thresholds(spec).s_star
    v = getattr(state, "value", state)
    if s_star != 0.0 and abs(v - s_star) <= TIE_TOL:
        warnings.warn(TieWarning(
            f"state {v} within {TIE_TOL} of myopic threshold {s_star}; "
            f"convention plays {'R' if v < s_star else 'L'}"))
    return Action.R if v < s_star else Action.L


def mbr_policy(spec: GameSpec) -> Policy:
    return lambda state, t: mbr(state, spec)


def zero_policy() -> Policy:
    return lambda state, t: Action.R if state.value < 0 else Action.L


def const_policy(a: Action) -> Policy:
    return lambda state, t: a


def scripted_policy(actions: Sequence[Action]) -> Policy:
    seq = list(actions)

    def play(state: State, t: int) -> Action:
        if t > len(seq):
            raise PolicyFault(f"script has {len(seq)} actions, round {t} requested")
        return seq[t - 1]

    return play


def stage_nash_mix(spec: GameSpec) -> tuple[Fraction, Fraction]:
    """Y's maximin mixed strategy (canonical orientation), exact."""
    (a11, a12), (a21, a22) = spec.matrix.entries()
    best: tuple[Fraction, tuple[Fraction, Fraction]] | None = None
    candidates: list[tuple[Fraction, Fraction]] = [(Fraction(1), Fraction(0)),
                                                   (Fraction(0), Fraction(1))]
    den = (a11 - a12) - (a21 - a22)
    if den != 0:
        y1 = (a22 - a12) / den
        if 0 <= y1 <= 1:
            candidates.append((y1, 1 - y1))
    for y1, y2 in candidates:
        guarantee = min(y1 * a11 + y2 * a12, y1 * a21 + y2 * a22)
        if best is None or guarantee > best[0]:
            best = (guarantee, (y1, y2))
    assert best is not None
    return best[1]


def stage_nash_policy(spec: GameSpec, seed: Optional[int] = None) -> Policy:
    y1, _ = stage_nash_mix(spec)
    p = float(y1)
    rng = np.random.default_rng(seed)

    def play(state: State, t: int) -> Action:
        return Action.L if rng.random() < p else Action.R

    return play


def make_policy(name: str, spec: GameSpec, seed: Optional[int] = None) -> Policy:
    """Resolve a policy by name: mbr, zero, const-L, const-R, stage-nash,
    script:<path>.  Script files hold L/R letters in the caller's column
    labels; whitespace is ignored."""
    if name == "mbr":
        return mbr_policy(spec)
    if name == "zero":
        return zero_policy()
    if name == "const-L":
        return const_policy(_user_action(spec, "L"))
    if name == "const-R":
        return const_policy(_user_action(spec, "R"))
    if name == "stage-nash":
        return stage_nash_policy(spec, seed)
    if name.startswith("script:"):
        path = name[len("script:"):]
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        letters = [c for c in text if not c.isspace()]
        return scripted_policy([_user_action(spec, c) for c in letters])
    raise PolicyFault(f"unknown policy {name!r}")


def _user_action(spec: GameSpec, letter: str) -> Action:
    a = Action.from_char(letter)
    if spec.col_swapped:
        return Action.R if a is Action.L else Action.L
    return a


def simulate(spec: GameSpec, policy: Policy, length: Optional[int] = None,
             policy_name: str = "custom") -> Trajectory:
    """Run the Hedge learner against a policy for `length` rounds.

    length defaults to the game horizon and may not exceed it.
    """
    n = spec.T if length is None else int(length)
    if n < 1:
        raise DomainError(f"simulation length must be >= 1, got {n}")
    if n > spec.T:
        raise HorizonExceeded(f"length {n} exceeds horizon T={spec.T}")

    a11u = spec._a21u + spec._d1u
    a12u = spec._a22u + spec._d2u
    pure = {Action.L: (a11u, spec._a21u), Action.R: (a12u, spec._a22u)}

    s = spec.root()
    states = [s]
    strategies = [gc.hedge_strategy(s, spec)]
    actions: list[Action] = []
    payoffs: list[float] = []
    r1 = [0.0]
    r2 = [0.0]
    for t in range(1, n + 1):
        a = policy(s, t)
        if not isinstance(a, Action):
            raise PolicyFault(f"policy returned {a!r} at round {t}, expected Action")
        pay = gc.payoff(s, a, spec)
        loss_u, loss_d = pure[a]
        actions.append(a)
        payoffs.append(pay)
        r1.append(r1[-1] + pay - loss_u)
        r2.append(r2[-1] + pay - loss_d)
        s = gc.transition(s, a, spec)
        states.append(s)
        strategies.append(gc.hedge_strategy(s, spec))
    return Trajectory(spec, states, strategies, actions, payoffs, r1, r2,
                      policy_name=policy_name)


def myopic_path(spec: GameSpec, length: Optional[int] = None) -> Trajectory:
    return simulate(spec, mbr_policy(spec), length, policy_name="mbr")


# -- the zero path -------------------------------------------------------

@lru_cache(maxsize=None)
def _zero_cycle(d1: int, d2: int) -> tuple[tuple[int, ...], str, tuple[int, ...]]:
    """One period of the threshold-0 walk started at 0.

    Returns (values at t = 1..T*, action word, cumulative R count after
    each step).  The walk provably returns to 0 after exactly T* steps;
    the assert documents that this is relied on, not hoped for.
    """
    m = math.lcm(abs(d1), abs(d2))
    period = m // abs(d1) + m // abs(d2)
    v = 0
    vals: list[int] = []
    word: list[str] = []
    rcount: list[int] = []
    r = 0
    for _ in range(period):
        vals.append(v)
        if v < 0:
            word.append("R")
            r += 1
            v -= d2
        else:
            word.append("L")
            v -= d1
        rcount.append(r)
    assert v == 0, "threshold-0 walk failed to close up"
    return tuple(vals), "".join(word), tuple(rcount)


def t_star(spec: GameSpec) -> int:
    """Least period of the threshold-0 walk: m/|d1| + m/|d2|, m = lcm."""
    if spec.regime is not Regime.NO_DOMINANT:
        raise RegimeMismatch(f"period formula needs a mixed regime, got {spec.regime}")
    m = math.lcm(abs(spec.d1), abs(spec.d2))
    return m // abs(spec.d1) + m // abs(spec.d2)


def zero_state_at(spec: GameSpec, t: int) -> int:
    """Scaled state of the zero path at round t >= 1."""
    vals, _, _ = _zero_cycle(spec.d1, spec.d2)
    return vals[(t - 1) % len(vals)]


def zero_index_at(spec: GameSpec, t: int) -> int:
    """Diagonal index i of the zero path node at round t."""
    vals, _, rcount = _zero_cycle(spec.d1, spec.d2)
    period = len(vals)
    full, rem = divmod(t - 1, period)
    prior_r = rcount[rem - 1] if rem else 0
    return 1 + full * rcount[-1] + prior_r


def zero_word(spec: GameSpec) -> str:
    if spec.regime is not Regime.NO_DOMINANT:
        raise RegimeMismatch(f"zero path needs a mixed regime, got {spec.regime}")
    return _zero_cycle(spec.d1, spec.d2)[1]


def zero_path(spec: GameSpec, length: Optional[int] = None) -> Trajectory:
    """Trajectory of the threshold-0 policy, built from its closed form.

    Unlike simulate() this may run past the horizon: the walk is periodic
    from round 1 so longer windows are often wanted for inspection.
    """
    if spec.regime is not Regime.NO_DOMINANT:
        raise RegimeMismatch(f"zero path needs a mixed regime, got {spec.regime}")
    n = spec.T if length is None else int(length)
    if n < 1:
        raise DomainError(f"length must be >= 1, got {n}")
    vals, word, _ = _zero_cycle(spec.d1, spec.d2)
    period = len(vals)

    a11u = spec._a21u + spec._d1u
    a12u = spec._a22u + spec._d2u
    pure = {Action.L: (a11u, spec._a21u), Action.R: (a12u, spec._a22u)}

    states = [spec.root()]
    strategies = [gc.hedge_strategy(states[0], spec)]
    actions: list[Action] = []
    payoffs: list[float] = []
    r1 = [0.0]
    r2 = [0.0]
    for t in range(1, n + 1):
        a = Action.from_char(word[(t - 1) % period])
        pay = gc.payoff(states[-1], a, spec)
        loss_u, loss_d = pure[a]
        actions.append(a)
        payoffs.append(pay)
        r1.append(r1[-1] + pay - loss_u)
        r2.append(r2[-1] + pay - loss_d)
        states.append(State(zero_state_at(spec, t + 1), t + 1, zero_index_at(spec, t + 1)))
        strategies.append(gc.hedge_strategy(states[-1], spec))
    return Trajectory(spec, states, strategies, actions, payoffs, r1, r2,
                      policy_name="zero")


# -- period detection ----------------------------------------------------

@dataclass(frozen=True)
class PeriodReport:
    preperiod: int          # number of leading rounds before the cycle (0-based)
    period: int
    cycle: tuple
    certified: bool

    def to_json_dict(self) -> dict:
        cyc = [x.item() if isinstance(x, np.generic) else x for x in self.cycle]
        return {"preperiod": self.preperiod, "period": self.period,
                "cycle": cyc, "certified": self.certified}


def detect_period(seq: Sequence) -> PeriodReport:
    """Find the lexicographically least (preperiod, period) of a sequence.

    Certification requires the periodic tail to cover at least two full
    periods; anything weaker raises NoPeriodFound.  Comparison is exact
    (integers, strings, or floats compared bitwise).
    """
    arr = np.asarray(list(seq))
    n = arr.shape[0]
    if n < 2:
        raise NoPeriodFound(f"sequence of length {n} cannot certify any period")
    best: tuple[int, int] | None = None
    for p in range(1, n // 2 + 1):
        # object arrays (e.g. Fractions) need the explicit bool cast
        eq = np.asarray(arr[p:] == arr[:-p], dtype=bool)
        bad = np.flatnonzero(~eq)
        ts = int(bad[-1]) + 1 if bad.size else 0
        if n - ts >= 2 * p:
            if best is None or (ts, p) < best:
                best = (ts, p)
            if ts == 0:
                break  # (0, p) cannot be beaten by any larger p
    if best is None:
        raise NoPeriodFound("no period with two full repetitions in the window")
    ts, p = best
    for d in range(1, p):
        if p % d == 0:
            sub = np.asarray(arr[ts + d:] == arr[ts: -d], dtype=bool)
            assert not bool(np.all(sub)), "divisor period missed by the scan"
    cycle = tuple(arr[ts: ts + p].tolist())
    return PeriodReport(preperiod=ts, period=p, cycle=cycle, certified=True)


# -- banded affine recursion ----------------------------------------------

def gamma_sequence(p, q, lam, gamma1, n: int) -> list:
    """Iterate gamma' = gamma + q shifted by the unique multiple of p that
    lands in [lam - p, lam).  Exact when the inputs are exact rationals.

    Requires p > 0, n >= 1, and gamma1 already inside the band.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    exact = all(isinstance(v, (int, Fraction)) for v in (p, q, lam, gamma1))
    if not exact:
        p, q, lam, gamma1 = float(p), float(q), float(lam), float(gamma1)
    if p <= 0:
        raise DomainError(f"band width p must be positive, got {p}")
    if not (lam - p <= gamma1 < lam):
        raise DomainError(f"gamma1={gamma1} outside band [{lam - p}, {lam})")
    out = [gamma1]
    g = gamma1
    for _ in range(n - 1):
        nxt = g + q
        k = math.floor((lam - nxt) / p)
        g = nxt + k * p
        if g >= lam:       # float floor can land one band too high
            g -= p
        elif g < lam - p:
            g += p
        out.append(g)
    return out
