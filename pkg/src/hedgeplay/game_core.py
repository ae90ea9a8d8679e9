"""Exact 2x2 zero-sum game setup and single-step Hedge kinematics.

The row player X runs Hedge over two actions (rows U, D) while the column
player Y picks L or R each round.  Everything downstream keys off four
payoff differences of the loss matrix A = [[a11, a12], [a21, a22]]:

    delta1 = a11 - a21   (column L, row gap)
    delta2 = a12 - a22   (column R, row gap)
    ldelta1 = a11 - a12  (row U, column gap)
    ldelta2 = a21 - a22  (row D, column gap)

Matrix entries must be exact rationals.  ``validate`` clears denominators
so the working matrix is integral with a recorded scale factor q, and the
learning rate is rescaled to eta/q; the Hedge state then walks an integer
lattice, which keeps every structural question (periodicity, node
identity, tie detection) exact.

For mixed-regime games the matrix is also reoriented into a canonical
form delta1 > 0 > delta2 with |delta1| <= |delta2| (row/column swaps
only; the swaps are recorded so exports can restore the caller's
labels).  In that orientation Y's action R pushes the Hedge state up and
L pushes it down.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import (
    HorizonExceeded,
    IrrationalEntries,
    RegimeMismatch,
    ValidationError,
    ZeroGame,
)


class Action(enum.IntEnum):
    L = 0
    R = 1

    def __str__(self) -> str:
        return self.name

    @classmethod
    def from_char(cls, c: str) -> "Action":
        try:
            return cls[c.upper()]
        except KeyError:
            raise ValueError(f"action must be 'L' or 'R', got {c!r}") from None


class Regime(str, enum.Enum):
    NO_DOMINANT = "NoDominant"
    X_DOMINANT = "XDominant"
    Y_DOMINANT = "YDominant"
    DEGENERATE = "Degenerate"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class State:
    """Hedge state: integer lattice value, round t, diagonal index i.

    i counts R plays so far plus one, so 1 <= i <= t and the node value
    satisfies value = -(t - i) * delta1 - (i - 1) * delta2.
    """

    value: int
    t: int
    i: int


@dataclass(frozen=True)
class MixedStrategy:
    p1: float
    p2: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.p1, self.p2)


@dataclass(frozen=True)
class LossMatrix:
    """Integer matrix n_ij with common scale q: user entry a_ij = n_ij / q."""

    n11: int
    n12: int
    n21: int
    n22: int
    q: int

    def __post_init__(self) -> None:
        if self.q <= 0:
            raise ValidationError("scale factor q must be positive")
        g = math.gcd(self.q, math.gcd(math.gcd(abs(self.n11), abs(self.n12)),
                                      math.gcd(abs(self.n21), abs(self.n22))))
        if g != 1:
            raise ValidationError(f"scaled matrix not in lowest terms (gcd {g})")

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[Fraction]]) -> "LossMatrix":
        f11, f12 = rows[0]
        f21, f22 = rows[1]
        q = math.lcm(f11.denominator, f12.denominator,
                     f21.denominator, f22.denominator)
        n = [int(f * q) for f in (f11, f12, f21, f22)]
        g = math.gcd(q, math.gcd(math.gcd(abs(n[0]), abs(n[1])),
                                 math.gcd(abs(n[2]), abs(n[3]))))
        return cls(n[0] // g, n[1] // g, n[2] // g, n[3] // g, q // g)

    def entries(self) -> list[list[Fraction]]:
        q = self.q
        return [[Fraction(self.n11, q), Fraction(self.n12, q)],
                [Fraction(self.n21, q), Fraction(self.n22, q)]]

    def scaled_rows(self) -> list[list[int]]:
        return [[self.n11, self.n12], [self.n21, self.n22]]


def _parse_entry(x) -> Fraction:
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        raise IrrationalEntries(
            f"float entry {x!r} is a binary approximation; pass the exact "
            f"value as a string like '{x}' or as a Fraction")
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse matrix entry {x!r}: {exc}") from None
    try:
        return Fraction(x.__index__())
    except AttributeError:
        raise ValidationError(f"unsupported matrix entry type {type(x).__name__}") from None


def _classify(d1: int, d2: int, ld1: int, ld2: int) -> Regime:
    if d1 == d2 == ld1 == ld2 == 0:
        raise ZeroGame("all four payoff differences are zero; any play is optimal")
    if d1 * d2 > 0:
        return Regime.X_DOMINANT
    if d1 * d2 < 0 and ld1 * ld2 > 0:
        return Regime.Y_DOMINANT
    if d1 * d2 < 0 and ld1 * ld2 < 0:
        return Regime.NO_DOMINANT
    return Regime.DEGENERATE


def _row_swap(m: list[list[int]]) -> list[list[int]]:
    return [m[1], m[0]]


def _col_swap(m: list[list[int]]) -> list[list[int]]:
    return [[m[0][1], m[0][0]], [m[1][1], m[1][0]]]


def _diffs(m: list[list[int]]) -> tuple[int, int, int, int]:
    (a11, a12), (a21, a22) = m
    return a11 - a21, a12 - a22, a11 - a12, a21 - a22


def _orient(m: list[list[int]], regime: Regime) -> tuple[list[list[int]], bool, bool]:
    """Swap rows/columns into the canonical orientation for the regime."""
    rs = cs = False
    d1, d2, ld1, ld2 = _diffs(m)

    if regime is Regime.NO_DOMINANT:
        if d1 < 0:
            m, rs = _row_swap(m), not rs
        d1, d2, _, _ = _diffs(m)
        if abs(d1) > abs(d2):
            # column swap alone would leave delta1 negative; pairing it
            # with a row swap restores delta1 > 0 > delta2
            m, cs = _col_swap(m), not cs
            m, rs = _row_swap(m), not rs
    elif regime is Regime.X_DOMINANT:
        if d1 < 0:
            m, rs = _row_swap(m), not rs
        _, _, ld1, ld2 = _diffs(m)
        if (ld1 * ld2 > 0 and ld1 > 0) or (ld1 * ld2 < 0 and ld1 < 0) \
                or (ld1 * ld2 == 0 and (ld1 < 0 or ld2 > 0)):
            m, cs = _col_swap(m), not cs
    elif regime is Regime.Y_DOMINANT:
        if ld1 > 0:
            m, cs = _col_swap(m), not cs
        d1, _, _, _ = _diffs(m)
        if d1 < 0:
            m, rs = _row_swap(m), not rs
    # Degenerate games keep the caller's orientation.
    return m, rs, cs


def _game_value(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact value of the zero-sum game (X minimizes, Y maximizes)."""
    (a11, a12), (a21, a22) = rows
    lo = max(min(a11, a21), min(a12, a22))
    hi = min(max(a11, a12), max(a21, a22))
    if lo == hi:
        return lo
    den = a11 + a22 - a12 - a21
    # no saddle point forces delta1, delta2 to straddle zero, so den != 0
    return (a11 * a22 - a12 * a21) / den


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Validated game: canonical integer matrix plus horizon and rate.

    All state values, deltas and thresholds exposed here live in scaled
    units (multiply user quantities by matrix.q).  Payoffs and the game
    value are reported in the caller's original units.
    """

    matrix: LossMatrix          # canonical orientation, integral
    user_matrix: LossMatrix     # caller's orientation, integral
    eta: float                  # user-units learning rate
    T: int
    regime: Regime
    game_value: Fraction        # user units
    row_swapped: bool
    col_swapped: bool
    eta_was_auto: bool = False

    # -- scaled difference shortcuts ------------------------------------
    @cached_property
    def d1(self) -> int:
        return self.matrix.n11 - self.matrix.n21

    @cached_property
    def d2(self) -> int:
        return self.matrix.n12 - self.matrix.n22

    @cached_property
    def ld1(self) -> int:
        return self.matrix.n11 - self.matrix.n12

    @cached_property
    def ld2(self) -> int:
        return self.matrix.n21 - self.matrix.n22

    @cached_property
    def q(self) -> int:
        return self.matrix.q

    @cached_property
    def eta_scaled(self) -> float:
        return self.eta / self.q

    # user-unit exact differences, caller's orientation
    def user_deltas(self) -> dict[str, Fraction]:
        u, q = self.user_matrix, self.user_matrix.q
        return {
            "delta1": Fraction(u.n11 - u.n21, q),
            "delta2": Fraction(u.n12 - u.n22, q),
            "ldelta1": Fraction(u.n11 - u.n12, q),
            "ldelta2": Fraction(u.n21 - u.n22, q),
        }

    # -- node lattice ----------------------------------------------------
    def node_value(self, t: int, i: int) -> int:
        return -(t - i) * self.d1 - (i - 1) * self.d2

    def node(self, t: int, i: int) -> State:
        if not 1 <= i <= t:
            raise ValueError(f"diagonal index i={i} outside 1..{t}")
        return State(self.node_value(t, i), t, i)

    def root(self) -> State:
        return State(0, 1, 1)

    # -- float payoff ingredients ---------------------------------------
    @cached_property
    def _a21u(self) -> float:
        return self.matrix.n21 / self.q

    @cached_property
    def _a22u(self) -> float:
        return self.matrix.n22 / self.q

    @cached_property
    def _d1u(self) -> float:
        return self.d1 / self.q

    @cached_property
    def _d2u(self) -> float:
        return self.d2 / self.q

    def x1_at(self, value: float) -> float:
        return _sigmoid(self.eta_scaled * value)

    # -- label mapping back to the caller's orientation -------------------
    def action_label(self, a: Action) -> str:
        if self.col_swapped:
            return "R" if a is Action.L else "L"
        return str(a)

    def x_pair_user(self, x: MixedStrategy) -> tuple[float, float]:
        return (x.p2, x.p1) if self.row_swapped else (x.p1, x.p2)

    # -- serialization -----------------------------------------------------
    def to_json_dict(self) -> dict:
        vals = self.user_deltas()
        return {
            "matrix": [[str(e) for e in row] for row in self.user_matrix.entries()],
            "eta": "auto" if self.eta_was_auto else self.eta,
            "T": self.T,
            "regime": str(self.regime),
            "delta": {k: str(v) for k, v in vals.items()},
            "game_value": str(self.game_value),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, d: dict) -> "GameSpec":
        spec = validate(d["matrix"], d.get("eta", "auto"), d["T"])
        if "regime" in d and d["regime"] != str(spec.regime):
            raise ValidationError(
                f"stored regime {d['regime']!r} disagrees with recomputed "
                f"{spec.regime}")
        if "game_value" in d and Fraction(d["game_value"]) != spec.game_value:
            raise ValidationError("stored game_value disagrees with recomputed value")
        return spec

    @classmethod
    def from_json(cls, text: str) -> "GameSpec":
        return cls.from_json_dict(json.loads(text))


def _sigmoid(z: float) -> float:
    # stable on both tails; exp underflow to 0.0 here is the right answer
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-min(z, 745.0)))
    e = math.exp(max(z, -745.0))
    return e / (1.0 + e)


def default_eta(T: int) -> float:
    """Learning rate sqrt(8 ln 2 / T), the usual two-action tuning."""
    return math.sqrt(8.0 * math.log(2.0) / T)


def validate(matrix, eta="auto", T: int = 100) -> GameSpec:
    """Build a GameSpec from raw inputs, rejecting anything malformed.

    matrix: 2x2 nested sequence of int / Fraction / rational string.
    eta: positive number, or "auto"/None for sqrt(8 ln 2 / T).
    T: horizon, a positive integer number of rounds.

    Raises ValidationError (or subclasses ZeroGame / IrrationalEntries).
    """
    rows = list(matrix)
    if len(rows) != 2 or any(len(list(r)) != 2 for r in rows):
        raise ValidationError("matrix must be 2x2")
    entries = [[_parse_entry(x) for x in row] for row in rows]

    if not isinstance(T, int) or isinstance(T, bool):
        try:
            T = int(T)
        except (TypeError, ValueError):
            raise ValidationError(f"horizon T must be an integer, got {T!r}") from None
    if T < 1:
        raise ValidationError(f"horizon T must be >= 1, got {T}")

    auto = eta is None or (isinstance(eta, str) and eta.lower() == "auto")
    if auto:
        eta_f = default_eta(T)
    else:
        if isinstance(eta, str):
            try:
                eta_f = float(Fraction(eta))
            except (ValueError, ZeroDivisionError):
                raise ValidationError(f"cannot parse eta {eta!r}") from None
        else:
            eta_f = float(eta)
        if not math.isfinite(eta_f) or eta_f <= 0.0:
            raise ValidationError(f"eta must be a positive finite number, got {eta!r}")

    user = LossMatrix.from_entries(entries)
    scaled = user.scaled_rows()
    regime = _classify(*_diffs(scaled))
    canon_rows, rs, cs = _orient(scaled, regime)
    canon = LossMatrix(canon_rows[0][0], canon_rows[0][1],
                       canon_rows[1][0], canon_rows[1][1], user.q)
    value = _game_value(user.entries())

    spec = GameSpec(matrix=canon, user_matrix=user, eta=eta_f, T=T,
                    regime=regime, game_value=value,
                    row_swapped=rs, col_swapped=cs, eta_was_auto=auto)
    if regime is Regime.NO_DOMINANT:
        assert spec.d1 > 0 > spec.d2 and abs(spec.d1) <= abs(spec.d2)
        assert spec.ld1 > 0 > spec.ld2
    return spec


def hedge_strategy(state, spec: GameSpec) -> MixedStrategy:
    """Hedge's mixed strategy at the given state (or raw scaled value)."""
    v = getattr(state, "value", state)
    p1 = spec.x1_at(v)
    return MixedStrategy(p1, 1.0 - p1)


def payoff(state, y: Action, spec: GameSpec) -> float:
    """Expected loss paid by X this round, in the caller's units.

    Linear in x1 = sigmoid(eta * s): column L costs a21 + delta1 * x1,
    column R costs a22 + delta2 * x1.
    """
    v = getattr(state, "value", state)
    x1 = spec.x1_at(v)
    if y is Action.L:
        return spec._a21u + spec._d1u * x1
    return spec._a22u + spec._d2u * x1


def transition(state: State, y: Action, spec: GameSpec) -> State:
    """Advance the Hedge state one round after Y plays y."""
    if state.t >= spec.T + 1:
        raise HorizonExceeded(f"state at t={state.t} cannot advance past T={spec.T}")
    if y is Action.L:
        return State(state.value - spec.d1, state.t + 1, state.i)
    return State(state.value - spec.d2, state.t + 1, state.i + 1)


class Thresholds(tuple):
    """(s_star, s_zero_star) in scaled state units."""

    __slots__ = ()

    def __new__(cls, s_star: float, s_zero_star: float):
        return super().__new__(cls, (s_star, s_zero_star))

    @property
    def s_star(self) -> float:
        return self[0]

    @property
    def s_zero_star(self) -> float:
        return self[1]


def thresholds(spec: GameSpec) -> Thresholds:
    """Myopic indifference point s* and the one-step lookahead point s0*.

    Only mixed-regime games have both thresholds.  s* solves
    r(s, L) = r(s, R); Y myopically prefers R strictly below it.  s0*
    is where the two depth-two plans LR and RL tie; it always lies in
    ((delta1 + delta2) / 2, 0] and hits 0 exactly when delta1 = -delta2.
    """
    if spec.regime is not Regime.NO_DOMINANT:
        raise RegimeMismatch(
            f"thresholds need a mixed regime, got {spec.regime}")
    eta = spec.eta_scaled
    # ldelta1 = -ldelta2 gives ln(1) = 0: keep that case exact
    if spec.ld1 == -spec.ld2:
        s_star = 0.0
    else:
        s_star = -math.log(-spec.ld1 / spec.ld2) / eta

    e1 = math.expm1(eta * spec.d1)
    e2 = math.expm1(eta * spec.d2)
    f1 = spec.d2 * e1 - spec.d1 * e2
    f2 = spec.d2 * e1 * math.exp(eta * spec.d2) - spec.d1 * e2 * math.exp(eta * spec.d1)
    if spec.d1 == -spec.d2:
        s0 = 0.0
    else:
        s0 = math.log(-f2 / f1) / eta
    return Thresholds(s_star, s0)


def lookahead_gap(spec: GameSpec, value: float) -> float:
    """Two-step plan gap g(s) = total(R then L) - total(L then R) at s.

    Positive means starting with R is strictly better over the next two
    rounds; the root of g is the s0* threshold.
    """
    s = float(value)
    r_then_l = payoff(s, Action.R, spec) + payoff(s - spec.d2, Action.L, spec)
    l_then_r = payoff(s, Action.L, spec) + payoff(s - spec.d1, Action.R, spec)
    return r_then_l - l_then_r


def scaled_threshold_units(spec: GameSpec, scaled: float) -> float:
    """Convert a scaled state quantity back to the caller's units."""
    return scaled / spec.q
