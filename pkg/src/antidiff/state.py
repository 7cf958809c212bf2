"""Grid states for 1-D finite-volume transport.

Two kinds of state share one interface:

* ``periodic``  — exactly M cell averages, indices taken modulo M;
* ``infinite``  — a finite window plus two arithmetic tails.  A tail
  extrapolates outward from the window edge: the cell `m` steps beyond the
  edge has value ``anchor_value + m * step``.  ``step = 0`` is a constant
  tail; the half-infinite staircase has a right tail with ``step = 1``.

Cells have unit width.  On the ``integer`` phase, cell ``j`` is centred at
``j`` and spans ``(j - 1/2, j + 1/2)``; on the ``shifted-left`` phase the
centre sits at ``j - lam``.  The shifted phase only arises from odd steps of
the alternating shifted scheme.

All values are immutable after construction; operations return new states.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .scalars import (
    BINARY64,
    RATIONAL,
    Scalar,
    as_scalar,
    check_mode,
    parse_ratio,
    scalar_from_json,
    scalar_to_json,
    zero,
)

KIND_PERIODIC = "periodic"
KIND_INFINITE = "infinite"

PHASE_INTEGER = "integer"
PHASE_SHIFTED = "shifted-left"


@dataclass(frozen=True)
class TailSpec:
    """Arithmetic continuation beyond one window edge.

    ``anchor_value`` duplicates the edge cell's value; the cell ``m`` steps
    outward holds ``anchor_value + m * step``.
    """

    anchor_value: Scalar
    step: Scalar

    def value_at_distance(self, m: int) -> Scalar:
        return self.anchor_value + m * self.step


@dataclass(frozen=True)
class GridState:
    kind: str
    values: tuple
    window_start: int
    phase: str
    lam: Fraction
    mode: str
    left_tail: Optional[TailSpec] = None
    right_tail: Optional[TailSpec] = None

    def __post_init__(self):
        check_mode(self.mode)
        if self.kind not in (KIND_PERIODIC, KIND_INFINITE):
            raise ValueError(f"unknown state kind {self.kind!r}")
        if self.phase not in (PHASE_INTEGER, PHASE_SHIFTED):
            raise ValueError(f"unknown phase {self.phase!r}")
        if not isinstance(self.lam, Fraction):
            raise TypeError("lam must be an exact Fraction")
        if not 0 < self.lam <= 1:
            raise ValueError(f"lam must lie in (0, 1], got {self.lam}")
        vals = tuple(as_scalar(v, self.mode) for v in self.values)
        if not vals:
            raise ValueError("state window must hold at least one cell")
        object.__setattr__(self, "values", vals)
        if self.kind == KIND_PERIODIC:
            if self.left_tail is not None or self.right_tail is not None:
                raise ValueError("periodic states carry no tails")
        else:
            if self.left_tail is None or self.right_tail is None:
                raise ValueError("infinite states need both tails")
            lt = TailSpec(as_scalar(self.left_tail.anchor_value, self.mode),
                          as_scalar(self.left_tail.step, self.mode))
            rt = TailSpec(as_scalar(self.right_tail.anchor_value, self.mode),
                          as_scalar(self.right_tail.step, self.mode))
            if lt.anchor_value != vals[0]:
                raise ValueError("left tail anchor must equal the first window value")
            if rt.anchor_value != vals[-1]:
                raise ValueError("right tail anchor must equal the last window value")
            object.__setattr__(self, "left_tail", lt)
            object.__setattr__(self, "right_tail", rt)

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------

    @classmethod
    def periodic(cls, values, lam, mode, phase=PHASE_INTEGER, window_start=0):
        return cls(KIND_PERIODIC, tuple(values), window_start, phase,
                   parse_ratio(lam), mode)

    @classmethod
    def infinite(cls, values, lam, mode, left_step=0, right_step=0,
                 window_start=0, phase=PHASE_INTEGER):
        vals = tuple(as_scalar(v, mode) for v in values)
        lt = TailSpec(vals[0], as_scalar(left_step, mode))
        rt = TailSpec(vals[-1], as_scalar(right_step, mode))
        return cls(KIND_INFINITE, vals, window_start, phase, parse_ratio(lam),
                   mode, lt, rt)

    # ------------------------------------------------------------------
    # geometry
    # ------------------------------------------------------------------

    @property
    def cell_count(self) -> int:
        return len(self.values)

    @property
    def window_end(self) -> int:
        return self.window_start + len(self.values) - 1

    @property
    def center_offset(self) -> Scalar:
        """Cell ``j`` is centred at ``j - center_offset``."""
        if self.phase == PHASE_INTEGER:
            return zero(self.mode)
        return as_scalar(self.lam, self.mode)

    def center(self, j: int) -> Scalar:
        return j - self.center_offset + zero(self.mode)

    def cell_bounds(self, j: int):
        c = self.center(j)
        half = Fraction(1, 2) if self.mode == RATIONAL else 0.5
        return c - half, c + half

    def cell_index_at(self, x) -> int:
        """Index of the (half-open) cell containing coordinate ``x``."""
        half = Fraction(1, 2) if self.mode == RATIONAL else 0.5
        return math.floor(x + self.center_offset + half)

    # ------------------------------------------------------------------
    # values
    # ------------------------------------------------------------------

    def cell_value(self, j: int) -> Scalar:
        if self.kind == KIND_PERIODIC:
            return self.values[(j - self.window_start) % len(self.values)]
        if j < self.window_start:
            return self.left_tail.value_at_distance(self.window_start - j)
        if j > self.window_end:
            return self.right_tail.value_at_distance(j - self.window_end)
        return self.values[j - self.window_start]

    def jumps(self) -> "JumpSequence":
        vals = self.values
        diffs = tuple(vals[i + 1] - vals[i] for i in range(len(vals) - 1))
        if self.kind == KIND_PERIODIC:
            wrap = vals[0] - vals[-1]
            return JumpSequence(self.kind, diffs + (wrap,), self.window_start,
                                self.phase, self.lam, self.mode, None, None)
        return JumpSequence(self.kind, diffs, self.window_start, self.phase,
                            self.lam, self.mode,
                            -self.left_tail.step, self.right_tail.step)

    def is_nondecreasing(self) -> bool:
        js = self.jumps()
        if any(d < 0 for d in js.values):
            return False
        if self.kind == KIND_INFINITE:
            return js.left_jump >= 0 and js.right_jump >= 0
        return True

    def total_variation(self):
        """Sum of |jumps|; ``math.inf`` when a tail has nonzero step."""
        js = self.jumps()
        if self.kind == KIND_INFINITE and (js.left_jump != 0 or js.right_jump != 0):
            return math.inf
        total = zero(self.mode)
        for d in js.values:
            total += abs(d)
        return total

    def window_min(self) -> Scalar:
        return min(self.values)

    def window_max(self) -> Scalar:
        return max(self.values)

    # ------------------------------------------------------------------
    # window resizing
    # ------------------------------------------------------------------

    def pad(self, k: int) -> "GridState":
        """Grow the window by ``k`` tail-extrapolated cells per side."""
        if self.kind == KIND_PERIODIC or k <= 0:
            return self
        left = tuple(self.cell_value(self.window_start - m) for m in range(k, 0, -1))
        right = tuple(self.cell_value(self.window_end + m) for m in range(1, k + 1))
        return GridState.infinite(left + self.values + right, self.lam, self.mode,
                                  left_step=self.left_tail.step,
                                  right_step=self.right_tail.step,
                                  window_start=self.window_start - k,
                                  phase=self.phase)

    def trimmed(self) -> "GridState":
        """Smallest window consistent with the tails (keeps >= 1 cell)."""
        if self.kind == KIND_PERIODIC:
            return self
        vals = list(self.values)
        start = self.window_start
        ls, rs = self.left_tail.step, self.right_tail.step
        while len(vals) > 1 and vals[0] == vals[1] + ls:
            vals.pop(0)
            start += 1
        while len(vals) > 1 and vals[-1] == vals[-2] + rs:
            vals.pop()
        return GridState.infinite(vals, self.lam, self.mode, left_step=ls,
                                  right_step=rs, window_start=start,
                                  phase=self.phase)

    # ------------------------------------------------------------------
    # comparison / serialization
    # ------------------------------------------------------------------

    def same_state(self, other: "GridState", tol=None) -> bool:
        """Equality as a function of the cell index (not of the window layout).

        ``tol`` is an absolute componentwise tolerance for binary64 states;
        rational states compare exactly.
        """
        if (self.kind != other.kind or self.phase != other.phase
                or self.mode != other.mode or self.lam != other.lam):
            return False

        def close(a, b):
            if tol is None:
                return a == b
            return abs(a - b) <= tol

        if self.kind == KIND_PERIODIC:
            if len(self.values) != len(other.values):
                return False
            return all(close(self.cell_value(j), other.cell_value(j))
                       for j in range(len(self.values)))
        if not close(self.left_tail.step, other.left_tail.step):
            return False
        if not close(self.right_tail.step, other.right_tail.step):
            return False
        lo = min(self.window_start, other.window_start) - 1
        hi = max(self.window_end, other.window_end) + 1
        return all(close(self.cell_value(j), other.cell_value(j))
                   for j in range(lo, hi + 1))

    def to_json_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "lambda": str(self.lam),
            "phase": self.phase,
            "window_start": self.window_start,
            "values": [scalar_to_json(v) for v in self.values],
        }
        if self.kind == KIND_INFINITE:
            out["left_tail"] = {"anchor_value": scalar_to_json(self.left_tail.anchor_value),
                                "step": scalar_to_json(self.left_tail.step)}
            out["right_tail"] = {"anchor_value": scalar_to_json(self.right_tail.anchor_value),
                                 "step": scalar_to_json(self.right_tail.step)}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, raw: dict) -> "GridState":
        values = [scalar_from_json(v) for v in raw["values"]]
        mode = RATIONAL if any(isinstance(v, Fraction) for v in values) else BINARY64
        values = [as_scalar(v, mode) if not isinstance(v, Fraction) else v
                  for v in values]
        lam = Fraction(raw["lambda"])
        kind = raw["kind"]
        if kind == KIND_PERIODIC:
            return cls.periodic(values, lam, mode, phase=raw["phase"],
                                window_start=raw["window_start"])
        lt = raw["left_tail"]
        rt = raw["right_tail"]
        return cls.infinite(values, lam, mode,
                            left_step=as_scalar(scalar_from_json(lt["step"]), mode),
                            right_step=as_scalar(scalar_from_json(rt["step"]), mode),
                            window_start=raw["window_start"], phase=raw["phase"])

    @classmethod
    def from_json(cls, text: str) -> "GridState":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class JumpSequence:
    """Consecutive differences of a state, jump ``k`` = value(k+1) - value(k).

    The raw index ``k`` names the interface between cells ``k`` and ``k+1``
    in the state's own indexing; ``interface_position`` converts it to the
    physical coordinate (``k + 1/2`` on the integer phase, ``k + 1/2 - lam``
    on the shifted phase).  Periodic sequences hold M cyclic jumps; infinite
    ones expose the constant tail jumps explicitly.
    """

    kind: str
    values: tuple
    start: int
    phase: str
    lam: Fraction
    mode: str
    left_jump: Optional[Scalar]
    right_jump: Optional[Scalar]

    def value_at(self, k: int) -> Scalar:
        if self.kind == KIND_PERIODIC:
            return self.values[(k - self.start) % len(self.values)]
        if k < self.start:
            return self.left_jump
        if k >= self.start + len(self.values):
            return self.right_jump
        return self.values[k - self.start]

    def interface_position(self, k: int) -> Scalar:
        half = Fraction(1, 2) if self.mode == RATIONAL else 0.5
        off = zero(self.mode) if self.phase == PHASE_INTEGER else as_scalar(self.lam, self.mode)
        return k + half - off

    def window_indices(self):
        return range(self.start, self.start + len(self.values))

    def first_nonzero(self) -> Optional[int]:
        """Leftmost nonzero jump index (infinite kind, zero left tail jumps)."""
        if self.kind != KIND_INFINITE or self.left_jump != 0:
            return None
        for k in self.window_indices():
            if self.value_at(k) != 0:
                return k
        return None

    def last_nonzero(self) -> Optional[int]:
        if self.kind != KIND_INFINITE or self.right_jump != 0:
            return None
        for k in reversed(self.window_indices()):
            if self.value_at(k) != 0:
                return k
        return None


def monotone_decomposition(state: GridState):
    """Split a state into a nondecreasing and a nonincreasing part.

    Positive jumps go to ``v``, nonpositive jumps to ``w``; both are pinned
    to 0 at the window's first cell, so ``u = v + w + u(anchor)`` cellwise.
    Defined for infinite states (the construction runs over all of Z).
    """
    if state.kind != KIND_INFINITE:
        raise ValueError("monotone decomposition needs an infinite state")
    zero_v = zero(state.mode)
    v_vals = [zero_v]
    w_vals = [zero_v]
    for i in range(len(state.values) - 1):
        d = state.values[i + 1] - state.values[i]
        if d > 0:
            v_vals.append(v_vals[-1] + d)
            w_vals.append(w_vals[-1])
        else:
            v_vals.append(v_vals[-1])
            w_vals.append(w_vals[-1] + d)
    lj = -state.left_tail.step     # jump value throughout the left tail
    rj = state.right_tail.step
    v = GridState.infinite(v_vals, state.lam, state.mode,
                           left_step=state.left_tail.step if lj > 0 else zero_v,
                           right_step=rj if rj > 0 else zero_v,
                           window_start=state.window_start, phase=state.phase)
    w = GridState.infinite(w_vals, state.lam, state.mode,
                           left_step=state.left_tail.step if lj <= 0 else zero_v,
                           right_step=rj if rj <= 0 else zero_v,
                           window_start=state.window_start, phase=state.phase)
    return v, w
