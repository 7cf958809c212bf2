"""Time steppers: upwind, Lax-Wendroff, and the two discontinuous-
reconstruction schemes (fixed grid, and alternating shifted grid).

The reconstruction replaces the constant value of cell ``j`` by a two-valued
step using the neighbours, placed so the cell keeps its mass:

* ``from-right``: distance ``d`` is measured from the right interface,
  ``d = (u_j - u_{j-1}) / (u_{j+1} - u_{j-1})``;
* ``from-left``:  distance from the left interface,
  ``d = (u_{j+1} - u_j) / (u_{j+1} - u_{j-1})``.

When the ratio is undefined or falls outside the open interval (0, 1) the
cell keeps its constant value and the stored distance is the sentinel -1.

The fixed-grid scheme reconstructs from-left, translates by ``lam`` and
re-averages on the same cells.  The shifted scheme alternates: integer phase
reconstructs from-right and shifts the grid left by ``lam``; the shifted
phase reconstructs from-left and shifts back right, so two consecutive steps
return to the integer grid.  ``lam <= 1/2`` is required for the alternating
scheme so the shifted cells retile the line.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .scalars import RATIONAL, Scalar, as_scalar, scalar_to_json, zero
from .state import (
    GridState,
    KIND_INFINITE,
    KIND_PERIODIC,
    PHASE_INTEGER,
    PHASE_SHIFTED,
    TailSpec,
)

UPWIND = "upwind"
LAX_WENDROFF = "lax_wendroff"
DL_FIXED = "dl_fixed"
DL_SHIFTED = "dl_shifted"

SCHEME_KINDS = (UPWIND, LAX_WENDROFF, DL_FIXED, DL_SHIFTED)

FROM_LEFT = "from-left"
FROM_RIGHT = "from-right"


@dataclass(frozen=True)
class SchemeParams:
    kind: str
    lam: Fraction

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme {self.kind!r}")
        object.__setattr__(self, "lam", Fraction(self.lam))
        if not 0 < self.lam <= 1:
            raise ValueError(f"lam must lie in (0, 1], got {self.lam}")
        if self.kind == DL_SHIFTED and self.lam > Fraction(1, 2):
            raise ValueError("the alternating shifted scheme needs lam <= 1/2")


@dataclass(frozen=True)
class CellReconstruction:
    left_value: Scalar
    right_value: Scalar
    d: Scalar          # sentinel -1 when the cell stays constant


def _reconstruct_cell(state: GridState, j: int, convention: str) -> CellReconstruction:
    um = state.cell_value(j - 1)
    u0 = state.cell_value(j)
    up = state.cell_value(j + 1)
    den = up - um
    sentinel = as_scalar(-1, state.mode)
    if den == 0:
        return CellReconstruction(u0, u0, sentinel)
    if convention == FROM_RIGHT:
        d = (u0 - um) / den
    elif convention == FROM_LEFT:
        d = (up - u0) / den
    else:
        raise ValueError(f"unknown convention {convention!r}")
    if not 0 < d < 1:
        return CellReconstruction(u0, u0, sentinel)
    return CellReconstruction(um, up, d)


@dataclass(frozen=True)
class ReconstructionProfile:
    """Per-cell reconstruction of one state under one placement convention.

    Window cells are precomputed; any other cell is reconstructed on demand
    from the state's tail extrapolation, so integration over arbitrary ranges
    stays consistent with the bi-infinite picture.
    """

    state: GridState
    convention: str
    cells: tuple

    def cell(self, j: int) -> CellReconstruction:
        s = self.state
        if s.kind == KIND_PERIODIC:
            return self.cells[(j - s.window_start) % len(self.cells)]
        if s.window_start <= j <= s.window_end:
            return self.cells[j - s.window_start]
        return _reconstruct_cell(s, j, self.convention)

    def discontinuity_position(self, j: int):
        lo, hi = self.state.cell_bounds(j)
        rec = self.cell(j)
        if rec.d == -1:
            return None
        if self.convention == FROM_RIGHT:
            return hi - rec.d
        return lo + rec.d

    def to_json_list(self) -> list:
        out = []
        for j in range(self.state.window_start, self.state.window_end + 1):
            rec = self.cell(j)
            out.append({"j": j, "left": scalar_to_json(rec.left_value),
                        "right": scalar_to_json(rec.right_value),
                        "d": scalar_to_json(rec.d),
                        "convention": self.convention})
        return out


def reconstruct(state: GridState, convention: str) -> ReconstructionProfile:
    cells = tuple(_reconstruct_cell(state, j, convention)
                  for j in range(state.window_start, state.window_end + 1))
    return ReconstructionProfile(state, convention, cells)


def integrate_reconstruction(profile: ReconstructionProfile, a, b) -> Scalar:
    """Exact integral of the reconstructed step function over ``[a, b]``."""
    if b < a:
        raise ValueError("integration needs a <= b")
    s = profile.state
    total = zero(s.mode)
    x = a
    j = s.cell_index_at(a)
    while x < b:
        lo, hi = s.cell_bounds(j)
        upper = min(hi, b)
        rec = profile.cell(j)
        if rec.d == -1:
            total += rec.left_value * (upper - x)
        else:
            disc = profile.discontinuity_position(j)
            left_len = max(zero(s.mode), min(disc, upper) - x)
            total += rec.left_value * left_len
            total += rec.right_value * ((upper - x) - left_len)
        x = upper
        j += 1
    return total


def half_cell_integrals(a: Scalar, b: Scalar, c: Scalar):
    """Half-cell masses of the from-right reconstruction of a monotone
    3-stencil ``a <= b <= c`` (middle cell, left half then right half).

    Closed forms: ``(b - c/2, c/2)`` when the left jump dominates,
    ``(a/2, b - a/2)`` when the right jump does; both obey
    ``a/2 <= left <= b/2`` and ``b/2 <= right <= c/2``.
    """
    if not (a <= b <= c):
        raise ValueError("half_cell_integrals needs a monotone stencil a <= b <= c")
    if b - a >= c - b:
        return b - c / 2, c / 2
    return a / 2, b - a / 2


# ----------------------------------------------------------------------
# steppers
# ----------------------------------------------------------------------

def _rebuild_like(state: GridState, work: GridState, new_values, phase: str) -> GridState:
    if state.kind == KIND_PERIODIC:
        return GridState.periodic(new_values, state.lam, state.mode,
                                  phase=phase, window_start=state.window_start)
    out = GridState.infinite(new_values, state.lam, state.mode,
                             left_step=state.left_tail.step,
                             right_step=state.right_tail.step,
                             window_start=work.window_start, phase=phase)
    return out.trimmed()


def _pointwise_step(state: GridState, formula: Callable) -> GridState:
    work = state.pad(2)
    vals = [formula(work, j) for j in range(work.window_start, work.window_end + 1)]
    return _rebuild_like(state, work, vals, state.phase)


def _require_integer_phase(state: GridState, scheme: str):
    if state.phase != PHASE_INTEGER:
        raise ValueError(f"{scheme} runs on the integer grid only")


def upwind_step(state: GridState, params: SchemeParams) -> GridState:
    _require_integer_phase(state, "upwind")
    lam = as_scalar(params.lam, state.mode)

    def f(w, j):
        u = w.cell_value(j)
        return u - lam * (u - w.cell_value(j - 1))

    return _pointwise_step(state, f)


def lax_wendroff_step(state: GridState, params: SchemeParams) -> GridState:
    _require_integer_phase(state, "lax_wendroff")
    lam = as_scalar(params.lam, state.mode)

    def f(w, j):
        um = w.cell_value(j - 1)
        u0 = w.cell_value(j)
        up = w.cell_value(j + 1)
        return u0 - lam * (up - um) / 2 + lam * lam * (up - 2 * u0 + um) / 2

    return _pointwise_step(state, f)


def dl_fixed_step(state: GridState, params: SchemeParams) -> GridState:
    """Reconstruct from-left, translate by ``lam`` and re-average in place."""
    _require_integer_phase(state, "dl_fixed")
    lam = as_scalar(params.lam, state.mode)
    half = Fraction(1, 2) if state.mode == RATIONAL else 0.5
    work = state.pad(2)
    profile = reconstruct(work, FROM_LEFT)
    vals = [integrate_reconstruction(profile, j - half - lam, j + half - lam)
            for j in range(work.window_start, work.window_end + 1)]
    return _rebuild_like(state, work, vals, PHASE_INTEGER)


def shifted_step(state: GridState, params: SchemeParams) -> GridState:
    """One step of the alternating process; the phase toggles each call."""
    if params.lam > Fraction(1, 2):
        raise ValueError("the alternating shifted scheme needs lam <= 1/2")
    lam = as_scalar(params.lam, state.mode)
    half = Fraction(1, 2) if state.mode == RATIONAL else 0.5
    work = state.pad(2)
    if state.phase == PHASE_INTEGER:
        profile = reconstruct(work, FROM_RIGHT)
        # new cell j is centred at j - lam
        vals = [integrate_reconstruction(profile, j - lam - half, j - lam + half)
                for j in range(work.window_start, work.window_end + 1)]
        return _rebuild_like(state, work, vals, PHASE_SHIFTED)
    profile = reconstruct(work, FROM_LEFT)
    # shift back right: new cell j is centred at j
    vals = [integrate_reconstruction(profile, j - half, j + half)
            for j in range(work.window_start, work.window_end + 1)]
    return _rebuild_like(state, work, vals, PHASE_INTEGER)


_STEPPERS = {
    UPWIND: upwind_step,
    LAX_WENDROFF: lax_wendroff_step,
    DL_FIXED: dl_fixed_step,
    DL_SHIFTED: shifted_step,
}


def step_once(state: GridState, params: SchemeParams) -> GridState:
    return _STEPPERS[params.kind](state, params)


def run(state: GridState, params: SchemeParams, n_steps: int,
        observer: Optional[Callable] = None) -> GridState:
    """Apply the configured stepper ``n_steps`` times.

    The observer is called with ``(step_index, state)`` after each step,
    step indices starting at 1; states are immutable so sharing is safe.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    current = state
    for i in range(1, n_steps + 1):
        current = step_once(current, params)
        if observer is not None:
            observer(i, current)
    return current
