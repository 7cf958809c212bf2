"""Long-time-behaviour analysis: error norms, the plateau metric, jump-
pattern classifiers, the extremity automaton, staircase tracking and the
five-configuration exponential-convergence verifier.

All classifiers work on the jump sequence of a state (consecutive
differences), using the raw interface index: jump ``k`` sits between cells
``k`` and ``k+1`` in the state's own indexing, on either phase.  Reports are
plain frozen dataclasses that feed the test suites and the CSV writer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .datum import PiecewiseDatum
from .scalars import BINARY64, RATIONAL, Scalar, as_scalar, one, zero
from .state import GridState, KIND_INFINITE, KIND_PERIODIC

# extremity classes: first letter pair compares (first, second) jump, the
# second pair compares (second-to-last, last); L marks the larger one.
LS_SL = "LS/SL"
SL_LS = "SL/LS"
SL_SL = "SL/SL"
LS_LS = "LS/LS"
NOT_APPLICABLE = "not-applicable"

# transitions the extremity automaton may take, with the jump-count change
AUTOMATON_EDGES = {
    LS_SL: (+1, (SL_LS,)),
    SL_LS: (-1, (LS_SL, SL_LS, SL_SL, LS_LS)),
    SL_SL: (0, (LS_LS, SL_LS)),
    LS_LS: (0, (SL_SL, SL_LS)),
}

FLOAT_STATE_TOL = 1e-10


@dataclass(frozen=True)
class HAlphaReport:
    j0: int                       # raw index of the first positive jump
    M: int                        # number of strictly positive jumps
    min_inner_jump: Optional[Scalar]
    alpha: Scalar
    alpha_satisfied: bool


@dataclass(frozen=True)
class StaircaseReport:
    satisfies_hprime: bool
    reason: Optional[str]
    s_half: Optional[Scalar]       # first front jump
    s_three_half: Optional[Scalar]  # second front jump
    case: Optional[str]            # "i" | "ii"
    front_sum: Optional[Scalar]
    front_start: Optional[int]     # raw index of the first front jump


@dataclass(frozen=True)
class StaircasePrediction:
    case: str
    front: tuple                   # predicted (first, second) front jumps
    front_sum: Scalar
    front_start: int               # raw index after the step


@dataclass(frozen=True)
class FiveConfigReport:
    conditions: tuple              # five booleans (a)..(e)
    epsilon: Scalar
    limits: tuple                  # limit values of the four inner cells
    values: tuple                  # current four inner values
    j0: int                        # raw index of the first positive jump

    @property
    def all_hold(self) -> bool:
        return all(self.conditions)


@dataclass(frozen=True)
class MetricsSample:
    step: int
    linf_err: Optional[Scalar] = None
    l1_err: Optional[Scalar] = None
    plateau_I: Optional[Scalar] = None
    M_count: Optional[int] = None
    extremity: Optional[str] = None
    front_sum: Optional[Scalar] = None
    case: Optional[str] = None
    epsilon: Optional[Scalar] = None
    heaviside_j: Optional[int] = None


# ----------------------------------------------------------------------
# error norms and the plateau metric
# ----------------------------------------------------------------------

def _dx(state: GridState, datum: PiecewiseDatum):
    if state.kind != KIND_PERIODIC:
        raise ValueError("error norms need a periodic state")
    if datum.period is None:
        raise ValueError("error norms need a periodic datum")
    return datum.period / len(state.values)


def linf_error_pointwise(state: GridState, datum: PiecewiseDatum, t) -> Scalar:
    """max_j |u_j - datum(x_j - t)| with x_j the physical cell centre."""
    dx = _dx(state, datum)
    worst = zero(state.mode)
    for j in range(len(state.values)):
        x = state.center(state.window_start + j) * dx
        diff = abs(state.cell_value(state.window_start + j) - datum.value_at(x - t))
        if diff > worst:
            worst = diff
    return worst


def l1_error_cell_averaged(state: GridState, datum: PiecewiseDatum, t) -> Scalar:
    """dx * sum_j |u_j - (cell average of the datum translated by t)|."""
    dx = _dx(state, datum)
    total = zero(state.mode)
    for j in range(len(state.values)):
        x = state.center(state.window_start + j) * dx
        total += abs(state.cell_value(state.window_start + j)
                     - datum.cell_average(x - t, dx))
    return dx * total


def plateau_metric_I(state: GridState) -> Scalar:
    """Sum over cells of the minimum of three consecutive |jumps|; zero on
    piecewise-constant data whose plateaus span at least three cells."""
    if state.kind != KIND_PERIODIC:
        raise ValueError("the plateau metric is defined on periodic states")
    m = len(state.values)
    ws = state.window_start
    total = zero(state.mode)
    for j in range(m):
        a = abs(state.cell_value(ws + j - 1) - state.cell_value(ws + j))
        b = abs(state.cell_value(ws + j) - state.cell_value(ws + j + 1))
        c = abs(state.cell_value(ws + j + 1) - state.cell_value(ws + j + 2))
        total += min(a, b, c)
    return total


# ----------------------------------------------------------------------
# jump-pattern classifiers
# ----------------------------------------------------------------------

def _pattern_jumps(state: GridState):
    """Window jumps with the data's direction normalized away.

    Affine maps commute with every scheme here, so configurations between
    any two distinct constant tails classify like their 0-to-1 normalization;
    decreasing data flips sign, but magnitudes stay in the state's own value
    units (the inner-jump threshold is read in those units).  Returns
    ``(jumps, start_index)`` or None for sloped or equal tails.
    """
    if state.kind != KIND_INFINITE:
        return None
    if state.left_tail.step != 0 or state.right_tail.step != 0:
        return None
    a = state.values[0]
    b = state.values[-1]
    if b == a:
        return None
    js = state.jumps()
    if b > a:
        return js.values, js.start
    return tuple(-d for d in js.values), js.start


def classify_H_alpha(state: GridState, alpha) -> Optional[HAlphaReport]:
    """Match the monotone M-jump pattern: zeros, then M strictly positive
    jumps (first and last positive, inner ones compared against ``alpha``),
    then zeros.  Returns None when the pattern fails."""
    norm = _pattern_jumps(state)
    if norm is None:
        return None
    jumps, start = norm
    alpha = as_scalar(alpha, state.mode)
    if any(d < 0 for d in jumps):
        return None
    nz = [i for i, d in enumerate(jumps) if d != 0]
    if not nz:
        return None
    first, last = nz[0], nz[-1]
    if any(jumps[i] == 0 for i in range(first, last + 1)):
        return None      # an interior zero breaks the configuration
    inner = jumps[first + 1:last]
    min_inner = min(inner) if inner else None
    satisfied = all(d > alpha for d in inner)
    return HAlphaReport(j0=start + first, M=last - first + 1,
                        min_inner_jump=min_inner, alpha=alpha,
                        alpha_satisfied=satisfied)


def count_positive_jumps(state: GridState) -> int:
    report = classify_H_alpha(state, 0)
    if report is None:
        raise ValueError("state does not match the monotone M-jump pattern")
    return report.M


def classify_extremities(state: GridState) -> str:
    """Four-way tag of the two outermost jump pairs.

    Ties count as S on the left pair and as L on the right pair, so the
    automaton transitions are deterministic.
    """
    report = classify_H_alpha(state, 0)
    if report is None or report.M < 3:
        return NOT_APPLICABLE
    jumps, start = _pattern_jumps(state)
    f = report.j0 - start
    l = f + report.M - 1
    left = "LS" if jumps[f] > jumps[f + 1] else "SL"
    right = "SL" if jumps[l] > jumps[l - 1] else "LS"
    return f"{left}/{right}"


def is_discrete_heaviside(state: GridState) -> Optional[int]:
    """Index of the single free cell of a two-level state, if any.

    The state must hold the left tail constant strictly below the right one,
    with at most one cell strictly in between; a pure interface jump admits
    two valid answers and the smallest is returned.
    """
    if state.kind != KIND_INFINITE:
        return None
    if state.left_tail.step != 0 or state.right_tail.step != 0:
        return None
    a = state.values[0]
    b = state.values[-1]
    if not a < b:
        return None
    ws = state.window_start
    i = 0
    n = len(state.values)
    while i < n and state.values[i] == a:
        i += 1
    if i == n:
        return None      # never reaches the upper level inside the window
    j_free = ws + i
    v = state.values[i]
    if not a <= v <= b:
        return None
    rest = i + 1 if v < b else i
    for k in range(rest, n):
        if state.values[k] != b:
            return None
    if v == b:
        return j_free - 1    # pure interface jump: smallest valid index
    return j_free


def detect_two_periodicity(trajectory: Sequence[GridState],
                           horizon: Optional[int] = None,
                           tol: Optional[Scalar] = None) -> Optional[int]:
    """Smallest ``p`` with ``state(n+2) == state(n)`` for every n in
    ``[p, horizon-2]``; None when even the final pair differs.

    Rational trajectories compare exactly; binary64 ones use a componentwise
    tolerance of 1e-10 unless overridden.
    """
    if horizon is None:
        horizon = len(trajectory) - 1
    if horizon < 2 or horizon > len(trajectory) - 1:
        return None
    if tol is None and trajectory[0].mode == BINARY64:
        tol = FLOAT_STATE_TOL
    n = horizon - 2
    if not trajectory[n + 2].same_state(trajectory[n], tol=tol):
        return None
    while n > 0 and trajectory[n + 1].same_state(trajectory[n - 1], tol=tol):
        n -= 1
    return n


def run_until_two_periodic(state: GridState, params, max_steps: int):
    """Step until the trajectory repeats with period two.

    Returns the trajectory prefix (initial state included); the dynamics is
    deterministic, so the first recurrence certifies all later ones.  The
    prefix stops two states past the onset, or at ``max_steps``.
    """
    from .schemes import step_once

    tol = FLOAT_STATE_TOL if state.mode == BINARY64 else None
    traj = [state]
    for _ in range(max_steps):
        traj.append(step_once(traj[-1], params))
        if len(traj) >= 3 and traj[-1].same_state(traj[-3], tol=tol):
            break
    return traj


# ----------------------------------------------------------------------
# half-infinite staircase tracking
# ----------------------------------------------------------------------

def check_Hprime(state: GridState) -> StaircaseReport:
    """Test the half-infinite staircase shape and locate its front.

    Shape: constant left tail, then a front of two jumps (first >= 0,
    second >= 1), then unit jumps forever.  When the pattern admits two
    anchorings (a leading zero jump next to an already-unit tail) the
    leftmost one is reported; that convention follows the front the step
    formulas track, so predictions stay aligned with the dynamics.
    """
    def fail(reason):
        return StaircaseReport(False, reason, None, None, None, None, None)

    if state.kind != KIND_INFINITE:
        return fail("staircase shape needs an infinite state")
    if state.left_tail.step != 0:
        return fail("left tail must be constant")
    if state.right_tail.step != 1:
        return fail("right tail must climb by 1 per cell")
    js = state.jumps()
    if any(d < 0 for d in js.values):
        return fail("negative jump")
    lo = js.start - 1                     # include boundary jumps
    hi = js.start + len(js.values)
    one_s = one(state.mode)

    t_unit = hi                           # first index of the all-units tail
    while t_unit - 1 >= lo and js.value_at(t_unit - 1) == one_s:
        t_unit -= 1
    z = lo                                # first index past the all-zeros head
    while z < t_unit and js.value_at(z) == 0:
        z += 1

    if t_unit - z >= 3:
        return fail("more than two irregular jumps between the tails")
    if t_unit == z:                       # pure staircase 0...0 1 1 1...
        front = (zero(state.mode), one_s)
        start = z - 1
    elif t_unit == z + 1:
        g = js.value_at(z)
        if g >= 1:
            front = (zero(state.mode), g)   # leftmost valid anchoring
            start = z - 1
        else:
            front = (g, one_s)
            start = z
    else:                                  # exactly two irregular jumps
        g1, g2 = js.value_at(z), js.value_at(z + 1)
        if g2 < 1:
            return fail("second front jump is below 1")
        front = (g1, g2)
        start = z
    case = "i" if front[0] >= front[1] else "ii"
    return StaircaseReport(True, None, front[0], front[1], case,
                           front[0] + front[1], start)


def staircase_predicted_next(report: StaircaseReport,
                             state: GridState) -> StaircasePrediction:
    """Closed-form front after one half-cell-shift step.

    Case (i) (first front jump >= second): the front slides one interface
    left with jumps ``((F1-F2)/2, (3*F2+F1-1)/2)`` and the front sum drops
    by 1/2; case (ii) slides right with ``((3*F1+F2-1)/2, (F2-F1)/2 + 1)``
    and the sum gains 1/2.
    """
    if not report.satisfies_hprime:
        raise ValueError("state does not satisfy the staircase hypothesis")
    if state.lam != Fraction(1, 2):
        raise ValueError("staircase dynamics are the lam = 1/2 case")
    f1, f2 = report.s_half, report.s_three_half
    two = as_scalar(2, state.mode)
    one_s = one(state.mode)
    from .state import PHASE_INTEGER, PHASE_SHIFTED
    if report.case == "i":
        front = ((f1 - f2) / two, (3 * f2 + f1 - one_s) / two)
        # the front's interface moves half a cell left; in raw indices that
        # is a shift only when leaving the shifted phase
        start = report.front_start - (1 if state.phase == PHASE_SHIFTED else 0)
    else:
        front = ((3 * f1 + f2 - one_s) / two, (f2 - f1) / two + one_s)
        start = report.front_start + (1 if state.phase == PHASE_INTEGER else 0)
    return StaircasePrediction(report.case, front, front[0] + front[1], start)


# ----------------------------------------------------------------------
# five-configuration analysis (alternating scheme, lam != 1/2)
# ----------------------------------------------------------------------

def _five_config_values(state: GridState):
    """Window layout check: zeros, four cells strictly inside (0, 1)
    nondecreasing, then ones.  Returns the raw index of the last zero cell
    and the four inner values."""
    if state.kind != KIND_INFINITE:
        raise ValueError("five-configurations live on infinite states")
    if state.left_tail.step != 0 or state.right_tail.step != 0:
        raise ValueError("five-configurations need constant tails")
    lo, hi = zero(state.mode), one(state.mode)
    vals = state.values
    if vals[0] != lo or vals[-1] != hi:
        raise ValueError("five-configurations are normalized to tails 0 and 1")
    i = 0
    while i < len(vals) and vals[i] == lo:
        i += 1
    inner = []
    while i < len(vals) and lo < vals[i] < hi:
        inner.append(vals[i])
        i += 1
    while i < len(vals) and vals[i] == hi:
        i += 1
    if i != len(vals):
        raise ValueError("window is not of the form zeros, inner values, ones")
    if len(inner) != 4:
        raise ValueError("expected exactly four intermediate values")
    if any(b < a for a, b in zip(inner, inner[1:])):
        raise ValueError("five-configuration values must be nondecreasing")
    last_zero = state.window_start + len(vals) - 1
    for k, v in enumerate(vals):
        if v != lo:
            last_zero = state.window_start + k - 1
            break
    return last_zero, tuple(inner)


def five_config_limits(values, lam, mode):
    u1, u2, u3, u4 = values
    lam = as_scalar(lam, mode)
    eps = values[2] - values[1]
    den = 1 - 4 * lam * lam
    l1 = u1 - (2 * lam - lam * lam) / den * eps
    l2 = ((1 + lam) * u2 + lam * u3) / (1 + 2 * lam)
    l4 = u4 + (1 - lam * lam) / den * eps
    return (l1, l2, l2, l4)


def check_five_config_conditions(state: GridState, lam) -> FiveConfigReport:
    """Evaluate the five entry conditions and the limit configuration.

    ``lam = 1/2`` is rejected: the limit formulas divide by ``1 - 4*lam^2``
    (and the second condition cannot hold there unless the middle gap is
    already zero).
    """
    lam = Fraction(lam)
    if lam == Fraction(1, 2):
        raise ValueError("five-configuration analysis requires lam != 1/2")
    if not 0 < lam < 1:
        raise ValueError("lam must lie in (0, 1)")
    j0, vals = _five_config_values(state)
    u1, u2, u3, u4 = vals
    lam_s = as_scalar(lam, state.mode)
    eps = u3 - u2
    limits = five_config_limits(vals, lam, state.mode)
    one_s = one(state.mode)
    conditions = (
        u2 - u1 >= 2 * eps,
        limits[0] >= lam_s * limits[1],
        lam_s * (u4 - u3) >= (1 - lam_s) * eps,
        u4 - u3 >= lam_s * (one_s - u3),
        one_s - limits[3] >= (1 - lam_s * lam_s) * eps,
    )
    return FiveConfigReport(conditions, eps, limits, vals, j0)


def five_config_predicted_even_step(state: GridState, lam) -> GridState:
    """Predicted state after one double step (two alternating shifts).

    The four inner values move by fixed multiples of the middle gap and the
    gap itself contracts by ``4*lam^2``; positions do not move.
    """
    report = check_five_config_conditions(state, lam)
    if not report.all_hold:
        raise ValueError("five-configuration entry conditions do not all hold")
    lam_s = as_scalar(Fraction(lam), state.mode)
    u1, u2, u3, u4 = report.values
    eps = report.epsilon
    new_vals = (
        u1 - (2 * lam_s - lam_s * lam_s) * eps,
        u2 + (lam_s - 2 * lam_s * lam_s) * eps,
        u3 - (1 - lam_s - 2 * lam_s * lam_s) * eps,
        u4 + (1 - lam_s * lam_s) * eps,
    )
    window = (zero(state.mode),) + new_vals + (one(state.mode),)
    return GridState.infinite(window, state.lam, state.mode,
                              window_start=report.j0, phase=state.phase).trimmed()
