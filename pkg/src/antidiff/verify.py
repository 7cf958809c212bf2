"""Randomized property suites: the exact-arithmetic lemma checks, the
extremity automaton, staircase and five-configuration dynamics, and the
structural scheme invariants.  The CLI ``verify`` subcommand and the
acceptance tests both run these.

Generators draw from small rational lattices so every instance sits inside
the hypotheses of the statement it exercises; all randomness flows through a
seeded ``random.Random``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional

from . import analysis
from .scalars import BINARY64, RATIONAL, as_scalar, one, zero
from .schemes import (
    DL_FIXED,
    DL_SHIFTED,
    FROM_LEFT,
    FROM_RIGHT,
    LAX_WENDROFF,
    UPWIND,
    SchemeParams,
    dl_fixed_step,
    half_cell_integrals,
    integrate_reconstruction,
    lax_wendroff_step,
    reconstruct,
    shifted_step,
    step_once,
    upwind_step,
)
from .state import GridState, KIND_INFINITE, PHASE_INTEGER, PHASE_SHIFTED, monotone_decomposition

HALF = Fraction(1, 2)


@dataclass
class SuiteResult:
    name: str
    cases: int
    violations: int
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _lattice(rng: random.Random, lo=0, hi=4, den=64) -> Fraction:
    """Random fraction in [lo, hi] with denominator dividing ``den``."""
    return Fraction(rng.randint(lo * den, hi * den), den)


def _positive_lattice(rng: random.Random, den=64) -> Fraction:
    return Fraction(rng.randint(1, den), den)


# ----------------------------------------------------------------------
# generators
# ----------------------------------------------------------------------

def gen_halpha_state(rng: random.Random, lam=HALF, min_jumps=1, max_jumps=10):
    """Normalized monotone configuration: tails 0 and 1, M positive jumps.

    Returns ``(state, alpha)`` with ``alpha`` half the smallest inner jump
    (half the smallest jump when there are no inner ones)."""
    m = rng.randint(min_jumps, max_jumps)
    jumps = [_positive_lattice(rng) for _ in range(m)]
    total = sum(jumps)
    jumps = [d / total for d in jumps]
    values = [Fraction(0)]
    for d in jumps:
        values.append(values[-1] + d)
    state = GridState.infinite(values, lam, RATIONAL,
                               window_start=rng.randint(-3, 3))
    inner = jumps[1:-1] if m >= 3 else jumps
    alpha = min(inner) / 2
    return state, alpha


def gen_nonnegative_jump_state(rng: random.Random, lam=HALF):
    """Nondecreasing state with flat tails; zero jumps allowed anywhere."""
    n = rng.randint(2, 9)
    values = [_lattice(rng, 0, 2)]
    for _ in range(n - 1):
        step = _lattice(rng, 0, 1) if rng.random() < 0.7 else Fraction(0)
        values.append(values[-1] + step)
    return GridState.infinite(values, lam, RATIONAL,
                              window_start=rng.randint(-3, 3))


def gen_general_state(rng: random.Random, lam, mode=RATIONAL, sloped_tails=True,
                      phase=PHASE_INTEGER):
    n = rng.randint(2, 8)
    values = [_lattice(rng, -2, 2, 16) for _ in range(n)]
    steps = (Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 4))
    ls = rng.choice(steps) if sloped_tails else Fraction(0)
    rs = rng.choice(steps) if sloped_tails else Fraction(0)
    if mode == BINARY64:
        values = [float(v) for v in values]
        ls, rs = float(ls), float(rs)
    return GridState.infinite(values, lam, mode, left_step=ls, right_step=rs,
                              window_start=rng.randint(-3, 3), phase=phase)


def gen_monotone_state(rng: random.Random, lam, phase=PHASE_INTEGER):
    n = rng.randint(2, 8)
    values = [_lattice(rng, -2, 0, 16)]
    for _ in range(n - 1):
        values.append(values[-1] + _lattice(rng, 0, 1, 16))
    ls = rng.choice((Fraction(0), Fraction(-1), Fraction(-1, 2)))
    rs = rng.choice((Fraction(0), Fraction(1), Fraction(1, 2)))
    return GridState.infinite(values, lam, RATIONAL, left_step=ls,
                              right_step=rs, window_start=rng.randint(-3, 3),
                              phase=phase)


def gen_periodic_state(rng: random.Random, lam, mode=RATIONAL):
    m = rng.randint(4, 10)
    values = [_lattice(rng, -2, 2, 16) for _ in range(m)]
    if mode == BINARY64:
        values = [float(v) for v in values]
    return GridState.periodic(values, lam, mode)


def gen_staircase_state(rng: random.Random):
    """Half-infinite staircase front: first jump in [0,4], second in [1,4]."""
    s_half = _lattice(rng, 0, 4)
    s_three_half = Fraction(1) + _lattice(rng, 0, 3)
    values = [Fraction(0), s_half, s_half + s_three_half]
    return GridState.infinite(values, HALF, RATIONAL, right_step=1,
                              window_start=rng.randint(-3, 3))


def gen_five_config_state(rng: random.Random, lam: Fraction):
    """Open-set construction: pick the middle level, place the outer two
    values in the upper ``1 - lam`` parts of their gaps, then shrink the
    middle gap until all five entry conditions hold."""
    den = 64
    v2 = Fraction(rng.randint(16, 48), den)
    lo = lam + Fraction(1, 20)
    hi = Fraction(19, 20)
    ratio1 = lo + (hi - lo) * Fraction(rng.randint(1, den - 1), den)
    ratio4 = lo + (hi - lo) * Fraction(rng.randint(1, den - 1), den)
    u1 = ratio1 * v2
    u4 = v2 + ratio4 * (1 - v2)
    eps = min(u1, v2 - u1, u4 - v2, 1 - u4) / 4
    for _ in range(64):
        state = GridState.infinite(
            [Fraction(0), u1, v2, v2 + eps, u4, Fraction(1)], lam, RATIONAL)
        report = analysis.check_five_config_conditions(state, lam)
        if report.all_hold:
            return state
        eps /= 2
    raise AssertionError("open-set construction failed to satisfy the conditions")


# ----------------------------------------------------------------------
# lemma suites
# ----------------------------------------------------------------------

def suite_half_cell_formulas(rng: random.Random, cases: int) -> SuiteResult:
    """Closed-form half-cell masses against geometric integration, plus the
    bracketing bounds a/2 <= left <= b/2 <= right <= c/2."""
    bad = []
    for i in range(cases):
        a = _lattice(rng, 0, 2)
        b = a + _lattice(rng, 0, 2)
        c = b + _lattice(rng, 0, 2)
        left, right = half_cell_integrals(a, b, c)
        state = GridState.infinite([a, b, c], HALF, RATIONAL)
        profile = reconstruct(state, FROM_RIGHT)
        gl = integrate_reconstruction(profile, Fraction(1, 2), Fraction(1))
        gr = integrate_reconstruction(profile, Fraction(1), Fraction(3, 2))
        if (left, right) != (gl, gr):
            bad.append(f"case {i}: formula {(left, right)} vs integral {(gl, gr)}")
        if not (a / 2 <= left <= b / 2 <= right <= c / 2):
            bad.append(f"case {i}: bounds violated for {(a, b, c)}")
    return SuiteResult("half_cell_formulas", cases, len(bad), "; ".join(bad[:3]))


def suite_jump_lower_bound(rng: random.Random, cases: int) -> SuiteResult:
    """Each post-step jump dominates the minimum of its two parents."""
    bad = []
    params = SchemeParams(DL_SHIFTED, HALF)
    for i in range(cases):
        state = gen_nonnegative_jump_state(rng)
        j0 = state.jumps()
        j1 = shifted_step(state, params).jumps()
        for k in range(state.window_start - 2, state.window_end + 3):
            if j1.value_at(k) < min(j0.value_at(k - 1), j0.value_at(k)):
                bad.append(f"case {i}: jump {k}")
                break
    return SuiteResult("jump_lower_bound", cases, len(bad), "; ".join(bad[:3]))


def suite_extremity_behavior(rng: random.Random, cases: int) -> SuiteResult:
    """First-jump behaviour at the left extremity: it dies when dominated by
    the second jump, otherwise it survives below the second and then loses
    at least alpha/4 over a full cycle."""
    bad = []
    params = SchemeParams(DL_SHIFTED, HALF)
    for i in range(cases):
        state, alpha = gen_halpha_state(rng, min_jumps=2)
        j0 = state.jumps()
        f = j0.first_nonzero()
        s1 = shifted_step(state, params)
        j1 = s1.jumps()
        if j0.value_at(f) <= j0.value_at(f + 1):
            if j1.value_at(f) != 0:
                bad.append(f"case {i}: first jump should vanish")
        else:
            if not (0 < j1.value_at(f) <= j1.value_at(f + 1)):
                bad.append(f"case {i}: surviving jump misordered")
            if j0.value_at(f + 2) >= alpha:
                j2 = shifted_step(s1, params).jumps()
                if j2.value_at(f) > j0.value_at(f) - alpha / 4:
                    bad.append(f"case {i}: no alpha/4 decay")
    return SuiteResult("extremity_behavior", cases, len(bad), "; ".join(bad[:3]))


def suite_halpha_closure(rng: random.Random, cases: int, steps: int = 4) -> SuiteResult:
    """One step maps configurations with inner jumps above alpha to
    configurations with inner jumps above the same alpha."""
    bad = []
    params = SchemeParams(DL_SHIFTED, HALF)
    for i in range(cases):
        state, alpha = gen_halpha_state(rng)
        for n in range(steps):
            state = shifted_step(state, params)
            report = analysis.classify_H_alpha(state, alpha)
            if report is None or not report.alpha_satisfied:
                bad.append(f"case {i}: closure lost at step {n + 1}")
                break
    return SuiteResult("halpha_closure", cases, len(bad), "; ".join(bad[:3]))


def suite_extremity_automaton(rng: random.Random, cases: int,
                              max_steps: int = 400) -> SuiteResult:
    """Observed extremity-class transitions stay inside the automaton and
    the jump count moves exactly as the class prescribes."""
    bad = []
    params = SchemeParams(DL_SHIFTED, HALF)
    for i in range(cases):
        state, _ = gen_halpha_state(rng, min_jumps=3)
        cls = analysis.classify_extremities(state)
        m = analysis.count_positive_jumps(state)
        for _ in range(max_steps):
            if cls == analysis.NOT_APPLICABLE:
                break
            state = shifted_step(state, params)
            report = analysis.classify_H_alpha(state, 0)
            if report is None:
                bad.append(f"case {i}: pattern lost")
                break
            delta, targets = analysis.AUTOMATON_EDGES[cls]
            new_cls = analysis.classify_extremities(state)
            if report.M - m != delta:
                bad.append(f"case {i}: {cls} changed M by {report.M - m}")
                break
            if new_cls != analysis.NOT_APPLICABLE and new_cls not in targets:
                bad.append(f"case {i}: {cls} -> {new_cls}")
                break
            cls, m = new_cls, report.M
    return SuiteResult("extremity_automaton", cases, len(bad), "; ".join(bad[:3]))


def suite_staircase_dynamics(rng: random.Random, cases: int, steps: int = 60,
                             require_growth: Optional[tuple] = None) -> SuiteResult:
    """Staircase shape closure, bit-exact front predictions, the forced
    (i) -> (ii) alternation, the half-unit front-sum bookkeeping and the
    nondecreasing even-step front sums."""
    bad = []
    params = SchemeParams(DL_SHIFTED, HALF)
    for i in range(cases):
        state = gen_staircase_state(rng)
        report = analysis.check_Hprime(state)
        if not report.satisfies_hprime:
            bad.append(f"case {i}: generator broke the hypothesis")
            continue
        start_sum = report.front_sum
        even_sum = report.front_sum
        grown_at = None
        ok = True
        for n in range(1, steps + 1):
            pred = analysis.staircase_predicted_next(report, state)
            state = shifted_step(state, params)
            new_report = analysis.check_Hprime(state)
            if not new_report.satisfies_hprime:
                bad.append(f"case {i}: shape lost at step {n}: {new_report.reason}")
                ok = False
                break
            if (new_report.s_half, new_report.s_three_half) != pred.front \
                    or new_report.front_start != pred.front_start:
                bad.append(f"case {i}: prediction mismatch at step {n}")
                ok = False
                break
            delta = new_report.front_sum - report.front_sum
            if delta != (-HALF if report.case == "i" else HALF):
                bad.append(f"case {i}: front sum moved by {delta} at step {n}")
                ok = False
                break
            if report.case == "i" and new_report.case != "ii":
                bad.append(f"case {i}: case (i) not followed by case (ii) at step {n}")
                ok = False
                break
            if n % 2 == 0:
                if new_report.front_sum < even_sum:
                    bad.append(f"case {i}: even-step front sum decreased at {n}")
                    ok = False
                    break
                even_sum = new_report.front_sum
            if require_growth is not None and grown_at is None \
                    and new_report.front_sum >= start_sum + require_growth[0]:
                grown_at = n
            report = new_report
        if ok and require_growth is not None:
            amount, within = require_growth
            if grown_at is None or grown_at > within:
                bad.append(f"case {i}: front sum did not grow by {amount} within {within}")
    return SuiteResult("staircase_dynamics", cases, len(bad), "; ".join(bad[:3]))


def suite_five_config(rng: random.Random, cases: int,
                      lams=(Fraction(1, 5), Fraction(3, 10), Fraction(2, 5),
                            Fraction(9, 20)),
                      double_steps: int = 40) -> SuiteResult:
    """Exact geometric contraction of the middle gap, the sandwich bounds,
    invariance of the limit configuration, and bit-exact agreement of the
    closed-form double step with the scheme."""
    bad = []
    total = 0
    for lam in lams:
        params = SchemeParams(DL_SHIFTED, lam)
        ratio = 4 * lam * lam
        for i in range(cases):
            total += 1
            state = gen_five_config_state(rng, lam)
            base = analysis.check_five_config_conditions(state, lam)
            eps0 = base.epsilon
            limits = base.limits
            u0 = base.values
            factor = Fraction(1)
            current = state
            ok = True
            for n in range(1, double_steps + 1):
                predicted = analysis.five_config_predicted_even_step(current, lam)
                current = shifted_step(shifted_step(current, params), params)
                if not current.same_state(predicted):
                    bad.append(f"lam={lam} case {i}: scheme disagrees at 2n={2 * n}")
                    ok = False
                    break
                rep = analysis.check_five_config_conditions(current, lam)
                factor *= ratio
                if rep.epsilon != factor * eps0:
                    bad.append(f"lam={lam} case {i}: gap not {ratio}^n exact")
                    ok = False
                    break
                if rep.limits != limits:
                    bad.append(f"lam={lam} case {i}: limit configuration drifted")
                    ok = False
                    break
                u = rep.values
                sandwich = (limits[0] <= u[0] <= u0[0] and
                            u0[1] <= u[1] <= limits[1] and
                            limits[2] <= u[2] <= u0[2] and
                            u0[3] <= u[3] <= limits[3])
                if not (sandwich and rep.all_hold):
                    bad.append(f"lam={lam} case {i}: sandwich lost at 2n={2 * n}")
                    ok = False
                    break
            if not ok:
                continue
    return SuiteResult("five_config_convergence", total, len(bad), "; ".join(bad[:3]))


# ----------------------------------------------------------------------
# structural suites
# ----------------------------------------------------------------------

def _random_params(rng: random.Random, kinds=(UPWIND, LAX_WENDROFF, DL_FIXED,
                                              DL_SHIFTED)):
    kind = rng.choice(kinds)
    if kind == DL_SHIFTED:
        lam = Fraction(rng.randint(1, 8), 16)
    else:
        lam = Fraction(rng.randint(1, 16), 16)
    return SchemeParams(kind, lam)


def suite_mass_conservation(rng: random.Random, cases: int) -> SuiteResult:
    """Periodic total mass is invariant: exactly in rational mode, to 1e-12
    relative in binary64."""
    bad = []
    for i in range(cases):
        mode = RATIONAL if i % 2 == 0 else BINARY64
        params = _random_params(rng)
        state = gen_periodic_state(rng, params.lam, mode)
        before = sum(state.values)
        for _ in range(rng.randint(1, 3)):
            state = step_once(state, params)
        after = sum(state.values)
        if mode == RATIONAL:
            if after != before:
                bad.append(f"case {i}: drift {after - before}")
        else:
            scale = max(1.0, abs(before))
            if abs(after - before) > 1e-12 * scale:
                bad.append(f"case {i}: drift {after - before}")
    return SuiteResult("mass_conservation", cases, len(bad), "; ".join(bad[:3]))


def suite_monotonicity(rng: random.Random, cases: int) -> SuiteResult:
    """The upwind and both reconstruction schemes preserve nondecreasing
    data (Lax-Wendroff is excluded: it overshoots)."""
    bad = []
    for i in range(cases):
        params = _random_params(rng, kinds=(UPWIND, DL_FIXED, DL_SHIFTED))
        state = gen_monotone_state(rng, params.lam)
        for _ in range(2):
            state = step_once(state, params)
            if not state.is_nondecreasing():
                bad.append(f"case {i}: order lost under {params.kind}")
                break
    return SuiteResult("monotonicity_preservation", cases, len(bad), "; ".join(bad[:3]))


def suite_maximum_principle(rng: random.Random, cases: int) -> SuiteResult:
    bad = []
    for i in range(cases):
        params = _random_params(rng, kinds=(UPWIND, DL_FIXED, DL_SHIFTED))
        if i % 2 == 0:
            state = gen_periodic_state(rng, params.lam)
        else:
            state = gen_general_state(rng, params.lam, sloped_tails=False)
        lo, hi = state.window_min(), state.window_max()
        nxt = step_once(state, params)
        if nxt.window_min() < lo or nxt.window_max() > hi:
            bad.append(f"case {i}: range expanded under {params.kind}")
    return SuiteResult("maximum_principle", cases, len(bad), "; ".join(bad[:3]))


def suite_decomposition_linearity(rng: random.Random, cases: int) -> SuiteResult:
    """One shifted step acts additively on the monotone split of the current
    state: step(u) = step(v) + step(w) + u(anchor) cellwise, exactly, at
    every step along the trajectory.

    The split has to be taken at the current state: after a step the
    positive and negative jump supports may overlap inside one stencil,
    where the reconstruction is nonlinear, so independently evolved parts
    can drift from the sum once two steps have passed.
    """
    bad = []
    for i in range(cases):
        lam = Fraction(rng.randint(1, 8), 16)
        params = SchemeParams(DL_SHIFTED, lam)
        u = gen_general_state(rng, lam)
        for n in range(rng.randint(1, 4)):
            v, w = monotone_decomposition(u)
            offset = u.values[0]
            u_next = shifted_step(u, params)
            v_next = shifted_step(v, params)
            w_next = shifted_step(w, params)
            lo = min(u_next.window_start, v_next.window_start, w_next.window_start) - 2
            hi = max(u_next.window_end, v_next.window_end, w_next.window_end) + 2
            if any(u_next.cell_value(j)
                   != v_next.cell_value(j) + w_next.cell_value(j) + offset
                   for j in range(lo, hi + 1)):
                bad.append(f"case {i}: additivity lost at step {n + 1}")
                break
            if (u_next.left_tail.step != v_next.left_tail.step + w_next.left_tail.step
                    or u_next.right_tail.step
                    != v_next.right_tail.step + w_next.right_tail.step):
                bad.append(f"case {i}: tail slopes disagree at step {n + 1}")
                break
            u = u_next
    return SuiteResult("decomposition_linearity", cases, len(bad), "; ".join(bad[:3]))


def suite_tail_preservation(rng: random.Random, cases: int) -> SuiteResult:
    """Arithmetic tails stay arithmetic with the same step; far-field values
    translate exactly by the CFL fraction of the local slope."""
    bad = []
    for i in range(cases):
        params = _random_params(rng)
        state = gen_general_state(rng, params.lam)
        lam = params.lam
        nxt = step_once(state, params)
        if (nxt.left_tail.step != state.left_tail.step
                or nxt.right_tail.step != state.right_tail.step):
            bad.append(f"case {i}: tail step changed under {params.kind}")
            continue
        jl = state.window_start - 5
        jr = state.window_end + 5
        if nxt.cell_value(jl) != state.cell_value(jl) + lam * state.left_tail.step:
            bad.append(f"case {i}: left tail value off under {params.kind}")
        elif nxt.cell_value(jr) != state.cell_value(jr) - lam * state.right_tail.step:
            bad.append(f"case {i}: right tail value off under {params.kind}")
    return SuiteResult("tail_preservation", cases, len(bad), "; ".join(bad[:3]))


def suite_reconstruction_mass(rng: random.Random, cases: int) -> SuiteResult:
    """Integrating any cell's reconstruction over the full cell returns the
    cell average exactly."""
    bad = []
    for i in range(cases):
        lam = Fraction(rng.randint(1, 8), 16)
        phase = PHASE_INTEGER if i % 2 == 0 else PHASE_SHIFTED
        state = gen_general_state(rng, lam, phase=phase)
        conv = FROM_RIGHT if i % 2 == 0 else FROM_LEFT
        profile = reconstruct(state, conv)
        for j in range(state.window_start, state.window_end + 1):
            lo, hi = state.cell_bounds(j)
            if integrate_reconstruction(profile, lo, hi) != state.cell_value(j):
                bad.append(f"case {i}: mass lost in cell {j}")
                break
    return SuiteResult("reconstruction_mass_identity", cases, len(bad), "; ".join(bad[:3]))


def suite_value_bracketing(rng: random.Random, cases: int) -> SuiteResult:
    """Each shifted-step output lies between the two source cells its new
    cell straddles (nondecreasing data)."""
    bad = []
    for i in range(cases):
        lam = Fraction(rng.randint(1, 8), 16)
        params = SchemeParams(DL_SHIFTED, lam)
        phase = PHASE_INTEGER if i % 2 == 0 else PHASE_SHIFTED
        state = gen_monotone_state(rng, lam, phase=phase)
        nxt = shifted_step(state, params)
        for j in range(state.window_start - 1, state.window_end + 2):
            if state.phase == PHASE_INTEGER:
                lo, hi = state.cell_value(j - 1), state.cell_value(j)
            else:
                lo, hi = state.cell_value(j), state.cell_value(j + 1)
            if not lo <= nxt.cell_value(j) <= hi:
                bad.append(f"case {i}: cell {j} escapes its bracket")
                break
    return SuiteResult("value_bracketing", cases, len(bad), "; ".join(bad[:3]))


LEMMA_SUITES = (
    suite_half_cell_formulas,
    suite_jump_lower_bound,
    suite_extremity_behavior,
    suite_halpha_closure,
    suite_extremity_automaton,
)

STRUCTURAL_SUITES = (
    suite_mass_conservation,
    suite_monotonicity,
    suite_maximum_principle,
    suite_decomposition_linearity,
    suite_tail_preservation,
    suite_reconstruction_mass,
    suite_value_bracketing,
)


def run_all(seed: int, cases: int) -> List[SuiteResult]:
    results = []
    for suite in LEMMA_SUITES + STRUCTURAL_SUITES:
        results.append(suite(random.Random(seed), cases))
    results.append(suite_staircase_dynamics(random.Random(seed), max(2, cases // 10),
                                            steps=60))
    results.append(suite_five_config(random.Random(seed), max(1, cases // 100),
                                     double_steps=10))
    return results
