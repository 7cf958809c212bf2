from fractions import Fraction as F

import pytest

from antidiff.schemes import (
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
    run,
    shifted_step,
    step_once,
    upwind_step,
)
from antidiff.state import GridState, PHASE_INTEGER, PHASE_SHIFTED

HALF = F(1, 2)


def infinite(values, lam=F(2, 5), **kw):
    return GridState.infinite(values, lam, "rational", **kw)


# ----------------------------------------------------------------------
# linear steppers
# ----------------------------------------------------------------------

def test_upwind_constant_unchanged():
    s = infinite([4, 4])
    assert upwind_step(s, SchemeParams(UPWIND, F(2, 5))).same_state(s)


def test_upwind_jump_cell_value():
    # value 1 with left neighbour 0 becomes 1 - (2/5)(1 - 0) = 3/5
    s = infinite([0, 1])
    out = upwind_step(s, SchemeParams(UPWIND, F(2, 5)))
    assert out.cell_value(1) == F(3, 5)
    assert out.cell_value(0) == 0
    assert out.cell_value(2) == 1


def test_upwind_unit_cfl_is_exact_shift():
    s = infinite([0, F(1, 3), 2, 2], lam=F(1), start=-1)
    out = run(s, SchemeParams(UPWIND, F(1)), 3)
    for j in range(-5, 8):
        assert out.cell_value(j) == s.cell_value(j - 3)


def test_lax_wendroff_constant_unchanged():
    s = infinite([7, 7])
    assert lax_wendroff_step(s, SchemeParams(LAX_WENDROFF, F(2, 5))).same_state(s)


def test_lax_wendroff_unit_cfl_is_exact_shift():
    s = infinite([0, 3, 1, 1], lam=F(1))
    out = lax_wendroff_step(s, SchemeParams(LAX_WENDROFF, F(1)))
    for j in range(-4, 7):
        assert out.cell_value(j) == s.cell_value(j - 1)


def test_lax_wendroff_undershoot():
    # stencil (0, 0, 1) at lam=2/5: 0 - (1/5)(1) + (2/25)(1) = -3/25
    s = infinite([0, 0, 1, 1], start=-1)
    out = lax_wendroff_step(s, SchemeParams(LAX_WENDROFF, F(2, 5)))
    assert out.cell_value(0) == F(-3, 25)


# ----------------------------------------------------------------------
# reconstruction
# ----------------------------------------------------------------------

def test_reconstruct_from_right_distance():
    s = infinite([0, F(1, 4), 1])
    rec = reconstruct(s, FROM_RIGHT).cell(1)
    assert rec.d == F(1, 4)
    assert (rec.left_value, rec.right_value) == (0, 1)


def test_reconstruct_constant_sentinel():
    s = infinite([3, 3])
    rec = reconstruct(s, FROM_RIGHT).cell(0)
    assert rec.d == -1
    assert rec.left_value == rec.right_value == 3


def test_reconstruct_degenerate_denominator():
    s = GridState.infinite([1, 0, 1], F(2, 5), "rational")
    rec = reconstruct(s, FROM_RIGHT).cell(1)
    assert rec.d == -1
    assert rec.left_value == rec.right_value == 0


def test_reconstruct_midpoint_both_conventions():
    s = infinite([0, HALF, 1])
    for conv in (FROM_RIGHT, FROM_LEFT):
        assert reconstruct(s, conv).cell(1).d == HALF


def test_reconstruct_boundary_d_values_stay_constant():
    # d = 0 and d = 1 fall outside the open interval: no reconstruction
    s = infinite([0, 0, 1])
    assert reconstruct(s, FROM_RIGHT).cell(1).d == -1
    s = infinite([0, 1, 1])
    assert reconstruct(s, FROM_RIGHT).cell(1).d == -1


def test_integrate_constant_profile():
    s = infinite([5, 5])
    profile = reconstruct(s, FROM_RIGHT)
    assert integrate_reconstruction(profile, F(-3, 2), F(7, 2)) == 5 * 5


def test_integrate_half_cells_large_small():
    # stencil (0, 2/3, 1) from-right: d = 2/3, discontinuity at j - 1/6;
    # the half-cell masses are b - c/2 = 1/6 and c/2 = 1/2
    s = infinite([0, F(2, 3), 1])
    profile = reconstruct(s, FROM_RIGHT)
    assert integrate_reconstruction(profile, HALF, F(1)) == F(1, 6)
    assert integrate_reconstruction(profile, F(1), F(3, 2)) == HALF


def test_integrate_full_cell_recovers_average():
    s = infinite([0, F(2, 3), 1, F(7, 2)], left_step=-1, right_step=2)
    for conv in (FROM_RIGHT, FROM_LEFT):
        profile = reconstruct(s, conv)
        for j in range(-3, 7):
            lo, hi = s.cell_bounds(j)
            assert integrate_reconstruction(profile, lo, hi) == s.cell_value(j)


@pytest.mark.parametrize("stencil,expected", [
    ((F(0), F(2, 3), F(1)), (F(1, 6), F(1, 2))),   # left jump dominates
    ((F(0), F(1, 3), F(1)), (F(0), F(1, 3))),      # right jump dominates
    ((F(2), F(2), F(2)), (F(1), F(1))),            # constant
])
def test_half_cell_integrals(stencil, expected):
    assert half_cell_integrals(*stencil) == expected


def test_half_cell_integrals_needs_monotone_stencil():
    with pytest.raises(ValueError):
        half_cell_integrals(F(1), F(0), F(2))


# ----------------------------------------------------------------------
# reconstruction schemes
# ----------------------------------------------------------------------

def brute_force_translated_step(levels, jump_at, lam, j):
    """Average of the translated pure-interface step over cell j.

    Independent oracle: the reconstruction of a two-plateau state is the
    state itself, so one step just translates the exact profile by ``lam``
    and averages geometrically over (j - 1/2, j + 1/2).
    """
    lo, hi = F(j) - HALF, F(j) + HALF
    pos = jump_at + lam
    left_len = min(max(pos - lo, F(0)), F(1))
    return levels[0] * left_len + levels[1] * (1 - left_len)


def test_dl_fixed_single_jump_against_brute_force():
    s = infinite([0, 1], start=3)   # jump at interface 7/2
    out = dl_fixed_step(s, SchemeParams(DL_FIXED, F(2, 5)))
    for j in range(0, 9):
        assert out.cell_value(j) == brute_force_translated_step(
            (F(0), F(1)), F(7, 2), F(2, 5), j)


def test_dl_fixed_constant_unchanged():
    s = infinite([2, 2])
    assert dl_fixed_step(s, SchemeParams(DL_FIXED, F(2, 5))).same_state(s)


def test_dl_fixed_plateaus_advect_exactly():
    # plateaus at least 3 cells wide are translated exactly (cell averages
    # of the shifted profile); checked against the geometric oracle
    heights = (F(0), F(1))
    s = GridState.periodic([0, 0, 0, 1, 1, 1, 1, 0, 0, 0], F(2, 5), "rational")
    params = SchemeParams(DL_FIXED, F(2, 5))
    out = run(s, params, 5)
    t = 5 * F(2, 5)   # = 2 cells: exact shift by 2
    for j in range(10):
        assert out.cell_value(j) == s.cell_value(j - 2)
    assert t == 2


def test_shifted_step_phase_toggles():
    s = infinite([1, 1], lam=HALF)
    params = SchemeParams(DL_SHIFTED, HALF)
    odd = shifted_step(s, params)
    assert odd.phase == PHASE_SHIFTED and odd.same_state(
        GridState.infinite([1, 1], HALF, "rational", phase=PHASE_SHIFTED))
    back = shifted_step(odd, params)
    assert back.phase == PHASE_INTEGER


def test_shifted_step_half_cell_masses():
    # the new cells straddling the (0, 2/3, 1) stencil receive the
    # half-cell masses 1/6 and 1/2 on top of their other halves
    s = infinite([0, F(2, 3), 1], lam=HALF)
    out = shifted_step(s, SchemeParams(DL_SHIFTED, HALF))
    # new cell 1 covers (0, 1): left half of the stencil cell plus the
    # constant-0 right half of cell 0
    assert out.cell_value(1) == F(1, 6)
    assert out.cell_value(2) == F(1, 2) + F(1, 2)


def test_shifted_step_small_first_jump_dies():
    # first jump 1/4 <= second jump 3/4: the leftmost jump becomes exactly 0
    s = infinite([0, F(1, 4), 1], lam=HALF)
    out = shifted_step(s, SchemeParams(DL_SHIFTED, HALF))
    js = out.jumps()
    assert js.value_at(0) == 0
    assert js.value_at(1) > 0


def test_shifted_lambda_cap():
    with pytest.raises(ValueError):
        SchemeParams(DL_SHIFTED, F(3, 4))
    s = infinite([0, 1], lam=F(1, 4))
    with pytest.raises(ValueError):
        shifted_step(s, SchemeParams(DL_FIXED, F(3, 4)))


def test_phase_preconditions():
    s = infinite([0, 1], phase=PHASE_SHIFTED, lam=HALF)
    for step, kind in ((upwind_step, UPWIND), (lax_wendroff_step, LAX_WENDROFF),
                       (dl_fixed_step, DL_FIXED)):
        with pytest.raises(ValueError):
            step(s, SchemeParams(kind, HALF))


def test_run_zero_steps_is_identity():
    s = infinite([0, 1])
    assert run(s, SchemeParams(UPWIND, F(2, 5)), 0) is s


def test_run_observer_and_parity():
    s = infinite([0, F(1, 3), 1], lam=HALF)
    seen = []
    out = run(s, SchemeParams(DL_SHIFTED, HALF), 4,
              observer=lambda i, st: seen.append((i, st.phase)))
    assert [i for i, _ in seen] == [1, 2, 3, 4]
    assert [p for _, p in seen] == [PHASE_SHIFTED, PHASE_INTEGER,
                                    PHASE_SHIFTED, PHASE_INTEGER]
    assert out.phase == PHASE_INTEGER


def test_periodic_mass_is_conserved_exactly():
    s = GridState.periodic([F(1, 3), 2, F(-1, 7), 0, 1], F(2, 5), "rational")
    for kind in (UPWIND, LAX_WENDROFF, DL_FIXED):
        out = run(s, SchemeParams(kind, F(2, 5)), 7)
        assert sum(out.values) == sum(s.values)
    out = run(s, SchemeParams(DL_SHIFTED, F(2, 5)), 7)
    assert sum(out.values) == sum(s.values)
