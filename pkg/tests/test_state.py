import math
from fractions import Fraction as F

import pytest

from antidiff.state import (
    GridState,
    KIND_INFINITE,
    PHASE_SHIFTED,
    monotone_decomposition,
)

HALF = F(1, 2)


def infinite(values, left_step=0, right_step=0, start=0, lam=HALF, phase="integer"):
    return GridState.infinite(values, lam, "rational", left_step=left_step,
                              right_step=right_step, window_start=start,
                              phase=phase)


def test_cell_value_constant_tail():
    s = infinite([0, 1])
    assert s.cell_value(-50) == 0
    assert s.cell_value(50) == 1


def test_cell_value_arithmetic_tail():
    # right tail (anchor u_K, step 1): cell K+3 holds u_K + 3
    s = infinite([F(1, 2), 2], right_step=1, start=5)
    assert s.cell_value(6 + 3) == 2 + 3
    s2 = infinite([4, 0], left_step=2)
    assert s2.cell_value(-3) == 4 + 3 * 2


def test_cell_value_periodic_wraps():
    s = GridState.periodic([0, 1, 2, 3], HALF, "rational")
    assert s.cell_value(5) == 1
    assert s.cell_value(-1) == 3


def test_jumps_constant_state():
    s = infinite([3, 3])
    js = s.jumps()
    assert all(js.value_at(k) == 0 for k in range(-4, 5))


def test_jumps_single_unit():
    s = infinite([0, 0, 1, 1], start=-1)
    js = s.jumps()
    nonzero = [k for k in range(-5, 6) if js.value_at(k) != 0]
    assert nonzero == [0]
    assert js.value_at(0) == 1


def test_jumps_staircase():
    # u_1 = 1/2, u_2 = 2 with unit steps afterwards: direct differencing
    s = infinite([0, HALF, 2], right_step=1)
    js = s.jumps()
    assert js.value_at(0) == HALF
    assert js.value_at(1) == F(3, 2)
    assert all(js.value_at(k) == 1 for k in range(2, 8))
    assert all(js.value_at(k) == 0 for k in range(-5, 0))


def test_jump_interface_positions():
    s = infinite([0, 1], lam=F(1, 2), phase=PHASE_SHIFTED)
    assert s.jumps().interface_position(3) == 3  # k + 1/2 - lam
    s2 = infinite([0, 1])
    assert s2.jumps().interface_position(3) == F(7, 2)


def test_is_nondecreasing():
    assert infinite([1, 1]).is_nondecreasing()
    assert infinite([0, HALF, 2], right_step=1).is_nondecreasing()
    assert not infinite([0, 1, HALF]).is_nondecreasing()
    assert not infinite([0, 1], left_step=1).is_nondecreasing()  # rises leftward


def test_total_variation():
    assert infinite([2, 2]).total_variation() == 0
    assert infinite([0, 1]).total_variation() == 1
    assert infinite([0, HALF, 2], right_step=1).total_variation() == math.inf
    assert GridState.periodic([0, 1, 0, 1], HALF, "rational").total_variation() == 4


def test_monotone_decomposition_worked_example():
    u = infinite([0, 2, 1, 3])
    v, w = monotone_decomposition(u)
    assert v.values == (F(0), F(2), F(2), F(4))
    assert w.values == (F(0), F(0), F(-1), F(-1))


def test_monotone_decomposition_monotone_inputs():
    u = infinite([1, 2, 4], right_step=1)
    v, w = monotone_decomposition(u)
    assert v.values == (F(0), F(1), F(3))
    assert all(x == 0 for x in w.values) and w.right_tail.step == 0
    d = infinite([5, 3, 3])
    v2, w2 = monotone_decomposition(d)
    assert all(x == 0 for x in v2.values)
    assert w2.values == (F(0), F(-2), F(-2))


def test_decomposition_round_trip():
    u = infinite([3, 1, 4, 1, 5], left_step=-1, right_step=2, start=-2)
    v, w = monotone_decomposition(u)
    for j in range(-9, 9):
        assert u.cell_value(j) == v.cell_value(j) + w.cell_value(j) + u.values[0]


def test_pad_then_trim_round_trip():
    s = infinite([0, HALF, 2], right_step=1, start=-1)
    padded = s.pad(3)
    assert padded.window_start == -4
    assert padded.cell_value(-4) == 0
    assert padded.cell_value(3) == 2 + 2
    assert padded.trimmed().same_state(s)
    assert padded.trimmed().values == s.values


def test_same_state_ignores_window_layout():
    a = infinite([0, 1])
    b = infinite([0, 0, 1, 1], start=-1)
    assert a.same_state(b)
    assert not a.same_state(infinite([0, 1], start=1))


def test_json_round_trip_rational():
    s = infinite([0, F(1, 3), 2], right_step=1, start=-2, phase=PHASE_SHIFTED)
    raw = s.to_json()
    assert '"1/3"' in raw
    back = GridState.from_json(raw)
    assert back.same_state(s)
    assert back.mode == "rational"


def test_json_round_trip_binary64():
    s = GridState.periodic([0.0, 0.5, 1.0, 0.25], F(2, 5), "binary64")
    back = GridState.from_json(s.to_json())
    assert back.mode == "binary64"
    assert back.same_state(s)


def test_tail_anchor_must_match_edge():
    from antidiff.state import TailSpec
    with pytest.raises(ValueError):
        GridState(KIND_INFINITE, (F(0), F(1)), 0, "integer", HALF, "rational",
                  TailSpec(F(5), F(0)), TailSpec(F(1), F(0)))


def test_lambda_validation():
    with pytest.raises(ValueError):
        infinite([0, 1], lam=F(3, 2))
    with pytest.raises(TypeError):
        GridState.infinite([0, 1], 0.5, "rational")
