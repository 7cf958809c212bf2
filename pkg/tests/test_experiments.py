import json
from fractions import Fraction as F

import pytest

from antidiff.datum import PiecewiseDatum
from antidiff.experiments import (
    ExperimentConfig,
    build_initial,
    datum_id2,
    five_config_state,
    init_periodic_state,
    plateaus_datum,
    read_csv_header,
    run_experiment,
    steps_for_periods,
    figures_run,
)
from antidiff.state import GridState

HALF = F(1, 2)


def test_build_initial_presets():
    d = build_initial("id2", "binary64", F(2, 5))
    assert isinstance(d, PiecewiseDatum) and d.value_at(1.1) == 1.0
    h = build_initial("heaviside", "rational", HALF)
    assert isinstance(h, GridState)
    assert (h.cell_value(-5), h.cell_value(5)) == (0, 1)
    fc = build_initial({"preset": "fiveconfig",
                        "u": ["7/20", "49/100", "51/100", "17/20"]},
                       "rational", F(2, 5))
    assert fc.values == (F(0), F(7, 20), F(49, 100), F(51, 100), F(17, 20), F(1))


def test_build_initial_rejects_trig_in_rational_mode():
    with pytest.raises(ValueError):
        build_initial("id1", "rational", F(2, 5))


def test_init_periodic_constant():
    d = plateaus_datum([4], [F(3, 7)], "rational")
    s = init_periodic_state(d, 4, "rational", HALF)
    assert s.values == (F(3, 7),) * 4


def test_init_periodic_heaviside_at_interface():
    # jump aligned with a cell interface: clean two-plateau state
    d = plateaus_datum([2, 6], [F(0), F(1)], "rational")
    s = init_periodic_state(d, 8, "rational", HALF)
    assert s.values == (F(0), F(0), F(1), F(1), F(1), F(1), F(1), F(1))


def test_init_periodic_heaviside_at_cell_center():
    import math
    from antidiff.datum import Constant, Piece
    # jump at x = 1 (the centre of cell 1): that cell averages to 1/2
    pieces = (Piece(F(-1, 2), F(1), Constant(F(0))),
              Piece(F(1), F(7, 2), Constant(F(1))))
    d = PiecewiseDatum(pieces, "rational", period=F(4))
    s = init_periodic_state(d, 4, "rational", HALF)
    assert s.values == (F(0), F(1, 2), F(1), F(1))


def test_init_needs_periodic_datum():
    from antidiff.datum import step_datum
    with pytest.raises(ValueError):
        init_periodic_state(step_datum(0, 1, 0, "rational"), 8, "rational", HALF)


def test_steps_for_periods_matches_figure_counts():
    assert steps_for_periods(10, F(2, 5), 100) == 2500
    assert steps_for_periods(10, F(2, 5), 200) == 5000
    assert steps_for_periods(15, F(47, 100), 100) == 3191
    assert steps_for_periods(15, F(1, 2), 100) == 3000


def _small_config(**overrides):
    base = dict(scheme="dl_fixed", lam=F(2, 5), arithmetic="rational",
                initial={"preset": "plateaus", "widths": [3, 4, 5],
                         "heights": ["0", "1", "1/2"]},
                n_steps=6, metrics=("l1", "plateau"), M=None)
    base.update(overrides)
    return ExperimentConfig(**base)


def test_run_experiment_rows_and_final_state():
    series = run_experiment(_small_config())
    assert [r.step for r in series.rows] == list(range(7))
    assert all(r.plateau_I == 0 for r in series.rows)
    assert series.final_state.kind == "periodic"


def test_run_experiment_metrics_validation():
    cfg = _small_config(metrics=("staircase",))
    with pytest.raises(ValueError):
        run_experiment(cfg)
    cfg = ExperimentConfig(scheme="dl_shifted", lam=HALF, arithmetic="rational",
                           initial="heaviside", n_steps=2, metrics=("linf",))
    with pytest.raises(ValueError):
        run_experiment(cfg)


def test_run_experiment_l1_needs_a_datum():
    inline = GridState.periodic([F(0), F(1), F(1), F(0)], F(2, 5), "rational")
    cfg = ExperimentConfig(scheme="dl_fixed", lam=F(2, 5), arithmetic="rational",
                           initial={"state": inline.to_json_dict()},
                           n_steps=1, metrics=("l1",))
    with pytest.raises(ValueError):
        run_experiment(cfg)


def test_csv_is_byte_reproducible(tmp_path):
    cfg = _small_config(out=str(tmp_path / "a.csv"))
    run_experiment(cfg)
    first = (tmp_path / "a.csv").read_bytes()
    run_experiment(cfg)
    assert (tmp_path / "a.csv").read_bytes() == first
    # the final state is recorded alongside
    state = GridState.from_json((tmp_path / "a.state.json").read_text())
    assert state.kind == "periodic"


def test_header_round_trip(tmp_path):
    cfg = _small_config(out=str(tmp_path / "series.csv"))
    series = run_experiment(cfg)
    raw = read_csv_header(tmp_path / "series.csv")
    replayed = run_experiment(ExperimentConfig.from_dict(raw))
    assert replayed.csv_text() == series.csv_text()


def test_exact_columns(tmp_path):
    cfg = _small_config(exact_columns=True, out=str(tmp_path / "e.csv"))
    run_experiment(cfg)
    lines = (tmp_path / "e.csv").read_text().splitlines()
    assert "l1_err_exact" in lines[1]
    assert ",0," in lines[2] or ",0\n" or lines[2].endswith("0")


def test_dump_reconstruction(tmp_path):
    cfg = _small_config(dump_reconstruction=True, out=str(tmp_path / "d.csv"),
                        n_steps=2)
    run_experiment(cfg)
    dump = (tmp_path / "d.reconstruction.jsonl").read_text().splitlines()
    assert len(dump) == 3
    entry = json.loads(dump[0])
    assert {"j", "left", "right", "d", "convention"} <= set(entry["cells"][0])


def test_figures_fsin_names(tmp_path):
    paths = figures_run("fsin", tmp_path, steps=3)
    assert [p.name for p in paths] == ["fsin_lam047.csv", "fsin_lam048.csv",
                                       "fsin_lam049.csv", "fsin_lam050.csv"]


def test_figures_castest1_names(tmp_path):
    paths = figures_run("castest1", tmp_path, M=20, steps=4)
    assert [p.name for p in paths] == ["castest1_upwind_M20.csv",
                                       "castest1_lax_wendroff_M20.csv",
                                       "castest1_dl_fixed_M20.csv"]


def test_figures_fiveconfig_epsilon_column(tmp_path):
    paths = figures_run("fiveconfig", tmp_path, steps=8)
    lines = paths[0].read_text().splitlines()
    header = lines[1].split(",")
    eps_col = header.index("epsilon")
    # even rows contract by (4 lam^2)^n = (16/25)^n exactly
    rows = [line.split(",") for line in lines[2:]]
    eps0 = F(1, 50)
    for step in (0, 2, 4, 6, 8):
        want = float((F(16, 25) ** (step // 2)) * eps0)
        assert float(rows[step][eps_col]) == pytest.approx(want, rel=1e-12)
