"""Initial-data presets, experiment configuration and the CSV harness.

An experiment is fully described by an :class:`ExperimentConfig`; running it
produces a :class:`TimeSeries` whose header embeds the resolved config, so a
series can be reproduced bit-identically from its own file.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

from . import analysis
from .datum import Affine, Constant, CosSinProduct, Piece, PiecewiseDatum, Sinusoid
from .scalars import BINARY64, RATIONAL, as_scalar, check_mode, fmt_csv, parse_ratio
from .schemes import DL_FIXED, DL_SHIFTED, SCHEME_KINDS, SchemeParams, reconstruct, step_once
from .state import GridState, KIND_INFINITE, KIND_PERIODIC, PHASE_INTEGER, PHASE_SHIFTED

METRICS = ("linf", "l1", "plateau", "halpha", "extremity", "heaviside",
           "staircase", "fiveconfig")

_PERIODIC_METRICS = {"linf", "l1", "plateau"}
_DATUM_METRICS = {"linf", "l1"}
_INFINITE_METRICS = {"halpha", "extremity", "heaviside", "staircase", "fiveconfig"}


# ----------------------------------------------------------------------
# initial data
# ----------------------------------------------------------------------

def datum_id1() -> PiecewiseDatum:
    """1-periodic smooth profile ``cos(2 pi x) * sin(10 pi x)``."""
    return PiecewiseDatum((Piece(0.0, 1.0, CosSinProduct(2 * math.pi, 10 * math.pi)),),
                          BINARY64, period=1.0)


def datum_id2() -> PiecewiseDatum:
    """1.5-periodic profile: -1, a sine arch, then a plateau at 1 with a
    discontinuity where the period wraps."""
    pieces = (
        Piece(-0.3, 0.0, Constant(-1.0)),
        Piece(0.0, 1.0, Sinusoid(1.0, math.pi, -math.pi / 2, "sin")),
        Piece(1.0, 1.2, Constant(1.0)),
    )
    return PiecewiseDatum(pieces, BINARY64, period=1.5)


def plateaus_datum(widths: Sequence[int], heights, mode) -> PiecewiseDatum:
    """Periodic piecewise-constant datum whose pieces are ``widths[i]`` unit
    cells at value ``heights[i]``; breakpoints sit on cell interfaces."""
    if len(widths) != len(heights) or not widths:
        raise ValueError("need matching nonempty widths and heights")
    period = sum(widths)
    half = Fraction(1, 2)
    pieces = []
    x = -half
    for w, h in zip(widths, heights):
        pieces.append(Piece(as_scalar(x, mode), as_scalar(x + w, mode),
                            Constant(as_scalar(h, mode))))
        x += w
    return PiecewiseDatum(tuple(pieces), mode, period=as_scalar(period, mode))


def plateaus_state(widths: Sequence[int], heights, mode, lam) -> GridState:
    values = []
    for w, h in zip(widths, heights):
        values.extend([h] * w)
    return GridState.periodic(values, lam, mode)


def heaviside_state(mode, lam) -> GridState:
    return GridState.infinite([0, 1], lam, mode)


def halpha_state(jumps, mode, lam) -> GridState:
    """Monotone configuration with the given positive jumps and flat tails."""
    values = [as_scalar(0, mode)]
    for d in jumps:
        values.append(values[-1] + as_scalar(d, mode))
    return GridState.infinite(values, lam, mode)


def staircase_state(s_half, s_three_half, mode, lam) -> GridState:
    """Half-infinite staircase: flat left tail, a two-jump front, then unit
    steps forever (right tail climbs by 1 per cell)."""
    z = as_scalar(0, mode)
    f1 = as_scalar(s_half, mode)
    f2 = as_scalar(s_three_half, mode)
    return GridState.infinite([z, f1, f1 + f2], lam, mode,
                              right_step=as_scalar(1, mode))


def five_config_state(u_values, mode, lam) -> GridState:
    vals = [as_scalar(0, mode)] + [as_scalar(v, mode) for v in u_values] \
        + [as_scalar(1, mode)]
    return GridState.infinite(vals, lam, mode)


def build_initial(spec, mode, lam) -> Union[PiecewiseDatum, GridState]:
    """Resolve a preset name or an inline JSON-style spec.

    ``id1``/``id2`` yield periodic data; the other presets yield grid states
    directly.  Rational mode rejects the trigonometric presets.
    """
    check_mode(mode)
    if isinstance(spec, str):
        spec = {"preset": spec}
    if isinstance(spec, GridState) or isinstance(spec, PiecewiseDatum):
        return spec
    if "state" in spec:
        return GridState.from_json_dict(spec["state"])
    if "preset" not in spec:
        raise ValueError(f"cannot interpret initial spec {spec!r}")
    name = spec["preset"]
    if name in ("id1", "id2"):
        if mode == RATIONAL:
            raise ValueError(f"{name} is trigonometric; rational mode cannot represent it")
        return datum_id1() if name == "id1" else datum_id2()
    if name == "heaviside":
        return heaviside_state(mode, lam)
    if name == "plateaus":
        return plateaus_state(spec["widths"], spec["heights"], mode, lam)
    if name == "halpha":
        return halpha_state(spec["jumps"], mode, lam)
    if name == "staircase":
        return staircase_state(spec["s_half"], spec["s_three_half"], mode, lam)
    if name == "fiveconfig":
        return five_config_state(spec["u"], mode, lam)
    raise ValueError(f"unknown preset {name!r}")


def init_periodic_state(datum: PiecewiseDatum, M: int, mode, lam) -> GridState:
    """Cell-average initialization on M cells spanning one period."""
    if M < 4:
        raise ValueError("need at least 4 cells")
    if datum.period is None:
        raise ValueError("periodic initialization needs a periodic datum")
    dx = datum.period / M
    values = [datum.cell_average(j * dx, dx) for j in range(M)]
    return GridState.periodic(values, lam, mode)


# ----------------------------------------------------------------------
# configuration and time series
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    scheme: str
    lam: Fraction
    arithmetic: str
    initial: object               # preset name or dict spec
    n_steps: int
    metrics: tuple = ()
    M: Optional[int] = None
    out: Optional[str] = None
    stride: int = 1
    dump_reconstruction: bool = False
    exact_columns: bool = False
    seed: Optional[int] = None

    def __post_init__(self):
        if self.scheme not in SCHEME_KINDS:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        check_mode(self.arithmetic)
        object.__setattr__(self, "lam", parse_ratio(self.lam))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        for m in self.metrics:
            if m not in METRICS:
                raise ValueError(f"unknown metric {m!r}")
        if self.n_steps < 0 or self.stride < 1:
            raise ValueError("n_steps must be >= 0 and stride >= 1")

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "lambda": str(self.lam),
            "arithmetic": self.arithmetic,
            "initial": self.initial,
            "n_steps": self.n_steps,
            "metrics": list(self.metrics),
            "M": self.M,
            "stride": self.stride,
            "dump_reconstruction": self.dump_reconstruction,
            "exact_columns": self.exact_columns,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, raw: dict, out: Optional[str] = None) -> "ExperimentConfig":
        return cls(scheme=raw["scheme"], lam=Fraction(raw["lambda"]),
                   arithmetic=raw["arithmetic"], initial=raw["initial"],
                   n_steps=int(raw["n_steps"]), metrics=tuple(raw.get("metrics", ())),
                   M=raw.get("M"), out=out, stride=int(raw.get("stride", 1)),
                   dump_reconstruction=bool(raw.get("dump_reconstruction", False)),
                   exact_columns=bool(raw.get("exact_columns", False)),
                   seed=raw.get("seed"))


_BASE_COLUMNS = ("step", "linf_err", "l1_err", "plateau_I", "M_count", "extremity")
_EXACT_CAPABLE = {"linf_err", "l1_err", "plateau_I", "front_sum", "epsilon"}


@dataclass(frozen=True)
class TimeSeries:
    config: ExperimentConfig
    rows: tuple
    final_state: GridState

    def columns(self):
        cols = list(_BASE_COLUMNS)
        if "staircase" in self.config.metrics:
            cols += ["front_sum", "case"]
        if "fiveconfig" in self.config.metrics:
            cols += ["epsilon"]
        if "heaviside" in self.config.metrics:
            cols += ["heaviside_j"]
        return cols

    def csv_text(self) -> str:
        mode = self.config.arithmetic
        exact = self.config.exact_columns and mode == RATIONAL
        cols = self.columns()
        header_cols = []
        for c in cols:
            header_cols.append(c)
            if exact and c in _EXACT_CAPABLE:
                header_cols.append(c + "_exact")
        lines = ["# config: " + json.dumps(self.config.to_dict(), sort_keys=True)]
        lines.append(",".join(header_cols))
        for row in self.rows:
            cells = []
            for c in cols:
                v = getattr(row, c if c != "step" else "step")
                if c == "step":
                    cells.append(str(v))
                elif v is None:
                    cells.append("")
                    if exact and c in _EXACT_CAPABLE:
                        cells.append("")
                elif c in ("M_count", "heaviside_j"):
                    cells.append(str(v))
                elif c in ("extremity", "case"):
                    cells.append(str(v))
                else:
                    cells.append(fmt_csv(v, mode))
                    if exact and c in _EXACT_CAPABLE:
                        cells.append(str(v))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.csv_text())
        state_path = path.with_suffix(".state.json")
        state_path.write_text(self.final_state.to_json() + "\n")
        return path


def read_csv_header(path) -> dict:
    with open(path) as fh:
        first = fh.readline()
    if not first.startswith("# config: "):
        raise ValueError(f"{path} carries no config header")
    return json.loads(first[len("# config: "):])


# ----------------------------------------------------------------------
# running
# ----------------------------------------------------------------------

def _sample(step, state, wanted, datum, t, lam):
    kw = {"step": step}
    if "linf" in wanted:
        kw["linf_err"] = analysis.linf_error_pointwise(state, datum, t)
    if "l1" in wanted:
        kw["l1_err"] = analysis.l1_error_cell_averaged(state, datum, t)
    if "plateau" in wanted:
        kw["plateau_I"] = analysis.plateau_metric_I(state)
    if "halpha" in wanted or "extremity" in wanted:
        report = analysis.classify_H_alpha(state, 0)
        if "halpha" in wanted:
            kw["M_count"] = None if report is None else report.M
        if "extremity" in wanted:
            cls = analysis.classify_extremities(state)
            kw["extremity"] = None if cls == analysis.NOT_APPLICABLE else cls
    if "heaviside" in wanted:
        kw["heaviside_j"] = analysis.is_discrete_heaviside(state)
    if "staircase" in wanted:
        rep = analysis.check_Hprime(state)
        if rep.satisfies_hprime:
            kw["front_sum"] = rep.front_sum
            kw["case"] = rep.case
    if "fiveconfig" in wanted:
        try:
            rep = analysis.check_five_config_conditions(state, lam)
            kw["epsilon"] = rep.epsilon
        except ValueError:
            pass
    return analysis.MetricsSample(**kw)


def run_experiment(config: ExperimentConfig) -> TimeSeries:
    """Step the configured scheme, sampling the requested metrics every
    ``stride`` steps (step 0 and the final step are always sampled)."""
    mode = config.arithmetic
    lam = config.lam
    initial = build_initial(config.initial, mode, lam)
    datum = None
    if isinstance(initial, PiecewiseDatum):
        if config.M is None:
            raise ValueError("datum presets need a cell count M")
        datum = initial
        state = init_periodic_state(datum, config.M, mode, lam)
    else:
        state = initial
        if (isinstance(config.initial, dict)
                and config.initial.get("preset") == "plateaus"):
            # the plateau preset determines its own exact datum, so the
            # translated-profile error norms stay available
            datum = plateaus_datum(config.initial["widths"],
                                   config.initial["heights"], mode)

    wanted = set(config.metrics)
    if wanted & _DATUM_METRICS and datum is None:
        raise ValueError("linf/l1 metrics need a datum-initialized run")
    if wanted & _PERIODIC_METRICS and state.kind != KIND_PERIODIC:
        raise ValueError("linf/l1/plateau metrics need a periodic state")
    if wanted & _INFINITE_METRICS and state.kind != KIND_INFINITE:
        raise ValueError("classifier metrics need an infinite state")

    params = SchemeParams(config.scheme, lam)
    dx = datum.period / len(state.values) if datum is not None else None
    lam_mode = as_scalar(lam, mode)

    dumps = []

    def dump(step, st):
        if config.scheme == DL_FIXED:
            conv = "from-left"
        elif config.scheme == DL_SHIFTED:
            conv = "from-right" if st.phase == PHASE_INTEGER else "from-left"
        else:
            conv = "from-right"
        dumps.append({"step": step,
                      "cells": reconstruct(st.pad(1) if st.kind == KIND_INFINITE else st,
                                           conv).to_json_list()})

    def t_at(n):
        return n * lam_mode * dx if dx is not None else None

    rows = [_sample(0, state, wanted, datum, t_at(0), lam)]
    if config.dump_reconstruction:
        dump(0, state)
    current = state
    for n in range(1, config.n_steps + 1):
        current = step_once(current, params)
        if n % config.stride == 0 or n == config.n_steps:
            rows.append(_sample(n, current, wanted, datum, t_at(n), lam))
            if config.dump_reconstruction:
                dump(n, current)

    series = TimeSeries(config, tuple(rows), current)
    if config.out:
        path = series.write(config.out)
        if config.dump_reconstruction:
            dump_path = Path(path).with_suffix(".reconstruction.jsonl")
            with open(dump_path, "w") as fh:
                for entry in dumps:
                    fh.write(json.dumps(entry, sort_keys=True) + "\n")
    return series


def steps_for_periods(periods, lam: Fraction, M: int) -> int:
    """Step count covering ``periods`` datum periods: floor(periods*M/lam)."""
    return math.floor(Fraction(periods) * M / lam)


# ----------------------------------------------------------------------
# figure presets
# ----------------------------------------------------------------------

def figures_run(name: str, out_dir, M: Optional[int] = None,
                steps: Optional[int] = None, stride: int = 1):
    """Run one figure preset end to end; returns the written CSV paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    if name == "castest1":
        M = M or 100
        n = steps if steps is not None else steps_for_periods(10, Fraction(2, 5), M)
        for scheme in ("upwind", "lax_wendroff", "dl_fixed"):
            cfg = ExperimentConfig(scheme=scheme, lam=Fraction(2, 5),
                                   arithmetic=BINARY64, initial="id1", M=M,
                                   n_steps=n, metrics=("linf",), stride=stride,
                                   out=str(out_dir / f"castest1_{scheme}_M{M}.csv"))
            run_experiment(cfg)
            paths.append(Path(cfg.out))
    elif name in ("fsin", "fsinstag"):
        M = M or 100
        scheme = DL_FIXED if name == "fsin" else DL_SHIFTED
        for lam in (Fraction(47, 100), Fraction(48, 100), Fraction(49, 100),
                    Fraction(1, 2)):
            n = steps if steps is not None else steps_for_periods(15, lam, M)
            tag = f"{int(lam * 100):03d}"
            cfg = ExperimentConfig(scheme=scheme, lam=lam, arithmetic=BINARY64,
                                   initial="id2", M=M, n_steps=n,
                                   metrics=("plateau",), stride=stride,
                                   out=str(out_dir / f"{name}_lam{tag}.csv"))
            run_experiment(cfg)
            paths.append(Path(cfg.out))
    elif name == "escalier":
        n = steps if steps is not None else 800
        cfg = ExperimentConfig(scheme=DL_SHIFTED, lam=Fraction(1, 2),
                               arithmetic=RATIONAL,
                               initial={"preset": "staircase", "s_half": "1/2",
                                        "s_three_half": "3/2"},
                               n_steps=n, metrics=("staircase",), stride=stride,
                               out=str(out_dir / "escalier.csv"))
        run_experiment(cfg)
        paths.append(Path(cfg.out))
    elif name == "fiveconfig":
        n = steps if steps is not None else 80
        cfg = ExperimentConfig(scheme=DL_SHIFTED, lam=Fraction(2, 5),
                               arithmetic=RATIONAL,
                               initial={"preset": "fiveconfig",
                                        "u": ["7/20", "49/100", "51/100", "17/20"]},
                               n_steps=n, metrics=("fiveconfig",), stride=stride,
                               out=str(out_dir / "fiveconfig.csv"))
        run_experiment(cfg)
        paths.append(Path(cfg.out))
    else:
        raise ValueError(f"unknown figure preset {name!r}")
    return paths
