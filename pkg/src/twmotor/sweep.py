"""Parametric sweeps over preload, COF, voltage and frequency.

A sweep runs the full transient pipeline once per parameter value; rows
are independent, so they may execute on a worker pool, and results are
aggregated in input order for determinism.  Named presets reproduce the
study grids used for the USR30/USR60 preload curves, the gram-denominated
plastic-stator sweep, and the COF scan.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import runner
from .config import ConfigError, RunConfig
from .dynamics import SimulationDiverged

__all__ = [
    "SweepSpec",
    "SweepRow",
    "SweepCurve",
    "PeakReport",
    "PRESET_NAMES",
    "grams_to_newtons",
    "make_preset",
    "run_sweep",
    "find_peak",
    "compare_trends",
]

STANDARD_GRAVITY = 9.80665  # m/s^2

_PARAMETERS = ("preload_N", "preload_g", "cof", "voltage", "frequency")
SWEEP_CSV_HEADER = "param,torque,speed,t_ss,settled"


def grams_to_newtons(grams: float) -> float:
    """Convert a gram-denominated preload to newtons via standard gravity."""
    if grams < 0:
        raise ValueError("mass in grams must be >= 0")
    return grams * STANDARD_GRAVITY * 1e-3


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter, its grid, and the base configuration."""

    parameter: str
    values: tuple[float, ...]
    base: RunConfig = field(default_factory=RunConfig)

    def __post_init__(self):
        if self.parameter not in _PARAMETERS:
            raise ValueError(
                f"unknown sweep parameter {self.parameter!r}; "
                f"choose from {', '.join(_PARAMETERS)}"
            )
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 3:
            raise ValueError("a sweep needs at least 3 values")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep values must be strictly ascending")
        if self.parameter in ("preload_N", "preload_g") and vals[0] < 0:
            raise ValueError("preload must be >= 0")
        if self.parameter == "cof" and not (0 <= vals[0] and vals[-1] <= 2):
            raise ValueError("cof sweep must stay within [0, 2]")
        if self.parameter == "voltage" and vals[0] < 0:
            raise ValueError("voltage must be >= 0")
        if self.parameter == "frequency" and vals[0] <= 0:
            raise ValueError("frequency must be > 0")

    def config_for(self, value: float) -> RunConfig:
        if self.parameter == "preload_N":
            return self.base.override(rotor={"preload": value})
        if self.parameter == "preload_g":
            return self.base.override(rotor={"preload": grams_to_newtons(value)})
        if self.parameter == "cof":
            return self.base.override(contact={"cof": value})
        if self.parameter == "voltage":
            return self.base.override(drive={"voltage": value})
        return self.base.override(drive={"frequency": value})


@dataclass(frozen=True)
class SweepRow:
    param: float
    torque: float
    speed: float
    t_ss: float
    settled: bool
    ok: bool = True
    error: str = ""


@dataclass(frozen=True)
class SweepCurve:
    parameter: str
    rows: tuple[SweepRow, ...]

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self, path):
        lines = [SWEEP_CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.param:.17g},{r.torque:.17g},{r.speed:.17g},"
                f"{r.t_ss:.17g},{int(r.settled)}"
            )
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def _run_value(args) -> SweepRow:
    spec, value = args
    try:
        config = spec.config_for(value)
        _, summary = runner.run_motor(config)
        return SweepRow(param=value, torque=summary["reported_torque"],
                        speed=summary["mean_speed"], t_ss=summary["t_ss"],
                        settled=summary["settled"])
    except SimulationDiverged as exc:
        return SweepRow(param=value, torque=math.nan, speed=math.nan,
                        t_ss=math.nan, settled=False, ok=False, error=str(exc))


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepCurve:
    """Run the pipeline over every grid value; rows keep the input order.

    Diverging rows are flagged (ok=False) and the sweep continues.
    """
    tasks = [(spec, v) for v in spec.values]
    if jobs <= 1:
        rows = [_run_value(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_value, tasks))
    return SweepCurve(parameter=spec.parameter, rows=tuple(rows))


PRESET_NAMES = ("usr30_preload", "usr60_preload", "ultem_preload_g", "cof_sweep")


def make_preset(name: str, base: RunConfig | None = None) -> SweepSpec:
    """Named study grids.

    ``usr30_preload``/``usr60_preload``: 25 N steps up to 250/500 N.
    ``ultem_preload_g``: 20 log-spaced points from 20 to 5000 g on an
    Ultem stator.  ``cof_sweep``: 0.05..0.6 in 0.05 steps.
    """
    base = base if base is not None else RunConfig()
    if name == "usr30_preload":
        return SweepSpec("preload_N", tuple(np.arange(25.0, 250.0 + 1e-9, 25.0)), base)
    if name == "usr60_preload":
        return SweepSpec("preload_N", tuple(np.arange(25.0, 500.0 + 1e-9, 25.0)), base)
    if name == "ultem_preload_g":
        vals = tuple(np.geomspace(20.0, 5000.0, 20))
        return SweepSpec("preload_g", vals,
                         base.override(stator_material="Ultem 1000"))
    if name == "cof_sweep":
        # Run the friction study at 200 N where the contact annulus is fully
        # closed: only there does the drag side of the wave trade against the
        # driving side and produce an interior friction optimum.
        return SweepSpec("cof", tuple(np.arange(0.05, 0.6 + 1e-9, 0.05)),
                         base.override(rotor={"preload": 200.0}))
    raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")


@dataclass(frozen=True)
class PeakReport:
    param: float
    torque: float
    unimodal: bool
    boundary_maximum: bool


def _smooth(values: np.ndarray, window: int) -> np.ndarray:
    if window <= 1:
        return values
    half = window // 2
    out = np.empty_like(values)
    for i in range(len(values)):
        lo = max(0, i - half)
        hi = min(len(values), i + half + 1)
        out[i] = np.mean(values[lo:hi])
    return out


def _unimodal(values: np.ndarray) -> bool:
    d = np.diff(values)
    signs = [s for s in np.sign(d) if s != 0]
    transitions = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    if transitions > 1:
        return False
    if transitions == 1:
        return signs[0] > 0  # must rise first, then fall
    return True  # monotone


def find_peak(curve: SweepCurve, window: int = 1) -> PeakReport:
    """Locate the torque maximum and report the curve's modality.

    Optional moving-average smoothing (window 1 = off).  Only settled rows
    participate; fewer than 3 settled rows is an error.
    """
    rows = [r for r in curve.rows if r.settled and r.ok]
    if len(rows) < 3:
        raise ValueError(f"need at least 3 settled rows, have {len(rows)}")
    params = np.array([r.param for r in rows])
    torque = _smooth(np.array([r.torque for r in rows]), window)
    i = int(np.argmax(torque))
    return PeakReport(
        param=float(params[i]), torque=float(torque[i]),
        unimodal=bool(_unimodal(torque)),
        boundary_maximum=(i == 0 or i == len(rows) - 1),
    )


def compare_trends(sim: SweepCurve, experiment) -> dict:
    """Trend comparison of a simulated curve against experimental points.

    ``experiment`` is a sequence of (parameter, torque) pairs.  Reports the
    peak-location ratio, the peak-magnitude overshoot percentage, the
    both-unimodal flag and both curves normalized to [0, 1]; no pass/fail
    judgment is made.
    """
    sim_rows = [r for r in sim.rows if r.ok and np.isfinite(r.torque)]
    exp = np.asarray(list(experiment), dtype=float)
    if len(sim_rows) < 3 or len(exp) < 3:
        raise ValueError("both curves need at least 3 points")
    sp = np.array([r.param for r in sim_rows])
    st = np.array([r.torque for r in sim_rows])
    ep, et = exp[:, 0], exp[:, 1]
    if np.ptp(st) == 0 or np.ptp(et) == 0:
        raise ValueError("degenerate (all-equal) torque curve")

    def normalize(x):
        span = np.ptp(x)
        return (x - np.min(x)) / span if span > 0 else np.zeros_like(x)

    i_s, i_e = int(np.argmax(st)), int(np.argmax(et))
    return {
        "peak_location_ratio": float(sp[i_s] / ep[i_e]) if ep[i_e] != 0 else math.inf,
        "peak_overshoot_pct": float((st[i_s] - et[i_e]) / et[i_e] * 100.0),
        "both_unimodal": bool(_unimodal(st) and _unimodal(et)),
        "sim_normalized": np.column_stack([normalize(sp), normalize(st)]),
        "exp_normalized": np.column_stack([normalize(ep), normalize(et)]),
    }
