"""Command-line front end.

Subcommands: eigen | run | sweep | roughness | validate.  Exit codes:
0 success, 2 config error, 3 numerical divergence, 4 run did not settle,
5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import metrology, runner, sweep
from .config import ConfigError, RunConfig, load_config, phase_degrees_to_radians
from .dynamics import SimulationDiverged
from .materials import builtin_library, validate_piezo
from .plotting import svg_line_chart

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_NOT_SETTLED = 4
EXIT_IO = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twmotor",
        description="Traveling-wave ultrasonic motor simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON run configuration file")
        p.add_argument("--out-dir", default=".", help="output directory")

    p = sub.add_parser("eigen", help="stator eigenfrequency table")
    add_common(p)
    p.add_argument("--n-elements", type=int)
    p.add_argument("--modes", type=int)

    p = sub.add_parser("run", help="transient motor run")
    add_common(p)
    p.add_argument("--cof", type=float)
    p.add_argument("--preload", type=float, help="preload in N")
    p.add_argument("--voltage", type=float)
    p.add_argument("--phase", help="channel B phase lead, degrees (e.g. -90deg)")
    p.add_argument("--frequency", type=float, help="drive frequency in Hz")
    p.add_argument("--duration", type=float, help="simulated time in s")

    p = sub.add_parser("sweep", help="parametric sweep")
    add_common(p)
    p.add_argument("--preset", choices=sweep.PRESET_NAMES)
    p.add_argument("--param", choices=("preload_N", "preload_g", "cof",
                                       "voltage", "frequency"))
    p.add_argument("--values", help="grid as start:stop:step (inclusive)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--plot", action="store_true", help="emit an SVG line plot")
    p.add_argument("--duration", type=float, help="simulated time per run in s")

    p = sub.add_parser("roughness", help="areal roughness report from CSV maps")
    p.add_argument("paths", nargs="+", help="height-map CSV files (um)")
    p.add_argument("--dx", type=float, required=True, help="pixel pitch x, um")
    p.add_argument("--dy", type=float, required=True, help="pixel pitch y, um")
    p.add_argument("--out", help="JSON report path (default: stdout)")

    p = sub.add_parser("validate", help="validate a configuration and materials")
    p.add_argument("--config")
    return parser


def _load(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    drive = {}
    if getattr(args, "cof", None) is not None:
        config = config.override(contact={"cof": args.cof})
    if getattr(args, "preload", None) is not None:
        config = config.override(rotor={"preload": args.preload})
    if getattr(args, "voltage", None) is not None:
        drive["voltage"] = args.voltage
    if getattr(args, "phase", None) is not None:
        drive["phase_offset"] = phase_degrees_to_radians(args.phase)
    if getattr(args, "frequency", None) is not None:
        drive["frequency"] = args.frequency
    if drive:
        config = config.override(drive=drive)
    if getattr(args, "duration", None) is not None:
        config = config.override(simulation={"duration": args.duration})
    if getattr(args, "n_elements", None) is not None:
        config = config.override(mesh={"n_elements": args.n_elements})
    if getattr(args, "modes", None) is not None:
        config = config.override(mesh={"modes": args.modes})
    return config


def _cmd_eigen(args) -> int:
    config = _load(args)
    model = runner.build_stator(config)
    n = config.geometry.drive_nodal_diameters
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = ["mode,frequency_hz,nodal_diameters,drive_pair"]
    print(f"{'mode':>4} {'frequency [Hz]':>16} {'n':>3}  drive pair")
    for i, (f, lab) in enumerate(zip(model.modes.frequencies_hz, model.modes.labels)):
        flag = "*" if lab == n else ""
        print(f"{i:>4} {f:>16.4f} {lab:>3}  {flag}")
        lines.append(f"{i},{f:.17g},{lab},{int(lab == n)}")
    (out_dir / "eigenfrequencies.csv").write_text("\n".join(lines) + "\n")
    print(f"drive pair n={n} at {model.pair.frequency_hz:.1f} Hz")
    return EXIT_OK


def _cmd_run(args) -> int:
    config = _load(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        series, summary = runner.run_motor(config)
    except SimulationDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    series.to_csv(out_dir / "timeseries.csv")
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2,
                                                     sort_keys=True) + "\n")
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK if summary["settled"] else EXIT_NOT_SETTLED


def _parse_grid(text: str) -> tuple[float, ...]:
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"cannot parse grid {text!r}; expected start:stop:step") \
            from None
    if step <= 0 or stop < start:
        raise ConfigError("grid needs step > 0 and stop >= start")
    values = []
    v = start
    while v <= stop + 1e-9 * step:
        values.append(round(v, 12))
        v = start + len(values) * step
    return tuple(values)


def _cmd_sweep(args) -> int:
    config = _load(args)
    if args.preset:
        spec = sweep.make_preset(args.preset, config)
    elif args.param and args.values:
        spec = sweep.SweepSpec(args.param, _parse_grid(args.values), config)
    else:
        raise ConfigError("sweep needs --preset or both --param and --values")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    curve = sweep.run_sweep(spec, jobs=args.jobs)
    curve.to_csv(out_dir / "sweep.csv")
    if all(not r.ok for r in curve.rows):
        print("error: every sweep row diverged", file=sys.stderr)
        return EXIT_DIVERGED
    try:
        peak = sweep.find_peak(curve)
        peak_summary = {"param": peak.param, "torque": peak.torque,
                        "unimodal": peak.unimodal,
                        "boundary_maximum": peak.boundary_maximum}
    except ValueError as exc:
        peak_summary = {"error": str(exc)}
    (out_dir / "peak.json").write_text(json.dumps(peak_summary, indent=2,
                                                  sort_keys=True) + "\n")
    print(json.dumps(peak_summary, indent=2, sort_keys=True))
    if args.plot:
        unit = {"preload_N": "N", "preload_g": "g", "cof": "-", "voltage": "V",
                "frequency": "Hz"}[spec.parameter]
        svg = svg_line_chart(curve.column("param"),
                             {"torque": curve.column("torque")},
                             xlabel=f"{spec.parameter} [{unit}]",
                             ylabel="reported torque [N m]",
                             title=f"torque vs {spec.parameter}")
        (out_dir / "sweep.svg").write_text(svg)
    return EXIT_OK


def _cmd_roughness(args) -> int:
    maps = []
    labels = []
    failed = False
    for path in args.paths:
        try:
            maps.append(metrology.load_height_map(path, dx=args.dx, dy=args.dy))
            labels.append(Path(path).name)
        except (OSError, ValueError) as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            failed = True
    if failed or not maps:
        return EXIT_IO
    leveled = [metrology.level_mean_plane(m) for m in maps]
    report = metrology.roughness_report(leveled, labels=labels)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    print(text, end="")
    return EXIT_OK


def _cmd_validate(args) -> int:
    config = load_config(args.config) if args.config else RunConfig()
    lib = builtin_library()
    problems = []
    for name in (config.stator_material, config.piezo_material):
        if isinstance(name, str) and name not in lib:
            problems.append(f"unknown material {name!r}")
    piezo = lib.get(config.piezo_material) if isinstance(config.piezo_material, str) \
        else None
    if piezo is not None and hasattr(piezo, "coupling"):
        problems.extend(validate_piezo(piezo))
    if config.mesh.n_elements < 8 * config.geometry.drive_nodal_diameters:
        problems.append("mesh too coarse for the drive nodal diameters")
    if problems:
        for p in problems:
            print(f"invalid: {p}")
        return EXIT_CONFIG
    print("configuration valid")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "eigen": _cmd_eigen,
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "roughness": _cmd_roughness,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
