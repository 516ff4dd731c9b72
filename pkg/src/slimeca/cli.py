"""Command-line front end.

Subcommands::

    slimeca run       single trial, writes frames, metrics.csv and summary.json
    slimeca table     truth table with outcome frequencies (JSON)
    slimeca validate  parse geometry and config, no simulation
    slimeca wave      render the wave field of a geometry as a PGM

Exit status: 0 success, 2 unreadable or invalid input, 3 simulation contract
violation.
"""

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .config import (
    bundled_config,
    config_dict,
    load_config,
    tuned_overrides,
)
from .errors import ConfigurationError, ContractViolation
from .frames import write_pgm
from .geometry import bundled_gate, load_maze
from .harness import (
    INPUT_PAIRS,
    OutputLatch,
    SimConfig,
    circularity,
    simulate,
    truth_table,
)
from .reinforcement import generate_wave_field

log = logging.getLogger("slimeca")

EXIT_OK, EXIT_INPUT, EXIT_CONTRACT = 0, 2, 3

METRICS_HEADER = ("step", "total_mass", "max_mass", "p_active", "q_active",
                  "circularity", "frame_scale")


@dataclass(frozen=True)
class RunManifest:
    config: Optional[str]
    geometry: str
    inputs: tuple
    out_dir: str
    stride: int = 10
    verbosity: int = 0
    smell_frames: bool = False
    trial_index: int = 0
    scenario: Optional[str] = None

    def __post_init__(self):
        if self.stride < 1:
            raise ConfigurationError("frame stride must be >= 1")


def parse_inputs(text):
    """``"01"``, ``"0,1"`` or ``"x"``/``"y"``/``"xy"``/``"none"`` -> ``(x, y)``."""
    t = text.strip().lower().replace(",", "").replace(" ", "")
    if t in ("none", ""):
        return (False, False)
    if set(t) <= {"x", "y"}:
        return ("x" in t, "y" in t)
    if len(t) == 2 and set(t) <= {"0", "1"}:
        return (t[0] == "1", t[1] == "1")
    raise ConfigurationError(f"cannot parse input pair {text!r}")


def _pair(p):
    return f"<{int(p[0])},{int(p[1])}>"


def load_geometry(spec):
    if spec in ("P1", "P2"):
        return bundled_gate(spec)
    return load_maze(spec)


def load_run_config(path, scenario):
    if path and scenario:
        raise ConfigurationError("give either --config or --scenario, not both")
    if scenario:
        return bundled_config(scenario)
    if path:
        return load_config(path)
    return SimConfig()


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return repr(x)
    return str(x)


def _check_conservation(grid, total0, step):
    total = grid.mass.sum()
    if abs(total - total0) > 1e-9 * max(total0, 1.0):
        raise ContractViolation(f"mass not conserved at step {step}: {total0} -> {total}")
    if (grid.mass < 0).any() or (grid.mass[~grid.mask] != 0).any():
        raise ContractViolation(f"invalid mass field at step {step}")


def cli_run(manifest):
    """Execute one trial and write its artifacts; returns the summary dict."""
    geometry = load_geometry(manifest.geometry)
    config = load_run_config(manifest.config, manifest.scenario)
    out = manifest.out_dir
    frames_dir = os.path.join(out, "frames")
    os.makedirs(frames_dir, exist_ok=True)

    latch = OutputLatch(geometry, config.mass_threshold)
    rows = []
    seed = None
    step = 0
    total0 = None
    frames = 0
    for step, grid, seed in simulate(config, geometry, manifest.inputs, manifest.trial_index):
        if total0 is None:
            total0 = float(grid.mass.sum())
        _check_conservation(grid, total0, step)
        active = latch.update(step, grid.mass)
        last = step == config.max_steps or all(active)
        scale = None
        if step % manifest.stride == 0 or last:
            scale = write_pgm(os.path.join(frames_dir, f"mass_{step:06d}.pgm"), grid.mass, grid.mask)
            if manifest.smell_frames:
                write_pgm(os.path.join(frames_dir, f"smell_{step:06d}.pgm"), grid.sd, grid.mask)
            frames += 1
        if step > 0:
            m = grid.mass
            total = float(m.sum())
            top = float(m.max())
            circ = circularity(m) if total > 0 else None
            if scale is None:
                scale = 255.0 / top if top > 0 else 0.0
            rows.append((step, total, top, active[0], active[1], circ, scale))
            if manifest.verbosity:
                log.info("step %d total_mass %.6g p=%d q=%d", step, total, *active)
        if last:
            break

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(METRICS_HEADER)
    for r in rows:
        writer.writerow([_fmt(v) for v in r])
    with open(os.path.join(out, "metrics.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())

    summary = {
        "geometry": geometry.name,
        "inputs": [int(v) for v in manifest.inputs],
        "outputs": [int(v) for v in latch.active],
        "first_activation_step": list(latch.first),
        "steps": step,
        "frames": frames,
        "seed": seed,
        "trial_index": manifest.trial_index,
        "parameters": config_dict(config),
    }
    with open(os.path.join(out, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary


def table_summary(geometry, config, overrides=None):
    table = truth_table(config, geometry, overrides)
    rows = []
    for inputs in INPUT_PAIRS:
        row = table[inputs]
        cfg = (overrides or {}).get(inputs, config)
        rows.append({
            "inputs": [int(v) for v in inputs],
            "modal_output": [int(v) for v in row.modal],
            "frequency": row.frequency,
            "trials": cfg.trials,
            "counts": {_pair(k): v for k, v in sorted(row.counts.items())},
        })
    return {"geometry": geometry.name, "rows": rows}


def _cmd_run(args):
    manifest = RunManifest(
        config=args.config,
        scenario=args.scenario,
        geometry=args.maze or args.gate,
        inputs=parse_inputs(args.inputs),
        out_dir=args.out,
        stride=args.stride,
        verbosity=args.verbose,
        smell_frames=args.smell_frames,
        trial_index=args.trial_index,
    )
    summary = cli_run(manifest)
    print(f"{summary['geometry']} {_pair(summary['inputs'])} -> {_pair(summary['outputs'])}"
          f" after {summary['steps']} steps")


def _cmd_table(args):
    geometry = load_geometry(args.maze or args.gate)
    config = load_run_config(args.config, args.scenario)
    overrides = None
    if args.tuned:
        if geometry.name not in ("P1", "P2") or args.maze:
            raise ConfigurationError("--tuned needs a bundled gate (--gate P1|P2)")
        overrides = tuned_overrides(geometry.name)
    if args.trials:
        config = config.with_params(trials=args.trials)
        if overrides:
            overrides = {k: v.with_params(trials=args.trials) for k, v in overrides.items()}
    summary = table_summary(geometry, config, overrides)
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _cmd_validate(args):
    geometry = load_geometry(args.maze or args.gate)
    config = load_run_config(args.config, args.scenario)
    config.resolve_food(geometry)
    print(f"ok: geometry {geometry.name} {geometry.height}x{geometry.width}, "
          f"x={geometry.input_x} y={geometry.input_y}, "
          f"|p|={len(geometry.output_p)} |q|={len(geometry.output_q)}; "
          f"config max_steps={config.max_steps} trials={config.trials}")


def _cmd_wave(args):
    geometry = load_geometry(args.maze or args.gate)
    o = args.origin.strip().lower()
    if o in ("x", "y"):
        origin = geometry.input_site(o)
    else:
        try:
            origin = tuple(int(v) for v in o.split(","))
        except ValueError:
            raise ConfigurationError(f"cannot parse origin {args.origin!r}") from None
    wave = generate_wave_field(geometry, origin)
    # reachable cells shown as distance + 1 so the origin is not black
    shown = np.where(wave >= 0, wave + 1, 0).astype(np.float64)
    write_pgm(args.out, shown)
    print(f"wave from {origin}: max distance {int(wave.max())}, written to {args.out}")


def build_parser():
    p = argparse.ArgumentParser(prog="slimeca", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def geometry_args(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--gate", choices=("P1", "P2"), default="P2",
                       help="bundled gate layout (default P2)")
        g.add_argument("--maze", help="maze text file")

    def config_args(sp):
        sp.add_argument("--config", help="key = value config file")
        sp.add_argument("--scenario", help="bundled config name, e.g. p2_y")

    run = sub.add_parser("run", help="single trial with frames")
    geometry_args(run)
    config_args(run)
    run.add_argument("--inputs", required=True, help="input pair, e.g. 01, 1,1, xy")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--stride", type=int, default=10, help="steps per frame")
    run.add_argument("--smell-frames", action="store_true", help="also write smell frames")
    run.add_argument("--trial-index", type=int, default=0)
    run.add_argument("-v", "--verbose", action="count", default=0)
    run.set_defaults(func=_cmd_run)

    tab = sub.add_parser("table", help="truth table and outcome frequencies")
    geometry_args(tab)
    config_args(tab)
    tab.add_argument("--tuned", action="store_true",
                     help="use the shipped per-input scenario configs of the gate")
    tab.add_argument("--trials", type=int, help="override trial count")
    tab.add_argument("--out", help="also write the JSON summary here")
    tab.set_defaults(func=_cmd_table)

    val = sub.add_parser("validate", help="check geometry and config")
    geometry_args(val)
    config_args(val)
    val.set_defaults(func=_cmd_validate)

    wav = sub.add_parser("wave", help="emit the wave field as a PGM frame")
    geometry_args(wav)
    wav.add_argument("--origin", default="y", help="x, y or row,col (default y)")
    wav.add_argument("--out", required=True, help="output .pgm path")
    wav.set_defaults(func=_cmd_wave)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", 0) else logging.WARNING,
        format="%(message)s",
    )
    try:
        args.func(args)
    except (ConfigurationError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
