"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 invalid input, 3 runtime failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import output
from .config import SimConfig, parse_config, serialize_config
from .convergence import ConvergenceReport, run_study
from .dispersion import PhysicalParams, background_box, quartic_residual, solve_dispersion
from .errors import NoOscillatoryRoot, ParseError, PlasmonError, ValidationError
from .marcher import SimOptions, SimulationResult, run_simulation

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _tau(text: str) -> float:
    return math.inf if text.strip().lower() in ("inf", "infinity") else float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="grapheneplasmon", description="Graphene plasmon PIDE simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("dispersion", help="solve for the background mode")
    defaults = PhysicalParams()
    d.add_argument("--xi0", type=float, default=defaults.xi0)
    d.add_argument("--d0", type=float, default=defaults.d0)
    d.add_argument("--tau", type=_tau, default=defaults.tau)
    d.add_argument("--eps", type=float, default=defaults.eps)
    d.add_argument("--mu", type=float, default=defaults.mu)

    b = sub.add_parser("background", help="Ex0 and Hz0 heatmaps at t = 0")
    b.add_argument("--box", type=float, nargs=4, metavar=("X0", "X1", "Y0", "Y1"),
                   default=(-3.15, 3.15, -3.15, 3.15))
    b.add_argument("--res", type=int, default=201)
    b.add_argument("--out", type=Path, default=Path("out"))

    s = sub.add_parser("simulate", help="run one configured simulation")
    s.add_argument("--config", type=Path, required=True)
    s.add_argument("--out", type=Path, default=None, help="overrides output.out_dir")

    c = sub.add_parser("converge", help="nested-mesh convergence study")
    c.add_argument("--levels", type=int, default=5)
    c.add_argument("--out", type=Path, default=Path("convergence.csv"))
    return parser


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.4f}{z.imag:+.4f}i"


def cmd_dispersion(args) -> int:
    params = PhysicalParams(mu=args.mu, eps=args.eps, tau=args.tau, d0=args.d0, xi0=args.xi0)
    mode = solve_dispersion(params)
    print(f"s0 = {_fmt_complex(mode.s0)}")
    print(f"gamma0 = {_fmt_complex(mode.gamma0)}")
    print(f"omega0 = {mode.omega0:.4f}")
    print(f"residual = {quartic_residual(params, mode.s0):.3e}")
    return EXIT_OK


def cmd_background(args) -> int:
    x0, x1, y0, y1 = args.box
    if not (x1 > x0 and y1 > y0):
        raise ValidationError(f"--box needs x0 < x1 and y0 < y1, got {args.box}")
    if args.res < 2:
        raise ValidationError(f"--res must be at least 2, got {args.res}")
    mode = solve_dispersion(PhysicalParams())
    _, _, ex, hz = background_box(mode, (x0, x1, y0, y1), args.res)
    args.out.mkdir(parents=True, exist_ok=True)
    for name, field in (("ex0", ex.real), ("hz0", hz.real)):
        lo, hi = output.symmetric_range(field)
        output.write_heatmap_pgm(args.out / f"{name}.pgm", field, lo, hi)
    print(f"wrote ex0.pgm, hz0.pgm to {args.out}")
    return EXIT_OK


def snapshot_layers(n: int, stride: int) -> list:
    layers = list(range(0, n + 1, stride))
    if layers[-1] != n:
        layers.append(n)
    return layers


def emit_simulation(result: SimulationResult, config: SimConfig, out_dir: Path) -> list:
    """Write the configured outputs; returns the file names written."""
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = result.grid
    emit = config.output.emit
    layers = snapshot_layers(grid.n, config.output.snapshot_stride)
    written = []

    def path(name):
        written.append(name)
        return out_dir / name

    (out_dir / "config.ini").write_text(serialize_config(config), encoding="utf-8", newline="\n")
    written.append("config.ini")
    if "v_csv" in emit:
        output.write_csv_long(path("v.csv"), result.v.v_layers, grid, layers)
    if "j_csv" in emit:
        output.write_csv_long(path("j.csv"), result.j, grid, layers)
    if "jpert_csv" in emit:
        output.write_csv_long(path("jpert.csv"), result.j_pert, grid, layers)
    if "energy_csv" in emit:
        rows = [(float(t), float(e)) for t, e in zip(result.times(), result.sheet_energy)]
        output.write_series_csv(path("energy.csv"), ("t", "energy"), rows)
    if "heatmap_pgm" in emit:
        jp = result.roi_matrix(result.j_pert)
        re = jp.real
        lo, hi = output.symmetric_range(re)
        output.write_heatmap_pgm(path("jpert_re.pgm"), re, lo, hi)
        mag = np.abs(jp)
        top = float(np.max(mag))
        output.write_heatmap_pgm(path("jpert_abs.pgm"), mag, 0.0, top if top > 0 else 1.0)
    return written


def cmd_simulate(args) -> int:
    try:
        text = args.config.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read config {args.config}: {exc.strerror or exc}") from None
    config = parse_config(text)
    mode = solve_dispersion(config.physical)
    model = config.drude_model(mode)
    result = run_simulation(config.physical, model, config.build_grid(), SimOptions(), mode=mode)
    out_dir = args.out if args.out is not None else Path(config.output.out_dir)
    written = emit_simulation(result, config, out_dir)
    print(f"wrote {', '.join(written)} to {out_dir}")
    return EXIT_OK


def write_report_csv(path, report: ConvergenceReport):
    output.write_series_csv(path, report.COLUMNS, report.rows())


def cmd_converge(args) -> int:
    if args.levels < 2:
        raise ValidationError(f"--levels must be at least 2, got {args.levels}")
    report = run_study(levels=args.levels)
    write_report_csv(args.out, report)
    for rec in report.levels:
        r = "" if rec.r is None else f"{rec.r:.3f}"
        print(f"{rec.i} dx={rec.dx:.6g} e={rec.e:.4e} r={r}")
    return EXIT_OK


COMMANDS = {
    "dispersion": cmd_dispersion,
    "background": cmd_background,
    "simulate": cmd_simulate,
    "converge": cmd_converge,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (ValidationError, ParseError, NoOscillatoryRoot) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (PlasmonError, OSError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
