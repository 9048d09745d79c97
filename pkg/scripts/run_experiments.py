"""Run the traveling, standing and growing perturbations and summarise them.

Writes per-scenario heatmaps of Re(j - j0) and Re(j - j_ref) plus a
diagnostics CSV to the output directory.

    python scripts/run_experiments.py --out out/experiments
"""
import argparse
from pathlib import Path

import numpy as np

from grapheneplasmon.experiments import (DEFAULT_DX, experiment_grid, is_monotone_increasing, l2_norms,
                                         mode_coefficients, mode_index, node_drift, phase_velocity,
                                         run_experiment)
from grapheneplasmon.output import symmetric_range, write_heatmap_pgm, write_series_csv


def diagnostics(matrix, times, xi):
    w, c = mode_coefficients(matrix.real, DEFAULT_DX)
    coeff = c[:, mode_index(w, xi)]
    norms = l2_norms(matrix, DEFAULT_DX)
    half = len(norms) // 2
    return [phase_velocity(coeff, times, xi), node_drift(coeff, xi), float(np.abs(coeff[half])),
            float(np.abs(coeff[-1])), str(is_monotone_increasing(norms[half:]))]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("out/experiments"))
    ap.add_argument("--n", type=int, default=256, help="time layers (dt = dx = pi / 64)")
    ap.add_argument("--alpha", type=float, default=0.02)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    grid = experiment_grid(n=args.n)
    rows = []
    for name in ("traveling", "standing", "growing"):
        run = run_experiment(name, grid=grid, alpha=args.alpha)
        for label, matrix, xi in (("jpert", run.jpert(), 4.0), ("jdiff", run.jdiff(), 8.0)):
            lo, hi = symmetric_range(matrix.real)
            write_heatmap_pgm(args.out / f"{name}_{label}_re.pgm", matrix.real, lo, hi)
            rows.append([name, label, xi] + diagnostics(matrix, run.times, xi))
        print(f"{name}: omega1 = {run.result.model.omega1:.5f}")

    header = ("scenario", "field", "xi", "phase_velocity", "node_drift", "amp_mid", "amp_end", "l2_monotone")
    write_series_csv(args.out / "diagnostics.csv", header, rows)
    for row in rows:
        print("  ".join(f"{v:.4f}" if isinstance(v, float) else str(v) for v in row))


if __name__ == "__main__":
    main()
