"""Nested-mesh convergence study for the constant-D problem.

    python scripts/run_convergence.py --levels 6 --out out/convergence.csv
"""
import argparse
import time
from pathlib import Path

from grapheneplasmon.cli import write_report_csv
from grapheneplasmon.convergence import run_study


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=5)
    ap.add_argument("--out", type=Path, default=Path("out/convergence.csv"))
    args = ap.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    report = run_study(levels=args.levels)
    write_report_csv(args.out, report)
    print(f"{'i':>2} {'dx':>10} {'N':>5} {'e(v)':>11} {'r':>6} {'e(j)':>11} {'r':>6}")
    for rec in report.levels:
        r = "" if rec.r is None else f"{rec.r:.3f}"
        rj = "" if rec.r_j is None else f"{rec.r_j:.3f}"
        print(f"{rec.i:>2} {rec.dx:>10.6f} {rec.n:>5} {rec.e:>11.4e} {r:>6} {rec.e_j:>11.4e} {rj:>6}")
    print(f"{time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()
