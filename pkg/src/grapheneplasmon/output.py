"""CSV and plain-PGM writers.

Floats are written with ``repr`` (shortest round-trip form) and every file
uses LF line endings, so outputs are byte-identical for identical inputs.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .errors import DegenerateRange
from .grid import TrapezoidGrid


def _open(path):
    path = Path(path)
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _num(value) -> str:
    return repr(float(value))


def write_csv_long(path, field, grid: TrapezoidGrid, layers=None):
    """Rows ``t,x,re,im`` over the region of interest, t-major then x ascending.

    ``field[k]`` is a full-width layer of ``grid``; ``layers`` selects which
    time layers to write (all by default).
    """
    layers = range(len(field)) if layers is None else layers
    xs = np.arange(-grid.m1, grid.m1 + 1) * grid.dx
    with _open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("t", "x", "re", "im"))
        for k in layers:
            values = np.asarray(field[k])[grid.roi(k)]
            t = _num(grid.t(k))
            for x, z in zip(xs, values):
                w.writerow((t, _num(x), _num(z.real), _num(z.imag)))


def read_csv_long(path):
    """Inverse of ``write_csv_long``: list of (t, x, complex) tuples."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return [(float(t), float(x), complex(float(re), float(im))) for t, x, re, im in rows[1:]]


def write_series_csv(path, header, rows):
    with _open(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else (_num(v) if isinstance(v, float) else v) for v in row])


def pixel_value(v: float, lo: float, hi: float) -> int:
    """round(255 * clamp((v - lo) / (hi - lo), 0, 1)), halves rounded away from zero."""
    frac = min(max((v - lo) / (hi - lo), 0.0), 1.0)
    return int(math.floor(255.0 * frac + 0.5))


def write_heatmap_pgm(path, matrix, lo: float, hi: float):
    """Plain "P2" greyscale map; the last matrix row is drawn at the top."""
    if not hi > lo:
        raise DegenerateRange(f"heatmap range needs hi > lo, got lo={lo} hi={hi}")
    rows = [list(map(float, r)) for r in matrix]
    width = len(rows[0]) if rows else 0
    if any(len(r) != width for r in rows):
        raise ValueError("heatmap matrix must be rectangular")
    with _open(path) as fh:
        fh.write("P2\n")
        fh.write(f"# lo={_num(lo)} hi={_num(hi)}\n")
        fh.write(f"{width} {len(rows)}\n255\n")
        for r in reversed(rows):
            fh.write(" ".join(str(pixel_value(v, lo, hi)) for v in r) + "\n")


def read_pgm(path):
    """(lo, hi, pixel rows top-to-bottom) from a file written by ``write_heatmap_pgm``."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if lines[0] != "P2":
        raise ValueError(f"{path} is not a plain PGM")
    meta = dict(item.split("=") for item in lines[1][1:].split())
    width, height = map(int, lines[2].split())
    pixels = [list(map(int, ln.split())) for ln in lines[4:4 + height]]
    if any(len(p) != width for p in pixels):
        raise ValueError(f"{path}: row width mismatch")
    return float(meta["lo"]), float(meta["hi"]), pixels


def symmetric_range(matrix):
    """(-m, m) with m = max |value|, or (-1, 1) for an all-zero field."""
    m = float(np.max(np.abs(matrix))) if np.size(matrix) else 0.0
    if not m > 0 or not math.isfinite(m):
        m = 1.0
    return -m, m
