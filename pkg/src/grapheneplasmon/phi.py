"""Lattice quadrature F[l, k] of the light-cone operator Phi[v].

    F[l, k] = (pi dt / 4) vxx[k][l]
              + dx * sum_{k'=1}^{k-1} sum_{l'=-k'+1}^{k'-1} w[k'][l'] vxx[k-k'][l-l']

with w[k'][l'] = sqrt(k'^2 - l'^2) / k'^2.  The k' = k row multiplies
vxx at t = 0, which is zero, and is dropped.

Every node's double sum runs k' ascending then l' ascending in a single
accumulator, so ``eval_F`` and ``eval_F_layer`` agree bitwise and the result
does not depend on how nodes are split across threads.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numba
import numpy as np

from .errors import IncompleteHistory, OutOfStencil
from .grid import StateHistory

# Older system TBB builds make numba warn and fall back anyway; skip them.
if "NUMBA_THREADING_LAYER" not in os.environ and "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@dataclass(frozen=True)
class WeightTriangle:
    """Row k' (1-based) occupies flat[(k'-1)**2 : k'**2], ordered l' = -k'+1 .. k'-1."""

    max_k: int
    flat: np.ndarray

    def row(self, kp: int) -> np.ndarray:
        if not 1 <= kp <= self.max_k:
            raise IndexError(f"row {kp} outside 1..{self.max_k}")
        return self.flat[(kp - 1) ** 2: kp ** 2]

    def weight(self, kp: int, lp: int) -> float:
        if abs(lp) >= kp:
            return 0.0
        return float(self.row(kp)[lp + kp - 1])


def build_weights(max_k: int) -> WeightTriangle:
    if max_k < 1:
        raise ValueError(f"max_k must be >= 1, got {max_k}")
    rows = []
    for kp in range(1, max_k + 1):
        lp = np.arange(-kp + 1, kp, dtype=float)
        rows.append(np.sqrt(kp * kp - lp * lp) / (kp * kp))
    flat = np.concatenate(rows)
    flat.setflags(write=False)
    return WeightTriangle(max_k=max_k, flat=flat)


@numba.njit(parallel=True, cache=True)
def _f_kernel(vxx, offsets, half, wflat, k, lo, hi, dt, dx, out):
    lead = 0.25 * math.pi * dt
    for idx in numba.prange(hi - lo + 1):
        l = lo + idx
        s = 0j
        for kp in range(1, k):
            kk = k - kp
            base = offsets[kk] + half[kk] + l
            wb = (kp - 1) * (kp - 1)
            for j in range(2 * kp - 1):
                s += wflat[wb + j] * vxx[base + kp - 1 - j]
        out[idx] = lead * vxx[offsets[k] + half[k] + l] + dx * s


def _target_range(history: StateHistory, k: int):
    history.require(k)
    h = history.grid.half_width(k)
    return (-h, h) if k == 0 else (-h + 1, h - 1)


def check_stencil(history: StateHistory, k: int, lo: int, hi: int):
    """Raise OutOfStencil unless every v_xx read for targets lo..hi has a stencil."""
    grid = history.grid
    for kp in range(0, k):
        kk = k - kp
        reach = max(kp - 1, 0)
        if max(abs(lo - reach), abs(hi + reach)) > grid.half_width(kk) - 1:
            raise OutOfStencil(f"F at layer {k} reads outside the stencil of layer {kk}")
    if k > 0 and not np.all(history.vxx_layer(0) == 0):
        raise OutOfStencil("v_xx at t = 0 must vanish identically")


def _compute(history, weights, k, lo, hi, debug):
    grid = history.grid
    if k - 1 > weights.max_k:
        raise IndexError(f"weights built to {weights.max_k}, layer {k} needs {k - 1}")
    if debug:
        check_stencil(history, k, lo, hi)
    out = np.empty(hi - lo + 1, dtype=complex)
    _f_kernel(history.vxx_flat, grid.offsets, grid.half_widths, weights.flat,
              k, lo, hi, grid.dt, grid.dx, out)
    return out


def eval_F(history: StateHistory, weights: WeightTriangle, l: int, k: int,
           debug: bool = False) -> complex:
    """F at node (l, k)."""
    if k >= history.n_complete:
        raise IncompleteHistory(f"layer {k} is not complete")
    lo, hi = _target_range(history, k)
    if not lo <= l <= hi:
        raise OutOfStencil(f"node {l} of layer {k} has no full light-cone stencil")
    return complex(_compute(history, weights, k, l, l, debug)[0])


def eval_F_layer(history: StateHistory, weights: WeightTriangle, k: int,
                 debug: bool = False) -> np.ndarray:
    """F for every node of layer k that has a stencil, i.e. l = lo..hi.

    For k = 0 that is the whole layer; otherwise the two edge nodes are
    excluded, which is exactly the width of layer k + 1.
    """
    if k >= history.n_complete:
        raise IncompleteHistory(f"layer {k} is not complete")
    lo, hi = _target_range(history, k)
    return _compute(history, weights, k, lo, hi, debug)
