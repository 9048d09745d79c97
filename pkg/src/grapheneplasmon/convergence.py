"""Nested-mesh convergence study against the constant-D exact solution."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dispersion import PhysicalParams, background_current, exact_v, solve_dispersion
from .drude import DrudeModel
from .errors import LengthMismatch, NonPositiveError
from .grid import build_grid
from .marcher import SimOptions, run_simulation, trapezoid_weights

BASE_DX = 0.0105
BASE_M1 = 5
BASE_N = 10


def l2_error(numeric, exact, dx: float) -> float:
    """Trapezoid-weighted discrete L2 norm of numeric - exact over one layer."""
    numeric = np.asarray(numeric)
    exact = np.asarray(exact)
    if numeric.shape != exact.shape:
        raise LengthMismatch(f"layers differ in length: {numeric.shape} vs {exact.shape}")
    diff = np.abs(numeric - exact) ** 2
    return float(math.sqrt(dx * np.sum(trapezoid_weights(len(diff)) * diff)))


def estimated_order(e_prev: float, e_curr: float) -> float:
    if not (e_prev > 0 and e_curr > 0):
        raise NonPositiveError(f"errors must be positive, got {e_prev} and {e_curr}")
    return math.log(e_prev / e_curr) / math.log(2.0)


@dataclass
class LevelRecord:
    i: int
    dx: float
    m1: int
    n: int
    e: float
    r: float | None
    e_re: float
    r_re: float | None
    e_j: float
    r_j: float | None

    @property
    def A(self) -> float:
        return self.m1 * self.dx

    @property
    def T(self) -> float:
        return self.n * self.dx


@dataclass
class ConvergenceReport:
    params: PhysicalParams
    levels: list = field(default_factory=list)

    COLUMNS = ("i", "dx", "m1", "n", "e", "r", "e_re", "r_re", "e_j", "r_j")

    def rows(self):
        for rec in self.levels:
            yield tuple(getattr(rec, c) for c in self.COLUMNS)

    @property
    def errors(self) -> np.ndarray:
        return np.array([rec.e for rec in self.levels])

    @property
    def orders(self) -> list:
        return [rec.r for rec in self.levels]


def run_study(params: PhysicalParams = PhysicalParams(), levels: int = 5, dx0: float = BASE_DX,
              m1_0: int = BASE_M1, n0: int = BASE_N, options: SimOptions = SimOptions()) -> ConvergenceReport:
    """Level i uses dx0 / 2^i, m1_0 * 2^i, n0 * 2^i, so A and T stay fixed.

    ``e`` compares the complex v at T with the closed form, ``e_re`` the real
    parts only, and ``e_j`` the recovered current with j0.
    """
    if levels < 2:
        raise ValueError(f"a study needs at least 2 levels, got {levels}")
    mode = solve_dispersion(params)
    model = DrudeModel.constant(params.d0)
    report = ConvergenceReport(params=params)
    prev = None
    for i in range(levels):
        grid = build_grid(dx0 / 2 ** i, m1_0 * 2 ** i, n0 * 2 ** i)
        result = run_simulation(params, model, grid, options, mode=mode)
        x = result.roi_x()
        k = grid.n
        v_num = result.roi(result.v.v_layers, k)
        v_ex = exact_v(mode, x, grid.T)
        j_num = result.roi(result.j, k)
        e = l2_error(v_num, v_ex, grid.dx)
        e_re = l2_error(v_num.real, v_ex.real, grid.dx)
        e_j = l2_error(j_num, background_current(mode, x, grid.T), grid.dx)
        rec = LevelRecord(i=i, dx=grid.dx, m1=grid.m1, n=grid.n, e=e, r=None,
                          e_re=e_re, r_re=None, e_j=e_j, r_j=None)
        if prev is not None:
            rec.r = estimated_order(prev.e, e)
            rec.r_re = estimated_order(prev.e_re, e_re)
            rec.r_j = estimated_order(prev.e_j, e_j)
        report.levels.append(rec)
        prev = rec
    return report
