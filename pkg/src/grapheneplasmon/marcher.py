"""Explicit time marching of the reduced equation for v, and recovery of j = v_t.

Per node the discrete equation is

    (v[k+1] - 2 v[k] + v[k-1]) / dt^2 + A (v[k+1] - v[k-1]) / (2 dt) + B F = R

with A = 1/tau + eta D / 2 and B = -eta D / (2 pi).  Solving for v[k+1]
gives the update in ``step``; layer 1 comes from eliminating the ghost value
v[-1] with the central-difference initial condition (v[1] - v[-1]) / 2dt = j0.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .dispersion import BackgroundMode, PhysicalParams, background_current, background_fields, solve_dispersion
from .drude import DrudeModel, eval_drude
from .errors import IncompleteHistory, KernelTooShort, NonFiniteValue, ValidationError
from .grid import StateHistory, TrapezoidGrid
from .phi import build_weights, eval_F_layer
from .specfun import KernelTable, build_kernel_table

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepCoefficients:
    A: np.ndarray
    B: np.ndarray
    A_plus: np.ndarray
    A_minus: np.ndarray
    dt: float


def step_coefficients(params: PhysicalParams, model: DrudeModel, x, t: float, dt: float) -> StepCoefficients:
    d = np.asarray(eval_drude(model, x, t), dtype=float)
    a = params.inv_tau + 0.5 * params.eta * d
    b = -params.eta * d / (2.0 * math.pi)
    return StepCoefficients(A=a, B=b, A_plus=a / (2.0 * dt) + 1.0 / dt ** 2,
                            A_minus=a / (2.0 * dt) - 1.0 / dt ** 2, dt=dt)


def assemble_rhs(mode: BackgroundMode, model: DrudeModel, kernel: KernelTable, l, k: int):
    """R at nodes ``l`` (int or array) of layer ``k``; x = l dt, t = k dt."""
    if not 0 <= k < len(kernel):
        raise KernelTooShort(f"kernel table has {len(kernel)} entries, layer {k} requested")
    p = mode.params
    x = np.asarray(l, dtype=float) * kernel.dt
    t = k * kernel.dt
    d = np.asarray(eval_drude(model, x, t), dtype=float)
    j0 = background_current(mode, x, t)
    conv = 2.0 * np.exp(1j * p.xi0 * x) * kernel.conv_values[k]
    ex0 = background_fields(mode, x, 0.0, t)[0]
    r = 0.5 * p.eta * d * j0 + 0.5 * p.eta * d * conv + d * ex0
    return complex(r) if np.ndim(r) == 0 else r


def first_layer(coeffs: StepCoefficients, R0, Q):
    dt = coeffs.dt
    return 0.5 * dt * dt * (np.asarray(R0) - 2.0 * dt * coeffs.A_minus * np.asarray(Q))


def step(history: StateHistory, coeffs: StepCoefficients, F, R, k: int) -> np.ndarray:
    """Compute layer k + 1 from layers k, k - 1 and append it to ``history``."""
    if k < 1 or history.n_complete != k + 1:
        raise IncompleteHistory(f"step from layer {k} needs exactly layers 0..{k} complete, "
                                f"history has {history.n_complete}")
    dt = coeffs.dt
    v_k = history.v_layer(k)[1:-1]
    v_km1 = history.v_layer(k - 1)[2:-2]
    new = (np.asarray(R) - coeffs.B * np.asarray(F) + (2.0 / dt ** 2) * v_k
           + coeffs.A_minus * v_km1) / coeffs.A_plus
    history.append(new)
    return new


@dataclass(frozen=True)
class SimOptions:
    refine: int = 8
    debug: bool = False


@dataclass
class SimulationResult:
    grid: TrapezoidGrid
    mode: BackgroundMode
    model: DrudeModel
    v: StateHistory
    j: list = field(repr=False)
    j_pert: list = field(repr=False)
    sheet_energy: np.ndarray = field(repr=False)

    def roi(self, layers, k: int) -> np.ndarray:
        return layers[k][self.grid.roi(k)]

    def roi_matrix(self, layers) -> np.ndarray:
        """(n + 1) x (2 m1 + 1) array of a per-layer field over the region of interest."""
        return np.array([self.roi(layers, k) for k in range(self.grid.n + 1)])

    def roi_x(self) -> np.ndarray:
        return np.arange(-self.grid.m1, self.grid.m1 + 1) * self.grid.dx

    def times(self) -> np.ndarray:
        return np.arange(self.grid.n + 1) * self.grid.dt


def _check_finite(values, k, what="v"):
    if not np.all(np.isfinite(values)):
        raise NonFiniteValue(k, what)


def _recover_current(grid: TrapezoidGrid, history: StateHistory, q: np.ndarray):
    """j = v_t: central differences inside, three-point backward at the top.

    Layer 0 uses the ghost value v[-1] = v[1] - 2 dt Q of the first-layer
    formula, so the central difference there returns Q.
    """
    dt = grid.dt
    n = grid.n
    ghost = history.v_layer(1) - 2.0 * dt * q
    j = []
    for k in range(n + 1):
        out = np.full(grid.layer_size(k), np.nan, dtype=complex)
        if k == 0:
            out[1:-1] = (history.v_layer(1) - ghost) / (2.0 * dt)
        elif k < n:
            out[1:-1] = (history.v_layer(k + 1) - history.v_layer(k - 1)[2:-2]) / (2.0 * dt)
        else:
            prev = history.v_layer(n - 1)[1:-1]
            prev2 = ghost[2:-2] if n == 1 else history.v_layer(n - 2)[2:-2]
            out[:] = (3.0 * history.v_layer(n) - 4.0 * prev + prev2) / (2.0 * dt)
        j.append(out)
    return j


def trapezoid_weights(count: int) -> np.ndarray:
    w = np.ones(count)
    w[0] = w[-1] = 0.5
    return w


def run_simulation(params: PhysicalParams, model: DrudeModel, grid: TrapezoidGrid,
                   options: SimOptions = SimOptions(), mode: BackgroundMode | None = None) -> SimulationResult:
    """March layers 1..n and derive j, j - j0 and the sheet energy."""
    if not math.isclose(params.mu * params.eps, 1.0, rel_tol=1e-12):
        raise ValidationError("the dx = dt lattice needs unit wave speed (mu * eps = 1)")
    if not math.isclose(model.d0, params.d0, rel_tol=1e-12):
        raise ValidationError(f"Drude model d0 = {model.d0} differs from physical d0 = {params.d0}")
    mode = solve_dispersion(params) if mode is None else mode
    dt = grid.dt
    n = grid.n
    kernel = build_kernel_table(params.xi0 * params.c, dt, n, options.refine, s0=mode.s0)
    weights = build_weights(max(n - 1, 1))
    history = StateHistory(grid)

    # layer 1 spans the interior of layer 0
    l1 = grid.layer_indices(1)
    x1 = l1 * grid.dx
    coeffs = step_coefficients(params, model, x1, 0.0, dt)
    r0 = assemble_rhs(mode, model, kernel, l1, 0)
    q = background_current(mode, x1, 0.0)
    v1 = first_layer(coeffs, r0, q)
    _check_finite(v1, 1)
    history.append(v1)

    for k in range(1, n):
        lk = grid.layer_indices(k + 1)
        coeffs = step_coefficients(params, model, lk * grid.dx, k * dt, dt)
        F = eval_F_layer(history, weights, k, debug=options.debug)
        R = assemble_rhs(mode, model, kernel, lk, k)
        new = step(history, coeffs, F, R, k)
        _check_finite(new, k + 1)
        if log.isEnabledFor(logging.DEBUG) and k % 50 == 0:
            log.debug("layer %d/%d max|v| = %.4g", k + 1, n, float(np.max(np.abs(new))))

    j = _recover_current(grid, history, q)
    j_pert = []
    energy = np.empty(n + 1)
    wts = trapezoid_weights(2 * grid.m1 + 1)
    xr = np.arange(-grid.m1, grid.m1 + 1) * grid.dx
    for k in range(n + 1):
        x = grid.layer_x(k)
        j_pert.append(j[k] - background_current(mode, x, k * dt))
        jr = j[k][grid.roi(k)].real
        d = np.asarray(eval_drude(model, xr, k * dt), dtype=float)
        energy[k] = grid.dx * np.sum(wts * jr * jr / (2.0 * d))
    return SimulationResult(grid=grid, mode=mode, model=model, v=history, j=j,
                            j_pert=j_pert, sheet_energy=energy)


def sample_history(grid: TrapezoidGrid, func) -> StateHistory:
    """History filled with v = func(x, t) on every node (layer 0 must vanish)."""
    history = StateHistory(grid)
    for k in range(1, grid.n + 1):
        history.append(func(grid.layer_x(k), k * grid.dt))
    return history


def consistency_residual(params: PhysicalParams, model: DrudeModel, grid: TrapezoidGrid,
                         func, refine: int = 8, mode: BackgroundMode | None = None):
    """Residual of the discrete equation with ``func`` sampled on the lattice.

    Returns a list with the residual on the region of interest for layers
    k = 1..n - 1.
    """
    mode = solve_dispersion(params) if mode is None else mode
    dt = grid.dt
    kernel = build_kernel_table(params.xi0 * params.c, dt, grid.n, refine, s0=mode.s0)
    weights = build_weights(max(grid.n - 1, 1))
    history = sample_history(grid, func)
    out = []
    for k in range(1, grid.n):
        lk = grid.layer_indices(k + 1)
        c = step_coefficients(params, model, lk * grid.dx, k * dt, dt)
        F = eval_F_layer(history, weights, k)
        R = assemble_rhs(mode, model, kernel, lk, k)
        vp = history.v_layer(k + 1)
        v0 = history.v_layer(k)[1:-1]
        vm = history.v_layer(k - 1)[2:-2]
        res = (vp - 2.0 * v0 + vm) / dt ** 2 + c.A * (vp - vm) / (2.0 * dt) + c.B * F - R
        h = grid.half_width(k + 1)
        out.append(res[h - grid.m1: h + grid.m1 + 1])
    return out
