"""The three Drude-perturbation experiments and the diagnostics used to read them.

Runs use a region of interest of length pi (A = pi/2), so dropping the right
endpoint leaves a periodic sample in which wavenumber ``xi`` maps to FFT bin
``xi / 2``.  Besides ``j - j0`` every run can also carry ``j - j_ref``, where
``j_ref`` is the constant-D march on the same grid.  The difference removes
the scheme's own O(dx) drift of the background from the perturbation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import PhysicalParams, solve_dispersion
from .drude import DrudeModel, scenario_model
from .grid import TrapezoidGrid, build_grid
from .marcher import SimOptions, SimulationResult, run_simulation

DEFAULT_DX = math.pi / 64
DEFAULT_M1 = 32
DEFAULT_N = 256


@dataclass
class ExperimentRun:
    name: str
    result: SimulationResult
    reference: SimulationResult | None

    @property
    def times(self) -> np.ndarray:
        return self.result.times()

    def jpert(self) -> np.ndarray:
        """j - j0 on the region of interest, rows = time layers."""
        return self.result.roi_matrix(self.result.j_pert)

    def jdiff(self) -> np.ndarray:
        """j - j_ref on the region of interest."""
        if self.reference is None:
            raise ValueError("run has no constant-D reference")
        return self.result.roi_matrix(self.result.j) - self.reference.roi_matrix(self.reference.j)


def experiment_grid(dx: float = DEFAULT_DX, m1: int = DEFAULT_M1, n: int = DEFAULT_N) -> TrapezoidGrid:
    return build_grid(dx, m1, n)


def run_experiment(name: str, params: PhysicalParams = PhysicalParams(), grid: TrapezoidGrid | None = None,
                   alpha: float = 0.02, with_reference: bool = True,
                   options: SimOptions = SimOptions()) -> ExperimentRun:
    grid = experiment_grid() if grid is None else grid
    mode = solve_dispersion(params)
    model = scenario_model(name, params, mode, alpha=alpha)
    result = run_simulation(params, model, grid, options, mode=mode)
    reference = None
    if with_reference:
        reference = run_simulation(params, DrudeModel.constant(params.d0), grid, options, mode=mode)
    return ExperimentRun(name=name, result=result, reference=reference)


def mode_coefficients(matrix: np.ndarray, dx: float):
    """Spatial Fourier coefficients per row of a periodic real sample.

    ``matrix`` includes both endpoints of the region; the last column is
    dropped.  Returns ``(wavenumbers, coeffs)`` for the non-negative bins,
    normalised so that ``a cos(xi x + c)`` gives ``|coeff| = a / 2``.
    """
    periodic = np.asarray(matrix)[:, :-1]
    npts = periodic.shape[1]
    coeffs = np.fft.rfft(periodic, axis=1) / npts
    wavenumbers = 2.0 * np.pi * np.fft.rfftfreq(npts, d=dx)
    return wavenumbers, coeffs


def dominant_mode(wavenumbers, coeffs, exclude_dc: bool = True) -> int:
    """Bin with the largest time-summed power."""
    power = np.sum(np.abs(coeffs) ** 2, axis=0)
    if exclude_dc:
        power[0] = -1.0
    return int(np.argmax(power))


def mode_index(wavenumbers, xi: float) -> int:
    idx = int(np.argmin(np.abs(wavenumbers - xi)))
    if not math.isclose(wavenumbers[idx], xi, rel_tol=1e-9):
        raise ValueError(f"wavenumber {xi} is not resolved by the periodic window")
    return idx


def _gate(amplitude, frac):
    return amplitude >= frac * np.max(amplitude)


def phase_velocity(coeff: np.ndarray, times: np.ndarray, xi: float, start: int = 0,
                   gate: float = 0.1) -> float:
    """Least-squares phase speed of one mode: phase(t) = c - omega t, speed = omega / xi."""
    c = coeff[start:]
    t = times[start:]
    keep = _gate(np.abs(c), gate)
    phase = np.unwrap(np.angle(c[keep]))
    slope = np.polyfit(t[keep], phase, 1)[0]
    return -slope / xi


def node_drift(coeff: np.ndarray, xi: float, start: int = 0, gate: float = 0.2) -> float:
    """Largest displacement of the nodes of one spatial mode over the window.

    Nodes of ``a(t) cos(xi x + phase)`` sit where ``xi x + phase = pi/2 mod pi``,
    so sign flips of ``a`` do not move them; the phase is compared mod pi
    against its circular mean.
    """
    c = coeff[start:]
    keep = _gate(np.abs(c), gate)
    doubled = np.exp(2j * np.angle(c[keep]))
    centre = np.angle(np.mean(doubled))
    dev = np.angle(doubled * np.exp(-1j * centre)) / 2.0
    return float(np.max(np.abs(dev)) / xi)


def l2_norms(matrix: np.ndarray, dx: float) -> np.ndarray:
    """Trapezoid-weighted L2 norm of every row."""
    w = np.ones(matrix.shape[1])
    w[0] = w[-1] = 0.5
    return np.sqrt(dx * np.sum(w * np.abs(matrix) ** 2, axis=1))


def is_monotone_increasing(values: np.ndarray) -> bool:
    return bool(np.all(np.diff(values) > 0))
