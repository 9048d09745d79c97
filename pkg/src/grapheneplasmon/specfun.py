"""Bessel J1 and the time kernel k1 with its convolution against exp(-s0 t).

J1 is evaluated in three regimes:

* ``|z| <= 8``: power series (largest term ~1e2, so cancellation costs < 1e-14)
* ``8 < |z| < 25``: Miller backward recurrence normalised by J0 + 2 sum J_2k = 1
* ``|z| >= 25``: Hankel asymptotic expansion, truncated at its smallest term
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SERIES_MAX = 8.0
ASYMPTOTIC_MIN = 25.0


def _j1_series(z: float) -> float:
    q = -0.25 * z * z
    term = 0.5 * z
    total = term
    m = 0
    while True:
        m += 1
        term *= q / (m * (m + 1))
        total += term
        if abs(term) < 1e-17 * abs(total) or m > 60:
            return total


def _j1_miller(z: float) -> float:
    n_start = 2 * ((int(z) + 40) // 2)
    j_next, j_cur = 0.0, 1e-30
    norm = 0.0
    j1 = 0.0
    # j_cur holds J_k for k = n_start, n_start - 1, ..., 0
    for k in range(n_start, 0, -1):
        j_prev = (2.0 * k / z) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if k - 1 == 1:
            j1 = j_cur
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            norm *= 1e-250
            j1 *= 1e-250
    norm += j_cur  # J_0
    return j1 / norm


def _j1_asymptotic(z: float) -> float:
    mu = 4.0
    p, q = 0.0, 0.0
    term = 1.0
    prev = math.inf
    k = 0
    while True:
        # term = a_k(1) / z^k with a_k = prod_{i<=k} (mu - (2i-1)^2) / (k! 8^k)
        mag = abs(term)
        if mag > prev or mag < 1e-17:
            break
        prev = mag
        if k % 4 == 0:
            p += term
        elif k % 4 == 1:
            q += term
        elif k % 4 == 2:
            p -= term
        else:
            q -= term
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
    chi = z - 0.75 * math.pi
    return math.sqrt(2.0 / (math.pi * z)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_j1(z: float) -> float:
    """Bessel function of the first kind, order one, for real ``z``."""
    z = float(z)
    if z < 0.0:
        return -bessel_j1(-z)
    if z == 0.0:
        return 0.0
    if z <= SERIES_MAX:
        return _j1_series(z)
    if z < ASYMPTOTIC_MIN:
        return _j1_miller(z)
    return _j1_asymptotic(z)


def k1_integrand(xi: float, tp: float) -> float:
    """(xi / tp) * J1(xi * tp), continued by xi**2 / 2 at tp = 0."""
    if tp < 0:
        raise ValueError(f"tp must be non-negative, got {tp}")
    if tp == 0.0:
        return 0.5 * xi * xi
    return xi / tp * bessel_j1(xi * tp)


@dataclass(frozen=True)
class KernelTable:
    """k1(xi, k dt) and (k1 *_t exp(-s0 t))(k dt) for k = 0..n_layers."""

    xi: float
    dt: float
    refine: int
    s0: complex
    values: np.ndarray
    conv_values: np.ndarray

    def __len__(self):
        return len(self.values)


def build_kernel_table(xi: float, dt: float, n_layers: int, refine: int = 8, *,
                       s0: complex) -> KernelTable:
    """Tabulate k1 and its convolution with exp(-s0 t) on the time grid.

    Both integrals use the composite trapezoidal rule on a subgrid of
    ``refine`` cells per step.  The convolution is factored as
    ``exp(-s0 t_k) * int_0^{t_k} k1(tau) exp(s0 tau) dtau`` so that a single
    cumulative sum serves every layer.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if n_layers < 1:
        raise ValueError(f"n_layers must be >= 1, got {n_layers}")
    if refine < 1:
        raise ValueError(f"refine must be >= 1, got {refine}")

    h = dt / refine
    tau = h * np.arange(n_layers * refine + 1)
    f = np.array([k1_integrand(xi, t) for t in tau])
    k1_fine = np.concatenate(([0.0], np.cumsum(0.5 * h * (f[1:] + f[:-1]))))

    s0 = complex(s0)
    g = k1_fine * np.exp(s0 * tau)
    g_cum = np.concatenate(([0j], np.cumsum(0.5 * h * (g[1:] + g[:-1]))))

    idx = refine * np.arange(n_layers + 1)
    t_layers = dt * np.arange(n_layers + 1)
    values = k1_fine[idx]
    conv = np.exp(-s0 * t_layers) * g_cum[idx]
    values.setflags(write=False)
    conv.setflags(write=False)
    return KernelTable(xi=float(xi), dt=float(dt), refine=int(refine), s0=s0,
                       values=values, conv_values=conv)
