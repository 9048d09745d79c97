"""Physical parameters, the background plasmon mode and its closed-form fields."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoOscillatoryRoot, ValidationError


@dataclass(frozen=True)
class PhysicalParams:
    """Nondimensional constants; ``tau=math.inf`` means no damping."""

    mu: float = 1.0
    eps: float = 1.0
    tau: float = math.inf
    d0: float = 0.675
    xi0: float = 4.0

    def __post_init__(self):
        for name in ("mu", "eps", "d0", "tau"):
            value = getattr(self, name)
            if not value > 0:
                raise ValidationError(f"{name} must be positive, got {value}")
        if not math.isfinite(self.xi0):
            raise ValidationError(f"xi0 must be finite, got {self.xi0}")

    @property
    def c(self) -> float:
        return 1.0 / math.sqrt(self.mu * self.eps)

    @property
    def eta(self) -> float:
        return math.sqrt(self.mu / self.eps)

    @property
    def inv_tau(self) -> float:
        return 0.0 if math.isinf(self.tau) else 1.0 / self.tau


def quartic_coefficients(params: PhysicalParams) -> np.ndarray:
    """Coefficients of the s0 quartic, highest power first."""
    it = params.inv_tau
    return np.array([
        1.0,
        -2.0 * it,
        it * it - params.eta ** 2 * params.d0 ** 2 / 4.0,
        0.0,
        -(params.d0 ** 2) * params.xi0 ** 2 / (4.0 * params.eps ** 2),
    ])


def quartic_residual(params: PhysicalParams, s0: complex) -> float:
    """|p(s0)| / max(1, |s0|^4)."""
    value = np.polyval(quartic_coefficients(params), s0)
    return abs(value) / max(1.0, abs(s0) ** 4)


def asymptotic_s0(params: PhysicalParams) -> complex:
    """Large-xi0 estimate  i sqrt(xi0 d0 / 2 eps) + 1 / (2 tau)."""
    return 1j * math.sqrt(abs(params.xi0) * params.d0 / (2.0 * params.eps)) + 0.5 * params.inv_tau


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    a = np.asarray(coeffs, dtype=complex) / coeffs[0]
    n = len(a) - 1
    comp = np.zeros((n, n), dtype=complex)
    comp[0, :] = -a[1:]
    comp[1:, :-1] = np.eye(n - 1)
    return np.linalg.eigvals(comp)


def _polish(coeffs, root, steps=3):
    dcoeffs = np.polyder(coeffs)
    for _ in range(steps):
        d = np.polyval(dcoeffs, root)
        if d == 0:
            break
        root = root - np.polyval(coeffs, root) / d
    return complex(root)


@dataclass(frozen=True)
class BackgroundMode:
    s0: complex
    gamma0: complex
    params: PhysicalParams

    @property
    def omega0(self) -> float:
        return self.s0.imag


def _decaying_sqrt(z: complex) -> complex:
    g = cmath.sqrt(z)
    return -g if g.real < 0 else g


def solve_dispersion(params: PhysicalParams) -> BackgroundMode:
    """Pick the oscillatory root s0 (Im > 0) of the dispersion quartic and its gamma0."""
    if params.xi0 == 0:
        raise NoOscillatoryRoot("xi0 = 0 has no oscillatory root")
    if params.inv_tau == 0.0:
        # quadratic in u = s0^2; the negative root gives s0 = +- i sqrt(-u)
        b = params.eta ** 2 * params.d0 ** 2 / 4.0
        c = params.d0 ** 2 * params.xi0 ** 2 / (4.0 * params.eps ** 2)
        # (b - sqrt(b^2 + 4c)) / 2 written without cancellation
        u = -2.0 * c / (b + math.sqrt(b * b + 4.0 * c))
        s0 = complex(0.0, math.sqrt(-u))
    else:
        coeffs = quartic_coefficients(params)
        roots = _companion_roots(coeffs)
        scale = max(1.0, float(np.max(np.abs(roots))))
        candidates = [r for r in roots if r.imag > 1e-12 * scale]
        if not candidates:
            raise NoOscillatoryRoot(f"no root with positive imaginary part for {params}")
        target = asymptotic_s0(params)
        s0 = min(candidates, key=lambda r: abs(r - target))
        s0 = _polish(coeffs, s0)
    gamma0 = _decaying_sqrt(params.mu * params.eps * s0 * s0 + params.xi0 ** 2)
    return BackgroundMode(s0=s0, gamma0=gamma0, params=params)


def _sgn(y):
    return np.copysign(1.0, y)


def background_fields(mode: BackgroundMode, x, y, t):
    """(Ex0, Ey0, Hz0) at (x, y, t); arrays broadcast.

    ``sgn`` follows the sign bit, so ``y = 0.0`` is the 0+ side and
    ``y = -0.0`` the 0- side.
    """
    p = mode.params
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    base = np.exp(1j * p.xi0 * x) * np.exp(-mode.gamma0 * np.abs(y)) * np.exp(-mode.s0 * t)
    sgn = _sgn(y)
    ex = mode.gamma0 / (p.eps * mode.s0) * base
    ey = 1j * p.xi0 / (p.eps * mode.s0) * sgn * base
    hz = sgn * base
    if ex.ndim == 0:
        return complex(ex), complex(ey), complex(hz)
    return ex, ey, hz


def background_current(mode: BackgroundMode, x, t):
    """j0 = 2 exp(i xi0 x) exp(-s0 t)."""
    j = 2.0 * np.exp(1j * mode.params.xi0 * np.asarray(x, dtype=float)) * np.exp(
        -mode.s0 * np.asarray(t, dtype=float))
    return complex(j) if np.ndim(j) == 0 else j


def exact_v(mode: BackgroundMode, x, t):
    """Time integral of j0 from 0 to t: (2 e^{i xi0 x} / s0)(1 - e^{-s0 t})."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    v = 2.0 * np.exp(1j * mode.params.xi0 * x) / mode.s0 * (1.0 - np.exp(-mode.s0 * t))
    return complex(v) if np.ndim(v) == 0 else v


def background_box(mode: BackgroundMode, box, res: int, t: float = 0.0):
    """Sample Ex0 and Hz0 on a res x res grid over box = (x0, x1, y0, y1).

    Rows follow increasing y.  Returns ``(xs, ys, ex, hz)``.
    """
    x0, x1, y0, y1 = box
    xs = np.linspace(x0, x1, res)
    ys = np.linspace(y0, y1, res)
    X, Y = np.meshgrid(xs, ys)
    ex, _, hz = background_fields(mode, X, Y, t)
    return xs, ys, ex, hz
