"""Drude weight models: constant, or D0 + alpha cos(xi1 x - omega1 t)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import BackgroundMode, PhysicalParams
from .errors import UnknownScenario, ValidationError

SCENARIOS = ("traveling", "standing", "growing")


@dataclass(frozen=True)
class DrudeModel:
    kind: str = "constant"
    d0: float = 0.675
    alpha: float = 0.0
    xi1: float = 0.0
    omega1: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "wavy"):
            raise ValidationError(f"kind must be 'constant' or 'wavy', got {self.kind!r}")
        if not self.d0 > 0:
            raise ValidationError(f"d0 must be positive, got {self.d0}")
        if self.kind == "constant" and self.alpha != 0:
            raise ValidationError("a constant Drude model must have alpha = 0")
        if not abs(self.alpha) < self.d0:
            raise ValidationError(f"|alpha| must be below d0 = {self.d0}, got alpha = {self.alpha}")

    @classmethod
    def constant(cls, d0: float) -> "DrudeModel":
        return cls(kind="constant", d0=d0)

    @classmethod
    def wavy(cls, d0: float, alpha: float, xi1: float, omega1: float) -> "DrudeModel":
        return cls(kind="wavy", d0=d0, alpha=alpha, xi1=xi1, omega1=omega1)


def eval_drude(model: DrudeModel, x, t):
    """D(x, t); broadcasts over array arguments."""
    if model.kind == "constant":
        d = np.full(np.broadcast(np.asarray(x), np.asarray(t)).shape, model.d0)
    else:
        d = model.d0 + model.alpha * np.cos(model.xi1 * np.asarray(x) - model.omega1 * np.asarray(t))
    return float(d) if np.ndim(d) == 0 else d


def scenario_frequency(name: str, params: PhysicalParams, mode: BackgroundMode, xi1: float) -> float:
    """omega1 for the traveling, standing and growing perturbations."""
    omega0 = mode.omega0
    if name == "traveling":
        return omega0
    if name == "standing":
        return -omega0
    if name == "growing":
        return math.sqrt(params.d0 * (params.xi0 + xi1) / (2.0 * params.eps)) - omega0
    raise UnknownScenario(f"unknown scenario {name!r}; expected one of {SCENARIOS}")


def scenario_model(name: str, params: PhysicalParams, mode: BackgroundMode,
                   alpha: float = 0.02, xi1: float | None = None) -> DrudeModel:
    """Wavy model for a named scenario; xi1 defaults to xi0."""
    xi1 = params.xi0 if xi1 is None else xi1
    return DrudeModel.wavy(params.d0, alpha, xi1, scenario_frequency(name, params, mode, xi1))
