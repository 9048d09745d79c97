"""Graphene plasmon simulator with a time- and space-dependent Drude weight."""
from .dispersion import BackgroundMode, PhysicalParams, solve_dispersion
from .drude import DrudeModel
from .grid import TrapezoidGrid, build_grid
from .marcher import SimOptions, SimulationResult, run_simulation

__all__ = [
    "BackgroundMode", "PhysicalParams", "solve_dispersion", "DrudeModel",
    "TrapezoidGrid", "build_grid", "SimOptions", "SimulationResult", "run_simulation",
]
