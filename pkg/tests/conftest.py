import math
import os

import mpmath
import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from scipy import integrate, special

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def j1_series(z, terms=40):
    """Power series for J1 in exact-ish arithmetic, independent of the package."""
    with mpmath.workdps(40 + int(abs(z)) // 2):
        z = mpmath.mpf(z)
        s = mpmath.mpf(0)
        for m in range(terms):
            s += (-1) ** m * (z / 2) ** (2 * m + 1) / (mpmath.factorial(m) * mpmath.factorial(m + 1))
        return float(s)


def phi_plane_wave(xi, q, t):
    """Amplitude of Phi[e^{i xi x} q(t)] / e^{i xi x}, by adaptive quadrature.

    The semicircle integral of a plane wave is pi a J1(xi a) / xi, which turns
    the light-cone operator into a 1-D convolution in time.
    """
    def f(tp):
        return special.j1(xi * tp) / tp * q(t - tp) if tp > 0 else 0.5 * xi * q(t)
    re = integrate.quad(lambda s: np.real(f(s)), 0.0, t, epsabs=1e-15, epsrel=1e-12, limit=200)[0]
    im = integrate.quad(lambda s: np.imag(f(s)), 0.0, t, epsabs=1e-15, epsrel=1e-12, limit=200)[0]
    return -math.pi * xi * complex(re, im)


@pytest.fixture
def default_mode():
    from grapheneplasmon.dispersion import PhysicalParams, solve_dispersion
    return solve_dispersion(PhysicalParams())


@pytest.fixture(scope="session")
def experiment_runs():
    """The three perturbation scenarios on the default pi-periodic window."""
    from grapheneplasmon.experiments import run_experiment
    return {name: run_experiment(name) for name in ("traveling", "standing", "growing")}
