"""Consistency residual of the discrete equation on the exact constant-D solution.

Compares the scheme's F lattice sum with the operator evaluated by adaptive
quadrature, which isolates the quadrature's share of the residual.

    python scripts/residual_order.py --levels 4
"""
import argparse
import math

import numpy as np
from scipy import integrate, special

from grapheneplasmon.dispersion import PhysicalParams, exact_v, solve_dispersion
from grapheneplasmon.drude import DrudeModel
from grapheneplasmon.grid import build_grid
from grapheneplasmon.marcher import assemble_rhs, consistency_residual, step_coefficients
from grapheneplasmon.specfun import build_kernel_table


def exact_phi_amplitude(mode, t):
    xi, s0 = mode.params.xi0, mode.s0

    def f(tp):
        q = (2 / s0) * (1 - np.exp(-s0 * (t - tp)))
        return special.j1(xi * tp) / tp * q if tp > 0 else 0.5 * xi * q

    re = integrate.quad(lambda s: f(s).real, 0, t, epsabs=1e-14, epsrel=1e-12)[0]
    im = integrate.quad(lambda s: f(s).imag, 0, t, epsabs=1e-14, epsrel=1e-12)[0]
    return -math.pi * xi * complex(re, im)


def exact_operator_residual(params, mode, model, grid):
    dt = grid.dt
    kernel = build_kernel_table(params.xi0, dt, grid.n, 16, s0=mode.s0)
    l = np.arange(-grid.m1, grid.m1 + 1)
    x = l * dt
    total = 0.0
    for k in range(1, grid.n):
        c = step_coefficients(params, model, x, k * dt, dt)
        v = [exact_v(mode, x, (k + s) * dt) for s in (-1, 0, 1)]
        phi = np.exp(1j * params.xi0 * x) * exact_phi_amplitude(mode, k * dt)
        res = ((v[2] - 2 * v[1] + v[0]) / dt ** 2 + c.A * (v[2] - v[0]) / (2 * dt) + c.B * phi
               - assemble_rhs(mode, model, kernel, l, k))
        total += np.sum(np.abs(res) ** 2)
    return math.sqrt(grid.dx * dt * total)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args()
    params = PhysicalParams()
    mode = solve_dispersion(params)
    model = DrudeModel.constant(params.d0)
    prev = None
    print(f"{'i':>2} {'dx':>10} {'lattice F':>12} {'ratio':>6} {'exact Phi':>12} {'ratio':>6}")
    for i in range(args.levels):
        g = build_grid(0.0105 / 2 ** i, 5 * 2 ** i, 10 * 2 ** i)
        res = consistency_residual(params, model, g, lambda x, t: exact_v(mode, x, t), refine=16, mode=mode)
        lattice = math.sqrt(g.dx * g.dt * sum(np.sum(np.abs(r) ** 2) for r in res))
        exact = exact_operator_residual(params, mode, model, g)
        if prev is None:
            print(f"{i:>2} {g.dx:>10.6f} {lattice:>12.4e} {'':>6} {exact:>12.4e}")
        else:
            print(f"{i:>2} {g.dx:>10.6f} {lattice:>12.4e} {prev[0] / lattice:>6.2f} "
                  f"{exact:>12.4e} {prev[1] / exact:>6.2f}")
        prev = (lattice, exact)


if __name__ == "__main__":
    main()
