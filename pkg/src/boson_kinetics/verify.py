"""Built-in oracle suite behind the `verify` CLI subcommand.

Each check pits an implementation path against an independent route
(quadrature identities, scalar root-finding, closed forms) and prints one
PASS/FAIL line.  Deterministic: fixed seed, no wall clock.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .kinetics import (
    Occupations,
    build_rate_context,
    early_time_rate,
    find_steady_state,
    rhs,
    uniform_occupations,
)
from .lattice import Boundary, LatticeParams, band_quadrature, build_modes
from .perturbation import (
    bose_einstein,
    deformed_distribution,
    energy_dependent_beta,
    residual_supplemental_odes,
    solve_chemical_potential,
)
from .reservoir import ReservoirParams, base_inverse_temperature, noise_spectrum


def two_mode_fixed_point(res: ReservoirParams, omega1: float, omega2: float,
                         N: float) -> np.ndarray:
    """Detailed-balance fixed point of the two-mode kinetics by scalar
    root-finding on the flux balance."""
    a = noise_spectrum(omega1 - omega2, res)  # loss 1 -> 2
    b = noise_spectrum(omega2 - omega1, res)  # loss 2 -> 1

    def balance(n1):
        n2 = N - n1
        return a * n1 * (n2 + 1.0) - b * n2 * (n1 + 1.0)

    n1 = brentq(balance, 0.0, N, xtol=1e-15, rtol=8.9e-16)
    return np.array([n1, N - n1])


def check_dos_normalization():
    value = band_quadrature(lambda w: np.ones_like(w), J=1.0)
    return abs(value - 1.0) < 1e-10, f"band quadrature of D = {value!r}"


def check_two_mode_oracle():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(3):
        delta = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 3.0)
        res = ReservoirParams(chi=1e-3, Omega0=0.1, Delta=delta,
                              kappa=rng.uniform(0.4, 2.0))
        spectrum = build_modes(LatticeParams(L=2))
        ctx = build_rate_context(spectrum, res, "uniform")
        N = rng.uniform(0.5, 10.0)
        steady = find_steady_state(uniform_occupations(2, N), ctx,
                                   residual_tol=1e-12, tau_max=1e9)
        target = two_mode_fixed_point(res, spectrum.omega[0], spectrum.omega[1], N)
        worst = max(worst, float(np.max(np.abs(steady.n - target))))
    return worst < 1e-8, f"max |n - fixed point| = {worst:.2e}"


def check_mu_solver():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(10):
        L = int(rng.integers(2, 150))
        spectrum = build_modes(LatticeParams(L=L))
        beta0 = rng.choice([-1.0, 1.0]) * rng.uniform(0.01, 3.0)
        N = rng.uniform(0.5, 200.0)
        mu = solve_chemical_potential(spectrum, N, beta0)
        total = float(np.sum(bose_einstein(spectrum.omega, beta0, mu)))
        worst = max(worst, abs(total - N) / N)
    return worst < 1e-10, f"max |sum n_BE - N|/N = {worst:.2e}"


def check_special_point():
    kappa = 1.0
    res = ReservoirParams(chi=1e-3, Omega0=0.1, Delta=-math.sqrt(3.0) * kappa / 2.0,
                          kappa=kappa)
    spectrum = build_modes(LatticeParams(L=100))
    solution = deformed_distribution(spectrum, 50.0, res)
    n_be = bose_einstein(spectrum.omega, solution.beta0, solution.mu)
    dev = float(np.max(np.abs(solution.n - n_be)))
    beta = energy_dependent_beta(spectrum.omega, res)
    beta0 = base_inverse_temperature(res)
    beta_dev = float(np.max(np.abs(beta - beta0)))
    ok = dev < 1e-12 and beta_dev == 0.0 and solution.c == 0.0
    return ok, f"max |n - n_BE| = {dev:.2e}, max |beta - beta0| = {beta_dev:.2e}"


def check_supplemental_odes():
    spectrum = build_modes(LatticeParams(L=100))
    worst = 0.0
    for delta, kappa in ((-3.0, 1.0), (-2.0, 3.0)):
        res = ReservoirParams(chi=1e-3, Omega0=0.1, Delta=delta, kappa=kappa)
        solution = deformed_distribution(spectrum, 50.0, res)
        residuals = residual_supplemental_odes(solution, spectrum, res)
        worst = max(worst, *residuals.values())
    return worst < 1e-6, f"max ODE residual = {worst:.2e}"


def check_early_time_antisymmetry():
    rng = np.random.default_rng(13)
    lattice = LatticeParams(L=100)
    grid = np.linspace(-1.9, 1.9, 41)
    worst = 0.0
    for _ in range(2):
        res = ReservoirParams(chi=1e-3, Omega0=0.1,
                              Delta=rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 4.0),
                              kappa=rng.uniform(0.2, 3.0))
        rates = np.array([early_time_rate(w, 0.5, lattice, res) for w in grid])
        scale = float(np.max(np.abs(rates)))
        worst = max(worst, float(np.max(np.abs(rates + rates[::-1]))) / scale)
    return worst < 1e-8, f"max |rate(w) + rate(-w)| / max|rate| = {worst:.2e}"


def check_rhs_conservation():
    rng = np.random.default_rng(17)
    spectrum = build_modes(LatticeParams(L=60, boundary=Boundary.PERIODIC))
    res = ReservoirParams(chi=1e-3, Omega0=0.1, Delta=-2.0, kappa=0.7)
    ctx = build_rate_context(spectrum, res)
    worst = 0.0
    for _ in range(5):
        n = rng.uniform(0.0, 3.0, size=60)
        dn = rhs(n, ctx)
        worst = max(worst, abs(dn.sum()) / (np.max(np.abs(dn)) * 60))
    return worst < 1e-14, f"max |sum dn| / (L max|dn|) = {worst:.2e}"


CHECKS = [
    ("dos-normalization", check_dos_normalization),
    ("two-mode-oracle", check_two_mode_oracle),
    ("mu-solver", check_mu_solver),
    ("special-point-collapse", check_special_point),
    ("supplemental-ode-residuals", check_supplemental_odes),
    ("early-time-antisymmetry", check_early_time_antisymmetry),
    ("rhs-conservation", check_rhs_conservation),
]


def run_verification(stream=None) -> bool:
    """Run every check, print one line each; True when all pass."""
    import sys

    stream = stream or sys.stdout
    all_ok = True
    for name, check in CHECKS:
        ok, detail = check()
        all_ok &= ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=stream)
    return all_ok
