"""Golden-rule scattering kinetics of the mode occupations.

The rate for a particle to scatter from mode k to k' is
gamma_{kk'} chi^2 S(w_k - w_k') n_k (n_k' + 1); summing gain and loss over
partners gives the coupled kinetic equations integrated here.  Time is
dimensionless throughout, tau = chi^2 t / J, which removes chi from the
right-hand side entirely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    ConvergenceError,
    InvalidParameterError,
    OutOfBandError,
    StiffnessError,
)
from .lattice import LatticeParams, ModeSpectrum, band_nodes, overlap_matrix
from .reservoir import ReservoirParams, noise_spectrum

_POSITIVITY_TOL = -1e-12
_CONSERVATION_RTOL = 1e-9


@dataclass(frozen=True)
class Occupations:
    """Mean occupations per mode at dimensionless time tau, with the nominal
    total N they must conserve."""

    n: np.ndarray
    tau: float = 0.0
    N: float | None = None

    def __post_init__(self):
        n = np.asarray(self.n, dtype=float)
        object.__setattr__(self, "n", n)
        if self.N is None:
            object.__setattr__(self, "N", float(n.sum()))
        if np.any(n < _POSITIVITY_TOL):
            raise InvalidParameterError(
                f"negative occupation {n.min():.3e} at tau={self.tau}"
            )
        if abs(n.sum() - self.N) > _CONSERVATION_RTOL * self.N:
            raise InvalidParameterError(
                f"sum(n) = {n.sum()!r} drifted from N = {self.N!r} at tau={self.tau}"
            )


def uniform_occupations(L: int, N: float) -> Occupations:
    return Occupations(n=np.full(L, N / L), tau=0.0, N=float(N))


@dataclass(frozen=True)
class RateContext:
    """Occupation-independent part of the rates on the mode grid.

    S_matrix[k, k'] = S(w_k - w_k'); the diagonal holds S(0) but never
    enters (k' = k is excluded from the kinetic sums).
    """

    gamma: np.ndarray
    S_matrix: np.ndarray
    chi_sq: float
    hopping: float = 1.0
    _weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not np.allclose(self.gamma, self.gamma.T, rtol=0, atol=1e-12):
            raise InvalidParameterError("gamma matrix must be symmetric")
        # loss weight k -> k', in tau units (J S is dimensionless); zero
        # coupling freezes the dynamics in any time parametrization.
        w = self.hopping * self.gamma * self.S_matrix
        if self.chi_sq == 0.0:
            w = np.zeros_like(w)
        np.fill_diagonal(w, 0.0)
        w.setflags(write=False)
        object.__setattr__(self, "_weights", w)


@dataclass(frozen=True)
class Trajectory:
    snapshots: list[Occupations]
    converged: bool
    final_residual: float


def build_rate_context(spectrum: ModeSpectrum, reservoir_params: ReservoirParams,
                       gamma_mode: str = "site_resolved") -> RateContext:
    """Precompute gamma and S on the mode grid."""
    omega = spectrum.omega
    s = noise_spectrum(omega[:, None] - omega[None, :], reservoir_params)
    return RateContext(
        gamma=overlap_matrix(spectrum, gamma_mode),
        S_matrix=s,
        chi_sq=reservoir_params.chi**2,
        hopping=spectrum.hopping,
    )


def rhs(n: np.ndarray, ctx: RateContext) -> np.ndarray:
    """dn_k/dtau.

    Each unordered pair contributes one antisymmetric flux, applied with
    opposite signs, so sum_k dn_k/dtau vanishes to round-off by
    construction.
    """
    n = np.asarray(n, dtype=float)
    # X[k, k'] = weight * n_k (n_k' + 1): directed loss flux k -> k'
    x = ctx._weights * (n[:, None] * (n + 1.0)[None, :])
    return (x.T - x).sum(axis=1)


def steady_state_residual(n: np.ndarray, ctx: RateContext, N: float | None = None) -> float:
    """Dimensionless stationarity measure max_k |dn_k/dtau| / N."""
    n = np.asarray(n, dtype=float)
    total = float(n.sum()) if N is None else float(N)
    return float(np.max(np.abs(rhs(n, ctx))) / total)


def _integrate(n0: np.ndarray, ctx: RateContext, tau0: float, tau1: float,
               t_eval, rel_tol: float, abs_tol: float):
    sol = solve_ivp(
        lambda _t, y: rhs(y, ctx),
        (tau0, tau1),
        n0,
        method="RK45",
        t_eval=t_eval,
        rtol=rel_tol,
        atol=abs_tol,
    )
    if not sol.success:
        if "step size" in sol.message.lower():
            raise StiffnessError(
                f"integrator step size underflow: {sol.message}",
                tau=float(sol.t[-1]) if sol.t.size else tau0,
                state=sol.y[:, -1] if sol.y.size else n0,
            )
        raise ConvergenceError(f"integration failed: {sol.message}")
    return sol


def evolve(n0: Occupations, ctx: RateContext, tau_end: float,
           output_taus=None, rel_tol: float = 1e-8,
           abs_tol: float | None = None) -> Trajectory:
    """Integrate the kinetic equations from n0 up to tau_end, recording
    snapshots at the requested times (default: tau_end only)."""
    if not (tau_end > n0.tau):
        raise InvalidParameterError(f"tau_end must exceed {n0.tau}, got {tau_end}")
    if output_taus is None:
        output_taus = [tau_end]
    taus = np.asarray(output_taus, dtype=float)
    if taus.size == 0:
        raise InvalidParameterError("output_taus must be non-empty")
    if np.any(np.diff(taus) <= 0):
        raise InvalidParameterError("output_taus must be strictly increasing")
    if taus[0] < n0.tau or taus[-1] > tau_end:
        raise InvalidParameterError(
            f"output_taus must lie within [{n0.tau}, {tau_end}]"
        )
    if abs_tol is None:
        abs_tol = 1e-12 * n0.N

    sol = _integrate(n0.n, ctx, n0.tau, tau_end, taus, rel_tol, abs_tol)
    snapshots = [
        Occupations(n=sol.y[:, i], tau=float(sol.t[i]), N=n0.N)
        for i in range(sol.t.size)
    ]
    final = snapshots[-1] if snapshots else n0
    return Trajectory(
        snapshots=snapshots,
        converged=True,
        final_residual=steady_state_residual(final.n, ctx, n0.N),
    )


def find_steady_state(n0: Occupations, ctx: RateContext,
                      residual_tol: float = 1e-10, tau_max: float = 1e7,
                      rel_tol: float = 1e-8, abs_tol: float | None = None,
                      first_window: float = 1.0) -> Occupations:
    """Time-march in geometrically growing windows until the stationarity
    residual drops below residual_tol; raises ConvergenceError (with the
    residual history) if tau_max is exhausted first."""
    if abs_tol is None:
        abs_tol = 1e-12 * n0.N
    history = [(n0.tau, steady_state_residual(n0.n, ctx, n0.N))]
    if history[0][1] < residual_tol:
        return n0

    tau = n0.tau
    state = n0.n
    window = first_window
    while tau < tau_max:
        tau_next = min(tau + window, tau_max)
        sol = _integrate(state, ctx, tau, tau_next, None, rel_tol, abs_tol)
        state = sol.y[:, -1]
        tau = tau_next
        res = steady_state_residual(state, ctx, n0.N)
        history.append((tau, res))
        if res < residual_tol:
            return Occupations(n=state, tau=tau, N=n0.N)
        window *= 4.0
    raise ConvergenceError(
        f"residual {history[-1][1]:.3e} still above {residual_tol:.3e} "
        f"at tau_max = {tau_max:g}",
        residual_history=history,
    )


def early_time_rate(omega_k: float, n0_uniform: float,
                    lattice_params: LatticeParams,
                    reservoir_params: ReservoirParams,
                    gamma: float | None = None, n_nodes: int = 2048) -> float:
    """Initial growth rate of n(w_k) from a uniform distribution, in units
    of chi^2/J.

    Integrates D(w') [S(w' - w_k) - S(w_k - w')] over the band with the
    edge-singularity-removing sine substitution and Gauss-Legendre nodes.
    The overlap factor defaults to the uniform value 1/L.
    """
    J, L = lattice_params.J, lattice_params.L
    if not abs(omega_k) < 2.0 * J:
        raise OutOfBandError(f"omega_k must satisfy |omega_k| < 2J, got {omega_k}")
    if n0_uniform < 0:
        raise InvalidParameterError(f"n0 must be >= 0, got {n0_uniform}")
    g = 1.0 / L if gamma is None else gamma
    nodes, weights = band_nodes(J, n_nodes)
    integrand = noise_spectrum(nodes - omega_k, reservoir_params) - noise_spectrum(
        omega_k - nodes, reservoir_params
    )
    return float(g * n0_uniform * (n0_uniform + 1.0) * J * np.sum(weights * integrand))
