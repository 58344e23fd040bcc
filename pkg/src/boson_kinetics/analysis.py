"""Metrics comparing kinetic steady states with analytic approximations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, UndefinedDivergenceError
from .kinetics import Occupations
from .lattice import ModeSpectrum
from .perturbation import PerturbativeSolution, bose_einstein


@dataclass(frozen=True)
class ComparisonReport:
    kl_vs_perturbative: float
    kl_vs_be: float
    ratio_R: float
    delta_n: float
    fitted_beta: float
    fitted_mu: float
    excluded_modes: tuple[int, ...] = field(default_factory=tuple)

    @property
    def reliable(self) -> bool:
        return len(self.excluded_modes) == 0


def _as_array(n) -> np.ndarray:
    return n.n if isinstance(n, Occupations) else np.asarray(n, dtype=float)


def kl_divergence(n_ref, n_approx, return_excluded: bool = False):
    """Relative entropy sum p ln(p/q) of the normalized densities
    p = n_ref/N_ref and q = n_approx/N_approx (natural log).

    Reference modes with zero occupation contribute zero.  Modes where the
    reference is positive but the approximant is not are excluded from the
    sum (and reported when return_excluded is set); the paper's regime has
    none, so their presence marks an unreliable comparison.
    """
    p_raw = _as_array(n_ref)
    q_raw = _as_array(n_approx)
    if np.any(p_raw < 0):
        raise InvalidParameterError("reference occupations must be non-negative")
    n_tot = p_raw.sum()
    if not n_tot > 0:
        raise InvalidParameterError("reference must contain particles")
    q_tot = q_raw.sum()
    if not q_tot > 0:
        raise UndefinedDivergenceError("approximant has no positive total weight")
    p = p_raw / n_tot
    q = q_raw / q_tot
    excluded = np.flatnonzero((p > 0) & (q <= 0))
    if excluded.size == p[p > 0].size:
        raise UndefinedDivergenceError(
            "KL divergence undefined: approximant non-positive on the whole support"
        )
    valid = (p > 0) & (q > 0)
    value = float(np.sum(p[valid] * np.log(p[valid] / q[valid])))
    if return_excluded:
        return value, [int(i) for i in excluded]
    return value


def kl_ratio(n_ref, n_pert, n_be) -> float:
    """R = KL(ref || BE) / KL(ref || perturbative); +inf when the
    perturbative solution matches the reference exactly (special point)."""
    kl_pert = kl_divergence(n_ref, n_pert)
    kl_be = kl_divergence(n_ref, n_be)
    if kl_pert == 0.0:
        return math.inf
    return kl_be / kl_pert


def ground_vs_top(n) -> float:
    """delta_n = n(ground state) - n(highest excited state), the Fig-3(b)
    caption convention (the opposite sign appears in running text)."""
    arr = _as_array(n)
    if arr.size < 2:
        raise InvalidParameterError("need at least two modes for delta_n")
    return float(arr[0] - arr[-1])


def fit_inverse_temperature(n, spectrum: ModeSpectrum) -> tuple[float, float]:
    """Least-squares fit of ln(1 + 1/n_k) against w_k.

    Returns (beta, mu): the slope and the intercept divided by -slope.
    Exact for Bose-Einstein input; slope 0 (uniform input) yields mu = nan.
    """
    arr = _as_array(n)
    if np.any(arr <= 0):
        raise InvalidParameterError("occupations must be positive to fit a temperature")
    y = np.log1p(1.0 / arr)
    slope, intercept = np.polyfit(spectrum.omega, y, 1)
    mu = -intercept / slope if slope != 0 else math.nan
    return float(slope), float(mu)


def compare_distributions(steady: Occupations, spectrum: ModeSpectrum,
                          solution: PerturbativeSolution) -> ComparisonReport:
    """Full comparison of a kinetic steady state against a perturbative
    solution and its Bose-Einstein baseline."""
    n_be = bose_einstein(spectrum.omega, solution.beta0, solution.mu)
    kl_pert, excluded = kl_divergence(steady, solution.n, return_excluded=True)
    kl_be = kl_divergence(steady, n_be)
    ratio = math.inf if kl_pert == 0.0 else kl_be / kl_pert
    beta_fit, mu_fit = fit_inverse_temperature(steady, spectrum)
    return ComparisonReport(
        kl_vs_perturbative=kl_pert,
        kl_vs_be=kl_be,
        ratio_R=ratio,
        delta_n=ground_vs_top(steady),
        fitted_beta=beta_fit,
        fitted_mu=mu_fit,
        excluded_modes=tuple(excluded),
    )
