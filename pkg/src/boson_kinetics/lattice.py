"""Single-particle mode structure of the 1D array.

Eigenmodes of a nearest-neighbor hopping chain (open or periodic), the
overlap factors entering the golden-rule rates, and the continuum density
of states of the band with its integrable edge singularities.

All energies are measured in units of the hopping J; the on-site frequency
is fixed to zero (rates depend only on energy differences).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError, OutOfBandError


class Boundary(enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class LatticeParams:
    """Chain geometry: L sites, hopping J > 0, on-site frequency omega0."""

    L: int
    J: float = 1.0
    omega0: float = 0.0
    boundary: Boundary = Boundary.OPEN

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 1:
            raise InvalidParameterError(f"L must be a positive integer, got {self.L}")
        if not (self.J > 0):
            raise InvalidParameterError(f"hopping J must be > 0, got {self.J}")
        if not isinstance(self.boundary, Boundary):
            raise InvalidParameterError(f"unknown boundary {self.boundary!r}")


@dataclass(frozen=True)
class ModeSpectrum:
    """Eigenmodes sorted by ascending energy.

    phi[m, j] is the amplitude of mode m at site j (real for open chains,
    complex plane waves for periodic ones).  hopping carries the energy
    unit so downstream formulas involving J need no extra argument.
    """

    k: np.ndarray
    omega: np.ndarray
    phi: np.ndarray
    hopping: float = 1.0

    @property
    def L(self) -> int:
        return len(self.omega)


def build_modes(params: LatticeParams) -> ModeSpectrum:
    """Diagonalize the chain: k grid, energies omega0 + 2J cos(k), mode
    functions fixed by the boundary condition.

    Open: k_m = pi m/(L+1), phi = sqrt(2/(L+1)) sin(k_m j).
    Periodic: k_m = 2 pi m/L folded to (-pi, pi], phi = exp(i k_m j)/sqrt(L).
    Modes are returned sorted by ascending energy, ties by ascending k.
    """
    L, J = params.L, params.J
    sites = np.arange(1, L + 1)
    if params.boundary is Boundary.OPEN:
        k = np.pi * np.arange(1, L + 1) / (L + 1)
        phi = np.sqrt(2.0 / (L + 1)) * np.sin(np.outer(k, sites))
    else:
        k = 2.0 * np.pi * np.arange(L) / L
        k = np.where(k > np.pi, k - 2.0 * np.pi, k)
        phi = np.exp(1j * np.outer(k, sites)) / np.sqrt(L)
    omega = params.omega0 + 2.0 * J * np.cos(k)
    order = np.lexsort((k, omega))
    return ModeSpectrum(k=k[order], omega=omega[order], phi=phi[order], hopping=J)


def density_of_states(omega, J: float = 1.0):
    """Per-mode density of states of the cosine band,
    D(w) = 1/(2 pi J sqrt(1 - (w/2J)^2)), defined only strictly inside
    the band."""
    w = np.asarray(omega, dtype=float)
    if np.any(np.abs(w) >= 2.0 * J):
        raise OutOfBandError(f"density of states needs |omega| < 2J, got {omega}")
    out = 1.0 / (2.0 * np.pi * J * np.sqrt(1.0 - (w / (2.0 * J)) ** 2))
    return out if out.ndim else float(out)


@lru_cache(maxsize=8)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def band_nodes(J: float = 1.0, n_nodes: int = 2048):
    """Gauss-Legendre nodes for integrals of the form int D(w) f(w) dw.

    The substitution w = 2J sin(theta) maps D(w) dw to d(theta)/pi, which
    removes the band-edge singularity exactly.  Returns (omega_nodes,
    weights) such that the integral is sum(weights * f(omega_nodes)).
    """
    x, w = _gauss_legendre(n_nodes)
    theta = 0.5 * np.pi * x
    return 2.0 * J * np.sin(theta), w / 2.0


def band_quadrature(f, J: float = 1.0, n_nodes: int = 2048) -> float:
    """int_{-2J}^{2J} D(w) f(w) dw by the singularity-removing substitution."""
    nodes, weights = band_nodes(J, n_nodes)
    return float(np.sum(weights * f(nodes)))


def overlap_matrix(spectrum: ModeSpectrum, mode: str = "site_resolved") -> np.ndarray:
    """Golden-rule overlap factors gamma_{kk'} for all mode pairs.

    site_resolved: gamma_{kk'} = sum_j |phi_k(j)|^2 |phi_k'(j)|^2, the
    incoherent sum over the L independent per-site reservoirs.
    uniform: constant 1/L.  Both are symmetric and strictly positive.
    """
    L = spectrum.L
    if mode == "uniform":
        return np.full((L, L), 1.0 / L)
    if mode != "site_resolved":
        raise InvalidParameterError(f"unknown gamma mode {mode!r}")
    p = np.abs(spectrum.phi) ** 2
    g = p @ p.T
    return 0.5 * (g + g.T)


def overlap_factor(spectrum: ModeSpectrum, k_index: int, kp_index: int,
                   mode: str = "site_resolved") -> float:
    """Single overlap factor gamma_{kk'}; see overlap_matrix."""
    if mode == "uniform":
        _ = spectrum.phi[k_index], spectrum.phi[kp_index]
        return 1.0 / spectrum.L
    if mode != "site_resolved":
        raise InvalidParameterError(f"unknown gamma mode {mode!r}")
    p_k = np.abs(spectrum.phi[k_index]) ** 2
    p_kp = np.abs(spectrum.phi[kp_index]) ** 2
    return float(np.sum(p_k * p_kp))
