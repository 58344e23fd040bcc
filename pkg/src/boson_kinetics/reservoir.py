"""Engineered bath: driven lossy cavity in its steady state.

Closed-form Lorentzian noise spectrum, the zero-frequency inverse
temperature beta0, and the per-transition effective temperature defined by
the detailed-balance ratio S(w)/S(-w), both exactly and in its quadratic
small-frequency expansion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateExpansionError, InvalidParameterError

# |3(kappa/2)^2 - Delta^2| below this many ULPs of its natural scale is
# treated as exactly zero: sqrt(3) is not representable, so parameter sets
# aimed at the special point Delta = -sqrt(3) kappa/2 land within a few
# ULPs of it and must collapse cleanly.
_SPECIAL_POINT_ULPS = 16


@dataclass(frozen=True)
class ReservoirParams:
    """Drive/cavity parameters: coupling chi, drive amplitude Omega0,
    detuning Delta = omega_drive - omega_cavity, decay kappa."""

    chi: float
    Omega0: float
    Delta: float
    kappa: float

    def __post_init__(self):
        if not (self.kappa > 0):
            raise InvalidParameterError(f"kappa must be > 0, got {self.kappa}")
        if self.Omega0 < 0:
            raise InvalidParameterError(f"Omega0 must be >= 0, got {self.Omega0}")
        if self.chi < 0:
            raise InvalidParameterError(f"chi must be >= 0, got {self.chi}")
        for name in ("chi", "Omega0", "Delta", "kappa"):
            if not np.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")


def steady_amplitude_sq(params: ReservoirParams) -> float:
    """|a0|^2 = Omega0^2 / (Delta^2 + (kappa/2)^2) of the displaced cavity."""
    return params.Omega0**2 / (params.Delta**2 + (params.kappa / 2.0) ** 2)


def noise_spectrum(omega, params: ReservoirParams):
    """Lorentzian noise power S(w) = |a0|^2 kappa / ((w + Delta)^2 + (kappa/2)^2),
    peaked at w = -Delta with peak value 4 |a0|^2 / kappa."""
    w = np.asarray(omega, dtype=float)
    out = steady_amplitude_sq(params) * params.kappa / (
        (w + params.Delta) ** 2 + (params.kappa / 2.0) ** 2
    )
    return out if out.ndim else float(out)


def base_inverse_temperature(params: ReservoirParams) -> float:
    """Zero-frequency effective inverse temperature
    beta0 = -4 Delta / (Delta^2 + (kappa/2)^2)."""
    return -4.0 * params.Delta / (params.Delta**2 + (params.kappa / 2.0) ** 2)


def stokes_curvature_factor(params: ReservoirParams) -> float:
    """The combination 3 + beta0 Delta controlling all frequency-dependent
    temperature corrections.

    Evaluated as (3 (kappa/2)^2 - Delta^2) / (Delta^2 + (kappa/2)^2) and
    snapped to exactly zero within a few ULPs, so the special point
    Delta = -sqrt(3) kappa/2 collapses exactly despite rounding.
    """
    half_k_sq = (params.kappa / 2.0) ** 2
    num = 3.0 * half_k_sq - params.Delta**2
    scale = 3.0 * half_k_sq + params.Delta**2
    if abs(num) <= _SPECIAL_POINT_ULPS * np.finfo(float).eps * scale:
        return 0.0
    return num / (params.Delta**2 + half_k_sq)


def effective_beta_exact(omega, params: ReservoirParams, J: float = 1.0):
    """Per-transition inverse temperature ln[S(w)/S(-w)] / w.

    The removable singularity at w = 0 is filled by continuity with beta0
    (threshold |w| < 1e-8 J).
    """
    w = np.asarray(omega, dtype=float)
    beta0 = base_inverse_temperature(params)
    half_k_sq = (params.kappa / 2.0) ** 2
    # ln(S(w)/S(-w)) = log1p(-4 w Delta / [(w+Delta)^2 + (kappa/2)^2]):
    # the log1p form avoids the small-w cancellation of ln of a near-unit
    # ratio, keeping the result even in w to machine precision.
    rel = -4.0 * w * params.Delta / ((w + params.Delta) ** 2 + half_k_sq)
    small = np.abs(w) < 1e-8 * J
    safe_w = np.where(small, 1.0, w)
    out = np.where(small, beta0, np.log1p(rel) / safe_w)
    return out if out.ndim else float(out)


def effective_beta_expansion(omega, params: ReservoirParams):
    """Quadratic truncation beta0 [1 + beta0/(12 Delta) (3 + beta0 Delta) w^2].

    Requires Delta != 0; at zero detuning only the exact form exists.
    """
    if params.Delta == 0:
        raise DegenerateExpansionError("beta_eff expansion is singular at Delta = 0")
    w = np.asarray(omega, dtype=float)
    beta0 = base_inverse_temperature(params)
    factor = stokes_curvature_factor(params)
    out = beta0 * (1.0 + beta0 / (12.0 * params.Delta) * factor * w**2)
    return out if out.ndim else float(out)
