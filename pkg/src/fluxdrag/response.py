"""Material models: Drude half-space permittivity and Lorentz-oscillator
particle polarizability, plus the dilute-limit consistency check.

Both models are causal and dissipative, and both formulas satisfy the
reality extension f(-omega) = conj(f(omega)) identically on the real
axis, so negative frequencies need no special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError


@dataclass(frozen=True)
class DrudeModel:
    """eps1(omega) = 1 - omega_p^2 / (omega (omega + i gamma_d)).

    gamma_d > 0 is required: lossless media put surface-mode poles on the
    real axis and are rejected at configuration time.  omega_p = 0 is the
    transparent (vacuum) limit, useful for the no-interface checks.
    """

    omega_p: float
    gamma_d: float

    def __post_init__(self):
        if self.omega_p < 0:
            raise DomainError(f"omega_p must be >= 0, got {self.omega_p}")
        if not self.gamma_d > 0:
            raise DomainError(f"gamma_d must be > 0 (lossless media rejected), got {self.gamma_d}")


@dataclass(frozen=True)
class LorentzOscillator:
    """alpha(omega) = alpha0 omega0^2 / (omega0^2 - omega^2 - i gamma_a omega)."""

    alpha0: float
    omega0: float
    gamma_a: float

    def __post_init__(self):
        if not self.alpha0 > 0:
            raise DomainError(f"alpha0 must be > 0, got {self.alpha0}")
        if not self.omega0 > 0:
            raise DomainError(f"omega0 must be > 0, got {self.omega0}")
        if not self.gamma_a > 0:
            raise DomainError(f"gamma_a must be > 0, got {self.gamma_a}")


@dataclass(frozen=True)
class DiluteParams:
    """Number density of constituent particles in the co-moving frame."""

    n2: float

    def __post_init__(self):
        if self.n2 < 0:
            raise DomainError(f"n2 must be >= 0, got {self.n2}")


@dataclass(frozen=True)
class DiluteReport:
    max_coupling: float
    at_omega: float
    threshold: float
    passed: bool


def drude_eps(model, omega):
    """Half-space permittivity at real omega (array-friendly).

    Raises PoleError at omega = 0 exactly.
    """
    scalar = np.ndim(omega) == 0
    if scalar and omega == 0.0:
        raise PoleError("Drude permittivity has a pole at omega = 0")
    w = np.asarray(omega, dtype=float)
    out = 1.0 - model.omega_p**2 / (w * (w + 1j * model.gamma_d))
    return complex(out) if scalar else out


def lorentz_alpha(model, omega):
    """Particle polarizability at real omega (array-friendly)."""
    w = np.asarray(omega, dtype=float)
    out = model.alpha0 * model.omega0**2 / (model.omega0**2 - w * w - 1j * model.gamma_a * w)
    return complex(out) if np.ndim(omega) == 0 else out


def dilute_check(alpha_fn, n2, omega_grid, threshold=0.01):
    """Scan |4 pi n2 alpha(omega)| over a frequency grid.

    The dilution replacement eps2 - 1 -> 4 pi n2 alpha is only meaningful
    while that coupling stays small; this check is advisory (the force
    formulas never use n2).

    Returns a DiluteReport with the grid maximum and a pass flag against
    the threshold.
    """
    if not 0.0 < threshold < 1.0:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold}")
    grid = np.asarray(omega_grid, dtype=float)
    if grid.size == 0:
        raise DomainError("dilute_check needs a nonempty frequency grid")
    coupling = np.abs(4.0 * math.pi * n2 * np.asarray(alpha_fn(grid)))
    k = int(np.argmax(coupling))
    best = float(coupling[k])
    return DiluteReport(max_coupling=best, at_omega=float(grid[k]),
                        threshold=threshold, passed=bool(best <= threshold))
