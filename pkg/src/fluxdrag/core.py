"""Algebraic building blocks shared by every force formulation.

Kinematics, Doppler shifts, Bose-Einstein occupations, transverse wave
constants, Fresnel reflection amplitudes of the half-space, and the two
polarization weight functions.  Everything is expressed in natural units
(hbar = c = k_B = 1, vacuum permittivity 1); frequencies set the base
scale and lengths are inverse frequencies.

All functions are pure and accept numpy arrays wherever that is useful
for the quadrature layer; argument validation that only makes sense for
scalars is skipped on array input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, PoleError, SingularityError

# coth overflow guard: beyond this |omega|/T the occupation is 0 or -1 to
# double precision (expm1 overflows near 709)
_OCC_SATURATION = 700.0


class Sector(Enum):
    """Which side of the light line q = |omega| a mode sits on."""

    EVANESCENT = "evanescent"
    PROPAGATING = "propagating"


@dataclass(frozen=True)
class Kinematics:
    """Uniform lateral motion at height z above the surface.

    beta is v/c in [0, 1), gamma the Lorentz factor, z > 0 the
    particle-surface distance.
    """

    beta: float
    gamma: float
    z: float


@dataclass(frozen=True)
class ThermalPair:
    """Surface temperature t1 (its rest frame) and particle temperature t2
    (co-moving frame), both non-negative; zero is handled analytically."""

    t1: float
    t2: float

    def __post_init__(self):
        if self.t1 < 0 or self.t2 < 0:
            raise DomainError(f"temperatures must be >= 0, got ({self.t1}, {self.t2})")


@dataclass(frozen=True)
class ModePoint:
    """One photon mode (omega, qx, qy) with derived lateral magnitude and
    sector tag."""

    omega: float
    qx: float
    qy: float
    q: float
    sector: Sector


@dataclass(frozen=True)
class ReflectionPair:
    """s- and p-polarized reflection amplitudes of the half-space."""

    rs: complex
    rp: complex


@dataclass(frozen=True)
class WeightPair:
    """Polarization weight functions, units (frequency)^2."""

    phis: float
    phip: float


def kinematics_new(beta, z=1.0):
    """Build Kinematics from the velocity fraction.

    Parameters
    ----------
    beta : float
        v/c, must lie in [0, 1).
    z : float
        particle-surface distance, > 0.
    """
    if not 0.0 <= beta < 1.0:
        raise DomainError(f"beta must lie in [0, 1), got {beta}")
    if not z > 0.0:
        raise DomainError(f"z must be positive, got {z}")
    return Kinematics(beta=float(beta), gamma=1.0 / math.sqrt(1.0 - beta * beta), z=float(z))


def mode_point(omega, qx, qy):
    """Build a ModePoint, deriving q and the sector tag.

    The light line q = |omega| itself is tagged evanescent with a vanishing
    transverse constant; integrands are singular there and quadrature never
    samples it.
    """
    q = math.hypot(qx, qy)
    sector = Sector.EVANESCENT if q >= abs(omega) else Sector.PROPAGATING
    return ModePoint(omega=float(omega), qx=float(qx), qy=float(qy), q=q, sector=sector)


def doppler(omega, qx, kin, sign=-1):
    """Frequency of a mode in the frame co-moving with the particle.

    sign=-1 gives omega' = gamma (omega - qx v), sign=+1 the partner
    shift gamma (omega + qx v).
    """
    if sign not in (-1, 1, -1.0, 1.0):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    return kin.gamma * (omega + sign * qx * kin.beta)


def occupation(omega, t):
    """Bose-Einstein occupation N(omega, T) = 1/2 [coth(omega/2T) - 1].

    Equals 1/(exp(omega/T) - 1) for T > 0 and any real omega != 0; the
    zero-temperature limit is 0 for omega > 0 and -1 for omega < 0.
    Satisfies N(-omega) = -1 - N(omega).

    Raises SingularityError at omega = 0 exactly (scalar input only; the
    quadrature never samples the pole).
    """
    if t < 0:
        raise DomainError(f"temperature must be >= 0, got {t}")
    scalar = np.ndim(omega) == 0
    if scalar and omega == 0.0:
        raise SingularityError("occupation has a pole at omega = 0")
    w = np.asarray(omega, dtype=float)
    if t == 0.0:
        out = np.where(w > 0.0, 0.0, -1.0)
    else:
        x = w / t
        with np.errstate(over="ignore", divide="ignore"):
            out = np.where(
                x > _OCC_SATURATION,
                0.0,
                np.where(x < -_OCC_SATURATION, -1.0, 1.0 / np.expm1(x)),
            )
    return float(out) if scalar else out


def transverse_constant(omega, q):
    """Transverse wave constant of a lateral mode.

    Returns (Sector.EVANESCENT, kappa) with kappa = sqrt(q^2 - omega^2) when
    q > |omega|, and (Sector.PROPAGATING, q_z) with q_z = sqrt(omega^2 - q^2)
    when q < |omega|.  The boundary q = |omega| returns (EVANESCENT, 0.0).
    """
    if q < 0:
        raise DomainError(f"q must be >= 0, got {q}")
    if q >= abs(omega):
        return Sector.EVANESCENT, math.sqrt(q * q - omega * omega)
    return Sector.PROPAGATING, math.sqrt(omega * omega - q * q)


def transverse_continued(omega, q):
    """Complex continuation of kappa across the light line.

    Real kappa in the evanescent sector; -i q_z in the propagating sector,
    so that exp(-2 kappa z) continues to the outgoing phase exp(2i q_z z).
    """
    sector, value = transverse_constant(omega, q)
    if sector is Sector.EVANESCENT:
        return complex(value)
    return -1j * value


def medium_kappa1(omega, kappa_or_qz, eps1, sector=Sector.EVANESCENT):
    """Propagation constant inside the half-space.

    kappa1 = sqrt(kappa^2 - (eps1 - 1) omega^2) on the branch Re kappa1 >= 0,
    so the transmitted field decays into the absorbing medium.  eps1 must be
    the permittivity at omega including its reality extension
    eps1(-omega) = conj(eps1(omega)); the principal square root then yields
    kappa1(-omega) = conj(kappa1(omega)) automatically (retarded solution).

    In the propagating sector pass q_z; the continuation kappa = -i q_z is
    applied internally and kappa1 reduces to sqrt(q^2 - eps1 omega^2).
    """
    if sector is Sector.EVANESCENT:
        kap_sq = np.asarray(kappa_or_qz) ** 2
    else:
        kap_sq = -np.asarray(kappa_or_qz) ** 2
    k1 = np.sqrt(kap_sq - (np.asarray(eps1) - 1.0) * np.asarray(omega) ** 2 + 0j)
    return complex(k1) if np.ndim(k1) == 0 else k1


def reflection_coeffs(kappa, kappa1, eps1):
    """Fresnel reflection amplitudes of the half-space.

    R_1s = (kappa - kappa1)/(kappa + kappa1)
    R_1p = (eps1 kappa - kappa1)/(eps1 kappa + kappa1)

    kappa is the (possibly continued, -i q_z) vacuum transverse constant.
    |R| <= 1 is not asserted; it fails for evanescent waves.  A vanishing
    denominator (surface-mode resonance of a lossless medium) raises
    PoleError; dissipative models never hit it.
    """
    den_s = kappa + kappa1
    den_p = eps1 * kappa + kappa1
    if np.ndim(den_s) == 0 and (den_s == 0 or den_p == 0):
        raise PoleError("reflection amplitude pole: kappa + kappa1 or eps1 kappa + kappa1 vanished")
    return ReflectionPair(rs=(kappa - kappa1) / den_s, rp=(eps1 * kappa - kappa1) / den_p)


def polarization_weights(omega_prime, q, qx, qy, kappa_sq, kin):
    """Polarization weight functions evaluated at the co-moving frequency.

    phi_s = omega'^2 + 2 gamma^2 beta^2 qy^2 kappa^2 / q^2
    phi_p = omega'^2 + 2 gamma^2 (q^2 - beta^2 qx^2) kappa^2 / q^2

    kappa_sq is kappa^2 = q^2 - omega^2: positive in the evanescent sector,
    continued to -q_z^2 in the propagating sector (same printed symbols).
    """
    if np.ndim(q) == 0 and q == 0.0:
        raise DomainError("polarization weights are undefined at q = 0")
    g2 = kin.gamma * kin.gamma
    b2 = kin.beta * kin.beta
    w2 = np.asarray(omega_prime) ** 2
    ratio = kappa_sq / (np.asarray(q) ** 2)
    phis = w2 + 2.0 * g2 * b2 * np.asarray(qy) ** 2 * ratio
    phip = w2 + 2.0 * g2 * (np.asarray(q) ** 2 - b2 * np.asarray(qx) ** 2) * ratio
    if np.ndim(phis) == 0:
        return WeightPair(phis=float(phis), phip=float(phip))
    return phis, phip
