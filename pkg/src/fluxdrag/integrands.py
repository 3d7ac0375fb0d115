"""Pointwise evaluators for every printed force integrand.

Each public evaluator transcribes one printed formula literally, prefactor
included: integrating ``ev_integrand(fid, ...)`` over that formulation's own
frequency domain with measure d(omega)/2pi * d^2q/(2pi)^2 yields the
evanescent force per particle, and similarly for the propagating-surface,
free-space and stress forms.  Exposing the integrands individually lets all
cross-formulation identities be tested point-wise, free of quadrature error.

The quadrature layer consumes the substituted kernels (``ev_kernel`` etc.),
which equal kappa (or q_z) times the printed integrand: the lateral Jacobian
q dq = kappa d(kappa) = q_z d(q_z) then cancels the 1/kappa (1/q_z) boundary
singularity exactly.  Kernels come with a two-stage API, ``*_factors`` for
the angle-independent parts and ``*_eval`` for the angular sweep, so nested
adaptive integration can reuse the expensive complex algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import Sector, occupation
from .errors import DomainError, SingularityError
from .response import drude_eps

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi
EIGHT_PI = 8.0 * math.pi
SIXTEEN_PI = 16.0 * math.pi


class FormulationId(Enum):
    """The printed formulations; values double as CLI tokens."""

    PH = "ph"
    VP = "vp"
    DK_FOLDED = "dk"
    DK_QUADRANT = "dk-quadrant"


@dataclass(frozen=True)
class ScenarioParams:
    """Everything a force integrand needs: motion, temperatures, materials."""

    kin: "Kinematics"
    thermal: "ThermalPair"
    surface: "DrudeModel"
    particle: "LorentzOscillator"


def _im_alpha(particle, w):
    """Im alpha(omega) of the Lorentz oscillator, closed real form."""
    w = np.asarray(w, dtype=float)
    w0sq = particle.omega0 * particle.omega0
    num = particle.alpha0 * w0sq * particle.gamma_a * w
    den = (w0sq - w * w) ** 2 + (particle.gamma_a * w) ** 2
    return num / den


# The polar-angle sweep enters only through u = cos(theta):
#   omega'   = gamma (omega - s beta q u) = gw - s gbq u        (branch s)
#   phi_s    = omega'^2 + cs (1 - u^2),      cs = 2 gamma^2 beta^2 kappa^2
#   phi_p    = omega'^2 + cp - cp beta^2 u^2, cp = 2 gamma^2 kappa^2
# with kappa^2 = q^2 - omega^2 continued to -q_z^2 in the propagating
# sector.  The *_factors functions precompute everything u-independent.

def _angle_coeffs(p, w, kap_sq, q):
    kin = p.kin
    g2 = kin.gamma * kin.gamma
    cs = 2.0 * g2 * kin.beta * kin.beta * kap_sq
    cp = 2.0 * g2 * kap_sq
    return {
        "q": q,
        "gw": kin.gamma * w,
        "gbq": kin.gamma * kin.beta * q,
        "cs": cs,
        "cp": cp,
        "cpb": cp * kin.beta * kin.beta,
        "n1": occupation(w, p.thermal.t1),
        "omega": w,
    }


def _branch_core(p, fac, idx, u, branch, rs_part, rp_part):
    """Im alpha(w') [N1 - N2(w')] (phi_s rs_part + phi_p rp_part) at one
    Doppler branch (branch=+1 is the standard shift w'_-, -1 its partner)."""
    wpr = fac["gw"][idx] - branch * fac["gbq"][idx] * u
    u2 = u * u
    w2 = wpr * wpr
    phis = w2 + fac["cs"][idx] * (1.0 - u2)
    phip = w2 + fac["cp"][idx] - fac["cpb"][idx] * u2
    dn = fac["n1"][idx] - occupation(wpr, p.thermal.t2)
    return _im_alpha(p.particle, wpr) * dn * (phis * rs_part + phip * rp_part)


# ----------------------------------------------------------------------
# evanescent sector: variables (omega, kappa, theta), kappa > 0
# ----------------------------------------------------------------------

def ev_factors(p, omega, kappa):
    """Angle-independent pieces of the evanescent kernel at (omega, kappa)."""
    w = np.asarray(omega, dtype=float)
    kap = np.asarray(kappa, dtype=float)
    kap_sq = kap * kap
    eps = drude_eps(p.surface, w)
    k1 = np.sqrt(kap_sq - (eps - 1.0) * w * w + 0j)
    rs = (kap - k1) / (kap + k1)
    rp = (eps * kap - k1) / (eps * kap + k1)
    fac = _angle_coeffs(p, w, kap_sq, np.sqrt(kap_sq + w * w))
    fac["damp"] = np.exp(-2.0 * kap * p.kin.z)
    fac["im_rs"] = rs.imag
    fac["im_rp"] = rp.imag
    return fac


def ev_eval(fid, p, fac, idx, theta):
    """Substituted evanescent kernel S = kappa * (printed integrand).

    S(omega, kappa, theta) = pref * q cos(theta) * exp(-2 kappa z) * core,
    with pref 1/gamma (PH), -8 pi (VP), 8 pi/gamma (DK folded) and
    16 pi/gamma with the two-branch brace for the DK quadrant form.
    """
    kin = p.kin
    u = np.cos(theta)
    im_rs = fac["im_rs"][idx]
    im_rp = fac["im_rp"][idx]
    if fid is FormulationId.DK_QUADRANT:
        core = (_branch_core(p, fac, idx, u, +1, im_rs, im_rp)
                - _branch_core(p, fac, idx, u, -1, im_rs, im_rp))
        pref = SIXTEEN_PI / kin.gamma
    else:
        core = _branch_core(p, fac, idx, u, +1, im_rs, im_rp)
        pref = _EV_PREF[fid](kin.gamma)
    return pref * (fac["q"][idx] * u) * fac["damp"][idx] * core


_EV_PREF = {
    FormulationId.PH: lambda gamma: 1.0 / gamma,
    FormulationId.VP: lambda gamma: -EIGHT_PI,
    FormulationId.DK_FOLDED: lambda gamma: EIGHT_PI / gamma,
}


def ev_kernel(fid, p, omega, kappa, theta):
    """Substituted evanescent kernel on broadcast arrays."""
    w, kap, th = np.broadcast_arrays(
        np.asarray(omega, float), np.asarray(kappa, float), np.asarray(theta, float)
    )
    fac = ev_factors(p, w.ravel(), kap.ravel())
    idx = np.arange(w.size)
    return ev_eval(fid, p, fac, idx, th.ravel()).reshape(w.shape)


# ----------------------------------------------------------------------
# propagating sector: variables (omega, q_z, theta), 0 < q_z < omega
# ----------------------------------------------------------------------

def prop_factors(p, omega, qz):
    """Angle-independent pieces of the propagating-surface kernel."""
    w = np.asarray(omega, dtype=float)
    qz = np.asarray(qz, dtype=float)
    eps = drude_eps(p.surface, w)
    kap_c = -1j * qz  # continuation of kappa across the light line
    k1 = np.sqrt(-qz * qz - (eps - 1.0) * w * w + 0j)
    rs = (kap_c - k1) / (kap_c + k1)
    rp = (eps * kap_c - k1) / (eps * kap_c + k1)
    phase = 2.0 * qz * p.kin.z
    fac = _angle_coeffs(p, w, -qz * qz, np.sqrt(np.maximum(w * w - qz * qz, 0.0)))
    fac["rs"] = rs
    fac["rp"] = rp
    fac["cos"] = np.cos(phase)
    fac["sin"] = np.sin(phase)
    # Re R cos(2 q_z z) - Im R sin(2 q_z z), the angle-independent weight of
    # both the PH and folded-DK forms (and of the recombined quadrant braces)
    fac["osc_s"] = rs.real * fac["cos"] - rs.imag * fac["sin"]
    fac["osc_p"] = rp.real * fac["cos"] - rp.imag * fac["sin"]
    return fac


def prop_eval(fid, p, fac, idx, theta):
    """Substituted propagating-surface kernel S = q_z * (printed integrand).

    PH and the folded DK form carry the combination
    Re R cos(2 q_z z) - Im R sin(2 q_z z); the DK quadrant form keeps the
    printed split into a -sin(2 q_z z) (Im R) brace and a cos(2 q_z z)
    (Re R) brace, each with the w'_- minus w'_+ structure.
    """
    kin = p.kin
    u = np.cos(theta)
    qx = fac["q"][idx] * u
    rs, rp = fac["rs"][idx], fac["rp"][idx]
    cosz, sinz = fac["cos"][idx], fac["sin"][idx]
    if fid is FormulationId.DK_QUADRANT:
        b_im = (_branch_core(p, fac, idx, u, +1, rs.imag, rp.imag)
                - _branch_core(p, fac, idx, u, -1, rs.imag, rp.imag))
        b_re = (_branch_core(p, fac, idx, u, +1, rs.real, rp.real)
                - _branch_core(p, fac, idx, u, -1, rs.real, rp.real))
        return (SIXTEEN_PI / kin.gamma) * qx * (-sinz * b_im + cosz * b_re)
    rs_osc = rs.real * cosz - rs.imag * sinz
    rp_osc = rp.real * cosz - rp.imag * sinz
    core = _branch_core(p, fac, idx, u, +1, rs_osc, rp_osc)
    pref = _PROP_PREF[fid](kin.gamma)
    return pref * qx * core


_PROP_PREF = {
    FormulationId.PH: lambda gamma: 2.0 / gamma,
    FormulationId.DK_FOLDED: lambda gamma: EIGHT_PI / gamma,
}


def prop_kernel(fid, p, omega, qz, theta):
    """Substituted propagating-surface kernel on broadcast arrays."""
    w, qz_, th = np.broadcast_arrays(
        np.asarray(omega, float), np.asarray(qz, float), np.asarray(theta, float)
    )
    fac = prop_factors(p, w.ravel(), qz_.ravel())
    idx = np.arange(w.size)
    return prop_eval(fid, p, fac, idx, th.ravel()).reshape(w.shape)


# ----------------------------------------------------------------------
# VP propagating stress (force per area, distinct quantity kind)
# ----------------------------------------------------------------------

def stress_factors(p, omega, qz):
    w = np.asarray(omega, dtype=float)
    qz = np.asarray(qz, dtype=float)
    eps = drude_eps(p.surface, w)
    kap_c = -1j * qz
    k1 = np.sqrt(-qz * qz - (eps - 1.0) * w * w + 0j)
    rs = (kap_c - k1) / (kap_c + k1)
    rp = (eps * kap_c - k1) / (eps * kap_c + k1)
    kin = p.kin
    q = np.sqrt(np.maximum(w * w - qz * qz, 0.0))
    return {
        "q": q,
        "gw": kin.gamma * w,
        "gbq": kin.gamma * kin.beta * q,
        "absorb": 2.0 - np.abs(rp) ** 2 - np.abs(rs) ** 2,
        "n1": occupation(w, p.thermal.t1),
    }


def stress_eval(p, fac, idx, theta):
    """Substituted stress kernel S = q_z * (printed integrand), prefactor -1."""
    u = np.cos(theta)
    qx = fac["q"][idx] * u
    wpr = fac["gw"][idx] - fac["gbq"][idx] * u
    dn = fac["n1"][idx] - occupation(wpr, p.thermal.t2)
    return -qx * fac["absorb"][idx] * dn


def stress_kernel(p, omega, qz, theta):
    w, qz_, th = np.broadcast_arrays(
        np.asarray(omega, float), np.asarray(qz, float), np.asarray(theta, float)
    )
    fac = stress_factors(p, w.ravel(), qz_.ravel())
    idx = np.arange(w.size)
    return stress_eval(p, fac, idx, th.ravel()).reshape(w.shape)


# ----------------------------------------------------------------------
# free-space (blackbody) sector: variables (omega, x), x = direction cosine
# ----------------------------------------------------------------------

# ----------------------------------------------------------------------
# jitted angular kernels for the adaptive quadrature hot path
#
# One scalar loop serves every formulation: the evanescent forms weight the
# polarizations with (Im rs, Im rp) under exp(-2 kappa z), the propagating
# forms with the oscillatory combination Re R cos - Im R sin (the quadrant
# double brace recombines into exactly this, branch by branch).  Pure IEEE
# math, no fastmath: results are bit-reproducible.  The numpy evaluators
# above remain the reference path (pointwise ops, oracle, fallback).
# ----------------------------------------------------------------------

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is expected but optional
    HAVE_NUMBA = False

    def _njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap


@_njit(cache=True)
def _theta_kernel_jit(q, gw, gbq, cs, cp, cpb, n1, damp, ws, wp, idx, theta,
                      t2, pref, two_branch, a_num, w0sq, ga_sq):
    out = np.empty(theta.size)
    for i in range(theta.size):
        j = idx[i]
        u = math.cos(theta[i])
        u2 = u * u
        csj = cs[j] * (1.0 - u2)
        cpj = cp[j] - cpb[j] * u2
        wpr = gw[j] - gbq[j] * u
        d = w0sq - wpr * wpr
        ima = a_num * wpr / (d * d + ga_sq * wpr * wpr)
        if t2 == 0.0:
            n2 = 0.0 if wpr > 0.0 else -1.0
        else:
            xx = wpr / t2
            if xx > 700.0:
                n2 = 0.0
            elif xx < -700.0:
                n2 = -1.0
            else:
                n2 = 1.0 / math.expm1(xx)
        core = ima * (n1[j] - n2) * ((wpr * wpr + csj) * ws[j] + (wpr * wpr + cpj) * wp[j])
        if two_branch:
            wpr = gw[j] + gbq[j] * u
            d = w0sq - wpr * wpr
            ima = a_num * wpr / (d * d + ga_sq * wpr * wpr)
            if t2 == 0.0:
                n2 = 0.0 if wpr > 0.0 else -1.0
            else:
                xx = wpr / t2
                if xx > 700.0:
                    n2 = 0.0
                elif xx < -700.0:
                    n2 = -1.0
                else:
                    n2 = 1.0 / math.expm1(xx)
            core -= ima * (n1[j] - n2) * ((wpr * wpr + csj) * ws[j] + (wpr * wpr + cpj) * wp[j])
        out[i] = pref * q[j] * u * damp[j] * core
    return out


@_njit(cache=True)
def _stress_kernel_jit(q, gw, gbq, absorb, n1, idx, theta, t2):
    out = np.empty(theta.size)
    for i in range(theta.size):
        j = idx[i]
        u = math.cos(theta[i])
        wpr = gw[j] - gbq[j] * u
        if t2 == 0.0:
            n2 = 0.0 if wpr > 0.0 else -1.0
        else:
            xx = wpr / t2
            if xx > 700.0:
                n2 = 0.0
            elif xx < -700.0:
                n2 = -1.0
            else:
                n2 = 1.0 / math.expm1(xx)
        out[i] = -q[j] * u * absorb[j] * (n1[j] - n2)
    return out


def theta_eval_fast(fid, p, fac, idx, theta):
    """Hot-path angular kernel: jitted when numba is present, otherwise the
    reference numpy evaluators."""
    if not HAVE_NUMBA:
        if "absorb" in fac:
            return stress_eval(p, fac, idx, theta)
        if "im_rs" in fac:
            return ev_eval(fid, p, fac, idx, theta)
        return prop_eval(fid, p, fac, idx, theta)
    part = p.particle
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    theta = np.ascontiguousarray(theta, dtype=float)
    if "absorb" in fac:
        return _stress_kernel_jit(fac["q"], fac["gw"], fac["gbq"], fac["absorb"],
                                  fac["n1"], idx, theta, p.thermal.t2)
    if "im_rs" in fac:
        ws, wp, damp = fac["im_rs"], fac["im_rp"], fac["damp"]
        pref = (SIXTEEN_PI / p.kin.gamma if fid is FormulationId.DK_QUADRANT
                else _EV_PREF[fid](p.kin.gamma))
    else:
        ws, wp = fac["osc_s"], fac["osc_p"]
        if "ones" not in fac:
            fac["ones"] = np.ones_like(fac["q"])
        damp = fac["ones"]
        pref = (SIXTEEN_PI / p.kin.gamma if fid is FormulationId.DK_QUADRANT
                else _PROP_PREF[fid](p.kin.gamma))
    return _theta_kernel_jit(
        fac["q"], fac["gw"], fac["gbq"], fac["cs"], fac["cp"], fac["cpb"],
        fac["n1"], damp, ws, wp, idx, theta, p.thermal.t2, pref,
        fid is FormulationId.DK_QUADRANT, part.alpha0 * part.omega0**2 * part.gamma_a,
        part.omega0**2, part.gamma_a**2)


def fs_kernel(fid, p, omega, x):
    """Printed free-space integrand (measure d omega / 2 pi as printed).

    PH:  (gamma/pi) omega^4 x (1 - beta x)^2 Im alpha(w') [N1 - N2(w')],
         w' = gamma omega (1 - beta x)
    DK:  -4 gamma omega^4 x (1 + beta x)^2 Im alpha(w1) [N1 - N2(w1)],
         w1 = gamma omega (1 + beta x)
    """
    if fid not in (FormulationId.PH, FormulationId.DK_FOLDED):
        raise DomainError(f"no printed free-space formula for {fid.value}")
    kin = p.kin
    w, xx = np.broadcast_arrays(np.asarray(omega, float), np.asarray(x, float))
    if fid is FormulationId.PH:
        shift = 1.0 - kin.beta * xx
        pref = kin.gamma / math.pi
    else:
        shift = 1.0 + kin.beta * xx
        pref = -4.0 * kin.gamma
    wpr = kin.gamma * w * shift
    dn = occupation(w, p.thermal.t1) - occupation(wpr, p.thermal.t2)
    return pref * w**4 * xx * shift**2 * _im_alpha(p.particle, wpr) * dn


# ----------------------------------------------------------------------
# printed point-wise integrands on ModePoints
# ----------------------------------------------------------------------

def _ev_mode_prep(mode):
    if mode.sector is not Sector.EVANESCENT:
        raise DomainError(f"mode ({mode.omega}, {mode.qx}, {mode.qy}) is not evanescent")
    kap_sq = mode.q * mode.q - mode.omega * mode.omega
    kappa = math.sqrt(kap_sq)
    if kappa == 0.0:
        raise SingularityError("kappa = 0 on the light line; removed by substitution, never sampled")
    return kappa, math.atan2(mode.qy, mode.qx)


def ev_integrand(fid, mode, p):
    """Printed evanescent integrand of PH, VP or the folded DK form.

    PH admits any real omega (full-axis form); VP and the folded DK form
    are printed for omega > 0 only.
    """
    if fid is FormulationId.DK_QUADRANT:
        raise DomainError("use dk_ev_quadrant_integrand for the quadrant form")
    if fid is not FormulationId.PH and not mode.omega > 0.0:
        raise DomainError(f"{fid.value} evanescent form is printed for omega > 0")
    kappa, theta = _ev_mode_prep(mode)
    s = ev_kernel(fid, p, mode.omega, kappa, theta)
    return float(s) / kappa


def dk_ev_quadrant_integrand(mode, p):
    """Printed DK quadrant-form evanescent integrand (qx, qy >= 0, omega > 0)."""
    if not (mode.omega > 0.0 and mode.qx >= 0.0 and mode.qy >= 0.0):
        raise DomainError("quadrant form is printed for omega > 0 and qx, qy >= 0")
    kappa, theta = _ev_mode_prep(mode)
    s = ev_kernel(FormulationId.DK_QUADRANT, p, mode.omega, kappa, theta)
    return float(s) / kappa


def _prop_mode_prep(mode):
    if mode.sector is not Sector.PROPAGATING:
        raise DomainError(f"mode ({mode.omega}, {mode.qx}, {mode.qy}) is not propagating")
    if not mode.omega > 0.0:
        raise DomainError("propagating forms are printed for omega > 0")
    qz = math.sqrt(mode.omega * mode.omega - mode.q * mode.q)
    if qz == 0.0:
        raise SingularityError("q_z = 0 on the light line; removed by substitution, never sampled")
    return qz, math.atan2(mode.qy, mode.qx)


def prop_surface_integrand(fid, mode, p):
    """Printed propagating surface-wave integrand (PH, folded DK or quadrant DK)."""
    if fid is FormulationId.VP:
        raise DomainError("VP gives a stress, not a per-particle propagating force; "
                          "use vp_stress_integrand")
    qz, theta = _prop_mode_prep(mode)
    if fid is FormulationId.DK_QUADRANT and not (mode.qx >= 0.0 and mode.qy >= 0.0):
        raise DomainError("quadrant form is printed for qx, qy >= 0")
    s = prop_kernel(fid, p, mode.omega, qz, theta)
    return float(s) / qz


def freespace_integrand(fid, omega, x, p):
    """Printed free-space integrand at (omega, x), x in [-1, 1]."""
    if not omega > 0.0:
        raise DomainError("free-space forms are printed for omega > 0")
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"direction cosine x must lie in [-1, 1], got {x}")
    return float(fs_kernel(fid, p, omega, x))


def vp_stress_integrand(mode, p):
    """Printed VP propagating stress integrand (force per unit area)."""
    qz, theta = _prop_mode_prep(mode)
    s = stress_kernel(p, mode.omega, qz, theta)
    return float(s) / qz


def symmetry_residual(mode, p):
    """|I(omega, qx, qy) - I(-omega, -qx, qy)| for the PH evanescent integrand.

    The transformation flips qx, N1 - N2, Im alpha and Im R while leaving
    phi_mu, kappa and the damping factor unchanged, so the residual is pure
    rounding noise: at most 1e-12 relative to max(|I|, floor).
    """
    from .core import mode_point

    a = ev_integrand(FormulationId.PH, mode, p)
    b = ev_integrand(FormulationId.PH, mode_point(-mode.omega, -mode.qx, mode.qy), p)
    return abs(a - b)


def positive_frequency_ev_density(fid, mode, p):
    """Evanescent integrand folded onto omega > 0.

    For PH this adds the (-omega, -qx) image so all three formulations
    become densities over the common domain omega > 0; the printed
    conversion factors -4 pi gamma, 4 pi and -1/gamma then hold point-wise.
    """
    from .core import mode_point

    if not mode.omega > 0.0:
        raise DomainError("folded densities live on omega > 0")
    if fid is FormulationId.PH:
        return (ev_integrand(fid, mode, p)
                + ev_integrand(fid, mode_point(-mode.omega, -mode.qx, mode.qy), p))
    return ev_integrand(fid, mode, p)
