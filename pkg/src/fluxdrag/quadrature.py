"""Deterministic adaptive integration of each sector over its printed domain.

The lateral integral is substituted before anything is sampled: with
q dq = kappa d(kappa) in the evanescent sector (q dq = q_z d(q_z) in the
propagating one) the printed 1/kappa and 1/q_z factors cancel exactly, so
the sector boundary is regular and never evaluated.  Frequencies are
truncated where exp(-2 kappa z) and the occupations are dead:
kappa <= tail_exponent/(2z) and |omega| <= cutoff_factor * scale * gamma
(1 + beta), both validated by the doubling invariance checks.

Integration is a three-level nest (omega, then kappa or q_z, then the
polar angle theta), each level a batch of deterministic adaptive
Gauss-Kronrod requests; inner error and unsigned-mass channels propagate
upward so the reported error estimate is honest.  Panel boundaries are
seeded on the anomalous-Doppler line omega' = 0 (where the integrand is
continuous but not smooth at T2 = 0) and, in the propagating sector, at
the half-period scale of cos/sin(2 q_z z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .adaptive import Request, integrate_batch
from .errors import ConvergenceError, DomainError
from .integrands import (
    EIGHT_PI,
    SIXTEEN_PI,
    TWO_PI,
    FormulationId,
    ev_factors,
    fs_kernel,
    prop_factors,
    stress_factors,
    theta_eval_fast,
)

_RAW3 = 8.0 * math.pi**3   # d(omega)/2pi * d^2q/(2pi)^2 normalization
_RAW1 = 2.0 * math.pi      # d(omega)/2pi normalization (free space)
_OSC_PANEL_CAP = 512       # most seeded half-period panels on the q_z axis


class SectorId(Enum):
    """Integration sectors; values double as CLI tokens."""

    EVANESCENT = "ev"
    PROP_SURFACE = "prop-surface"
    FREE_SPACE = "free-space"
    VP_STRESS = "vp-stress"


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and truncation policy for the sector integrals.

    tail_exponent caps the evanescent decay at exp(-tail_exponent);
    omega_cutoff_factor truncates frequencies at
    factor * max(T1, T2, omega0, omega_p) * gamma (1 + beta).
    """

    rel_tol: float = 1e-8
    abs_floor: float = 1e-14
    max_evals: int = 80_000_000
    tail_exponent: float = 40.0
    omega_cutoff_factor: float = 30.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol}")
        if self.abs_floor < 0:
            raise DomainError(f"abs_floor must be >= 0, got {self.abs_floor}")
        if not self.max_evals > 0:
            raise DomainError(f"max_evals must be > 0, got {self.max_evals}")
        if not math.exp(-self.tail_exponent) < self.rel_tol * 1e-3:
            raise DomainError(
                f"tail_exponent {self.tail_exponent} too small for rel_tol {self.rel_tol}")
        if not self.omega_cutoff_factor > 0:
            raise DomainError(f"omega_cutoff_factor must be > 0, got {self.omega_cutoff_factor}")


@dataclass(frozen=True)
class ForceResult:
    """One integrated sector value (force, or force/area for the VP stress)."""

    value: float
    error_estimate: float
    evals: int
    formulation: FormulationId
    sector: SectorId
    converged: bool

    @property
    def status(self):
        return "converged" if self.converged else "nonconverged"


def _omega_cutoff(p, spec):
    scale = max(p.thermal.t1, p.thermal.t2, p.particle.omega0, p.surface.omega_p)
    return spec.omega_cutoff_factor * scale * p.kin.gamma * (1.0 + p.kin.beta)


def _kappa_cutoff(p, spec):
    return spec.tail_exponent / (2.0 * p.kin.z)


def _geometric_scale_points(scale, hi, step):
    pts = []
    g = 0.25 * scale
    while g < hi:
        pts.append(g)
        g *= step
    return pts


# Sharp integrand features are seeded as panel boundaries so the adaptive
# subdivision starts on them: the anomalous-Doppler kink omega' = 0 and the
# particle resonance omega' = +-omega0, each a surface in (omega, lateral,
# theta) space crossed by the Doppler shift omega' = gamma (omega -+ beta q
# cos theta).

def _doppler_targets(p):
    return (0.0, p.particle.omega0, -p.particle.omega0)


def _omega_breaks(p, spec, full_axis, coarse=False):
    wmax = _omega_cutoff(p, spec)
    kmax = _kappa_cutoff(p, spec)
    kin = p.kin
    scale = max(p.thermal.t1, p.thermal.t2, p.particle.omega0, p.surface.omega_p)
    pts = {0.0, wmax}
    pts.update(_geometric_scale_points(scale, wmax, 4.0 if coarse else 2.0))
    if kin.beta > 0.0:
        w_anom = kin.gamma * kin.beta * kmax  # anomalous wedge empty above this
        if w_anom < wmax:
            pts.add(w_anom)
        # resonance grazes the light line q = |omega| at these frequencies
        for w in (p.particle.omega0 / (kin.gamma * (1.0 - kin.beta)),
                  p.particle.omega0 / (kin.gamma * (1.0 + kin.beta))):
            if w < wmax:
                pts.add(w)
    pos = sorted(pts)
    if full_axis:
        return np.array([-x for x in reversed(pos) if x > 0.0] + pos)
    return np.array(pos)


def _kappa_breaks(p, spec, omega, coarse=False):
    kmax = _kappa_cutoff(p, spec)
    kin = p.kin
    pts = {0.0, kmax}
    pts.update(_geometric_scale_points(1.0 / (2.0 * kin.z), kmax, 4.0 if coarse else 2.0))
    if kin.beta > 0.0:
        for t in _doppler_targets(p):
            q_entry = abs(omega - t / kin.gamma) / kin.beta
            if q_entry > abs(omega):  # feature enters the theta sweep at this ring
                k_entry = math.sqrt(q_entry * q_entry - omega * omega)
                if k_entry < kmax:
                    pts.add(k_entry)
    return np.array(sorted(pts))


def _theta_breaks(p, omega, q, quadrant, branches, coarse=False):
    """Angular panel seeds on the folded domain.

    All integrands are even in q_y, so the full circle folds to twice
    [0, pi] (the independent oracle integrates the literal full circle).
    Seeds sit on the Doppler features omega' = 0 (kink at T2 = 0, width
    ~T2 above) and omega' = +-omega0 (resonance, width gamma_a), plus
    width-scaled satellites so narrow peaks are resolved immediately.
    """
    hi = 0.5 * math.pi if quadrant else math.pi
    pts = {0.0, hi}
    kin = p.kin
    if kin.beta > 0.0 and q > 0.0:
        feats = ((0.0, p.thermal.t2),
                 (p.particle.omega0, p.particle.gamma_a),
                 (-p.particle.omega0, p.particle.gamma_a))
        dwdu = kin.gamma * kin.beta * q  # |d omega' / d cos(theta)|
        for s in branches:
            for t, width in feats:
                u = (omega - t / kin.gamma) / (s * kin.beta * q)
                if abs(u) >= 1.0:
                    continue
                tstar = math.acos(u)
                if 0.0 < tstar < hi:
                    pts.add(tstar)
                if width > 0.0 and not coarse:
                    dth = width / (dwdu * max(math.sin(tstar), 0.05))
                    if dth < 0.2:
                        for c in (3.0, 10.0):
                            for sgn in (-1.0, 1.0):
                                sat = tstar + sgn * c * dth
                                if 0.0 < sat < hi:
                                    pts.add(sat)
    arr = sorted(pts)
    out = [arr[0]]
    for v in arr[1:]:
        if v - out[-1] > 1e-12:
            out.append(v)
    return np.array(out)


# Cheap rigorous bounds on the Doppler-dependent factors, used to skip
# angular integrals that cannot reach their error floor.  b_alpha bounds
# |Im alpha|, b_prod bounds |Im alpha(w) N2(w)| (finite: Im alpha vanishes
# linearly at the occupation pole); both from a dense scan with margin.

@lru_cache(maxsize=64)
def _factor_bounds(alpha0, omega0, gamma_a, t2, w_span):
    """Peak locations and values of |Im alpha| and |Im alpha * N2| on w > 0."""
    from .integrands import _im_alpha
    from .response import LorentzOscillator

    particle = LorentzOscillator(alpha0, omega0, gamma_a)
    w = np.concatenate([
        np.linspace(1e-9 * omega0, 3.0 * omega0, 4096),
        np.linspace(max(omega0 - 5.0 * gamma_a, 1e-9 * omega0),
                    omega0 + 5.0 * gamma_a, 2048),
        np.geomspace(3.0 * omega0, max(w_span, 4.0 * omega0), 1024),
    ])
    im_a = _im_alpha(particle, w)
    ka = int(np.argmax(im_a))
    if t2 > 0.0:
        with np.errstate(over="ignore"):
            occ = 1.0 / np.expm1(np.minimum(w / t2, 700.0))
        prod = im_a * np.abs(occ)
        kp = int(np.argmax(prod))
        peak_prod = (float(w[kp]), float(prod[kp]))
    else:
        peak_prod = (0.0, 0.0)
    return (float(w[ka]), float(im_a[ka])), peak_prod


def _make_theta_bound(p, spec, kind, pref_abs, n_branches):
    """Build a vectorized upper bound on the full-circle angular integral.

    `kind` selects the factor layout: "ev" (Im R, exp damping), "prop"
    (complex R with the oscillatory combination) or "stress" (absorption
    factor, bare occupation difference).  The Doppler-dependent factors are
    bounded over each pair's own |omega'| interval (both functions are
    unimodal on w > 0; endpoints plus the enclosed peak give the maximum,
    with a margin).
    """
    from .core import occupation
    from .integrands import _im_alpha

    wspan = 2.0 * _omega_cutoff(p, spec) * p.kin.gamma * (1.0 + p.kin.beta)
    (wa, va), (wp, vp) = _factor_bounds(p.particle.alpha0, p.particle.omega0,
                                        p.particle.gamma_a, p.thermal.t2, wspan)
    t2 = p.thermal.t2

    def range_max(lo, hi, w_peak, v_peak, f):
        best = np.maximum(f(lo), f(hi))
        best = np.maximum(best, f(0.5 * (lo + hi)))
        inside = (lo <= w_peak) & (w_peak <= hi)
        return 1.15 * np.where(inside, np.maximum(best, v_peak), best)

    def im_alpha_abs(w):
        return np.abs(_im_alpha(p.particle, w))

    def prod_abs(w):
        if t2 <= 0.0:
            return np.zeros_like(w)
        with np.errstate(over="ignore", divide="ignore"):
            occ = np.where(w / t2 > 700.0, 0.0, 1.0 / np.expm1(np.maximum(w, 1e-300) / t2))
        return im_alpha_abs(w) * np.abs(occ)

    def occ_safe(w):
        return occupation(np.where(w == 0.0, 1e-300, w), t2)

    def bound(fac):
        wlo = fac["gw"] - fac["gbq"]
        whi = fac["gw"] + fac["gbq"]
        if kind == "stress":
            # propagating sector: omega' > 0 and N2 monotone there, so the
            # occupation difference peaks at an interval endpoint
            dn_max = np.maximum(np.abs(fac["n1"] - occ_safe(np.maximum(wlo, 1e-300))),
                                np.abs(fac["n1"] - occ_safe(whi)))
            return TWO_PI * fac["q"] * np.abs(fac["absorb"]) * dn_max
        # |omega'| sweeps [lo, hi] (lo = 0 when the interval straddles 0)
        alo, ahi = np.abs(wlo), np.abs(whi)
        straddles = wlo * whi <= 0.0
        lo = np.where(straddles, 0.0, np.minimum(alo, ahi))
        hi = np.maximum(alo, ahi)
        imax = range_max(lo, hi, wa, va, im_alpha_abs)
        pmax = range_max(lo, hi, wp, vp, prod_abs)
        # away from omega' = 0 the occupation difference is monotone in
        # omega' and peaks at an endpoint; across zero fall back to the
        # product bound (covers the negative side via N(-w) = -1 - N(w))
        dn_end = np.maximum(np.abs(fac["n1"] - occ_safe(wlo)),
                            np.abs(fac["n1"] - occ_safe(whi)))
        g_same_sign = imax * dn_end
        g_straddle = imax * (np.abs(fac["n1"]) + 1.0) + pmax
        g_bound = np.where(straddles, g_straddle, g_same_sign)
        wpr_max = np.maximum(hi, 1e-300)
        phi_s_max = wpr_max**2 + np.abs(fac["cs"])
        phi_p_max = wpr_max**2 + np.abs(fac["cp"]) + np.abs(fac["cpb"])
        if kind == "ev":
            refl = phi_s_max * np.abs(fac["im_rs"]) + phi_p_max * np.abs(fac["im_rp"])
            damp = fac["damp"]
        else:
            refl = 2.0 * (phi_s_max * np.abs(fac["rs"]) + phi_p_max * np.abs(fac["rp"]))
            damp = 1.0
        return TWO_PI * pref_abs * n_branches * fac["q"] * damp * refl * g_bound

    return bound


def _qz_breaks(p, omega):
    # half-period oscillation budget for cos/sin(2 q_z z), ceil(2 omega z / pi)
    n = max(1, min(_OSC_PANEL_CAP, math.ceil(2.0 * omega * p.kin.z / math.pi)))
    return np.linspace(0.0, omega, n + 1)


def _run_nest(p, spec, fid, omega_breaks, lateral_breaks_for, theta_breaks_for,
              factors_fn, theta_fold, theta_bound, counter,
              *, rel_tol, floors, caps):
    """One pass of the (omega, lateral, theta) nest at the given tolerances.

    floors = (omega, lateral, theta) absolute error floors for the raw
    (un-normalized) integrals; caps = max panel counts per level;
    theta_fold rescales the folded angular domain back to the printed one.
    Pairs whose angular integral provably stays under its floor (via
    theta_bound) contribute zero with the bound as their error, unsampled.
    """

    def over_budget():
        return counter[0] > spec.max_evals

    inner_rtol = rel_tol / 5.0
    theta_floor = floors[2] / theta_fold

    def omega_fn(_req, omega_pts):
        lreqs = [Request(breaks=lateral_breaks_for(w), rel_tol=inner_rtol,
                         abs_floor=floors[1], max_panels=caps[1]) for w in omega_pts]

        def lateral_fn(lat_idx, lam):
            w = omega_pts[lat_idx]
            fac = factors_fn(p, w, lam)
            vals = np.zeros(w.size)
            errs = np.zeros(w.size)
            l1s = np.zeros(w.size)
            if theta_floor > 0.0:
                limit = theta_bound(fac) / theta_fold
                live = np.flatnonzero(limit > theta_floor)
                skipped = limit <= theta_floor
                errs[skipped] = limit[skipped]
                l1s[skipped] = limit[skipped]
            else:
                live = np.arange(w.size)
            if live.size:
                treqs = [Request(breaks=theta_breaks_for(w[i], lam[i]), rel_tol=inner_rtol,
                                 abs_floor=theta_floor, max_panels=caps[2]) for i in live]

                def theta_fn(pair_idx, theta):
                    counter[0] += theta.size
                    return theta_eval_fast(fid, p, fac, live[pair_idx], theta)

                touts = integrate_batch(theta_fn, treqs, should_stop=over_budget)
                vals[live] = [o.value for o in touts]
                errs[live] = [o.error for o in touts]
                l1s[live] = [o.l1 for o in touts]
            return theta_fold * vals, theta_fold * errs, theta_fold * l1s

        louts = integrate_batch(lateral_fn, lreqs, should_stop=over_budget)
        return (np.array([o.value for o in louts]),
                np.array([o.error for o in louts]),
                np.array([o.l1 for o in louts]))

    outer = Request(breaks=omega_breaks, rel_tol=0.7 * rel_tol,
                    abs_floor=floors[0], max_panels=caps[0], strict=True)
    return integrate_batch(omega_fn, [outer], should_stop=over_budget)[0]


def _nested_3d(p, spec, fid, sector, level_fns, theta_fold, theta_bound):
    """Two-pass nest: a coarse bootstrap (sparser seeds, loose tolerance)
    fixes the global scale, then the production pass runs with absolute
    floors tied to that scale so regions that cannot matter are skipped or
    converge immediately.  Returns the raw engine Outcome and the physics
    evaluation count."""
    counter = [0]

    def run(coarse_pass, **kw):
        omega_breaks, lateral_breaks_for, theta_breaks_for, factors_fn = level_fns(coarse_pass)
        return _run_nest(p, spec, fid, omega_breaks, lateral_breaks_for,
                         theta_breaks_for, factors_fn, theta_fold,
                         theta_bound, counter, **kw)

    floor_null = spec.abs_floor * _RAW3 * 0.9
    coarse = run(True, rel_tol=1e-2, floors=(floor_null, 0.0, 0.0), caps=(192, 64, 32))
    scale = max(abs(coarse.value), 1e-3 * coarse.l1)
    if scale <= floor_null:
        # integrand is null to within the reporting floor (equilibrium etc.)
        return coarse, counter[0]

    omega_breaks, lateral_breaks_for, _, _ = level_fns(False)
    w_width = float(omega_breaks[-1] - omega_breaks[0])
    lat_width = max(float(np.max(lateral_breaks_for(omega_breaks[-1]))), 1e-300)
    rel = spec.rel_tol
    floors = (max(floor_null, 0.25 * rel * scale),
              0.08 * rel * scale / w_width,
              0.05 * rel * scale / (w_width * lat_width))
    out = run(False, rel_tol=rel, floors=floors, caps=(2048, 1024, 256))
    return out, counter[0]


def _finish(out, evals, norm, fid, sector):
    result = ForceResult(value=out.value / norm, error_estimate=out.error / norm,
                         evals=evals, formulation=fid, sector=sector,
                         converged=out.converged)
    if not out.converged:
        raise ConvergenceError(
            f"{sector.value} integral ({fid.value}) did not converge: "
            f"value {result.value:.6e}, error {result.error_estimate:.3e}, "
            f"{evals} evaluations", result=result)
    return result


def integrate_evanescent(fid, p, spec=None):
    """Evanescent-sector force for one formulation.

    PH integrates omega over the full real axis as printed (split at 0);
    VP and the DK forms over omega > 0.  The DK quadrant form keeps its
    printed quadrant angular domain.
    """
    spec = spec or QuadratureSpec()
    if fid not in FormulationId:
        raise DomainError(f"unknown formulation {fid}")
    quadrant = fid is FormulationId.DK_QUADRANT
    branches = (+1, -1) if quadrant else (+1,)
    pref_abs = {FormulationId.PH: 1.0 / p.kin.gamma, FormulationId.VP: EIGHT_PI,
                FormulationId.DK_FOLDED: EIGHT_PI / p.kin.gamma,
                FormulationId.DK_QUADRANT: SIXTEEN_PI / p.kin.gamma}[fid]

    def level_fns(coarse):
        return (_omega_breaks(p, spec, full_axis=fid is FormulationId.PH, coarse=coarse),
                lambda w: _kappa_breaks(p, spec, w, coarse=coarse),
                lambda w, kap: _theta_breaks(p, w, math.hypot(kap, w), quadrant,
                                             branches, coarse=coarse),
                ev_factors)

    out, evals = _nested_3d(
        p, spec, fid, SectorId.EVANESCENT, level_fns,
        theta_fold=1.0 if quadrant else 2.0,
        theta_bound=_make_theta_bound(p, spec, "ev", pref_abs, len(branches)),
    )
    return _finish(out, evals, _RAW3, fid, SectorId.EVANESCENT)


def integrate_prop_surface(fid, p, spec=None):
    """Propagating surface-wave force (PH, folded DK, or quadrant DK)."""
    spec = spec or QuadratureSpec()
    if fid not in (FormulationId.PH, FormulationId.DK_FOLDED, FormulationId.DK_QUADRANT):
        raise DomainError(f"no printed per-particle propagating formula for {fid}")
    quadrant = fid is FormulationId.DK_QUADRANT
    branches = (+1, -1) if quadrant else (+1,)
    pref_abs = {FormulationId.PH: 2.0 / p.kin.gamma,
                FormulationId.DK_FOLDED: EIGHT_PI / p.kin.gamma,
                FormulationId.DK_QUADRANT: SIXTEEN_PI / p.kin.gamma}[fid]

    def level_fns(coarse):
        def theta_breaks(w, qz):
            q = math.sqrt(max(w * w - qz * qz, 0.0))
            return _theta_breaks(p, w, q, quadrant, branches, coarse=coarse)

        return (_omega_breaks(p, spec, full_axis=False, coarse=coarse),
                lambda w: _qz_breaks(p, w), theta_breaks, prop_factors)

    out, evals = _nested_3d(
        p, spec, fid, SectorId.PROP_SURFACE, level_fns,
        theta_fold=1.0 if quadrant else 2.0,
        theta_bound=_make_theta_bound(p, spec, "prop", pref_abs, len(branches)),
    )
    return _finish(out, evals, _RAW3, fid, SectorId.PROP_SURFACE)


def integrate_vp_stress(p, spec=None):
    """VP propagating stress on the surface (force per unit area).

    A distinct quantity kind; never placed in ratio with per-particle
    forces.  The integrand has no 1/q_z but the same substitution is
    applied for domain regularity.
    """
    spec = spec or QuadratureSpec()

    def level_fns(coarse):
        def theta_breaks(w, qz):
            q = math.sqrt(max(w * w - qz * qz, 0.0))
            return _theta_breaks(p, w, q, False, (+1,), coarse=coarse)

        return (_omega_breaks(p, spec, full_axis=False, coarse=coarse),
                lambda w: np.array([0.0, 0.5 * w, w]), theta_breaks, stress_factors)

    out, evals = _nested_3d(
        p, spec, FormulationId.VP, SectorId.VP_STRESS, level_fns,
        theta_fold=2.0,
        theta_bound=_make_theta_bound(p, spec, "stress", 1.0, 1),
    )
    return _finish(out, evals, _RAW3, FormulationId.VP, SectorId.VP_STRESS)


def integrate_freespace(fid, p, spec=None):
    """Free-space (blackbody drag) force, 2-D adaptive over omega and x."""
    spec = spec or QuadratureSpec()
    if fid not in (FormulationId.PH, FormulationId.DK_FOLDED):
        raise DomainError(f"no printed free-space formula for {fid}")
    counter = [0]
    kin = p.kin
    # DK shifts with 1 + beta x, PH with 1 - beta x
    shift_sign = 1.0 if fid is FormulationId.DK_FOLDED else -1.0

    def x_breaks(w):
        pts = {-1.0, 0.0, 1.0}
        if kin.beta > 0.0 and w > 0.0:
            for t in (p.particle.omega0, -p.particle.omega0):
                x = shift_sign * (t / (kin.gamma * w) - 1.0) / kin.beta
                if -1.0 < x < 1.0:  # co-moving frequency crosses the resonance here
                    pts.add(x)
        return np.array(sorted(pts))

    def over_budget():
        return counter[0] > spec.max_evals

    omega_breaks = _omega_breaks(p, spec, full_axis=False)

    def run(rel_tol, floors, caps):
        inner_rtol = rel_tol / 8.0

        def omega_fn(_req, omega_pts):
            xreqs = [Request(breaks=x_breaks(w), rel_tol=inner_rtol,
                             abs_floor=floors[1], max_panels=caps[1]) for w in omega_pts]

            def x_fn(idx, x):
                counter[0] += x.size
                return fs_kernel(fid, p, omega_pts[idx], x)

            outs = integrate_batch(x_fn, xreqs, should_stop=over_budget)
            return (np.array([o.value for o in outs]),
                    np.array([o.error for o in outs]),
                    np.array([o.l1 for o in outs]))

        outer = Request(breaks=omega_breaks, rel_tol=0.7 * rel_tol,
                        abs_floor=floors[0], max_panels=caps[0], strict=True)
        return integrate_batch(omega_fn, [outer], should_stop=over_budget)[0]

    floor_null = spec.abs_floor * _RAW1 * 0.9
    coarse = run(3e-3, (floor_null, 0.0), (256, 48))
    scale = max(abs(coarse.value), 1e-3 * coarse.l1)
    if scale <= floor_null:
        return _finish(coarse, counter[0], _RAW1, fid, SectorId.FREE_SPACE)
    w_width = float(omega_breaks[-1])
    rel = spec.rel_tol
    out = run(rel, (max(floor_null, 0.25 * rel * scale), 0.05 * rel * scale / w_width),
              (2048, 256))
    return _finish(out, counter[0], _RAW1, fid, SectorId.FREE_SPACE)


def integrate_sector(fid, sector, p, spec=None):
    """Dispatch to the sector integrators (used by the harness and CLI)."""
    if sector is SectorId.EVANESCENT:
        return integrate_evanescent(fid, p, spec)
    if sector is SectorId.PROP_SURFACE:
        return integrate_prop_surface(fid, p, spec)
    if sector is SectorId.FREE_SPACE:
        return integrate_freespace(fid, p, spec)
    if sector is SectorId.VP_STRESS:
        if fid is not FormulationId.VP:
            raise DomainError("the propagating stress is printed only in the VP formulation")
        return integrate_vp_stress(p, spec)
    raise DomainError(f"unknown sector {sector}")


def riemann_oracle(sector, fid, p, grid_n, spec=None):
    """Independent fixed-grid midpoint sum on the truncated, substituted domain.

    Shares nothing with the adaptive engine beyond the integrand
    evaluators: the domain truncation is restated here and the sum is a
    plain midpoint rule, chunked one frequency slab at a time.
    """
    if grid_n < 32:
        raise DomainError(f"oracle grid must have >= 32 points per axis, got {grid_n}")
    spec = spec or QuadratureSpec()
    kin, th = p.kin, p.thermal
    # same truncation policy as the adaptive path, restated independently
    scale = max(th.t1, th.t2, p.particle.omega0, p.surface.omega_p)
    wmax = spec.omega_cutoff_factor * scale * kin.gamma * (1.0 + kin.beta)
    kmax = spec.tail_exponent / (2.0 * kin.z)

    def midpoints(lo, hi, n):
        h = (hi - lo) / n
        return lo + h * (np.arange(n) + 0.5), h

    if sector is SectorId.FREE_SPACE:
        if fid not in (FormulationId.PH, FormulationId.DK_FOLDED):
            raise DomainError(f"no printed free-space formula for {fid}")
        wc, dw = midpoints(0.0, wmax, grid_n)
        xc, dx = midpoints(-1.0, 1.0, grid_n)
        rows = [float(np.sum(fs_kernel(fid, p, w, xc))) for w in wc]
        return math.fsum(rows) * dw * dx / _RAW1

    quadrant = fid is FormulationId.DK_QUADRANT
    theta_hi = 0.5 * math.pi if quadrant else 2.0 * math.pi
    tc, dth = midpoints(0.0, theta_hi, grid_n)

    if sector is SectorId.EVANESCENT:
        lo = -wmax if fid is FormulationId.PH else 0.0
        wc, dw = midpoints(lo, wmax, grid_n)
        kc, dk = midpoints(0.0, kmax, grid_n)
        idx = np.repeat(np.arange(grid_n), grid_n)
        theta = np.tile(tc, grid_n)
        rows = []
        for w in wc:
            fac = ev_factors(p, np.full(grid_n, w), kc)
            rows.append(float(np.sum(ev_eval(fid, p, fac, idx, theta))))
        return math.fsum(rows) * dw * dk * dth / _RAW3

    if sector in (SectorId.PROP_SURFACE, SectorId.VP_STRESS):
        if sector is SectorId.PROP_SURFACE:
            if fid not in (FormulationId.PH, FormulationId.DK_FOLDED, FormulationId.DK_QUADRANT):
                raise DomainError(f"no printed per-particle propagating formula for {fid}")
        elif fid is not FormulationId.VP:
            raise DomainError("the propagating stress is printed only in the VP formulation")
        wc, dw = midpoints(0.0, wmax, grid_n)
        uc, du = midpoints(0.0, 1.0, grid_n)  # q_z = omega * u keeps the domain rectangular
        idx = np.repeat(np.arange(grid_n), grid_n)
        theta = np.tile(tc, grid_n)
        rows = []
        for w in wc:
            qz = w * uc
            if sector is SectorId.PROP_SURFACE:
                fac = prop_factors(p, np.full(grid_n, w), qz)
                vals = prop_eval(fid, p, fac, idx, theta)
            else:
                fac = stress_factors(p, np.full(grid_n, w), qz)
                vals = stress_eval(p, fac, idx, theta)
            rows.append(float(np.sum(vals)) * w)  # Jacobian d(q_z) = omega du
        return math.fsum(rows) * dw * du * dth / _RAW3

    raise DomainError(f"unknown sector {sector}")
