"""Deterministic batch-adaptive Gauss-Kronrod quadrature.

Many independent 1-D integrals advance together.  The whole batch lives in
flat numpy arrays (one row per panel); every refinement round makes a
single vectorized evaluation call covering all subdivided panels of all
requests, so integrand vectorization is preserved even deep inside nested
integrals.  The per-point "inner error" and "unsigned mass" channels let
an evaluation itself be an adaptive integral whose uncertainty and L1
weight propagate into the panel error; a request whose error is dominated
by the propagated inner uncertainty of its points stops subdividing, since
splitting cannot reduce it.

Determinism: panels are reduced in (request, interval) order via a stable
lexsort, and subdivision decisions depend only on computed panel data, so
identical inputs give bit-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_EPS = float(np.finfo(float).eps)
_INNER_SLACK = 1.15  # a request cannot beat the uncertainty of its own points

# Gauss-Kronrod 15(7) on [-1, 1]; the embedded Gauss rule lives on the
# odd-indexed Kronrod nodes, so one evaluation set serves both rules.
_XGK_HALF = [
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
]
_WGK_HALF = [
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
]
_WG_HALF = [
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
]

NODES = np.array([-x for x in _XGK_HALF[:-1]] + [0.0] + [x for x in reversed(_XGK_HALF[:-1])])
W_KRONROD = np.array(_WGK_HALF[:-1] + [_WGK_HALF[-1]] + list(reversed(_WGK_HALF[:-1])))
W_GAUSS = np.zeros(15)
W_GAUSS[1:14:2] = _WG_HALF[:-1] + [_WG_HALF[-1]] + list(reversed(_WG_HALF[:-1]))
POINTS_PER_PANEL = 15


@dataclass
class Request:
    """One 1-D integral: initial breakpoints plus its convergence policy.

    `breaks` must contain at least two strictly increasing points; interior
    points seed panel boundaries (kinks, resonances, oscillation budget).
    `rel_tol` is relative to the integral value, `abs_floor` an absolute
    target for integrals too small to matter, and `l1_eps` a roundoff floor
    relative to the L1 mass (cancellation cannot be resolved below it).
    `strict` refuses the inner-uncertainty relaxation, for top-level
    integrals that must meet the stated tolerance or report failure.
    """

    breaks: np.ndarray
    rel_tol: float
    abs_floor: float = 0.0
    max_evals: int = 10**9
    max_panels: int = 4096
    l1_eps: float = 100.0 * _EPS
    strict: bool = False


@dataclass
class Outcome:
    value: float
    error: float
    evals: int
    converged: bool
    n_panels: int
    l1: float = 0.0


def _eval_panels(eval_fn, req_ids, a_arr, b_arr):
    """Evaluate GK15 on a flat batch of panels; returns per-panel integral,
    total error, L1 mass and the propagated-inner component of the error."""
    n = a_arr.size
    half = 0.5 * (b_arr - a_arr)
    center = 0.5 * (a_arr + b_arr)
    x = (center[:, None] + half[:, None] * NODES[None, :]).ravel()
    out = eval_fn(np.repeat(req_ids, POINTS_PER_PANEL), x)
    perr = pl1 = None
    if isinstance(out, tuple):
        y = out[0]
        perr = out[1]
        if len(out) > 2:
            pl1 = out[2]
    else:
        y = out
    y = np.asarray(y, dtype=float).reshape(n, POINTS_PER_PANEL)

    val_k = half * (y @ W_KRONROD)
    val_g = half * (y @ W_GAUSS)
    if pl1 is not None:
        # point values are inner integrals; their unsigned mass, not |value|,
        # is the honest L1 density for the roundoff floor
        resabs = half * (np.asarray(pl1, dtype=float).reshape(n, POINTS_PER_PANEL) @ W_KRONROD)
    else:
        resabs = half * (np.abs(y) @ W_KRONROD)
    err = np.maximum(np.abs(val_k - val_g), 50.0 * _EPS * resabs)
    if perr is not None:
        inner = half * (np.abs(np.asarray(perr, dtype=float)).reshape(n, POINTS_PER_PANEL)
                        @ W_KRONROD)
        err = err + inner
    else:
        inner = np.zeros(n)
    return val_k, err, resabs, inner


class _Panels:
    """Flat panel store for one batch; all columns aligned."""

    __slots__ = ("req", "a", "b", "val", "err", "l1", "inner")

    def __init__(self, req, a, b, val, err, l1, inner):
        self.req, self.a, self.b = req, a, b
        self.val, self.err, self.l1, self.inner = val, err, l1, inner

    def take(self, mask_or_idx):
        return _Panels(self.req[mask_or_idx], self.a[mask_or_idx], self.b[mask_or_idx],
                       self.val[mask_or_idx], self.err[mask_or_idx],
                       self.l1[mask_or_idx], self.inner[mask_or_idx])

    @staticmethod
    def concat(parts):
        return _Panels(*[np.concatenate([getattr(p, f) for p in parts])
                         for f in _Panels.__slots__])

    def sort(self):
        order = np.lexsort((self.a, self.req))
        return self.take(order)

    def size(self):
        return self.req.size


def integrate_batch(eval_fn, requests, *, split_cap=None, max_rounds=100, should_stop=None):
    """Advance a batch of integration requests to convergence.

    Parameters
    ----------
    eval_fn : callable
        `eval_fn(req_idx, x)` with flat int/float arrays covering all panels
        of the round; returns integrand values, or `(values, point_errors)`
        or `(values, point_errors, point_l1)` for nested integrals.
    requests : list of Request
    should_stop : callable or None
        Checked once per round; True finalizes everything as-is (partial
        values remain available).

    Returns
    -------
    list of Outcome, in request order.
    """
    nreq = len(requests)
    rel_tol = np.array([r.rel_tol for r in requests])
    abs_floor = np.array([r.abs_floor for r in requests])
    l1_eps = np.array([r.l1_eps for r in requests])
    strict = np.array([r.strict for r in requests])
    max_panels = np.array([r.max_panels for r in requests])
    max_evals = np.array([r.max_evals for r in requests], dtype=np.int64)

    req_ids, a_list, b_list = [], [], []
    for ri, req in enumerate(requests):
        breaks = np.asarray(req.breaks, dtype=float)
        if breaks.ndim != 1 or breaks.size < 2 or not np.all(np.diff(breaks) > 0):
            raise DomainError("request breakpoints must be >= 2 strictly increasing values")
        m = breaks.size - 1
        req_ids.append(np.full(m, ri, dtype=np.int64))
        a_list.append(breaks[:-1])
        b_list.append(breaks[1:])
    req = np.concatenate(req_ids)
    a = np.concatenate(a_list)
    b = np.concatenate(b_list)
    evals = np.bincount(req, minlength=nreq).astype(np.int64) * POINTS_PER_PANEL
    val, err, l1, inner = _eval_panels(eval_fn, req, a, b)
    panels = _Panels(req, a, b, val, err, l1, inner).sort()

    active = np.ones(nreq, dtype=bool)   # still being refined
    converged = np.zeros(nreq, dtype=bool)
    frozen = []                          # panel blocks of finished requests

    for rounds in range(max_rounds + 1):
        # complete panel sets per request, in interval order
        seg = np.searchsorted(panels.req, np.arange(nreq))
        seg_end = np.searchsorted(panels.req, np.arange(nreq), side="right")
        has = seg_end > seg
        tot = np.zeros(nreq)
        errsum = np.zeros(nreq)
        l1sum = np.zeros(nreq)
        innersum = np.zeros(nreq)
        npan = (seg_end - seg).astype(np.int64)
        if panels.size():
            idx = seg[has]
            tot[has] = np.add.reduceat(panels.val, idx)
            errsum[has] = np.add.reduceat(panels.err, idx)
            l1sum[has] = np.add.reduceat(panels.l1, idx)
            innersum[has] = np.add.reduceat(panels.inner, idx)

        tol = np.maximum(rel_tol * np.abs(tot), np.maximum(abs_floor, l1_eps * l1sum))
        tol = np.where(strict, tol, np.maximum(tol, _INNER_SLACK * innersum))
        ok = errsum <= tol
        stop = bool(should_stop()) if should_stop is not None else False
        give_up = stop or rounds >= max_rounds
        done_now = active & (ok | give_up | (npan >= max_panels) | (evals >= max_evals))
        converged |= active & ok

        if np.any(done_now):
            active &= ~done_now
            frozen_mask = np.isin(panels.req, np.flatnonzero(done_now))
            frozen.append(panels.take(frozen_mask))
            panels = panels.take(~frozen_mask)
        if not np.any(active):
            break

        # split selection: reducible (quadrature) error, per-request thresholds
        red = panels.err - panels.inner
        red_max = np.zeros(nreq)
        seg = np.searchsorted(panels.req, np.arange(nreq))
        seg_end = np.searchsorted(panels.req, np.arange(nreq), side="right")
        has = seg_end > seg
        red_max[has] = np.maximum.reduceat(red, seg[has])
        budget = np.where(strict, tol, np.maximum(tol - _INNER_SLACK * innersum, 0.0))
        thr = np.maximum(0.5 * budget / np.maximum(npan, 1), 0.3 * red_max)
        thr = np.minimum(thr, 0.999999 * red_max)  # the worst panel always qualifies
        splittable = (panels.b - panels.a) > 8.0 * _EPS * np.maximum(
            np.maximum(np.abs(panels.a), np.abs(panels.b)), 1e-300)
        cand = (red > thr[panels.req]) & splittable & active[panels.req] & (red_max[panels.req] > 0)
        if not np.any(cand):
            frozen.append(panels)
            panels = panels.take(np.zeros(panels.size(), dtype=bool))
            break

        # stuck requests (nothing splittable) freeze as-is
        n_cand = np.bincount(panels.req[cand], minlength=nreq)
        stuck = active & (n_cand == 0)
        if np.any(stuck):
            active &= ~stuck
            frozen_mask = np.isin(panels.req, np.flatnonzero(stuck))
            frozen.append(panels.take(frozen_mask))
            panels = panels.take(~frozen_mask)
            cand = cand[~frozen_mask] if frozen_mask.any() else cand
            if not np.any(cand):
                continue

        parents = panels.take(cand)
        keep = panels.take(~cand)
        mid = 0.5 * (parents.a + parents.b)
        child_req = np.concatenate([parents.req, parents.req])
        child_a = np.concatenate([parents.a, mid])
        child_b = np.concatenate([mid, parents.b])
        evals += np.bincount(child_req, minlength=nreq) * POINTS_PER_PANEL
        cval, cerr, cl1, cinner = _eval_panels(eval_fn, child_req, child_a, child_b)
        children = _Panels(child_req, child_a, child_b, cval, cerr, cl1, cinner)
        panels = _Panels.concat([keep, children]).sort()

    if panels.size():
        frozen.append(panels)
    allp = _Panels.concat(frozen).sort() if frozen else panels

    outcomes = []
    seg = np.searchsorted(allp.req, np.arange(nreq))
    seg_end = np.searchsorted(allp.req, np.arange(nreq), side="right")
    for ri in range(nreq):
        lo, hi = seg[ri], seg_end[ri]
        total = float(np.sum(allp.val[lo:hi]))
        err_tot = float(np.sum(allp.err[lo:hi]))
        l1 = float(np.sum(allp.l1[lo:hi]))
        outcomes.append(Outcome(value=total, error=err_tot, evals=int(evals[ri]),
                                converged=bool(converged[ri]), n_panels=int(hi - lo), l1=l1))
    return outcomes
