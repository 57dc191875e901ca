"""Independent reference routes to the radial eigenvalue and trial energies.

Three cross-checks that share no code with the Hermite solver:

* `secular_lambda`: in the regime tau > 0, tau^2 + 4 lambda >= 0 the
  radial strong equation factors through (Lap - mu1)(Lap - mu2) f = 0
  with mu1 + mu2 = tau, mu1 mu2 = -lambda, so decaying solutions are
  combinations of K0(sqrt(mu_j) r).  Imposing the two natural boundary
  conditions at r = R gives a 2x2 determinant whose leftmost root in
  (-tau^2/4, 0) is the lowest radial eigenvalue.

* `fd_lambda`: second-order finite differences for the same fiber on
  grid values only (nonconforming), assembled directly from the
  quadratic form with trapezoid weights and one-sided boundary
  stencils, Richardson-extrapolated over one grid halving.

* `ualpha_energy`: the closed family u_alpha(r) = exp(-r^alpha / 2) fed
  through the radial quadratic form; strict negativity for some alpha
  witnesses a bound state whenever gamma < 0.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import k0e, k1e

from .errors import ConvergenceError, ParameterError, UnsupportedRegimeError
from .numerics import BandedSymMatrix, smallest_eigenpair


def _validate_tgr(tau, gamma, radius):
    if not (np.isfinite(tau) and tau >= 0.0):
        raise ParameterError(f"tension tau must be finite and >= 0, got {tau}")
    if not np.isfinite(gamma):
        raise ParameterError(f"gamma must be finite, got {gamma}")
    if not (np.isfinite(radius) and radius > 0.0):
        raise ParameterError(f"radius must be positive, got {radius}")


def secular_det(tau: float, gamma: float, radius: float, lam):
    """Boundary determinant of the radial Bessel ansatz, vectorized in lam.

    Columns are scaled by e^{z_j} (scaled Bessel functions k0e, k1e),
    which multiplies the determinant by a positive factor and leaves
    its roots and sign pattern unchanged.
    """
    lam = np.asarray(lam, dtype=float)
    disc = tau * tau + 4.0 * lam
    if np.any(disc < 0.0) or np.any(lam >= 0.0):
        raise ParameterError("secular determinant needs tau^2 + 4 lambda >= 0 > lambda")
    mu1 = 0.5 * (tau + np.sqrt(disc))
    # mu2 via the product identity mu1*mu2 = -lambda: the difference
    # form (tau - sqrt(disc))/2 cancels catastrophically once
    # |lambda| drops below eps*tau^2, and shallow roots live there
    mus = (mu1, -lam / mu1)
    rows = []
    for mu in mus:
        s = np.sqrt(mu)
        z = s * radius
        k0, k1 = k0e(z), k1e(z)
        row1 = s * s * k0 + s * k1 / radius
        row2 = k1 * s * (tau - mu - 1.0 / radius**2) + k0 * (gamma - mu / radius)
        rows.append((row1, row2))
    (a11, a21), (a12, a22) = rows
    return a11 * a22 - a12 * a21


def secular_lambda(
    tau: float,
    gamma: float,
    radius: float,
    grid: int = 4001,
    eps_left: float = 1e-9,
    eps_right: float = 1e-12,
):
    """Lowest radial eigenvalue from the Bessel secular equation.

    Scans the admissible bracket (-tau^2/4 (1 - eps_left),
    -tau^2/4 * eps_right) for sign changes of the determinant and
    refines the leftmost one by Brent's method.  Returns None when no
    sign change lies in the bracket.  Only tau > 0 is supported: at
    tau = 0 the admissible interval is empty.
    """
    _validate_tgr(tau, gamma, radius)
    if tau == 0.0:
        raise UnsupportedRegimeError(
            "the real-factorization secular equation requires tau > 0"
        )
    if grid < 16:
        raise ParameterError("grid must have at least 16 points")
    cap = tau * tau / 4.0
    lo = -cap * (1.0 - eps_left)
    hi = -cap * eps_right
    lam = np.linspace(lo, hi, grid)
    det = secular_det(tau, gamma, radius, lam)
    sign = np.sign(det)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0.0)[0]
    zeros = np.nonzero(sign == 0.0)[0]
    if not flips.size and not zeros.size:
        # weak coupling makes bound states doubly-exponentially shallow
        # (|lambda| down to e^{-c/|gamma|}), far below any linear grid;
        # sweep the remaining gap to zero on a logarithmic grid
        lam = -np.geomspace(cap * eps_right, 1e-300, 2400)
        det = secular_det(tau, gamma, radius, lam)
        sign = np.sign(det)
        flips = np.nonzero(sign[:-1] * sign[1:] < 0.0)[0]
        zeros = np.nonzero(sign == 0.0)[0]
        if not flips.size and not zeros.size:
            return None
    if zeros.size and (not flips.size or lam[zeros[0]] <= lam[flips[0]]):
        return float(lam[zeros[0]])
    i = flips[0]
    f = lambda x: float(secular_det(tau, gamma, radius, x))
    return float(
        brentq(f, lam[i], lam[i + 1], xtol=1e-300, rtol=8.9e-16, maxiter=300)
    )


def _fd_pencil(params, n_pts, h):
    # Unknowns are grid values f_0..f_{n_pts-1} at r_i = R + i h; the
    # clamped value f_{n_pts} = 0 simply drops out of the stencils.
    tau, gamma, radius = params.tau, params.gamma, params.radius
    n2 = float(params.mode * params.mode)
    r = radius + h * np.arange(n_pts)
    w = np.full(n_pts, h)
    w[0] = 0.5 * h
    bands = np.zeros((4, n_pts))

    def accumulate(i_arr, offsets, coefs, weight):
        # weight * (sum_p coefs[p] f_{i+offsets[p]})^2 over samples i_arr;
        # coefs rows broadcast against i_arr, so per-sample combinations
        # like f' - f/r are allowed.  Entries beyond the clamp are dropped.
        coefs = np.broadcast_to(coefs, (len(offsets), len(i_arr)))
        for p in range(len(offsets)):
            for q in range(p, len(offsets)):
                o_hi, o_lo = offsets[p], offsets[q]
                c = coefs[p] * coefs[q]
                if o_hi < o_lo:
                    o_hi, o_lo = o_lo, o_hi
                rows_ = i_arr + o_hi
                cols = i_arr + o_lo
                ok = rows_ < n_pts
                np.add.at(bands[o_hi - o_lo], cols[ok], (c * weight)[ok])

    def add_all(i_arr, offsets, d2c, d1c, center):
        # all five density terms at the samples i_arr, with derivative
        # stencils d2c/d1c and the offset-0 position given by `center`
        ri = r[i_arr]
        wr = w[i_arr] * ri
        accumulate(i_arr, offsets, d2c[:, None], wr)
        accumulate(i_arr, offsets, d1c[:, None], wr * tau)
        if n2 > 0.0:
            accumulate(i_arr, np.array([0]), np.ones((1, 1)), wr * tau * n2 / ri**2)
            combo = np.repeat(d1c[:, None], len(i_arr), axis=1)
            combo[center] -= 1.0 / ri
            accumulate(i_arr, offsets, combo, 2.0 * n2 * w[i_arr] / ri)
            combo = np.repeat(d1c[:, None], len(i_arr), axis=1)
            combo[center] -= n2 / ri
            accumulate(i_arr, offsets, combo, w[i_arr] / ri)
        else:
            accumulate(i_arr, offsets, d1c[:, None], w[i_arr] / ri)

    interior = np.arange(1, n_pts)
    d2 = np.array([1.0, -2.0, 1.0]) / h**2
    d1 = np.array([-0.5, 0.0, 0.5]) / h
    add_all(interior, np.array([-1, 0, 1]), d2, d1, center=1)

    bnd = np.array([0])
    d2b = np.array([2.0, -5.0, 4.0, -1.0]) / h**2
    d1b = np.array([-1.5, 2.0, -0.5, 0.0]) / h
    add_all(bnd, np.array([0, 1, 2, 3]), d2b, d1b, center=0)
    bands[0, 0] += gamma * radius

    a = BandedSymMatrix(n_pts, 3, bands)
    m = BandedSymMatrix(n_pts, 0, (w * r)[None, :].copy())
    return a, m


def fd_lambda(params, h: float = 0.02, t: float | None = None,
              richardson: bool = True):
    """Fiber eigenvalue by second-order finite differences.

    Solves the grid pencil at spacings h and h/2 on the fixed interval
    [R, R + T] (T defaults to 40 R) and returns the Richardson
    combination (4 lambda_{h/2} - lambda_h) / 3.  Returns None for
    gamma >= 0 (the form is a sum of non-negative terms) and when the
    fine grid finds nothing below zero.  With richardson=False the
    plain h/2 value is returned, which converges at the stencil
    order (two); this is the quantity to use in order studies.
    """
    _validate_tgr(params.tau, params.gamma, params.radius)
    if not (np.isfinite(h) and h > 0.0):
        raise ParameterError(f"step h must be positive, got {h}")
    if params.gamma >= 0.0:
        return None
    t = 40.0 * params.radius if t is None else float(t)
    if t <= 4.0 * h:
        raise ParameterError("interval too short for the requested step")
    n = max(8, round(t / h))
    lams = []
    for k in (n, 2 * n):
        a, m = _fd_pencil(params, k, t / k)
        out = smallest_eigenpair(a, m, rtol=1e-10)
        lams.append(None if out is None else out[0])
    coarse, fine = lams
    if fine is None:
        return None
    if not richardson or coarse is None:
        return float(fine)
    return float(fine + (fine - coarse) / 3.0)


def ualpha_energy(alpha: float, tau: float, gamma: float, radius: float) -> float:
    """Radial quadratic form evaluated on u_alpha(r) = exp(-r^alpha / 2).

    Integrates 2 pi (|u''|^2 + |u'|^2/r^2 + tau |u'|^2) r dr over
    doubling segments [R 2^k, R 2^{k+1}] until a segment contributes
    less than 1e-10 of the accumulated total, then adds the boundary
    term 2 pi gamma R e^{-R^alpha}.  The integrand is non-negative, so
    the segment test bounds the discarded tail.
    """
    _validate_tgr(tau, gamma, radius)
    if not (np.isfinite(alpha) and alpha > 0.0):
        raise ParameterError(f"alpha must be positive, got {alpha}")

    a2 = alpha * alpha / 4.0
    c1 = alpha * (alpha - 1.0) / 2.0

    def integrand(r):
        q = a2 * r ** (2.0 * alpha - 2.0) - c1 * r ** (alpha - 2.0)
        core = q * q * r + a2 * r ** (2.0 * alpha - 3.0) + tau * a2 * r ** (2.0 * alpha - 1.0)
        return math.exp(-(r**alpha)) * core

    total = 0.0
    left = radius
    for _ in range(400):
        seg, _err = quad(integrand, left, 2.0 * left, epsabs=0.0, epsrel=1e-12, limit=200)
        total += seg
        left *= 2.0
        if abs(seg) <= 1e-10 * max(abs(total), 1e-300):
            break
    else:
        raise ConvergenceError("trial-energy tail did not fall below tolerance")
    return 2.0 * math.pi * (total + gamma * radius * math.exp(-(radius**alpha)))


def negativity_threshold(
    tau: float,
    gamma: float,
    radius: float,
    alpha_max: float = 64.0,
    rtol: float = 1e-6,
) -> float:
    """Largest alpha* such that the trial energy stays negative below it.

    For gamma < 0 the energy is negative for all sufficiently small
    alpha; this walks down from alpha = 1 to find a negative sample,
    doubles upward to bracket the first sign change, and bisects.
    Returns math.inf when the energy is still negative at alpha_max and
    0.0 when gamma >= 0 (no negativity region).
    """
    _validate_tgr(tau, gamma, radius)
    if gamma >= 0.0:
        return 0.0
    lo = 1.0
    for _ in range(60):
        if ualpha_energy(lo, tau, gamma, radius) < 0.0:
            break
        lo /= 2.0
    else:
        raise ConvergenceError("no negative trial energy found down to alpha ~ 1e-18")
    hi = lo
    while True:
        if hi >= alpha_max:
            return math.inf
        nxt = min(2.0 * hi, alpha_max)
        if ualpha_energy(nxt, tau, gamma, radius) >= 0.0:
            hi = nxt
            break
        lo = nxt
        hi = nxt
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if ualpha_energy(mid, tau, gamma, radius) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
