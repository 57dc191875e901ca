"""Banded symmetric linear algebra on truncated radial intervals.

The discretized radial problems all lead to generalized pencils (A, M)
with A, M symmetric and banded (half-bandwidth 3 for cubic Hermite
elements) and M positive definite.  Everything needed to locate the
smallest generalized eigenvalue is built from one primitive: an
unpivoted banded LDL^T factorization that also reports matrix inertia.
By Sylvester's law of inertia the number of negative pivots of
A - sigma*M equals the number of generalized eigenvalues below sigma,
which turns eigenvalue location into a sequence of factorizations.

Banded storage convention (lower half): bands[k, j] = A[j + k, j] for
k = 0..halfband, zero-padded where j + k exceeds the order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import BracketError, ConvergenceError, FactorizationError, ParameterError

_GAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_rule(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1], cached per order."""
    if q not in _GAUSS_CACHE:
        x, w = np.polynomial.legendre.leggauss(q)
        _GAUSS_CACHE[q] = (0.5 * (x + 1.0), 0.5 * w)
    return _GAUSS_CACHE[q]


@dataclass(frozen=True, eq=False)
class TruncatedMesh:
    """Uniform mesh on [left, left + length] with a Gauss rule per element."""

    left: float
    length: float
    n_elems: int
    gauss_points: int
    nodes: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.n_elems + 1

    @property
    def right(self) -> float:
        return self.left + self.length

    @property
    def h(self) -> float:
        return self.length / self.n_elems


def build_mesh(left: float, length: float, n_elems: int, gauss_points: int = 6) -> TruncatedMesh:
    """Construct a uniform TruncatedMesh, validating the size constraints."""
    if not (np.isfinite(left) and left > 0.0):
        raise ParameterError(f"mesh left endpoint must be positive, got {left}")
    if not (np.isfinite(length) and length > 0.0):
        raise ParameterError(f"mesh length must be positive, got {length}")
    n_elems = int(n_elems)
    if n_elems < 4:
        raise ParameterError(f"need at least 4 elements, got {n_elems}")
    gauss_points = int(gauss_points)
    if gauss_points < 4:
        raise ParameterError(f"need at least 4 Gauss points per element, got {gauss_points}")
    nodes = left + (length / n_elems) * np.arange(n_elems + 1, dtype=float)
    nodes[-1] = left + length
    mesh = TruncatedMesh(float(left), float(length), n_elems, gauss_points, nodes)
    if not np.all(np.diff(nodes) > 0.0):
        raise ParameterError("mesh nodes are not strictly increasing")
    return mesh


class InertiaTriple(NamedTuple):
    """Counts of negative / zero / positive eigenvalues; sums to the order."""

    n_neg: int
    n_zero: int
    n_pos: int


@dataclass
class BandedSymMatrix:
    """Symmetric banded matrix, lower-half storage."""

    order: int
    halfband: int
    bands: np.ndarray

    def __post_init__(self):
        expect = (self.halfband + 1, self.order)
        if self.bands.shape != expect:
            raise ParameterError(
                f"band array shape {self.bands.shape} does not match {expect}"
            )

    @classmethod
    def zeros(cls, order: int, halfband: int) -> "BandedSymMatrix":
        return cls(order, halfband, np.zeros((halfband + 1, order)))

    def copy(self) -> "BandedSymMatrix":
        return BandedSymMatrix(self.order, self.halfband, self.bands.copy())

    def to_dense(self) -> np.ndarray:
        n = self.order
        a = np.zeros((n, n))
        for k in range(self.halfband + 1):
            m = n - k
            idx = np.arange(m)
            a[idx + k, idx] = self.bands[k, :m]
            if k:
                a[idx, idx + k] = self.bands[k, :m]
        return a

    def matvec(self, x: np.ndarray) -> np.ndarray:
        n = self.order
        y = self.bands[0] * x
        for k in range(1, self.halfband + 1):
            m = n - k
            y[k:] += self.bands[k, :m] * x[:m]
            y[:m] += self.bands[k, :m] * x[k:]
        return y

    def scale_of_diag(self) -> float:
        return float(np.max(np.abs(self.bands[0]))) if self.order else 0.0


def pencil_shift(a: BandedSymMatrix, m: BandedSymMatrix, sigma: float) -> BandedSymMatrix:
    """Form A - sigma*M in banded storage, aligning half-bandwidths."""
    if a.order != m.order:
        raise ParameterError("pencil matrices must share the same order")
    hb = max(a.halfband, m.halfband)
    out = np.zeros((hb + 1, a.order))
    out[: a.halfband + 1] = a.bands
    out[: m.halfband + 1] -= sigma * m.bands
    return BandedSymMatrix(a.order, hb, out)


@njit(cache=True, nogil=True)
def _ldlt_kernel(bands, tol):
    # In-place LDL^T on lower banded storage.  Unit L below the diagonal,
    # D on row 0.  Returns -1 on success, else the column index where an
    # unacceptably small pivot carries nonzero coupling (breakdown).
    nb, n = bands.shape
    b = nb - 1
    for j in range(n):
        d = bands[0, j]
        m = min(b, n - 1 - j)
        if abs(d) <= tol:
            colmax = 0.0
            for k in range(1, m + 1):
                a = abs(bands[k, j])
                if a > colmax:
                    colmax = a
            if colmax > tol:
                return j
            bands[0, j] = 0.0
            for k in range(1, m + 1):
                bands[k, j] = 0.0
            continue
        for k in range(1, m + 1):
            bands[k, j] /= d
        for c in range(1, m + 1):
            ljc = bands[c, j]
            if ljc != 0.0:
                amt = d * ljc
                for r in range(c, m + 1):
                    bands[r - c, j + c] -= amt * bands[r, j]
    return -1


@njit(cache=True, nogil=True)
def _ldlt_solve_kernel(bands, x):
    # Solves L D L^T x = rhs in place; assumes no zero pivots.
    nb, n = bands.shape
    b = nb - 1
    for j in range(n):
        xj = x[j]
        if xj != 0.0:
            m = min(b, n - 1 - j)
            for k in range(1, m + 1):
                x[j + k] -= bands[k, j] * xj
    for j in range(n):
        x[j] /= bands[0, j]
    for j in range(n - 1, -1, -1):
        m = min(b, n - 1 - j)
        acc = x[j]
        for k in range(1, m + 1):
            acc -= bands[k, j] * x[j + k]
        x[j] = acc


@dataclass
class LDLFactor:
    """Factored banded matrix with its inertia."""

    order: int
    halfband: int
    bands: np.ndarray
    inertia: InertiaTriple
    pivot_tol: float

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        if self.inertia.n_zero:
            raise FactorizationError(-1, "factor is singular; solve unavailable")
        x = np.array(rhs, dtype=float, copy=True)
        _ldlt_solve_kernel(self.bands, x)
        return x


def factor_inertia(a: BandedSymMatrix, zero_tol: float = 1e-12) -> tuple[LDLFactor, InertiaTriple]:
    """Banded LDL^T factorization with inertia count.

    Pivots within zero_tol * max|diag(A)| of zero are accepted as exact
    zeros only when their column carries no coupling above the same
    tolerance; otherwise a FactorizationError with the column index is
    raised (the caller typically retries at a nudged shift).
    """
    if zero_tol < 0.0:
        raise ParameterError("zero_tol must be non-negative")
    scale = a.scale_of_diag()
    tol = zero_tol * scale
    work = a.bands.copy()
    status = _ldlt_kernel(work, tol)
    if status >= 0:
        raise FactorizationError(status)
    d = work[0]
    n_zero = int(np.count_nonzero(d == 0.0))
    n_neg = int(np.count_nonzero(d < 0.0))
    inertia = InertiaTriple(n_neg, n_zero, a.order - n_zero - n_neg)
    return LDLFactor(a.order, a.halfband, work, inertia, tol), inertia


def _inertia_at(a, m, sigma, zero_tol):
    # Inertia of A - sigma*M; near-singular shifts are retried with sigma
    # nudged by 1e-8 * |sigma| (alternating sides, growing steps).
    shift = sigma
    last = None
    for attempt in range(8):
        try:
            _, inertia = factor_inertia(pencil_shift(a, m, shift), zero_tol)
            return inertia, shift
        except FactorizationError as err:
            last = err
            step = 1e-8 * max(abs(sigma), 1e-8) * (attempt + 1)
            shift = sigma - step if attempt % 2 == 0 else sigma + step
    raise last


def _factor_at(a, m, sigma, zero_tol):
    # Like _inertia_at but returns a nonsingular factor for solves.
    shift = sigma
    last = None
    for attempt in range(10):
        try:
            fact, inertia = factor_inertia(pencil_shift(a, m, shift), zero_tol)
            if inertia.n_zero == 0:
                return fact, shift
            last = FactorizationError(-1, "singular shifted pencil")
        except FactorizationError as err:
            last = err
        step = 1e-8 * max(abs(sigma), 1e-8) * (attempt + 1)
        shift = sigma - step if attempt % 2 == 0 else sigma + step
    raise last


def smallest_eigenpair(
    a: BandedSymMatrix,
    m: BandedSymMatrix,
    rtol: float = 1e-8,
    zero_tol: float = 1e-12,
    max_expand: int = 60,
):
    """Smallest generalized eigenvalue of (A, M) when it is negative.

    Locates the lowest eigenvalue by inertia bisection on [-Lambda, 0],
    with Lambda doubled from 1 until no eigenvalue lies below -Lambda,
    then refines the bracket to relative width rtol and polishes with
    shifted inverse iteration.  Returns (eigenvalue, M-normalized vector)
    or None when the pencil has no eigenvalue below zero.  M must be
    positive definite.
    """
    if a.order != m.order:
        raise ParameterError("pencil matrices must share the same order")
    if not 0.0 < rtol < 1e-2:
        raise ParameterError(f"rtol must lie in (0, 1e-2), got {rtol}")
    _, mi = factor_inertia(m, zero_tol)
    if mi.n_neg or mi.n_zero:
        raise ParameterError("mass matrix is not positive definite")

    i0, _ = _inertia_at(a, m, 0.0, zero_tol)
    if i0.n_neg == 0:
        return None

    lo = -1.0
    for _ in range(max_expand):
        ilo, lo_used = _inertia_at(a, m, lo, zero_tol)
        if ilo.n_neg == 0:
            lo = lo_used
            break
        lo *= 2.0
    else:
        raise BracketError(
            f"no lower spectral bound found down to {lo:.3e}; pencil unbounded?"
        )

    hi = 0.0
    for _ in range(300):
        if (hi - lo) <= rtol * max(abs(lo), abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        im, mid_used = _inertia_at(a, m, mid, zero_tol)
        if im.n_neg >= 1:
            hi = mid_used
        else:
            lo = mid_used
    sigma = 0.5 * (lo + hi)

    lam, x = _inverse_iteration(a, m, sigma, rtol, zero_tol)
    return lam, x


def _inverse_iteration(a, m, sigma, rtol, zero_tol, max_iters=30):
    # With the shift already within the refined bracket, one or two
    # solves reach the eigenvector; keep the iterate with the smallest
    # relative residual rather than chasing a stagnating Rayleigh
    # quotient through rounding noise.
    fact, _ = _factor_at(a, m, sigma, zero_tol)
    n = a.order
    x = np.ones(n)
    x /= np.sqrt(x @ m.matvec(x))
    best = None
    for it in range(max_iters):
        y = fact.solve(m.matvec(x))
        ny2 = y @ m.matvec(y)
        if not np.isfinite(ny2) or ny2 <= 0.0:
            # deterministic restart away from a degenerate start vector
            rng = np.random.default_rng(8927461 + it)
            x = rng.standard_normal(n)
            x /= np.sqrt(x @ m.matvec(x))
            continue
        y /= np.sqrt(ny2)
        ay = a.matvec(y)
        rq = float(y @ ay)
        res = float(np.linalg.norm(ay - rq * m.matvec(y)))
        scale = float(np.linalg.norm(ay))
        rel = res / scale if scale > 0.0 else res
        if best is None or rel < best[2]:
            best = (rq, y, rel)
        x = y
        if rel <= 1e-11:
            break
    if best is None:
        raise ConvergenceError(
            f"inverse iteration produced no usable iterate at shift {sigma:.6e}",
            record=((sigma, None),),
        )
    return best[0], best[1]


def eig_residual(a: BandedSymMatrix, m: BandedSymMatrix, lam: float, x: np.ndarray):
    """Euclidean residual ||A x - lam M x|| and its size relative to ||A x||."""
    ax = a.matvec(x)
    r = ax - lam * m.matvec(x)
    nr = float(np.linalg.norm(r))
    na = float(np.linalg.norm(ax))
    return nr, nr / na if na > 0.0 else nr
