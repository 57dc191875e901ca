"""Convex planar bodies given by truncated support-function series.

A body is encoded by its support function h(theta) = a0 +
sum_k (a_k cos k theta + b_k sin k theta) over modes k >= 2.  Mode 1
is excluded: it translates the body without changing its shape, and
admitting it would defeat the congruent-to-disk detector.  The radius
of curvature is rho = h + h'' = a0 + sum_k (1 - k^2)(a_k cos k theta +
b_k sin k theta), obtained by exact term-by-term differentiation, and
strict convexity of a C^2 boundary is exactly rho > 0.  Perimeter is
2 pi a0 by Cauchy's formula.

Integrals of smooth periodic functions over theta use the periodic
trapezoid rule on a uniform grid, which converges spectrally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvexDomainError, ParameterError

DEFAULT_SAMPLES = 4096
CONGRUENCE_RTOL = 1e-12
SNAP_RTOL = 1e-12


def _validate_coeffs(coeffs):
    seen = set()
    clean = []
    for entry in coeffs:
        try:
            k, ak, bk = entry
        except (TypeError, ValueError):
            raise ParameterError(
                f"support coefficient entries must be (k, a_k, b_k) triples, got {entry!r}"
            )
        k = int(k)
        if k != entry[0]:
            raise ParameterError(f"mode index must be an integer, got {entry[0]!r}")
        if k < 2:
            raise ParameterError(
                f"support modes start at k = 2 (k = 1 is a pure translation), got k = {k}"
            )
        if k in seen:
            raise ParameterError(f"duplicate support mode k = {k}")
        ak, bk = float(ak), float(bk)
        if not (np.isfinite(ak) and np.isfinite(bk)):
            raise ParameterError(f"coefficients of mode {k} must be finite")
        seen.add(k)
        clean.append((k, ak, bk))
    clean.sort()
    return tuple(clean)


@dataclass(frozen=True, eq=False)
class ConvexDomain:
    """Support-function body with cached curvature data.

    Construct through `domain_from_support`, which validates convexity
    and fills the caches; the dataclass itself stores the dense sample
    grid of rho = h + h'' alongside the derived scalars.
    """

    a0: float
    coeffs: tuple
    samples: int
    theta: np.ndarray
    support: np.ndarray
    rho: np.ndarray
    perimeter: float
    rho_min: float
    rho_max: float

    @property
    def kappa_max(self) -> float:
        return 1.0 / self.rho_min

    @property
    def kappa_min(self) -> float:
        return 1.0 / self.rho_max

    @property
    def kappa(self) -> np.ndarray:
        return 1.0 / self.rho

    def is_disk(self) -> bool:
        """True when every k >= 2 coefficient is negligible against a0."""
        return all(
            max(abs(ak), abs(bk)) <= CONGRUENCE_RTOL * self.a0
            for _, ak, bk in self.coeffs
        )


def domain_from_support(a0: float, coeffs=(), samples: int = DEFAULT_SAMPLES) -> ConvexDomain:
    """Build a ConvexDomain, rejecting non-convex coefficient data.

    rho is evaluated on `samples` uniform angles; if it dips to <= 0
    anywhere on that grid the body is not strictly convex (or not C^2
    as a graph of its support function) and a NonConvexDomainError
    carrying the offending angle is raised.
    """
    a0 = float(a0)
    if not (np.isfinite(a0) and a0 > 0.0):
        raise ParameterError(f"mean support a0 must be positive, got {a0}")
    if samples < 1024:
        raise ParameterError(f"need at least 1024 angular samples, got {samples}")
    coeffs = _validate_coeffs(coeffs)

    theta = np.arange(samples) * (2.0 * np.pi / samples)
    support = np.full(samples, a0)
    rho = np.full(samples, a0)
    for k, ak, bk in coeffs:
        wave = ak * np.cos(k * theta) + bk * np.sin(k * theta)
        support += wave
        rho += (1.0 - k * k) * wave

    i_min = int(np.argmin(rho))
    if rho[i_min] <= 0.0:
        raise NonConvexDomainError(theta=float(theta[i_min]), value=float(rho[i_min]))

    return ConvexDomain(
        a0=a0,
        coeffs=coeffs,
        samples=int(samples),
        theta=theta,
        support=support,
        rho=rho,
        perimeter=2.0 * np.pi * a0,
        rho_min=float(rho[i_min]),
        rho_max=float(rho.max()),
    )


def curvature_weight(domain: ConvexDomain, t):
    """W(t) = integral of kappa/(1 + kappa t) d theta = integral d theta/(rho + t).

    Periodic trapezoid over the cached rho samples; accepts a scalar
    t >= 0 or an array of them (evaluated in memory-bounded chunks).
    For a disk this collapses to 2 pi / (R + t) exactly, constant
    integrands being integrated exactly by the trapezoid rule.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t_arr)) or np.any(t_arr < 0.0):
        raise ParameterError("curvature weight needs finite t >= 0")
    scalar = t_arr.ndim == 0
    flat = np.atleast_1d(t_arr).ravel()
    out = np.empty(flat.shape)
    step = max(1, int(2e7) // domain.samples)
    for i in range(0, flat.size, step):
        block = flat[i : i + step]
        out[i : i + step] = np.mean(
            1.0 / (domain.rho[None, :] + block[:, None]), axis=1
        )
    out *= 2.0 * np.pi
    if scalar:
        return float(out[0])
    return out.reshape(np.atleast_1d(t_arr).shape)


@dataclass(frozen=True)
class ConstraintMargins:
    """Hypothesis margins of the curvature-constrained comparison.

    curvature_margin = 1/R - max kappa (>= 0 means the hypothesis
    holds); perimeter_excess = L - 2 pi R; congruent is the
    coefficient-level disk test.  Margins within 1e-12 relative of
    zero are snapped to exactly zero so that float dust from the
    Fourier evaluation cannot flip a boundary case.
    """

    curvature_margin: float
    perimeter_excess: float
    congruent: bool

    @property
    def hypothesis_ok(self) -> bool:
        return self.curvature_margin >= 0.0


def constraint_margins(domain: ConvexDomain, radius: float) -> ConstraintMargins:
    """Margins of `domain` against the comparison disk of this radius."""
    radius = float(radius)
    if not (np.isfinite(radius) and radius > 0.0):
        raise ParameterError(f"comparison radius must be positive, got {radius}")
    inv_r = 1.0 / radius
    curv = inv_r - domain.kappa_max
    if abs(curv) <= SNAP_RTOL * max(inv_r, domain.kappa_max):
        curv = 0.0
    two_pi_r = 2.0 * np.pi * radius
    perim = domain.perimeter - two_pi_r
    if abs(perim) <= SNAP_RTOL * max(domain.perimeter, two_pi_r):
        perim = 0.0
    return ConstraintMargins(curv, perim, domain.is_disk())


def parse_domain(text: str, samples: int = DEFAULT_SAMPLES) -> ConvexDomain:
    """Parse the plain-text domain format.

    Lines are `a0 <value>` or `coeff <k> <a_k> <b_k>` in any order;
    blank lines are ignored; anything else is rejected.  Exactly one
    a0 line is required and mode indices may not repeat.
    """
    a0 = None
    coeffs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        if key == "a0":
            if len(parts) != 2:
                raise ParameterError(f"line {lineno}: a0 takes exactly one value")
            if a0 is not None:
                raise ParameterError(f"line {lineno}: a0 given twice")
            a0 = _parse_float(parts[1], lineno)
        elif key == "coeff":
            if len(parts) != 4:
                raise ParameterError(
                    f"line {lineno}: coeff takes three values <k> <a_k> <b_k>"
                )
            try:
                k = int(parts[1])
            except ValueError:
                raise ParameterError(f"line {lineno}: mode index {parts[1]!r} is not an integer")
            coeffs.append((k, _parse_float(parts[2], lineno), _parse_float(parts[3], lineno)))
        else:
            raise ParameterError(f"line {lineno}: unknown key {key!r}")
    if a0 is None:
        raise ParameterError("domain file has no a0 line")
    return domain_from_support(a0, coeffs, samples)


def _parse_float(token, lineno):
    try:
        return float(token)
    except ValueError:
        raise ParameterError(f"line {lineno}: {token!r} is not a number")


def read_domain(path, samples: int = DEFAULT_SAMPLES) -> ConvexDomain:
    """Read and parse a domain definition file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_domain(fh.read(), samples)
