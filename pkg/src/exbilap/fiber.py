"""Angular-fiber quadratic forms discretized with cubic Hermite elements.

Separating variables u(r, theta) = f(r) e^{i n theta} on the exterior of
a disk of radius R reduces the fourth-order problem to a family of
one-dimensional forms on (R, oo) with weight r dr, one per integer mode
n.  This module assembles two algebraically equivalent representations
of that fiber form:

* the direct route (`assemble_fiber`), with r-weighted density

      |f''|^2 + tau |f'|^2 + tau n^2 |f|^2/r^2
      + 2 n^2 |f'/r - f/r^2|^2 + |f'/r - n^2 f/r^2|^2

  plus the boundary term gamma R |f(R)|^2;

* the rearranged route (`assemble_fiber_expanded`), where the mixed
  f f' cross term of the last square is integrated by parts, leaving

      |f''|^2 + tau |f'|^2 + 2 n^2 |f'/r - f/r^2|^2
      + |f'|^2/r^2 + (tau n^2/r^2 + (n^4 - 2 n^2)/r^4) |f|^2

  plus the boundary term (n^2/R^2 + gamma R) |f(R)|^2.

For profiles clamped at the right end the two assemblies represent the
same bilinear form; comparing them is a strong self-check on both the
algebra and the quadrature.

Discretization: C^1 cubic Hermite elements on a uniform mesh, two
degrees of freedom per node (value, first derivative), with the decay
condition imposed by clamping f = f' = 0 at the far node R + T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, UnsupportedModeError
from .numerics import BandedSymMatrix, TruncatedMesh, gauss_rule

HALFBAND = 3  # two coupled nodes, two DOFs each


@dataclass(frozen=True)
class FiberParams:
    """Parameters of one angular fiber: tension, boundary coupling, radius, mode."""

    tau: float
    gamma: float
    radius: float
    mode: int = 0

    def __post_init__(self):
        if not (np.isfinite(self.tau) and self.tau >= 0.0):
            raise ParameterError(f"tension tau must be finite and >= 0, got {self.tau}")
        if not np.isfinite(self.gamma):
            raise ParameterError(f"boundary parameter gamma must be finite, got {self.gamma}")
        if not (np.isfinite(self.radius) and self.radius > 0.0):
            raise ParameterError(f"radius must be finite and positive, got {self.radius}")
        if self.mode != int(self.mode):
            raise ParameterError(f"mode must be an integer, got {self.mode}")

    def with_mode(self, mode: int) -> "FiberParams":
        return FiberParams(self.tau, self.gamma, self.radius, int(mode))


def _shape_values(xi):
    # Hermite cubics on the reference element [0, 1].
    p1 = 1.0 - 3.0 * xi**2 + 2.0 * xi**3
    p2 = xi - 2.0 * xi**2 + xi**3
    p3 = 3.0 * xi**2 - 2.0 * xi**3
    p4 = -(xi**2) + xi**3
    return p1, p2, p3, p4


def _shape_d1(xi):
    return (
        -6.0 * xi + 6.0 * xi**2,
        1.0 - 4.0 * xi + 3.0 * xi**2,
        6.0 * xi - 6.0 * xi**2,
        -2.0 * xi + 3.0 * xi**2,
    )


def _shape_d2(xi):
    return (
        -6.0 + 12.0 * xi,
        -4.0 + 6.0 * xi,
        6.0 - 12.0 * xi,
        -2.0 + 6.0 * xi,
    )


def basis_arrays(xi: np.ndarray, h: float):
    """Physical-basis values (B0), first (B1) and second (B2) derivatives.

    Each is a (4, len(xi)) array for local DOFs (value_l, slope_l,
    value_r, slope_r); slope DOFs carry the element width so that the
    coefficients are literal function values and derivatives.
    """
    p = _shape_values(xi)
    d1 = _shape_d1(xi)
    d2 = _shape_d2(xi)
    b0 = np.stack([p[0], h * p[1], p[2], h * p[3]])
    b1 = np.stack([d1[0], h * d1[1], d1[2], h * d1[3]]) / h
    b2 = np.stack([d2[0], h * d2[1], d2[2], h * d2[3]]) / h**2
    return b0, b1, b2


def _gauss_geometry(mesh: TruncatedMesh):
    xi, wq = gauss_rule(mesh.gauss_points)
    h = mesh.h
    r = mesh.nodes[:-1, None] + h * xi[None, :]
    s = (h * wq)[None, :] * r  # quadrature measure for integral(... r dr)
    return xi, r, s


def _check_mesh(params: FiberParams, mesh: TruncatedMesh):
    if abs(mesh.left - params.radius) > 1e-12 * max(1.0, params.radius):
        raise ParameterError(
            f"mesh starts at {mesh.left}, fiber radius is {params.radius}"
        )


def _form_weights(params: FiberParams, r, s, expanded: bool):
    # Symmetric derivative-pair weights w[(i, j)] multiplying
    # (D^i f)(D^j g) + (D^j f)(D^i g) for i < j, or (D^i f)(D^i g) on the
    # diagonal; the quadrature measure s is folded in.
    tau = params.tau
    n2 = float(params.mode) ** 2
    w = {(2, 2): s, (1, 1): s * (tau + (2.0 * n2 + 1.0) / r**2)}
    if n2:
        if expanded:
            w[(0, 0)] = s * (tau * n2 / r**2 + n2 * n2 / r**4)
            w[(0, 1)] = s * (-2.0 * n2 / r**3)
        else:
            w[(0, 0)] = s * (tau * n2 / r**2 + (2.0 * n2 + n2 * n2) / r**4)
            w[(0, 1)] = s * (-3.0 * n2 / r**3)
    return w


def _assemble_pairs(mesh: TruncatedMesh, weights) -> BandedSymMatrix:
    xi, _, _ = _gauss_geometry(mesh)
    b = basis_arrays(xi, mesh.h)
    n_elems = mesh.n_elems
    elem = np.zeros((n_elems, 4, 4))
    for (i, j), w in weights.items():
        blk = np.einsum("aq,bq,eq->eab", b[i], b[j], w, optimize=True)
        elem += blk
        if i != j:
            elem += blk.transpose(0, 2, 1)
    return _scatter(mesh, elem)


def _scatter(mesh: TruncatedMesh, elem: np.ndarray) -> BandedSymMatrix:
    # Element DOFs (2e .. 2e+3); the final node's pair is clamped away.
    n_elems = mesh.n_elems
    n_all = 2 * (n_elems + 1)
    bands = np.zeros((HALFBAND + 1, n_all))
    for a in range(4):
        for c in range(a + 1):
            bands[a - c, c : c + 2 * n_elems : 2] += elem[:, a, c]
    n_free = n_all - 2
    bands = bands[:, :n_free].copy()
    for k in range(1, HALFBAND + 1):
        bands[k, n_free - k :] = 0.0
    return BandedSymMatrix(n_free, HALFBAND, bands)


def assemble_mass(mesh: TruncatedMesh) -> BandedSymMatrix:
    """Gram matrix of integral(f g r dr) on the clamped Hermite space."""
    _, r, s = _gauss_geometry(mesh)
    return _assemble_pairs(mesh, {(0, 0): s})


def assemble_fiber(params: FiberParams, mesh: TruncatedMesh):
    """Stiffness and mass of the fiber form, direct representation.

    Returns (A, M) as banded symmetric matrices over the free DOFs
    (clamped far node removed).  A includes the boundary coupling
    gamma * R on the boundary-value DOF.
    """
    _check_mesh(params, mesh)
    _, r, s = _gauss_geometry(mesh)
    a = _assemble_pairs(mesh, _form_weights(params, r, s, expanded=False))
    a.bands[0, 0] += params.gamma * params.radius
    return a, assemble_mass(mesh)


def assemble_fiber_expanded(params: FiberParams, mesh: TruncatedMesh):
    """Stiffness and mass of the fiber form after the cross-term rearrangement.

    Same bilinear form as `assemble_fiber` on the clamped space; the
    f f' coupling is moved into |f|^2 bulk terms and the boundary weight
    becomes n^2/R^2 + gamma R.
    """
    _check_mesh(params, mesh)
    _, r, s = _gauss_geometry(mesh)
    a = _assemble_pairs(mesh, _form_weights(params, r, s, expanded=True))
    n2 = float(params.mode) ** 2
    a.bands[0, 0] += n2 / params.radius**2 + params.gamma * params.radius
    return a, assemble_mass(mesh)


@dataclass(eq=False)
class HermiteProfile:
    """Radial profile in the C^1 Hermite space of a truncated mesh.

    coeffs interleaves (value, derivative) per node, including the
    clamped far node, so len(coeffs) = 2 * mesh.n_nodes.  mass_norm
    records integral(|f|^2 r dr) at normalization time, None for raw
    profiles.
    """

    mesh: TruncatedMesh
    coeffs: np.ndarray
    mass_norm: float | None = None

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (2 * self.mesh.n_nodes,):
            raise ParameterError(
                f"profile needs {2 * self.mesh.n_nodes} coefficients, "
                f"got {self.coeffs.shape}"
            )

    @property
    def values(self) -> np.ndarray:
        return self.coeffs[0::2]

    @property
    def slopes(self) -> np.ndarray:
        return self.coeffs[1::2]

    @property
    def boundary_value(self) -> float:
        return float(self.coeffs[0])

    def is_clamped(self, tol: float = 0.0) -> bool:
        return abs(self.coeffs[-2]) <= tol and abs(self.coeffs[-1]) <= tol

    def reduced(self) -> np.ndarray:
        """Coefficients over the free DOFs (clamped node stripped)."""
        return self.coeffs[:-2]

    @classmethod
    def from_free_coeffs(cls, mesh: TruncatedMesh, x: np.ndarray, mass_norm=None):
        coeffs = np.concatenate([np.asarray(x, dtype=float), [0.0, 0.0]])
        return cls(mesh, coeffs, mass_norm)

    @classmethod
    def interpolate(cls, mesh: TruncatedMesh, func, dfunc, clamp: bool = True):
        """Nodal interpolant of a smooth function (value and slope per node)."""
        coeffs = np.empty(2 * mesh.n_nodes)
        coeffs[0::2] = func(mesh.nodes)
        coeffs[1::2] = dfunc(mesh.nodes)
        if clamp:
            coeffs[-2:] = 0.0
        return cls(mesh, coeffs)

    def _element_coeffs(self) -> np.ndarray:
        n_elems = self.mesh.n_elems
        c = np.empty((n_elems, 4))
        c[:, 0] = self.coeffs[0:-2:2]
        c[:, 1] = self.coeffs[1:-2:2]
        c[:, 2] = self.coeffs[2::2]
        c[:, 3] = self.coeffs[3::2]
        return c

    def gauss_eval(self):
        """Values (f, f', f'') at every Gauss point, each shaped (n_elems, q)."""
        xi, _ = gauss_rule(self.mesh.gauss_points)
        b0, b1, b2 = basis_arrays(xi, self.mesh.h)
        c = self._element_coeffs()
        f0 = np.einsum("ea,aq->eq", c, b0)
        f1 = np.einsum("ea,aq->eq", c, b1)
        f2 = np.einsum("ea,aq->eq", c, b2)
        return f0, f1, f2

    def evaluate(self, r, deriv: int = 0):
        """Evaluate the profile (or a derivative, deriv <= 2) at radii r."""
        if deriv not in (0, 1, 2):
            raise ParameterError("only derivatives 0, 1, 2 are available")
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        rr = np.atleast_1d(r)
        nodes = self.mesh.nodes
        if np.any(rr < nodes[0] - 1e-12) or np.any(rr > nodes[-1] + 1e-12):
            raise ParameterError("evaluation point outside the mesh interval")
        e = np.clip(np.searchsorted(nodes, rr, side="right") - 1, 0, self.mesh.n_elems - 1)
        xi = (rr - nodes[e]) / self.mesh.h
        b = basis_arrays(xi, self.mesh.h)[deriv]
        c = self._element_coeffs()[e]
        out = np.einsum("ma,am->m", c, b)
        return float(out[0]) if scalar else out


def fiber_form_value(params: FiberParams, profile: HermiteProfile, expanded: bool = False) -> float:
    """Quadratic form value h[f] of a clamped profile under the fiber form."""
    if not profile.is_clamped():
        raise ParameterError("profile must vanish (value and slope) at the far node")
    assemble = assemble_fiber_expanded if expanded else assemble_fiber
    a, _ = assemble(params, profile.mesh)
    x = profile.reduced()
    return float(x @ a.matvec(x))


def profile_mass(profile: HermiteProfile) -> float:
    """integral(|f|^2 r dr) over the truncated interval."""
    m = assemble_mass(profile.mesh)
    x = profile.reduced()
    return float(x @ m.matvec(x))


@dataclass(frozen=True)
class BoundaryResiduals:
    """Raw and profile-scaled natural boundary condition residuals at r = R."""

    raw_second: float
    raw_third: float
    rel_second: float
    rel_third: float


def natural_bc_residual(profile, params: FiberParams) -> BoundaryResiduals:
    """Residuals of the natural boundary conditions of the radial fiber.

    A minimizer of the n = 0 fiber form satisfies, at r = R,

        f''(R) = 0
        f'''(R) - (tau + 1/R^2) f'(R) + gamma f(R) = 0.

    Both residuals are evaluated from the first-element cubic.  The
    scaled versions divide by the largest nodal magnitude of the
    profile; a vanishing profile reports zero residuals.  Only the
    radial fiber is supported: the n != 0 natural conditions involve
    additional cross couplings and are not certified here.
    """
    if params.mode != 0:
        raise UnsupportedModeError(
            "natural boundary residuals are only defined for the radial fiber (n = 0)"
        )
    if hasattr(profile, "profile"):  # accept eigensolver results directly
        profile = profile.profile
    _check_mesh(params, profile.mesh)
    h = profile.mesh.h
    c = profile.coeffs[:4]
    fR = c[0]
    dfR = c[1]
    d2fR = (-6.0 * c[0] - 4.0 * h * c[1] + 6.0 * c[2] - 2.0 * h * c[3]) / h**2
    d3fR = (12.0 * c[0] + 6.0 * h * c[1] - 12.0 * c[2] + 6.0 * h * c[3]) / h**3
    raw1 = d2fR
    raw2 = d3fR - (params.tau + 1.0 / params.radius**2) * dfR + params.gamma * fR
    mag = float(
        max(np.max(np.abs(profile.values)), np.max(np.abs(profile.slopes)))
    )
    if mag == 0.0:
        rel1 = 0.0 if raw1 == 0.0 else np.inf
        rel2 = 0.0 if raw2 == 0.0 else np.inf
    else:
        rel1 = abs(raw1) / mag
        rel2 = abs(raw2) / mag
    return BoundaryResiduals(float(raw1), float(raw2), float(rel1), float(rel2))
