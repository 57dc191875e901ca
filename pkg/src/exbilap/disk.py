"""Negative spectrum of the exterior-disk problem, fiber by fiber.

`solve_fiber` locates the lowest eigenvalue of one angular fiber with
an adaptive two-stage control loop: the truncation length T is doubled
(element count growing proportionally) until the eigenvalue stops
moving at the requested relative tolerance, then the mesh is refined at
fixed T, doubling the element count at least once to confirm spatial
convergence.  Enlarging T extends the clamped Hermite space, so the
discrete eigenvalue can only decrease during stage one; a Richardson
extrapolation over the final refinement is reported as a diagnostic.

`ground_state` scans modes n = 0..n_max and classifies the minimizer as
radial or non-radial; `sweep` drives parameter grids.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from .errors import BracketError, ConvergenceError, ParameterError
from .fiber import FiberParams, HermiteProfile, assemble_fiber
from .numerics import build_mesh, eig_residual, smallest_eigenpair

CLASS_RADIAL = "radial"
CLASS_NONRADIAL = "non-radial"
CLASS_DEGENERATE = "degenerate-within-tolerance"
CLASS_NONE = "no-bound-state"


@dataclass(frozen=True)
class SolveControls:
    """Knobs of the truncation/refinement loop.

    t0 defaults to 30 * radius; elems_per_unit is the element density of
    the initial mesh (elements per unit radial length).  none_doublings
    bounds how many truncation doublings are spent looking for a
    negative eigenvalue before concluding there is none at the largest
    truncation tried.
    """

    rtol: float = 1e-6
    t0: float | None = None
    elems_per_unit: float = 40.0
    max_doublings: int = 8
    none_doublings: int = 3
    gauss_points: int = 6
    max_elems: int = 4_000_000
    atol: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.rtol <= 1e-3):
            raise ParameterError(f"rtol must lie in (0, 1e-3], got {self.rtol}")
        if not (np.isfinite(self.atol) and self.atol >= 0.0):
            raise ParameterError(f"atol must be finite and >= 0, got {self.atol}")
        if self.t0 is not None and not (np.isfinite(self.t0) and self.t0 > 0.0):
            raise ParameterError(f"t0 must be positive, got {self.t0}")
        if self.elems_per_unit < 1.0:
            raise ParameterError("need at least one element per unit length")
        if self.max_doublings < 1:
            raise ParameterError("max_doublings must be >= 1")
        if self.none_doublings < 0:
            raise ParameterError("none_doublings must be >= 0")

    def initial_t(self, radius: float) -> float:
        return self.t0 if self.t0 is not None else 30.0 * radius


@dataclass(frozen=True)
class EigenResult:
    """Converged fiber eigenpair with its convergence history.

    record lists (T, n_elems, eigenvalue-or-None) for every pencil
    solved; richardson is an order-4 extrapolation over the last mesh
    doubling, reported as a diagnostic only.  The profile is normalized
    to unit mass integral(|f|^2 r dr) = 1 with f(R) >= 0.
    """

    params: FiberParams
    lam: float
    profile: HermiteProfile
    residual: float
    residual_rel: float
    record: tuple
    richardson: float | None
    converged: bool = True


def _solve_pencil(params, mesh, pencil_rtol):
    a, m = assemble_fiber(params, mesh)
    out = smallest_eigenpair(a, m, rtol=pencil_rtol)
    if out is None:
        return None
    lam, x = out
    return lam, x, a, m


def _finalize(params, mesh, lam, x, a, m, record, richardson, rtol):
    nrm = math.sqrt(float(x @ m.matvec(x)))
    x = x / nrm
    anchor = x[0] if x[0] != 0.0 else x[np.argmax(np.abs(x))]
    if anchor < 0.0:
        x = -x
    res, res_rel = eig_residual(a, m, lam, x)
    if res_rel > 1e3 * rtol:
        raise ConvergenceError(
            f"eigenpair residual {res_rel:.3e} exceeds contract 1e3*rtol", record
        )
    profile = HermiteProfile.from_free_coeffs(mesh, x, mass_norm=1.0)
    return EigenResult(params, float(lam), profile, res, res_rel, tuple(record), richardson)


def solve_fiber(params: FiberParams, controls: SolveControls | None = None):
    """Lowest eigenvalue of one fiber, or None when nothing lies below 0.

    For gamma >= 0 every term of the fiber form is non-negative at any
    truncation, so None is returned after a single sanity factorization.
    For gamma < 0 the truncation is doubled until either a negative
    eigenvalue is found (then stabilized in T and in mesh density) or
    the no-eigenvalue budget is exhausted.
    """
    controls = controls or SolveControls()
    radius = params.radius
    t = controls.initial_t(radius)
    pencil_rtol = max(min(0.05 * controls.rtol, 1e-7), 1e-12)
    record = []

    def mesh_for(t, density):
        n_elems = max(4, math.ceil(density * t))
        if n_elems > controls.max_elems:
            raise ConvergenceError(
                f"requested mesh of {n_elems} elements exceeds the "
                f"max_elems cap {controls.max_elems}", record
            )
        return build_mesh(radius, t, n_elems, controls.gauss_points)

    if params.gamma >= 0.0:
        mesh = mesh_for(t, controls.elems_per_unit)
        out = _solve_pencil(params, mesh, pencil_rtol)
        record.append((t, mesh.n_elems, out[0] if out else None))
        if out is not None:
            raise ConvergenceError(
                "negative eigenvalue found although the form is non-negative", record
            )
        return None

    # stage one: grow the truncated interval
    lam_prev = None
    hit = None
    for step in range(controls.max_doublings + 1):
        mesh = mesh_for(t, controls.elems_per_unit)
        out = _solve_pencil(params, mesh, pencil_rtol)
        record.append((t, mesh.n_elems, out[0] if out else None))
        # an eigenvalue within atol of zero is indistinguishable from the
        # edge of the continuum at the requested tolerance, so it is not a
        # detection; chasing it would hand inverse iteration a shift inside
        # the near-zero cluster, where no reliable eigenpair exists
        if out is None or out[0] >= -controls.atol:
            if step >= controls.none_doublings:
                return None
            t *= 2.0
            continue
        lam = out[0]
        if lam_prev is not None and abs(lam - lam_prev) <= controls.rtol * abs(lam) + controls.atol:
            hit = (mesh, out)
            break
        lam_prev = lam
        t *= 2.0
    if hit is None:
        raise ConvergenceError(
            f"truncation growth exhausted {controls.max_doublings} doublings "
            f"without stabilizing the eigenvalue", record
        )

    # stage two: refine the mesh at fixed T until two successive meshes
    # agree to rtol; the reported eigenpair is the finest solve and the
    # Richardson extrapolation over the last doubling is kept as a
    # diagnostic.  Note that halving h raises the rounding floor of the
    # assembled quadratic forms (~eps/h^4), so rtol below roughly 1e-7
    # can stall here; the stall guard turns that into a clear error.
    mesh, (lam, x, a, m) = hit
    t = mesh.length
    delta_prev = None
    for _ in range(controls.max_doublings):
        if 2 * mesh.n_elems > controls.max_elems:
            raise ConvergenceError(
                f"mesh refinement would exceed the max_elems cap "
                f"{controls.max_elems}", record
            )
        mesh2 = build_mesh(radius, t, 2 * mesh.n_elems, controls.gauss_points)
        out2 = _solve_pencil(params, mesh2, pencil_rtol)
        if out2 is None:
            raise ConvergenceError("eigenvalue lost under mesh refinement", record)
        lam2, x2, a2, m2 = out2
        record.append((t, mesh2.n_elems, lam2))
        delta = abs(lam2 - lam)
        richardson = lam2 + (lam2 - lam) / 15.0
        if delta <= controls.rtol * abs(lam2) + controls.atol:
            return _finalize(params, mesh2, lam2, x2, a2, m2, record, richardson, controls.rtol)
        if delta_prev is not None and delta > 0.6 * delta_prev:
            # refinement has stopped contracting: the requested rtol sits
            # below the rounding floor of the assembled forms
            raise ConvergenceError(
                f"eigenvalue changes stalled at {delta / abs(lam2):.3e} relative, "
                f"above rtol {controls.rtol:.1e}", record
            )
        delta_prev = delta
        mesh, lam, x, a, m = mesh2, lam2, x2, a2, m2
    raise ConvergenceError(
        f"mesh refinement exhausted {controls.max_doublings} doublings "
        f"without stabilizing the eigenvalue", record
    )


@dataclass(frozen=True)
class GroundStateReport:
    """Mode scan outcome: per-fiber results and the ground-state class.

    classification is one of 'radial', 'non-radial',
    'degenerate-within-tolerance', 'no-bound-state'; tol is the
    eigenvalue comparison tolerance the classification used.
    """

    tau: float
    gamma: float
    radius: float
    n_max: int
    results: dict
    n_star: int | None
    classification: str
    tol: float

    @property
    def lam(self) -> float | None:
        if self.n_star is None:
            return None
        return self.results[self.n_star].lam


def ground_state(
    tau: float,
    gamma: float,
    radius: float,
    controls: SolveControls | None = None,
    n_max: int = 3,
) -> GroundStateReport:
    """Scan fibers n = 0..n_max and classify the overall minimizer.

    Solver failures are annotated with the offending mode and re-raised.
    The radial/non-radial call uses tol = max(10 * rtol * |lambda(0)|,
    1e-10); eigenvalues closer than tol give the degenerate verdict.
    """
    controls = controls or SolveControls()
    if n_max < 0:
        raise ParameterError("n_max must be >= 0")
    results = {}
    controls_n = controls
    for n in range(n_max + 1):
        p = FiberParams(tau, gamma, radius, n)
        try:
            results[n] = solve_fiber(p, controls_n)
        except (ConvergenceError, BracketError) as err:
            raise ConvergenceError(
                f"fiber n={n}: {err}", getattr(err, "record", ())
            ) from err
        if n == 0:
            # Higher fibers only matter relative to the classification
            # tolerance, so give them an absolute floor: shallow modes
            # near zero cannot be (and need not be) resolved to a
            # relative tolerance the assembly noise floor does not allow.
            lam0 = results[0].lam if results[0] is not None else None
            scale0 = abs(lam0) if lam0 is not None else 0.0
            tol0 = max(10.0 * controls.rtol * scale0, 1e-10)
            controls_n = replace(controls, atol=max(controls.atol, 0.02 * tol0))

    found = {n: res.lam for n, res in results.items() if res is not None}
    if not found:
        return GroundStateReport(
            tau, gamma, radius, n_max, results, None, CLASS_NONE, 1e-10
        )
    n_star = min(found, key=lambda n: (found[n], n))
    lam0 = found.get(0)
    scale = abs(lam0) if lam0 is not None else abs(found[n_star])
    tol = max(10.0 * controls.rtol * scale, 1e-10)
    others = [found[n] for n in found if n != 0]
    if lam0 is None:
        cls = CLASS_NONRADIAL
    elif not others or all(lam0 <= lam - tol for lam in others):
        cls = CLASS_RADIAL
    elif any(lam < lam0 - tol for lam in others):
        cls = CLASS_NONRADIAL
    else:
        cls = CLASS_DEGENERATE
    return GroundStateReport(tau, gamma, radius, n_max, results, n_star, cls, tol)


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a parameter sweep; error is None on success."""

    tau: float
    gamma: float
    radius: float
    report: GroundStateReport | None
    error: str | None = None


def sweep(
    taus,
    gammas,
    radii,
    controls: SolveControls | None = None,
    n_max: int = 3,
    workers: int | None = None,
) -> list[SweepRow]:
    """Ground-state scan over the product grid taus x gammas x radii.

    Points are processed in deterministic product order; per-point
    failures are captured in the row instead of aborting the sweep.
    """
    points = list(product(taus, gammas, radii))

    def run(point):
        tau, gamma, radius = point
        try:
            rep = ground_state(tau, gamma, radius, controls, n_max)
            return SweepRow(tau, gamma, radius, rep, None)
        except (ConvergenceError, BracketError, ParameterError) as err:
            return SweepRow(tau, gamma, radius, None, str(err))

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, points))
    return [run(pt) for pt in points]


SWEEP_COLUMNS = (
    "tau",
    "gamma",
    "radius",
    "mode",
    "lambda",
    "classification",
    "T_final",
    "N_final",
    "residual",
)


def sweep_csv_rows(rows) -> list[tuple]:
    """Flatten sweep rows to CSV records, one line per fiber mode.

    Missing values (no bound state in a fiber, failed points) become
    empty fields; column order is fixed by SWEEP_COLUMNS.
    """
    out = []
    for row in rows:
        if row.report is None:
            out.append((row.tau, row.gamma, row.radius, "", "", "error", "", "", ""))
            continue
        rep = row.report
        for n in sorted(rep.results):
            res = rep.results[n]
            if res is None:
                out.append(
                    (row.tau, row.gamma, row.radius, n, "", rep.classification, "", "", "")
                )
            else:
                t_final, n_final, _ = res.record[-1]
                out.append(
                    (
                        row.tau,
                        row.gamma,
                        row.radius,
                        n,
                        res.lam,
                        rep.classification,
                        t_final,
                        n_final,
                        res.residual,
                    )
                )
    return out
