"""Cross-check the variational solver against two independent oracles.

For radius 1 and a grid of (tau, gamma) pairs inside the regime where
the radial eigenvalue solves a closed-form secular equation in Bessel
functions, the script compares three routes to the same number:

  * solve_fiber       Hermite elements + banded inertia bisection
  * secular_lambda    root of the 2x2 Bessel determinant
  * fd_lambda         blunt second-order finite differences

It also shows what happens in the weak-coupling corner: the secular
root collapses double-exponentially toward the continuum edge and
leaves float64 long before the coupling reaches zero.
"""

from exbilap.disk import solve_fiber
from exbilap.fiber import FiberParams
from exbilap.reference import fd_lambda, negativity_threshold, secular_lambda


def main():
    print("solver vs oracles at radius 1, fiber n = 0")
    print(f"{'tau':>4} {'gamma':>6} {'solver':>16} {'secular':>16} "
          f"{'rel':>9} {'fd':>16} {'rel':>9}")
    for tau, gamma in ((1.0, -0.5), (1.0, -1.0), (2.0, -1.0), (2.0, -2.0),
                       (3.0, -1.0), (4.0, -2.0), (4.0, -5.0)):
        params = FiberParams(tau, gamma, 1.0, 0)
        res = solve_fiber(params)
        sec = secular_lambda(tau, gamma, 1.0)
        fdv = fd_lambda(params, h=0.02)
        rel_sec = abs(res.lam - sec) / abs(sec)
        rel_fd = abs(res.lam - fdv) / abs(fdv)
        print(f"{tau:4.0f} {gamma:6.1f} {res.lam:16.9e} {sec:16.9e} "
              f"{rel_sec:9.2e} {fdv:16.9e} {rel_fd:9.2e}")
    print()

    print("weak coupling at tau = 4: secular roots below float64 reach")
    for gamma in (-0.4, -0.2, -0.1):
        sec = secular_lambda(4.0, gamma, 1.0)
        print(f"  gamma = {gamma:5.2f}: lambda = {sec!r}")
    print("  (a state this shallow cannot be separated from the continuum")
    print("   edge by any float64 matrix method: A - sigma*M == A bitwise)")
    print()

    print("existence boundary for the u_alpha trial family:")
    for tau, gamma, radius in ((4.0, -0.1, 0.5), (0.0, -1.0, 1.0)):
        alpha_star = negativity_threshold(tau, gamma, radius)
        print(f"  tau = {tau}, gamma = {gamma}, R = {radius}: energy "
              f"turns negative below alpha* = {alpha_star:.6f}")


if __name__ == "__main__":
    main()
