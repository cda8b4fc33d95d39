"""Convergence of the finite-difference pipeline against the sympy ellipsoid oracle.

Prints the eigenvalue error and the Riccati residual for a range of stencil
steps, which is how the default steps were chosen.

    python3 scripts/step_convergence.py [--point 0.2 0.7 0.6]
"""

import argparse

import numpy as np

from lightlike import catalog as C
from lightlike._fd import StencilSteps
from lightlike.surface import LightlikeSurface


def exact_eigenvalues(a, b, c, u):
    """Principal curvatures k of the ellipsoid, propagated as k / (1 + s k)."""
    p, p_t, p_p, nu, nu_t, nu_p = C.ellipsoid_frame(a, b, c, u[1], u[2])
    first = np.array([[p_t @ p_t, p_t @ p_p], [p_p @ p_t, p_p @ p_p]])
    second = -np.array([[p_t @ nu_t, p_t @ nu_p], [p_p @ nu_t, p_p @ nu_p]])
    k = -np.sort(np.linalg.eigvals(np.linalg.solve(first, second)).real)
    return np.sort(k / (1.0 + u[0] * k))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--point", type=float, nargs=3, default=[0.2, 0.7, 0.6])
    args = ap.parse_args()
    u = np.array(args.point)
    exact = exact_eigenvalues(1.0, 1.3, 1.7, u)
    print(f"exact eigenvalues {exact}")
    print(f"{'h':>8} {'eig err':>10} {'riccati':>10}")
    for h in (4e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3, 5e-4):
        steps = StencilSteps(frame=h, invariant=2 * h, screen=1.5 * h)
        for metric in (C.minkowski(4), C.conformally_flat(4, 0.2)):
            surf = LightlikeSurface(metric, C.ellipsoid_null_congruence(), steps=steps)
            ric = float(np.max(np.abs(surf.riccati_residual(u))))
            if metric.name == "minkowski":
                err = float(np.max(np.abs(surf.shape(u).eigenvalues - exact)))
                print(f"{h:8.0e} {err:10.2e} {ric:10.2e}  (minkowski)")
            else:
                print(f"{h:8.0e} {'':>10} {ric:10.2e}  (conformally_flat)")


if __name__ == "__main__":
    main()
