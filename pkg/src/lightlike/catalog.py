"""Built-in metrics and hypersurface patches.

Metrics (coordinates are listed in chart order):

``minkowski(n)``
    ``diag(1, ..., 1, -1)`` on ``(x_1, ..., x_{n-1}, t)``.
``de_sitter(n, K)`` / ``anti_de_sitter(n, K)``
    Conformally flat chart ``g = eta / (1 + K eta(x, x) / 4)^2`` of constant
    curvature ``K`` (``K > 0`` resp. ``K < 0``) around the origin. Null
    geodesics through the origin are straight lines of the chart.
``eddington_finkelstein(m)``
    Ingoing Eddington-Finkelstein form of Schwarzschild on ``(v, r, theta, phi)``:
    ``-(1 - 2m/r) dv^2 + 2 dv dr + r^2 dOmega^2``.
``conformally_flat(n, amplitude)``
    ``g = exp(2 sigma) eta`` with ``sigma = amplitude/2 * sum_i q_i x_i^2``,
    ``q = (1, -1/2, 1/4, ...)``. Not of constant curvature; its isotropic
    sectional curvature is nonzero.

Hypersurfaces (the first parameter always runs along the null generators):

``null_hyperplane(n)``      ``x = (u1, u2, ..., u_{n-1}, u1)`` in Minkowski.
``light_cone(n)``           ``x = apex + s (omega(angles), 1)``, future cone.
``ellipsoid_null_congruence(a, b, c)``
    null geodesics leaving the ellipsoid ``x^2/a^2 + y^2/b^2 + z^2/c^2 = 1``
    in ``t = 0`` orthogonally: ``x = (p(theta, phi) + s nu(theta, phi), s)``.
``schwarzschild_horizon(m)`` ``(v, theta, phi) -> (v, 2m, theta, phi)``.
``custom(exprs)``           components as expressions of ``u1 .. u_{n-1}``.
"""

import numpy as np

from .hypersurface import HypersurfacePatch
from .tensorcalc import MetricField

# ----------------------------------------------------------------------------
# metrics


def _eta(n):
    return np.diag([1.0] * (n - 1) + [-1.0])


def minkowski(n=4):
    eta = _eta(n)
    return MetricField(
        dim=n,
        components=lambda x: eta.copy(),
        chart_bounds=np.tile([-1e3, 1e3], (n, 1)),
        first_derivatives=lambda x: np.zeros((n, n, n)),
        second_derivatives=lambda x: np.zeros((n, n, n, n)),
        name="minkowski",
        params={"n": n},
    )


def _constant_curvature(n, K, name):
    eta = _eta(n)
    diag = np.diag(eta)
    if K > 0:
        half = 1.5 / np.sqrt(K)
    else:
        half = 1.5 / np.sqrt(-K * (n - 1))

    def phi(x):
        return 1.0 + 0.25 * K * float(x @ (diag * x))

    def g(x):
        return eta / phi(x) ** 2

    def dg(x):
        xl = diag * x
        return -K * np.einsum("ij,k->ijk", eta, xl) / phi(x) ** 3

    def d2g(x):
        p = phi(x)
        xl = diag * x
        inner = eta / p ** 3 - 1.5 * K * np.outer(xl, xl) / p ** 4
        return -K * np.einsum("ij,kl->ijkl", eta, inner)

    return MetricField(
        dim=n,
        components=g,
        chart_bounds=np.tile([-half, half], (n, 1)),
        first_derivatives=dg,
        second_derivatives=d2g,
        name=name,
        params={"n": n, "K": K},
    )


def de_sitter(n=4, K=1.0):
    if K <= 0:
        raise ValueError("de Sitter curvature must be positive")
    return _constant_curvature(n, float(K), "de_sitter")


def anti_de_sitter(n=4, K=-1.0):
    if K >= 0:
        raise ValueError("anti-de Sitter curvature must be negative")
    return _constant_curvature(n, float(K), "anti_de_sitter")


def eddington_finkelstein(m=1.0):
    m = float(m)

    def g(x):
        _, r, th, _ = x
        out = np.zeros((4, 4))
        out[0, 0] = -(1.0 - 2.0 * m / r)
        out[0, 1] = out[1, 0] = 1.0
        out[2, 2] = r * r
        out[3, 3] = (r * np.sin(th)) ** 2
        return out

    def dg(x):
        _, r, th, _ = x
        out = np.zeros((4, 4, 4))
        out[0, 0, 1] = -2.0 * m / r ** 2
        out[2, 2, 1] = 2.0 * r
        out[3, 3, 1] = 2.0 * r * np.sin(th) ** 2
        out[3, 3, 2] = r * r * np.sin(2.0 * th)
        return out

    def d2g(x):
        _, r, th, _ = x
        out = np.zeros((4, 4, 4, 4))
        out[0, 0, 1, 1] = 4.0 * m / r ** 3
        out[2, 2, 1, 1] = 2.0
        out[3, 3, 1, 1] = 2.0 * np.sin(th) ** 2
        out[3, 3, 1, 2] = out[3, 3, 2, 1] = 2.0 * r * np.sin(2.0 * th)
        out[3, 3, 2, 2] = 2.0 * r * r * np.cos(2.0 * th)
        return out

    bounds = np.array([[-100.0, 100.0], [0.1 * m, 100.0 * m], [0.05, np.pi - 0.05], [-20.0, 20.0]])
    return MetricField(
        dim=4,
        components=g,
        chart_bounds=bounds,
        first_derivatives=dg,
        second_derivatives=d2g,
        name="eddington_finkelstein",
        params={"m": m},
    )


def conformally_flat(n=4, amplitude=0.2):
    a = float(amplitude)
    eta = _eta(n)
    q = (-0.5) ** np.arange(n)

    def sigma_grad(x):
        return a * q * x

    def g(x):
        return np.exp(a * float(np.sum(q * x * x))) * eta

    def dg(x):
        return 2.0 * np.einsum("ij,k->ijk", g(x), sigma_grad(x))

    def d2g(x):
        s1 = sigma_grad(x)
        inner = 2.0 * a * np.diag(q) + 4.0 * np.outer(s1, s1)
        return np.einsum("ij,kl->ijkl", g(x), inner)

    return MetricField(
        dim=n,
        components=g,
        chart_bounds=np.tile([-2.0, 2.0], (n, 1)),
        first_derivatives=dg,
        second_derivatives=d2g,
        name="conformally_flat",
        params={"n": n, "amplitude": a},
    )


METRICS = {
    "minkowski": minkowski,
    "de_sitter": de_sitter,
    "anti_de_sitter": anti_de_sitter,
    "eddington_finkelstein": eddington_finkelstein,
    "conformally_flat": conformally_flat,
}

# ----------------------------------------------------------------------------
# hypersurfaces


def null_hyperplane(n=4, half_width=1.0):
    def f(u):
        return np.concatenate([u, u[:1]])

    jac = np.vstack([np.eye(n - 1), np.eye(n - 1)[:1]])
    return HypersurfacePatch(
        ambient_dim=n,
        map_fn=f,
        jacobian_fn=lambda u: jac.copy(),
        param_bounds=np.tile([-half_width, half_width], (n - 1, 1)),
        name="null_hyperplane",
        params={"n": n},
    )


def sphere_direction(angles):
    """Unit vector in R^{m+1} from ``m`` hyperspherical angles and its derivatives.

    Returns ``(omega, domega)`` with ``domega[j]`` the derivative along angle ``j``.
    """
    angles = np.asarray(angles, dtype=float)
    m = angles.size
    s, c = np.sin(angles), np.cos(angles)
    omega = np.empty(m + 1)
    domega = np.zeros((m, m + 1))
    for k in range(m + 1):
        factors = [s[j] for j in range(min(k, m))]
        last = c[k] if k < m else 1.0
        omega[k] = np.prod(factors) * last
        for j in range(min(k + 1, m)):
            prod = 1.0
            for jj in range(min(k, m)):
                prod *= c[jj] if jj == j else s[jj]
            if j == k:
                prod *= -s[k]
            else:
                prod *= last
            domega[j, k] = prod
    return omega, domega


def light_cone(n=4, apex=None, s_range=(0.25, 2.0), polar_margin=0.3):
    apex = np.zeros(n) if apex is None else np.asarray(apex, dtype=float)

    def f(u):
        omega, _ = sphere_direction(u[1:])
        return apex + u[0] * np.append(omega, 1.0)

    def jac(u):
        omega, domega = sphere_direction(u[1:])
        out = np.zeros((n, n - 1))
        out[:, 0] = np.append(omega, 1.0)
        out[: n - 1, 1:] = u[0] * domega.T
        return out

    bounds = [list(s_range)]
    bounds += [[polar_margin, np.pi - polar_margin]] * (n - 3)
    bounds += [[-np.pi, np.pi]]
    return HypersurfacePatch(
        ambient_dim=n,
        map_fn=f,
        jacobian_fn=jac,
        param_bounds=np.array(bounds),
        name="light_cone",
        params={"n": n, "apex": apex.tolist()},
        scale=1.0 / float(s_range[1]),
    )


def ellipsoid_frame(a, b, c, theta, phi):
    """Point, unit outward normal and their angular derivatives on the ellipsoid."""
    st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    p = np.array([a * st * cp, b * st * sp, c * ct])
    p_t = np.array([a * ct * cp, b * ct * sp, -c * st])
    p_p = np.array([-a * st * sp, b * st * cp, 0.0])
    inv2 = np.array([1.0 / a ** 2, 1.0 / b ** 2, 1.0 / c ** 2])
    N, N_t, N_p = inv2 * p, inv2 * p_t, inv2 * p_p
    norm = np.linalg.norm(N)
    nu = N / norm
    nu_t = (N_t - nu * (nu @ N_t)) / norm
    nu_p = (N_p - nu * (nu @ N_p)) / norm
    return p, p_t, p_p, nu, nu_t, nu_p


def ellipsoid_null_congruence(a=1.0, b=1.3, c=1.7, s_range=(0.0, 0.5),
                              theta_range=(0.4, 1.2), phi_range=(0.3, 1.2)):
    def f(u):
        p, _, _, nu, _, _ = ellipsoid_frame(a, b, c, u[1], u[2])
        return np.append(p + u[0] * nu, u[0])

    def jac(u):
        _, p_t, p_p, nu, nu_t, nu_p = ellipsoid_frame(a, b, c, u[1], u[2])
        out = np.zeros((4, 3))
        out[:, 0] = np.append(nu, 1.0)
        out[:3, 1] = p_t + u[0] * nu_t
        out[:3, 2] = p_p + u[0] * nu_p
        return out

    return HypersurfacePatch(
        ambient_dim=4,
        map_fn=f,
        jacobian_fn=jac,
        param_bounds=np.array([s_range, theta_range, phi_range], dtype=float),
        name="ellipsoid_null_congruence",
        params={"a": a, "b": b, "c": c},
        scale=1.0 / min(a, b, c),
    )


def schwarzschild_horizon(m=1.0, v_range=(-5.0, 5.0), theta_range=(0.4, np.pi - 0.4),
                          phi_range=(-np.pi, np.pi)):
    m = float(m)

    def f(u):
        return np.array([u[0], 2.0 * m, u[1], u[2]])

    jac = np.zeros((4, 3))
    jac[0, 0] = jac[2, 1] = jac[3, 2] = 1.0
    return HypersurfacePatch(
        ambient_dim=4,
        map_fn=f,
        jacobian_fn=lambda u: jac.copy(),
        param_bounds=np.array([v_range, theta_range, phi_range], dtype=float),
        name="schwarzschild_horizon",
        params={"m": m},
        scale=1.0 / (2.0 * m),
    )


def custom(exprs, param_bounds):
    """Patch from component expressions in ``u1 .. u_{n-1}`` (sympy syntax)."""
    import sympy

    n = len(exprs)
    syms = sympy.symbols(" ".join(f"u{k + 1}" for k in range(n - 1)))
    syms = list(syms) if isinstance(syms, (tuple, list)) else [syms]
    comps = [sympy.sympify(e, locals={s.name: s for s in syms}) for e in exprs]
    jac_expr = sympy.Matrix(comps).jacobian(syms)
    f_num = sympy.lambdify(syms, comps, "numpy")
    j_num = sympy.lambdify(syms, jac_expr, "numpy")
    return HypersurfacePatch(
        ambient_dim=n,
        map_fn=lambda u: np.array(f_num(*u), dtype=float),
        jacobian_fn=lambda u: np.array(j_num(*u), dtype=float).reshape(n, n - 1),
        param_bounds=np.asarray(param_bounds, dtype=float),
        name="custom",
        params={"exprs": list(exprs)},
    )


HYPERSURFACES = {
    "null_hyperplane": null_hyperplane,
    "light_cone": light_cone,
    "ellipsoid_null_congruence": ellipsoid_null_congruence,
    "schwarzschild_horizon": schwarzschild_horizon,
    "custom": custom,
}


def catalog():
    """Names of the built-in metrics and hypersurfaces with their parameters."""
    import inspect

    def describe(table, kind):
        rows = []
        for name, fn in table.items():
            sig = inspect.signature(fn)
            params = {k: (None if v.default is inspect.Parameter.empty else v.default)
                      for k, v in sig.parameters.items()}
            rows.append({"kind": kind, "name": name, "params": params})
        return rows

    return describe(METRICS, "metric") + describe(HYPERSURFACES, "hypersurface")
