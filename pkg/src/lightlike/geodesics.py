"""Isotropic geodesics, the Jacobi matrix of the generator map and focal points.

Along a generator ``x + s e1`` the generator map has Jacobi matrix
``delta^a_b + s lambda^a_b``; it degenerates at ``s_a = -1/lambda_a``, giving
the focal points ``F_a = x - e1 / lambda_a`` in the flat development. In a
curved ambient space the same points are reported in development
coordinates, and optionally also as exponential-map images obtained by
integrating the geodesic with initial velocity ``-e1 / lambda_a`` up to
affine parameter 1.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import RK45

from .errors import DomainError, NotLightlikeError, NotUmbilicalError
from .hypersurface import classify
from .tensorcalc import christoffel

RTOL = 1e-10
ATOL = 1e-12
NULL_TOL = 1e-9
EXIT_MARGIN = 1e-6
INFINITY_TOL = 1e-9


@dataclass(frozen=True)
class GeodesicRecord:
    x0: np.ndarray
    v0: np.ndarray
    s: np.ndarray
    x: np.ndarray  # (len(s), n)
    v: np.ndarray
    null_norm: np.ndarray  # g(v, v) at each sample
    exited: bool
    on_surface_residual: Optional[np.ndarray] = None

    @property
    def null_drift(self):
        return float(np.max(np.abs(self.null_norm - self.null_norm[0])))


def _rhs(metric):
    n = metric.dim

    def f(_, y):
        x, v = y[:n], y[n:]
        gam = christoffel(metric, x)
        return np.concatenate([v, -np.einsum("ijk,j,k->i", gam, v, v)])

    return f


def _inside(metric, x, margin):
    lo, hi = metric.chart_bounds[:, 0], metric.chart_bounds[:, 1]
    pad = margin * (hi - lo)
    return bool(np.all(x > lo + pad) and np.all(x < hi - pad))


def integrate_isotropic_geodesic(metric, x0, v0, s_max, steps=100, rtol=RTOL, atol=ATOL,
                                 surface_residual: Optional[Callable] = None, null_tol=NULL_TOL):
    """Integrate the geodesic through ``x0`` with null velocity ``v0`` on ``[0, s_max]``.

    Samples are taken at ``steps + 1`` equally spaced parameters. When the
    trajectory leaves the chart the record is truncated and ``exited`` is set.
    """
    x0 = np.asarray(x0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    g0 = metric.g(x0)
    norm0 = float(v0 @ g0 @ v0)
    if abs(norm0) > null_tol * max(1.0, float(np.abs(g0).max()) * float(v0 @ v0)):
        raise NotLightlikeError(f"initial velocity is not null (g(v, v) = {norm0:.3e})")
    n = metric.dim
    s_grid = np.linspace(0.0, float(s_max), int(steps) + 1)
    solver = RK45(_rhs(metric), 0.0, np.concatenate([x0, v0]), float(s_max), rtol=rtol, atol=atol)
    ys, ss = [solver.y.copy()], [0.0]
    idx, exited = 1, False
    while solver.status == "running" and not exited:
        try:
            solver.step()
        except DomainError:
            # a trial stage left the chart; the solver state is untouched, so retry shorter
            solver.h_abs *= 0.25
            if solver.h_abs < 1e-12 * max(1.0, float(s_max)):
                exited = True
            continue
        if solver.status == "failed":
            break
        dense = solver.dense_output()
        while idx < s_grid.size and s_grid[idx] <= solver.t:
            y = dense(s_grid[idx])
            if not _inside(metric, y[:n], EXIT_MARGIN):
                exited = True
                break
            ys.append(y)
            ss.append(s_grid[idx])
            idx += 1
        if not _inside(metric, solver.y[:n], EXIT_MARGIN):
            exited = True
    ys, ss = np.array(ys), np.array(ss)
    exited = exited or ss[-1] < s_grid[-1]
    xs, vs = ys[:, :n], ys[:, n:]
    null = np.array([v @ metric.g(x) @ v for x, v in zip(xs, vs)])
    resid = None
    if surface_residual is not None:
        resid = np.array([float(surface_residual(x)) for x in xs])
    return GeodesicRecord(x0=x0, v0=v0, s=ss, x=xs, v=vs, null_norm=null, exited=bool(exited),
                          on_surface_residual=resid)


def jacobi_matrix(shape, s):
    """``delta^a_b + s lambda^a_b``."""
    lam = shape.lambda_up
    return np.eye(lam.shape[0]) + s * lam


def jacobi_determinant(shape, s):
    return float(np.linalg.det(jacobi_matrix(shape, s)))


@dataclass(frozen=True)
class FocalSet:
    point: np.ndarray
    eigenvalues: np.ndarray  # one per cluster
    multiplicities: np.ndarray
    s_values: np.ndarray  # -1/lambda, nan at infinity
    at_infinity: np.ndarray
    points: np.ndarray  # development coordinates, nan rows at infinity
    jacobi_dets: np.ndarray  # det(delta + s lambda) at each finite s_a
    exp_points: Optional[np.ndarray] = None  # exponential-map images (nan if unreachable)

    @property
    def count(self):
        return int(np.sum(self.multiplicities))

    @property
    def finite(self):
        return ~self.at_infinity


def focal_points(shape, frame=None, metric=None, exponential=False, tol=INFINITY_TOL):
    """Focal points of the generator through ``shape.point``.

    ``frame`` defaults to ``shape.frame``. With ``exponential=True`` and a
    ``metric``, exponential-map images are attached as well.
    """
    frame = shape.frame if frame is None else frame
    x = frame.point
    scale = max(1.0, float(np.max(np.abs(shape.eigenvalues)))) if shape.eigenvalues.size else 1.0
    vals, mults, s_vals, inf, pts, dets, exps = [], [], [], [], [], [], []
    for lam, mult in shape.clusters:
        vals.append(lam)
        mults.append(mult)
        if abs(lam) <= tol * scale:
            inf.append(True)
            s_vals.append(np.nan)
            pts.append(np.full(x.size, np.nan))
            dets.append(np.nan)
            exps.append(np.full(x.size, np.nan))
            continue
        s = -1.0 / lam
        inf.append(False)
        s_vals.append(s)
        pts.append(x - frame.e1 / lam)
        dets.append(jacobi_determinant(shape, s))
        if exponential and metric is not None:
            exps.append(exponential_image(metric, x, -frame.e1 / lam))
        else:
            exps.append(np.full(x.size, np.nan))
    return FocalSet(
        point=x,
        eigenvalues=np.array(vals),
        multiplicities=np.array(mults, dtype=int),
        s_values=np.array(s_vals),
        at_infinity=np.array(inf, dtype=bool),
        points=np.array(pts),
        jacobi_dets=np.array(dets),
        exp_points=np.array(exps) if exponential else None,
    )


def exponential_image(metric, x, v, steps=20):
    """``exp_x(v)``, or a nan vector when the geodesic leaves the chart first."""
    try:
        rec = integrate_isotropic_geodesic(metric, x, v, 1.0, steps=steps)
    except (DomainError, NotLightlikeError):
        return np.full(np.asarray(x).size, np.nan)
    if rec.exited or rec.s[-1] < 1.0:
        return np.full(np.asarray(x).size, np.nan)
    return rec.x[-1]


def umbilical_focus(shape, frame=None, tol_abs=1e-7, tol_rel=1e-5, scale=1.0):
    """The single focus ``F = x - e1 / lambda`` of a totally umbilical hypersurface."""
    frame = shape.frame if frame is None else frame
    cls = classify(shape, tol_abs=tol_abs, tol_rel=tol_rel, scale=scale)
    if cls.kind != "totally_umbilical":
        raise NotUmbilicalError(f"hypersurface is {cls.kind} at {frame.point.tolist()}")
    return frame.point - frame.e1 / cls.umbilic_lambda
