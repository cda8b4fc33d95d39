"""Lightlike hypersurface patches, fundamental forms and classification."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from ._fd import EPS, partials4
from .errors import ImmersionError, LightlikeError, NotLightlikeError, StencilError
from .nullframe import RANK_RTOL, induced_metric, radical_coefficients
from .tensorcalc import christoffel

JACOBIAN_STEP = EPS ** 0.2
CLUSTER_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class HypersurfacePatch:
    """Parameterization ``u -> x`` of a hypersurface with ``n - 1`` parameters.

    ``jacobian_fn(u)`` returns the ``(n, n - 1)`` matrix ``dx/du``; without it
    a fourth-order difference quotient is used.
    """

    ambient_dim: int
    map_fn: Callable[[np.ndarray], np.ndarray]
    param_bounds: np.ndarray
    jacobian_fn: Optional[Callable] = None
    name: str = "custom"
    params: dict = field(default_factory=dict)
    scale: float = 1.0

    def __post_init__(self):
        bounds = np.asarray(self.param_bounds, dtype=float)
        if bounds.shape != (self.ambient_dim - 1, 2):
            raise ValueError(f"param_bounds must have shape ({self.ambient_dim - 1}, 2)")
        object.__setattr__(self, "param_bounds", bounds)

    def point(self, u):
        return np.asarray(self.map_fn(np.asarray(u, dtype=float)), dtype=float)

    def jacobian(self, u):
        u = np.asarray(u, dtype=float)
        if self.jacobian_fn is not None:
            return np.asarray(self.jacobian_fn(u), dtype=float)
        return partials4(self.point, u, JACOBIAN_STEP).T

    def contains(self, u):
        u = np.asarray(u, dtype=float)
        return bool(np.all(u >= self.param_bounds[:, 0]) and np.all(u <= self.param_bounds[:, 1]))


def _check_immersion(jac):
    sv = np.linalg.svd(jac, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise ImmersionError("patch Jacobian is rank deficient")


def verify_lightlike(patch, metric, at):
    """Classify the induced metric at ``at`` by its rank.

    Returns ``"lightlike"``, ``"spacelike_or_timelike"`` or ``"degenerate"``.
    """
    jac = patch.jacobian(at)
    _check_immersion(jac)
    h = induced_metric(metric.g(patch.point(at)), jac)
    w = np.linalg.eigvalsh(h)
    scale = float(np.max(np.abs(w)))
    rank = int(np.sum(np.abs(w) > RANK_RTOL * scale)) if scale > 0 else 0
    m = patch.ambient_dim - 1
    if rank == m:
        return "spacelike_or_timelike"
    if rank == m - 1:
        return "lightlike"
    return "degenerate"


def radical_vector(patch, metric, u, pivot=None):
    """Radical vector at ``u`` in the documented gauge; returns ``(r, pivot)``."""
    jac = patch.jacobian(u)
    h = induced_metric(metric.g(patch.point(u)), jac)
    c, pivot = radical_coefficients(h, pivot)
    return jac @ c, pivot


@dataclass(frozen=True)
class ShapeData:
    point: np.ndarray
    g_ab: np.ndarray
    lambda_ab: np.ndarray
    lambda_up: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, g_ab-orthonormal screen coefficients
    clusters: tuple  # ((value, multiplicity), ...)
    frame: object
    symmetry_residual: float

    @property
    def n(self):
        return self.point.size


def cluster_eigenvalues(values, rtol=CLUSTER_RTOL):
    values = np.sort(np.asarray(values, dtype=float))
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    clusters = []
    for v in values:
        if clusters:
            ref, mult = clusters[-1]
            if abs(v - ref) <= rtol * max(abs(v), abs(ref), 1e-300) or (
                scale == 0.0 or abs(v - ref) <= 1e-14 * scale
            ):
                clusters[-1] = ((ref * mult + v) / (mult + 1), mult + 1)
                continue
        clusters.append((float(v), 1))
    return tuple((float(v), int(m)) for v, m in clusters)


def shape_from_tensor(frame, lam_raw):
    """Assemble :class:`ShapeData` from a (possibly unsymmetric) ``lambda_ab``."""
    lam_raw = np.asarray(lam_raw, dtype=float)
    lam = 0.5 * (lam_raw + lam_raw.T)
    G = frame.screen_gram
    w, v = scipy.linalg.eigh(lam, G)
    return ShapeData(
        point=frame.point,
        g_ab=G,
        lambda_ab=lam,
        lambda_up=np.linalg.solve(G, lam),
        eigenvalues=w,
        eigenvectors=v,
        clusters=cluster_eigenvalues(w),
        frame=frame,
        symmetry_residual=float(np.max(np.abs(lam_raw - lam_raw.T))) if lam.size else 0.0,
    )


def covariant_radical_derivatives(patch, metric, at, step, pivot=None):
    """``nabla_{X_k} r`` for the documented radical field along each patch direction.

    Returns ``(r, nabla_r, pivot)`` with ``nabla_r`` of shape ``(n - 1, n)``.
    """
    at = np.asarray(at, dtype=float)
    r0, pivot = radical_vector(patch, metric, at, pivot)

    def field_at(v):
        try:
            return radical_vector(patch, metric, v, pivot)[0]
        except LightlikeError as exc:
            raise StencilError(f"radical field unavailable near {list(v)}: {exc}") from exc

    dr = partials4(field_at, at, step)
    gam = christoffel(metric, patch.point(at))
    jac = patch.jacobian(at)
    nabla = dr + np.einsum("ijl,jk,l->ki", gam, jac, r0)
    return r0, nabla, pivot


def second_fundamental_form(patch, metric, frame, at, step=1e-3, radical=None):
    """Second fundamental tensor ``lambda_ab = g(e_a, nabla_{e_b} e1)`` at ``at``.

    ``radical`` may carry a precomputed :func:`covariant_radical_derivatives`
    result for the same point (it does not depend on the frame gauge).
    """
    at = np.asarray(at, dtype=float)
    if radical is None:
        if verify_lightlike(patch, metric, at) != "lightlike":
            raise NotLightlikeError(f"patch is not lightlike at {at.tolist()}")
        radical = covariant_radical_derivatives(patch, metric, at, step, pivot=frame.pivot)
    r0, nabla_r, _ = radical
    scale = float(frame.e1 @ r0) / float(r0 @ r0)
    if np.linalg.norm(frame.e1 - scale * r0) > 1e-8 * np.linalg.norm(frame.e1):
        raise LightlikeError("frame e1 is not along the radical of the patch at this point")
    jac = patch.jacobian(at)
    coeffs, *_ = np.linalg.lstsq(jac, frame.e_a.T, rcond=None)  # (n-1, n-2)
    nabla_eb = coeffs.T @ nabla_r  # row b: nabla_{e_b} r
    lam_raw = scale * (frame.e_a @ frame.g @ nabla_eb.T)
    return shape_from_tensor(frame, lam_raw)


def g_norm(mat, G):
    """Frame-independent norm ``sqrt(tr(G^-1 X G^-1 X))`` of a symmetric tensor."""
    m = np.linalg.solve(G, mat)
    return float(np.sqrt(max(np.trace(m @ m), 0.0)))


@dataclass(frozen=True)
class Classification:
    kind: str  # totally_geodesic | totally_umbilical | generic
    umbilic_lambda: Optional[float] = None
    norm: float = 0.0
    umbilic_defect: float = 0.0


def classify(shape, tol_abs=1e-7, tol_rel=1e-5, scale=1.0):
    G = shape.g_ab
    lam = shape.lambda_ab
    norm = g_norm(lam, G)
    if norm < tol_abs * scale:
        return Classification("totally_geodesic", None, norm, 0.0)
    m = G.shape[0]
    mean = float(np.trace(np.linalg.solve(G, lam))) / m
    defect = g_norm(lam - mean * G, G)
    if defect < tol_rel * norm:
        return Classification("totally_umbilical", mean, norm, defect)
    return Classification("generic", None, norm, defect)
