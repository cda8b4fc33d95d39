"""Adapted isotropic frames on lightlike hypersurfaces.

A frame is ``(e1, e_a, en)`` with ``e1`` the isotropic tangent (radical)
direction, ``e_a`` (``a = 2..n-1``) a spacelike screen basis in the tangent
plane and ``en`` the isotropic transversal, normalized so that the full Gram
matrix is::

    [[ 0,   0,  -1],
     [ 0, g_ab,  0],
     [-1,   0,   0]]

Frame index convention used by arrays in this module: position 0 is ``e1``,
positions ``1..n-2`` the screen vectors, position ``n-1`` is ``en``.

Documented gauge of :func:`build_isotropic_frame`: the radical vector is
written in the supplied tangent basis, ``r = sum_k c_k X_k``, and scaled so
that its first coefficient with ``|c_k| > 1e-8 max|c|`` (the *pivot*) equals 1.
For the catalog patches ``X_1`` is the generator velocity, so ``e1 = X_1``.
The screen is spanned by the remaining tangent basis vectors, orthonormalized
by Gram-Schmidt in their given order.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ._fd import directional4
from .errors import (
    DegenerateInputError,
    InvalidGaugeError,
    LightlikeError,
    NotLightlikeError,
    StencilError,
)
from .tensorcalc import christoffel

RANK_RTOL = 1e-8
PIVOT_RTOL = 1e-8
SOLVE_RESIDUAL = 1e-10


@dataclass(frozen=True)
class IsotropicFrame:
    point: np.ndarray
    e1: np.ndarray
    e_a: np.ndarray  # shape (n - 2, n), one screen vector per row
    en: np.ndarray
    g: np.ndarray  # ambient metric at ``point``
    pivot: int = 0

    @property
    def dim(self):
        return self.e1.size

    @property
    def matrix(self):
        """Columns ``e1, e_2 .. e_{n-1}, en``."""
        return np.column_stack([self.e1, *self.e_a, self.en])

    @property
    def tangent_matrix(self):
        """Columns ``e1, e_2 .. e_{n-1}`` spanning the tangent plane."""
        return np.column_stack([self.e1, *self.e_a])

    @property
    def screen_gram(self):
        return self.e_a @ self.g @ self.e_a.T

    def gram(self):
        m = self.matrix
        return m.T @ self.g @ m

    def residuals(self):
        """Max violation of the frame conditions (null, normalizing, orthogonality)."""
        n = self.dim
        target = np.zeros((n, n))
        target[0, -1] = target[-1, 0] = -1.0
        target[1:-1, 1:-1] = self.screen_gram
        return float(np.max(np.abs(self.gram() - target)))

    def is_valid(self, tol=1e-10):
        scale = max(1.0, float(np.max(np.abs(self.gram()))))
        if self.residuals() > tol * scale:
            return False
        return bool(np.all(np.linalg.eigvalsh(self.screen_gram) > 0))

    def screen_projector(self, e_a=None):
        """g-orthogonal projector onto the span of the screen vectors.

        ``P v = e_a G^{ab} g(e_b, v)``; it depends only on the subspace.
        """
        e_a = self.e_a if e_a is None else np.asarray(e_a)
        gram = e_a @ self.g @ e_a.T
        return e_a.T @ np.linalg.solve(gram, e_a @ self.g)


@dataclass(frozen=True)
class GaugeTransform:
    """Admissible change of isotropic frame at a point.

    ``e1 -> c e1``; ``e_a -> A_ab e_b + t_a (c e1)``; ``en`` is recomputed as
    the unique isotropic vector with ``g(e1, en) = -1`` orthogonal to the new
    screen (for ``A = I, t = 0`` this is ``en / c``).
    """

    c: float
    A: np.ndarray
    t: np.ndarray

    @classmethod
    def identity(cls, n):
        return cls(1.0, np.eye(n - 2), np.zeros(n - 2))

    def validate(self):
        A = np.asarray(self.A, dtype=float)
        if not np.isfinite(self.c) or self.c == 0.0:
            raise InvalidGaugeError("scaling c must be a nonzero real")
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidGaugeError("A must be square")
        sv = np.linalg.svd(A, compute_uv=False)
        if sv[-1] <= 1e-12 * max(sv[0], 1.0):
            raise InvalidGaugeError("screen basis change A is singular")
        if np.asarray(self.t).shape != (A.shape[0],):
            raise InvalidGaugeError("shift t must have n - 2 entries")


def g_gram_schmidt(vectors, g):
    """Orthonormalize rows of ``vectors`` with respect to a positive form ``g``."""
    out = []
    for v in np.asarray(vectors, dtype=float):
        w = v.copy()
        for q in out:
            w = w - (q @ g @ w) * q
        norm2 = w @ g @ w
        if norm2 <= 0.0:
            raise DegenerateInputError("screen candidates are not spacelike and independent")
        out.append(w / np.sqrt(norm2))
    return np.array(out)


def solve_transversal(g, e1, e_a):
    """The isotropic ``en`` with ``g(e1, en) = -1`` and ``g(en, e_a) = 0``."""
    rows = np.vstack([e1 @ g, np.atleast_2d(e_a) @ g])
    rhs = np.zeros(rows.shape[0])
    rhs[0] = -1.0
    p, *_ = np.linalg.lstsq(rows, rhs, rcond=None)
    en = p + 0.5 * (p @ g @ p) * e1
    resid = np.max(np.abs(rows @ en - rhs))
    scale = max(1.0, float(np.max(np.abs(rows))) * float(np.max(np.abs(en))))
    if resid > SOLVE_RESIDUAL * scale or abs(en @ g @ en) > SOLVE_RESIDUAL * scale:
        raise DegenerateInputError(f"transversal solve residual {resid:.3e}")
    return en


def induced_metric(g, basis):
    basis = np.asarray(basis, dtype=float)
    return basis.T @ g @ basis


def radical_coefficients(h, pivot=None):
    """Coefficients of the radical of a rank ``m - 1`` form ``h`` (m x m).

    Returns ``(coeffs, pivot)`` with ``coeffs[pivot] = 1``.
    """
    w, v = np.linalg.eigh(h)
    scale = max(float(np.max(np.abs(w))), 1e-300)
    small = np.abs(w) <= RANK_RTOL * scale
    nsmall = int(np.sum(small))
    if nsmall == 0:
        raise NotLightlikeError("induced metric is nondegenerate")
    if nsmall > 1:
        raise DegenerateInputError(f"radical has dimension {nsmall}")
    c0 = v[:, int(np.argmin(np.abs(w)))]
    if pivot is None:
        big = np.abs(c0) > PIVOT_RTOL * np.max(np.abs(c0))
        pivot = int(np.argmax(big))
    rest = [k for k in range(h.shape[0]) if k != pivot]
    c = np.zeros(h.shape[0])
    c[pivot] = 1.0
    if rest:
        sol, *_ = np.linalg.lstsq(h[:, rest], -h[:, pivot], rcond=None)
        c[rest] = sol
    return c, pivot


def build_isotropic_frame(metric, point, tangent_basis, pivot=None):
    """Adapted isotropic frame for the tangent plane spanned by ``tangent_basis``.

    ``tangent_basis`` holds ``n - 1`` ambient vectors as columns (shape
    ``(n, n - 1)``), or as rows when given with shape ``(n - 1, n)``.
    """
    point = np.asarray(point, dtype=float)
    n = point.size
    basis = np.asarray(tangent_basis, dtype=float)
    if basis.shape == (n - 1, n) and basis.shape != (n, n - 1):
        basis = basis.T
    if basis.shape != (n, n - 1):
        raise ValueError(f"tangent basis must have shape ({n}, {n - 1})")
    g = metric.g(point)
    c, pivot = radical_coefficients(induced_metric(g, basis), pivot)
    e1 = basis @ c
    others = [k for k in range(n - 1) if k != pivot]
    e_a = g_gram_schmidt(basis[:, others].T, g)
    en = solve_transversal(g, e1, e_a)
    return IsotropicFrame(point=point, e1=e1, e_a=e_a, en=en, g=g, pivot=pivot)


def apply_gauge(frame, gauge):
    gauge.validate()
    A = np.asarray(gauge.A, dtype=float)
    t = np.asarray(gauge.t, dtype=float)
    e1 = gauge.c * frame.e1
    e_a = A @ frame.e_a + np.outer(t, e1)
    en = solve_transversal(frame.g, e1, e_a)
    return replace(frame, e1=e1, e_a=e_a, en=en)


@dataclass(frozen=True)
class GaugeField:
    """Smooth field of gauge transforms over patch parameters.

    ``c(u) = c0 exp(beta . (u - u0))``, ``A(u) = A0 + sum_k (u - u0)_k A_k``,
    ``t(u) = t0 + T (u - u0)``.
    """

    u0: np.ndarray
    c0: float
    beta: np.ndarray
    A0: np.ndarray
    A_lin: np.ndarray  # shape (n - 1, n - 2, n - 2)
    t0: np.ndarray
    T: np.ndarray  # shape (n - 2, n - 1)

    def __call__(self, u):
        du = np.asarray(u, dtype=float) - self.u0
        return GaugeTransform(
            c=float(self.c0 * np.exp(self.beta @ du)),
            A=self.A0 + np.einsum("k,kab->ab", du, self.A_lin),
            t=self.t0 + self.T @ du,
        )

    @classmethod
    def constant(cls, gauge, n):
        m = n - 2
        return cls(
            u0=np.zeros(n - 1),
            c0=float(gauge.c),
            beta=np.zeros(n - 1),
            A0=np.asarray(gauge.A, dtype=float),
            A_lin=np.zeros((n - 1, m, m)),
            t0=np.asarray(gauge.t, dtype=float),
            T=np.zeros((m, n - 1)),
        )

    @classmethod
    def random(cls, rng, n, u0, c_range=(0.5, 3.0), slope=0.3, shift=1.0):
        """A random orientation-preserving (``c > 0``) smooth gauge field."""
        m = n - 2
        q, _ = np.linalg.qr(rng.normal(size=(m, m)))
        A0 = q @ np.diag(rng.uniform(0.5, 2.0, size=m))
        return cls(
            u0=np.asarray(u0, dtype=float),
            c0=float(rng.uniform(*c_range)),
            beta=rng.uniform(-slope, slope, size=n - 1),
            A0=A0,
            A_lin=rng.uniform(-0.1, 0.1, size=(n - 1, m, m)),
            t0=rng.uniform(-shift, shift, size=m),
            T=rng.uniform(-0.5 * shift, 0.5 * shift, size=(m, n - 1)),
        )


@dataclass(frozen=True, eq=False)
class FrameField:
    """Frames along a patch: the documented gauge followed by ``gauge_field``."""

    metric: object
    patch: object
    gauge_field: Optional[GaugeField] = None
    pivot: Optional[int] = None
    _cache: dict = field(default_factory=dict, repr=False)

    def base(self, u):
        key = ("base", tuple(np.asarray(u, dtype=float)))
        if key not in self._cache:
            u = np.asarray(u, dtype=float)
            self._cache[key] = build_isotropic_frame(
                self.metric, self.patch.point(u), self.patch.jacobian(u), pivot=self.pivot
            )
        return self._cache[key]

    def __call__(self, u):
        frame = self.base(u)
        if self.gauge_field is None:
            return frame
        key = ("gauged", tuple(np.asarray(u, dtype=float)))
        if key not in self._cache:
            self._cache[key] = apply_gauge(frame, self.gauge_field(u))
        return self._cache[key]

    def with_gauge(self, gauge_field):
        """Same patch with a different gauge field; base frames are shared."""
        return FrameField(self.metric, self.patch, gauge_field, self.pivot, self._cache_view())

    def _cache_view(self):
        return _SharedBase(self._cache)


class _SharedBase(dict):
    """Cache that shares base frames with a parent and keeps gauged ones local."""

    def __init__(self, parent):
        super().__init__()
        self._parent = parent

    def __contains__(self, key):
        if key[0] == "base":
            return key in self._parent
        return super().__contains__(key)

    def __getitem__(self, key):
        if key[0] == "base":
            return self._parent[key]
        return super().__getitem__(key)

    def __setitem__(self, key, value):
        if key[0] == "base":
            self._parent[key] = value
        else:
            super().__setitem__(key, value)


def param_direction(patch, u, direction):
    """Patch-parameter vector ``du`` with ``J du = direction`` (least squares)."""
    jac = patch.jacobian(u)
    du, *_ = np.linalg.lstsq(jac, np.asarray(direction, dtype=float), rcond=None)
    resid = np.linalg.norm(jac @ du - direction)
    if resid > 1e-8 * max(1.0, np.linalg.norm(direction)):
        raise LightlikeError("direction is not tangent to the hypersurface")
    return du


def connection_matrix_along(frame_field, u, du, step):
    """``W[i, j] = omega_i^j(X)`` for ``X = J du``: component ``j`` of ``nabla_X e_i``."""
    u = np.asarray(u, dtype=float)
    frame = frame_field(u)
    patch = frame_field.patch
    metric = frame_field.metric

    def mat(v):
        try:
            return frame_field(v).matrix
        except LightlikeError as exc:
            raise StencilError(f"frame field invalid near {list(v)}: {exc}") from exc

    norm = np.linalg.norm(du)
    if norm == 0.0:
        return np.zeros((frame.dim, frame.dim))
    d_e = directional4(mat, u, du / norm, step) * norm
    X = patch.jacobian(u) @ du
    gam = christoffel(metric, frame.point)
    cov = d_e + np.einsum("ikl,k,lj->ij", gam, X, frame.matrix)
    # columns of ``cov`` are nabla_X e_j in coordinates; expand in the frame
    coeff = np.linalg.solve(frame.matrix, cov)
    return coeff.T


def connection_form_values(metric, frame_field, at, direction, step=1e-3):
    """Connection-form values ``omega_i^j(direction)`` of a frame field.

    ``direction`` is an ambient vector tangent to the hypersurface at the
    frame point. The result ``W`` satisfies ``nabla_direction e_i = W[i, j] e_j``.
    """
    if frame_field.metric is not metric:
        frame_field = FrameField(metric, frame_field.patch, frame_field.gauge_field, frame_field.pivot)
    du = param_direction(frame_field.patch, at, direction)
    return connection_matrix_along(frame_field, at, du, step)


def connection_forms_on_params(frame_field, u, step=1e-3):
    """Connection matrices along each patch coordinate direction; shape ``(n-1, n, n)``."""
    u = np.asarray(u, dtype=float)
    out = []
    for k in range(u.size):
        ek = np.zeros(u.size)
        ek[k] = 1.0
        out.append(connection_matrix_along(frame_field, u, ek, step * max(1.0, abs(u[k]))))
    return np.stack(out)


def frame_relations_residual(W, screen_gram):
    """Violation of the isotropic-frame relations among connection forms.

    Checks ``omega_1^n = omega_n^1 = 0``, ``omega_1^1 + omega_n^n = 0``,
    ``omega_a^n = g_ab omega_1^b`` and ``omega_a^1 = g_ab omega_n^b``.
    """
    G = np.asarray(screen_gram)
    res = [
        abs(W[0, -1]),
        abs(W[-1, 0]),
        abs(W[0, 0] + W[-1, -1]),
        np.max(np.abs(W[1:-1, -1] - G @ W[0, 1:-1])),
        np.max(np.abs(W[1:-1, 0] - G @ W[-1, 1:-1])),
    ]
    return float(max(res))
