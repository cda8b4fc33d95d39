"""Invariant screen distributions and the connection they induce.

All differential quantities are measured on the ``n - 1`` patch coordinate
directions ``X_k`` and decomposed over the coframe ``(omega^1, omega^a)``
dual to ``(e1, e_a)``.

Relative invariant ``I`` of weight 1::

    d ln|I| - omega_1^1 = -K omega^1 - K_a omega^a
    Lambda_a^b = lambda_a^b - K delta_a^b,     Lambda_a^b L_b = K_a
    screen: e_a + L_a e1

Absolute invariant ``J``::

    dJ = K omega^1 + Kt_a omega^a,  K_a = -Kt_a / K
    screen: e_a + K_a e1  (tangent to the level sets of J)

Induced connection for a screen ``S``: with the frame reduced so that
``e_a`` spans ``S``, ``omega_a^1 = nu_a omega^1 + nu_ab omega^b``; ``S`` is
integrable exactly when ``nu_ab`` is symmetric.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._fd import directional4, partials4
from .errors import (
    InconsistentScreenError,
    LightlikeError,
    ScreenUnavailable,
    StencilError,
)
from .nullframe import (
    connection_forms_on_params,
    frame_relations_residual,
    param_direction,
    solve_transversal,
)

SINGULAR_RTOL = 1e-8
TRANSVERSAL_ATOL = 1e-8
TRANSVERSAL_RTOL = 1e-7
INTEGRABLE_TOL = 1e-5
RELATIONS_TOL = 1e-5


@dataclass(frozen=True)
class InvariantFieldDerivative:
    """Coefficients of ``d ln|I| - omega_1^1 = -K omega^1 - K_a omega^a``."""

    K: float
    K_a: np.ndarray
    dlog: np.ndarray  # d ln|I| on the patch directions
    omega11: np.ndarray  # omega_1^1 on the patch directions
    coframe: np.ndarray  # row k: (omega^1, omega^a)(X_k)
    residual: float

    def reconstruct(self):
        """``d ln|I|`` on the patch directions rebuilt from ``K``, ``K_a``, ``omega_1^1``."""
        return self.omega11 - self.coframe @ np.concatenate([[self.K], self.K_a])


@dataclass
class ScreenSample:
    point: np.ndarray
    method: str  # absolute_invariant | relative_invariant | supplied
    L_a: np.ndarray
    screen_basis: np.ndarray  # rows e_a + L_a e1
    source: str = ""
    K: Optional[float] = None
    K_a: Optional[np.ndarray] = None
    nu_a: Optional[np.ndarray] = None
    nu_ab: Optional[np.ndarray] = None
    integrable: Optional[bool] = None
    diagnostics: dict = field(default_factory=dict)

    def projector(self, g):
        e = self.screen_basis
        return e.T @ np.linalg.solve(e @ g @ e.T, e @ g)


def coframe_on_params(frame, jacobian):
    """Row ``k`` holds ``(omega^1, omega^a)(X_k)``: coefficients of ``X_k`` in ``(e1, e_a)``."""
    T = frame.tangent_matrix
    coeffs, *_ = np.linalg.lstsq(T, jacobian, rcond=None)
    resid = np.linalg.norm(T @ coeffs - jacobian) / max(1.0, np.linalg.norm(jacobian))
    if resid > 1e-8:
        raise InconsistentScreenError(f"patch directions leave the tangent plane ({resid:.2e})")
    return coeffs.T


def _safe_field(fn):
    def wrapped(v):
        try:
            return fn(v)
        except LightlikeError as exc:
            raise StencilError(f"field not evaluable near {list(v)}: {exc}") from exc

    return wrapped


def invariant_log_derivative(invariant_field, frame_field, metric=None, at=None, step=2e-3,
                             frame_step=1e-3, weight=1):
    """Decompose ``d ln|I| - weight * omega_1^1`` over the coframe at ``at``.

    ``invariant_field(u)`` must not vanish on the stencil.
    """
    at = np.asarray(at, dtype=float)
    field_fn = _safe_field(invariant_field)

    def log_abs(v):
        val = float(field_fn(v))
        if val == 0.0 or not np.isfinite(val):
            raise StencilError(f"invariant vanishes near {list(v)}")
        return np.log(abs(val))

    dlog = partials4(log_abs, at, step)
    W = connection_forms_on_params(frame_field, at, frame_step)
    w = weight * W[:, 0, 0]
    frame = frame_field(at)
    Xi = coframe_on_params(frame, frame_field.patch.jacobian(at))
    coef = np.linalg.solve(Xi, -(dlog - w))
    resid = float(np.max(np.abs(Xi @ coef + (dlog - w))))
    return InvariantFieldDerivative(
        K=float(coef[0]), K_a=coef[1:], dlog=dlog, omega11=w, coframe=Xi, residual=resid
    )


def lambda_mixed(shape):
    """``lambda_a^b`` as a matrix (row ``a``, column ``b``)."""
    return shape.lambda_ab @ np.linalg.inv(shape.g_ab)


def screen_from_relative_invariant(shape, deriv, source="", rtol=SINGULAR_RTOL):
    """Invariant screen from a weight-1 relative invariant."""
    frame = shape.frame
    m = shape.g_ab.shape[0]
    Lam = lambda_mixed(shape) - deriv.K * np.eye(m)
    sv = np.linalg.svd(Lam, compute_uv=False)
    # the scale includes lambda and K so that Lambda ~ 0 (umbilic, K = lambda) is caught
    scale = max(sv[0], float(np.linalg.norm(lambda_mixed(shape), 2)), abs(deriv.K), 1e-300)
    if sv[-1] < rtol * scale:
        raise ScreenUnavailable(
            "K_is_eigenvalue",
            f"K = {deriv.K:.6g} is a root of the characteristic equation "
            f"(sigma_min/scale = {sv[-1] / scale:.2e})",
        )
    L = np.linalg.solve(Lam, deriv.K_a)
    return ScreenSample(
        point=frame.point,
        method="relative_invariant",
        L_a=L,
        screen_basis=frame.e_a + np.outer(L, frame.e1),
        source=source,
        K=deriv.K,
        K_a=np.array(deriv.K_a),
        diagnostics={"lambda_condition": float(sv[0] / sv[-1])},
    )


def absolute_differential(J_field, frame_field, at, step=2e-3):
    """``(K, Kt_a)`` with ``dJ = K omega^1 + Kt_a omega^a`` and the raw partials of ``J``."""
    at = np.asarray(at, dtype=float)
    dJ = partials4(_safe_field(lambda v: float(J_field(v))), at, step)
    Xi = coframe_on_params(frame_field(at), frame_field.patch.jacobian(at))
    coef = np.linalg.solve(Xi, dJ)
    return float(coef[0]), coef[1:], dJ


def screen_from_absolute_invariant(J_field, frame_field, metric=None, at=None, step=2e-3,
                                   source="", atol=TRANSVERSAL_ATOL, rtol=TRANSVERSAL_RTOL):
    """Screen tangent to the level sets of the absolute invariant ``J``."""
    at = np.asarray(at, dtype=float)
    frame = frame_field(at)
    K, Kt, dJ = absolute_differential(J_field, frame_field, at, step)
    size = float(np.linalg.norm(np.concatenate([[K], Kt])))
    if abs(K) <= atol or abs(K) <= rtol * size:
        raise ScreenUnavailable(
            "non_transversal",
            f"level sets of {source or 'J'} contain the generator (dJ(e1) = {K:.3e})",
        )
    K_a = -Kt / K
    sample = ScreenSample(
        point=frame.point,
        method="absolute_invariant",
        L_a=K_a,
        screen_basis=frame.e_a + np.outer(K_a, frame.e1),
        source=source,
        K=K,
        K_a=K_a,
        diagnostics={"dJ_e1": K},
    )
    sample.diagnostics["level_set_residual"] = level_set_residual(J_field, frame_field, at, sample, step)
    return sample


def level_set_residual(J_field, frame_field, at, screen, step=2e-3):
    """``max_a |dJ(e~_a)| / |(K, Kt_a)|``, with ``dJ`` differenced along each screen vector."""
    at = np.asarray(at, dtype=float)
    patch = frame_field.patch
    fn = _safe_field(lambda v: float(J_field(v)))
    K, Kt, _ = absolute_differential(J_field, frame_field, at, step)
    scale = float(np.linalg.norm(np.concatenate([[K], Kt])))
    worst = 0.0
    for vec in screen.screen_basis:
        du = param_direction(patch, at, vec)
        nrm = float(np.linalg.norm(du))
        val = directional4(fn, at, du / nrm, step) * nrm
        worst = max(worst, abs(val) / max(scale, 1e-300))
    return float(worst)


class ReducedFrameField:
    """Frame field whose screen is ``screen_field(u)`` (rows spanning the screen)."""

    def __init__(self, frame_field, screen_field):
        self.frame_field = frame_field
        self.screen_field = screen_field
        self.patch = frame_field.patch
        self.metric = frame_field.metric
        self._cache = {}

    def __call__(self, u):
        key = tuple(np.asarray(u, dtype=float))
        if key not in self._cache:
            base = self.frame_field(u)
            e_a = np.asarray(self.screen_field(u), dtype=float)
            en = solve_transversal(base.g, base.e1, e_a)
            self._cache[key] = type(base)(
                point=base.point, e1=base.e1, e_a=e_a, en=en, g=base.g, pivot=base.pivot
            )
        return self._cache[key]


def induced_connection(screen_field, frame_field, metric=None, at=None, step=1.5e-3,
                       tol=INTEGRABLE_TOL, relations_tol=RELATIONS_TOL):
    """Coefficients ``(nu_a, nu_ab, integrable, diagnostics)`` of the induced connection.

    ``screen_field(u)`` returns screen vectors (rows) at parameters ``u``. It
    is re-evaluated on the stencil, so it must be a smooth field.
    """
    at = np.asarray(at, dtype=float)
    reduced = ReducedFrameField(frame_field, _safe_field(screen_field))
    W = connection_forms_on_params(reduced, at, step)
    frame = reduced(at)
    Xi = coframe_on_params(frame, frame_field.patch.jacobian(at))
    relations = max(frame_relations_residual(Wk, frame.screen_gram) for Wk in W)
    size = max(1.0, float(np.max(np.abs(W))))
    if relations > relations_tol * size:
        raise InconsistentScreenError(f"connection forms violate the frame relations ({relations:.2e})")
    # column a of rhs: omega_a^1 on the patch directions
    rhs = W[:, 1:-1, 0]
    coef = np.linalg.solve(Xi, rhs)
    nu_a = coef[0]
    nu_ab = coef[1:].T  # nu_ab[a, b] = omega_a^1(e_b)
    asym = float(np.linalg.norm(nu_ab - nu_ab.T))
    integrable = bool(asym <= tol * max(1.0, float(np.linalg.norm(nu_ab))))
    diag = {"asymmetry": asym, "relations_residual": float(relations)}
    return nu_a, nu_ab, integrable, diag
