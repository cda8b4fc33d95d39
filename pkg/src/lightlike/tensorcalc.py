"""Coordinate tensor calculus over a Lorentzian metric field.

Curvature convention (the single place it is fixed)::

    Gamma^i_{jk} = 1/2 g^{im} (d_j g_{mk} + d_k g_{mj} - d_m g_{jk})
    R^i_{jkl}    = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
                   + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}
    R_{ijkl}     = g_{im} R^m_{jkl}

so that ``R^i_{jkl} X^j = [nabla_k, nabla_l] X^i`` and a space of constant
curvature ``K`` has ``R_{ijkl} = K (g_ik g_jl - g_il g_jk)`` with ``K > 0`` for
de Sitter space. ``tests/test_tensorcalc.py`` calibrates this against the
closed form.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from ._fd import H1, H2, gradient_central, hessian_central
from .errors import DegenerateMetricError, DomainError, SignatureError

SINGULAR_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class MetricField:
    """A smooth metric ``g_ij(x)`` on a coordinate box.

    ``first_derivatives(x)[i, j, k]`` is ``d_k g_ij`` and
    ``second_derivatives(x)[i, j, k, l]`` is ``d_k d_l g_ij``. When they are
    absent, central differences with steps ``fd_steps`` are used.
    """

    dim: int
    components: Callable[[np.ndarray], np.ndarray]
    chart_bounds: np.ndarray
    first_derivatives: Optional[Callable] = None
    second_derivatives: Optional[Callable] = None
    name: str = "custom"
    params: dict = field(default_factory=dict)
    fd_steps: tuple = (H1, H2)

    def __post_init__(self):
        if self.dim < 3:
            raise ValueError("metric dimension must be at least 3")
        bounds = np.asarray(self.chart_bounds, dtype=float)
        if bounds.shape != (self.dim, 2):
            raise ValueError(f"chart_bounds must have shape ({self.dim}, 2)")
        object.__setattr__(self, "chart_bounds", bounds)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x > self.chart_bounds[:, 0]) and np.all(x < self.chart_bounds[:, 1]))

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected a point with {self.dim} coordinates")
        if not self.contains(x):
            raise DomainError(f"point {x.tolist()} outside chart of {self.name}")
        return x

    def g(self, x):
        x = self._check(x)
        m = np.asarray(self.components(x), dtype=float)
        return 0.5 * (m + m.T)

    def dg(self, x):
        x = self._check(x)
        if self.first_derivatives is not None:
            return np.asarray(self.first_derivatives(x), dtype=float)
        return gradient_central(self.g, x, self.fd_steps[0])

    def d2g(self, x):
        x = self._check(x)
        if self.second_derivatives is not None:
            return np.asarray(self.second_derivatives(x), dtype=float)
        return hessian_central(self.g, x, self.fd_steps[1])

    def g_inv(self, x):
        gm = self.g(x)
        check_nondegenerate(gm)
        return np.linalg.inv(gm)

    def signature(self, x):
        """Return ``(positive, negative)`` eigenvalue counts of ``g(x)``."""
        return _signature(self, tuple(np.asarray(x, dtype=float)))

    def check_lorentzian(self, x):
        pos, neg = self.signature(x)
        if (pos, neg) != (self.dim - 1, 1):
            raise SignatureError(f"signature ({pos}, {neg}) at {list(x)}")

    def finite_difference_only(self):
        """Copy of this metric with the analytic derivative maps dropped."""
        return MetricField(
            dim=self.dim,
            components=self.components,
            chart_bounds=self.chart_bounds,
            name=self.name,
            params=dict(self.params),
            fd_steps=self.fd_steps,
        )


@lru_cache(maxsize=4096)
def _signature(metric, key):
    gm = metric.g(np.array(key))
    check_nondegenerate(gm)
    ev = np.linalg.eigvalsh(gm)
    return int(np.sum(ev > 0)), int(np.sum(ev < 0))


def check_nondegenerate(gm):
    sv = np.linalg.svd(gm, compute_uv=False)
    if sv[-1] < SINGULAR_RTOL * sv[0]:
        raise DegenerateMetricError(f"metric singular (sigma_min/sigma_max = {sv[-1] / sv[0]:.3e})")


@dataclass(frozen=True)
class CurvatureTensor:
    point: np.ndarray
    riemann_up: np.ndarray
    riemann_down: np.ndarray

    def symmetry_residuals(self):
        """Max absolute violation of each algebraic symmetry of ``R_ijkl``."""
        r = self.riemann_down
        return {
            "antisym_first": float(np.max(np.abs(r + r.transpose(1, 0, 2, 3)))),
            "antisym_second": float(np.max(np.abs(r + r.transpose(0, 1, 3, 2)))),
            "pair": float(np.max(np.abs(r - r.transpose(2, 3, 0, 1)))),
            "bianchi": float(
                np.max(np.abs(r + r.transpose(0, 2, 3, 1) + r.transpose(0, 3, 1, 2)))
            ),
        }

    def frame_component(self, a, b, c, d):
        """``R(a, b, c, d) = R_ijkl a^i b^j c^k d^l`` for coordinate vectors."""
        return float(np.einsum("ijkl,i,j,k,l->", self.riemann_down, a, b, c, d))


def scalar_product(metric, point, xi, eta):
    return float(np.asarray(xi) @ metric.g(point) @ np.asarray(eta))


def _christoffel_from(gm, ginv, dg):
    # T[m, j, k] = d_j g_mk + d_k g_mj - d_m g_jk
    t = dg.transpose(0, 2, 1) + dg - dg.transpose(2, 0, 1)
    gam = 0.5 * np.einsum("im,mjk->ijk", ginv, t)
    return 0.5 * (gam + gam.transpose(0, 2, 1))


def christoffel(metric, point):
    """Christoffel symbols ``Gamma[i, j, k] = Gamma^i_{jk}`` at ``point``."""
    gm = metric.g(point)
    check_nondegenerate(gm)
    return _christoffel_from(gm, np.linalg.inv(gm), metric.dg(point))


def riemann(metric, point):
    point = np.asarray(point, dtype=float)
    gm = metric.g(point)
    check_nondegenerate(gm)
    ginv = np.linalg.inv(gm)
    dg = metric.dg(point)
    d2g = metric.d2g(point)
    gam = _christoffel_from(gm, ginv, dg)

    # d_l g^{im} = -g^{ia} d_l g_ab g^{bm}
    dginv = -np.einsum("ia,abl,bm->iml", ginv, dg, ginv)
    t = dg.transpose(0, 2, 1) + dg - dg.transpose(2, 0, 1)
    # dt[m, j, k, l] = d_l T[m, j, k]
    dt = d2g.transpose(0, 2, 1, 3) + d2g - d2g.transpose(2, 0, 1, 3)
    dgam = 0.5 * (np.einsum("iml,mjk->ijkl", dginv, t) + np.einsum("im,mjkl->ijkl", ginv, dt))

    r_up = (
        dgam.transpose(0, 2, 3, 1)  # d_k Gamma^i_{lj}  -> index order (i, j, k, l)
        - dgam.transpose(0, 2, 1, 3)  # d_l Gamma^i_{kj}
        + np.einsum("ikm,mlj->ijkl", gam, gam)
        - np.einsum("ilm,mkj->ijkl", gam, gam)
    )
    r_down = np.einsum("im,mjkl->ijkl", gm, r_up)
    return CurvatureTensor(point=point, riemann_up=r_up, riemann_down=r_down)


def constant_curvature_riemann(K, metric, point):
    """Closed form ``R_ijkl = K (g_ik g_jl - g_il g_jk)``."""
    point = np.asarray(point, dtype=float)
    gm = metric.g(point)
    r_down = K * (np.einsum("ik,jl->ijkl", gm, gm) - np.einsum("il,jk->ijkl", gm, gm))
    r_up = np.einsum("im,mjkl->ijkl", np.linalg.inv(gm), r_down)
    return CurvatureTensor(point=point, riemann_up=r_up, riemann_down=r_down)


def metric_compatibility_residual(metric, point):
    """Max |d_k g_ij - g_mj Gamma^m_ik - g_im Gamma^m_jk|."""
    gm = metric.g(point)
    gam = christoffel(metric, point)
    dg = metric.dg(point)
    recon = np.einsum("mj,mik->ijk", gm, gam) + np.einsum("im,mjk->ijk", gm, gam)
    return float(np.max(np.abs(dg - recon)))
