"""Per-point analysis pipeline for one hypersurface patch in one metric.

:class:`LightlikeSurface` wires frames, shape data, invariants, screens and
foci together and caches intermediate results per parameter point, so that
nested finite-difference stencils (shape -> invariants -> screens -> induced
connection) reuse work. ``with_gauge`` returns a view of the same surface
under a different smooth gauge field; gauge-independent data (base frames,
curvature) is shared.
"""

from dataclasses import replace

import numpy as np

from ._fd import StencilSteps, directional4
from .errors import DenominatorVanishes, NotLightlikeError, ScreenUnavailable, StencilError
from .geodesics import focal_points, umbilical_focus
from .hypersurface import (
    classify,
    covariant_radical_derivatives,
    second_fundamental_form,
    verify_lightlike,
)
from .invariants import (
    absolute_invariant,
    invariant_set,
    isotropic_curvature_matrix,
    isotropic_sectional_curvature,
    riccati_residual,
    weight_of,
)
from .normalization import (
    ScreenSample,
    absolute_differential,
    induced_connection,
    invariant_log_derivative,
    screen_from_absolute_invariant,
    screen_from_relative_invariant,
)
from .nullframe import FrameField
from .tensorcalc import christoffel, riemann

PROPORTIONAL_RTOL = 1e-6
ZERO_EIGEN_RTOL = 1e-9


def _key(u):
    return tuple(float(x) for x in np.asarray(u, dtype=float))


class LightlikeSurface:
    def __init__(self, metric, patch, gauge_field=None, steps=None, pivot=None,
                 tol_abs=1e-7, tol_rel=1e-5, _frame_field=None, _shared=None):
        self.metric = metric
        self.patch = patch
        self.steps = steps or StencilSteps()
        self.tol_abs = tol_abs
        self.tol_rel = tol_rel
        self.gauge_field = gauge_field
        self.frame_field = _frame_field or FrameField(metric, patch, gauge_field, pivot)
        self._shared = _shared if _shared is not None else {"curv": {}, "radical": {}}
        self._shapes = {}
        self._screens = {}

    @property
    def dim(self):
        return self.patch.ambient_dim

    def with_gauge(self, gauge_field):
        return LightlikeSurface(
            self.metric, self.patch, gauge_field, self.steps, self.frame_field.pivot,
            self.tol_abs, self.tol_rel,
            _frame_field=self.frame_field.with_gauge(gauge_field), _shared=self._shared,
        )

    # ------------------------------------------------------------------ basics
    def frame(self, u):
        return self.frame_field(np.asarray(u, dtype=float))

    def shape(self, u):
        key = _key(u)
        if key not in self._shapes:
            u = np.asarray(u, dtype=float)
            frame = self.frame(u)
            radicals = self._shared["radical"]
            if key not in radicals:
                if verify_lightlike(self.patch, self.metric, u) != "lightlike":
                    raise NotLightlikeError(f"patch is not lightlike at {u.tolist()}")
                radicals[key] = covariant_radical_derivatives(
                    self.patch, self.metric, u, self.steps.frame, pivot=frame.pivot
                )
            self._shapes[key] = second_fundamental_form(
                self.patch, self.metric, frame, u, step=self.steps.frame, radical=radicals[key]
            )
        return self._shapes[key]

    def classification(self, u):
        return classify(self.shape(u), self.tol_abs, self.tol_rel, self.patch.scale)

    def invariants(self, u):
        return invariant_set(self.shape(u))

    def invariant(self, u, name):
        return self.invariants(u).value(name)

    def absolute(self, u, spec):
        return absolute_invariant(self.shape(u), spec)

    def curvature(self, u):
        x = self.patch.point(u)
        key = _key(x)
        cache = self._shared["curv"]
        if key not in cache:
            cache[key] = riemann(self.metric, x)
        return cache[key]

    def sectional(self, u, p_screen, p1=0.0):
        return isotropic_sectional_curvature(self.metric, self.frame(u), p_screen, self.curvature(u), p1)

    def curvature_matrix(self, u):
        """``R_1ab1`` in the current frame."""
        return isotropic_curvature_matrix(self.frame(u), self.curvature(u))

    def riccati_residual(self, u, include_curvature=True):
        return riccati_residual(self.shape, self.frame_field, self.metric, u, self.steps, include_curvature)

    # ----------------------------------------------------------------- screens
    def _require_not_geodesic(self, u):
        cls = self.classification(u)
        if cls.kind == "totally_geodesic":
            raise ScreenUnavailable("totally_geodesic", f"lambda_ab = 0 (norm {cls.norm:.2e})")
        return cls

    def log_derivative(self, u, name):
        if weight_of(name, self.dim - 2) != 1:
            raise ValueError(f"{name!r} has weight {weight_of(name, self.dim - 2)}; relative screens need weight 1")
        return invariant_log_derivative(
            lambda v: self.invariant(v, name), self.frame_field, self.metric, u,
            step=self.steps.invariant, frame_step=self.steps.frame,
        )

    def relative_screen(self, u, name, force_K=None):
        """Screen from the weight-1 relative invariant ``name`` (raises ScreenUnavailable)."""
        key = ("rel", name, _key(u), force_K)
        if key in self._screens:
            return self._screens[key]
        self._require_not_geodesic(u)
        shape = self.shape(u)
        value = self.invariant(u, name)
        norm = float(np.max(np.abs(shape.eigenvalues)))
        if abs(value) <= ZERO_EIGEN_RTOL * max(norm, 1e-300):
            raise ScreenUnavailable("totally_geodesic", f"relative invariant {name} vanishes")
        try:
            deriv = self.log_derivative(u, name)
        except StencilError as exc:
            raise ScreenUnavailable("totally_geodesic", f"{name} vanishes near the point: {exc}") from exc
        if force_K is not None:
            deriv = replace(deriv, K=float(force_K))
        screen = screen_from_relative_invariant(shape, deriv, source=name)
        screen.diagnostics["log_derivative_residual"] = deriv.residual
        self._screens[key] = screen
        return screen

    def absolute_screen(self, u, spec):
        key = ("abs", spec, _key(u))
        if key in self._screens:
            return self._screens[key]
        self._require_not_geodesic(u)
        try:
            screen = screen_from_absolute_invariant(
                lambda v: self.absolute(v, spec), self.frame_field, self.metric, u,
                step=self.steps.invariant, source=spec,
            )
        except (DenominatorVanishes, StencilError) as exc:
            raise ScreenUnavailable("non_transversal", f"{spec} undefined near the point: {exc}") from exc
        self._screens[key] = screen
        return screen

    def screen_field(self, method, source):
        """Callable ``u -> screen vectors`` for a screen construction."""
        if method == "relative_invariant":
            return lambda v: self.relative_screen(v, source).screen_basis
        if method == "absolute_invariant":
            return lambda v: self.absolute_screen(v, source).screen_basis
        if method == "supplied":
            return lambda v: self.frame(v).e_a
        raise ValueError(f"unknown screen method {method!r}")

    def connection(self, u, screen):
        """Attach ``nu_a``, ``nu_ab`` and the integrability flag to ``screen``."""
        field = self.screen_field(screen.method, screen.source)
        nu_a, nu_ab, integrable, diag = induced_connection(
            field, self.frame_field, self.metric, u, step=self.steps.screen
        )
        screen.nu_a, screen.nu_ab, screen.integrable = nu_a, nu_ab, integrable
        screen.diagnostics.update(diag)
        if screen.method == "relative_invariant":
            # exterior derivative of the normalization fixes only the antisymmetric
            # part of (lambda - K g) g^-1 nu; report it next to the curvature term
            shape, frame = self.shape(u), self.frame(u)
            Lam = shape.lambda_ab - screen.K * shape.g_ab
            M = Lam @ np.linalg.solve(shape.g_ab, nu_ab)
            R = np.einsum("ijkl,i,j,ak,bl->ab", self.curvature(u).riemann_down,
                          frame.en, frame.e1, frame.e_a, frame.e_a)
            screen.diagnostics["lambda_nu_antisymmetry"] = float(np.linalg.norm(M - M.T))
            screen.diagnostics["curvature_antisymmetry"] = float(np.linalg.norm(R - R.T))
        return screen

    def supplied_screen(self, u):
        frame = self.frame(u)
        m = self.dim - 2
        return ScreenSample(point=frame.point, method="supplied", L_a=np.zeros(m),
                            screen_basis=frame.e_a.copy(), source="frame")

    def triple(self, u):
        """The three screens of a four-dimensional generic hypersurface.

        Returns ``(screens, diagnostics)``; ``screens`` maps ``lambda2``,
        ``lambda3`` and ``lambda2/lambda3`` to a :class:`ScreenSample` or a
        :class:`ScreenUnavailable` instance.
        """
        if self.dim != 4:
            raise ValueError("the triple construction needs a four-dimensional ambient space")
        names = ("lambda2", "lambda3", "lambda2/lambda3")
        shape = self.shape(u)
        cls = self.classification(u)
        diag = {}
        if cls.kind == "totally_geodesic":
            err = ScreenUnavailable("totally_geodesic", "lambda_ab = 0")
            return {k: err for k in names}, diag
        if len(shape.clusters) < 2:
            err = ScreenUnavailable("equal_eigenvalues", f"lambda2 = lambda3 = {shape.eigenvalues[0]:.6g}")
            return {k: err for k in names}, diag
        lam = shape.eigenvalues
        V = shape.eigenvectors
        R = V.T @ self.curvature_matrix(u) @ V
        scale = float(np.max(np.abs(lam)))
        out = {}
        zero = np.abs(lam) <= ZERO_EIGEN_RTOL * scale
        with np.errstate(divide="ignore", invalid="ignore"):
            K87 = np.where(zero, np.nan, lam - np.diag(R) / np.where(zero, 1.0, lam))
        diag["K_closed_form"] = K87
        proportional = bool(
            not np.any(zero)
            and abs(K87[0] * lam[1] - K87[1] * lam[0]) <= PROPORTIONAL_RTOL * scale ** 2
        )
        diag["proportional"] = proportional
        for a, name in enumerate(names[:2]):
            if zero[a]:
                out[name] = ScreenUnavailable("totally_geodesic", f"{name} = 0")
            elif proportional:
                out[name] = ScreenUnavailable(
                    "K_proportional_to_eigenvalues",
                    f"K2 lambda3 - K3 lambda2 = {K87[0] * lam[1] - K87[1] * lam[0]:.3e}",
                )
            else:
                try:
                    out[name] = self.relative_screen(u, name)
                except ScreenUnavailable as exc:
                    out[name] = exc
        try:
            out[names[2]] = self.absolute_screen(u, names[2])
        except ScreenUnavailable as exc:
            out[names[2]] = exc
        if not np.any(zero):
            diag.update(self._triple_consistency(u, K87))
        return out, diag

    def _triple_consistency(self, u, K87):
        """Numerical log-derivatives of the eigenvalues against the closed forms.

        Reports ``K_numeric`` (the generator coefficient of each eigenvalue's
        log-derivative, eigenvector frame) and the residual of
        ``d ln|lambda2/lambda3| = (K3 - K2) omega^1 + (K3c - K2c) omega^c``.
        """
        diag = {}
        try:
            d2 = self.log_derivative(u, "lambda2")
            d3 = self.log_derivative(u, "lambda3")
            K, Kt, _ = absolute_differential(lambda v: self.absolute(v, "lambda2/lambda3"),
                                             self.frame_field, u, self.steps.invariant)
        except (StencilError, DenominatorVanishes):
            return diag
        J = self.absolute(u, "lambda2/lambda3")
        lhs = np.concatenate([[K], Kt]) / J
        rhs = np.concatenate([[d3.K - d2.K], d3.K_a - d2.K_a])
        diag["K_numeric"] = np.array([d2.K, d3.K])
        diag["closed_form_residual"] = float(np.max(np.abs(diag["K_numeric"] - K87)))
        diag["log_ratio_residual"] = float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(rhs)), 1e-300))
        return diag

    # -------------------------------------------------------------------- foci
    def foci(self, u, exponential=False):
        return focal_points(self.shape(u), metric=self.metric, exponential=exponential)

    def umbilical_focus(self, u):
        return umbilical_focus(self.shape(u), tol_abs=self.tol_abs, tol_rel=self.tol_rel,
                               scale=self.patch.scale)

    def focus_displacement(self, u):
        """Covariant displacement ``D_X F = X - nabla_X(e1 / lambda)`` of the umbilical focus.

        Returns a ``(n - 1, n)`` array whose rows are the displacements along
        ``e1`` and along each screen vector ``e_a``.
        """
        u = np.asarray(u, dtype=float)
        frame = self.frame(u)
        lam0 = self.classification(u).umbilic_lambda
        if lam0 is None:
            self.umbilical_focus(u)  # raises with the classification
        gam = christoffel(self.metric, frame.point)

        def f(v):
            sh = self.shape(v)
            mean = float(np.trace(sh.lambda_up)) / sh.lambda_up.shape[0]
            return self.frame(v).e1 / mean

        f0 = frame.e1 / lam0
        rows = []
        jac = self.patch.jacobian(u)
        for X in frame.tangent_matrix.T:
            du, *_ = np.linalg.lstsq(jac, X, rcond=None)
            nrm = float(np.linalg.norm(du))
            dfdX = directional4(f, u, du / nrm, self.steps.invariant) * nrm
            nabla = dfdX + np.einsum("ijk,j,k->i", gam, X, f0)
            rows.append(X - nabla)
        return np.array(rows)
