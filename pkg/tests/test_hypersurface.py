"""Second fundamental tensor, eigenvalues, classification and weights."""

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from lightlike import catalog as C
from lightlike.errors import NotLightlikeError
from lightlike.hypersurface import HypersurfacePatch, cluster_eigenvalues, classify, verify_lightlike
from lightlike.nullframe import GaugeField, GaugeTransform
from lightlike.surface import LightlikeSurface


def ellipsoid_principal_curvatures(a, b, c, theta, phi):
    """sympy oracle: principal curvatures, positive on the convex ellipsoid."""
    t, p = sp.symbols("t p")
    X = sp.Matrix([a * sp.sin(t) * sp.cos(p), b * sp.sin(t) * sp.sin(p), c * sp.cos(t)])
    Xt, Xp = X.diff(t), X.diff(p)
    N = Xt.cross(Xp)
    N = N / sp.sqrt(N.dot(N))
    I = sp.Matrix([[Xt.dot(Xt), Xt.dot(Xp)], [Xp.dot(Xt), Xp.dot(Xp)]])
    II = sp.Matrix([[X.diff(t, 2).dot(N), X.diff(t, p).dot(N)], [X.diff(p, t).dot(N), X.diff(p, 2).dot(N)]])
    subs = {t: theta, p: phi}
    In = np.array(I.subs(subs).evalf(), dtype=float)
    IIn = np.array(II.subs(subs).evalf(), dtype=float)
    Xn = np.array(X.subs(subs).evalf(), dtype=float).ravel()
    Nn = np.array(N.subs(subs).evalf(), dtype=float).ravel()
    k = np.linalg.eigvals(np.linalg.solve(In, IIn)).real
    if Xn @ Nn > 0:  # II was taken against the outward normal, where it is negative definite
        k = -k
    return np.sort(k)


@pytest.mark.parametrize("u", [(0.2, 0.7, 0.6), (0.0, 0.5, 1.0), (0.45, 1.1, 0.4)])
def test_ellipsoid_eigenvalues_match_oracle(mink, u):
    u = np.array(u)
    surf = LightlikeSurface(mink, C.ellipsoid_null_congruence(1.0, 1.3, 1.7))
    k = ellipsoid_principal_curvatures(1.0, 1.3, 1.7, u[1], u[2])
    expected = np.sort(k / (1.0 + u[0] * k))
    np.testing.assert_allclose(surf.shape(u).eigenvalues, expected, rtol=1e-8)


def test_ellipsoid_frozen_values(mink):
    # frozen from the symbolic oracle above
    surf = LightlikeSurface(mink, C.ellipsoid_null_congruence())
    np.testing.assert_allclose(surf.shape(np.array([0.2, 0.7, 0.6])).eigenvalues,
                               [0.58202744, 0.81884481], rtol=1e-7)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 1.9), st.floats(0.4, 2.7), st.floats(-3.0, 3.0))
def test_light_cone_is_umbilical(s, th, ph):
    surf = LightlikeSurface(C.minkowski(4), C.light_cone(4))
    cls = surf.classification(np.array([s, th, ph]))
    assert cls.kind == "totally_umbilical"
    assert cls.umbilic_lambda == pytest.approx(1.0 / s, rel=1e-8)


def test_five_dimensional_cone(mink):
    surf = LightlikeSurface(C.minkowski(5), C.light_cone(5))
    sh = surf.shape(np.array([0.8, 1.0, 1.2, 0.3]))
    np.testing.assert_allclose(sh.eigenvalues, [1.25] * 3, rtol=1e-8)
    assert len(sh.clusters) == 1
    assert sh.clusters[0][0] == pytest.approx(1.25, rel=1e-8) and sh.clusters[0][1] == 3


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 4.0), st.integers(0, 2**31))
def test_weight_one_scaling_and_screen_change(c, seed):
    rng = np.random.default_rng(seed)
    u = np.array([0.2, 0.7, 0.6])
    surf = LightlikeSurface(C.conformally_flat(4, 0.2), C.ellipsoid_null_congruence())
    base = surf.shape(u)
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    A = q @ np.diag(rng.uniform(0.5, 2.0, 2))
    gauged = surf.with_gauge(GaugeField.constant(GaugeTransform(c, A, rng.normal(size=2)), 4)).shape(u)
    # lambda_ab transforms as c A lambda A^T; its eigenvalues as c lambda
    np.testing.assert_allclose(gauged.lambda_ab, c * A @ base.lambda_ab @ A.T, rtol=1e-6, atol=1e-8)
    np.testing.assert_allclose(gauged.eigenvalues, c * base.eigenvalues, rtol=1e-7)


def test_shape_symmetric_in_curved_space():
    surf = LightlikeSurface(C.de_sitter(4, 1.0), C.light_cone(4, s_range=(0.25, 1.0)))
    sh = surf.shape(np.array([0.6, 1.0, 0.3]))
    assert sh.symmetry_residual < 1e-8
    assert surf.classification(np.array([0.6, 1.0, 0.3])).kind == "totally_umbilical"


def test_classification_thresholds(mink):
    plane = LightlikeSurface(mink, C.null_hyperplane(4))
    assert plane.classification(np.zeros(3)).kind == "totally_geodesic"
    ell = LightlikeSurface(mink, C.ellipsoid_null_congruence())
    assert ell.classification(np.array([0.2, 0.7, 0.6])).kind == "generic"
    sh = ell.shape(np.array([0.2, 0.7, 0.6]))
    assert classify(sh, tol_rel=0.9).kind == "totally_umbilical"


def test_not_lightlike_patch(mink):
    spacelike = HypersurfacePatch(
        ambient_dim=4,
        map_fn=lambda u: np.append(u, 0.0),
        jacobian_fn=lambda u: np.vstack([np.eye(3), np.zeros(3)]),
        param_bounds=np.tile([-1.0, 1.0], (3, 1)),
    )
    assert verify_lightlike(spacelike, mink, np.zeros(3)) == "spacelike_or_timelike"
    assert verify_lightlike(C.light_cone(4), mink, np.array([1.0, 1.0, 0.0])) == "lightlike"
    with pytest.raises(NotLightlikeError):
        LightlikeSurface(mink, spacelike).shape(np.zeros(3))


def test_custom_patch_matches_builtin(mink):
    patch = C.custom(["u1 + u2", "u3", "0.5*u2", "u1 + u2"], np.tile([-1.0, 1.0], (3, 1)))
    surf = LightlikeSurface(mink, patch)
    assert surf.classification(np.array([0.1, 0.2, 0.3])).kind == "totally_geodesic"


def test_cluster_eigenvalues():
    clusters = cluster_eigenvalues(np.array([1.0, 1.0 + 1e-12, 2.0]))
    assert [m for _, m in clusters] == [2, 1]
    assert clusters[0][0] == pytest.approx(1.0, abs=1e-11)
    assert clusters[1][0] == 2.0
