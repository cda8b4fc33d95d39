"""Invariant screens, their gauge independence and the induced connection."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lightlike import catalog as C
from lightlike.errors import REASON_CODES, ScreenUnavailable
from lightlike.nullframe import GaugeField
from lightlike.surface import LightlikeSurface

U_ELL = np.array([0.2, 0.7, 0.6])
U_CONE = np.array([0.6, 1.2, 0.4])


@pytest.fixture(scope="module")
def flat_ell():
    return LightlikeSurface(C.minkowski(4), C.ellipsoid_null_congruence())


@pytest.fixture(scope="module")
def curved_ell():
    return LightlikeSurface(C.conformally_flat(4, 0.2), C.ellipsoid_null_congruence())


@pytest.fixture(scope="module")
def curved_cone():
    return LightlikeSurface(C.conformally_flat(4, 0.2), C.light_cone(4, s_range=(0.25, 1.0)))


def test_flat_relative_K_closed_forms(flat_ell):
    lam = flat_ell.shape(U_ELL).eigenvalues
    # in flat space K_a = lambda_a for the eigenvalues; for I1 and rootI2 it follows from the chain rule
    assert flat_ell.relative_screen(U_ELL, "I1").K == pytest.approx((lam ** 2).sum() / lam.sum(), rel=1e-8)
    assert flat_ell.relative_screen(U_ELL, "rootI2").K == pytest.approx(lam.sum() / 2, rel=1e-8)
    assert flat_ell.relative_screen(U_ELL, "I1").K == pytest.approx(0.72045310363, rel=1e-8)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**31))
def test_relative_screen_gauge_independent(seed):
    surf = LightlikeSurface(C.minkowski(4), C.ellipsoid_null_congruence())
    other = surf.with_gauge(GaugeField.random(np.random.default_rng(seed), 4, U_ELL))
    g = surf.frame(U_ELL).g
    for name in ("I1", "rootI2"):
        P0 = surf.relative_screen(U_ELL, name).projector(g)
        P1 = other.relative_screen(U_ELL, name).projector(g)
        assert np.linalg.norm(P1 - P0) < 1e-5


def test_triple_in_curved_space(curved_ell):
    screens, diag = curved_ell.triple(U_ELL)
    assert all(not isinstance(s, ScreenUnavailable) for s in screens.values())
    assert not diag["proportional"]
    # closed form of K_a against numerical log-derivatives of the eigenvalues
    assert diag["closed_form_residual"] < 1e-8
    assert diag["log_ratio_residual"] < 1e-8
    np.testing.assert_allclose(diag["K_closed_form"], [0.59847081, 0.85972421], rtol=1e-7)


def test_triple_relative_screens_are_not_integrable(curved_ell):
    for name in ("lambda2", "lambda3"):
        screen = curved_ell.connection(U_ELL, curved_ell.relative_screen(U_ELL, name))
        assert not screen.integrable
        # only the antisymmetric part of (lambda - K g) g^-1 nu is fixed; here it vanishes
        assert screen.diagnostics["curvature_antisymmetry"] < 1e-10
        assert screen.diagnostics["lambda_nu_antisymmetry"] < 1e-6 * np.linalg.norm(screen.nu_ab)


def test_absolute_screen_integrable(curved_ell):
    screen = curved_ell.connection(U_ELL, curved_ell.absolute_screen(U_ELL, "lambda2/lambda3"))
    assert screen.integrable
    assert screen.diagnostics["level_set_residual"] < 1e-6


def test_supplied_screen_on_hyperplane_has_flat_connection(mink):
    plane = LightlikeSurface(mink, C.null_hyperplane(4))
    s = plane.connection(np.zeros(3), plane.supplied_screen(np.zeros(3)))
    np.testing.assert_allclose(s.nu_a, 0.0, atol=1e-10)
    np.testing.assert_allclose(s.nu_ab, 0.0, atol=1e-10)
    assert s.integrable


def test_flat_cone_relative_screen_unavailable(mink):
    cone = LightlikeSurface(mink, C.light_cone(4))
    with pytest.raises(ScreenUnavailable) as exc:
        cone.relative_screen(U_CONE, "rootI2")
    assert exc.value.reason == "K_is_eigenvalue"


def test_curved_cone_relative_screen(curved_cone):
    assert curved_cone.classification(U_CONE).kind == "totally_umbilical"
    screen = curved_cone.connection(U_CONE, curved_cone.relative_screen(U_CONE, "rootI2"))
    assert screen.K == pytest.approx(1.66858533, rel=1e-7)
    assert screen.integrable


def test_focus_displacement(mink, curved_cone):
    flat = LightlikeSurface(mink, C.light_cone(4))
    assert np.max(np.abs(flat.focus_displacement(U_CONE))) < 1e-8
    D = curved_cone.focus_displacement(U_CONE)
    comps = np.linalg.solve(curved_cone.frame(U_CONE).matrix, D.T).T
    # the focus moves only along the generator
    assert np.max(np.abs(comps[:, 1:])) < 1e-8
    assert np.max(np.abs(comps[:, 0])) > 1e-3


def test_reason_codes_are_enumerated(mink):
    plane = LightlikeSurface(mink, C.null_hyperplane(4))
    cone = LightlikeSurface(mink, C.light_cone(4))
    reasons = set()
    for surf, u in ((plane, np.zeros(3)), (cone, U_CONE)):
        screens, _ = surf.triple(u)
        reasons |= {s.reason for s in screens.values() if isinstance(s, ScreenUnavailable)}
        for name in ("I1", "rootI2"):
            try:
                surf.relative_screen(u, name)
            except ScreenUnavailable as exc:
                reasons.add(exc.reason)
    assert reasons <= set(REASON_CODES)
    assert {"totally_geodesic", "equal_eigenvalues", "K_is_eigenvalue"} <= reasons


def test_riccati_equation(flat_ell, curved_ell):
    assert np.max(np.abs(flat_ell.riccati_residual(U_ELL))) < 1e-7
    assert np.max(np.abs(curved_ell.riccati_residual(U_ELL))) < 1e-7
    # the curvature term is needed off constant curvature
    assert np.max(np.abs(curved_ell.riccati_residual(U_ELL, include_curvature=False))) > 1e-3
