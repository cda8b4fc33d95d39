"""Isotropic geodesics, Jacobi matrix and focal points."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lightlike import catalog as C
from lightlike.errors import NotLightlikeError, NotUmbilicalError
from lightlike.geodesics import focal_points, integrate_isotropic_geodesic, jacobi_determinant
from lightlike.nullframe import GaugeField, GaugeTransform
from lightlike.surface import LightlikeSurface

U_ELL = np.array([0.2, 0.7, 0.6])


@settings(max_examples=20, deadline=None)
@given(st.floats(-np.pi, np.pi), st.floats(0.1, np.pi - 0.1))
def test_minkowski_straight_lines(ph, th):
    mk = C.minkowski(4)
    v = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th), 1.0])
    rec = integrate_isotropic_geodesic(mk, np.zeros(4), v, 3.0, steps=10)
    np.testing.assert_allclose(rec.x, np.outer(rec.s, v), atol=1e-10)
    assert rec.null_drift == 0.0


def test_non_null_velocity_rejected(mink):
    with pytest.raises(NotLightlikeError):
        integrate_isotropic_geodesic(mink, np.zeros(4), np.array([1.0, 0, 0, 0]), 1.0)


def test_chart_exit_truncates():
    ds = C.de_sitter(4, 1.0)
    v = np.array([1.0, 0.0, 0.0, 1.0])
    rec = integrate_isotropic_geodesic(ds, np.zeros(4), v, 50.0, steps=50)
    assert rec.exited
    assert rec.s[-1] < 50.0


def test_de_sitter_null_geodesic_is_conformal_straight_line():
    # conformally flat metrics share null geodesics with flat space up to parametrization
    ds = C.de_sitter(4, 1.0)
    v = 0.2 * np.array([0.6, 0.8, 0.0, 1.0])
    rec = integrate_isotropic_geodesic(ds, np.zeros(4), v, 2.0, steps=20)
    direction = rec.x[1:] / np.linalg.norm(rec.x[1:], axis=1, keepdims=True)
    np.testing.assert_allclose(direction, np.tile(v / np.linalg.norm(v), (20, 1)), atol=1e-9)


def test_light_cone_foci_at_apex(mink):
    apex = np.array([0.1, -0.2, 0.3, 0.5])
    for c in (0.5, 1.0, 3.0):
        surf = LightlikeSurface(mink, C.light_cone(4, apex=apex),
                                GaugeField.constant(GaugeTransform(c, np.eye(2), np.zeros(2)), 4))
        u = np.array([1.2, 1.0, 0.7])
        fs = surf.foci(u)
        assert fs.count == 2 and len(fs.multiplicities) == 1
        np.testing.assert_allclose(fs.points[0], apex, atol=1e-8)
        np.testing.assert_allclose(surf.umbilical_focus(u), apex, atol=1e-8)
        assert abs(fs.jacobi_dets[0]) < 1e-12


def test_ellipsoid_foci_are_centres_of_curvature(mink):
    surf = LightlikeSurface(mink, C.ellipsoid_null_congruence())
    sh = surf.shape(U_ELL)
    fs = surf.foci(U_ELL)
    assert fs.count == 2 and not fs.at_infinity.any()
    np.testing.assert_allclose(fs.s_values, -1.0 / np.sort(sh.eigenvalues), rtol=1e-12)
    for s in fs.s_values:
        assert abs(jacobi_determinant(sh, s)) < 1e-10
    with pytest.raises(NotUmbilicalError):
        surf.umbilical_focus(U_ELL)


def test_hyperplane_foci_at_infinity(mink):
    surf = LightlikeSurface(mink, C.null_hyperplane(4))
    fs = focal_points(surf.shape(np.zeros(3)))
    assert fs.at_infinity.all()
    assert np.isnan(fs.points).all()


def test_exponential_images_in_flat_space(mink):
    surf = LightlikeSurface(mink, C.light_cone(4))
    fs = surf.foci(np.array([0.5, 1.0, 0.2]), exponential=True)
    np.testing.assert_allclose(fs.exp_points, fs.points, atol=1e-9)
