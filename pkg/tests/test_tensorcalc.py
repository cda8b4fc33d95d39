"""Curvature convention, symmetries and metric compatibility."""

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from lightlike import catalog as C
from lightlike.errors import DegenerateMetricError, DomainError, SignatureError
from lightlike.tensorcalc import (
    MetricField,
    christoffel,
    constant_curvature_riemann,
    metric_compatibility_residual,
    riemann,
)

from conftest import sympy_riemann

coord = st.floats(-0.6, 0.6, allow_nan=False)
point4 = st.tuples(coord, coord, coord, coord).map(np.array)


def test_de_sitter_matches_symbolic_oracle():
    t, x, y, z = sp.symbols("t x y z")
    K = sp.Rational(1, 1)
    phi = 1 + K * (x**2 + y**2 + z**2 - t**2) / 4
    g = sp.diag(1, 1, 1, -1) / phi**2
    p = (0.2, -0.3, 0.1, 0.4)
    gam_ref, r_ref = sympy_riemann(g, [x, y, z, t], p)
    metric = C.de_sitter(4, 1.0)
    np.testing.assert_allclose(christoffel(metric, np.array(p)), gam_ref, atol=1e-12)
    np.testing.assert_allclose(riemann(metric, np.array(p)).riemann_down, r_ref, atol=1e-12)


def test_eddington_finkelstein_matches_symbolic_oracle():
    v, r, th, ph = sp.symbols("v r theta phi")
    m = 1
    g = sp.Matrix([
        [-(1 - 2 * m / r), 1, 0, 0],
        [1, 0, 0, 0],
        [0, 0, r**2, 0],
        [0, 0, 0, r**2 * sp.sin(th) ** 2],
    ])
    p = (0.3, 3.0, 1.1, 0.2)
    gam_ref, r_ref = sympy_riemann(g, [v, r, th, ph], p)
    metric = C.eddington_finkelstein(1.0)
    np.testing.assert_allclose(christoffel(metric, np.array(p)), gam_ref, atol=1e-12)
    np.testing.assert_allclose(riemann(metric, np.array(p)).riemann_down, r_ref, atol=1e-11)


def test_sphere_christoffel_known_value():
    # Gamma^theta_{phi phi} = -sin(theta) cos(theta) on the round two-sphere (times a line)
    metric = MetricField(
        dim=3,
        components=lambda q: np.diag([-1.0, 1.0, np.sin(q[1]) ** 2]),
        chart_bounds=np.array([[-1, 1], [0.1, 3.0], [-4, 4]]),
        name="time_x_sphere",
    )
    th = 0.7
    gam = christoffel(metric, np.array([0.0, th, 0.2]))
    assert gam[1, 2, 2] == pytest.approx(-np.sin(th) * np.cos(th), abs=1e-8)
    assert gam[2, 1, 2] == pytest.approx(np.cos(th) / np.sin(th), abs=1e-8)


@pytest.mark.parametrize("K", [1.0, 0.5, -1.0, -0.3])
def test_constant_curvature_sign_convention(K):
    metric = C.de_sitter(4, K) if K > 0 else C.anti_de_sitter(4, K)
    x = np.array([0.1, -0.2, 0.15, 0.3])
    R = riemann(metric, x).riemann_down
    Rc = constant_curvature_riemann(K, metric, x).riemann_down
    np.testing.assert_allclose(R, Rc, atol=1e-12 * max(1.0, np.abs(Rc).max()))


def test_finite_difference_path_agrees_with_analytic():
    metric = C.de_sitter(4, 1.0)
    fd = metric.finite_difference_only()
    x = np.array([0.3, 0.1, -0.2, 0.2])
    a = riemann(metric, x).riemann_down
    b = riemann(fd, x).riemann_down
    assert np.max(np.abs(a - b)) / np.max(np.abs(a)) < 1e-6


@settings(max_examples=30, deadline=None)
@given(point4)
def test_symmetries_hold_on_conformally_flat(x):
    res = riemann(C.conformally_flat(4, 0.2), x).symmetry_residuals()
    assert max(res.values()) < 1e-10


@settings(max_examples=30, deadline=None)
@given(point4)
def test_metric_compatibility(x):
    for metric in (C.de_sitter(4, 1.0), C.conformally_flat(4, 0.2)):
        assert metric_compatibility_residual(metric, x) < 1e-12


def test_minkowski_is_flat(mink):
    assert np.all(riemann(mink, np.zeros(4)).riemann_down == 0.0)


def test_errors():
    with pytest.raises(DomainError):
        C.de_sitter(4, 1.0).g(np.array([10.0, 0, 0, 0]))
    box = np.tile([-1.0, 1.0], (3, 1))
    bad = MetricField(dim=3, components=lambda x: np.diag([1.0, 1.0, 0.0]), chart_bounds=box)
    with pytest.raises(DegenerateMetricError):
        christoffel(bad, np.zeros(3))
    riem = MetricField(dim=3, components=lambda x: np.eye(3), chart_bounds=box)
    with pytest.raises(SignatureError):
        riem.check_lorentzian(np.zeros(3))
    with pytest.raises(ValueError):
        MetricField(dim=2, components=lambda x: np.eye(2), chart_bounds=np.tile([-1.0, 1.0], (2, 1)))
