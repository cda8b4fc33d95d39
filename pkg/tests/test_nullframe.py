"""Isotropic frames, gauge transforms and connection forms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lightlike import catalog as C
from lightlike.errors import InvalidGaugeError, NotLightlikeError
from lightlike.nullframe import (
    FrameField,
    GaugeField,
    GaugeTransform,
    apply_gauge,
    build_isotropic_frame,
    connection_form_values,
    connection_forms_on_params,
    frame_relations_residual,
)
from lightlike.surface import LightlikeSurface

U_ELL = np.array([0.2, 0.7, 0.6])


def test_hyperplane_frame(mink):
    # x4 = x1 in signature (+,+,+,-): tangent basis (1,0,0,1), (0,1,0,0), (0,0,1,0)
    basis = np.array([[1.0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]])
    fr = build_isotropic_frame(mink, np.zeros(4), basis)
    np.testing.assert_allclose(fr.e1, [1, 0, 0, 1])
    np.testing.assert_allclose(fr.en, [-0.5, 0, 0, 0.5], atol=1e-15)
    np.testing.assert_allclose(fr.screen_gram, np.eye(2), atol=1e-15)
    assert fr.is_valid()


def test_spacelike_plane_is_rejected(mink):
    with pytest.raises(NotLightlikeError):
        build_isotropic_frame(mink, np.zeros(4), np.eye(4)[:3])


def test_invalid_gauges():
    with pytest.raises(InvalidGaugeError):
        GaugeTransform(0.0, np.eye(2), np.zeros(2)).validate()
    with pytest.raises(InvalidGaugeError):
        GaugeTransform(1.0, np.zeros((2, 2)), np.zeros(2)).validate()
    with pytest.raises(InvalidGaugeError):
        GaugeTransform(1.0, np.eye(2), np.zeros(3)).validate()


def test_random_gauges_keep_frame_valid():
    rng = np.random.default_rng(0)
    surf = LightlikeSurface(C.conformally_flat(4, 0.2), C.ellipsoid_null_congruence())
    base = surf.frame(U_ELL)
    for _ in range(100):
        gauge = GaugeField.random(rng, 4, U_ELL)(U_ELL)
        fr = apply_gauge(base, gauge)
        assert fr.is_valid()
        # same tangent plane, same radical line
        assert np.linalg.matrix_rank(np.column_stack([fr.tangent_matrix, base.tangent_matrix]), tol=1e-8) == 3
        assert np.linalg.norm(np.cross(fr.e1[:3], base.e1[:3])) < 1e-12


def test_constant_rescaling_shifts_omega11_by_dlogc():
    # For e1 -> c(u) e1, omega_1^1 changes by d ln c; with c = exp(beta . u) the
    # increment along X is beta . du.
    surf = LightlikeSurface(C.conformally_flat(4, 0.2), C.ellipsoid_null_congruence())
    beta = np.array([0.3, -0.2, 0.1])
    gf = GaugeField(u0=np.zeros(3), c0=1.0, beta=beta, A0=np.eye(2), A_lin=np.zeros((3, 2, 2)),
                    t0=np.zeros(2), T=np.zeros((2, 3)))
    W0 = connection_forms_on_params(surf.frame_field, U_ELL)
    W1 = connection_forms_on_params(surf.frame_field.with_gauge(gf), U_ELL)
    np.testing.assert_allclose(W1[:, 0, 0] - W0[:, 0, 0], beta, atol=1e-8)


def test_transversal_component_of_screen_derivative_is_lambda():
    surf = LightlikeSurface(C.conformally_flat(4, 0.2), C.ellipsoid_null_congruence())
    fr, sh = surf.frame(U_ELL), surf.shape(U_ELL)
    M = np.array([[connection_form_values(surf.metric, surf.frame_field, U_ELL, fr.e_a[b])[1 + a, -1]
                   for b in range(2)] for a in range(2)])
    np.testing.assert_allclose(M, sh.lambda_ab, atol=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_frame_relations_in_random_gauges(seed):
    rng = np.random.default_rng(seed)
    surf = LightlikeSurface(C.conformally_flat(4, 0.2), C.ellipsoid_null_congruence())
    ff = surf.frame_field.with_gauge(GaugeField.random(rng, 4, U_ELL))
    W = connection_forms_on_params(ff, U_ELL)
    G = ff(U_ELL).screen_gram
    scale = np.max(np.abs(W))
    for k in range(3):
        assert frame_relations_residual(W[k], G) < 1e-6 * scale


def test_frame_field_is_deterministic():
    a = FrameField(C.minkowski(4), C.light_cone(4))(np.array([1.0, 1.0, 0.5]))
    b = FrameField(C.minkowski(4), C.light_cone(4))(np.array([1.0, 1.0, 0.5]))
    assert np.array_equal(a.matrix, b.matrix)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
def test_screen_projector_ignores_shift_and_basis_change(c, t2, t3):
    fr = FrameField(C.minkowski(4), C.light_cone(4))(np.array([1.0, 1.0, 0.5]))
    A = np.array([[1.0, 0.5], [-0.3, 2.0]])
    g2 = apply_gauge(fr, GaugeTransform(c, A, np.zeros(2)))
    np.testing.assert_allclose(g2.screen_projector(), fr.screen_projector(), atol=1e-12)
    g3 = apply_gauge(fr, GaugeTransform(c, A, np.array([t2, t3])))
    # the shift moves the screen, but never its g-orthogonal projection onto the old screen
    P = fr.screen_projector()
    np.testing.assert_allclose(P @ g3.screen_projector() @ P, P, atol=1e-10)
