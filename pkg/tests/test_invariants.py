"""Relative and absolute invariants, normalization of e1, isotropic sectional curvature."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lightlike import catalog as C
from lightlike.errors import DegenerateInputError, DenominatorVanishes, NormalizationUnavailable
from lightlike.hypersurface import shape_from_tensor
from lightlike.invariants import (
    absolute_invariant,
    absolute_weights,
    invariant_set,
    newton_residual,
    normalized_e1,
    parse_name,
    principal_minor_sums,
    weight_of,
)
from lightlike.nullframe import FrameField, GaugeField, GaugeTransform
from lightlike.surface import LightlikeSurface

U_ELL = np.array([0.2, 0.7, 0.6])


def _shape(lam, mink):
    # any frame with an orthonormal screen carries lambda_ab = lam as given
    frame = FrameField(mink, C.null_hyperplane(4))(np.zeros(3))
    return shape_from_tensor(frame, np.asarray(lam, dtype=float))


def test_diagonal_example(mink):
    inv = invariant_set(_shape(np.diag([2.0, 3.0]), mink))
    np.testing.assert_allclose(inv.I, [5.0, 6.0])
    np.testing.assert_allclose(inv.I_tilde, [5.0, 13.0])
    assert inv.value("rootI2") == pytest.approx(np.sqrt(6.0))
    assert inv.value("lambda3") == 3.0


def test_names_and_weights():
    assert weight_of("I2", 2) == 2
    assert weight_of("It3", 3) == 3
    assert weight_of("rootI2", 2) == 1
    assert weight_of("lambda2", 2) == 1
    assert absolute_weights("I1^2/It2", 2) == (2, 2)
    for bad in ("I0", "lambda1", "lambda4", "foo2"):
        with pytest.raises(ValueError):
            parse_name(bad, 2)


sym3 = arrays(np.float64, (3, 3), elements=st.floats(-3, 3, allow_nan=False)).map(lambda a: a + a.T)


@settings(max_examples=60, deadline=None)
@given(sym3)
def test_newton_identities(mat):
    I = principal_minor_sums(mat)
    It = np.array([np.trace(np.linalg.matrix_power(mat, p)) for p in (1, 2, 3)])
    assert newton_residual(I, It) < 1e-9
    w = np.linalg.eigvalsh(mat)
    np.testing.assert_allclose(I, [w.sum(), w[0] * w[1] + w[0] * w[2] + w[1] * w[2], w.prod()], atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 5.0))
def test_relative_weights_on_ellipsoid(c):
    surf = LightlikeSurface(C.minkowski(4), C.ellipsoid_null_congruence())
    g = surf.with_gauge(GaugeField.constant(GaugeTransform(c, np.eye(2), np.zeros(2)), 4))
    a, b = surf.invariants(U_ELL), g.invariants(U_ELL)
    np.testing.assert_allclose(b.I, c ** np.array([1, 2]) * a.I, rtol=1e-9)
    np.testing.assert_allclose(b.I_tilde, c ** np.array([1, 2]) * a.I_tilde, rtol=1e-9)
    for spec in ("lambda2/lambda3", "I1^2/It2", "rootI2/lambda3"):
        assert g.absolute(U_ELL, spec) == pytest.approx(surf.absolute(U_ELL, spec), rel=1e-9)
    e1a = normalized_e1(surf.frame(U_ELL), surf.invariant(U_ELL, "rootI2"))
    e1b = normalized_e1(g.frame(U_ELL), g.invariant(U_ELL, "rootI2"))
    np.testing.assert_allclose(e1a, e1b, rtol=1e-9)


def test_absolute_errors(mink):
    sh = _shape(np.diag([0.0, 1.0]), mink)
    with pytest.raises(DenominatorVanishes):
        absolute_invariant(sh, "lambda3/lambda2")
    with pytest.raises(ValueError):
        absolute_invariant(sh, "I2/I1")
    with pytest.raises(ValueError):
        absolute_invariant(sh, "I1")
    with pytest.raises(NormalizationUnavailable):
        normalized_e1(FrameField(mink, C.null_hyperplane(4))(np.zeros(3)), 0.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_sectional_independent_of_e1_component(p2, p3, p1):
    surf = LightlikeSurface(C.conformally_flat(4, 0.2), C.ellipsoid_null_congruence())
    p = np.array([p2, p3])
    if np.linalg.norm(p) < 1e-3:
        with pytest.raises(DegenerateInputError):
            surf.sectional(U_ELL, np.zeros(2), p1=p1)
        return
    ref = surf.sectional(U_ELL, p)
    assert surf.sectional(U_ELL, p, p1=p1) == pytest.approx(ref, rel=1e-9, abs=1e-12)
    # homogeneous of degree zero in P
    assert surf.sectional(U_ELL, 2.5 * p) == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_sectional_nonzero_off_constant_curvature():
    surf = LightlikeSurface(C.conformally_flat(4, 0.2), C.ellipsoid_null_congruence())
    values = [surf.sectional(U_ELL, p) for p in np.eye(2)]
    assert max(abs(v) for v in values) > 1e-3


def test_sectional_vanishes_on_de_sitter_cone():
    surf = LightlikeSurface(C.de_sitter(4, 1.0), C.light_cone(4, s_range=(0.25, 1.0)))
    rng = np.random.default_rng(3)
    for _ in range(10):
        assert abs(surf.sectional(np.array([0.5, 1.2, 0.4]), rng.normal(size=2))) < 1e-12
