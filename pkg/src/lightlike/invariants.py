"""Relative and absolute invariants of the shape operator, isotropic sectional curvature.

Weights refer to the rescaling ``e1 -> c e1`` with ``c > 0``: a relative
invariant of weight ``p`` is multiplied by ``c**p``. Named invariants:

========== ====== ==============================================
name       weight meaning
========== ====== ==============================================
lambda<a>  1      eigenvalue ``a = 2 .. n-1``, ascending order
I<p>       p      sum of the ``p x p`` principal minors of ``lambda^a_b``
It<p>      p      ``tr((lambda^a_b)^p)``
rootI<p>   1      ``sign(I_p) |I_p|^(1/p)``
rootIt<p>  1      ``sign(It_p) |It_p|^(1/p)``
========== ====== ==============================================

Absolute invariants are written as ratios of products, for example
``lambda2/lambda3`` or ``I1^2/It2``; both sides must carry the same weight.
"""

import re
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._fd import directional4
from .errors import DenominatorVanishes, DegenerateInputError, NormalizationUnavailable
from .nullframe import connection_matrix_along, param_direction
from .tensorcalc import riemann

NEWTON_TOL = 1e-8
_NAME = re.compile(r"^(lambda|I|It|rootI|rootIt)(\d+)$")


@dataclass(frozen=True)
class InvariantSet:
    I: np.ndarray
    I_tilde: np.ndarray
    eigenvalues: np.ndarray
    weights: tuple
    newton_residual: float

    def value(self, name):
        kind, idx = parse_name(name, self.eigenvalues.size)
        if kind == "lambda":
            return float(self.eigenvalues[idx - 2])
        if kind == "I":
            return float(self.I[idx - 1])
        if kind == "It":
            return float(self.I_tilde[idx - 1])
        base = self.I[idx - 1] if kind == "rootI" else self.I_tilde[idx - 1]
        return float(np.sign(base) * abs(base) ** (1.0 / idx))


def parse_name(name, m):
    """Split an invariant name into ``(kind, index)`` and validate the index."""
    match = _NAME.match(name.strip())
    if not match:
        raise ValueError(f"unknown invariant {name!r}")
    kind, idx = match.group(1), int(match.group(2))
    lo, hi = (2, m + 1) if kind == "lambda" else (1, m)
    if not lo <= idx <= hi:
        raise ValueError(f"invariant {name!r} needs index in [{lo}, {hi}]")
    return kind, idx


def weight_of(name, m):
    kind, idx = parse_name(name, m)
    return idx if kind in ("I", "It") else 1


def principal_minor_sums(mat):
    m = mat.shape[0]
    return np.array([
        sum(np.linalg.det(mat[np.ix_(idx, idx)]) for idx in combinations(range(m), p))
        for p in range(1, m + 1)
    ])


def newton_residual(I, It):
    """Max relative violation of ``p I_p = sum_i (-1)^(i-1) I_(p-i) It_i``."""
    e = np.concatenate([[1.0], I])
    worst = 0.0
    for p in range(1, I.size + 1):
        terms = [(-1) ** (i - 1) * e[p - i] * It[i - 1] for i in range(1, p + 1)]
        scale = max(abs(p * e[p]), *(abs(t) for t in terms), 1e-300)
        worst = max(worst, abs(p * e[p] - sum(terms)) / scale)
    return float(worst)


def invariant_set(shape):
    lam = shape.lambda_up
    m = lam.shape[0]
    I = principal_minor_sums(lam)
    It = np.array([np.trace(np.linalg.matrix_power(lam, p)) for p in range(1, m + 1)])
    resid = newton_residual(I, It)
    norm = float(np.max(np.abs(lam))) if lam.size else 0.0
    # Newton's identities are exact up to rounding once the invariants are not all ~0
    if norm > 1e-12 and resid > NEWTON_TOL:
        raise DegenerateInputError(f"Newton identity residual {resid:.2e}")
    return InvariantSet(
        I=I,
        I_tilde=It,
        eigenvalues=np.asarray(shape.eigenvalues, dtype=float),
        weights=tuple(range(1, m + 1)),
        newton_residual=resid,
    )


def invariant_value(shape, name):
    return invariant_set(shape).value(name)


def normalized_e1(frame, I, threshold=1e-10):
    """``e1 / I`` for a weight-1 relative invariant ``I``; gauge independent."""
    if not np.isfinite(I) or abs(I) <= threshold:
        raise NormalizationUnavailable(f"relative invariant {I!r} is too small to normalize e1")
    return frame.e1 / I


def parse_absolute(spec):
    """Parse ``"num/den"``; each side is ``name[^k] * name[^k] ...``.

    Returns ``(numerator, denominator)`` as lists of ``(name, power)``.
    """
    if spec.count("/") != 1:
        raise ValueError(f"absolute invariant {spec!r} must have the form num/den")

    def side(text):
        out = []
        for factor in text.split("*"):
            factor = factor.strip()
            name, _, power = factor.partition("^")
            out.append((name.strip(), int(power) if power else 1))
        return out

    num, den = spec.split("/")
    return side(num), side(den)


def absolute_weights(spec, m):
    num, den = parse_absolute(spec)
    wn = sum(weight_of(n, m) * k for n, k in num)
    wd = sum(weight_of(n, m) * k for n, k in den)
    return wn, wd


def absolute_invariant(shape, spec, tol=1e-10):
    """Value of the absolute invariant ``spec`` (see :func:`parse_absolute`)."""
    m = shape.lambda_up.shape[0]
    wn, wd = absolute_weights(spec, m)
    if wn != wd:
        raise ValueError(f"{spec!r}: numerator weight {wn} differs from denominator weight {wd}")
    inv = invariant_set(shape)
    num, den = parse_absolute(spec)
    top = np.prod([inv.value(n) ** k for n, k in num])
    bottom = np.prod([inv.value(n) ** k for n, k in den])
    norm = float(np.max(np.abs(inv.eigenvalues))) if inv.eigenvalues.size else 0.0
    if abs(bottom) <= tol * max(norm, 1.0) ** wd:
        raise DenominatorVanishes(f"denominator of {spec!r} vanishes ({bottom:.3e})")
    return float(top / bottom)


def isotropic_curvature_matrix(frame, curv):
    """``R_1ab1 = R(e1, e_a, e_b, e1)`` for the screen vectors of ``frame``."""
    return np.einsum("ijkl,i,aj,bk,l->ab", curv.riemann_down, frame.e1, frame.e_a, frame.e_a, frame.e1)


def isotropic_sectional_curvature(metric, frame, p_screen, curv=None, p1=0.0):
    """``K_N = R(e1, P, P, e1) / g(P, P)`` for ``P = p1 e1 + p^a e_a``."""
    if curv is None:
        curv = riemann(metric, frame.point)
    p_screen = np.asarray(p_screen, dtype=float)
    P = p1 * frame.e1 + p_screen @ frame.e_a
    denom = float(P @ frame.g @ P)
    if denom <= 1e-14 * max(1.0, float(np.max(np.abs(frame.screen_gram)))) * float(p_screen @ p_screen + p1 * p1):
        raise DegenerateInputError("P is isotropic; the plane e1 ^ P is not spanned")
    num = float(np.einsum("ijkl,i,j,k,l->", curv.riemann_down, frame.e1, P, P, frame.e1))
    return num / denom


def riccati_residual(shape_field, frame_field, metric, at, steps, include_curvature=True):
    """Residual of the Riccati equation along the generator.

    Returns the screen matrix
    ``(nabla lambda_ab - lambda_ab omega_1^1)(e1) + lambda_ac g^ce lambda_eb - R_1ab1``
    evaluated at ``at``; it vanishes for every lightlike hypersurface, and on
    constant-curvature manifolds ``R_1ab1 = 0``. With ``include_curvature=False``
    the ``R_1ab1`` term is left out.
    ``shape_field(u)`` returns the :class:`~lightlike.hypersurface.ShapeData` of the
    frame ``frame_field(u)``.
    """
    at = np.asarray(at, dtype=float)
    shape = shape_field(at)
    frame = shape.frame
    du = param_direction(frame_field.patch, at, frame.e1)
    norm = float(np.linalg.norm(du))
    d_lam = directional4(lambda v: shape_field(v).lambda_ab, at, du / norm, steps.invariant) * norm
    W = connection_matrix_along(frame_field, at, du, steps.frame)
    om = W[1:-1, 1:-1]  # om[a, c] = omega_a^c(e1)
    lam = shape.lambda_ab
    nabla = d_lam - om @ lam - lam @ om.T
    quad = lam @ np.linalg.solve(shape.g_ab, lam)
    out = nabla - lam * W[0, 0] + quad
    if include_curvature:
        out = out - isotropic_curvature_matrix(frame, riemann(metric, frame.point))
    return out
