"""Finite-difference stencils.

Two families are used:

* second-order central differences for metric components, with the step
  rules ``h1 = eps**(1/3) * max(1, |x_i|)`` and ``h2 = eps**(1/4) * max(1, |x_i|)``;
* a fourth-order five-point stencil for derivatives taken along a
  hypersurface patch. Quantities on the patch are nested (the shape operator
  is a derivative of the radical field, the invariant screens are derivatives
  of the shape operator, the induced connection a derivative of the screen),
  so each nesting level has its own step, see :class:`StencilSteps`.
"""

from dataclasses import dataclass

import numpy as np

EPS = np.finfo(float).eps
H1 = EPS ** (1.0 / 3.0)
H2 = EPS ** (1.0 / 4.0)

_W4 = ((-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0))


@dataclass(frozen=True)
class StencilSteps:
    """Parameter-space steps for the nested patch derivatives.

    frame: derivative of fields evaluated to machine precision (radical
        vector, adapted frames).
    invariant: derivative of quantities that already carry one stencil
        (second fundamental tensor, eigenvalues, invariants).
    screen: derivative of quantities that carry two stencils (screen fields,
        used by the induced connection).
    """

    frame: float = 1e-3
    invariant: float = 2e-3
    screen: float = 1.5e-3


def axis_steps(x, h):
    x = np.asarray(x, dtype=float)
    return h * np.maximum(1.0, np.abs(x))


def gradient_central(f, x, h=H1):
    """Second-order central first derivatives of ``f`` at ``x``.

    Returns an array of shape ``f(x).shape + (n,)`` whose last axis indexes
    the differentiation variable.
    """
    x = np.asarray(x, dtype=float)
    steps = axis_steps(x, h)
    cols = []
    for k in range(x.size):
        dx = np.zeros_like(x)
        dx[k] = steps[k]
        cols.append((np.asarray(f(x + dx)) - np.asarray(f(x - dx))) / (2.0 * steps[k]))
    return np.stack(cols, axis=-1)


def hessian_central(f, x, h=H2):
    """Second-order central second derivatives; last two axes index variables."""
    x = np.asarray(x, dtype=float)
    n = x.size
    steps = axis_steps(x, h)
    f0 = np.asarray(f(x))
    out = np.zeros(f0.shape + (n, n))
    for k in range(n):
        ek = np.zeros(n)
        ek[k] = steps[k]
        out[..., k, k] = (np.asarray(f(x + ek)) - 2.0 * f0 + np.asarray(f(x - ek))) / steps[k] ** 2
        for l in range(k + 1, n):
            el = np.zeros(n)
            el[l] = steps[l]
            val = (
                np.asarray(f(x + ek + el))
                - np.asarray(f(x + ek - el))
                - np.asarray(f(x - ek + el))
                + np.asarray(f(x - ek - el))
            ) / (4.0 * steps[k] * steps[l])
            out[..., k, l] = val
            out[..., l, k] = val
    return out


def directional4(f, u, direction, h):
    """Fourth-order derivative of ``f`` at ``u`` along ``direction`` (step ``h``)."""
    u = np.asarray(u, dtype=float)
    d = np.asarray(direction, dtype=float)
    acc = None
    for m, w in _W4:
        term = w * np.asarray(f(u + (m * h) * d))
        acc = term if acc is None else acc + term
    return acc / h


def partials4(f, u, h):
    """Fourth-order partial derivatives along every parameter axis.

    The step along axis ``k`` is ``h * max(1, |u_k|)``. Returns an array with
    the parameter index first.
    """
    u = np.asarray(u, dtype=float)
    steps = axis_steps(u, h)
    out = []
    for k in range(u.size):
        ek = np.zeros(u.size)
        ek[k] = 1.0
        out.append(directional4(f, u, ek, steps[k]))
    return np.stack(out, axis=0)
