import numpy as np
import pytest
import sympy as sp

from lightlike import catalog as C


def sympy_riemann(g_expr, coords, point):
    """Independent symbolic oracle: ``(Gamma, R_down)`` evaluated at ``point``.

    Uses ``R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + Gamma^i_{km} Gamma^m_{lj}
    - Gamma^i_{lm} Gamma^m_{kj}``.
    """
    n = len(coords)
    g = sp.Matrix(g_expr)
    ginv = g.inv()
    gam = [[[sp.simplify(sum(ginv[i, m] * (sp.diff(g[m, k], coords[j]) + sp.diff(g[m, j], coords[k])
                                           - sp.diff(g[j, k], coords[m])) for m in range(n)) / 2)
             for k in range(n)] for j in range(n)] for i in range(n)]
    subs = dict(zip(coords, point))
    r_up = np.zeros((n,) * 4)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    expr = (sp.diff(gam[i][l][j], coords[k]) - sp.diff(gam[i][k][j], coords[l])
                            + sum(gam[i][k][m] * gam[m][l][j] - gam[i][l][m] * gam[m][k][j] for m in range(n)))
                    r_up[i, j, k, l] = float(expr.subs(subs))
    gnum = np.array(g.subs(subs), dtype=float)
    gam_num = np.array([[[float(gam[i][j][k].subs(subs)) for k in range(n)] for j in range(n)] for i in range(n)])
    return gam_num, np.einsum("im,mjkl->ijkl", gnum, r_up)


@pytest.fixture(scope="session")
def mink():
    return C.minkowski(4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    lines = getattr(terminalreporter.config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
