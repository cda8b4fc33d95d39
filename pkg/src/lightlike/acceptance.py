"""Acceptance checks, shared by ``lightlike selftest`` and ``tests/test_acceptance.py``.

Each ``criterion_<k>`` returns ``(title, passed, detail)``. Details contain
only computed numbers (no timings), so the self-test output is reproducible.
"""

import io
import sys
import tempfile
from contextlib import redirect_stdout
from pathlib import Path

import numpy as np

from . import catalog as C
from .errors import ScreenUnavailable
from .geodesics import integrate_isotropic_geodesic
from .invariants import normalized_e1
from .nullframe import GaugeField, GaugeTransform
from .surface import LightlikeSurface
from .tensorcalc import constant_curvature_riemann, riemann

SEED = 20240611


def _interior_points(metric, count, rng, shrink=0.8):
    lo, hi = metric.chart_bounds[:, 0], metric.chart_bounds[:, 1]
    mid, half = (lo + hi) / 2, (hi - lo) / 2 * shrink
    return [mid + half * rng.uniform(-1, 1, size=metric.dim) for _ in range(count)]


def _grid(bounds, counts):
    axes = [np.linspace(lo, hi, k) for (lo, hi), k in zip(bounds, counts)]
    return [np.array(p) for p in np.array(np.meshgrid(*axes, indexing="ij")).reshape(len(axes), -1).T]


def _const_gauge(c, n):
    return GaugeField.constant(GaugeTransform(c, np.eye(n - 2), np.zeros(n - 2)), n)


def _rel(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def catalog_metrics():
    return [
        C.minkowski(4),
        C.de_sitter(4, 1.0),
        C.anti_de_sitter(4, -1.0),
        C.eddington_finkelstein(1.0),
        C.conformally_flat(4, 0.2),
    ]


# ---------------------------------------------------------------------------


def criterion_1():
    rng = np.random.default_rng(SEED)
    metric = C.de_sitter(4, 1.0).finite_difference_only()
    worst = 0.0
    for x in _interior_points(metric, 25, rng, shrink=0.6):
        R = riemann(metric, x).riemann_down
        Rc = constant_curvature_riemann(1.0, metric, x).riemann_down
        worst = max(worst, _rel(R, Rc))
    return "constant-curvature oracle (de Sitter, K=1, finite differences)", worst < 1e-5, \
        f"max relative error {worst:.3e} over 25 points (< 1e-5)"


def criterion_2():
    rng = np.random.default_rng(SEED + 2)
    worst = {}
    for metric in catalog_metrics():
        w = 0.0
        for x in _interior_points(metric, 25, rng):
            w = max(w, *riemann(metric, x).symmetry_residuals().values())
        worst[metric.name] = w
    ok = all(v < 1e-6 for v in worst.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    return "curvature symmetries on all catalog metrics", ok, f"max residuals: {detail} (< 1e-6)"


def criterion_3():
    mk = C.minkowski(4)
    plane = LightlikeSurface(mk, C.null_hyperplane(4))
    pts = _grid(plane.patch.param_bounds * 0.8, (3, 3, 3))  # bounds are symmetric about 0
    max_norm = 0.0
    available = []
    for u in pts:
        sh = plane.shape(u)
        max_norm = max(max_norm, float(np.linalg.norm(sh.lambda_ab)))
        for name in ("I1", "rootI2", "lambda2", "lambda3"):
            try:
                plane.relative_screen(u, name)
                available.append(name)
            except ScreenUnavailable as exc:
                if exc.reason != "totally_geodesic":
                    available.append(f"{name}:{exc.reason}")
        for spec in ("lambda2/lambda3", "I1^2/It2"):
            try:
                plane.absolute_screen(u, spec)
                available.append(spec)
            except ScreenUnavailable as exc:
                if exc.reason != "totally_geodesic":
                    available.append(f"{spec}:{exc.reason}")
        screens, _ = plane.triple(u)
        available += [k for k, v in screens.items() if not isinstance(v, ScreenUnavailable)]
    horizon = LightlikeSurface(C.eddington_finkelstein(1.0), C.schwarzschild_horizon(1.0))
    hb = horizon.patch.param_bounds
    hmid, hhalf = hb.mean(axis=1), (hb[:, 1] - hb[:, 0]) / 2 * 0.8
    hpts = _grid(np.stack([hmid - hhalf, hmid + hhalf], axis=1), (3, 3, 3))
    kinds = set()
    h_norm = 0.0
    for u in hpts:
        kinds.add(horizon.classification(u).kind)
        h_norm = max(h_norm, float(np.linalg.norm(horizon.shape(u).lambda_ab)))
    ok = max_norm < 1e-8 and not available and kinds == {"totally_geodesic"} and h_norm < 1e-5
    return "totally geodesic fixtures (null hyperplane, Schwarzschild horizon)", ok, (
        f"hyperplane |lambda| max {max_norm:.1e} (< 1e-8), screens available: {len(available)}; "
        f"horizon classes {sorted(kinds)}, |lambda| max {h_norm:.1e} (< 1e-5)"
    )


def criterion_4():
    mk = C.minkowski(4)
    base = LightlikeSurface(mk, C.light_cone(4))
    pts = _grid([[0.3, 1.9], [0.4, 2.7], [-3.0, 3.0]], (3, 3, 3))
    lam_err, f_err, bad_count, kinds = 0.0, 0.0, 0, set()
    for c in (0.5, 1.0, 3.0):
        surf = base if c == 1.0 else base.with_gauge(_const_gauge(c, 4))
        for u in pts:
            cls = surf.classification(u)
            kinds.add(cls.kind)
            if cls.kind != "totally_umbilical":
                continue
            lam_err = max(lam_err, abs(cls.umbilic_lambda - c / u[0]) / (c / u[0]))
            fs = surf.foci(u)
            if fs.count != 2 or len(fs.multiplicities) != 1 or fs.at_infinity.any():
                bad_count += 1
            f_err = max(f_err, float(np.max(np.abs(fs.points - np.zeros(4)))))
    ok = kinds == {"totally_umbilical"} and lam_err < 1e-6 and bad_count == 0 and f_err < 1e-8
    return "totally umbilical light cone: lambda = 1/s, single focus at the apex", ok, (
        f"classes {sorted(kinds)}, lambda rel. error {lam_err:.1e} (< 1e-6), "
        f"bad focus counts {bad_count}, |F - apex| max {f_err:.1e} (< 1e-8), c in (0.5, 1, 3)"
    )


def criterion_5():
    rng = np.random.default_rng(SEED + 5)
    cases = [
        (C.minkowski(4), C.light_cone(4)),
        (C.minkowski(4), C.null_hyperplane(4)),
        (C.de_sitter(4, 1.0), C.light_cone(4, s_range=(0.25, 1.0))),
        (C.anti_de_sitter(4, -1.0), C.light_cone(4, s_range=(0.2, 0.6))),
    ]
    worst = 0.0
    for metric, patch in cases:
        surf = LightlikeSurface(metric, patch)
        for u in _grid(patch.param_bounds * np.array([0.9, 0.9]), (2, 3, 3)):
            for _ in range(10):
                worst = max(worst, abs(surf.sectional(u, rng.normal(size=2), p1=float(rng.normal()))))
    # quadratic dependence on the isotropic vector, where K_N does not vanish
    curved = LightlikeSurface(C.conformally_flat(4, 0.2), C.ellipsoid_null_congruence())
    scale_err = 0.0
    for c in (0.5, 3.0):
        g = curved.with_gauge(_const_gauge(c, 4))
        for u in _grid(curved.patch.param_bounds, (2, 2, 2)):
            p = rng.normal(size=2)
            scale_err = max(scale_err, _rel(g.sectional(u, p), c * c * curved.sectional(u, p)))
    ok = worst < 1e-6 and scale_err < 1e-6
    return "isotropic sectional curvature vanishes on constant-curvature metrics, scales as c^2", ok, (
        f"max |K_N| {worst:.1e} (< 1e-6), c^2 scaling rel. error {scale_err:.1e} (< 1e-6)"
    )


def criterion_6():
    rng = np.random.default_rng(SEED + 6)
    mk = C.minkowski(4)
    ell = LightlikeSurface(mk, C.ellipsoid_null_congruence(1.0, 1.3, 1.7))
    cone = LightlikeSurface(mk, C.light_cone(4))
    pts = _grid(ell.patch.param_bounds, (2, 2, 2))
    cpts = _grid([[0.4, 1.6], [0.5, 2.5], [-2.0, 2.0]], (2, 2, 2))
    inv_err = lam_err = e1_err = abs_err = 0.0
    for c in (0.5, 3.0):
        g_ell = ell.with_gauge(_const_gauge(c, 4))
        g_cone = cone.with_gauge(_const_gauge(c, 4))
        for u in pts:
            i0, i1 = ell.invariants(u), g_ell.invariants(u)
            inv_err = max(inv_err, _rel(i1.I, c ** np.arange(1, 3) * i0.I), _rel(i1.I_tilde, c ** np.arange(1, 3) * i0.I_tilde))
            lam_err = max(lam_err, _rel(i1.eigenvalues, c * i0.eigenvalues))
        for surf0, surf1, grid in ((ell, g_ell, pts), (cone, g_cone, cpts)):
            for u in grid:
                a = normalized_e1(surf0.frame(u), surf0.invariant(u, "I1"))
                b = normalized_e1(surf1.frame(u), surf1.invariant(u, "I1"))
                e1_err = max(e1_err, _rel(b, a))
    center = ell.patch.param_bounds.mean(axis=1)
    specs = ("lambda2/lambda3", "I1^2/It2", "I2/I1^2", "rootI2/lambda3")
    for _ in range(20):
        g = ell.with_gauge(GaugeField.random(rng, 4, center))
        for u in pts:
            for spec in specs:
                abs_err = max(abs_err, _rel(g.absolute(u, spec), ell.absolute(u, spec)))
    ok = inv_err < 1e-6 and lam_err < 1e-6 and e1_err < 1e-6 and abs_err < 1e-6
    return "weight laws of invariants and gauge invariance of absolute invariants", ok, (
        f"I_p rel. error {inv_err:.1e}, lambda_a {lam_err:.1e}, normalized e1 {e1_err:.1e}, "
        f"absolute invariants over 20 gauges {abs_err:.1e} (all < 1e-6)"
    )


def criterion_7():
    rng = np.random.default_rng(SEED + 7)
    ell = LightlikeSurface(C.minkowski(4), C.ellipsoid_null_congruence(1.0, 1.3, 1.7))
    bounds = ell.patch.param_bounds
    pts = [bounds.mean(axis=1), bounds[:, 0] + 0.25 * (bounds[:, 1] - bounds[:, 0]),
           bounds[:, 0] + 0.75 * (bounds[:, 1] - bounds[:, 0])]
    builders = {
        "relative I1": lambda s, u: s.relative_screen(u, "I1"),
        "relative rootI2": lambda s, u: s.relative_screen(u, "rootI2"),
        "absolute lambda2/lambda3": lambda s, u: s.absolute_screen(u, "lambda2/lambda3"),
    }
    gauged = [ell.with_gauge(GaugeField.random(rng, 4, bounds.mean(axis=1))) for _ in range(20)]
    worst = {k: 0.0 for k in builders}
    level, integrable = 0.0, True
    for u in pts:
        g = ell.frame(u).g
        for name, build in builders.items():
            P0 = build(ell, u).projector(g)
            for other in gauged:
                worst[name] = max(worst[name], float(np.linalg.norm(build(other, u).projector(g) - P0)))
        screen = ell.connection(u, builders["absolute lambda2/lambda3"](ell, u))
        integrable &= bool(screen.integrable)
        level = max(level, screen.diagnostics["level_set_residual"])
    ok = all(v < 1e-5 for v in worst.values()) and integrable and level < 1e-6
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    return "intrinsic screens on the ellipsoid congruence (20 random gauges)", ok, (
        f"projector spread: {detail} (< 1e-5); absolute screen integrable={integrable}, "
        f"level-set residual {level:.1e} (< 1e-6)"
    )


def criterion_8():
    ell = LightlikeSurface(C.minkowski(4), C.ellipsoid_null_congruence(1.0, 1.3, 1.7))
    pts = _grid(ell.patch.param_bounds, (2, 2, 2))
    forced, reasons, produced = [], set(), 0
    for u in pts:
        lam = ell.shape(u).eigenvalues
        for k in lam:
            try:
                ell.relative_screen(u, "I1", force_K=float(k))
                forced.append("built")
            except ScreenUnavailable as exc:
                forced.append(exc.reason)
        screens, _ = ell.triple(u)
        for key in ("lambda2", "lambda3"):
            v = screens[key]
            reasons.add(v.reason if isinstance(v, ScreenUnavailable) else "built")
        produced += int(not isinstance(screens["lambda2/lambda3"], ScreenUnavailable))
    ok = set(forced) == {"K_is_eigenvalue"} and reasons == {"K_proportional_to_eigenvalues"} and produced == len(pts)
    return "relative-screen hypothesis boundary (forced eigenvalue, flat triple)", ok, (
        f"forced K: {sorted(set(forced))}; flat triple relative screens: {sorted(reasons)}; "
        f"lambda2/lambda3 screen built at {produced}/{len(pts)} points"
    )


def _null_vector(g, spatial):
    """A future null vector ``T + S`` built from the eigenbasis of ``g``."""
    w, q = np.linalg.eigh(g)
    t = q[:, 0] / np.sqrt(-w[0])
    s = q[:, 1:] @ (spatial / np.sqrt(w[1:]))
    s = s / np.sqrt(s @ g @ s)
    return t + s


def criterion_9():
    rng = np.random.default_rng(SEED + 9)
    drift = {}
    for metric in catalog_metrics():
        worst = 0.0
        for x0 in _interior_points(metric, 3, rng, shrink=0.3):
            if metric.name == "eddington_finkelstein":
                x0 = np.array([0.0, 5.0, 1.2, 0.3]) + 0.1 * rng.normal(size=4)
            v0 = _null_vector(metric.g(x0), rng.normal(size=3))
            v0 *= 0.05 / np.linalg.norm(v0)
            rec = integrate_isotropic_geodesic(metric, x0, v0, 5.0, steps=50)
            # drift relative to |v0|^2 so the small launch speed does not flatter the result
            worst = max(worst, rec.null_drift / float(v0 @ v0) if not rec.exited else np.inf)
        drift[metric.name] = worst
    mk = C.minkowski(4)
    line = 0.0
    for _ in range(5):
        x0 = rng.uniform(-1, 1, 4)
        v0 = np.append(rng.normal(size=3), 0.0)
        v0[3] = np.linalg.norm(v0[:3])
        rec = integrate_isotropic_geodesic(mk, x0, v0, 5.0, steps=50)
        line = max(line, float(np.max(np.abs(rec.x - (x0 + np.outer(rec.s, v0))))))
    cone = LightlikeSurface(mk, C.light_cone(4))
    on_cone = 0.0
    for u in _grid([[0.3, 1.0], [0.5, 2.5], [-2.0, 2.0]], (2, 2, 2)):
        fr = cone.frame(u)
        rec = integrate_isotropic_geodesic(
            mk, fr.point, fr.e1, 5.0, steps=50,
            surface_residual=lambda x: abs(np.linalg.norm(x[:3]) - abs(x[3])),
        )
        on_cone = max(on_cone, float(np.max(rec.on_surface_residual)))
    ok = all(v < 1e-7 for v in drift.values()) and line < 1e-10 and on_cone < 1e-8
    detail = ", ".join(f"{k} {v:.1e}" for k, v in drift.items())
    return "geodesic contracts (null drift, straight lines, cone generators)", ok, (
        f"relative null drift over s in [0, 5]: {detail} (< 1e-7); line error {line:.1e} (< 1e-10); "
        f"cone residual {on_cone:.1e} (< 1e-8)"
    )


def criterion_10():
    rng = np.random.default_rng(SEED + 10)
    patch = C.light_cone(4, s_range=(0.25, 1.0))
    worst = 0.0
    for metric in (C.de_sitter(4, 1.0), C.de_sitter(4, 0.5)):
        base = LightlikeSurface(metric, patch)
        center = patch.param_bounds.mean(axis=1)
        surfaces = [base] + [base.with_gauge(GaugeField.random(rng, 4, center)) for _ in range(2)]
        for surf in surfaces:
            for u in _grid([[0.35, 0.9], [0.6, 2.4], [-2.0, 2.0]], (2, 2, 2)):
                worst = max(worst, float(np.max(np.abs(surf.riccati_residual(u, include_curvature=False)))))
    ok = worst < 1e-4
    return "generator derivative of lambda_ab on de Sitter light cones", ok, (
        f"max |(nabla lambda - lambda omega_1^1)(e1) + lambda g^-1 lambda| {worst:.1e} (< 1e-4)"
    )


_DETERMINISM_CONFIG = """\
metric.name = minkowski
hypersurface.name = ellipsoid_null_congruence
grid.u1 = 0.0, 0.3, 2
grid.u2 = 0.5, 0.9, 2
grid.u3 = 0.4, 0.8, 2
screens.relative = I1
screens.absolute = lambda2/lambda3
outputs = shape, invariants, sectional, screens, foci
gauge_seed = 11
gauge.reruns = 1
"""


def criterion_11():
    from .analysis import analyze, config_from_dict, emit, parse_config_text

    digests = []
    with tempfile.TemporaryDirectory() as tmp:
        for run in range(2):
            config = config_from_dict(parse_config_text(_DETERMINISM_CONFIG), _DETERMINISM_CONFIG)
            report = analyze(config, workers=1 + run)
            files = []
            for fmt_name in ("table", "structured", "plotdata"):
                files += emit(report, fmt_name, Path(tmp) / f"run{run}")
            digests.append({p.relative_to(Path(tmp) / f"run{run}"): p.read_bytes() for p in files})
    same_reports = digests[0] == digests[1]
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        with redirect_stdout(buf):
            run_all(only=[1, 8], stream=sys.stdout)
        outs.append(buf.getvalue())
    same_selftest = outs[0] == outs[1]
    ok = same_reports and same_selftest and len(digests[0]) >= 3
    return "determinism of analyze/emit and selftest output", ok, (
        f"{len(digests[0])} report files identical across serial/parallel reruns: {same_reports}; "
        f"selftest output identical: {same_selftest}"
    )


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 12)}


def format_line(k, title, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {k:>2}: {title} -- {detail}"


def run_criterion(k):
    title, ok, detail = CRITERIA[k]()
    return title, bool(ok), detail


def run_all(only=None, stream=None):
    results = []
    for k in sorted(only or CRITERIA):
        title, ok, detail = run_criterion(k)
        results.append((title, ok, detail))
        if stream is not None:
            print(format_line(k, title, ok, detail), file=stream, flush=True)
    return results
