"""Config-driven grid analysis and report emission.

Config files are flat ``key = value`` text with dotted keys; ``#`` starts a
comment. Lists are comma separated. Recognized keys::

    metric.name            catalog metric (see ``lightlike catalog``)
    metric.<param>         constructor parameter, e.g. metric.K = 1.0
    hypersurface.name      catalog hypersurface
    hypersurface.<param>   constructor parameter, e.g. hypersurface.a = 1.0
    grid.u<k>              lo, hi, count for patch parameter k (all required)
    outputs                subset of shape, invariants, sectional, screens, foci, connection
    screens.relative       weight-1 relative invariants, e.g. I1, rootI2
    screens.absolute       absolute invariants, e.g. lambda2/lambda3
    screens.triple         auto | on | off (four-dimensional triple construction)
    sectional.samples      random planes per point (default 3)
    foci.exponential       true | false (exponential-map images of the foci)
    gauge_seed             integer seed of the gauge-rerun checks (default 0)
    gauge.reruns           number of random gauges per screen (default 2)
    tolerances.tol_abs     totally-geodesic threshold factor (default 1e-7)
    tolerances.tol_rel     umbilicity threshold (default 1e-5)
    steps.frame / steps.invariant / steps.screen   stencil steps

The worker count for the per-point loop comes from ``LIGHTLIKE_WORKERS``
(default 1, serial).
"""

import csv
import hashlib
import inspect
import io
import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from . import __version__
from ._fd import StencilSteps
from .catalog import HYPERSURFACES, METRICS
from .errors import ConfigError, LightlikeError, NotLightlikeError, ScreenUnavailable
from .hypersurface import verify_lightlike
from .invariants import absolute_weights, parse_name
from .nullframe import GaugeField
from .surface import LightlikeSurface

OUTPUTS = ("shape", "invariants", "sectional", "screens", "foci", "connection")
WORKERS_ENV = "LIGHTLIKE_WORKERS"
CONVENTION = (
    "R^i_jkl = d_k Gamma^i_lj - d_l Gamma^i_kj + Gamma^i_km Gamma^m_lj - Gamma^i_lm Gamma^m_kj; "
    "R_ijkl = g_im R^m_jkl; de Sitter has R_ijkl = K (g_ik g_jl - g_il g_jk), K > 0; "
    "lambda_ab = g(e_a, nabla_{e_b} e1)"
)


@dataclass
class AnalysisConfig:
    metric: str
    metric_params: dict
    hypersurface: str
    hypersurface_params: dict
    grid: list  # [(lo, hi, count)] per patch parameter
    outputs: tuple = OUTPUTS
    relative: tuple = ()
    absolute: tuple = ()
    triple: str = "auto"
    sectional_samples: int = 3
    exponential: bool = False
    gauge_seed: int = 0
    gauge_reruns: int = 2
    tol_abs: float = 1e-7
    tol_rel: float = 1e-5
    steps: StencilSteps = field(default_factory=StencilSteps)
    source_text: str = ""

    def build(self):
        metric = METRICS[self.metric](**self.metric_params)
        patch = HYPERSURFACES[self.hypersurface](**self.hypersurface_params)
        return metric, patch

    def grid_points(self):
        axes = [np.linspace(lo, hi, int(k)) for lo, hi, k in self.grid]
        return [np.array(p) for p in product(*axes)]

    def digest(self):
        return hashlib.sha256(self.source_text.encode()).hexdigest()


# ---------------------------------------------------------------------------
# parsing


def _scalar(text):
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text.strip().strip('"').strip("'")


def _value(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return _scalar(parts[0])
    return [_scalar(p) for p in parts if p != ""]


def parse_config_text(text):
    """Parse ``key = value`` lines into a flat dict (later keys win)."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}", "empty key")
        out[key] = _value(val.strip())
    return out


def _as_list(value):
    return value if isinstance(value, list) else [value]


def _params(flat, prefix, ctor, path):
    params = {}
    sig = inspect.signature(ctor)
    for key, val in flat.items():
        if key.startswith(prefix + ".") and key != prefix + ".name":
            name = key[len(prefix) + 1:]
            if name not in sig.parameters:
                raise ConfigError(key, f"{path} {ctor.__name__!r} has no parameter {name!r}")
            default = sig.parameters[name].default
            if isinstance(default, tuple) or name in ("apex", "exprs", "param_bounds"):
                val = _as_list(val)
                if name == "param_bounds":
                    flat_vals = [float(v) for v in val]
                    val = [flat_vals[i:i + 2] for i in range(0, len(flat_vals), 2)]
                elif name == "exprs":
                    val = [str(v) for v in val]
                else:
                    val = tuple(float(v) for v in val) if name != "apex" else [float(v) for v in val]
            params[name] = val
    return params


def config_from_dict(flat, source_text=""):
    known_top = {"outputs", "gauge_seed"}
    known_dotted = {
        "screens.relative", "screens.absolute", "screens.triple", "sectional.samples",
        "foci.exponential", "gauge.reruns", "tolerances.tol_abs", "tolerances.tol_rel",
        "steps.frame", "steps.invariant", "steps.screen",
    }
    for key in flat:
        head = key.split(".", 1)[0]
        if key in known_top or key in known_dotted or head in ("metric", "hypersurface", "grid"):
            continue
        raise ConfigError(key, "unknown key")

    mname = flat.get("metric.name")
    if mname not in METRICS:
        raise ConfigError("metric.name", f"unknown metric {mname!r}; choose from {sorted(METRICS)}")
    hname = flat.get("hypersurface.name")
    if hname not in HYPERSURFACES:
        raise ConfigError("hypersurface.name", f"unknown hypersurface {hname!r}; choose from {sorted(HYPERSURFACES)}")
    mparams = _params(flat, "metric", METRICS[mname], "metric")
    hparams = _params(flat, "hypersurface", HYPERSURFACES[hname], "hypersurface")

    try:
        metric = METRICS[mname](**mparams)
    except (TypeError, ValueError) as exc:
        raise ConfigError("metric", str(exc)) from exc
    try:
        patch = HYPERSURFACES[hname](**hparams)
    except (TypeError, ValueError, SyntaxError) as exc:
        raise ConfigError("hypersurface", str(exc)) from exc
    except Exception as exc:  # sympy parse errors in custom expressions
        raise ConfigError("hypersurface.exprs", str(exc)) from exc
    if metric.dim != patch.ambient_dim:
        raise ConfigError("hypersurface", f"dimension {patch.ambient_dim} does not match metric dimension {metric.dim}")
    n = metric.dim

    grid = []
    for k in range(n - 1):
        key = f"grid.u{k + 1}"
        if key not in flat:
            raise ConfigError(key, "missing grid axis (lo, hi, count)")
        val = _as_list(flat[key])
        if len(val) != 3:
            raise ConfigError(key, "expected lo, hi, count")
        try:
            lo, hi, count = float(val[0]), float(val[1]), int(val[2])
        except (TypeError, ValueError) as exc:
            raise ConfigError(key, "lo, hi must be numbers and count an integer") from exc
        if count < 2:
            raise ConfigError(key, "sample count must be at least 2")
        blo, bhi = patch.param_bounds[k]
        if not (blo <= lo <= hi <= bhi):
            raise ConfigError(key, f"range [{lo}, {hi}] outside patch bounds [{blo}, {bhi}]")
        grid.append((lo, hi, count))
    extra = [k for k in flat if k.startswith("grid.") and k not in {f"grid.u{j + 1}" for j in range(n - 1)}]
    if extra:
        raise ConfigError(extra[0], "unknown grid axis")

    outputs = tuple(str(o) for o in _as_list(flat.get("outputs", list(OUTPUTS))))
    for o in outputs:
        if o not in OUTPUTS:
            raise ConfigError("outputs", f"unknown output {o!r}; choose from {list(OUTPUTS)}")

    m = n - 2
    relative = tuple(str(x) for x in _as_list(flat.get("screens.relative", [])) if str(x))
    for name in relative:
        try:
            kind, idx = parse_name(name, m)
        except ValueError as exc:
            raise ConfigError("screens.relative", str(exc)) from exc
        if kind in ("I", "It") and idx != 1:
            raise ConfigError("screens.relative", f"{name} has weight {idx}; use root{kind}{idx}")
    absolute = tuple(str(x) for x in _as_list(flat.get("screens.absolute", [])) if str(x))
    for spec in absolute:
        try:
            wn, wd = absolute_weights(spec, m)
        except ValueError as exc:
            raise ConfigError("screens.absolute", str(exc)) from exc
        if wn != wd:
            raise ConfigError("screens.absolute", f"{spec}: weights {wn} and {wd} differ")
    triple = flat.get("screens.triple", "auto")
    if isinstance(triple, bool):  # the scalar parser reads on/off as booleans
        triple = "on" if triple else "off"
    triple = str(triple)
    if triple not in ("auto", "on", "off"):
        raise ConfigError("screens.triple", "expected auto, on or off")
    if triple == "on" and n != 4:
        raise ConfigError("screens.triple", "the triple construction needs n = 4")

    def number(key, default, cast):
        try:
            return cast(flat.get(key, default))
        except (TypeError, ValueError) as exc:
            raise ConfigError(key, f"expected {cast.__name__}") from exc

    steps = StencilSteps(
        frame=number("steps.frame", StencilSteps.frame, float),
        invariant=number("steps.invariant", StencilSteps.invariant, float),
        screen=number("steps.screen", StencilSteps.screen, float),
    )
    exponential = flat.get("foci.exponential", False)
    if not isinstance(exponential, bool):
        raise ConfigError("foci.exponential", "expected true or false")
    return AnalysisConfig(
        metric=mname,
        metric_params=mparams,
        hypersurface=hname,
        hypersurface_params=hparams,
        grid=grid,
        outputs=outputs,
        relative=relative,
        absolute=absolute,
        triple=triple,
        sectional_samples=number("sectional.samples", 3, int),
        exponential=exponential,
        gauge_seed=number("gauge_seed", 0, int),
        gauge_reruns=number("gauge.reruns", 2, int),
        tol_abs=number("tolerances.tol_abs", 1e-7, float),
        tol_rel=number("tolerances.tol_rel", 1e-5, float),
        steps=steps,
        source_text=source_text,
    )


def load_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    return config_from_dict(parse_config_text(text), text)


# ---------------------------------------------------------------------------
# per-point analysis

_CTX = {}


def _context(config):
    key = config.digest() + repr(config.grid)
    if _CTX.get("key") != key:
        metric, patch = config.build()
        surface = LightlikeSurface(metric, patch, steps=config.steps, tol_abs=config.tol_abs, tol_rel=config.tol_rel)
        center = np.array([(lo + hi) / 2 for lo, hi, _ in config.grid])
        rng = np.random.default_rng(config.gauge_seed)
        gauged = [surface.with_gauge(GaugeField.random(rng, metric.dim, center)) for _ in range(config.gauge_reruns)]
        _CTX.clear()
        _CTX.update(key=key, surface=surface, gauged=gauged)
    return _CTX["surface"], _CTX["gauged"]


def _f(x):
    """JSON-friendly float (nan/inf become None)."""
    x = float(x)
    return x if np.isfinite(x) else None


def _vec(a):
    return [_f(x) for x in np.ravel(a)]


def _screen_record(surface, gauged, u, builder, want_connection):
    try:
        screen = builder(surface)
    except ScreenUnavailable as exc:
        return {"status": "unavailable", "reason": exc.reason, "detail": exc.detail}
    g = surface.frame(u).g
    P0 = screen.projector(g)
    resid = 0.0
    for other in gauged:
        try:
            P = builder(other).projector(g)
            resid = max(resid, float(np.linalg.norm(P - P0)))
        except ScreenUnavailable:
            resid = float("inf")
    rec = {
        "status": "ok",
        "method": screen.method,
        "L": _vec(screen.L_a),
        "K": _f(screen.K) if screen.K is not None else None,
        "gauge_residual": _f(resid),
        "basis": [_vec(v) for v in screen.screen_basis],
    }
    if "level_set_residual" in screen.diagnostics:
        rec["level_set_residual"] = _f(screen.diagnostics["level_set_residual"])
    if want_connection:
        try:
            surface.connection(u, screen)
            rec.update(
                nu_a=_vec(screen.nu_a),
                nu_ab=[_vec(r) for r in screen.nu_ab],
                integrable=screen.integrable,
                asymmetry=_f(screen.diagnostics["asymmetry"]),
            )
            for key in ("lambda_nu_antisymmetry", "curvature_antisymmetry"):
                if key in screen.diagnostics:
                    rec[key] = _f(screen.diagnostics[key])
        except LightlikeError as exc:
            rec.update(connection_error=str(exc))
    return rec


def analyze_point(config, index, u):
    surface, gauged = _context(config)
    u = np.asarray(u, dtype=float)
    n = surface.dim
    rec = {"index": index, "u": _vec(u), "x": _vec(surface.patch.point(u))}
    shape = surface.shape(u)
    cls = surface.classification(u)
    if "shape" in config.outputs:
        rec["shape"] = {
            "classification": cls.kind,
            "umbilic_lambda": _f(cls.umbilic_lambda) if cls.umbilic_lambda is not None else None,
            "norm": _f(cls.norm),
            "eigenvalues": _vec(shape.eigenvalues),
            "clusters": [[_f(v), int(k)] for v, k in shape.clusters],
            "lambda_ab": [_vec(r) for r in shape.lambda_ab],
            "symmetry_residual": _f(shape.symmetry_residual),
            "frame_residual": _f(shape.frame.residuals()),
        }
    if "invariants" in config.outputs:
        inv = surface.invariants(u)
        rec["invariants"] = {"I": _vec(inv.I), "It": _vec(inv.I_tilde), "newton_residual": _f(inv.newton_residual)}
        vals = {}
        for spec in config.absolute:
            try:
                vals[spec] = _f(surface.absolute(u, spec))
            except LightlikeError:
                vals[spec] = None
        rec["invariants"]["absolute"] = vals
    if "sectional" in config.outputs:
        rng = np.random.default_rng([config.gauge_seed, index])
        values = [surface.sectional(u, rng.normal(size=n - 2), p1=float(rng.normal()))
                  for _ in range(config.sectional_samples)]
        rec["sectional"] = {"values": _vec(values), "spread": _f(np.ptp(values) if values else 0.0)}
    if "screens" in config.outputs or "connection" in config.outputs:
        want = "connection" in config.outputs
        screens = {}
        for name in config.relative:
            screens[f"relative:{name}"] = _screen_record(
                surface, gauged, u, lambda s, name=name: s.relative_screen(u, name), want)
        for spec in config.absolute:
            screens[f"absolute:{spec}"] = _screen_record(
                surface, gauged, u, lambda s, spec=spec: s.absolute_screen(u, spec), want)
        if config.triple == "on" or (config.triple == "auto" and n == 4):
            for key in ("lambda2", "lambda3", "lambda2/lambda3"):
                screens[f"triple:{key}"] = _screen_record(
                    surface, gauged, u, lambda s, key=key: _triple_member(s, u, key), want)
            _, diag = surface.triple(u)
            rec["triple"] = {k: (_vec(v) if isinstance(v, np.ndarray) else (_f(v) if not isinstance(v, bool) else v))
                             for k, v in sorted(diag.items())}
        rec["screens"] = screens
    if "foci" in config.outputs:
        fs = surface.foci(u, exponential=config.exponential)
        rec["foci"] = [
            {
                "eigenvalue": _f(fs.eigenvalues[i]),
                "multiplicity": int(fs.multiplicities[i]),
                "at_infinity": bool(fs.at_infinity[i]),
                "s": _f(fs.s_values[i]),
                "point": _vec(fs.points[i]),
                "jacobi_det": _f(fs.jacobi_dets[i]),
                **({"exp_point": _vec(fs.exp_points[i])} if fs.exp_points is not None else {}),
            }
            for i in range(len(fs.eigenvalues))
        ]
    return rec


def _triple_member(surface, u, key):
    screens, _ = surface.triple(u)
    member = screens[key]
    if isinstance(member, ScreenUnavailable):
        raise member
    return member


def _point_task(args):
    config, index, u = args
    return analyze_point(config, index, u)


def worker_count():
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ConfigError(WORKERS_ENV, f"expected an integer, got {raw!r}") from exc


# ---------------------------------------------------------------------------
# report


@dataclass
class Report:
    config: AnalysisConfig
    records: list
    summary: dict
    provenance: dict

    def to_dict(self):
        return {"provenance": self.provenance, "summary": self.summary, "points": self.records}


def analyze(config, workers=None):
    """Run the configured pipeline over the grid and return a :class:`Report`."""
    metric, patch = config.build()
    points = config.grid_points()
    for i, u in enumerate(points):
        kind = verify_lightlike(patch, metric, u)
        if kind != "lightlike":
            raise NotLightlikeError(f"grid point {i} (u = {u.tolist()}) is not lightlike (induced metric: {kind})")
    workers = worker_count() if workers is None else workers
    tasks = [(config, i, u) for i, u in enumerate(points)]
    if workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_point_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        records = [_point_task(t) for t in tasks]
    return Report(config, records, summarize(records), {
        "config_sha256": config.digest(),
        "tool": "lightlike",
        "version": __version__,
        "convention": CONVENTION,
        "metric": {"name": config.metric, **config.metric_params},
        "hypersurface": {"name": config.hypersurface, **config.hypersurface_params},
        "gauge_seed": config.gauge_seed,
        "gauge_reruns": config.gauge_reruns,
    })


def summarize(records):
    out = {"points": len(records)}
    if records and "shape" in records[0]:
        out["classification"] = dict(sorted(Counter(r["shape"]["classification"] for r in records).items()))
    if records and "invariants" in records[0]:
        I = np.array([r["invariants"]["I"] for r in records], dtype=float)
        out["invariant_ranges"] = {f"I{p + 1}": [_f(np.min(I[:, p])), _f(np.max(I[:, p]))] for p in range(I.shape[1])}
    screens = {}
    for r in records:
        for name, s in r.get("screens", {}).items():
            entry = screens.setdefault(name, {"ok": 0, "unavailable": {}, "integrable": 0,
                                              "max_gauge_residual": 0.0})
            if s["status"] == "ok":
                entry["ok"] += 1
                entry["integrable"] += int(bool(s.get("integrable")))
                res = s["gauge_residual"]
                entry["max_gauge_residual"] = max(entry["max_gauge_residual"], float("inf") if res is None else res)
            else:
                entry["unavailable"][s["reason"]] = entry["unavailable"].get(s["reason"], 0) + 1
    for entry in screens.values():
        entry["max_gauge_residual"] = _f(entry["max_gauge_residual"])
        entry["unavailable"] = dict(sorted(entry["unavailable"].items()))
    if screens:
        out["screens"] = dict(sorted(screens.items()))
    if records and "foci" in records[0]:
        out["foci"] = {
            "finite": sum(1 for r in records for f in r["foci"] if not f["at_infinity"]),
            "at_infinity": sum(1 for r in records for f in r["foci"] if f["at_infinity"]),
        }
    return out


# ---------------------------------------------------------------------------
# emission


def fmt(x):
    """Deterministic text form of a number (``%.15g``; empty for missing)."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.15g" % float(x)


def table_columns(config, m):
    """Column registry of the ``table`` format, in order."""
    cols = ["index"] + [f"u{k + 1}" for k in range(m + 1)] + [f"x{k + 1}" for k in range(m + 2)]
    if "shape" in config.outputs:
        cols += ["classification", "umbilic_lambda", "lambda_norm", "symmetry_residual"]
        cols += [f"lambda{a + 2}" for a in range(m)]
    if "invariants" in config.outputs:
        cols += [f"I{p + 1}" for p in range(m)] + [f"It{p + 1}" for p in range(m)]
        cols += [f"J[{spec}]" for spec in config.absolute]
    if "sectional" in config.outputs:
        cols += ["K_N_max", "K_N_spread"]
    names = []
    if "screens" in config.outputs or "connection" in config.outputs:
        names = [f"relative:{n}" for n in config.relative] + [f"absolute:{s}" for s in config.absolute]
        if config.triple == "on" or (config.triple == "auto" and m == 2):
            names += ["triple:lambda2", "triple:lambda3", "triple:lambda2/lambda3"]
        for name in names:
            cols += [f"{name}:status", f"{name}:reason", f"{name}:gauge_residual"]
            cols += [f"{name}:L{a + 2}" for a in range(m)]
            if "connection" in config.outputs:
                cols += [f"{name}:integrable", f"{name}:asymmetry"]
    if "foci" in config.outputs:
        cols += ["foci_finite", "foci_at_infinity"]
        for a in range(m):
            cols += [f"focus{a + 1}:s", f"focus{a + 1}:multiplicity"] + [f"focus{a + 1}:x{k + 1}" for k in range(m + 2)]
    return cols, names


def _table_row(rec, config, m, names):
    row = [rec["index"], *rec["u"], *rec["x"]]
    if "shape" in config.outputs:
        s = rec["shape"]
        row += [s["classification"], s["umbilic_lambda"], s["norm"], s["symmetry_residual"], *s["eigenvalues"]]
    if "invariants" in config.outputs:
        inv = rec["invariants"]
        row += [*inv["I"], *inv["It"]] + [inv["absolute"].get(spec) for spec in config.absolute]
    if "sectional" in config.outputs:
        vals = rec["sectional"]["values"]
        row += [max((abs(v) for v in vals), default=0.0), rec["sectional"]["spread"]]
    for name in names:
        s = rec["screens"][name]
        ok = s["status"] == "ok"
        row += [s["status"], s.get("reason", ""), s.get("gauge_residual")]
        row += s["L"] if ok else [None] * m
        if "connection" in config.outputs:
            row += [s.get("integrable"), s.get("asymmetry")]
    if "foci" in config.outputs:
        foci = rec["foci"]
        row += [sum(f["multiplicity"] for f in foci if not f["at_infinity"]),
                sum(f["multiplicity"] for f in foci if f["at_infinity"])]
        for a in range(m):
            if a < len(foci):
                f = foci[a]
                row += [f["s"], f["multiplicity"], *f["point"]]
            else:
                row += [None, None] + [None] * (m + 2)
    return row


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in r])
    return buf.getvalue()


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def emit(report, fmt_name, out_dir):
    """Write ``report`` under ``out_dir``; returns the list of written paths.

    ``table``: ``report.csv``; ``structured``: ``report.json``; ``plotdata``:
    ``plotdata/<quantity>.csv``.
    """
    out_dir = Path(out_dir)
    config = report.config
    m = len(config.grid) - 1
    written = []
    try:
        if fmt_name == "table":
            cols, names = table_columns(config, m)
            rows = [_table_row(r, config, m, names) for r in report.records]
            path = out_dir / "report.csv"
            _write(path, _csv_text(cols, rows))
            written.append(path)
        elif fmt_name == "structured":
            path = out_dir / "report.json"
            _write(path, json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
            written.append(path)
        elif fmt_name == "plotdata":
            written += _emit_plotdata(report, out_dir / "plotdata", m)
        else:
            raise ValueError(f"unknown format {fmt_name!r}")
    except OSError as exc:
        raise OSError(f"cannot write report to {out_dir}: {exc}") from exc
    return written


def _emit_plotdata(report, root, m):
    config = report.config
    recs = report.records
    files = {}
    coords = [f"u{k + 1}" for k in range(m + 1)] + [f"x{k + 1}" for k in range(m + 2)]
    if "shape" in config.outputs:
        files["eigenvalues.csv"] = (
            ["index", *coords] + [f"lambda{a + 2}" for a in range(m)],
            [[r["index"], *r["u"], *r["x"], *r["shape"]["eigenvalues"]] for r in recs],
        )
    if "invariants" in config.outputs:
        files["invariants.csv"] = (
            ["index", *coords] + [f"I{p + 1}" for p in range(m)] + [f"It{p + 1}" for p in range(m)],
            [[r["index"], *r["u"], *r["x"], *r["invariants"]["I"], *r["invariants"]["It"]] for r in recs],
        )
    if "sectional" in config.outputs:
        files["sectional.csv"] = (
            ["index", "sample", "K_N"],
            [[r["index"], j, v] for r in recs for j, v in enumerate(r["sectional"]["values"])],
        )
    if "foci" in config.outputs:
        files["foci.csv"] = (
            ["index", "sheet", "multiplicity", "s"] + [f"F{k + 1}" for k in range(m + 2)],
            [[r["index"], j, f["multiplicity"], f["s"], *f["point"]]
             for r in recs for j, f in enumerate(r["foci"]) if not f["at_infinity"]],
        )
    if any("screens" in r for r in recs):
        rows = []
        for r in recs:
            for name, s in sorted(r["screens"].items()):
                if s["status"] == "ok":
                    rows.append([r["index"], name, s["gauge_residual"], *s["L"],
                                 s.get("integrable"), s.get("asymmetry")])
        files["screens.csv"] = (
            ["index", "screen", "gauge_residual"] + [f"L{a + 2}" for a in range(m)] + ["integrable", "asymmetry"],
            rows,
        )
    written = []
    for name, (header, rows) in sorted(files.items()):
        path = root / name
        _write(path, _csv_text(header, rows))
        written.append(path)
    return written
