"""Command line interface: ``catalog``, ``analyze`` and ``selftest``.

Exit codes: 0 success, 1 failed self-test, 2 configuration error,
3 geometry error (for example a non-lightlike grid point), 4 I/O error.
"""

import argparse
import json
import sys

from .errors import ConfigError, LightlikeError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_GEOMETRY, EXIT_IO = 0, 1, 2, 3, 4


def _cmd_catalog(args):
    from .catalog import catalog

    entries = catalog()
    if args.json:
        print(json.dumps(entries, sort_keys=True, indent=2, default=str))
        return EXIT_OK
    for e in entries:
        params = ", ".join(f"{k}={v}" for k, v in e["params"].items())
        print(f"{e['kind']:<13} {e['name']:<26} {params}")
    return EXIT_OK


def _cmd_analyze(args):
    from .analysis import analyze, emit, load_config

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = analyze(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LightlikeError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    try:
        for path in emit(report, args.format, args.out):
            print(path)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _cmd_selftest(args):
    from .acceptance import run_all

    results = run_all(only=args.only, stream=sys.stdout)
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_FAIL


def build_parser():
    p = argparse.ArgumentParser(prog="lightlike", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list built-in metrics and hypersurfaces")
    c.add_argument("--json", action="store_true", help="print the catalog as JSON")
    c.set_defaults(func=_cmd_catalog)

    a = sub.add_parser("analyze", help="run a config-driven grid analysis")
    a.add_argument("--config", required=True, help="flat key = value config file")
    a.add_argument("--out", required=True, help="output directory")
    a.add_argument("--format", choices=("table", "structured", "plotdata"), default="table")
    a.set_defaults(func=_cmd_analyze)

    s = sub.add_parser("selftest", help="run the acceptance checks")
    s.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    s.set_defaults(func=_cmd_selftest)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
