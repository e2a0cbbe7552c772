"""Command-line front end.

Subcommands:
  eval     print one exact value (kappa, racah1, racahN)
  table    write a table: polynomials, a generator matrix, or the connection matrix
  matrix   write the JSON form of one generator C_A
  verify   run verification suites and write a JSON (or CSV) report
  report   summarize a report written by ``verify``

Exit codes: 0 when everything passes, 1 when a relation fails, 2 for usage,
configuration, genericity or pole errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .algebra import GeneratorTable, LabelSet
from .errors import PoleError, RacahError
from .grid import SimplexGrid, racah_table
from .orthogonality import connection_matrix
from .polynomials import ParameterSet, kappa, racah_multivariate, racah_univariate
from .report import merge_reports
from .scalar import format_rational, parse_rational
from .suites import MODES, SUITES, applicable, default_suites, run_suites

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_CONFIG_KEYS = ("n", "N", "beta", "mode", "suites", "output", "format", "threads")


class ConfigError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    text = text.strip()
    return [int(t) for t in text.split(",")] if text else []


def _beta_list(text) -> list:
    if isinstance(text, str):
        return [parse_rational(t) for t in text.split(",")]
    return [parse_rational(str(t)) for t in text]


def load_config(args: argparse.Namespace) -> dict:
    """File values first, then any flag given on the command line."""
    cfg = {"mode": "exact", "format": "json", "threads": 1}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        unknown = sorted(set(data) - set(_CONFIG_KEYS))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        cfg.update(data)
    env_threads = os.environ.get("RACAH_THREADS")
    if env_threads:
        cfg["threads"] = env_threads
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    try:
        cfg["threads"] = max(1, int(cfg["threads"]))
    except ValueError as exc:
        raise ConfigError(f"threads must be an integer, got {cfg['threads']!r}") from exc
    if cfg["mode"] not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}")
    if cfg["format"] not in ("json", "csv"):
        raise ConfigError("format must be json or csv")
    return cfg


def params_from_config(cfg: dict) -> ParameterSet:
    missing = [k for k in ("n", "N", "beta") if cfg.get(k) is None]
    if missing:
        raise ConfigError(f"missing parameters: {', '.join(missing)}")
    try:
        params = ParameterSet.from_literals(cfg["n"], cfg["N"], _beta_list(cfg["beta"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return params.require_generic()


def _write(text: str, output) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(output).write_text(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {output}: {exc}") from exc


# -- eval ----------------------------------------------------------------------


def cmd_eval(args) -> int:
    if args.kind == "kappa":
        if len(args.values) != 2:
            raise ConfigError("eval kappa takes X BETA")
        value = kappa(*(parse_rational(v) for v in args.values))
    elif args.kind == "racah1":
        if len(args.values) != 6:
            raise ConfigError("eval racah1 takes M ALPHA BETA GAMMA DELTA X")
        m = int(args.values[0])
        value = racah_univariate(m, *(parse_rational(v) for v in args.values[1:]))
    else:
        cfg = load_config(args)
        params = params_from_config(cfg)
        if args.k is None or args.x is None:
            raise ConfigError("eval racahN needs --k and --x")
        p = args.p if args.p is not None else params.rank
        value = racah_multivariate(p, _int_list(args.k), _int_list(args.x), params)
    print(format_rational(value))
    return EXIT_OK


# -- matrix / table --------------------------------------------------------------


def _generator(params: ParameterSet, label: str):
    A = LabelSet.parse(label)
    return A, GeneratorTable(params).get(A)


def cmd_matrix(args) -> int:
    params = params_from_config(load_config(args))
    _, M = _generator(params, args.label)
    _write(M.to_json() + "\n", args.output)
    return EXIT_OK


def _point_label(pt) -> str:
    return "(" + ",".join(str(v) for v in pt) + ")"


def _exact_csv(row_labels, col_labels, entries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row\\col"] + [_point_label(c) for c in col_labels])
    for r, label in enumerate(row_labels):
        w.writerow([_point_label(label)] + [format_rational(v) for v in entries[r]])
    return buf.getvalue()


def cmd_table(args) -> int:
    cfg = load_config(args)
    params = params_from_config(cfg)
    grid = SimplexGrid(params)
    fmt = cfg["format"]
    if args.what == "polynomials":
        ks, R = racah_table(grid)
        if fmt == "csv":
            text = _exact_csv(ks, grid.points, R)
        else:
            text = json.dumps(
                {
                    "grid": params.to_dict(),
                    "k": [list(k) for k in ks],
                    "x": [list(x) for x in grid.points],
                    "values": [[format_rational(v) for v in row] for row in R],
                },
                sort_keys=True,
                separators=(",", ":"),
            ) + "\n"
    elif args.what == "matrix":
        if not args.label:
            raise ConfigError("table matrix needs --label")
        _, M = _generator(params, args.label)
        text = _exact_csv(grid.points, grid.points, M.entries) if fmt == "csv" else M.to_json() + "\n"
    else:
        cm = connection_matrix(params)
        if fmt == "csv":
            text = cm.to_csv()
        else:
            text = json.dumps(
                {
                    "grid": params.to_dict(),
                    "k": [list(k) for k in cm.ks],
                    "x": [list(x) for x in grid.points],
                    "values": [[float(f"{v:.17g}") for v in row] for row in cm.values],
                },
                sort_keys=True,
                separators=(",", ":"),
            ) + "\n"
    _write(text, cfg.get("output"))
    return EXIT_OK


# -- verify / report -------------------------------------------------------------


def _report_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "name", "operands", "status"])
    for rel in doc["relations"]:
        w.writerow([rel["suite"], rel["name"], " ".join(map(str, rel["operands"])), rel["status"]])
    return buf.getvalue()


def cmd_verify(args) -> int:
    cfg = load_config(args)
    params = params_from_config(cfg)
    suites = cfg.get("suites")
    if suites is None or suites == "all":
        suites = default_suites(params)
    elif isinstance(suites, str):
        suites = [s.strip() for s in suites.split(",") if s.strip()]
    if "spectrum-full" in suites:
        suites = [s for s in suites if s != "spectrum-full"] + ["spectrum"]
    for s in suites:
        reason = applicable(s, params)
        if reason is not None:
            raise ConfigError(reason)
    suites = sorted(set(suites))
    reports = run_suites(params, suites, cfg["mode"], cfg["threads"])
    config_record = {**params.to_dict(), "mode": cfg["mode"], "suites": suites}
    doc = merge_reports(config_record, reports)
    if cfg["format"] == "csv":
        text = _report_csv(doc)
    else:
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    _write(text, cfg.get("output"))
    s = doc["summary"]
    print(f"{s['passed']}/{s['total']} relations pass", file=sys.stderr)
    return EXIT_OK if s["failed"] == 0 else EXIT_FAIL


def cmd_report(args) -> int:
    try:
        doc = json.loads(Path(args.path).read_text())
        relations, summary = doc["relations"], doc["summary"]
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise ConfigError(f"cannot read report {args.path}: {exc}") from exc
    cfg = doc.get("config", {})
    print(f"n={cfg.get('n')} N={cfg.get('N')} beta={','.join(cfg.get('beta', []))}")
    per_suite: dict[str, list[int]] = {}
    for rel in relations:
        counts = per_suite.setdefault(rel["suite"], [0, 0])
        counts[0 if rel["status"] == "exact-pass" else 1] += 1
    for suite in sorted(per_suite):
        ok, bad = per_suite[suite]
        print(f"  {suite:<18} {ok:>4} pass {bad:>4} fail")
    for rel in relations:
        if rel["status"] != "exact-pass":
            print(f"  FAIL {rel['suite']} {rel['name']} {' '.join(map(str, rel['operands']))}")
    print(f"total {summary['passed']}/{summary['total']}")
    return EXIT_OK if summary["failed"] == 0 else EXIT_FAIL


# -- parser ----------------------------------------------------------------------


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with n, N, beta and run options; flags override it")
    p.add_argument("--n", dest="n", type=int, help="number of tensor factors (n >= 3)")
    p.add_argument("--N", dest="N", type=int, help="grid size")
    p.add_argument("--beta", help="comma-separated rationals beta_0,...,beta_{n-1}, e.g. 1/3,5/3,10/3")
    p.add_argument("--threads", type=int, help="worker cap (also RACAH_THREADS)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discrete-racah", description="Exact discrete realization of the Racah algebra R(n).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate kappa or a Racah polynomial exactly")
    p.add_argument("kind", choices=("kappa", "racah1", "racahN"))
    p.add_argument("values", nargs="*", help="kappa: X BETA; racah1: M ALPHA BETA GAMMA DELTA X")
    p.add_argument("--p", type=int, help="racahN: number of factors (default n-2)")
    p.add_argument("--k", help="racahN: comma-separated k_1,...,k_{n-2}")
    p.add_argument("--x", help="racahN: comma-separated x_1,...,x_{n-2}")
    _add_params(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table", help="write polynomial, generator or connection tables")
    p.add_argument("what", choices=("polynomials", "matrix", "connection"))
    p.add_argument("--label", help="generator label for 'matrix', e.g. 23 or {1,3}")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("-o", "--output", help="output path (default stdout)")
    _add_params(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("matrix", help="JSON form of one generator C_A")
    p.add_argument("label", help="label set, e.g. 23, 2..4 or {1,3}")
    p.add_argument("-o", "--output", help="output path (default stdout)")
    _add_params(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suites", help=f"comma-separated subset of {', '.join(SUITES)}, or 'all'")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("-o", "--output", help="report path (default stdout)")
    _add_params(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="summarize a JSON report")
    p.add_argument("path")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PoleError as exc:
        print(f"error: pole: {exc}", file=sys.stderr)
    except (ConfigError, RacahError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
