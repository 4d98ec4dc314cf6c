"""Command-line front end.

Every subcommand writes one table (CSV with a ``#`` metadata header, or a
single JSON object). Exit codes: 0 success, 1 invalid configuration,
2 computation failure, 3 a ``verify`` check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from typing import Callable

import numpy as np

from . import __version__
from .checks import CHECKS, run_checks
from .noise import NoiseModel, SeededStream
from .planar import build_layout
from .planar_gamma import DECODERS, gamma_bound_exact, gamma_exact_enum, sweep
from .tables import COLUMNS, render
from .thermal import DEFAULT_SIZES, ThermalParams, thermal_curve
from .tfim import DEFAULT_W, ChainSpec, tfim_curve

EXIT_INVALID = 1
EXIT_FAILURE = 2
EXIT_CHECK_FAILED = 3


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def parse_grid(text: str, kind=float) -> list:
    """Comma-separated items, each a number or an inclusive ``start:stop:count`` range."""
    values = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise ConfigError(f"empty item in grid {text!r}")
        if ":" in item:
            parts = item.split(":")
            if len(parts) != 3:
                raise ConfigError(f"range {item!r} is not start:stop:count")
            try:
                start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            except ValueError as exc:
                raise ConfigError(f"bad range {item!r}") from exc
            if count < 1:
                raise ConfigError(f"range {item!r} needs count >= 1")
            grid = np.linspace(start, stop, count) if count > 1 else np.array([start])
            values.extend(kind(v) for v in grid)
        else:
            try:
                values.append(kind(item))
            except ValueError as exc:
                raise ConfigError(f"bad number {item!r}") from exc
    return values


def _int_value(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="anyonic-entropy", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    common.add_argument("--timestamp", action="store_true", help="record the wall-clock time in the metadata header")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("thermal", parents=[common], help="Gamma vs temperature for thermal planar codes")
    p.add_argument("--beta", default="0.1:5:50", help="inverse temperatures")
    p.add_argument("--sizes", default=",".join(map(str, DEFAULT_SIZES)), help="total plaquette counts N")
    p.add_argument("--js", type=float, default=1.0)
    p.add_argument("--jp", type=float, default=1.0)

    p = sub.add_parser("tfim", parents=[common], help="Gamma vs field for the transverse-field Ising chain")
    p.add_argument("--n", default="5,10,15", help="chain lengths (multiples of 5)")
    p.add_argument("--mu", default="0:2:81", help="transverse field values")
    p.add_argument("--w", type=float, default=DEFAULT_W, help="Ising coupling")

    p = sub.add_parser("planar", parents=[common], help="Monte Carlo Gamma lower bound for the planar code")
    p.add_argument("--l", default="3,5,7", help="code sizes L")
    p.add_argument("--p", default="0.01:0.25:13", help="flip probabilities (p_x = p_z = p)")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--decoder", choices=DECODERS, default="matching")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0, help="RNG stream id")

    p = sub.add_parser("oracle", parents=[common], help="exact Gamma by enumeration (L <= 4)")
    p.add_argument("--l", default="2,3", help="code sizes L")
    p.add_argument("--p", default="0.02,0.05,0.1,0.15,0.3", help="flip probabilities (p_x = p_z = p)")

    p = sub.add_parser("verify", parents=[common], help="run the cross-module consistency checks")
    p.add_argument("--checks", default=",".join(CHECKS), help="comma-separated subset of checks")

    p = sub.add_parser("layout", help="dump a planar code layout as JSON")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("-o", "--output")
    return parser


def _prepare(args) -> tuple[dict, Callable]:
    """Validate arguments and return (parameters, computation)."""
    if getattr(args, "workers", 1) < 1:
        raise ConfigError("--workers must be >= 1")
    cmd = args.command
    if cmd == "thermal":
        betas = parse_grid(args.beta)
        sizes = parse_grid(args.sizes, _int_value)
        for n in sizes:
            for b in betas:
                ThermalParams(b, n, args.js, args.jp)
        params = {"beta": betas, "sizes": sizes, "j_s": args.js, "j_p": args.jp}
        return params, lambda: thermal_curve(betas, sizes, args.js, args.jp)
    if cmd == "tfim":
        ns = parse_grid(args.n, _int_value)
        mus = parse_grid(args.mu)
        for n in ns:
            if n > 20:
                raise ConfigError("chain length limited to N <= 20")
            for mu in mus:
                ChainSpec(n, mu, args.w)
        params = {"n": ns, "mu": mus, "w": args.w}
        return params, lambda: tfim_curve(ns, mus, args.w, args.workers)
    if cmd == "planar":
        sizes = parse_grid(args.l, _int_value)
        ps = parse_grid(args.p)
        if args.samples < 1:
            raise ConfigError("--samples must be >= 1")
        for L in sizes:
            build_layout(L)
            if args.decoder == "ml" and L * L > 16:
                raise ConfigError("the ml decoder is limited to L <= 4")
        for p in ps:
            NoiseModel.symmetric(p)
        SeededStream(args.seed, args.stream)
        params = {"l": sizes, "p": ps, "samples": args.samples, "decoder": args.decoder,
                  "seed": args.seed, "stream": args.stream}

        def compute():
            estimates = sweep(sizes, ps, args.samples, args.seed, args.decoder, args.workers, args.stream)
            return [_planar_row(e) for e in estimates]

        return params, compute
    if cmd == "oracle":
        sizes = parse_grid(args.l, _int_value)
        ps = parse_grid(args.p)
        for L in sizes:
            if build_layout(L).qubit_count > 16:
                raise ConfigError("exact enumeration is limited to L <= 4")
        for p in ps:
            NoiseModel.symmetric(p)
        params = {"l": sizes, "p": ps}
        return params, lambda: [_oracle_row(L, p) for L in sizes for p in ps]
    if cmd == "verify":
        names = [n.strip() for n in args.checks.split(",") if n.strip()]
        unknown = [n for n in names if n not in CHECKS]
        if unknown or not names:
            raise ConfigError(f"unknown checks: {unknown}; available: {list(CHECKS)}")
        return {"checks": names}, lambda: run_checks(names)
    raise ConfigError(f"unknown command {cmd!r}")


def _planar_row(e) -> dict:
    return {
        "L": e.L, "p_x": e.p_x, "p_z": e.p_z, "n_samples": e.n_samples,
        "P_e": e.p_success_e, "se_P_e": e.std_errors["P_e"],
        "P_m": e.p_success_m, "se_P_m": e.std_errors["P_m"],
        "pi_e": e.pi_e, "pi_m": e.pi_m,
        "gamma_lb": e.gamma_lb, "se_gamma_lb": e.std_errors["gamma_lb"],
        "decoder": e.decoder, "seed": e.seed,
    }


def _oracle_row(L: int, p: float) -> dict:
    layout, model = build_layout(L), NoiseModel.symmetric(p)
    ml = gamma_bound_exact(layout, model, "ml")
    return {
        "L": L, "p_x": p, "p_z": p,
        "gamma_exact": gamma_exact_enum(layout, model).value,
        "gamma_bound_ml": ml.gamma_lb,
        "gamma_bound_matching": gamma_bound_exact(layout, model, "matching").gamma_lb,
        "gamma_bound_ml_confusion": ml.gamma_lb_confusion,
    }


def _error(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message, "exit_code": code}), file=sys.stderr)
    return code


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "layout":
            _write(build_layout(args.l).to_json(indent=2) + "\n", args.output)
            return 0
        params, compute = _prepare(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (ConfigError, ValueError) as exc:
        return _error("invalid_config", str(exc), EXIT_INVALID)

    try:
        rows = compute()
    except Exception as exc:  # noqa: BLE001 - reported as a machine-readable record
        return _error(type(exc).__name__, str(exc), EXIT_FAILURE)

    metadata = {"tool": "anyonic-entropy", "version": __version__, "command": args.command, "parameters": params}
    if "seed" in params:
        metadata["seed"] = params["seed"]
    if args.timestamp:
        metadata["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    _write(render(args.format, metadata, COLUMNS[args.command], rows), args.output)

    if args.command == "verify" and any(r["status"] != "pass" for r in rows):
        return EXIT_CHECK_FAILED
    return 0


if __name__ == "__main__":
    sys.exit(main())
