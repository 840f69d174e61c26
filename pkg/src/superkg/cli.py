"""Command line front end.

    superkg evolve   --preset figure1 --out out/fig1.csv [--plot]
    superkg verify   [--only pde-residual] [--tol-scale 0.001] [--out report.json]
    superkg bargmann --n 6 --out out/bargmann.csv
    superkg kernel   --m 3 --x 0 --s 0:3:31 --t 0:3:31 --out out/kernel.csv
    superkg coeffs   --n 10 --a 2

Precedence: built-in defaults, then ``--preset``, then ``--config`` (JSON, YAML
or the preamble of a CSV written by this tool), then explicit flags.
Exit codes: 0 success, 1 check failure, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .export import (ConfigError, RunConfig, apply_preset, config_from_mapping, fmt,
                     load_config_file, parse_range, write_csv, write_evolve, write_report)
from .special import QuadratureConvergenceError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
BARGMANN_MAX_N = 12
RUN_FLAGS = ("n", "a", "b", "m", "case", "source", "x", "t", "a_list", "precision", "format",
             "out")


# ---------------------------------------------------------------------------
# parser


def _common(parser: argparse.ArgumentParser, *, x_help="x range min:max:count"):
    g = parser.add_argument_group("run parameters")
    g.add_argument("--config", help="JSON/YAML config file or a CSV written by this tool")
    g.add_argument("--preset", choices=["figure1", "figure2"])
    g.add_argument("--n", type=int)
    g.add_argument("--a", type=float)
    g.add_argument("--b", type=float, help="frequency parameter of the velocity (problem2)")
    g.add_argument("--m", type=float, help="mass")
    g.add_argument("--case", choices=["problem1", "problem2"])
    g.add_argument("--source", choices=["zero", "dirac_space", "dirac_spacetime"])
    g.add_argument("--x", help=x_help)
    g.add_argument("--t", help="t range min:max:count")
    g.add_argument("--a-list", dest="a_list", help="comma separated a values, one file each")
    g.add_argument("--precision", help="double, extended, auto or decimal digits")
    g.add_argument("--out", help="output path")
    g.add_argument("--format", choices=["csv", "report"])
    g.add_argument("--plot", action="store_true", help="also render PNG figures next to the data")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superkg", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="evaluate u_n on an (x, t) grid")
    _common(p)

    p = sub.add_parser("verify", help="run the acceptance suite")
    _common(p)
    p.add_argument("--only", action="append", default=[],
                   help="check group to run (repeatable or comma separated)")
    p.add_argument("--tol-scale", type=float, default=1.0,
                   help="multiply every tolerance by this factor")

    p = sub.add_parser("bargmann", help="Segal-Bargmann transform tables")
    _common(p, x_help="x range for the round-trip table")
    p.add_argument("--z-re", default="-1.5:1.5:7", help="Re z range")
    p.add_argument("--z-im", default="-1.5:1.5:7", help="Im z range")
    p.add_argument("--nodes", type=int, default=96, help="Gauss-Hermite nodes per axis")
    p.add_argument("--allow-large-n", action="store_true",
                   help=f"lift the n <= {BARGMANN_MAX_N} cost guard")

    p = sub.add_parser("kernel", help="covariance kernel K_{m,x}(s, t)")
    _common(p, x_help="spatial point x (a single number)")
    p.add_argument("--s", help="s range min:max:count")
    p.add_argument("--panels-per-unit", type=int, default=None)
    p.add_argument("--order", type=int, default=None)

    p = sub.add_parser("coeffs", help="coefficient table of F_n")
    _common(p)
    return parser


def resolve_config(args) -> RunConfig:
    mapping = load_config_file(args.config) if args.config else {}
    config = RunConfig(command=args.command)
    preset = args.preset or mapping.get("preset")
    if preset not in (None, "None"):
        config = apply_preset(config, preset)
    config = config_from_mapping(mapping, config)
    flags = {k: getattr(args, k) for k in RUN_FLAGS if getattr(args, k, None) is not None}
    if "a_list" in flags:
        try:
            flags["a_list"] = tuple(float(v) for v in flags["a_list"].split(","))
        except ValueError:
            raise ConfigError(f"--a-list must be comma separated numbers, got {flags['a_list']!r}")
    if "a" in flags and "a_list" not in flags:
        flags["a_list"] = None
    return replace(config, command=args.command, **flags)


def _default_out(config: RunConfig, name: str) -> Path:
    if config.out:
        return Path(config.out)
    return Path("out") / name


# ---------------------------------------------------------------------------
# commands


def cmd_evolve(config: RunConfig, args) -> int:
    stem = config.preset or "evolve"
    paths = write_evolve(config, _default_out(config, f"{stem}.csv"))
    for path in paths:
        print(path)
    if args.plot and config.format == "csv":
        from .plotting import plot_evolve_outputs
        for png in plot_evolve_outputs(paths):
            print(png)
    return EXIT_OK


def cmd_verify(config: RunConfig, args) -> int:
    from .checks import GROUPS, run_checks

    only = [name for item in args.only for name in item.split(",") if name]
    unknown = [name for name in only if name not in GROUPS]
    if unknown:
        raise ConfigError(f"unknown check group(s) {unknown}; choose from {list(GROUPS)}")
    if not (args.tol_scale > 0 and math.isfinite(args.tol_scale)):
        raise ConfigError("--tol-scale must be a positive number")
    results = run_checks(only or None, args.tol_scale)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if config.out:
        write_report(config.out, {"version": __version__, "tol_scale": args.tol_scale,
                                  "groups": only or list(GROUPS),
                                  "passed": not failed,
                                  "checks": [r.to_dict() for r in results]})
    return EXIT_FAIL if failed else EXIT_OK


def cmd_bargmann(config: RunConfig, args) -> int:
    from . import bargmann
    from .kg_spectral import evolve_homogeneous
    from .special import gauss_hermite
    from .superosc import SuperoscillationParams, eval_fn_derivative

    n, a, m = config.n, config.a, config.m
    if n > BARGMANN_MAX_N and not args.allow_large_n:
        raise ConfigError(f"n={n} exceeds the cost guard n <= {BARGMANN_MAX_N}; "
                          "pass --allow-large-n to override")
    if not 2 <= args.nodes <= 128:
        raise ConfigError("--nodes must lie in [2, 128] (the refinement rule doubles it)")
    t_vals = parse_range(config.t)
    if t_vals.size != 1 or t_vals[0] < 0:
        raise ConfigError("bargmann needs a single nonnegative time --t")
    t = float(t_vals[0])
    x_vals = parse_range(args.x if args.x is not None else "-2:2:9")
    zr, zi = parse_range(args.z_re), parse_range(args.z_im)
    z = (zr[None, :] + 1j * zi[:, None]).ravel()

    xi_num = np.atleast_1d(bargmann.sb_forward(bargmann.phi_callback(n, a, m, t), z))
    xi_ref = np.atleast_1d(bargmann.xi_closed_form(n, a, m, t, z))
    xi_rows = [(zz.real, zz.imag, v.real, v.imag, r.real, r.imag, abs(v - r))
               for zz, v, r in zip(z, xi_num, xi_ref)]

    rule = gauss_hermite(args.nodes)
    recovered = np.atleast_1d(bargmann.sb_inverse(bargmann.xi_callback(n, a, m, t), x_vals,
                                                  (rule, rule)))
    exact = np.atleast_1d(evolve_homogeneous(n, a, m, x_vals, t))
    deriv = np.atleast_1d(bargmann.fn_derivative_integral_rep(n, a, x_vals, (rule, rule)))
    deriv_ref = np.atleast_1d(eval_fn_derivative(SuperoscillationParams(n, a), x_vals))
    rt_rows = [(x, u.real, u.imag, v.real, v.imag, abs(u - v), abs(d - dr))
               for x, u, v, d, dr in zip(x_vals, exact, recovered, deriv, deriv_ref)]

    roundtrip = max(r[5] for r in rt_rows)
    derivative = max(r[6] for r in rt_rows)
    self_consistency = max(r[6] for r in xi_rows)
    meta = config.preamble(a_list=None, z_re=args.z_re, z_im=args.z_im, nodes=args.nodes)
    meta["x"] = args.x if args.x is not None else "-2:2:9"
    out = _default_out(config, "bargmann.csv")
    xi_header = ["z_re", "z_im", "xi_re", "xi_im", "closed_re", "closed_im", "self_consistency"]
    rt_header = ["x", "u_re", "u_im", "inverse_re", "inverse_im", "roundtrip_err",
                 "derivative_err"]
    if config.format == "csv":
        paths = [write_csv(out.with_name(out.stem + "_xi.csv"), meta, xi_header, xi_rows),
                 write_csv(out.with_name(out.stem + "_roundtrip.csv"), meta, rt_header, rt_rows)]
    else:
        paths = [write_report(out.with_suffix(".json"), {
            "metadata": meta,
            "summary": {"max_roundtrip_error": roundtrip, "max_derivative_error": derivative,
                        "max_self_consistency": self_consistency},
            "xi": {"columns": xi_header, "rows": xi_rows},
            "roundtrip": {"columns": rt_header, "rows": rt_rows}})]
    for path in paths:
        print(path)
    print(f"max roundtrip error {roundtrip:.3e}; derivative representation {derivative:.3e}; "
          f"closed-form self-consistency {self_consistency:.3e}")
    return EXIT_OK if max(roundtrip, derivative) <= 1e-6 else EXIT_FAIL


def cmd_kernel(config: RunConfig, args) -> int:
    from .stochastic import CovKernelParams, cov_kernel

    x_vals = parse_range(args.x if args.x is not None else "0")
    if x_vals.size != 1:
        raise ConfigError("kernel needs a single spatial point --x")
    s_text = args.s or "0:3:31"
    t_text = args.t or s_text
    s_vals, t_vals = parse_range(s_text), parse_range(t_text)
    if np.any(s_vals < 0) or np.any(t_vals < 0):
        raise ConfigError("s and t grids must be nonnegative")
    if config.m < 0:
        raise ConfigError("m must be nonnegative")
    quad = {k: v for k, v in (("panels_per_unit", args.panels_per_unit), ("order", args.order))
            if v is not None}
    if any(v < 1 for v in quad.values()):
        raise ConfigError("quadrature overrides must be positive")
    params = CovKernelParams(config.m, float(x_vals[0]))
    ss, tt = np.meshgrid(s_vals, t_vals, indexing="ij")
    k = cov_kernel(params, ss, tt, **quad)
    rows = [(s, t, kv) for s, t, kv in zip(ss.ravel(), tt.ravel(), np.ravel(k))]
    meta = {"version": __version__, "command": "kernel", "m": config.m, "x": float(x_vals[0]),
            "s": s_text, "t": t_text, **quad}
    out = _default_out(config, "kernel.csv")
    if config.format == "csv":
        path = write_csv(out, meta, ["s", "t", "K"], rows)
        print(path)
        if args.plot:
            from .plotting import plot_kernel
            print(plot_kernel(path, path.with_suffix(".png")))
    else:
        print(write_report(out.with_suffix(".json"),
                           {"metadata": meta, "columns": ["s", "t", "K"], "rows": rows}))
    return EXIT_OK


def cmd_coeffs(config: RunConfig, args) -> int:
    from .superosc import SuperoscillationParams, coefficients, supershift

    coeffs = coefficients(SuperoscillationParams(config.n, config.a))
    lam = coeffs.frequencies
    values = coeffs.values if not coeffs.overflow else [float("nan")] * (config.n + 1)
    rows = [(j, lam[j], values[j], coeffs.log_magnitudes[j], int(coeffs.signs[j]))
            for j in range(config.n + 1)]
    header = ["j", "lambda", "C", "log_abs_C", "sign"]
    summary = {"sum_C": float(np.real(supershift(coeffs, lambda _: 1))),
               "sum_C_lambda": float(np.real(supershift(coeffs, lambda v: v))),
               "cancellation_digits": coeffs.cancellation_digits}
    meta = {"version": __version__, "command": "coeffs", "n": config.n, "a": config.a}
    if config.out:
        if config.format == "csv":
            print(write_csv(config.out, meta, header, rows))
        else:
            print(write_report(config.out, {"metadata": meta, "summary": summary,
                                            "columns": header, "rows": rows}))
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(fmt(v) for v in row))
    print(" ".join(f"{k}={fmt(v)}" for k, v in summary.items()), file=sys.stderr)
    return EXIT_OK


COMMANDS = {"evolve": cmd_evolve, "verify": cmd_verify, "bargmann": cmd_bargmann,
            "kernel": cmd_kernel, "coeffs": cmd_coeffs}


RANGE_FLAGS = ("--x", "--t", "--s", "--z-re", "--z-im")


def _glue_ranges(argv):
    """``--x -10:10:401`` to ``--x=-10:10:401``; argparse would read the value as a flag."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in RANGE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and re.match(r"-[\d.]", nxt):
                out.append(f"{tok}={nxt}")
                continue
            out.extend([tok] if nxt is None else [tok, nxt])
            continue
        out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_ranges(argv))
    try:
        config = resolve_config(args)
        if args.command in ("evolve", "coeffs"):
            config.validate()
        elif config.n < 1:
            raise ConfigError(f"n must be positive, got {config.n}")
        return COMMANDS[args.command](config, args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"superkg: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OverflowError as exc:
        print(f"superkg: error: {exc}; use --precision auto", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureConvergenceError as exc:
        print(f"superkg: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
