"""Command-line interface.

Subcommands: analytic, simulate, validate, sweep, optimize, figures.
Scalar results go to stdout as JSON; tabular results go to CSV (stdout or
--out).  The figures subcommand also renders a PNG next to the CSV.

Exit codes: 0 success, 1 numeric/validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analytic, sim, study
from .params import DEFAULT_CONFIG, from_db_config
from .protocols import Protocol
from .specfun import QuadratureError

__all__ = ["main", "build_parser"]

_OVERRIDE_FLAGS = {
    "pr_dbm": "--pr-dbm",
    "gamma_o_db": "--gamma-o-db",
    "sigma_nr_dbm": "--sigma-nr-dbm",
    "sigma_nd_dbm": "--sigma-nd-dbm",
}

_SIM_PROTOCOL_NAMES = ["af_cont", "af_disc", "df_cont", "df_disc"]
_ALL_PROTOCOL_NAMES = _SIM_PROTOCOL_NAMES + ["baseline"]


def _add_config_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", type=str, default=None,
                    help="JSON config file (defaults embed the reference "
                         "parameter set)")
    for key, flag in _OVERRIDE_FLAGS.items():
        sp.add_argument(flag, type=float, default=None,
                        help=f"override config key {key} "
                             f"(default {DEFAULT_CONFIG[key]})")
    sp.add_argument("--seed", type=int, default=None,
                    help=f"RNG seed (default {DEFAULT_CONFIG['seed']})")


def _load_config(args: argparse.Namespace) -> dict:
    config = dict(DEFAULT_CONFIG)
    if args.config is not None:
        with open(args.config) as fh:
            loaded = json.load(fh)
        unknown = [k for k in loaded if k not in DEFAULT_CONFIG]
        if unknown:
            raise ValueError(f"config has unknown keys: {', '.join(unknown)}")
        config.update(loaded)
    for key in _OVERRIDE_FLAGS:
        value = getattr(args, key)
        if value is not None:
            config[key] = value
    if args.seed is not None:
        config["seed"] = args.seed
    return config


def _parse_grid(text: str) -> tuple[float, ...]:
    """Parse 'start:stop:step' (stop inclusive) or a comma list."""
    if ":" in text:
        parts = [float(x) for x in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"bad grid spec {text!r}; use start:stop:step")
        start, stop, step = parts
        values = []
        k = 0
        while start + k * step <= stop + 1e-9:
            values.append(round(start + k * step, 12))
            k += 1
        return tuple(values)
    return tuple(float(x) for x in text.split(","))


def _parse_range(text: str) -> tuple[float, float]:
    parts = [float(x) for x in text.split(":")]
    if len(parts) != 2:
        raise ValueError(f"bad range spec {text!r}; use lo:hi")
    return parts[0], parts[1]


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ehrelay",
        description="Wireless-powered relay link: analytic and Monte Carlo "
                    "throughput of time-switching EH/IT protocols")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analytic", help="closed-form throughput of one "
                                         "protocol (exact AF, DF bound)")
    _add_config_args(sp)
    sp.add_argument("--protocol", required=True, choices=_SIM_PROTOCOL_NAMES)
    sp.add_argument("--truncation-n", type=int, default=10,
                    help="series terms of the DF continuous bound")
    sp.add_argument("--quad-tol", type=float, default=1e-9,
                    help="relative tolerance of numeric integrals")

    sp = sub.add_parser("simulate", help="Monte Carlo run of one protocol")
    _add_config_args(sp)
    sp.add_argument("--protocol", required=True, choices=_ALL_PROTOCOL_NAMES)
    sp.add_argument("--n-blocks", type=int, default=100_000)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--fixed-alpha", type=float, default=0.5,
                    help="EH fraction of the baseline protocol")

    sp = sub.add_parser("validate", help="analytic vs simulated throughput, "
                                         "with pass/fail per protocol")
    _add_config_args(sp)
    sp.add_argument("--protocol", default="all",
                    choices=_SIM_PROTOCOL_NAMES + ["all"])
    sp.add_argument("--n-blocks", type=int, default=100_000)
    sp.add_argument("--truncation-n", type=int, default=10)
    sp.add_argument("--quad-tol", type=float, default=1e-9)

    sp = sub.add_parser("sweep", help="evaluate protocols over a dB grid, "
                                      "CSV output")
    _add_config_args(sp)
    sp.add_argument("--axis", required=True,
                    choices=["pr_dbm", "sigma_nr_dbm", "sigma_nd_dbm",
                             "gamma_o_db"])
    sp.add_argument("--grid", required=True,
                    help="start:stop:step or comma-separated dB values")
    sp.add_argument("--protocols", default=",".join(_SIM_PROTOCOL_NAMES),
                    help="comma-separated protocol names")
    sp.add_argument("--mode", default="both",
                    choices=["analytic", "simulate", "both"])
    sp.add_argument("--n-blocks", type=int, default=100_000)
    sp.add_argument("--out", type=str, default=None,
                    help="CSV path (stdout when omitted)")

    sp = sub.add_parser("optimize", help="best preset relay power "
                                         "(or EH fraction for the baseline)")
    _add_config_args(sp)
    sp.add_argument("--protocol", required=True, choices=_ALL_PROTOCOL_NAMES)
    sp.add_argument("--mode", default="analytic",
                    choices=["analytic", "simulate"])
    sp.add_argument("--range-dbm", type=str, default="-40:40",
                    help="search range lo:hi in dBm")
    sp.add_argument("--alpha-grid", type=str, default=None,
                    help="baseline EH-fraction grid (start:stop:step)")
    sp.add_argument("--n-blocks", type=int, default=100_000)
    sp.add_argument("--truncation-n", type=int, default=10)
    sp.add_argument("--quad-tol", type=float, default=1e-9)

    sp = sub.add_parser("figures", help="figure dataset as CSV plus a "
                                        "rendered PNG")
    _add_config_args(sp)
    sp.add_argument("--fig", required=True, choices=list(study.FIGURE_IDS))
    sp.add_argument("--out", required=True, help="CSV output path")
    sp.add_argument("--n-blocks", type=int, default=100_000)
    sp.add_argument("--no-plot", action="store_true",
                    help="skip the PNG rendering")
    return parser


def _cmd_analytic(args) -> int:
    config = _load_config(args)
    p = from_db_config({k: v for k, v in config.items() if k != "seed"})
    proto = Protocol.from_name(args.protocol)
    inputs = analytic.inputs_for(p, args.truncation_n, args.quad_tol)
    tau = analytic.evaluate(proto, inputs)
    kind = "exact" if proto in (Protocol.AF_CONT, Protocol.AF_DISC) \
        else "lower_bound"
    _emit({"protocol": proto.value, "mode": "analytic", "kind": kind,
           "tau": tau})
    return 0


def _cmd_simulate(args) -> int:
    config = _load_config(args)
    p = from_db_config({k: v for k, v in config.items() if k != "seed"})
    proto = Protocol.from_name(args.protocol)
    fixed_alpha = args.fixed_alpha if proto is Protocol.BASELINE_FIXED else None
    res = sim.run_parallel(p, proto, args.n_blocks, config["seed"],
                           workers=args.workers, fixed_alpha=fixed_alpha)
    t = res.tallies
    _emit({
        "protocol": proto.value, "mode": "sim",
        "mean_tau": res.mean_tau, "std_error": res.std_error,
        "n_blocks": res.n_blocks, "seed": config["seed"],
        "workers": args.workers,
        "tallies": {
            "it_block_fraction": t.it_block_fraction,
            "relay_outage_rate": t.relay_outage_rate,
            "dest_outage_rate": t.dest_outage_rate,
            "mean_x": t.mean_x, "mean_y": t.mean_y,
            "n_patterns": t.n_patterns,
        },
    })
    return 0


def _cmd_validate(args) -> int:
    config = _load_config(args)
    p = from_db_config({k: v for k, v in config.items() if k != "seed"})
    names = _SIM_PROTOCOL_NAMES if args.protocol == "all" else [args.protocol]
    inputs = analytic.inputs_for(p, args.truncation_n, args.quad_tol)
    rows = []
    all_pass = True
    for k, name in enumerate(names):
        proto = Protocol.from_name(name)
        ana = analytic.evaluate(proto, inputs)
        res = sim.run(p, proto, args.n_blocks, config["seed"] + k)
        exact = proto in (Protocol.AF_CONT, Protocol.AF_DISC)
        if exact:
            tol = 4.0 * res.std_error + 1e-9
            ok = abs(res.mean_tau - ana) <= tol
            rule = "abs(sim - analytic) <= 4*stderr"
        else:
            tol = 3.0 * res.std_error + 1e-9
            ok = ana <= res.mean_tau + tol
            rule = "analytic <= sim + 3*stderr"
        all_pass &= ok
        rows.append({"protocol": name, "analytic_tau": ana,
                     "sim_tau": res.mean_tau, "stderr": res.std_error,
                     "rule": rule, "pass": bool(ok)})
    _emit({"n_blocks": args.n_blocks, "seed": config["seed"],
           "results": rows, "all_pass": bool(all_pass)})
    if not all_pass:
        print("validation failed: simulated and analytic throughput "
              "disagree beyond tolerance", file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args)
    p = from_db_config({k: v for k, v in config.items() if k != "seed"})
    protocols = tuple(Protocol.from_name(s)
                      for s in args.protocols.split(","))
    spec = study.SweepSpec(axis=args.axis, grid=_parse_grid(args.grid),
                           protocols=protocols, mode=args.mode,
                           n_blocks=args.n_blocks, seed=config["seed"])
    rows = study.sweep(spec, p)
    if args.out:
        study.write_csv(rows, args.out)
        _emit({"rows": len(rows), "csv": args.out})
    else:
        print(",".join(study.CSV_COLUMNS))
        for r in rows:
            stderr = "" if r["stderr"] is None else repr(float(r["stderr"]))
            print(f"{r['axis']!r},{r['protocol']},{r['mode']},"
                  f"{r['tau']!r},{stderr}")
    return 0


def _cmd_optimize(args) -> int:
    config = _load_config(args)
    p = from_db_config({k: v for k, v in config.items() if k != "seed"})
    proto = Protocol.from_name(args.protocol)
    if proto is Protocol.BASELINE_FIXED:
        grid = None if args.alpha_grid is None else _parse_grid(args.alpha_grid)
        out = study.optimize_baseline_alpha(p, grid, args.n_blocks,
                                            config["seed"])
        _emit({"protocol": proto.value, **out})
        return 0
    out = study.optimize_pr(p, proto, _parse_range(args.range_dbm),
                            mode=args.mode, n_blocks=args.n_blocks,
                            seed=config["seed"],
                            truncation_n=args.truncation_n,
                            quad_tol=args.quad_tol)
    _emit({"protocol": proto.value, **out})
    return 0


def _cmd_figures(args) -> int:
    config = _load_config(args)
    p = from_db_config({k: v for k, v in config.items() if k != "seed"})
    rows = study.figure_bundle(args.fig, p, args.n_blocks, config["seed"])
    study.write_csv(rows, args.out)
    payload = {"fig": args.fig, "rows": len(rows), "csv": args.out}
    if not args.no_plot:
        from .plots import render_figure
        png = str(Path(args.out).with_suffix(".png"))
        render_figure(rows, args.fig, png)
        payload["png"] = png
    _emit(payload)
    return 0


_COMMANDS = {
    "analytic": _cmd_analytic,
    "simulate": _cmd_simulate,
    "validate": _cmd_validate,
    "sweep": _cmd_sweep,
    "optimize": _cmd_optimize,
    "figures": _cmd_figures,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, ArithmeticError, QuadratureError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
