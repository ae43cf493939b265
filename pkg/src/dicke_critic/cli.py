"""Command-line front end.

Subcommands:

* ``gc``       -- critical coupling for one parameter point
* ``sweep``    -- phase-boundary table over a parameter grid
* ``corr``     -- sampled two-time correlator S_x(t)
* ``spectrum`` -- cavity determinant and susceptibility over frequency
* ``oracle``   -- closed form vs mean-field threshold comparison table

Exit codes: 0 success, 1 usage or parse error, 2 no transition,
3 oracle disagreement.

All floats are printed with 17 significant digits so repeated runs are
byte-identical. Frequencies are reported in units of omega_z unless
--raw-units is given.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, baths, critical, meanfield, response
from .baths import GcMode, parse_bath
from .config import RunConfig, merge_config
from .critical import NoTransition, SweepPlan, Transition
from .errors import DickeCriticError

HEADER = f"# dicke-critic v{__version__}"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_TRANSITION = 2
EXIT_ORACLE_DISAGREEMENT = 3


def fmt(x: float) -> str:
    return format(float(x) + 0.0, ".17g")  # +0.0 flushes negative zero


class _Parser(argparse.ArgumentParser):
    # argparse defaults to exit code 2; the exit-code contract reserves
    # 2 for "no transition", so usage errors must exit 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bath", type=parse_bath, help='e.g. "dephasing(gamma=0.3, sz=-0.5)"')
    p.add_argument("--omega-z", dest="omega_z", type=float, help="atomic detuning (default 1)")
    p.add_argument("--omega0", type=float, help="cavity detuning (default 1)")
    p.add_argument("--kappa", type=float, help="cavity decay (default 0)")
    p.add_argument(
        "--mode",
        type=GcMode,
        choices=list(GcMode),
        metavar="{self-consistent,literature}",
        help="closed-form variant (default self-consistent)",
    )
    p.add_argument("--raw-units", dest="raw_units", action="store_const", const=True,
                   help="report raw frequencies instead of units of omega_z")
    p.add_argument("--config", help="key = value config file; flags override it")
    p.add_argument("--output", help="output path ('-' = stdout)")


def build_parser() -> _Parser:
    parser = _Parser(prog="dicke-critic")
    parser.add_argument("--version", action="version", version=HEADER.lstrip("# "))
    sub = parser.add_subparsers(dest="command", required=True)

    p_gc = sub.add_parser("gc", parents=[], help="critical coupling at one point")
    _add_common(p_gc)
    p_gc.add_argument("--verify", action="store_const", const=True,
                      help="cross-check against the mean-field threshold")
    p_gc.add_argument("--tol", type=float, help="oracle tolerance for --verify (default 1e-5)")

    p_sweep = sub.add_parser("sweep", help="phase boundary over a grid")
    _add_common(p_sweep)
    p_sweep.add_argument("--sweep-param", dest="sweep_param", help="parameter to sweep")
    p_sweep.add_argument("--sweep-start", dest="sweep_start", type=float)
    p_sweep.add_argument("--sweep-stop", dest="sweep_stop", type=float)
    p_sweep.add_argument("--sweep-points", dest="sweep_points", type=int)
    p_sweep.add_argument("--sweep-values", dest="sweep_values",
                         type=lambda s: tuple(float(v) for v in s.split(",")),
                         help="comma-separated explicit grid")
    p_sweep.add_argument("--format", dest="format", choices=["csv", "json"])

    p_corr = sub.add_parser("corr", help="two-time correlator samples")
    _add_common(p_corr)
    p_corr.add_argument("--tmax", type=float)
    p_corr.add_argument("--dt", type=float)

    p_spec = sub.add_parser("spectrum", help="cavity determinant vs frequency")
    _add_common(p_spec)
    p_spec.add_argument("--g", type=float, help="coupling (default 0)")
    p_spec.add_argument("--omega-min", dest="omega_min", type=float)
    p_spec.add_argument("--omega-max", dest="omega_max", type=float)
    p_spec.add_argument("--omega-points", dest="omega_points", type=int)

    p_oracle = sub.add_parser("oracle", help="closed form vs mean-field table")
    _add_common(p_oracle)
    p_oracle.add_argument("--tol", type=float, help="max relative deviation (default 1e-5)")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    return merge_config(values, getattr(args, "config", None))


def _write(cfg_output: str, text: str) -> None:
    if cfg_output == "-":
        sys.stdout.write(text)
    else:
        Path(cfg_output).write_text(text, encoding="utf-8", newline="")


def _require_bath(cfg: RunConfig) -> None:
    if cfg.bath is None:
        raise DickeCriticError("a bath must be given (--bath or config)")


def _csv(lines: list[str]) -> str:
    return "".join(line + "\n" for line in [HEADER, *lines])


def cmd_gc(cfg: RunConfig) -> int:
    _require_bath(cfg)
    chi0 = baths.closed_form_chi0(cfg.bath, cfg.omega_z, cfg.mode)
    result = critical.solve_gc(chi0, cfg.cavity)
    g0 = critical.fully_polarized_gc(cfg.omega_z, cfg.cavity)
    unit = 1.0 if cfg.raw_units else cfg.omega_z
    lines = [f"units = {'raw' if cfg.raw_units else 'omega_z'}",
             f"chi0 = {fmt(chi0 * unit)}"]
    if isinstance(result, NoTransition):
        lines.append(f"g_c = no transition: {result.reason.value}")
        lines.append("g_c_over_g0 = inf")
        print("\n".join(lines))
        return EXIT_NO_TRANSITION
    lines.append(f"g_c = {fmt(result.g_c / unit)}")
    lines.append(f"g_c_over_g0 = {fmt(result.g_c / g0)}")
    status = EXIT_OK
    if cfg.verify:
        model = baths.spin_model(cfg.bath, cfg.omega_z)
        g_star = meanfield.stability_threshold(
            cfg.cavity, model, 0.4 * result.g_c, 2.5 * result.g_c
        )
        dev = abs(g_star - result.g_c) / result.g_c
        lines.append(f"g_star = {fmt(g_star / unit)}")
        lines.append(f"oracle_rel_dev = {fmt(dev)}")
        if dev > cfg.tol:
            status = EXIT_ORACLE_DISAGREEMENT
    print("\n".join(lines))
    return status


def cmd_sweep(cfg: RunConfig) -> int:
    _require_bath(cfg)
    if not cfg.sweep_param or not cfg.sweep_values:
        raise DickeCriticError("sweep needs sweep_param and a grid")
    plan = SweepPlan(
        bath=cfg.bath,
        omega_z=cfg.omega_z,
        cavity=cfg.cavity,
        axis=cfg.sweep_param,
        values=cfg.sweep_values,
        mode=cfg.mode,
    )
    rows = critical.sweep(plan)
    unit = 1.0 if cfg.raw_units else cfg.omega_z
    if cfg.fmt == "csv":
        lines = [f"{cfg.sweep_param},chi0,g_c,g_c_over_g0,status"]
        for row in rows:
            if isinstance(row.result, Transition):
                gc_txt, ratio_txt = fmt(row.result.g_c / unit), fmt(row.gc_over_g0)
            else:
                gc_txt, ratio_txt = "inf", "inf"
            lines.append(
                f"{fmt(row.params[0])},{fmt(row.chi0 * unit)},{gc_txt},{ratio_txt},{row.status}"
            )
        _write(cfg.output, _csv(lines))
    else:
        import json

        payload = []
        for row in rows:
            payload.append(
                {
                    cfg.sweep_param: row.params[0],
                    "chi0": row.chi0 * unit,
                    "g_c": row.result.g_c / unit if isinstance(row.result, Transition) else None,
                    "g_c_over_g0": row.gc_over_g0 if isinstance(row.result, Transition) else None,
                    "status": row.status,
                }
            )
        _write(cfg.output, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_corr(cfg: RunConfig) -> int:
    _require_bath(cfg)
    model = baths.spin_model(cfg.bath, cfg.omega_z)
    from .lindblad import steady_state, two_time_sx

    series = two_time_sx(model, steady_state(model).rho, tmax=cfg.tmax, dt=cfg.dt)
    times, values = series.times, series.values
    if series.tail_only:
        # undamped correlator: sample the analytic tail over a display window
        freq = series.tail.frequency or abs(cfg.omega_z) or 1.0
        tmax = cfg.tmax if cfg.tmax is not None else 12.0 * 2.0 * np.pi / freq
        dt = cfg.dt if cfg.dt is not None else 0.02 / freq
        times = np.arange(0.0, tmax + 0.5 * dt, dt)
        values = series.tail.value(times)
    unit = 1.0 if cfg.raw_units else cfg.omega_z
    lines = ["t,re_sx,im_sx"]
    for t, v in zip(times, values):
        lines.append(f"{fmt(t * unit)},{fmt(v.real)},{fmt(v.imag)}")
    _write(cfg.output, _csv(lines))
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    _require_bath(cfg)
    model = baths.spin_model(cfg.bath, cfg.omega_z)
    from .lindblad import steady_state, two_time_sx

    omega_max = cfg.omega_max if cfg.omega_max is not None else 2.5 * max(
        cfg.cavity.omega0, abs(cfg.omega_z)
    )
    omega_min = cfg.omega_min if cfg.omega_min is not None else -omega_max
    omegas = np.linspace(omega_min, omega_max, cfg.omega_points)
    series = two_time_sx(model, steady_state(model).rho)
    chi = response.susceptibility_from_correlator(series, omegas)
    unit = 1.0 if cfg.raw_units else cfg.omega_z
    lines = ["omega,re_det,im_det,re_chi,im_chi"]
    for w in omegas:
        sample = response.cavity_det(float(w), cfg.cavity, cfg.g, chi)
        cv = chi.at(float(w))
        lines.append(
            f"{fmt(w / unit)},{fmt(sample.det.real)},{fmt(sample.det.imag)},"
            f"{fmt(cv.real * unit)},{fmt(cv.imag * unit)}"
        )
    _write(cfg.output, _csv(lines))
    return EXIT_OK


ORACLE_SUITE: tuple[tuple[str, float], ...] = (
    ("dephasing(gamma=0.0, sz=-0.5)", 0.0),
    ("dephasing(gamma=0.3, sz=-0.5)", 0.5),
    ("dephasing(gamma=0.5, sz=-0.3)", 1.0),
    ("thermal(gamma=0.1, T=0.2)", 0.0),
    ("thermal(gamma=0.1, T=0.5)", 0.3),
    ("thermal(gamma=0.3, T=1.0)", 1.0),
    ("generalized(gamma=0.2, t=0.4)", 0.5),
    ("generalized(gamma=0.5, t=0.2)", 0.0),
    ("generalized(gamma=0.3, t=0.7)", 1.0),
)


def cmd_oracle(cfg: RunConfig) -> int:
    lines = ["bath,omega_z,omega0,kappa,g_c_closed,g_star,rel_dev"]
    worst = 0.0
    for bath_text, kappa in ORACLE_SUITE:
        bath = parse_bath(bath_text)
        cavity = baths.CavityParams(omega0=cfg.cavity.omega0, kappa=kappa)
        result = baths.closed_form_gc(bath, cfg.omega_z, cavity, GcMode.SELF_CONSISTENT)
        model = baths.spin_model(bath, cfg.omega_z)
        g_star = meanfield.stability_threshold(
            cavity, model, 0.4 * result.g_c, 2.5 * result.g_c
        )
        dev = abs(g_star - result.g_c) / result.g_c
        worst = max(worst, dev)
        lines.append(
            f"\"{bath_text}\",{fmt(cfg.omega_z)},{fmt(cavity.omega0)},{fmt(kappa)},"
            f"{fmt(result.g_c)},{fmt(g_star)},{fmt(dev)}"
        )
    _write(cfg.output, _csv(lines))
    return EXIT_OK if worst <= cfg.tol else EXIT_ORACLE_DISAGREEMENT


_COMMANDS = {
    "gc": cmd_gc,
    "sweep": cmd_sweep,
    "corr": cmd_corr,
    "spectrum": cmd_spectrum,
    "oracle": cmd_oracle,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _run_config(args)
        return _COMMANDS[args.command](cfg)
    except SystemExit as exc:
        return int(exc.code or 0)
    except DickeCriticError as exc:
        print(f"dicke-critic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
