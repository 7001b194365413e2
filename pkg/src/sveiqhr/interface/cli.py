"""Command-line interface.

Every subcommand accepts --config (a JSON scenario file) plus override
flags; flags win over the file. Numeric output is emitted at full double
precision so runs are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .. import dynamics, equilibrium, strategy
from ..errors import ModelError, ValidationError
from ..model import PARAM_ORDER
from . import config as cfgmod


def _add_param_flags(sub):
    sub.add_argument("--config", help="JSON scenario file")
    sub.add_argument("--delta", type=float, help="vaccine efficacy in [0,1]")
    for u in ("u1", "u2", "u3", "u4", "u5"):
        sub.add_argument(f"--{u}", type=float, help=f"intervention rate {u}")
    sub.add_argument("--ppkm-level", type=int, dest="ppkm_level",
                     help="set u2 from a PPKM restriction level (1-4)")
    sub.add_argument("--set", action="append", default=[], metavar="NAME=VALUE",
                     help="override any model parameter by external name")


def _fragment_from_args(args) -> dict:
    fragment = {}
    if args.config:
        cfg = cfgmod.load_config(args.config)
        fragment.update(cfg.params.as_dict())
    for name in ("delta", "u1", "u2", "u3", "u4", "u5"):
        value = getattr(args, name, None)
        if value is not None:
            fragment[name] = value
    if getattr(args, "ppkm_level", None) is not None:
        fragment.pop("u2", None)
        fragment["ppkm_level"] = args.ppkm_level
    for item in getattr(args, "set", []):
        name, sep, value = item.partition("=")
        if not sep:
            raise ValidationError("--set", f"expected NAME=VALUE, got {item!r}")
        try:
            fragment[name] = float(value)
        except ValueError:
            raise ValidationError(name, f"not a number: {value!r}") from None
    return fragment


def _params_from_args(args, require_u2=True):
    return cfgmod.parameters_from_fragment(_fragment_from_args(args), require_u2=require_u2)


def _scenario_from_args(args) -> cfgmod.ScenarioConfig:
    base = cfgmod.load_config(args.config) if args.config else None
    params = cfgmod.parameters_from_fragment(_fragment_from_args(args))
    initial = base.initial if base else "default"
    if getattr(args, "initial", None):
        initial = cfgmod._initial_from_value(args.initial)
    integrator = base.integrator if base else dynamics.IntegratorConfig(horizon=365.0)
    overrides = {}
    for key in ("horizon", "sample_interval", "method", "step", "abs_tol", "rel_tol"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if overrides:
        integrator = dynamics.IntegratorConfig(
            horizon=overrides.get("horizon", integrator.horizon),
            sample_interval=overrides.get("sample_interval", integrator.sample_interval),
            method=overrides.get("method", integrator.method),
            step=overrides.get("step", integrator.step),
            abs_tol=overrides.get("abs_tol", integrator.abs_tol),
            rel_tol=overrides.get("rel_tol", integrator.rel_tol),
        )
    outputs = base.outputs if base else ("trajectory",)
    return cfgmod.ScenarioConfig(params=params, initial=initial,
                                 integrator=integrator, outputs=outputs)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_r0(args) -> int:
    params = _params_from_args(args)
    print(repr(equilibrium.compute_r0(params)))
    return 0


def _cmd_simulate(args) -> int:
    started = time.monotonic()
    scenario = _scenario_from_args(args)
    traj = dynamics.simulate(scenario.params, scenario.resolve_initial(), scenario.integrator)
    _emit(traj.to_csv(), args.out)
    if args.manifest:
        paths = [args.out] if args.out else []
        manifest = cfgmod.make_manifest(cfgmod.config_to_dict(scenario), paths, started)
        Path(args.manifest).write_text(manifest.to_json(indent=2), encoding="utf-8")
    summary = dynamics.peak_and_limit(traj)
    print(f"peak non_healthy {summary.peak!r} at t={summary.peak_time!r}; "
          f"terminal {summary.terminal!r}", file=sys.stderr)
    return 0


def _cmd_equilibria(args) -> int:
    params = _params_from_args(args)
    report = {
        "disease_free": equilibrium.dfe_stability(params).as_dict(),
        "endemic": equilibrium.endemic_equilibrium(params).as_dict(),
    }
    _emit(json.dumps(report, indent=2), args.out)
    return 0


def _cmd_sensitivity(args) -> int:
    params = _params_from_args(args)
    table = strategy.significance_ranking(params)
    if args.format == "json":
        _emit(table.to_json(indent=2), args.out)
    else:
        _emit(table.to_csv(), args.out)
    return 0


def _cmd_region(args) -> int:
    params = _params_from_args(args, require_u2=False)
    geometry = strategy.region_geometry(params, params.delta)
    _emit(geometry.to_json(indent=2), args.out)
    return 0


def _cmd_sweep(args) -> int:
    params = _params_from_args(args)
    targets = [t.strip() for t in args.targets.split(",") if t.strip()]
    boosts = [float(b) for b in args.boosts.split(",") if b.strip()]
    config = dynamics.IntegratorConfig(horizon=args.horizon,
                                       sample_interval=args.sample_interval)
    result = strategy.intervention_sweep(params, targets, boosts, config=config)
    if args.format == "json":
        _emit(result.to_json(indent=2), args.out)
    else:
        _emit(result.to_csv(), args.out)
    return 0


def _write_figures(outdir: Path, params) -> list:
    """Regenerate the data files behind the headline charts: R0 slices,
    feasible regions, sensitivity tables, delta-sweep trajectories and
    intervention-boost comparisons."""
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    def save(name, text):
        path = outdir / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    u2_grid = np.linspace(0.0, 1.0, 1001)
    for delta in (0.653, 0.9, 0.93):
        tag = ("%g" % delta).replace(".", "")
        # R0 against u2 at the baseline and low vaccination rates
        rows = ["u2,r0_u1_0.4,r0_u1_0.064"]
        hi = strategy.r0_on_plane(params, delta, 0.4, u2_grid)
        lo = strategy.r0_on_plane(params, delta, 0.064, u2_grid)
        for x, a, b in zip(u2_grid, hi, lo):
            rows.append("%.17g,%.17g,%.17g" % (x, a, b))
        save(f"r0_vs_u2_delta{tag}.csv", "\n".join(rows) + "\n")

        geometry = strategy.region_geometry(params, delta)
        save(f"region_delta{tag}.json", geometry.to_json(indent=2) + "\n")

    rows = ["u2,r0"]
    for x, v in zip(u2_grid, strategy.r0_on_plane(params, params.delta, 0.0, u2_grid)):
        rows.append("%.17g,%.17g" % (x, v))
    save("r0_vs_u2_no_vaccination.csv", "\n".join(rows) + "\n")

    df_params = params.with_value("u1", 1e-8).with_value("u2", 0.93)
    save("sensitivity_disease_free.csv", strategy.significance_ranking(df_params).to_csv())
    save("sensitivity_endemic.csv", strategy.significance_ranking(params).to_csv())

    config = dynamics.IntegratorConfig(horizon=3650.0, sample_interval=5.0)
    initial = dynamics.default_initial()
    sweep_cols = []
    for delta in (0.653, 0.9, 0.93):
        traj = dynamics.simulate(params.with_value("delta", delta), initial, config)
        sweep_cols.append(traj.non_healthy)
    rows = ["t,delta_0.653,delta_0.9,delta_0.93"]
    for i, t in enumerate(traj.times):
        rows.append("%.17g,%.17g,%.17g,%.17g"
                    % (t, sweep_cols[0][i], sweep_cols[1][i], sweep_cols[2][i]))
    save("non_healthy_delta_sweep.csv", "\n".join(rows) + "\n")

    result = strategy.intervention_sweep(params, ("u1", "u2", "u3", "u4", "u5"),
                                         (0.3, 0.6), initial=initial, config=config)
    save("intervention_boosts.csv", result.to_csv())
    return written


def _cmd_figures(args) -> int:
    started = time.monotonic()
    params = _params_from_args(args)
    outdir = Path(args.out)
    written = _write_figures(outdir, params)
    manifest = cfgmod.make_manifest({"parameters": params.as_dict()}, written, started)
    (outdir / "manifest.json").write_text(manifest.to_json(indent=2), encoding="utf-8")
    print(f"wrote {len(written)} files to {outdir}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sveiqhr",
        description="SVEIQHR intervention model: simulation, R0, equilibria, "
                    "sensitivity ranking and feasible-region geometry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("r0", help="print the basic reproduction number")
    _add_param_flags(s)
    s.set_defaults(func=_cmd_r0)

    s = sub.add_parser("simulate", help="integrate the model and emit a trajectory CSV")
    _add_param_flags(s)
    s.add_argument("--initial", help="preset name (default, dfe)")
    s.add_argument("--horizon", type=float, help="days to simulate")
    s.add_argument("--sample-interval", type=float, dest="sample_interval")
    s.add_argument("--method", choices=("rk45", "rk4"))
    s.add_argument("--step", type=float, help="fixed step for rk4 (days)")
    s.add_argument("--abs-tol", type=float, dest="abs_tol")
    s.add_argument("--rel-tol", type=float, dest="rel_tol")
    s.add_argument("--out", help="CSV path (stdout when omitted)")
    s.add_argument("--manifest", help="write a run manifest JSON here")
    s.set_defaults(func=_cmd_simulate)

    s = sub.add_parser("equilibria", help="disease-free and endemic equilibrium reports")
    _add_param_flags(s)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_equilibria)

    s = sub.add_parser("sensitivity", help="sensitivity indices and significance ranking")
    _add_param_flags(s)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=_cmd_sensitivity)

    s = sub.add_parser("region", help="feasible-region geometry in the (u1, u2) plane")
    _add_param_flags(s)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_region)

    s = sub.add_parser("sweep", help="compare boosted interventions against the baseline")
    _add_param_flags(s)
    s.add_argument("--targets", default="u1,u2,u3,u4,u5",
                   help="comma-separated subset of u1..u5")
    s.add_argument("--boosts", default="0.3,0.6", help="comma-separated fractions")
    s.add_argument("--horizon", type=float, default=730.0)
    s.add_argument("--sample-interval", type=float, dest="sample_interval", default=1.0)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=_cmd_sweep)

    s = sub.add_parser("figures", help="regenerate the headline chart data as CSV/JSON")
    _add_param_flags(s)
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=_cmd_figures)

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    s.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
