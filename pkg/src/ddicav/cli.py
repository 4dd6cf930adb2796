"""Command-line front end and sweep engine.

    ddicav <spectrum|dressed|avoided-crossing|bistability|relax|hysteresis|oracle|figure>
           [--config FILE] [--set key=value]... [--out FILE] [--format csv|json]

Exit status: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import __version__
from . import dressed, lowexc, meanfield, oracle, saturation
from .errors import ConfigError, NumericalError
from .params import SystemParams, parse_overrides, read_config_file, resolve_params
from .recipes import RunConfig, RunRegime, Sweep, figure_recipe

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


@dataclass
class Table:
    columns: list
    rows: list


def _at(p: SystemParams, axis: str, value: float) -> SystemParams:
    return p.replace(**{axis: float(value)})


def _points(config: RunConfig):
    """Yield ``(sweep value, params)`` in grid order."""
    for value in config.sweep.grid():
        yield float(value), _at(config.params, config.sweep.axis, value)


def _require_axis(config: RunConfig, axis: str):
    if config.sweep.axis != axis:
        raise ConfigError(f"{config.regime.value} sweeps must run along {axis}, "
                          f"got {config.sweep.axis}")


def _lead(config: RunConfig):
    return [] if config.sweep.axis == "delta_c" else [config.sweep.axis]


def _tagged(value, fn, *args):
    try:
        return fn(*args)
    except NumericalError as exc:
        exc.point = value
        raise


def _run_low(config):
    cols = _lead(config) + ["delta_c", "photon_number", "re_a", "im_a", "re_sigma", "im_sigma"]
    rows = []
    for value, p in _points(config):
        st = _tagged(value, lowexc.steady_state_low, p)
        lead = [value] if _lead(config) else []
        rows.append(lead + [p.delta_c, st.photon_number, st.a0.real, st.a0.imag,
                            st.sigma0.real, st.sigma0.imag])
    return Table(cols, rows)


def _run_saturated(config):
    form = config.options.get("form", saturation.DEFAULT_FORM)
    classify = form == saturation.DEFAULT_FORM
    cols = _lead(config) + ["delta_c", "branch_index", "s0", "photon_number", "stable"]
    rows = []
    for value, p in _points(config):
        branches = _tagged(value, saturation.steady_states, p, form, classify)
        lead = [value] if _lead(config) else []
        for i, b in enumerate(branches):
            stable = "" if b.stable is None else int(b.stable)
            rows.append(lead + [p.delta_c, i, b.s0, b.photon_number, stable])
    return Table(cols, rows)


def _run_oracle(config):
    n_max = int(config.options.get("n_max", oracle.DEFAULT_N_MAX))
    spec = oracle.HilbertSpec(n_max)
    cols = _lead(config) + ["delta_c", "q_photon_number", "semiclassical_photon_number",
                            "relative_diff", "n_max"]
    rows = []
    for value, p in _points(config):
        rho = _tagged(value, oracle.steady_state_quantum, p, spec)
        q = oracle.expectation(rho, "photon_number")
        sc = _tagged(value, lowexc.steady_state_low, p).photon_number
        rel = abs(q - sc) / sc if sc else float("nan")
        lead = [value] if _lead(config) else []
        rows.append(lead + [p.delta_c, q, sc, rel, n_max])
    return Table(cols, rows)


def _run_dressed(config):
    levels = int(config.options.get("levels", 3))
    ref = float(config.options.get("omega_c_ref", 0.0))
    if levels < 1:
        raise ConfigError("--levels must be >= 1")
    rows = []
    for n in range(1, levels + 1):
        for lev in dressed.dressed_energies(n, config.params, ref):
            rows.append([lev.n, lev.branch.value, lev.energy, lev.theta_n])
    return Table(["n", "branch", "energy", "theta_n"], rows)


def _run_avoided(config):
    _require_axis(config, "delta")
    rows = []
    for d, pair in dressed.avoided_crossing(config.params, config.sweep.grid()):
        rows.append([d, pair.omega_minus.real, pair.omega_minus.imag,
                     pair.omega_plus.real, pair.omega_plus.imag])
    return Table(["delta", "re_omega_minus", "im_omega_minus", "re_omega_plus", "im_omega_plus"], rows)


def _run_bistability(config):
    _require_axis(config, "delta_c")
    form = config.options.get("form", saturation.DEFAULT_FORM)
    grid = config.sweep.grid()
    folds = saturation.fold_points(config.params, grid, form)
    rows = []
    for i, dc in enumerate(folds):
        left = saturation.root_count(config.params.replace(delta_c=dc - 1e-8), form)
        right = saturation.root_count(config.params.replace(delta_c=dc + 1e-8), form)
        rows.append([i, dc, left, right])
    return Table(["fold_index", "delta_c", "roots_left", "roots_right"], rows)


def _state_row(lead, s: meanfield.MeanFieldState):
    return lead + [s.a.real, s.a.imag, s.sigma1z, s.photon_number]


def _run_relax(config):
    t_max = config.options.get("t_max")
    samples = int(config.options.get("samples", 201))
    traj = meanfield.relax_trajectory(config.params, None, t_max, samples)
    return Table(["t", "re_a", "im_a", "sigma1z", "photon_number"],
                 [_state_row([t], s) for t, s in traj])


def _run_hysteresis(config):
    _require_axis(config, "delta_c")
    grid = list(config.sweep.grid())
    up = meanfield.hysteresis_sweep(config.params, grid)
    down = meanfield.hysteresis_sweep(config.params, grid[::-1], init=up[-1][1])
    rows = [_state_row(["up", dc], s) for dc, s in up]
    rows += [_state_row(["down", dc], s) for dc, s in down]
    return Table(["direction", "delta_c", "re_a", "im_a", "sigma1z", "photon_number"], rows)


_DISPATCH = {
    RunRegime.low: _run_low,
    RunRegime.saturated: _run_saturated,
    RunRegime.oracle: _run_oracle,
    RunRegime.dressed: _run_dressed,
    RunRegime.avoided_crossing: _run_avoided,
    RunRegime.bistability: _run_bistability,
    RunRegime.relax: _run_relax,
    RunRegime.hysteresis: _run_hysteresis,
}


def run(config: RunConfig) -> Table:
    """Evaluate one configuration over its sweep grid (in grid order)."""
    return _DISPATCH[config.regime](config)


def _meta(config: RunConfig) -> dict:
    meta = {
        "tool": f"ddicav {__version__}",
        "regime": config.regime.value,
        "params": config.params.as_dict(),
    }
    if config.regime not in (RunRegime.dressed, RunRegime.relax):
        meta["sweep"] = {"axis": config.sweep.axis, "start": config.sweep.start,
                         "stop": config.sweep.stop, "count": config.sweep.count}
    if config.label:
        meta["label"] = config.label
    if config.options:
        meta["options"] = dict(sorted(config.options.items()))
    if config.filled:
        meta["filled_defaults"] = config.filled
    return meta


def _cell(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def format_tables(blocks, fmt: str) -> str:
    """Render ``[(meta, table, curve_labels_or_None)]`` deterministically."""
    if fmt == "json":
        out = []
        for meta, table, labels in blocks:
            cols = (["curve"] if labels else []) + table.columns
            rows = [([lab] if labels else []) + row for lab, row in
                    zip(labels or [None] * len(table.rows), table.rows)]
            out.append({"meta": meta, "columns": cols, "rows": rows})
        payload = out[0] if len(out) == 1 else {"tables": out}
        return json.dumps(payload, indent=1, sort_keys=False) + "\n"
    buf = io.StringIO()
    for k, (meta, table, labels) in enumerate(blocks):
        if k:
            buf.write("\n")
        for key, value in meta.items():
            buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow((["curve"] if labels else []) + table.columns)
        for i, row in enumerate(table.rows):
            writer.writerow(([labels[i]] if labels else []) + [_cell(x) for x in row])
    return buf.getvalue()


def run_figure(configs) -> list:
    """Group a figure's curves by column layout into labelled tables."""
    groups = []
    for config in configs:
        table = run(config)
        labels = [config.label] * len(table.rows)
        meta = _meta(config)
        for g in groups:
            if g[1].columns == table.columns:
                g[0].setdefault("curves", []).append(meta)
                g[1].rows.extend(table.rows)
                g[2].extend(labels)
                break
        else:
            groups.append(({"curves": [meta]}, Table(list(table.columns), list(table.rows)), labels))
    out = []
    for meta, table, labels in groups:
        curves = meta["curves"]
        head = {"tool": f"ddicav {__version__}", "figure": curves[0]["filled_defaults"]["figure"],
                "regime": curves[0]["regime"],
                "filled_defaults": curves[0]["filled_defaults"],
                "curves": [{k: v for k, v in c.items() if k not in ("tool", "filled_defaults")}
                           for c in curves]}
        out.append((head, table, labels))
    return out


def _parse_sweep(values, default: Sweep) -> Sweep:
    if values is None:
        return default
    axis, start, stop, count = values
    try:
        return Sweep(axis, float(start), float(stop), int(count))
    except ValueError as exc:
        raise ConfigError(f"bad --sweep {values}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value parameter file")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one parameter (repeatable); pump_ratio sets eta^2/kappa^2")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    sweep_help = "AXIS START STOP COUNT with AXIS in delta_c, delta, j_ddi, eta"
    parser = argparse.ArgumentParser(prog="ddicav", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ddicav {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[common], help="transmission spectrum")
    sp.add_argument("--regime", choices=("low", "saturated"), default="low")
    sp.add_argument("--form", choices=saturation.FORMS, default=saturation.DEFAULT_FORM,
                    help="saturation equation form (saturated regime only)")
    sp.add_argument("--sweep", nargs=4, metavar=("AXIS", "START", "STOP", "COUNT"), help=sweep_help)

    sp = sub.add_parser("dressed", parents=[common], help="dressed-state energies")
    sp.add_argument("--levels", type=int, default=3, help="excitation manifolds 1..LEVELS")
    sp.add_argument("--omega-c-ref", type=float, default=0.0)

    sp = sub.add_parser("avoided-crossing", parents=[common], help="normal modes versus delta")
    sp.add_argument("--sweep", nargs=4, metavar=("AXIS", "START", "STOP", "COUNT"), help=sweep_help)

    sp = sub.add_parser("bistability", parents=[common], help="fold points of the saturated spectrum")
    sp.add_argument("--form", choices=saturation.FORMS, default=saturation.DEFAULT_FORM)
    sp.add_argument("--sweep", nargs=4, metavar=("AXIS", "START", "STOP", "COUNT"), help=sweep_help)

    sp = sub.add_parser("relax", parents=[common], help="mean-field time series from the vacuum")
    sp.add_argument("--t-max", type=float)
    sp.add_argument("--samples", type=int, default=201)

    sp = sub.add_parser("hysteresis", parents=[common], help="up/down quasi-static sweep")
    sp.add_argument("--sweep", nargs=4, metavar=("AXIS", "START", "STOP", "COUNT"), help=sweep_help)

    sp = sub.add_parser("oracle", parents=[common], help="quantum master-equation spectrum")
    sp.add_argument("--n-max", type=int, default=oracle.DEFAULT_N_MAX)
    sp.add_argument("--sweep", nargs=4, metavar=("AXIS", "START", "STOP", "COUNT"), help=sweep_help)

    sp = sub.add_parser("figure", parents=[common], help="figure-reproduction recipe")
    sp.add_argument("number", type=int, choices=range(1, 7))
    return parser


_DEFAULT_SWEEPS = {
    "spectrum": Sweep("delta_c", -5.0, 5.0, 2001),
    "avoided-crossing": Sweep("delta", -4.0, 4.0, 401),
    "bistability": Sweep("delta_c", -5.0, 5.0, 1001),
    "hysteresis": Sweep("delta_c", -3.0, 3.0, 301),
    "oracle": Sweep("delta_c", -4.0, 4.0, 41),
}


def config_from_args(args) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    values.update(parse_overrides(args.set))
    params = resolve_params(values)
    cmd = args.command
    options = {}
    if cmd == "spectrum":
        regime = RunRegime(args.regime)
        if regime is RunRegime.saturated and args.form != saturation.DEFAULT_FORM:
            options["form"] = args.form
    elif cmd == "bistability":
        regime = RunRegime.bistability
        if args.form != saturation.DEFAULT_FORM:
            options["form"] = args.form
    elif cmd == "dressed":
        regime = RunRegime.dressed
        options = {"levels": args.levels, "omega_c_ref": args.omega_c_ref}
    elif cmd == "relax":
        regime = RunRegime.relax
        options = {"samples": args.samples}
        if args.t_max is not None:
            options["t_max"] = args.t_max
    elif cmd == "oracle":
        regime = RunRegime.oracle
        options = {"n_max": args.n_max}
    else:
        regime = RunRegime(cmd)
    sweep = _parse_sweep(getattr(args, "sweep", None), _DEFAULT_SWEEPS.get(cmd, Sweep()))
    return RunConfig(params, regime, sweep, args.out, args.format, options=options)


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write output {path}: {exc}") from None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "figure":
            if args.config or args.set:
                raise ConfigError("figure recipes take no parameter overrides")
            blocks = run_figure(figure_recipe(args.number))
        else:
            config = config_from_args(args)
            blocks = [(_meta(config), run(config), None)]
        _emit(format_tables(blocks, args.format), args.out)
    except ConfigError as exc:
        print(f"ddicav: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"ddicav: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
