"""Command-line front end.

Reports print ``key=value`` lines with 6 significant digits; CSV output uses
shortest round-trip number formatting so files re-ingest exactly.

Exit codes: 0 success, 2 usage error, 3 domain or applicability error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings

import numpy as np

from .core import (
    SCENARIO_HEIGHTS,
    ApplicabilityWarning,
    DomainError,
    EnvironmentConstants,
    LinkGeometry,
    ModelId,
    Scenario,
    UnknownModelError,
)
from .fitting import (
    fit_abg,
    fit_ci,
    fit_cif,
    fit_dual_slope,
    read_measurements,
    read_sweep_column,
)
from .los_probability import LOS_PROBABILITY_MODELS, get_los_model
from .o2i import O2IVariant, o2i_total
from .pathloss import get_path_loss_model, mean_path_loss, resolve_model
from .stochastic import (
    DEFAULT_CORRELATION_DISTANCE,
    GridSpec,
    generate_consistency_map,
    sample_path_loss,
)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 2, 3


class UsageError(Exception):
    """Flags or input files that cannot be interpreted."""


def _num(x):
    return f"{x:.6g}"


def _csv_num(x):
    return repr(float(x))


class _Output:
    """``-o PATH`` or stdout, closed only when we opened it."""

    def __init__(self, path, default):
        self.path = path
        self.default = default

    def __enter__(self):
        if self.path in (None, "-"):
            self.fh = self.default
        else:
            self.fh = open(self.path, "w", newline="", encoding="utf-8")
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not self.default:
            self.fh.close()


def _heights(args, scenario):
    default_bs, default_ue = SCENARIO_HEIGHTS[Scenario.parse(scenario)]
    h_bs = default_bs if args.hbs is None else args.hbs
    h_ue = default_ue if args.hue is None else args.hue
    return h_bs, h_ue


def _env(args):
    if args.street_width is None and args.building_height is None:
        return None
    base = EnvironmentConstants()
    return EnvironmentConstants(
        W=base.W if args.street_width is None else args.street_width,
        h=base.h if args.building_height is None else args.building_height,
    )


def _geometry(d, kind, h_bs, h_ue, **extra):
    if d < 1.0:
        raise DomainError(f"d below 1 m reference (got {d:g})")
    if kind == "3d":
        return LinkGeometry.from_d3d(d, h_bs, h_ue, **extra)
    return LinkGeometry(d, h_bs, h_ue, **extra)


def _flush_warnings(caught, err):
    seen = []
    for w in caught:
        msg = str(w.message)
        if issubclass(w.category, ApplicabilityWarning) and msg not in seen:
            seen.append(msg)
    for msg in seen:
        print(f"warning: {msg}", file=err)


def _model_from_flags(args):
    if args.model:
        return ModelId.parse(args.model)
    if not (args.org and args.scenario and args.vis):
        raise UsageError("give --model or all of --org, --scenario, --vis")
    return resolve_model(args.org, args.scenario, args.vis, args.family)


# --------------------------------------------------------------------------
# subcommands


def cmd_pathloss(args, out, err):
    mid = _model_from_flags(args)
    entry = get_path_loss_model(mid)
    h_bs, h_ue = _heights(args, mid.scenario)
    if args.d2d is not None and args.d3d is not None:
        raise UsageError("give only one of --d2d and --d3d")
    if args.d3d is not None:
        geom = _geometry(args.d3d, "3d", h_bs, h_ue)
    else:
        geom = _geometry(100.0 if args.d2d is None else args.d2d, "2d", h_bs, h_ue)
    env = _env(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        mean = mean_path_loss(mid, args.fc, geom, env, strict=args.strict)
    print(f"model={mid}", file=out)
    print(f"pl_db={_num(mean)}", file=out)
    print(f"sigma_db={'n/a' if entry.sigma_sf is None else _num(entry.sigma_sf)}", file=out)
    if args.seed is not None:
        s = sample_path_loss(mid, args.fc, geom, env, rng=args.seed, sigma=args.sigma)
        print(f"sample_db={_num(s)}", file=out)
    _flush_warnings(caught, err)
    return EXIT_OK


def _distances(args, lo_default):
    lo = lo_default if args.dmin is None else args.dmin
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    if not args.dmax > lo:
        raise UsageError("--dmax must exceed --dmin")
    if args.spacing == "log":
        if lo <= 0:
            raise UsageError("log spacing needs --dmin > 0")
        return np.geomspace(lo, args.dmax, args.points)
    return np.linspace(lo, args.dmax, args.points)


def cmd_sweep(args, out, err):
    if not args.model:
        raise UsageError("sweep needs at least one --model")
    if args.dmin is not None and args.dmin < 1.0:
        raise UsageError("--dmin must be >= 1 m")
    models = [ModelId.parse(m) for m in args.model]
    entries = [get_path_loss_model(m) for m in models]
    lo = 10.0
    if args.dkind == "3d":
        # default start keeps d2D >= 10 m for every model's heights
        for entry in entries:
            h_bs, h_ue = _heights(args, entry.id.scenario)
            lo = max(lo, float(math.ceil(math.hypot(10.0, h_bs - h_ue))))
    ds = _distances(args, lo)
    env = _env(args)
    cols = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for entry in entries:
            h_bs, h_ue = _heights(args, entry.id.scenario)
            cols.append([
                mean_path_loss(entry.id, args.fc, _geometry(float(d), args.dkind, h_bs, h_ue), env,
                               strict=args.strict)
                for d in ds
            ])
    with _Output(args.output, out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["d_m"] + [str(m) for m in models])
        for i, d in enumerate(ds):
            w.writerow([_csv_num(d)] + [_csv_num(c[i]) for c in cols])
    _flush_warnings(caught, err)
    return EXIT_OK


def _los_models(args):
    if args.model:
        return [get_los_model(m).id for m in args.model]
    scenario = Scenario.parse(args.scenario)
    found = [m for m in LOS_PROBABILITY_MODELS if m.scenario is scenario]
    if not found:
        raise UsageError(f"no LOS probability models registered for {scenario}")
    return found


def cmd_losprob(args, out, err):
    models = _los_models(args)
    ds = _distances(args, 0.0)
    with _Output(args.output, out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["d_m"] + [str(m) for m in models])
        cols = [np.asarray(get_los_model(m).evaluate(ds, args.hue)) for m in models]
        for i, d in enumerate(ds):
            w.writerow([_csv_num(d)] + [_csv_num(c[i]) for c in cols])
    return EXIT_OK


def _read_reference(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read reference: {exc}") from None
    if not rows or len(rows[0]) != 2 or rows[0][0].strip() != "d_m":
        raise UsageError("reference CSV needs a two-column header starting with d_m")
    d, p = [], []
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            if len(row) != 2:
                raise ValueError(f"expected 2 fields, got {len(row)}")
            dv, pv = float(row[0]), float(row[1])
        except ValueError as exc:
            raise UsageError(f"reference line {line}: {exc}") from None
        if not (dv >= 0 and 0.0 <= pv <= 1.0):
            raise UsageError(f"reference line {line}: need d >= 0 and 0 <= P <= 1")
        d.append(dv)
        p.append(pv)
    if not d:
        raise UsageError("reference CSV has no data rows")
    return np.array(d), np.array(p)


def cmd_losprob_compare(args, out, err):
    d, p = _read_reference(args.reference)
    models = _los_models(args)
    print("model,mse", file=out)
    for m in models:
        diff = np.asarray(get_los_model(m).evaluate(d, args.hue)) - p
        print(f"{m},{_num(float(np.mean(diff * diff)))}", file=out)
    return EXIT_OK


def cmd_o2i(args, out, err):
    mean, sigma = o2i_total(args.plb, O2IVariant(args.variant), args.fc, args.din,
                            indoor_slope=args.indoor_slope, pl_npi=args.npi)
    print(f"variant={args.variant}", file=out)
    print(f"mean_db={_num(mean)}", file=out)
    print(f"sigma_db={_num(sigma)}", file=out)
    return EXIT_OK


def _candidates(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--dbp expects comma-separated meters (got {text!r})") from None


def cmd_fit(args, out, err):
    if args.column is not None:
        if args.fc is None:
            raise UsageError("--column needs --fc")
        records = read_sweep_column(args.input, args.column, args.fc)
    else:
        records = read_measurements(args.input, h_bs=args.hbs, h_ue=args.hue)
    family = args.family
    if family == "ci":
        result = fit_ci(records)
    elif family == "cif":
        result = fit_cif(records, f0=args.f0)
    elif family == "abg":
        result = fit_abg(records)
    else:
        if not args.dbp:
            raise UsageError("dual-slope fits need --dbp candidates")
        result = fit_dual_slope(records, family, _candidates(args.dbp), f0=args.f0)
    print(f"family={result.family}", file=out)
    for name, value in result.parameters().items():
        print(f"{name}={value:.6f}", file=out)
    print(f"sigma={result.sigma:.6f}", file=out)
    print(f"N={result.n}", file=out)
    return EXIT_OK


def cmd_map(args, out, err):
    scenario = Scenario.parse(args.scenario)
    dcor = args.dcor if args.dcor is not None else DEFAULT_CORRELATION_DISTANCE.get(scenario)
    if dcor is None:
        raise UsageError(f"no default correlation distance for {scenario}; pass --dcor")
    sigma = args.sigma
    if sigma is None:
        sigma = get_path_loss_model(resolve_model("tr38901", scenario, "los")).sigma_sf
        if sigma is None:
            raise UsageError(f"no default shadowing sigma for {scenario}; pass --sigma")
    spec = GridSpec.centered(args.size, args.cell, dcor)
    grid = generate_consistency_map(scenario, spec, sigma, los_model=args.los_model,
                                    seed=args.seed, h_ue=args.hue if args.hue is not None else 1.5)
    xs = [_csv_num(x) for x in spec.x_centers()]
    ys = [_csv_num(y) for y in spec.y_centers()]
    los = grid.los.astype(np.int8)
    with _Output(args.output, out) as fh:
        fh.write("x_m,y_m,los,shadow_db\n")
        for i, y in enumerate(ys):
            row_los = los[i]
            row_sh = grid.shadow_db[i].tolist()
            fh.write("".join(f"{xs[j]},{y},{row_los[j]},{row_sh[j]!r}\n" for j in range(len(xs))))
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _add_model_flags(p):
    p.add_argument("--model", help="model id org:scenario:vis:family")
    p.add_argument("--org")
    p.add_argument("--scenario")
    p.add_argument("--vis")
    p.add_argument("--family")


def _add_heights(p):
    p.add_argument("--hbs", type=float, help="BS height in m (scenario default)")
    p.add_argument("--hue", type=float, help="UE height in m (scenario default)")


def _add_env(p):
    p.add_argument("--street-width", type=float, dest="street_width")
    p.add_argument("--building-height", type=float, dest="building_height")


def _add_grid(p, dmin, dmax, points, spacing):
    p.add_argument("--dmin", type=float, default=dmin)
    p.add_argument("--dmax", type=float, default=dmax)
    p.add_argument("--points", type=int, default=points)
    p.add_argument("--spacing", choices=("linear", "log"), default=spacing)


def build_parser():
    parser = argparse.ArgumentParser(prog="mmprop", description="mmWave propagation models")
    parser.add_argument("--config", help="flat JSON file of flag defaults (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pathloss", help="evaluate one path loss model")
    _add_model_flags(p)
    p.add_argument("--fc", type=float, required=True, help="GHz")
    p.add_argument("--d2d", type=float, help="m (default 100)")
    p.add_argument("--d3d", type=float, help="m")
    _add_heights(p)
    _add_env(p)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--seed", type=int, help="also draw one shadow-faded sample")
    p.add_argument("--sigma", type=float, help="override shadow-fading sigma (dB)")
    p.set_defaults(func=cmd_pathloss)

    p = sub.add_parser("sweep", help="path loss curves as CSV")
    p.add_argument("--model", action="append", default=[])
    p.add_argument("--fc", type=float, required=True)
    _add_grid(p, None, 500.0, 50, "log")
    p.add_argument("--dkind", choices=("2d", "3d"), default="3d", help="meaning of d_m")
    _add_heights(p)
    _add_env(p)
    p.add_argument("--strict", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    for name, func, helptext in (
        ("losprob", cmd_losprob, "LOS probability curves as CSV"),
        ("losprob-compare", cmd_losprob_compare, "MSE of models against a reference curve"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--model", action="append", default=[])
        p.add_argument("--scenario", default="uma")
        p.add_argument("--hue", type=float, default=1.5)
        if name == "losprob":
            _add_grid(p, None, 1000.0, 101, "linear")
            p.add_argument("-o", "--output")
        else:
            p.add_argument("--reference", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("o2i", help="outdoor-to-indoor loss")
    p.add_argument("--variant", choices=[v.value for v in O2IVariant], required=True)
    p.add_argument("--fc", type=float, required=True)
    p.add_argument("--plb", type=float, default=0.0, help="outdoor path loss in dB")
    p.add_argument("--din", type=float, default=0.0, help="indoor distance in m")
    p.add_argument("--indoor-slope", type=float, dest="indoor_slope")
    p.add_argument("--npi", type=float, help="non-perpendicular-incidence loss in dB")
    p.set_defaults(func=cmd_o2i)

    p = sub.add_parser("fit", help="fit a path loss model to measurements")
    p.add_argument("--family", choices=("ci", "cif", "abg", "dual-cif", "dual-abg"), required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--f0", type=float)
    p.add_argument("--dbp", help="comma-separated breakpoint candidates in m")
    p.add_argument("--column", help="model column of a sweep CSV")
    p.add_argument("--fc", type=float, help="frequency of the --column data")
    _add_heights(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("map", help="spatially consistent LOS/shadowing map as CSV")
    p.add_argument("--scenario", required=True)
    p.add_argument("--size", type=int, default=512, help="cells per side")
    p.add_argument("--cell", type=float, default=2.0, help="cell size in m")
    p.add_argument("--dcor", type=float, help="correlation distance in m")
    p.add_argument("--sigma", type=float, help="shadowing sigma in dB")
    p.add_argument("--los-model", dest="los_model")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hue", type=float)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_map)
    return parser


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict) or any(isinstance(v, dict) for v in data.values()):
        raise UsageError("config must be a flat JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _parse(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        config = _load_config(known.config)
        choices = parser._subparsers._group_actions[0].choices
        command = next((tok for tok in (argv or sys.argv[1:]) if tok in choices), None)
        if command is not None:
            subparser = choices[command]
            unknown = sorted(set(config) - {a.dest for a in subparser._actions})
            if unknown:
                raise UsageError(f"unknown config keys for {command}: {', '.join(unknown)}")
            for action in subparser._actions:
                if action.dest in config:
                    action.required = False
            subparser.set_defaults(**config)
    return parser.parse_args(argv)


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = _parse(parser, argv)
        return args.func(args, out, err)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (UsageError, UnknownModelError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
