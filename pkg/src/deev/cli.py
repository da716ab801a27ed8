"""Command-line front end: field, wigner, sit, verify, coupler.

Configuration is a strict JSON document; unknown keys anywhere are
rejected (exit code 2) so a typo cannot silently fall back to a default.
Outputs are written atomically and are byte-identical across runs and
thread counts.
"""

import argparse
import json
import os
import sys

from .coupling import (DcdcParams, InfeasibleRatioError, bs_coupler,
                       coupler_to_ellipticity, dcdc_coupler, dcdc_time_for_ratio)
from .gridio import AxisSpec, GridSpec, write_csv, write_pgm
from .oracle import QuadratureSpec
from .state import DeevParams, intensity_field
from .verify import canonical_slice_grid, run_verify
from .wigner import SlicePlane, sit_field, wigner_slice

__all__ = ["main", "ConfigError", "load_config"]


class ConfigError(ValueError):
    pass


def _require_keys(block, allowed, required, where):
    if not isinstance(block, dict):
        raise ConfigError(f"{where}: expected an object, got {type(block).__name__}")
    unknown = set(block) - set(allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}; allowed: {sorted(allowed)}")
    missing = set(required) - set(block)
    if missing:
        raise ConfigError(f"{where}: missing required key(s) {sorted(missing)}")


def _number(block, key, where, cls=float):
    v = block[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    if cls is int and not float(v).is_integer():
        raise ConfigError(f"{where}.{key}: expected an integer, got {v!r}")
    return cls(v)


_TOP_KEYS = ("state", "coupler", "grid", "quadrature", "sit", "wigner", "out_dir", "seed")
_STATE_KEYS = ("m", "sigma_x", "sigma_y", "sign", "x0", "y0", "px0", "py0", "eta_x", "eta_y")


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {path} is not valid JSON: {err}") from err
    _require_keys(raw, _TOP_KEYS, (), "config")
    return raw


def _state_params(cfg):
    if "state" not in cfg:
        raise ConfigError("config: missing 'state' block")
    st = cfg["state"]
    _require_keys(st, _STATE_KEYS, ("m", "sigma_x", "sigma_y"), "state")
    m = _number(st, "m", "state", int)
    sx = _number(st, "sigma_x", "state")
    sy = _number(st, "sigma_y", "state")
    if not (sx > 0 and sy > 0):
        raise ConfigError("state: sigma_x and sigma_y must be positive")
    kwargs = {}
    for key in ("x0", "y0", "px0", "py0"):
        if key in st:
            kwargs[key] = _number(st, key, "state")
    if "sign" in st:
        kwargs["sign"] = _number(st, "sign", "state", int)
    try:
        if ("eta_x" in st) != ("eta_y" in st):
            raise ConfigError("state: give both eta_x and eta_y or neither")
        if "eta_x" in st:
            return DeevParams.from_sigmas(m, sx, sy, eta_x=_number(st, "eta_x", "state"),
                                          eta_y=_number(st, "eta_y", "state"), **kwargs)
        return DeevParams.tied(m, sx, sy, **kwargs)
    except ValueError as err:
        raise ConfigError(f"state: {err}") from err


def _axis(block, where):
    _require_keys(block, ("label", "min", "max", "count"), ("label", "min", "max", "count"), where)
    try:
        return AxisSpec(label=block["label"], lo=_number(block, "min", where),
                        hi=_number(block, "max", where), count=_number(block, "count", where, int))
    except ValueError as err:
        raise ConfigError(f"{where}: {err}") from err


def _grid(cfg):
    if "grid" not in cfg:
        return None
    g = cfg["grid"]
    _require_keys(g, ("axis1", "axis2"), ("axis1", "axis2"), "grid")
    return GridSpec(axis1=_axis(g["axis1"], "grid.axis1"), axis2=_axis(g["axis2"], "grid.axis2"))


def _quadrature(cfg):
    if "quadrature" not in cfg:
        return QuadratureSpec()
    qb = cfg["quadrature"]
    _require_keys(qb, ("abs_tol", "rel_tol", "max_subdivisions", "truncation_radius"), (), "quadrature")
    kwargs = {}
    for key, cls in (("abs_tol", float), ("rel_tol", float),
                     ("max_subdivisions", int), ("truncation_radius", float)):
        if key in qb:
            kwargs[key] = _number(qb, key, "quadrature", cls)
    try:
        return QuadratureSpec(**kwargs)
    except ValueError as err:
        raise ConfigError(f"quadrature: {err}") from err


def _out_dir(cfg, args):
    out = args.out or cfg.get("out_dir", ".")
    if not isinstance(out, str):
        raise ConfigError(f"out_dir: expected a string, got {out!r}")
    os.makedirs(out, exist_ok=True)
    return out


def _write_pair(field, out_dir, stem, clamp):
    csv_path = os.path.join(out_dir, stem + ".csv")
    pgm_path = os.path.join(out_dir, stem + ".pgm")
    write_csv(field, csv_path)
    write_pgm(field, pgm_path, clamp=clamp)
    return csv_path, pgm_path


def _clamp_value(args):
    if args.clamp is None or args.clamp == "auto":
        return "auto"
    try:
        v = float(args.clamp)
    except ValueError:
        raise ConfigError(f"--clamp: expected a number or 'auto', got {args.clamp!r}") from None
    if not v > 0:
        raise ConfigError("--clamp must be positive")
    return v


def cmd_field(args):
    cfg = load_config(args.config)
    params = _state_params(cfg)
    grid = _grid(cfg)
    if grid is None:
        grid = GridSpec(
            axis1=AxisSpec("x", params.x0 - 3.4 * params.sigma_x, params.x0 + 3.4 * params.sigma_x, 201),
            axis2=AxisSpec("y", params.y0 - 3.4 * params.sigma_y, params.y0 + 3.4 * params.sigma_y, 201))
    if (grid.axis1.label, grid.axis2.label) != ("x", "y"):
        raise ConfigError("field: grid axes must be labeled x and y")
    out = _out_dir(cfg, args)
    field = intensity_field(params, grid, threads=args.threads)
    for p in _write_pair(field, out, "intensity", _clamp_value(args)):
        print(p)
    return 0


def cmd_wigner(args):
    cfg = load_config(args.config)
    params = _state_params(cfg)
    wb = cfg.get("wigner", {})
    _require_keys(wb, ("plane", "form"), (), "wigner")
    form = wb.get("form", "standard")
    if form not in ("standard", "candidate"):
        raise ConfigError(f"wigner.form: expected 'standard' or 'candidate', got {form!r}")
    if args.form:
        form = args.form
    plane_name = args.plane or wb.get("plane", "all")
    out = _out_dir(cfg, args)
    clamp = _clamp_value(args)
    if plane_name == "all":
        planes = list(SlicePlane)
    else:
        try:
            planes = [SlicePlane.from_name(plane_name)]
        except ValueError as err:
            raise ConfigError(str(err)) from err
    grid_override = _grid(cfg)
    for plane in planes:
        if grid_override is not None and (grid_override.axis1.label, grid_override.axis2.label) == plane.axis_labels:
            grid = grid_override
        else:
            grid = canonical_slice_grid(params, plane)
        try:
            field = wigner_slice(params, plane, grid, form=form, threads=args.threads)
        except ValueError as err:
            raise ConfigError(str(err)) from err
        for p in _write_pair(field, out, f"wigner_{plane.name.lower()}_{form}", clamp):
            print(p)
    return 0


def cmd_sit(args):
    cfg = load_config(args.config)
    sb = cfg.get("sit", {})
    _require_keys(sb, ("m", "form", "clamp"), (), "sit")
    if args.m is not None:
        orders = [args.m]
    elif "m" in sb:
        raw = sb["m"]
        orders = [raw] if not isinstance(raw, list) else list(raw)
        orders = [_number({"m": v}, "m", "sit", int) for v in orders]
    else:
        raise ConfigError("sit: no vortex order given (sit.m in config or --m)")
    form = sb.get("form", "sum")
    if form not in ("sum", "difference"):
        raise ConfigError(f"sit.form: expected 'sum' or 'difference', got {form!r}")
    if "state" in cfg:
        params = _state_params(cfg)
        sx, sy = params.sigma_x, params.sigma_y
    else:
        sx = sy = 1.0
    cap = sb.get("clamp", 1e12)
    if not isinstance(cap, (int, float)) or isinstance(cap, bool) or not cap > 0:
        raise ConfigError(f"sit.clamp: expected a positive number, got {cap!r}")
    grid = _grid(cfg) or GridSpec(axis1=AxisSpec("r", -5.0, 5.0, 201), axis2=AxisSpec("s", -5.0, 5.0, 201))
    out = _out_dir(cfg, args)
    clamp = _clamp_value(args)
    if clamp == "auto":
        clamp = float(cap)
    for m in orders:
        try:
            field = sit_field(m, sx, sy, grid, form=form, clamp_cap=float(cap), threads=args.threads)
        except ValueError as err:
            raise ConfigError(str(err)) from err
        for p in _write_pair(field, out, f"sit_m{m}_{form}", clamp):
            print(p)
    return 0


def cmd_verify(args):
    cfg = load_config(args.config)
    params = _state_params(cfg)
    q = _quadrature(cfg)
    seed = cfg.get("seed", 2024)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"seed: expected an integer, got {seed!r}")
    out = _out_dir(cfg, args)
    outcome = run_verify(params, q=q, out_dir=out, threads=args.threads, seed=seed)
    for line in outcome.summary_lines():
        print(line)
    for p in outcome.report_paths:
        print(p)
    return outcome.exit_code


def _print_coupler(c, prefix=""):
    ex, ey = coupler_to_ellipticity(c)
    # the +0.0 normalizes IEEE negative zeros out of the display
    print(f"{prefix}a1 = {c.a1.real + 0.0:+.15g}{c.a1.imag + 0.0:+.15g}i")
    print(f"{prefix}a2 = {c.a2.real + 0.0:+.15g}{c.a2.imag + 0.0:+.15g}i")
    print(f"{prefix}|a1|^2 + |a2|^2 = {abs(c.a1) ** 2 + abs(c.a2) ** 2:.15g}")
    print(f"{prefix}ellipticity (eta_x, eta_y) = ({ex:.15g}, {ey:.15g})")


def cmd_coupler(args):
    cfg = load_config(args.config)
    if "coupler" not in cfg:
        raise ConfigError("config: missing 'coupler' block")
    cb = cfg["coupler"]
    _require_keys(cb, ("kind", "theta", "phi", "g", "delta", "t", "ratio"), ("kind",), "coupler")
    kind = cb["kind"]
    try:
        if kind == "bs":
            _require_keys(cb, ("kind", "theta", "phi"), ("kind", "theta"), "coupler")
            c = bs_coupler(_number(cb, "theta", "coupler"),
                           _number(cb, "phi", "coupler") if "phi" in cb else 0.0)
            _print_coupler(c)
        elif kind == "dcdc":
            _require_keys(cb, ("kind", "g", "delta", "t", "ratio"), ("kind", "g", "delta"), "coupler")
            g = _number(cb, "g", "coupler")
            delta = _number(cb, "delta", "coupler")
            if "ratio" in cb:
                ratio = _number(cb, "ratio", "coupler")
                t = dcdc_time_for_ratio(ratio, g, delta)
                print(f"t = {t:.15g}")
            elif "t" in cb:
                t = _number(cb, "t", "coupler")
            else:
                raise ConfigError("coupler: dcdc needs either 't' or 'ratio'")
            _print_coupler(dcdc_coupler(DcdcParams(g=g, delta=delta, t=t)))
        else:
            raise ConfigError(f"coupler.kind: expected 'bs' or 'dcdc', got {kind!r}")
    except InfeasibleRatioError as err:
        raise ConfigError(f"coupler: {err}") from err
    except ValueError as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(f"coupler: {err}") from err
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="deev",
        description="Displaced elliptical-elliptical vortex states: fields, Wigner slices, "
                    "interference terms, and oracle verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, plane=False, m=False, form=False):
        p.add_argument("--config", required=True, help="path to the JSON run configuration")
        p.add_argument("--out", default=None, help="output directory (overrides config out_dir)")
        p.add_argument("--threads", type=int, default=None,
                       help="row-parallel sampling threads (default: available parallelism)")
        p.add_argument("--clamp", default=None,
                       help="graymap clamp half-range, a number or 'auto' (default auto)")
        if plane:
            p.add_argument("--plane", default=None,
                           choices=[s.name.lower() for s in SlicePlane] + ["all"],
                           help="which 2D reduction to sample (default: all)")
        if m:
            p.add_argument("--m", type=int, default=None, help="vortex order (overrides config)")
        if form:
            p.add_argument("--form", default=None, choices=["standard", "candidate"],
                           help="closed form to sample (default from config, else standard)")

    common(sub.add_parser("field", help="sample |psi|^2 and write CSV + PGM"))
    common(sub.add_parser("wigner", help="sample 2D Wigner reductions"), plane=True, form=True)
    common(sub.add_parser("sit", help="sample scaled interference terms"), m=True)
    common(sub.add_parser("verify", help="run the oracle verification suites"))
    common(sub.add_parser("coupler", help="print SU(2) coupler coefficients"))
    return parser


_COMMANDS = {
    "field": cmd_field,
    "wigner": cmd_wigner,
    "sit": cmd_sit,
    "verify": cmd_verify,
    "coupler": cmd_coupler,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
