"""Command-line front end.

Subcommands cover the everyday pipelines: sample a constructed potential
(construct), tabulate scattering amplitudes (amplitude), run the transfer
matrix and its conservation checks (verify, xfer), compute power budgets
(power), and sweep the screen-power benchmark (fig2).

Numbers are written with 17 significant digits so a written table reads
back bit-identically; every CSV opens with a '#' comment carrying the
resolved configuration as JSON.

Exit codes: 0 success, 2 invalid arguments or configuration, 3 numerical
failure (blown-up integration), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

import numpy as np

from .born import amplitude_table, born_t_2d
from .construct import ConstructionParams, build_potential_2d
from .empower import ScreenSpec, fig2_curves, screen_power, total_power_changes
from .envelopes import gaussian_envelope, quartic_envelope
from .grids import WaveContext, gauss_grid
from .xfermat import (
    IntegrationError,
    amplitude_table_from_operator,
    check_symplectic,
    conserved_current,
    evolve_transfer,
    extract_t,
    operator_to_dict,
    predicates,
    scattering_coeffs,
)

__all__ = ["main", "build_parser", "parse_k", "read_table"]

_DEFAULTS = {
    "k": "4pi",
    "ell": -1,
    "m": 1,
    "envelope": "quartic",
    "g0": 1e-2,
    "b": 1.0,
    "slab": 1.0,
    "grid_n": 41,
    "slices": None,
    "tol": 1e-6,
    "side": "left",
    "method": "born",
    "thetas": 721,
    "nx": 201,
    "ny": 201,
    "d": 100.0,
    "s": 10.0,
    "s_max": 100.0,
    "samples": 400,
    "ks": "2pi,4pi,8pi,12pi",
    "format": "csv",
    "out": None,
    "out_dir": ".",
}


def parse_k(text) -> float:
    """Wavenumber parser: plain float, or a multiple of pi like '2pi'."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower().replace(" ", "")
    if s.endswith("pi"):
        head = s[:-2].rstrip("*")
        factor = 1.0 if head in ("", "+") else -1.0 if head == "-" else float(head)
        return factor * np.pi
    return float(s)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _echo_cfg(config) -> dict:
    # Output paths stay out of the echoed config so the payload does not
    # depend on where it was written.
    return {k: v for k, v in config.items() if k not in ("out", "out_dir")}


def _resolve(args, keys) -> dict:
    """Layer defaults, then --config JSON, then explicit flags."""
    cfg = {k: _DEFAULTS[k] for k in keys}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path) as fh:
                loaded = json.load(fh)
        except OSError:
            raise
        except json.JSONDecodeError as exc:
            raise ValueError(f"config file {config_path} is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise ValueError(f"config file {config_path} must hold a JSON object")
        unknown = set(loaded) - set(_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key in keys:
            if key in loaded:
                cfg[key] = loaded[key]
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if "k" in cfg:
        cfg["k"] = parse_k(cfg["k"])
    return cfg


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _write_table(fh, config, columns, rows, fmt):
    if fmt == "json":
        json.dump(
            {
                "config": _echo_cfg(config),
                "columns": list(columns),
                "rows": [[_fmt(x) for x in row] for row in rows],
            },
            fh,
            sort_keys=True,
        )
        fh.write("\n")
        return
    fh.write("# " + json.dumps(_echo_cfg(config), sort_keys=True) + "\n")
    fh.write(",".join(columns) + "\n")
    for row in rows:
        fh.write(",".join(_fmt(x) for x in row) + "\n")


def read_table(path):
    """Read back a CSV written by this tool: (config, columns, float array)."""
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# "):
            raise ValueError(f"{path} lacks the config comment line")
        config = json.loads(first[2:])
        columns = fh.readline().strip().split(",")
        data = [
            [float(tok) for tok in line.strip().split(",")]
            for line in fh
            if line.strip()
        ]
    return config, columns, np.array(data)


def _construction(cfg) -> ConstructionParams:
    make = {"gaussian": gaussian_envelope, "quartic": quartic_envelope}
    if cfg["envelope"] not in make:
        raise ValueError(
            f"--envelope must be gaussian or quartic, got {cfg['envelope']!r}"
        )
    env = make[cfg["envelope"]](float(cfg["g0"]), float(cfg["b"]))
    return ConstructionParams(
        ell=int(cfg["ell"]),
        m=int(cfg["m"]),
        envelope=env,
        ctx=WaveContext(k=cfg["k"]),
        slab=float(cfg["slab"]),
    )


def _cmd_construct(args) -> int:
    keys = ("k", "ell", "m", "envelope", "g0", "b", "slab", "nx", "ny", "format", "out")
    cfg = _resolve(args, keys)
    params = _construction(cfg)
    v = build_potential_2d(params)
    x0, x1 = v.x_support
    y0, y1 = v.y_support
    xs = np.linspace(x0, x1, int(cfg["nx"]))
    ys = np.linspace(y0, y1, int(cfg["ny"]))
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    vals = v.value(xg.ravel(), yg.ravel())
    rows = np.column_stack([xg.ravel(), yg.ravel(), vals.real, vals.imag])
    with _open_out(cfg["out"]) as fh:
        _write_table(fh, cfg, ("x", "y", "re_v", "im_v"), rows, cfg["format"])
    return 0


def _cmd_amplitude(args) -> int:
    keys = (
        "k", "ell", "m", "envelope", "g0", "b", "slab",
        "side", "method", "thetas", "format", "out",
    )
    cfg = _resolve(args, keys)
    params = _construction(cfg)
    margin = 5e-3
    n = int(cfg["thetas"])
    if n < 2:
        raise ValueError(f"--thetas must be at least 2, got {n}")
    half = np.pi / 2.0
    thetas = np.concatenate(
        [
            np.linspace(-half + margin, half - margin, n // 2 + n % 2),
            np.linspace(half + margin, 3.0 * half - margin, n // 2),
        ]
    )
    if cfg["method"] == "closed" and cfg["side"] != "left":
        raise ValueError("the closed-form amplitude is left-incidence only")
    method = {"born": "born", "closed": "closed_form"}.get(cfg["method"])
    if method is None:
        raise ValueError(f"--method must be born or closed, got {cfg['method']!r}")
    v = build_potential_2d(params)
    table = amplitude_table(v, cfg["side"], thetas, method=method)
    rows = np.column_stack(
        [table.thetas, table.values.real, table.values.imag, np.abs(table.values)]
    )
    with _open_out(cfg["out"]) as fh:
        _write_table(fh, cfg, ("theta", "re_f", "im_f", "abs_f"), rows, cfg["format"])
    return 0


def _evolved(cfg):
    params = _construction(cfg)
    v = build_potential_2d(params)
    grid = gauss_grid(int(cfg["grid_n"]), params.ctx)
    slices = cfg["slices"]
    op = evolve_transfer(v, grid, slices=None if slices is None else int(slices))
    return params, v, grid, op


def _cmd_verify(args) -> int:
    keys = (
        "k", "ell", "m", "envelope", "g0", "b", "slab",
        "grid_n", "slices", "tol", "out",
    )
    cfg = _resolve(args, keys)
    params, v, grid, op = _evolved(cfg)
    flags = predicates(op, float(cfg["tol"]))
    left = scattering_coeffs(op, "left")
    right = scattering_coeffs(op, "right")
    j_lr = conserved_current(left, right, grid)
    tables = {
        f"{side}_{sign}": extract_t(op, side, sign)
        for side in ("left", "right")
        for sign in ("plus", "minus")
    }
    sups = {key: float(np.max(np.abs(t.values))) for key, t in tables.items()}
    # Flux conservation ties the two transmissions together at the forward
    # node only; away from it the vectors legitimately differ.
    c = grid.center_index
    recip = float(
        abs(tables["left_plus"].values[c] - tables["right_minus"].values[c])
    )
    report = {
        "config": _echo_cfg(cfg),
        "slices": op.slices,
        "symplectic_residual": check_symplectic(op),
        "m22_condition": op.m22_condition,
        "sup_norms": sups,
        "reciprocity_mismatch": recip,
        "current_minus_inf": [j_lr[0].value.real, j_lr[0].value.imag],
        "current_plus_inf": [j_lr[1].value.real, j_lr[1].value.imag],
        "predicates": flags,
    }
    with _open_out(cfg["out"]) as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return 0


def _cmd_xfer(args) -> int:
    keys = (
        "k", "ell", "m", "envelope", "g0", "b", "slab",
        "grid_n", "slices", "out",
    )
    cfg = _resolve(args, keys)
    _, _, _, op = _evolved(cfg)
    dump = operator_to_dict(op)
    dump["config"] = _echo_cfg(cfg)
    with _open_out(cfg["out"]) as fh:
        json.dump(dump, fh, sort_keys=True)
        fh.write("\n")
    return 0


def _cmd_power(args) -> int:
    keys = (
        "k", "ell", "m", "envelope", "g0", "b", "slab",
        "thetas", "d", "s", "out",
    )
    cfg = _resolve(args, keys)
    params = _construction(cfg)
    v = build_potential_2d(params)
    margin = 5e-3
    n = max(801, int(cfg["thetas"]))
    half = np.pi / 2.0
    thetas = np.concatenate(
        [
            np.linspace(-half + margin, half - margin, n),
            np.linspace(half + margin, 3.0 * half - margin, n),
        ]
    )
    left = amplitude_table(v, "left", thetas, method="born")
    right = amplitude_table(v, "right", thetas, method="born")
    summary = total_power_changes(left, right)
    screen = ScreenSpec(d=float(cfg["d"]), s=float(cfg["s"]))
    report = {
        "config": _echo_cfg(cfg),
        "left_backward": summary.left_backward,
        "left_forward": summary.left_forward,
        "left_total": summary.left_total,
        "right_backward": summary.right_backward,
        "right_forward": summary.right_forward,
        "right_total": summary.right_total,
        "screen_power": screen_power(params, screen),
    }
    with _open_out(cfg["out"]) as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return 0


def _k_tag(k: float) -> str:
    ratio = k / np.pi
    if abs(ratio - round(ratio)) < 1e-12:
        return f"{int(round(ratio))}pi"
    return f"{k:g}".replace(".", "p")


def _cmd_fig2(args) -> int:
    keys = ("ell", "m", "g0", "b", "slab", "d", "s_max", "samples", "ks", "out_dir")
    cfg = _resolve(args, keys)
    ks = [parse_k(tok) for tok in str(cfg["ks"]).split(",") if tok.strip()]
    if not ks:
        raise ValueError("--ks produced an empty wavenumber list")
    n = int(cfg["samples"])
    if n < 1:
        raise ValueError(f"--samples must be positive, got {n}")
    s_max = float(cfg["s_max"])
    slab = float(cfg["slab"])
    s_values = np.linspace(s_max / n, s_max, n) * slab
    curves = fig2_curves(
        s_values=s_values,
        ks=ks,
        d=float(cfg["d"]) * slab,
        g0=float(cfg["g0"]),
        b=float(cfg["b"]),
        slab=slab,
        ell=int(cfg["ell"]),
        m=int(cfg["m"]),
    )
    import os

    os.makedirs(cfg["out_dir"], exist_ok=True)
    files = {}
    for curve in curves:
        name = f"fig2_k{_k_tag(curve.k)}.csv"
        path = os.path.join(cfg["out_dir"], name)
        rows = np.column_stack([curve.s_values / slab, curve.values])
        curve_cfg = dict(cfg, k=curve.k)
        curve_cfg.pop("ks")
        with open(path, "w") as fh:
            _write_table(fh, curve_cfg, ("s_over_a", "dP_hat"), rows, "csv")
        files[_k_tag(curve.k)] = name
    manifest = {"config": _echo_cfg(cfg), "files": files}
    mpath = os.path.join(cfg["out_dir"], "fig2_manifest.json")
    with open(mpath, "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(mpath)
    return 0


def _add_common(sub, *names):
    spec = {
        "k": dict(type=str, help="wavenumber; accepts multiples of pi like 2pi"),
        "ell": dict(type=int, help="first grating harmonic (nonzero integer)"),
        "m": dict(type=int, help="second grating harmonic (nonzero, != ell)"),
        "envelope": dict(choices=("gaussian", "quartic"), help="transverse envelope"),
        "g0": dict(type=float, help="envelope strength"),
        "b": dict(type=float, help="envelope width"),
        "slab": dict(type=float, help="slab thickness"),
        "grid_n": dict(type=int, help="momentum nodes (odd)"),
        "slices": dict(type=int, help="integration slices"),
        "tol": dict(type=float, help="predicate tolerance"),
        "side": dict(choices=("left", "right"), help="incidence side"),
        "method": dict(choices=("born", "closed"), help="amplitude route"),
        "thetas": dict(type=int, help="angle sample count"),
        "nx": dict(type=int, help="x samples"),
        "ny": dict(type=int, help="y samples"),
        "d": dict(type=float, help="screen distance"),
        "s": dict(type=float, help="screen width"),
        "s_max": dict(type=float, help="largest screen width"),
        "samples": dict(type=int, help="screen width count"),
        "ks": dict(type=str, help="comma-separated wavenumbers"),
        "format": dict(choices=("csv", "json"), help="output format"),
        "out": dict(type=str, help="output path ('-' for stdout)"),
        "out_dir": dict(type=str, help="output directory"),
    }
    for name in names:
        sub.add_argument(f"--{name.replace('_', '-')}", default=None, **spec[name])
    sub.add_argument("--config", default=None, help="JSON config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uniscat",
        description="one-way-invisible potentials: construction, scattering, power",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("construct", help="sample a constructed potential")
    _add_common(p, "k", "ell", "m", "envelope", "g0", "b", "slab", "nx", "ny", "format", "out")
    p.set_defaults(func=_cmd_construct)

    p = subs.add_parser("amplitude", help="tabulate a scattering amplitude")
    _add_common(
        p, "k", "ell", "m", "envelope", "g0", "b", "slab",
        "side", "method", "thetas", "format", "out",
    )
    p.set_defaults(func=_cmd_amplitude)

    p = subs.add_parser("verify", help="transfer-matrix conservation checks")
    _add_common(
        p, "k", "ell", "m", "envelope", "g0", "b", "slab",
        "grid_n", "slices", "tol", "out",
    )
    p.set_defaults(func=_cmd_verify)

    p = subs.add_parser("xfer", help="dump the transfer operator as JSON")
    _add_common(p, "k", "ell", "m", "envelope", "g0", "b", "slab", "grid_n", "slices", "out")
    p.set_defaults(func=_cmd_xfer)

    p = subs.add_parser("power", help="far-zone and screen power changes")
    _add_common(p, "k", "ell", "m", "envelope", "g0", "b", "slab", "thetas", "d", "s", "out")
    p.set_defaults(func=_cmd_power)

    p = subs.add_parser("fig2", help="screen-power benchmark sweep")
    _add_common(p, "ell", "m", "g0", "b", "slab", "d", "s_max", "samples", "ks", "out_dir")
    p.set_defaults(func=_cmd_fig2)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
