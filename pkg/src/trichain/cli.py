"""Command-line front end: every analysis as a subcommand with
deterministic, machine-readable output.

Output is CSV (comma separator, '.' decimal, '#' comments, LF endings)
plus a binary P5 graymap for rasters, so results golden-test bit-exactly
and plotting stays downstream.  Every subcommand echoes its effective
configuration as a comment header; re-running those settings reproduces
the output byte for byte.  ``--threads`` and ``--out`` are execution
details that cannot affect results and are excluded from the header.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bifurcation import (
    DEFAULT_SMOOTH_WINDOW,
    DEFAULT_SWEEP_KEEP,
    DEFAULT_SWEEP_LYAP_STEPS,
    DEFAULT_SWEEP_TRANSIENT,
    PathSpec,
    local_maxima,
    maxima_levels,
    sweep,
)
from .equilibria import NoCrossingError, fixed_points, zone
from .escape import (
    DEFAULT_CONV_TOL,
    DEFAULT_CONV_WINDOW,
    DEFAULT_RASTER_MAX_ITER,
    PlaneSlice,
    raster_slice,
)
from .lyapunov import DEFAULT_STEPS, DEFAULT_TRANSIENT, lyapunov_spectrum
from .map_core import Params, iterate_streaming
from .spectral import dft

THREADS_ENV = "TRICHAIN_THREADS"

# Raster pixel codes beyond the escape-step range.
PIXEL_CONVERGED = {"p1": 251, "p2": 252, "p3": 253, "p4": 254}
PIXEL_UNDETERMINED = 255
MAX_RASTER_ITER = 250


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# option plumbing: defaults < config file < explicit flags

def _c_float(s: str) -> float:
    return float(s)


def _c_int(s: str) -> int:
    return int(s)


def _c_str(s: str) -> str:
    return s


def _c_plane(s: str) -> PlaneSlice:
    try:
        axis, _, off = s.partition("=")
        return PlaneSlice(axis.strip(), float(off))
    except ValueError as exc:
        raise UsageError(f"bad --plane {s!r}, expected like y=0.0") from exc


def _c_bounds(s: str) -> tuple[float, float, float, float]:
    parts = s.split(",")
    if len(parts) != 4:
        raise UsageError(f"bad --bounds {s!r}, expected umin,umax,vmin,vmax")
    return tuple(float(x) for x in parts)


def _c_res(s: str) -> tuple[int, int]:
    sep = "x" if "x" in s else ","
    parts = s.split(sep)
    if len(parts) != 2:
        raise UsageError(f"bad --res {s!r}, expected like 100x100")
    return int(parts[0]), int(parts[1])


def _c_choice(*allowed):
    def conv(s: str) -> str:
        if s not in allowed:
            raise UsageError(f"expected one of {allowed}, got {s!r}")
        return s

    return conv


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, PlaneSlice):
        return f"{v.axis}={v.offset!r}"
    if isinstance(v, tuple):
        return ",".join(_fmt(x) for x in v)
    return str(v)


def _read_config(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, val = line.partition("=")
                if not sep:
                    raise UsageError(f"{path}:{lineno}: expected key=value")
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return values


def _effective(options, args, config) -> dict:
    known = {name for name, _, _, _ in options}
    for key in config:
        if key not in known:
            raise UsageError(f"unknown config key {key!r}")
    out = {}
    for name, conv, default, _help in options:
        cli_val = getattr(args, name)
        if cli_val is not None:
            out[name] = conv(cli_val) if isinstance(cli_val, str) else cli_val
        elif name in config:
            out[name] = conv(config[name])
        else:
            out[name] = default
    return out


def _header(cmd: str, options, eff: dict) -> list[str]:
    lines = [f"# trichain {cmd}"]
    for name, _conv, _default, _help in options:
        if name in ("out", "config", "threads"):
            continue
        lines.append(f"# {name.replace('_', '-')}={_fmt(eff[name])}")
    return lines


def _require(eff: dict, names) -> None:
    missing = [n for n in names if eff[n] is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"missing required option(s): {flags}")


def _params(eff: dict) -> Params:
    try:
        return Params(eff["mu"], eff["beta"], eff["gamma"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _threads(eff: dict) -> int:
    if eff.get("threads") is not None:
        n = eff["threads"]
    else:
        env = os.environ.get(THREADS_ENV)
        n = int(env) if env else (os.cpu_count() or 1)
    if n < 1:
        raise UsageError("--threads must be >= 1")
    return n


def _write_text(eff: dict, lines) -> None:
    text = "\n".join(lines) + "\n"
    path = eff.get("out")
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_float(v: float) -> str:
    return repr(v)


def _csv_complex(v: complex) -> tuple[str, str]:
    return repr(v.real), repr(v.imag)


# ---------------------------------------------------------------------------
# shared option tables

_PARAM_OPTS = [
    ("mu", _c_float, None, "prey growth rate (> 0)"),
    ("beta", _c_float, None, "predator growth rate (> 0)"),
    ("gamma", _c_float, None, "top-predator growth rate (> 0)"),
]

_STATE_OPTS = [
    ("x0", _c_float, None, "initial prey density"),
    ("y0", _c_float, None, "initial predator density"),
    ("z0", _c_float, None, "initial top-predator density"),
]

_IO_OPTS = [
    ("threads", _c_int, None, f"worker threads (default: ${THREADS_ENV} or CPU count)"),
    ("out", _c_str, None, "output path (default: stdout)"),
]


# ---------------------------------------------------------------------------
# subcommands

def _cmd_fixed_points(eff: dict) -> None:
    _require(eff, ("mu", "beta", "gamma"))
    p = _params(eff)
    lines = _header("fixed-points", OPTIONS["fixed-points"], eff)
    lines.append("id,exists,x,y,z,re1,im1,re2,im2,re3,im3,class")
    for rep in fixed_points(p, eff["tol"]):
        cells = [rep.id.value, "true" if rep.exists_in_E else "false"]
        cells += [_csv_float(c) for c in rep.coordinates]
        for lam in rep.eigenvalues:
            cells += _csv_complex(lam)
        cells.append(rep.stability.value if rep.stability is not None else "")
        lines.append(",".join(cells))
    _write_text(eff, lines)


def _cmd_zone(eff: dict) -> None:
    _require(eff, ("mu", "beta", "gamma"))
    p = _params(eff)
    if not p.in_cuboid():
        raise UsageError(
            "parameters outside the cuboid (0,4] x [2.5,5] x [5,9.4]"
        )
    lines = _header("zone", OPTIONS["zone"], eff)
    lines.append(zone(p, eff["tol"]).value)
    _write_text(eff, lines)


def _cmd_simulate(eff: dict) -> None:
    _require(eff, ("mu", "beta", "gamma", "x0", "y0", "z0"))
    p = _params(eff)
    transient, steps = eff["transient"], eff["steps"]
    if transient < 0 or steps < 1:
        raise UsageError("--transient must be >= 0 and --steps >= 1")
    lines = _header("simulate", OPTIONS["simulate"], eff)
    lines.append("n,x,y,z")
    s0 = (eff["x0"], eff["y0"], eff["z0"])
    total = transient + steps - 1
    escaped_at = None
    for k, st in iterate_streaming(s0, p, total):
        inside = (
            st.x >= 0.0 and st.y >= 0.0 and st.z >= 0.0
            and (st.x + st.y + st.z) <= 1.0
        )
        if k >= transient:
            lines.append(
                f"{k},{_csv_float(st.x)},{_csv_float(st.y)},{_csv_float(st.z)}"
            )
        if not inside:
            escaped_at = k
            break
    if escaped_at is not None:
        lines.append(f"# escaped index={escaped_at}")
    _write_text(eff, lines)


def _cmd_raster(eff: dict) -> None:
    _require(eff, ("mu", "beta", "gamma", "plane", "out"))
    p = _params(eff)
    if not 1 <= eff["max_iter"] <= MAX_RASTER_ITER:
        raise UsageError(f"--max-iter must be in [1, {MAX_RASTER_ITER}] for rasters")
    nx, ny = eff["res"]
    if nx < 1 or ny < 1:
        raise UsageError("--res must be at least 1x1")
    raster = raster_slice(
        eff["plane"],
        eff["bounds"],
        (nx, ny),
        p,
        max_iter=eff["max_iter"],
        conv_tol=eff["conv_tol"],
        conv_window=eff["conv_window"],
        threads=_threads(eff),
    )

    pixels = bytearray()
    for j in range(ny):
        for i in range(nx):
            code = int(raster.codes[j, i])
            if code >= 0:
                pixels.append(code)
            elif code == -9:
                pixels.append(PIXEL_UNDETERMINED)
            else:
                pixels.append(250 - code)  # -1..-4 -> 251..254
    pgm = b"P5\n%d %d\n255\n" % (nx, ny) + bytes(pixels)
    with open(eff["out"], "wb") as fh:
        fh.write(pgm)

    legend = _header("raster", OPTIONS["raster"], eff)
    legend.append("kind,code_min,code_max")
    legend.append("outside_simplex,0,0")
    legend.append(f"escaped_at_step,1,{eff['max_iter']}")
    for key, code in PIXEL_CONVERGED.items():
        legend.append(f"converged_{key},{code},{code}")
    legend.append(f"undetermined,{PIXEL_UNDETERMINED},{PIXEL_UNDETERMINED}")
    with open(eff["out"] + ".legend.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(legend) + "\n")


def _lyap_cells(result) -> str:
    if result is None or result.escaped:
        return ",,,,,true"
    l1, l2, l3 = result.exponents
    total = l1 + l2 + l3
    return (
        f"{_csv_float(l1)},{_csv_float(l2)},{_csv_float(l3)},"
        f"{_csv_float(total)},{_csv_float(result.mean_log_abs_det)},false"
    )


def _cmd_lyapunov(eff: dict) -> None:
    _require(eff, ("mu", "beta", "gamma", "x0", "y0", "z0"))
    p = _params(eff)
    result = lyapunov_spectrum(
        (eff["x0"], eff["y0"], eff["z0"]), p, eff["transient"], eff["steps"]
    )
    lines = _header("lyapunov", OPTIONS["lyapunov"], eff)
    lines.append("lambda1,lambda2,lambda3,sum,mean_log_abs_det,escaped")
    lines.append(_lyap_cells(result))
    _write_text(eff, lines)


def _cmd_sweep(eff: dict) -> None:
    _require(eff, ("x0", "y0", "z0", "axis", "start", "stop"))
    fixed_axes = tuple(a for a in ("mu", "beta", "gamma") if a != eff["axis"])
    _require(eff, fixed_axes)
    if eff["samples"] < 2:
        raise UsageError("--samples must be >= 2")
    # The swept axis ignores its base value; pin it to the start value so
    # the echoed header round-trips.
    eff = dict(eff)
    eff[eff["axis"]] = eff["start"]
    base = {"mu": eff["mu"], "beta": eff["beta"], "gamma": eff["gamma"]}
    lo = dict(base)
    hi = dict(base)
    lo[eff["axis"]] = eff["start"]
    hi[eff["axis"]] = eff["stop"]
    try:
        path = PathSpec(Params(**lo), Params(**hi), eff["samples"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    records = sweep(
        path,
        (eff["x0"], eff["y0"], eff["z0"]),
        transient=eff["transient"],
        keep=eff["keep"],
        lyap_steps=eff["lyap_steps"] if eff["emit"] == "lyapunov" else 0,
        threads=_threads(eff),
    )

    lines = _header("sweep", OPTIONS["sweep"], eff)
    prefix_hdr = "index,t,mu,beta,gamma,zone,escaped"
    emit = eff["emit"]
    if emit == "bifurcation":
        lines.append(prefix_hdr + ",n,x,y,z")
    elif emit == "maxima":
        lines.append(prefix_hdr + ",level,value,count")
    elif emit == "lyapunov":
        lines.append(prefix_hdr + ",lambda1,lambda2,lambda3,sum,mean_log_abs_det,lyap_escaped")
    else:
        lines.append(prefix_hdr + ",bin,magnitude")

    for idx, rec in enumerate(records):
        prefix = (
            f"{idx},{_csv_float(rec.t)},{_csv_float(rec.params.mu)},"
            f"{_csv_float(rec.params.beta)},{_csv_float(rec.params.gamma)},"
            f"{rec.zone.value},{'true' if rec.escaped else 'false'}"
        )
        if rec.escaped:
            lines.append(prefix + "," * (3 if emit != "lyapunov" else 6))
            continue
        if emit == "bifurcation":
            for n, st in enumerate(rec.attractor_samples):
                lines.append(
                    f"{prefix},{n},{_csv_float(st.x)},{_csv_float(st.y)},{_csv_float(st.z)}"
                )
        elif emit == "maxima":
            xs = [st.x for st in rec.attractor_samples]
            maxima = local_maxima(xs, eff["smooth_window"])
            _, levels = maxima_levels(maxima)
            for level, (mean, count) in enumerate(levels):
                lines.append(f"{prefix},{level},{_csv_float(mean)},{count}")
        elif emit == "lyapunov":
            lines.append(prefix + "," + _lyap_cells(rec.lyapunov))
        else:
            spec = dft([st.x for st in rec.attractor_samples])
            for b, mag in enumerate(spec.magnitudes):
                lines.append(f"{prefix},{b},{_csv_float(float(mag))}")
    _write_text(eff, lines)


# ---------------------------------------------------------------------------
# option tables per subcommand

OPTIONS = {
    "fixed-points": _PARAM_OPTS
    + [("tol", _c_float, 1e-9, "hyperbolicity tolerance on |lambda|-1")]
    + _IO_OPTS,
    "zone": _PARAM_OPTS
    + [("tol", _c_float, 1e-9, "boundary tolerance in mu")]
    + _IO_OPTS,
    "simulate": _PARAM_OPTS
    + _STATE_OPTS
    + [
        ("transient", _c_int, 0, "iterates to skip before emitting"),
        ("steps", _c_int, 1000, "rows to emit"),
    ]
    + _IO_OPTS,
    "raster": _PARAM_OPTS
    + [
        ("plane", _c_plane, None, "slice plane, e.g. y=0.0 or z=0.0"),
        ("bounds", _c_bounds, (0.0, 1.0, 0.0, 1.0), "umin,umax,vmin,vmax"),
        ("res", _c_res, (100, 100), "grid resolution, e.g. 200x200"),
        ("max_iter", _c_int, DEFAULT_RASTER_MAX_ITER, "iteration budget per cell"),
        ("conv_tol", _c_float, DEFAULT_CONV_TOL, "fixed-point convergence distance"),
        ("conv_window", _c_int, DEFAULT_CONV_WINDOW, "consecutive close iterates required"),
    ]
    + _IO_OPTS,
    "lyapunov": _PARAM_OPTS
    + _STATE_OPTS
    + [
        ("transient", _c_int, DEFAULT_TRANSIENT, "iterates before measuring"),
        ("steps", _c_int, DEFAULT_STEPS, "measurement steps"),
    ]
    + _IO_OPTS,
    "sweep": _PARAM_OPTS
    + _STATE_OPTS
    + [
        ("axis", _c_choice("mu", "beta", "gamma"), None, "swept parameter"),
        ("start", _c_float, None, "sweep start value"),
        ("stop", _c_float, None, "sweep end value"),
        ("samples", _c_int, 101, "number of parameter samples"),
        ("transient", _c_int, DEFAULT_SWEEP_TRANSIENT, "iterates to skip per sample"),
        ("keep", _c_int, DEFAULT_SWEEP_KEEP, "attractor samples to keep"),
        ("lyap_steps", _c_int, DEFAULT_SWEEP_LYAP_STEPS, "steps for the per-record spectrum"),
        ("smooth_window", _c_int, DEFAULT_SMOOTH_WINDOW, "running-average window (odd)"),
        (
            "emit",
            _c_choice("bifurcation", "maxima", "lyapunov", "spectrum"),
            "bifurcation",
            "payload columns",
        ),
    ]
    + _IO_OPTS,
}

_HANDLERS = {
    "fixed-points": _cmd_fixed_points,
    "zone": _cmd_zone,
    "simulate": _cmd_simulate,
    "raster": _cmd_raster,
    "lyapunov": _cmd_lyapunov,
    "sweep": _cmd_sweep,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trichain",
        description="Analyses of the three-species discrete food-chain map.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, options in OPTIONS.items():
        sp = sub.add_parser(cmd, help=f"{cmd} analysis")
        sp.add_argument("--config", default=None, help="key=value defaults file")
        for name, _conv, default, help_text in options:
            sp.add_argument(
                "--" + name.replace("_", "-"),
                dest=name,
                default=None,
                help=f"{help_text}" + (f" (default: {_fmt(default)})" if default is not None else ""),
            )
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    options = OPTIONS[args.command]
    try:
        config = _read_config(args.config) if args.config else {}
        eff = _effective(options, args, config)
        _HANDLERS[args.command](eff)
    except UsageError as exc:
        print(f"trichain {args.command}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"trichain {args.command}: {exc}", file=sys.stderr)
        return 2
    except NoCrossingError as exc:
        print(f"trichain {args.command}: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"trichain {args.command}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
