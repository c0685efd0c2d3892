"""Command line front end: seeded identity suites and data exports.

Subcommands: verify | gram | potential | flow | canonical.  A JSON
config file supplies defaults; every field is overridable by a flag.
All numeric output is fixed at 17 significant digits and files are
written atomically, so identical configs produce byte-identical runs.
Exit codes: 0 pass, 1 suite or run failure, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import canonical as ca
from . import flatcoords as fc
from . import hierarchy as hi
from . import manifold as mf
from . import potential as po
from . import verify as vf


class ConfigError(ValueError):
    pass


# -- fixed-precision serialization ---------------------------------------


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def fmt_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def json_text(obj, indent: int = 0) -> str:
    """JSON writer with floats pinned to 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, complex):
        return json_text({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f"{inner}{json.dumps(str(k))}: {json_text(v, indent + 1)}"
                for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{inner}{json_text(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    if isinstance(obj, np.ndarray):
        return json_text(list(obj), indent)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as f:
        f.write(text)
    os.replace(tmp, path)


def write_csv(path: str, header: list[str], rows: list[list[str]]) -> None:
    lines = [",".join(header)]
    lines += [",".join(r) for r in rows]
    atomic_write(path, "\n".join(lines) + "\n")


# -- configuration ---------------------------------------------------------


@dataclass
class RunConfig:
    seed: int | None = None
    N: int = 16
    n_max: int = 4
    K: int = 32
    tolerances: dict = field(default_factory=dict)
    suites: list = field(default_factory=list)
    outdir: str = "."
    parallel: bool = False


_CONFIG_KEYS = {"seed", "N", "n_max", "K", "tolerances", "suites", "outdir", "parallel"}


def load_config(path: str | None) -> RunConfig:
    cfg = RunConfig()
    if path is None:
        return cfg
    try:
        with open(path) as f:
            raw = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"config {path} line {e.lineno} column {e.colno}: {e.msg}"
        ) from e
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path}: top level must be an object")
    for key in raw:
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"config {path}: unknown key {key!r}")
    for key in ("seed", "N", "n_max", "K"):
        if key in raw:
            if not isinstance(raw[key], int) or isinstance(raw[key], bool):
                raise ConfigError(f"config {path}: {key} must be an integer")
            setattr(cfg, key, raw[key])
    if "tolerances" in raw:
        if not isinstance(raw["tolerances"], dict):
            raise ConfigError(f"config {path}: tolerances must be an object")
        cfg.tolerances = dict(raw["tolerances"])
    if "suites" in raw:
        if not isinstance(raw["suites"], list):
            raise ConfigError(f"config {path}: suites must be a list")
        cfg.suites = list(raw["suites"])
    if "outdir" in raw:
        cfg.outdir = str(raw["outdir"])
    if "parallel" in raw:
        cfg.parallel = bool(raw["parallel"])
    return cfg


def check_tolerances(tols: dict) -> dict:
    out = {}
    for name, val in tols.items():
        if name not in vf.DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown suite in tolerances: {name!r}")
        v = float(val)
        if v < 0 or v != v:
            raise ConfigError(f"tolerance for {name} must be nonnegative, got {val}")
        out[name] = v
    return out


def parse_flow_tag(text: str):
    if text in ("u", "v"):
        return text
    m = re.fullmatch(r"s(\d+)", text)
    if m:
        return ("s", int(m.group(1)))
    m = re.fullmatch(r"sbar(\d+)", text)
    if m:
        return ("sbar", int(m.group(1)))
    m = re.fullmatch(r"t:(-?\d+)", text)
    if m:
        return ("t", int(m.group(1)))
    raise ConfigError(f"unknown flow {text!r}; expected s<n>, sbar<n>, t:<a>, u, v")


# -- verify ----------------------------------------------------------------


def _suite_sizes(cfg: RunConfig, name: str) -> dict:
    manifold_sized = {
        "gram", "frobenius", "potential", "quasihomogeneity",
        "intersection", "semisimplicity", "canonical",
    }
    loop_sized = {"poisson", "hierarchy", "commutators", "transport", "rk4"}
    if name == "gram":
        return {"n": cfg.N, "kmax": cfg.n_max}
    if name in manifold_sized:
        return {"n": cfg.N}
    if name in loop_sized:
        return {"nodes": cfg.K}
    return {}


def cmd_verify(cfg: RunConfig) -> int:
    names = cfg.suites or list(vf.SUITE_ORDER)
    for name in names:
        if name not in vf.DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown suite {name!r}")
    tols = check_tolerances(cfg.tolerances)
    randomized = [n for n in names if n != "tables"]
    if cfg.seed is None and randomized:
        raise ConfigError(
            f"seed is required for randomized suites: {', '.join(randomized)}"
        )
    seed = cfg.seed if cfg.seed is not None else 0

    def run(name: str) -> vf.SuiteResult:
        return vf.run_suite(name, seed, tols.get(name), **_suite_sizes(cfg, name))

    if cfg.parallel:
        with ThreadPoolExecutor(max_workers=min(4, len(names))) as ex:
            results = list(ex.map(run, names))
    else:
        results = [run(name) for name in names]

    for r in results:
        print(r.line())
        for note in r.notes:
            print(f"    note: {note}")
    ok = all(r.passed for r in results)
    report = {
        "seed": seed,
        "suites": [r.to_json_dict() for r in results],
        "pass": ok,
    }
    os.makedirs(cfg.outdir, exist_ok=True)
    atomic_write(os.path.join(cfg.outdir, "report.json"), json_text(report) + "\n")
    return 0 if ok else 1


# -- gram ------------------------------------------------------------------


def cmd_gram(cfg: RunConfig, kmax: int) -> int:
    if cfg.seed is None:
        raise ConfigError("seed is required for gram")
    pt = mf.sample_point(cfg.seed, n=cfg.N)
    labels = [("t", k) for k in range(-kmax, kmax + 1)] + ["u", "v"]
    names = [lab if isinstance(lab, str) else f"t{lab[1]}" for lab in labels]
    frames = [vf._frame(pt, lab) for lab in labels]
    rows = []
    for nm, x in zip(names, frames):
        cells = [nm]
        for y in frames:
            cells.append(fmt_complex(mf.metric_tangent(pt, x, y)))
        rows.append(cells)
    os.makedirs(cfg.outdir, exist_ok=True)
    write_csv(os.path.join(cfg.outdir, "gram.csv"), ["frame"] + names, rows)
    print(f"gram: {len(names)}x{len(names)} matrix written to "
          f"{os.path.join(cfg.outdir, 'gram.csv')}")
    return 0


# -- potential ---------------------------------------------------------------


def cmd_potential(cfg: RunConfig, u: float, v: float) -> int:
    pt = mf.locus_point(u, v)
    F = po.potential_F(pt)
    closed = u * v * v / 2.0
    report = {
        "u": u,
        "v": v,
        "F": complex(F),
        "closed_form_uvv_half": closed,
        "deviation": abs(F - closed),
        "dF_du": complex(po.dF_du(pt)),
        "dF_dv": complex(po.dF_dv(pt)),
        "quasihomogeneity_residual": float(abs(po.quasihomogeneity_residual(pt))),
    }
    os.makedirs(cfg.outdir, exist_ok=True)
    atomic_write(os.path.join(cfg.outdir, "potential.json"), json_text(report) + "\n")
    print(f"potential: F = {fmt_complex(F)} (locus closed form {fmt_float(closed)})")
    return 0


# -- flow ---------------------------------------------------------------------


def cmd_flow(cfg: RunConfig, flow_text: str, T: float, h: float,
             record_every: int) -> int:
    if cfg.seed is None:
        raise ConfigError("seed is required for flow")
    flow = parse_flow_tag(flow_text)
    L = hi.sample_loop(cfg.seed, nodes=cfg.K)
    try:
        snapshots, ledger = hi.integrate(L, flow, T, h, record_every=record_every)
    except (hi.BlowUp, hi.TailOverflow) as e:
        print(f"flow {flow_text} aborted: {e}", file=sys.stderr)
        return 1
    os.makedirs(cfg.outdir, exist_ok=True)
    header = ["step", "time", "H1", "Hbar1", "H2", "tail_norm", "u1_drift"]
    rows = []
    for row in ledger:
        rows.append([
            str(row["step"]),
            fmt_float(row["time"]),
            fmt_complex(row["H1"]),
            fmt_complex(row["Hbar1"]),
            fmt_complex(row["H2"]),
            fmt_float(row["tail_norm"]),
            fmt_float(row["u1_drift"]),
        ])
    write_csv(os.path.join(cfg.outdir, "flow_ledger.csv"), header, rows)
    snap_doc = [
        {"time": t, "loop": hi.loop_to_json_dict(P)} for t, P in snapshots
    ]
    atomic_write(os.path.join(cfg.outdir, "flow_snapshots.json"),
                 json_text(snap_doc) + "\n")
    drift = max(abs(row["H1"] - ledger[0]["H1"]) for row in ledger)
    print(f"flow {flow_text}: {len(ledger) - 1} steps to T={fmt_float(T)}, "
          f"|H1 drift| = {drift:.3e}")
    return 0


# -- canonical ----------------------------------------------------------------


def cmd_canonical(cfg: RunConfig, grid: int) -> int:
    if cfg.seed is None:
        raise ConfigError("seed is required for canonical")
    pt = mf.sample_point(cfg.seed, n=cfg.N)
    cd = ca.canonical_data(pt, grid)
    vel = ca.char_velocities(pt, ("t", 0), grid)
    header = ["j", "re_p", "im_p", "re_sigma", "im_sigma",
              "re_u_sigma", "im_u_sigma", "re_f", "im_f",
              "re_velocity_t0", "im_velocity_t0"]
    rows = []
    for j in range(len(cd.p)):
        rows.append([str(j)] + [
            fmt_float(val)
            for val in (cd.p[j].real, cd.p[j].imag,
                        cd.sigma[j].real, cd.sigma[j].imag,
                        cd.u_sigma[j].real, cd.u_sigma[j].imag,
                        cd.f[j].real, cd.f[j].imag,
                        vel[j].real, vel[j].imag)
        ])
    os.makedirs(cfg.outdir, exist_ok=True)
    write_csv(os.path.join(cfg.outdir, "canonical.csv"), header, rows)
    print(f"canonical: {len(rows)} circle nodes written "
          f"(trace residual {cd.critical_residual:.3e}, "
          f"self-intersecting: {cd.self_intersecting})")
    return 0


# -- argument plumbing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="todafrob",
        description="Identity suites and data exports for the Toda Frobenius "
                    "manifold library.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--seed", type=int, help="seed for randomized sampling")
        sp.add_argument("--N", type=int, help="manifold band size")
        sp.add_argument("--n-max", dest="n_max", type=int,
                        help="flat frame index range")
        sp.add_argument("--K", type=int, help="loop node count")
        sp.add_argument("--outdir", help="output directory")

    sv = sub.add_parser("verify", help="run identity suites")
    common(sv)
    sv.add_argument("--suites", help="comma-separated suite names")
    sv.add_argument("--tol", action="append", default=[],
                    metavar="SUITE=VALUE", help="override a suite tolerance")
    sv.add_argument("--parallel", action="store_true",
                    help="run suites concurrently")

    sg = sub.add_parser("gram", help="export the flat Gram matrix as CSV")
    common(sg)
    sg.add_argument("--kmax", type=int, default=4,
                    help="frame range |k| <= kmax (default 4)")

    sp_ = sub.add_parser("potential", help="evaluate F on a locus point")
    common(sp_)
    sp_.add_argument("--u", type=float, default=0.3)
    sp_.add_argument("--v", type=float, default=0.2)

    sf = sub.add_parser("flow", help="integrate a hierarchy flow")
    common(sf)
    sf.add_argument("--flow", default="s1",
                    help="flow tag: s<n>, sbar<n>, t:<a>, u, v (default s1)")
    sf.add_argument("--T", type=float, default=0.1)
    sf.add_argument("--h", type=float, default=1e-3)
    sf.add_argument("--record-every", dest="record_every", type=int, default=20)

    sc = sub.add_parser("canonical", help="export canonical coordinate data")
    common(sc)
    sc.add_argument("--grid", type=int, default=256,
                    help="circle grid size (default 256)")
    return p


def merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config)
    for key in ("seed", "N", "n_max", "K", "outdir"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if getattr(args, "parallel", False):
        cfg.parallel = True
    if getattr(args, "suites", None):
        cfg.suites = [s.strip() for s in args.suites.split(",") if s.strip()]
    for item in getattr(args, "tol", []):
        if "=" not in item:
            raise ConfigError(f"--tol expects SUITE=VALUE, got {item!r}")
        name, _, val = item.partition("=")
        try:
            cfg.tolerances[name.strip()] = float(val)
        except ValueError as e:
            raise ConfigError(f"bad tolerance value in {item!r}") from e
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = merge_config(args)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "gram":
            return cmd_gram(cfg, args.kmax)
        if args.command == "potential":
            return cmd_potential(cfg, args.u, args.v)
        if args.command == "flow":
            return cmd_flow(cfg, args.flow, args.T, args.h, args.record_every)
        if args.command == "canonical":
            return cmd_canonical(cfg, args.grid)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    raise SystemExit(main())
