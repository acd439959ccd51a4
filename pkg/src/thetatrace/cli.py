"""``thetatrace`` command-line driver.

Subcommands::

    thetatrace verify {all|specfun|cycle|theta|arch|mellin|logkernel|tp|zeros} ...
    thetatrace audit {symmetry|tp|expansion|zeros} ...
    thetatrace zeros count --function xi --rect -1,2,10,20
    thetatrace zeros find --function Xi2 --bracket 6.5,7.5 --root-tol 1e-9

Exit codes: 0 when every asserted check passes, 1 when one fails, 2 on a
usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, specfun
from .errors import ConfigError, PreconditionError, ThetaTraceError
from .params import KernelParams
from .report import DERIVED, SCHEMA_VERSION, AuditReport
from .suites import AUDITS, VERIFY, SuiteConfig, plan

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_CONFIG_KEYS = {"L", "D", "self_dual", "seed", "eps", "jobs", "out", "format", "relax", "grid_re",
                "grid_im", "samples", "timestamps"}


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _range3(text: str):
    """``a:b:n`` -> ``(a, b, n)``."""
    try:
        a, b, n = text.split(":")
        out = (float(a), float(b), int(n))
    except ValueError:
        raise ConfigError(f"expected a:b:n, got {text!r}") from None
    if out[2] < 1:
        raise ConfigError("grid needs n >= 1")
    return out


def _floats(text: str, count: int):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"expected {count} comma-separated numbers, got {text!r}") from None
    if len(vals) != count:
        raise ConfigError(f"expected {count} comma-separated numbers, got {text!r}")
    return vals


def read_config_file(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment; ``tol.NAME = x`` sets a tolerance."""
    out: dict = {"tolerances": {}}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for i, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{i}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key.startswith("tol."):
            out["tolerances"][key[4:]] = _to_float(value, key)
        elif key in _CONFIG_KEYS:
            out[key] = value
        else:
            raise ConfigError(f"{path}:{i}: unknown key {key!r}")
    return out


def _to_float(value, key):
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {value!r}") from None


def _to_int(value, key):
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: not an integer: {value!r}") from None


def build_config(args: argparse.Namespace, suites=("all",)) -> SuiteConfig:
    """Defaults, then the config file, then the flags."""
    file_vals = read_config_file(args.config) if args.config else {"tolerances": {}}

    def pick(name, conv, default):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in file_vals:
            return conv(file_vals[name], name)
        return default

    self_dual = args.self_dual or _bool(file_vals.get("self_dual", "false"))
    L = pick("L", _to_float, None)
    D = pick("D", _to_float, None)
    if self_dual and (args.L is not None or args.D is not None):
        raise ConfigError("--self-dual cannot be combined with --L/--D")
    if self_dual or (L is None and D is None):
        params = KernelParams.self_dual()
    else:
        sd = KernelParams.self_dual()
        try:
            params = KernelParams(L if L is not None else sd.L, D if D is not None else sd.D)
        except PreconditionError as exc:
            raise ConfigError(str(exc)) from None
    tolerances = dict(file_vals["tolerances"])
    for item in args.tol or []:
        if "=" not in item:
            raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        tolerances[k.strip()] = _to_float(v, k)
    relax = args.relax or _bool(file_vals.get("relax", "false"))
    grid_re = args.grid_re or (_range3(file_vals["grid_re"]) if "grid_re" in file_vals else (0.3, 2.0, 5))
    grid_im = args.grid_im or (_range3(file_vals["grid_im"]) if "grid_im" in file_vals else (-5.0, 5.0, 5))
    timestamps = not args.no_timestamps and _bool(file_vals.get("timestamps", "true"))
    return SuiteConfig(
        suites=tuple(suites),
        params=params,
        tolerances=tolerances,
        seed=pick("seed", _to_int, 42),
        output_format=pick("format", lambda v, k: v, "json"),
        output_path=pick("out", lambda v, k: v, None),
        eps=pick("eps", _to_float, 1e-16),
        jobs=pick("jobs", _to_int, 1),
        relax=relax,
        grid_re=grid_re,
        grid_im=grid_im,
        samples=pick("samples", _to_int, None),
        timestamps=timestamps,
    )


def _versions():
    return {"thetatrace": __version__, "numpy": np.__version__, "python": platform.python_version()}


def _stamp(rep: AuditReport, cfg: SuiteConfig, wall: float):
    rep.metadata.setdefault("seed", cfg.seed)
    rep.metadata["versions"] = _versions()
    rep.metadata["wall_time"] = wall
    rep.metadata["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")


def _run_one(item, cfg):
    name, fn = item
    t0 = time.perf_counter()
    rep = fn(cfg)
    rep.name = name
    _stamp(rep, cfg, time.perf_counter() - t0)
    return rep


def run_suites(cfg: SuiteConfig, kind: str) -> list[AuditReport]:
    """Execute the planned suites, in parallel up to ``cfg.jobs``; order follows the plan."""
    items = plan(kind, cfg.suites)
    if cfg.jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as ex:
            return list(ex.map(lambda it: _run_one(it, cfg), items))
    return [_run_one(it, cfg) for it in items]


def summary_dict(reports, cfg: SuiteConfig, kind: str, files=None) -> dict:
    code = EXIT_FAIL if any(r.status == "fail" for r in reports) else EXIT_OK
    out = {
        "schema": SCHEMA_VERSION,
        "command": kind,
        "exit_code": code,
        "config": {"seed": cfg.seed, "L": cfg.params.L, "D": cfg.params.D, "eps": cfg.eps,
                   "tolerances": dict(sorted(cfg.tolerances.items())), "relax": cfg.relax,
                   "grid_re": list(cfg.grid_re), "grid_im": list(cfg.grid_im), "samples": cfg.samples},
        "suites": [{"name": r.name, "status": r.status, "checks": len(r.checks), "failed": len(r.failed),
                    "worst_residual": r.worst_residual,
                    **({"report": files[r.name]} if files else {})} for r in reports],
        "metadata": {"versions": _versions()},
    }
    if cfg.timestamps:
        out["metadata"]["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return out


def _summary_csv(summary: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "status", "checks", "failed", "worst_residual"])
    for s in summary["suites"]:
        w.writerow([s["name"], s["status"], s["checks"], s["failed"], s["worst_residual"]])
    return buf.getvalue()


def write_reports(reports, cfg: SuiteConfig, kind: str) -> dict:
    """Write one file per report plus the summary next to ``cfg.output_path``."""
    out = Path(cfg.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    ext = cfg.output_format
    files = {}
    for r in reports:
        p = out.with_name(f"{out.stem}.{r.name}.{ext}")
        text = r.to_json(cfg.timestamps) if ext == "json" else r.to_csv()
        p.write_text(text + ("\n" if ext == "json" else ""))
        files[r.name] = p.name
    summary = summary_dict(reports, cfg, kind, files)
    if ext == "json":
        out.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    else:
        out.write_text(_summary_csv(summary))
    return summary


def run(cfg: SuiteConfig, kind: str = "verify", stream=None) -> int:
    """Run and report; returns the process exit code."""
    stream = stream or sys.stdout
    reports = run_suites(cfg, kind)
    if cfg.output_path:
        summary = write_reports(reports, cfg, kind)
    else:
        summary = summary_dict(reports, cfg, kind)
    for r in reports:
        print(r.summary_line(), file=stream)
        for c in r.failed:
            print(f"  FAILED {c.name} [{c.input}]: residual {c.residual:.3e} > {c.tolerance:.3e}",
                  file=stream)
    print(f"overall: {'fail' if summary['exit_code'] else 'pass'}", file=stream)
    return summary["exit_code"]


_ZERO_FUNCTIONS = {
    "xi": lambda cfg: specfun.xi_completed,
    "Xi": lambda cfg: specfun.Xi,
    "gamma": lambda cfg: specfun.gamma,
    "laplace": lambda cfg: _laplace(cfg),
}


def _laplace(cfg):
    from .zeros import laplace_closed_fn
    return laplace_closed_fn(cfg.params)


def _real_function(name, cfg):
    if name == "Xi2":
        return lambda z: specfun.Xi(2.0 * z).real
    if name == "farch":
        from .archimedean import f_arch
        return lambda z: f_arch(z, budget=cfg.budget).value.real
    raise ConfigError(f"unknown function {name!r}")


def run_zeros(args, cfg: SuiteConfig, stream=None) -> int:
    from .zeros import Rectangle, argument_count, find_real_zero

    stream = stream or sys.stdout
    rep = AuditReport(f"zeros_{args.action}", metadata={"function": args.function})
    t0 = time.perf_counter()
    if args.action == "count":
        if args.rect is None:
            raise ConfigError("zeros count needs --rect re_min,re_max,im_min,im_max")
        rect = Rectangle(*_floats(args.rect, 4))
        if args.function not in _ZERO_FUNCTIONS:
            raise ConfigError(f"count supports {sorted(_ZERO_FUNCTIONS)}")
        n = argument_count(_ZERO_FUNCTIONS[args.function](cfg), rect, args.samples_per_edge)
        rep.add("count", str(rect), None, n, 0.0, None, DERIVED, asserted=False)
        print(f"zeros minus poles of {args.function} in {rect}: {n}", file=stream)
    else:
        if args.bracket is None:
            raise ConfigError("zeros find needs --bracket lo,hi")
        lo, hi = _floats(args.bracket, 2)
        z = find_real_zero(_real_function(args.function, cfg), lo, hi, args.root_tol)
        rep.add("root", f"bracket ({lo:g}, {hi:g})", None, z, 0.0, None, DERIVED, asserted=False)
        print(f"root of {args.function} in ({lo:g}, {hi:g}): {z:.15g}", file=stream)
    _stamp(rep, cfg, time.perf_counter() - t0)
    if cfg.output_path:
        Path(cfg.output_path).write_text(rep.to_json(cfg.timestamps) + "\n" if cfg.output_format == "json"
                                         else rep.to_csv())
    return EXIT_OK


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("common options")
    g.add_argument("--self-dual", action="store_true", help="use L = 2 pi, D = pi (the default)")
    g.add_argument("--L", type=float, help="macroscopic length")
    g.add_argument("--D", type=float, help="diffusion constant")
    g.add_argument("--seed", type=int, help="master seed (default 42)")
    g.add_argument("--eps", type=float, help="absolute truncation tolerance of theta series")
    g.add_argument("--jobs", type=int, help="suites run in parallel up to this many threads")
    g.add_argument("--out", help="summary path; per-suite reports are written next to it")
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--relax", action="store_true", help="allow tolerances looser than the defaults")
    g.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override one tolerance")
    g.add_argument("--config", help="key = value file; flags take precedence")
    g.add_argument("--grid-re", type=_range3_arg, metavar="A:B:N", help="Mellin grid, real parts")
    g.add_argument("--grid-im", type=_range3_arg, metavar="A:B:N", help="Mellin grid, imaginary parts")
    g.add_argument("--samples", type=int, help="sample count for the random-minor suites")
    g.add_argument("--no-timestamps", action="store_true", help="omit wall time and timestamps")


def _range3_arg(text):
    try:
        return _range3(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thetatrace",
                                     description="Numerical verification of the cycle heat-trace theta "
                                                 "identities.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suites", nargs="+", choices=("all",) + tuple(VERIFY))
    _common(v)
    a = sub.add_parser("audit", help="run audit suites (never fail on residual size)")
    a.add_argument("suites", nargs="+", choices=("all",) + tuple(AUDITS))
    _common(a)
    z = sub.add_parser("zeros", help="count zeros or locate a real zero")
    z.add_argument("action", choices=("count", "find"))
    z.add_argument("--function", default="xi", help="count: xi, Xi, gamma, laplace; find: Xi2, farch")
    z.add_argument("--rect", metavar="RE0,RE1,IM0,IM1")
    z.add_argument("--bracket", metavar="LO,HI")
    z.add_argument("--root-tol", type=float, default=1e-12, help="bracket width at which find stops")
    z.add_argument("--samples-per-edge", type=int, default=256)
    _common(z)
    return parser


_VALUE_OPTIONS = ("--grid-re", "--grid-im", "--rect", "--bracket")


def _glue_negative_values(argv):
    # "--grid-im -5:5:5" would read -5:5:5 as an option; rewrite it as "--grid-im=-5:5:5"
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        if args.command == "zeros":
            return run_zeros(args, build_config(args))
        cfg = build_config(args, args.suites)
        return run(cfg, args.command)
    except ConfigError as exc:
        print(f"thetatrace: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"thetatrace: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ThetaTraceError as exc:
        print(f"thetatrace: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
