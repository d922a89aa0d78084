"""``octagon`` command line: verify | orbit | explore {niceloop, chart, fixedpoints}.

Exit codes: 0 success, 1 verification failure, 2 domain or input error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import emit, flow, poncelet, verify
from .maps import orbit_scan
from .octagon import CanonCoords
from .scalar import DomainError, Surd, parse_scalar

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
EXACT_STEP_LIMIT = 24
COORD_NAMES = "abcd"
# the regular octagon: exact in Q(√2), or as floats
NAMED_POINTS = {
    "regular": lambda exact: CanonCoords(*([Surd(Fraction(0), Fraction(1, 2))] * 4))
    if exact
    else CanonCoords(*([math.sqrt(0.5)] * 4))
}


@dataclass
class RunConfig:
    command: str
    coords: CanonCoords | None = None
    backend: str = "exact"
    steps: int = 1000
    back: int = 0
    tol: float = 1e-9
    seed: int = 0
    out: str | None = None
    format: str = "json"
    project: tuple = (0, 1)
    extra: dict = field(default_factory=dict)


class InputError(ValueError):
    pass


def parse_coords(text: str, backend: str) -> CanonCoords:
    if text in NAMED_POINTS:
        return NAMED_POINTS[text](backend == "exact")
    try:
        return CanonCoords.parse(text, exact=backend == "exact")
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_projection(text: str) -> tuple:
    names = [s.strip() for s in text.split(",")]
    if len(names) != 2 or any(n not in COORD_NAMES for n in names) or names[0] == names[1]:
        raise InputError(f"--project expects two distinct names from a,b,c,d, got {text!r}")
    return tuple(COORD_NAMES.index(n) for n in names)


def _level(args) -> flow.LevelSpec:
    return flow.LevelSpec(parse_scalar(args.f1), parse_scalar(args.f2))


# -- commands --------------------------------------------------------------------


def cmd_verify(cfg: RunConfig) -> int:
    results = verify.run_checks(cfg.extra.get("only"), cfg.seed, cfg.extra["trials"], cfg.extra["mutate"])
    rep = verify.report(results)
    emit.write(cfg.out, emit.json_text(rep))
    for r in results:
        tag = "PASS" if r.passed else ("KNOWN" if r.known_discrepancy else "FAIL")
        print(f"{tag:5} {r.group:10} {r.name} {r.detail}".rstrip(), file=sys.stderr)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def orbit_rows(cfg: RunConfig) -> tuple:
    p = cfg.coords if cfg.backend == "exact" else cfg.coords.to_float()
    if cfg.backend == "exact" and cfg.steps + cfg.back > EXACT_STEP_LIMIT and not _is_surd(p):
        raise InputError(f"exact orbits are limited to {EXACT_STEP_LIMIT} steps (sizes double per step)")
    scan = orbit_scan(p, cfg.steps, cfg.back)
    if len(scan.rows) == 1 and (cfg.steps or cfg.back):
        raise DomainError("T3", scan.stop_forward or scan.stop_backward or "orbit undefined")
    base = next(r for r in scan.rows if r.index == 0)
    rows = []
    for r in scan.rows:
        drift = abs(float(r.F1 - base.F1)) + abs(float(r.F2 - base.F2))
        rows.append((r.index, *r.coords, int(r.convex), r.F1, r.F2, r.G, drift))
    return scan, rows


def _is_surd(p) -> bool:
    return isinstance(p[0], Surd)


ORBIT_HEADER = ("index", "a", "b", "c", "d", "convex", "F1", "F2", "G", "drift")


def cmd_orbit(cfg: RunConfig) -> int:
    scan, rows = orbit_rows(cfg)
    if cfg.format == "csv":
        text = emit.csv_text(ORBIT_HEADER, rows)
    elif cfg.format == "svg":
        i, j = cfg.project
        pts = [(float(r[1 + i]), float(r[1 + j])) for r in rows]
        title = f"T3 orbit, projection {COORD_NAMES[i]},{COORD_NAMES[j]}"
        text = emit.svg_scatter(pts, [bool(r[5]) for r in rows], title)
    else:
        text = emit.json_text(
            {
                "start": cfg.coords.format(),
                "rows": len(rows),
                "max_drift": scan.drift(),
                "convex_range": scan.convex_range(),
                "stop_forward": scan.stop_forward,
                "stop_backward": scan.stop_backward,
            }
        )
    emit.write(cfg.out, text)
    return EXIT_OK


def explore_niceloop(cfg: RunConfig) -> int:
    level = cfg.extra["level"]
    loop = flow.trace_nice_loop(level, cfg.extra["step"])
    if cfg.format == "csv":
        text = emit.csv_text(("a", "b", "c", "d"), loop.points.tolist())
    elif cfg.format == "svg":
        i, j = cfg.project
        pts = [(p[i], p[j]) for p in loop.points]
        marks = [(q[i], q[j]) for q in loop.cusps]
        text = emit.svg_polyline(pts, marks, f"nice loop at (F1, F2) = ({level.F1}, {level.F2})")
    else:
        text = emit.json_text(
            {
                "level": [str(level.F1), str(level.F2)],
                "endpoints_c": flow.nice_loop_endpoints(float(level.g), float(level.h)),
                "points": len(loop.points),
                "cusps": [list(q) for q in loop.cusps],
                "closure_error": loop.closure_error,
                "max_level_error": loop.max_level_error(),
            }
        )
    emit.write(cfg.out, text)
    return EXIT_OK


def explore_chart(cfg: RunConfig) -> int:
    level = cfg.extra["level"]
    base = flow.chart_base(level)
    t1 = flow.chart_translation(level, base, "T3")
    t2 = flow.chart_translation(level, base, "T3T3", guess=2 * t1.vector)
    if cfg.format in ("csv", "svg"):
        cloud = flow.chart_cloud(base, cfg.extra["radius"], cfg.extra["grid"])
        if cfg.format == "csv":
            text = emit.csv_text(("t1", "t2", "a", "b", "c", "d"), cloud)
        else:
            i, j = cfg.project
            text = emit.svg_scatter([(r[2 + i], r[2 + j]) for r in cloud], title="flat chart image")
    else:
        text = emit.json_text(
            {
                "level": [str(level.F1), str(level.F2)],
                "base": list(base),
                "T3": {"tau": t1.vector, "xg_component": t1.xg_component, "residual": t1.residual},
                "T3^2": {"tau": t2.vector, "xg_component": t2.xg_component, "residual": t2.residual},
                "additivity_error": float(max(abs(t2.vector - 2 * t1.vector))),
            }
        )
    emit.write(cfg.out, text)
    return EXIT_OK


def _sweep_row(args) -> list:
    k, ells = args
    return poncelet.sweep([k], ells)


def explore_fixedpoints(cfg: RunConfig) -> int:
    ex = cfg.extra
    if ex["grid"]:
        ks, ells = poncelet.grid(ex["grid"])
        workers = ex["workers"] or os.cpu_count() or 1
        if workers > 1:
            with ProcessPoolExecutor(workers) as pool:
                rows = [r for chunk in pool.map(_sweep_row, [(k, ells) for k in ks]) for r in chunk]
        else:
            rows = poncelet.sweep(ks, ells)
        fps = None
    else:
        fps = poncelet.fixed_points(poncelet.LFTLevel(parse_scalar(ex["k"]), parse_scalar(ex["ell"])))
        rows = [fps.to_row()]
    if cfg.format == "csv":
        text = emit.csv_text(poncelet.SWEEP_HEADER, [[r[h] for h in poncelet.SWEEP_HEADER] for r in rows])
    elif cfg.format == "svg":
        pts = [(r["k"], r["ell"]) for r in rows]
        text = emit.svg_scatter(pts, [r["D"] > 0 for r in rows], "D > 0 over the (k, ell) grid", r=3)
    elif fps is None:
        text = emit.json_text({"rows": rows})
    else:
        text = emit.json_text(
            {
                **fps.to_row(),
                "D": str(fps.D) if isinstance(fps.D, Fraction) else fps.D,
                "attractor": list(fps.attractor),
                "repeller": list(fps.repeller),
                "repeller_multiplier": fps.repeller_multiplier,
                "type": poncelet.classify_lft(fps.level).type,
                "repeller_is_star_reorder": poncelet.repeller_is_star_reorder(fps),
            }
        )
    emit.write(cfg.out, text)
    return EXIT_OK


EXPLORE = {"niceloop": explore_niceloop, "chart": explore_chart, "fixedpoints": explore_fixedpoints}


# -- argument parsing ---------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    p.add_argument("--project", default="a,b", help="coordinate pair for SVG plots")
    p.add_argument("--tol", type=float, default=1e-9)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="octagon", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the exact identity suite")
    _common(v)
    v.add_argument("--only", action="append", help=f"group or check name; groups: {', '.join(verify.GROUPS)}")
    v.add_argument("--trials", type=int, default=50)
    v.add_argument("--mutate", action="store_true", help="flip the sign of one block of ω")

    o = sub.add_parser("orbit", help="scan a T3 orbit")
    _common(o)
    o.add_argument("--coords", required=True, help='"a,b,c,d" as fractions, or "regular"')
    o.add_argument("--backend", choices=("exact", "float"), default="exact")
    o.add_argument("--steps", type=int, default=1000)
    o.add_argument("--back", type=int, default=0, help="backward steps")

    e = sub.add_parser("explore", help="numerical experiments")
    esub = e.add_subparsers(dest="experiment", required=True)
    n = esub.add_parser("niceloop")
    _common(n)
    n.add_argument("--f1", default="3")
    n.add_argument("--f2", default="4")
    n.add_argument("--step", type=float, default=1e-2)
    c = esub.add_parser("chart")
    _common(c)
    c.add_argument("--f1", default="3")
    c.add_argument("--f2", default="4")
    c.add_argument("--radius", type=float, default=0.5)
    c.add_argument("--grid", type=int, default=11)
    f = esub.add_parser("fixedpoints")
    _common(f)
    f.add_argument("--k", default="0")
    f.add_argument("--ell", default="0")
    f.add_argument("--grid", type=int, default=0, help="sweep an n x n grid over K instead")
    f.add_argument("--workers", type=int, default=0, help="process pool size (default: all CPUs)")
    return ap


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(args.command, seed=args.seed, out=args.out, format=args.format, tol=args.tol)
    cfg.project = parse_projection(args.project)
    if args.command == "verify":
        cfg.extra = {"only": args.only, "trials": args.trials, "mutate": args.mutate}
    elif args.command == "orbit":
        cfg.backend, cfg.steps, cfg.back = args.backend, args.steps, args.back
        cfg.coords = parse_coords(args.coords, args.backend)
    else:
        cfg.command = f"explore {args.experiment}"
        cfg.extra = {k: v for k, v in vars(args).items() if k not in ("seed", "out", "format", "project", "tol")}
        if args.experiment in ("niceloop", "chart"):
            cfg.extra["level"] = _level(args)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "orbit":
            return cmd_orbit(cfg)
        return EXPLORE[args.experiment](cfg)
    except (InputError, DomainError, ValueError, ArithmeticError) as exc:
        print(f"octagon: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
