"""Trace nice loops over a few levels and report closure, cusps and symmetry."""

from dataclasses import dataclass
from fractions import Fraction

from _common import out_dir, parse_config
from octamap import emit, flow


@dataclass
class Config:
    levels: str = "3:4,2:3,1:5,3:5,2:4"  # F1:F2 pairs
    step: float = 1e-2
    out: str = "results/niceloop"


def main(cfg: Config):
    out = out_dir(cfg.out)
    rows = []
    for pair in cfg.levels.split(","):
        f1, f2 = (Fraction(x) for x in pair.split(":"))
        level = flow.LevelSpec(f1, f2)
        try:
            loop = flow.trace_nice_loop(level, cfg.step)
        except ValueError as exc:  # e.g. (5, 6) is not a level of 𝒳₊
            print(f"skipping ({f1}, {f2}): {exc}")
            continue
        sym = flow.hausdorff(loop.points, loop.points[:, [2, 3, 0, 1]])
        c1, c2 = flow.nice_loop_endpoints(float(level.g), float(level.h))
        rows.append((str(f1), str(f2), c1, c2, len(loop.points), len(loop.cusps), loop.closure_error, sym, loop.max_level_error()))
        pts = [(p[2], p[3]) for p in loop.points]
        marks = [(q.c, q.d) for q in loop.cusps]
        emit.write(out / f"loop_{f1}_{f2}.svg", emit.svg_polyline(pts, marks, f"nice loop ({f1}, {f2}), (c, d) projection"))
    header = ("F1", "F2", "c1", "c2", "points", "cusps", "closure", "hausdorff_I", "level_error")
    text = emit.csv_text(header, rows)
    emit.write(out / "summary.csv", text)
    print(text, end="")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
