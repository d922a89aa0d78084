"""Translation vectors of T3 and T3^2 in the flat chart of a level set."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from _common import out_dir, parse_config
from octamap import emit, flow


@dataclass
class Config:
    f1: str = "3"
    f2: str = "4"
    radius: float = 0.5
    grid: int = 21
    out: str = "results/chart"


def main(cfg: Config):
    out = out_dir(cfg.out)
    level = flow.LevelSpec(Fraction(cfg.f1), Fraction(cfg.f2))
    base = flow.chart_base(level)
    tau = flow.chart_translation(level, base, "T3")
    tau2 = flow.chart_translation(level, base, "T3T3", guess=2 * tau.vector)
    summary = {
        "level": [cfg.f1, cfg.f2],
        "base": list(base),
        "tau_T3": tau.vector,
        "xg_component": tau.xg_component,
        "tau_T3^2": tau2.vector,
        "additivity_error": float(np.max(np.abs(tau2.vector - 2 * tau.vector))),
    }
    emit.write(out / "translation.json", emit.json_text(summary))
    cloud = flow.chart_cloud(base, cfg.radius, cfg.grid)
    emit.write(out / "cloud.csv", emit.csv_text(("t1", "t2", "a", "b", "c", "d"), cloud))
    emit.write(out / "cloud.svg", emit.svg_scatter([(r[2], r[3]) for r in cloud], title="flat chart image, (a, b)"))
    print(emit.json_text(summary), end="")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
