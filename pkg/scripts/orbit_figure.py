"""Long float T3 orbit of a convex start, as a projected scatter plot."""

from dataclasses import dataclass

from _common import out_dir, parse_config
from octamap import emit
from octamap.maps import orbit_scan
from octamap.octagon import CanonCoords

NAMES = "abcd"


@dataclass
class Config:
    coords: str = "0.9,0.8,0.9,0.7"
    steps: int = 2**15
    project: str = "a,b"
    out: str = "results/orbit"


def main(cfg: Config):
    out = out_dir(cfg.out)
    p = CanonCoords.parse(cfg.coords, exact=False)
    scan = orbit_scan(p, cfg.steps)
    i, j = (NAMES.index(n) for n in cfg.project.split(","))
    pts = [(r.coords[i], r.coords[j]) for r in scan.rows]
    svg = emit.svg_scatter(pts, [r.convex for r in scan.rows], f"T3 orbit of {cfg.coords}, projection {cfg.project}", r=0.6)
    emit.write(out / "orbit.svg", svg)
    print(f"{len(scan.rows)} points, drift {scan.drift():.2e}, convex range {scan.convex_range()}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
