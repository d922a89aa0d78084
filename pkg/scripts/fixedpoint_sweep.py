"""Poncelet fixed points, discriminant and multipliers over a (k, ell) grid."""

from dataclasses import dataclass

from _common import out_dir, parse_config
from octamap import emit, poncelet


@dataclass
class Config:
    n: int = 20
    margin: float = 0.02
    out: str = "results/fixedpoints"


def main(cfg: Config):
    out = out_dir(cfg.out)
    ks, ells = poncelet.grid(cfg.n, cfg.margin)
    rows, worst = [], 0.0
    for k in ks:
        for l in ells:
            fp = poncelet.fixed_points(poncelet.LFTLevel(k, l))
            worst = max(worst, abs(fp.multiplier * fp.repeller_multiplier - 1))
            row = fp.to_row()
            row["star_reorder"] = poncelet.repeller_is_star_reorder(fp)
            rows.append(row)
    header = poncelet.SWEEP_HEADER + ("star_reorder",)
    emit.write(out / "sweep.csv", emit.csv_text(header, [[r[h] for h in header] for r in rows]))
    print(f"{len(rows)} levels; min D = {min(r['D'] for r in rows):.4g}; "
          f"max |multiplier| = {max(abs(r['multiplier']) for r in rows):.4g}; "
          f"max |lambda mu - 1| = {worst:.2e}; star reorder everywhere: {all(r['star_reorder'] for r in rows)}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
