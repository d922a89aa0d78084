"""How long random convex octagons stay convex under T3 in each direction."""

import random
from collections import Counter
from dataclasses import dataclass

from _common import out_dir, parse_config
from octamap import emit
from octamap.maps import convex_lifetime
from octamap.sampling import random_convex_point


@dataclass
class Config:
    samples: int = 1000
    max_steps: int = 10_000
    seed: int = 0
    out: str = "results/lifetime"


def main(cfg: Config):
    out = out_dir(cfg.out)
    rng = random.Random(cfg.seed)
    rows = []
    for _ in range(cfg.samples):
        p = random_convex_point(rng, exact=False)
        life = convex_lifetime(p, cfg.max_steps)
        rows.append((*p, life.forward, life.backward, ";".join(life.domain)))
    emit.write(out / "lifetimes.csv", emit.csv_text(("a", "b", "c", "d", "forward", "backward", "domain"), rows))
    first = Counter(min(x for x in r[4:6] if x is not None) if any(r[4:6]) else None for r in rows)
    print(f"never exited: {first.pop(None, 0)}/{cfg.samples}")
    for steps in sorted(first):
        print(f"first exit after {steps:3d} steps: {first[steps]}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
