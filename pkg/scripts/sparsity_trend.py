"""Pattern width of {2^n} and of its 1-ball as the rational grid refines.

    python3 scripts/sparsity_trend.py --steps 2 4 8 16 --window-exp 20
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field
from fractions import Fraction

from coarsekit import RationalGrid, Window
from coarsekit.pointset import ball_of_set, geom
from coarsekit.recurrence import ShiftFamily, sparse_verdict


@dataclass
class TrendConfig:
    steps: list[int] = field(default_factory=lambda: [2, 4, 8])  # grid step is 1/k
    window_exp: int = 20
    base: int = 2
    radius: int = 1
    bands: int = 8


def main(cfg: TrendConfig) -> None:
    grids = [RationalGrid(Fraction(1, k)) for k in cfg.steps]
    windows = [Window(g, 0, 2**cfg.window_exp) for g in grids]
    shifts = [ShiftFamily.offsets(g, -cfg.radius, cfg.radius) for g in grids]
    for name, build in (("A", lambda g: geom(g, cfg.base)), (f"B(A,{cfg.radius})", lambda g: ball_of_set(geom(g, cfg.base), cfg.radius))):
        t0 = time.perf_counter()
        v = sparse_verdict([build(g) for g in grids], shifts, windows, cfg.bands)
        mus = ", ".join(str(m) for m in v.certificate["mu"])
        print(f"{name:<10} mu = {mus:<16} {v.label or v.reason}  ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = TrendConfig()
    p.add_argument("--steps", type=int, nargs="+", default=d.steps)
    p.add_argument("--window-exp", type=int, default=d.window_exp)
    p.add_argument("--base", type=int, default=d.base)
    p.add_argument("--radius", type=int, default=d.radius)
    p.add_argument("--bands", type=int, default=d.bands)
    main(TrendConfig(**vars(p.parse_args())))
