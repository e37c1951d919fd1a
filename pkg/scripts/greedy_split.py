"""Greedy disjoint-ball sequence of a geometric set and its even/odd split.

Prints the sequence, both halves, and for each expansion radius the odd
term nearest the center that stays outside the even half's expansion.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from coarsekit import IntegerGrid, Window
from coarsekit.ideals import closure_ball_invariant, prop3_split
from coarsekit.pointset import geom


@dataclass
class SplitConfig:
    base: int = 2
    window_exp: int = 20
    cap: int = 8


def main(cfg: SplitConfig) -> int:
    Z = IntegerGrid()
    W = Window(Z, 0, 2**cfg.window_exp)
    A = geom(Z, cfg.base)
    res = prop3_split(A, closure_ball_invariant([A], True, cfg.cap), W, cfg.cap)
    cert = res.verdict.certificate
    print("sequence :", res.a_seq)
    print("even half:", cert["A0"])
    print("odd half :", cert["A1"])
    print("balls pairwise disjoint:", cert["disjoint"])
    for row in cert["A1_not_in_J"]:
        print(f"  r={row['r']}: {row['witness']} escapes (farthest {row['far_witness']})")
    print(res.verdict.answer.value, res.verdict.narrative)
    return 0 if res.verdict.yes else 1


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = SplitConfig()
    p.add_argument("--base", type=int, default=d.base)
    p.add_argument("--window-exp", type=int, default=d.window_exp)
    p.add_argument("--cap", type=int, default=d.cap)
    raise SystemExit(main(SplitConfig(**vars(p.parse_args()))))
