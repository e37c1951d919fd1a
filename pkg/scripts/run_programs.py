"""Run every program under programs/ and write one JSON report per file."""
from __future__ import annotations

import argparse
import pathlib
from dataclasses import dataclass

from coarsekit.dsl import parse
from coarsekit.runner import RunOptions, emit, program_digest, run

ROOT = pathlib.Path(__file__).resolve().parents[1]


@dataclass
class BatchConfig:
    programs: pathlib.Path = ROOT / "programs"
    out: pathlib.Path = ROOT / "reports"
    jobs: int = 4


def main(cfg: BatchConfig) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    errors = 0
    for f in sorted(cfg.programs.glob("*.bl")):
        text = f.read_text(encoding="utf-8")
        records = run(parse(text), RunOptions(jobs=cfg.jobs))
        (cfg.out / f"{f.stem}.json").write_bytes(emit(records, "json", program_digest(text)))
        bad = sum(r["answer"] == "ERROR" for r in records)
        errors += bad
        answers = " ".join(r["answer"][0] for r in records)
        print(f"{f.name:<12} {len(records):>3} jobs  {answers}" + (f"  ({bad} errors)" if bad else ""))
    return 1 if errors else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    d = BatchConfig()
    p.add_argument("--programs", type=pathlib.Path, default=d.programs)
    p.add_argument("--out", type=pathlib.Path, default=d.out)
    p.add_argument("--jobs", type=int, default=d.jobs)
    raise SystemExit(main(BatchConfig(**vars(p.parse_args()))))
