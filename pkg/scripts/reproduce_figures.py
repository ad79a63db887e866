"""Write the data behind every figure and table into one directory.

    python3 scripts/reproduce_figures.py --out results/figures
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from hdiffusion.figures import DEFAULT_A, DEFAULT_K, FIGURES, TABLES, export_table, run_figure, write_figure


@dataclass(frozen=True)
class Config:
    out: Path = Path("results/figures")
    a: float = DEFAULT_A
    K: float = DEFAULT_K
    points: int = 49


def main(cfg: Config) -> None:
    for name in sorted(FIGURES):
        start = time.perf_counter()
        paths = write_figure(run_figure(name, cfg.a, cfg.K, cfg.points), cfg.out)
        print(f"{name:18s} {time.perf_counter() - start:6.1f} s  {paths[0]}")
    for name in sorted(TABLES):
        paths = write_figure(export_table(name), cfg.out)
        print(f"{name:18s}           {paths[0]}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Config.out)
    ap.add_argument("--a", type=float, default=Config.a)
    ap.add_argument("--K", type=float, default=Config.K)
    ap.add_argument("--points", type=int, default=Config.points)
    main(Config(**vars(ap.parse_args())))
