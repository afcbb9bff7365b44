"""Sweep the axiom harness over rings and ranks and print a compact table.

Usage: python3 scripts/axiom_sweep.py [--samples N] [--max-n N] [--seed S] [--jobs J]
"""
import argparse
import sys
import time
from dataclasses import dataclass

from gamma_forge.dpaxioms import check_axioms, gamma_augmentation
from gamma_forge.sampling import DEFAULT_SEED, spec_of
from gamma_forge.scalars import parse_ring


@dataclass(frozen=True)
class SweepConfig:
    rings: tuple = ("Z", "Q", "Z/6", "Z/4", "Z[X]")
    ranks: tuple = (1, 2, 3)
    samples: int = 200
    max_n: int = 4
    seed: int = DEFAULT_SEED
    jobs: int = 1


def sweep(cfg: SweepConfig) -> bool:
    all_ok = True
    print(f"{'ring':<8}{'rank':>5}  {'fails':>6}  {'secs':>6}")
    for tag in cfg.rings:
        for rank in cfg.ranks:
            t0 = time.perf_counter()
            dp = gamma_augmentation(spec_of(parse_ring(tag), rank))
            report = check_axioms(dp, cfg.seed, cfg.samples, cfg.max_n, jobs=cfg.jobs)
            fails = sum(row["fail"] for row in report.to_json())
            all_ok &= report.ok
            print(f"{tag:<8}{rank:>5}  {fails:>6}  {time.perf_counter() - t0:>6.2f}")
    return all_ok


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=SweepConfig.samples)
    ap.add_argument("--max-n", type=int, default=SweepConfig.max_n)
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=SweepConfig.seed)
    ap.add_argument("--jobs", type=int, default=SweepConfig.jobs)
    args = ap.parse_args()
    cfg = SweepConfig(samples=args.samples, max_n=args.max_n, seed=args.seed, jobs=args.jobs)
    return 0 if sweep(cfg) else 1


if __name__ == "__main__":
    sys.exit(main())
