#!/usr/bin/env python3
"""Cross-check the decision procedure against the enumeration oracle on
randomized problems, and report verdict/witness statistics."""
import argparse
import random
import time
from dataclasses import dataclass

from npnas.decider import SolveOptions, decide
from npnas.oracle import brute_sat, random_problem
from npnas.schematic import satisfies_all


@dataclass(frozen=True)
class Config:
    count: int = 500
    seed: int = 0
    max_vars: int = 4
    max_constraints: int = 3
    strategy: str = "focused"


def run(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    opts = SolveOptions(strategy=cfg.strategy)
    stats = {"sat": 0, "unsat": 0, "inexact-skipped": 0}
    t0 = time.perf_counter()
    for i in range(cfg.count):
        sig, p = random_problem(rng, cfg.max_vars, cfg.max_constraints)
        r = decide(sig, p, opts)
        res = brute_sat(sig, p)
        if res.exact or res.sat:
            if res.sat != r.sat:
                print(f"DISAGREEMENT on instance {i}: "
                      f"oracle={res.sat} decide={r.sat}\n{p}")
                return 1
        else:
            stats["inexact-skipped"] += 1
        if r.sat:
            if not satisfies_all(r.witness, p):
                print(f"BAD WITNESS on instance {i}:\n{p}")
                return 1
            stats["sat"] += 1
        else:
            stats["unsat"] += 1
    dt = time.perf_counter() - t0
    print(f"{cfg.count} problems in {dt:.1f}s "
          f"({cfg.count / dt:.0f}/s), strategy={cfg.strategy}")
    for k, v in stats.items():
        print(f"  {k}: {v}")
    print("all verdicts agree; all witnesses check")
    return 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--max-vars", type=int, default=Config.max_vars)
    ap.add_argument("--max-constraints", type=int,
                    default=Config.max_constraints)
    ap.add_argument("--strategy", choices=("focused", "full"),
                    default=Config.strategy)
    a = ap.parse_args()
    return run(Config(a.count, a.seed, a.max_vars, a.max_constraints,
                      a.strategy))


if __name__ == "__main__":
    raise SystemExit(main())
