#!/usr/bin/env python3
"""Check that translating equivariant-unification problems preserves
satisfiability: compare the brute-force EU semantics against the decision
procedure run on the translated constraint problem."""
import argparse
import random
import time
from dataclasses import dataclass

from npnas.decider import decide
from npnas.eubridge import EU_SIGNATURE, eu_brute_sat, translate_eu
from npnas.oracle import random_eu_problem


@dataclass(frozen=True)
class Config:
    count: int = 500
    seed: int = 0


def run(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    sat = unsat = 0
    t0 = time.perf_counter()
    for i in range(cfg.count):
        p = random_eu_problem(rng)
        expected = eu_brute_sat(p)
        got = decide(EU_SIGNATURE, translate_eu(p)).sat
        if expected != got:
            print(f"DISAGREEMENT on instance {i}: "
                  f"brute={expected} translated={got}\n{p}")
            return 1
        sat += expected
        unsat += not expected
    dt = time.perf_counter() - t0
    print(f"{cfg.count} EU problems in {dt:.1f}s "
          f"({cfg.count / dt:.0f}/s): sat={sat} unsat={unsat}")
    print("translation preserves satisfiability on every instance")
    return 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args()
    return run(Config(a.count, a.seed))


if __name__ == "__main__":
    raise SystemExit(main())
