#!/usr/bin/env python3
"""Mirsky sampling frequencies against truncated cylinder measures, in standard errors."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from sievelab import cylinder_measure, level_for_primes, load_sieve, materialize, mirsky_sample
from sievelab.dynamics import Pattern

SIEVES = Path(__file__).resolve().parents[1] / "sieves"


@dataclass
class Config:
    pmax: int = 50
    n: int = 10**5
    seed: int = 0


PATTERNS = [([0], []), ([0, 1], []), ([0], [1]), ([0, 1, 2], []), ([0, 2], [1]), ([2, 4], [3]), ([0, 1, 2, 3], [])]


def run(cfg: Config, names):
    print("sieve\tA|B\tfreq\tcylinder\tz")
    for name in names:
        spec = load_sieve(SIEVES / f"{name}.sieve")
        s = materialize(spec, level_for_primes(spec, cfg.pmax))
        pats = [Pattern.of(A, B) for A, B in PATTERNS]
        tab = mirsky_sample(s, pats, cfg.n, cfg.seed)
        for j, (pat, (A, B)) in enumerate(zip(pats, PATTERNS)):
            c = float(cylinder_measure(pat, s).value)
            se = (c * (1 - c) / cfg.n) ** 0.5
            if se > 0:
                z = (tab.frequency(j) - c) / se
            else:
                z = 0.0 if tab.hits[j] == 0 else float("inf")
            print(f"{name}\t{','.join(map(str, A))}|{','.join(map(str, B))}\t{tab.frequency(j):.5f}\t{c:.5f}\t{z:+.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pmax", type=int, default=Config.pmax)
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("names", nargs="*", default=["squarefree", "cubefree", "x_neq_omega"])
    a = ap.parse_args()
    run(Config(a.pmax, a.n, a.seed), a.names)


if __name__ == "__main__":
    main()
