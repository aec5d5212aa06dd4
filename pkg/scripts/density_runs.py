#!/usr/bin/env python3
"""Empirical densities against certified product brackets for the bundled sieves."""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from sievelab import Window, enumerate_free, level_for_primes, load_sieve, materialize, product_density

SIEVES = Path(__file__).resolve().parents[1] / "sieves"


@dataclass
class Config:
    pmax: int = 1000
    N1: int = 10**6  # interval [1..N1] for sieves over Z
    N2: int = 2000  # box [1..N2]^2 for sieves over Z^2


def run(cfg: Config, names):
    print("sieve\tL\tempirical\tlower\tupper\tseconds")
    for name in names:
        t0 = time.perf_counter()
        spec = load_sieve(SIEVES / f"{name}.sieve")
        s = materialize(spec, level_for_primes(spec, cfg.pmax))
        w = Window.interval(1, cfg.N1) if s.k == 1 else Window.box((1,) * s.k, (cfg.N2,) * s.k)
        emp = enumerate_free(s, w).ratio
        b = product_density(s)
        print(f"{name}\t{s.L}\t{emp:.6f}\t{b.lower:.6f}\t{b.upper:.6f}\t{time.perf_counter() - t0:.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pmax", type=int, default=Config.pmax)
    ap.add_argument("--N1", type=int, default=Config.N1)
    ap.add_argument("--N2", type=int, default=Config.N2)
    ap.add_argument("names", nargs="*", default=["squarefree", "cubefree", "odd_prime_squares", "carefree",
                                                 "strongly_carefree"])
    a = ap.parse_args()
    run(Config(a.pmax, a.N1, a.N2), a.names)


if __name__ == "__main__":
    main()
