#!/usr/bin/env python3
"""Joint l-free values of several polynomials: empirical counts against the truncated local product."""

import argparse
import time
from dataclasses import dataclass

from sievelab import multi_poly_density
from sievelab.errors import BoundExceeded
from sievelab.polysieve import count_joint_lfree


@dataclass
class Config:
    l: int = 2
    pmax: int = 1000
    Ns: tuple = (10**4, 10**5, 10**6)


FAMILIES = {
    "x^2+1, x^2+2": [(1, 0, 1), (2, 0, 1)],
    "x, x+1": [(0, 1), (1, 1)],
    "x^2+1": [(1, 0, 1)],
}


def run(cfg: Config):
    print("family\tN\tratio\tlower\tupper\tseconds")
    for name, fs in FAMILIES.items():
        d = multi_poly_density(fs, cfg.l, cfg.pmax)
        for N in cfg.Ns:
            t0 = time.perf_counter()
            try:
                r = count_joint_lfree(fs, cfg.l, N) / N
            except BoundExceeded as e:
                print(f"{name}\t{N}\tskipped: {e}")
                continue
            print(f"{name}\t{N}\t{r:.6f}\t{d.bracket.lower:.6f}\t{d.bracket.upper:.6f}\t"
                  f"{time.perf_counter() - t0:.2f}")


# cubics need roots mod p for p up to N^(3/2); add them with --cubic for small N
CUBIC = {"x^3+2": [(2, 0, 0, 1)]}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l", type=int, default=Config.l)
    ap.add_argument("--pmax", type=int, default=Config.pmax)
    ap.add_argument("--N", type=int, nargs="+", default=list(Config.Ns))
    ap.add_argument("--cubic", action="store_true", help="include x^3 + 2 (slow)")
    a = ap.parse_args()
    if a.cubic:
        FAMILIES.update(CUBIC)
    run(Config(a.l, a.pmax, tuple(a.N)))


if __name__ == "__main__":
    main()
