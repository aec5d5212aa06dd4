#!/usr/bin/env python3
"""Averages of f(x0 + Omega(m)) over R-free m <= N for finite rotations, against d(F) * mean f."""

import argparse
from dataclasses import dataclass
from pathlib import Path

from sievelab import ergodic_average, level_for_primes, load_sieve, materialize, omega_table
from sievelab.model import SieveSpec
from sievelab.pnt import FiniteRotation

SIEVES = Path(__file__).resolve().parents[1] / "sieves"


@dataclass
class Config:
    pmax: int = 1000
    Ns: tuple = (10**4, 10**5, 10**6)


ROTATIONS = {
    "flip": FiniteRotation.flip(),
    "Z/3 x0=0": FiniteRotation.parse(3, "2/3,-1/3,-1/3"),
    "Z/3 x0=1": FiniteRotation.parse(3, "2/3,-1/3,-1/3", 1),
    "Z/4 (1,0,-1,0)": FiniteRotation.parse(4, "1,0,-1,0"),
}


def run(cfg: Config, names):
    om = omega_table(max(cfg.Ns))
    print("sieve\trotation\tN\tlhs\trhs\terror")
    for name in names:
        if name == "empty":
            s = materialize(SieveSpec(), 0)
        else:
            spec = load_sieve(SIEVES / f"{name}.sieve")
            s = materialize(spec, level_for_primes(spec, cfg.pmax))
        for label, rot in ROTATIONS.items():
            for N in cfg.Ns:
                r = ergodic_average(s, N, rot, om)
                print(f"{name}\t{label}\t{N}\t{float(r.lhs):.6f}\t{float(r.rhs):.6f}\t{float(r.lhs - r.rhs):+.6f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pmax", type=int, default=Config.pmax)
    ap.add_argument("--N", type=int, nargs="+", default=list(Config.Ns))
    ap.add_argument("names", nargs="*", default=["empty", "squarefree", "cubefree"])
    a = ap.parse_args()
    run(Config(a.pmax, tuple(a.N)), a.names)


if __name__ == "__main__":
    main()
