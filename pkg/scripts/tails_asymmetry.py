#!/usr/bin/env python3
"""Weak-tail ratios of the asymmetric sieve W and its index shift W' = (W_{i+1}).

Part 1 runs the fixed-depth protocol (L = 200 against L_max = 2000) on
[0..N] and [-N..0]. Part 2 lets L_max grow with the window so that every
class whose small representative lies in [0..N] is seen: there W keeps a
tiny weak tail while W' (no 1 + 4Z class) keeps about a quarter of the
window in its tail.
"""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from sievelab import Window, load_sieve, materialize, tails_profile
from sievelab.model import Sieve

SIEVES = Path(__file__).resolve().parents[1] / "sieves"


@dataclass
class Config:
    N: int = 10**6
    L: int = 200
    L_max: int = 2000
    scaled_N: tuple = (10**4, 3 * 10**4)


def shifted(s: Sieve) -> Sieve:
    """W'_i = W_{i+1}, as an explicit sieve."""
    return Sieve.from_classes(1, [(c.modulus, c.residues) for c in s.classes[1:]])


def fixed_depth(cfg: Config, W: Sieve):
    print(f"# fixed depth: L={cfg.L}, L_max={cfg.L_max}")
    print("window\tweak_ratio\tstrong_ratio")
    for w in (Window.interval(0, cfg.N), Window.interval(-cfg.N, 0)):
        (row,) = tails_profile(W.prefix(cfg.L_max), w, [cfg.L])
        print(f"{w}\t{row.weak_ratio:.6f}\t{row.strong_ratio:.6f}")


def scaled(cfg: Config, spec):
    print("# scaled: L_max = N/2 + 2 (every class with representative in [0..N])")
    print("N\tL\tW_weak\tWprime_weak")
    for N in cfg.scaled_N:
        t0 = time.perf_counter()
        W = materialize(spec, N // 2 + 2)
        Wp = shifted(W)
        w = Window.interval(0, N)
        (a,) = tails_profile(W, w, [cfg.L])
        (b,) = tails_profile(Wp, w, [cfg.L - 1])
        print(f"{N}\t{cfg.L}\t{a.weak_ratio:.6f}\t{b.weak_ratio:.6f}\t# {time.perf_counter() - t0:.1f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--N", type=int, default=Config.N)
    ap.add_argument("--L", type=int, default=Config.L)
    ap.add_argument("--L-max", type=int, default=Config.L_max)
    ap.add_argument("--scaled", type=int, nargs="*", default=list(Config.scaled_N))
    a = ap.parse_args()
    cfg = Config(a.N, a.L, a.L_max, tuple(a.scaled))
    spec = load_sieve(SIEVES / "asymmetric.sieve")
    fixed_depth(cfg, materialize(spec, cfg.L_max))
    scaled(cfg, spec)


if __name__ == "__main__":
    main()
