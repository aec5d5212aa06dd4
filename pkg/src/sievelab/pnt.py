"""Omega tables and ergodic averages over R-free numbers along [1..N]."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import Window, enumerate_free
from .errors import BoundExceeded
from .model import Sieve
from .primes import primes_up_to

OMEGA_BUDGET = 200_000_000


@dataclass(frozen=True)
class OmegaTable:
    """``values[m] = Omega(m)`` for ``0 <= m <= N`` (``values[0]`` is unused, set to 0)."""

    N: int
    values: np.ndarray

    def __getitem__(self, m: int) -> int:
        if not 1 <= m <= self.N:
            raise IndexError(m)
        return int(self.values[m])


def smallest_prime_factors(N: int) -> np.ndarray:
    spf = np.zeros(N + 1, dtype=np.int32)
    for p in primes_up_to(int(N**0.5) + 1):
        p = int(p)
        if p * p > N:
            break
        view = spf[p * p :: p]
        view[view == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


def omega_table(N: int) -> OmegaTable:
    """Omega via ``Omega(n) = Omega(n / spf(n)) + 1``.

    Filled by dyadic blocks ``[2^j, 2^(j+1))``: every ``n / spf(n)`` in a block
    lies below ``2^j``, so each block is one vectorized step.
    """
    if N < 0 or N > OMEGA_BUDGET:
        raise BoundExceeded(f"N={N} outside the table budget {OMEGA_BUDGET}")
    spf = smallest_prime_factors(max(N, 1))
    om = np.zeros(max(N, 1) + 1, dtype=np.int8)
    lo = 2
    while lo <= N:
        hi = min(2 * lo, N + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        om[lo:hi] = om[n // spf[lo:hi]] + 1
        lo = hi
    om.setflags(write=False)
    return OmegaTable(N, om[: N + 1])


@dataclass(frozen=True)
class FiniteRotation:
    """``x -> x + 1`` on ``Z/q`` with observable ``f``; ``q = 2``, ``f = (1, -1)`` is the flip."""

    q: int
    f: tuple[Fraction, ...]
    x0: int = 0

    def __post_init__(self):
        if self.q < 1 or len(self.f) != self.q:
            raise ValueError("observable must list q values")
        object.__setattr__(self, "f", tuple(Fraction(v) for v in self.f))

    @classmethod
    def parse(cls, q: int, f: str, x0: int = 0) -> "FiniteRotation":
        return cls(q, tuple(Fraction(t) for t in f.split(",")), x0)

    @classmethod
    def flip(cls) -> "FiniteRotation":
        return cls(2, (Fraction(1), Fraction(-1)))

    @property
    def mean(self) -> Fraction:
        return sum(self.f, Fraction(0)) / self.q


@dataclass(frozen=True)
class ErgodicAverage:
    lhs: Fraction
    rhs: Fraction
    free_count: int
    N: int
    L: int

    @property
    def error(self) -> Fraction:
        return abs(self.lhs - self.rhs)


def ergodic_average(sieve: Sieve, N: int, rotation: FiniteRotation, omega: OmegaTable | None = None) -> ErgodicAverage:
    """``(1/N) sum_{m ∈ F^(L) ∩ [1..N]} f(x0 + Omega(m))`` against ``d_N(F^(L)) * mean f``."""
    if N < 1:
        raise ValueError("N must be positive")
    omega = omega if omega is not None and omega.N >= N else omega_table(N)
    free = enumerate_free(sieve, Window.interval(1, N)).free
    om = omega.values[1 : N + 1][free].astype(np.int64)
    counts = np.bincount((om + rotation.x0) % rotation.q, minlength=rotation.q)
    total = sum((rotation.f[c] * int(n) for c, n in enumerate(counts)), Fraction(0))
    F = int(free.sum())
    return ErgodicAverage(total / N, Fraction(F, N) * rotation.mean, F, N, sieve.L)


def besicovitch_error(sieve: Sieve, L_inner: int, N: int) -> Fraction:
    """``(1/N) sum_{m<=N} |1_{F^(L)}(m) - P_{L_inner}(m)|``.

    ``P_{L_inner}`` is the indicator of avoiding ``R_1..R_{L_inner}``; the
    two indicators differ exactly on the weak-tail set at level ``L_inner``.
    """
    if not 0 <= L_inner <= sieve.L:
        raise ValueError(f"L_inner must lie in 0..{sieve.L}")
    first = enumerate_free(sieve, Window.interval(1, N)).excluded_by
    return Fraction(int(np.count_nonzero(first > L_inner)), N)


def liouville_mean(N: int, omega: OmegaTable | None = None) -> Fraction:
    omega = omega if omega is not None and omega.N >= N else omega_table(N)
    odd = int(np.count_nonzero(omega.values[1 : N + 1] & 1))
    return Fraction(N - 2 * odd, N)

