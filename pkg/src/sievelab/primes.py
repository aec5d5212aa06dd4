"""Prime tables: a cached numpy sieve plus helpers for prime streams."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

_cache: dict[str, np.ndarray] = {"primes": np.array([], dtype=np.int64), "limit": np.array([1])}


def _sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def primes_up_to(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array (cached, grows geometrically)."""
    if limit > int(_cache["limit"][0]):
        new_limit = max(limit, 2 * int(_cache["limit"][0]), 1 << 16)
        _cache["primes"] = _sieve(new_limit)
        _cache["limit"] = np.array([new_limit])
    primes = _cache["primes"]
    return primes[: np.searchsorted(primes, limit, side="right")]


def first_primes(count: int, modulus: int = 1, residue: int = 0) -> np.ndarray:
    """The first ``count`` primes ``p`` with ``p % modulus == residue``."""
    if count <= 0:
        return np.array([], dtype=np.int64)
    n = max(count, 6)
    limit = int(n * (math.log(n) + math.log(math.log(n)))) + 10
    limit *= max(1, modulus)
    while True:
        ps = primes_up_to(limit)
        if modulus > 1:
            ps = ps[ps % modulus == residue % modulus]
        if len(ps) >= count:
            return ps[:count]
        limit *= 2


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    if n < 1 << 22:
        ps = primes_up_to(1 << 22)
        i = int(np.searchsorted(ps, n))
        return i < len(ps) and int(ps[i]) == n
    # deterministic Miller-Rabin for 64-bit inputs
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n >= 1`` as ``((p, e), ...)`` in increasing ``p``.

    Trial division by tabulated primes; inputs beyond 10^14 fall back to sympy.
    """
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    if n > 10**14:
        from sympy import factorint

        return tuple(sorted((int(p), int(e)) for p, e in factorint(n).items()))
    out = []
    for p in primes_up_to(math.isqrt(n) + 1).tolist():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_factors(n: int) -> list[int]:
    return [p for p, _ in factorize(abs(n))] if n else []
