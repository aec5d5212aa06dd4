"""Independent reference implementations.

Nothing here imports sievelab: each oracle is a slow, direct transcription
of a definition (trial division, exhaustive residue search, per-point
membership) used to check the vectorized code.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import sympy


def first_primes(n):
    bound = 20 + int(n * (math.log(n + 2) + math.log(math.log(n + 3)) + 2))
    return [int(p) for p in sympy.primerange(2, bound)][:n]


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_lfree(n: int, l: int) -> bool:
    return n != 0 and all(e < l for e in sympy.factorint(abs(n)).values())


def crt_brute(congruences):
    """Smallest x in [0, prod m) with x = r mod m for every pair."""
    M = math.prod(m for _, m in congruences)
    for x in range(M):
        if all((x - r) % m == 0 for r, m in congruences):
            return x, M
    return None


def free_point(x, classes) -> bool:
    """``classes`` = [(modulus tuple, set of residue tuples)]; x survives every class."""
    for mod, res in classes:
        if tuple(xi % m for xi, m in zip(x, mod)) in res:
            return False
    return True


def first_index(x, classes) -> int:
    for i, (mod, res) in enumerate(classes, start=1):
        if tuple(xi % m for xi, m in zip(x, mod)) in res:
            return i
    return 0


def cylinder_brute(classes, A, B):
    """Exact Mirsky measure of a pattern for explicit Z-classes by CRT counting.

    The product of the residue groups is Z/M (M = product of the pairwise
    coprime moduli), so the measure is the proportion of x mod M whose
    translate satisfies the pattern.
    """
    M = math.prod(m for m, _ in classes)
    hit = 0
    for x in range(M):
        ok = all(all((x + a) % m not in r for m, r in classes) for a in A)
        ok = ok and all(any((x + b) % m in r for m, r in classes) for b in B)
        hit += ok
    return Fraction(hit, M)


def roots_brute(coeffs, q):
    """Roots of ``sum coeffs[i] X^i`` in Z/q by evaluation at every residue."""
    out = []
    for x in range(q):
        v = 0
        for c in reversed(coeffs):
            v = (v * x + c) % q
        if v == 0:
            out.append(x)
    return out


def omega_brute(n: int) -> int:
    return sum(sympy.factorint(n).values()) if n > 1 else 0


def stabilizer_brute(m: int, res: set[int]) -> set[int]:
    return {t for t in range(m) if {(r + t) % m for r in res} == res}


def min_gap_brute(m: int, res: set[int]) -> int:
    pts = sorted(r + j * m for r in res for j in range(-1, 2))
    return min(b - a for a, b in zip(pts, pts[1:]))


def is_union_of_coprime_cosets(m: int, res: set[int]) -> bool:
    """True iff ``res`` is a union of cosets of pairwise coprime proper divisors of m."""
    divs = [d for d in sympy.divisors(m) if d < m]
    cands = []
    for d in divs:
        for a in range(d):
            coset = {x for x in range(m) if x % d == a}
            if coset <= res:
                cands.append((d, frozenset(coset)))
    covered = set()
    # a cover using coprime divisors: try all subsets of the distinct divisors
    by_d = {}
    for d, c in cands:
        by_d.setdefault(d, set()).update(c)
    ds = list(by_d)
    for r in range(1, len(ds) + 1):
        for sub in itertools.combinations(ds, r):
            if all(math.gcd(a, b) == 1 for a, b in itertools.combinations(sub, 2)):
                covered = set().union(*(by_d[d] for d in sub))
                if covered == res:
                    return True
    return False


def sylvester_det(f, g):
    """Res(f, g) as the determinant of the Sylvester matrix, via sympy's exact det.

    Coefficients are low to high; rows hold f shifted deg g times, then g
    shifted deg f times, highest coefficient first.
    """
    m, n = len(f) - 1, len(g) - 1
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(f)) + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(g)) + [0] * (m - 1 - i))
    return int(sympy.Matrix(rows).det()) if rows else 1
