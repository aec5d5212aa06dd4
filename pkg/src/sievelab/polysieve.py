"""Sieves of l-free polynomial values: roots modulo p^l by brute force plus
Hensel lifting, resultants, discriminants and truncated densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .analysis import BracketedValue
from .errors import BoundExceeded, FullClass, PolynomialError
from .model import SieveSpec
from .primes import prime_factors, primes_up_to
from .residue import ResidueClassSet

BRUTE_BOUND = 10**5
INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial ``c_0 + c_1 X + ... + c_d X^d`` (coefficients low to high)."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c) or (0,))

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))

    @classmethod
    def of(cls, f) -> "IntPolynomial":
        if isinstance(f, IntPolynomial):
            return f
        if isinstance(f, str):
            return cls.parse(f)
        return cls(tuple(f))

    @property
    def degree(self) -> int:
        return -1 if self.coeffs == (0,) else len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mod(self, xs: np.ndarray, m: int) -> np.ndarray:
        """``f(xs) mod m`` by Horner; requires ``m^2 < 2^63``."""
        if m >= 3_037_000_499:
            raise BoundExceeded(f"modulus {m} too large for vectorized evaluation")
        xs = np.asarray(xs, dtype=np.int64) % m
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = (acc * xs + c % m) % m
        return acc

    def derivative(self) -> "IntPolynomial":
        if len(self.coeffs) == 1:
            return IntPolynomial((0,))
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __str__(self) -> str:
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c == 0:
                continue
            mon = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if mon and abs(c) == 1:
                coef = "-" if c < 0 else ""
            else:
                coef = str(c) + ("*" if mon else "")
            terms.append(coef + mon)
        return " + ".join(terms).replace("+ -", "- ") or "0"


# ---------------------------------------------------------------------------
# roots


def roots_mod_p(f: IntPolynomial, p: int, brute_bound: int = BRUTE_BOUND, method: str = "auto") -> list[int]:
    """Distinct roots of ``f`` modulo the prime ``p``.

    ``brute`` evaluates f on all of Z/p; ``split`` takes ``gcd(f, X^p - X)``
    and splits it by Cantor-Zassenhaus with deterministic shifts. ``auto``
    brute-forces small primes and splits the rest.
    """
    if method == "auto":
        method = "brute" if p <= SPLIT_FROM else "split"
    if method == "brute":
        if p > brute_bound:
            raise BoundExceeded(f"prime {p} exceeds brute-force root bound {brute_bound}")
        vals = f.eval_mod(np.arange(p, dtype=np.int64), p)
        return [int(x) for x in np.flatnonzero(vals == 0)]
    fp = _trim([c % p for c in f.coeffs])
    if not any(fp):
        return list(range(p))
    if len(fp) == 1:
        return []
    g = _gcd_mod(fp, _sub_mod(_powmod_x([0, 1], p, fp, p), [0, 1], p), p)
    return sorted(_split_roots(g, p))


SPLIT_FROM = 2000


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _sub_mod(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _divmod_mod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for i, bc in enumerate(b):
            a[s + i] = (a[s + i] - c * bc) % p
        a.pop()
        _trim(a)
        if len(a) < len(b):
            break
    return q, _trim(a) if a else [0]


def _mulmod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _divmod_mod(_trim(out), m, p)[1]


def _powmod_x(base, e, m, p):
    result, b = [1], _divmod_mod(base, m, p)[1]
    while e:
        if e & 1:
            result = _mulmod(result, b, m, p)
        b = _mulmod(b, b, m, p)
        e >>= 1
    return result


def _gcd_mod(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while any(b):
        a, b = b, _divmod_mod(a, b, p)[1]
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _split_roots(g, p):
    """Roots of a monic squarefree ``g`` that splits into linear factors mod ``p``."""
    d = len(g) - 1
    if d == 0:
        return []
    if d == 1:
        return [(-g[0]) % p]
    if p == 2:
        return [x for x in (0, 1) if sum(c * x**i for i, c in enumerate(g)) % 2 == 0]
    for a in range(p):
        h = _sub_mod(_powmod_x([a, 1], (p - 1) // 2, g, p), [1], p)
        h = _gcd_mod(g, h, p) if any(h) else g
        if 0 < len(h) - 1 < d:
            q, _ = _divmod_mod(g, h, p)
            return _split_roots(h, p) + _split_roots(_gcd_mod(q, q, p), p)
    raise PolynomialError(f"failed to split polynomial mod {p}")


def hensel_lift(f: IntPolynomial, roots: Iterable[int], p: int, j: int, df: IntPolynomial | None = None) -> list[int]:
    """Roots mod ``p^(j+1)`` lying over the given roots mod ``p^j``."""
    df = df or f.derivative()
    pj, pj1 = p**j, p ** (j + 1)
    out = []
    for r in roots:
        d = df(r) % p
        if d:
            # simple root: exactly one lift
            out.append((r - f(r) * pow(df(r), -1, pj1)) % pj1)
        else:
            out.extend(c for c in (r + t * pj for t in range(p)) if f(c) % pj1 == 0)
    return sorted(set(out))


def poly_roots_mod(f, p: int, l: int, brute_bound: int = BRUTE_BOUND) -> list[int]:
    """Sorted roots of ``f`` modulo ``p^l``."""
    f = IntPolynomial.of(f)
    if l < 1:
        raise ValueError("exponent l must be >= 1")
    if p**l > INT64_MAX:
        raise BoundExceeded(f"{p}^{l} exceeds the 64-bit range")
    df = f.derivative()
    roots = roots_mod_p(f, p, brute_bound)
    for j in range(1, l):
        roots = hensel_lift(f, roots, p, j, df)
    return roots


def rho(f, p: int, l: int) -> int:
    return len(poly_roots_mod(f, p, l))


# ---------------------------------------------------------------------------
# resultants


def bareiss_det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination."""
    A = [list(map(int, r)) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def sylvester(f: IntPolynomial, g: IntPolynomial) -> list[list[int]]:
    m, n = f.degree, g.degree
    fc, gc = list(reversed(f.coeffs)), list(reversed(g.coeffs))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return rows


def resultant(f, g, checked: bool = True) -> int:
    """``Res(f, g)`` as the Sylvester determinant; raises on 64-bit overflow if ``checked``."""
    f, g = IntPolynomial.of(f), IntPolynomial.of(g)
    if f.degree < 0 or g.degree < 0:
        raise PolynomialError("resultant of the zero polynomial")
    if f.degree == 0 and g.degree == 0:
        return 1
    r = bareiss_det(sylvester(f, g))
    if checked and abs(r) > INT64_MAX:
        raise BoundExceeded(f"resultant {r} overflows 64 bits")
    return r


def discriminant(f, checked: bool = False) -> int:
    f = IntPolynomial.of(f)
    d = f.degree
    if d < 1:
        raise PolynomialError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    r = resultant(f, f.derivative(), checked)
    q, rem = divmod((-1) ** (d * (d - 1) // 2) * r, f.lead)
    assert rem == 0
    return q


def exceptional_primes(fs: Sequence[IntPolynomial]) -> list[int]:
    """Primes dividing some discriminant, leading coefficient or pairwise resultant."""
    vals = []
    for i, f in enumerate(fs):
        vals += [discriminant(f), f.lead]
        vals += [resultant(f, g, checked=False) for g in fs[i + 1 :]]
    out = set()
    for v in vals:
        if v:
            out.update(prime_factors(abs(v)))
    return sorted(out)


# ---------------------------------------------------------------------------
# sieves and densities


@dataclass(frozen=True)
class PolySieve:
    fs: tuple[IntPolynomial, ...]
    l: int
    P_max: int
    classes: tuple[tuple[int, int, tuple[int, ...]], ...]  # (p, p^l, roots)
    exceptional: tuple[int, ...]

    @property
    def c_max(self) -> int:
        return sum(f.degree for f in self.fs)

    @property
    def spec(self) -> SieveSpec:
        return SieveSpec.from_classes(1, [(q, [(r,) for r in roots]) for _, q, roots in self.classes])

    def dsl(self) -> str:
        head = [
            "# l-free values of " + " and ".join(f"f = {f}" for f in self.fs),
            f"# l = {self.l}, P_max = {self.P_max}, c_max = {self.c_max}",
        ]
        if self.exceptional:
            head.append("# exceptional primes: " + ",".join(map(str, self.exceptional)))
        return "\n".join(head) + "\n" + self.spec.canonical()


def union_roots(fs: Sequence[IntPolynomial], p: int, l: int) -> list[int]:
    out: set[int] = set()
    for f in fs:
        out.update(poly_roots_mod(f, p, l))
    return sorted(out)


def build_poly_sieve(fs, l: int = 2, P_max: int = 100) -> PolySieve:
    """Classes ``(p^l, ∪ roots)`` for ``p <= P_max`` plus every exceptional prime."""
    fs = tuple(IntPolynomial.of(f) for f in (fs if _is_list_of_polys(fs) else [fs]))
    if l < 2 or P_max < 2:
        raise ValueError("need l >= 2 and P_max >= 2")
    if any(f.degree < 1 for f in fs):
        raise PolynomialError("polynomials must be nonconstant")
    exc = tuple(p for p in exceptional_primes(fs))
    primes = sorted(set(int(p) for p in primes_up_to(P_max)) | set(exc))
    classes = []
    for p in primes:
        q = p**l
        roots = union_roots(fs, p, l)
        if len(roots) == q:
            raise FullClass(f"every residue mod {p}^{l} is a root", p=p)
        if roots:
            classes.append((p, q, tuple(roots)))
    return PolySieve(fs, l, P_max, tuple(classes), tuple(p for p in exc if p > P_max))


def _is_list_of_polys(fs) -> bool:
    if isinstance(fs, (IntPolynomial, str)):
        return False
    first = next(iter(fs), None)
    return isinstance(first, (IntPolynomial, str, list, tuple))


@dataclass(frozen=True)
class PolyDensity:
    bracket: BracketedValue
    conditional: bool
    primes: int

    @property
    def label(self) -> str:
        return "conditional on weak light tails" if self.conditional else "unconditional"


def multi_poly_density(fs, l: int = 2, P_max: int = 1000) -> PolyDensity:
    """Truncated ``prod_p (1 - |∪_i roots(f_i, p^l)| / p^l)`` with the Erdős tail bound.

    Exceptional primes above ``P_max`` are included in the product; the
    remaining primes obey ``|∪ roots| <= sum deg f_i``, so the tail is at most
    ``sum deg * P_max^(1-l) / (l-1)``.
    """
    ps = build_poly_sieve(fs, l, P_max)
    upper = 1.0
    for _, q, roots in ps.classes:
        upper *= 1.0 - len(roots) / q
    tail = ps.c_max * P_max ** (1 - l) / (l - 1)
    lower = upper * max(0.0, 1.0 - tail)
    conditional = l == 2 and any(f.degree >= 4 for f in ps.fs)
    return PolyDensity(BracketedValue(lower, upper, len(ps.classes), True, upper), conditional, len(ps.classes))


def poly_values(f: IntPolynomial, N: int, start: int = 1) -> np.ndarray:
    """``f(start..N)`` as int64, refusing values outside the 64-bit range."""
    if N < start:
        return np.zeros(0, dtype=np.int64)
    bound = max(abs(f(start)), abs(f(N)))
    # a polynomial's maximum on an interval may be interior; bound via coefficients
    M = max(abs(start), abs(N))
    coarse = sum(abs(c) * M**i for i, c in enumerate(f.coeffs))
    if max(bound, coarse) > INT64_MAX:
        raise BoundExceeded(f"values of {f} on [{start}, {N}] exceed 64 bits")
    ms = np.arange(start, N + 1, dtype=np.int64)
    acc = np.zeros_like(ms)
    for c in reversed(f.coeffs):
        acc = acc * ms + c
    return acc


def lfree_mask(f, l: int, N: int) -> np.ndarray:
    """``mask[m-1]`` = ``f(m)`` is l-free, for ``1 <= m <= N``.

    If ``p^l | f(m) != 0`` then ``p <= |f(m)|^(1/l)``, so sieving by the roots
    of ``f`` modulo ``p^l`` for all primes up to that bound is exact.
    """
    f = IntPolynomial.of(f)
    vals = poly_values(f, N)
    mask = vals != 0
    if N <= 0:
        return mask
    top = int(np.abs(vals).max()) if len(vals) else 0
    pmax = math.isqrt(top) if l == 2 else int(round(top ** (1.0 / l))) + 1
    if pmax > 10**7:
        raise BoundExceeded(f"values up to {top} need primes beyond 10^7")
    for p in primes_up_to(max(pmax, 1)):
        p = int(p)
        if p**l > top:
            break
        q = p**l
        for r in poly_roots_mod(f, p, l, brute_bound=max(BRUTE_BOUND, p)):
            first = (r - 1) % q
            mask[first::q] = False
    return mask


def count_lfree_values(f, l: int, N: int) -> int:
    """``#{1 <= m <= N : f(m) is l-free}``."""
    if N <= 0:
        return 0
    return int(np.count_nonzero(lfree_mask(f, l, N)))


def count_joint_lfree(fs: Sequence, l: int, N: int) -> int:
    """``#{1 <= m <= N : every f_i(m) is l-free}``."""
    if N <= 0:
        return 0
    mask = np.ones(N, dtype=bool)
    for f in fs:
        mask &= lfree_mask(f, l, N)
    return int(np.count_nonzero(mask))


def is_lfree(n: int, l: int = 2) -> bool:
    """Trial division test, early exit at the first ``p^l`` divisor."""
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
            if e >= l:
                return False
        p += 1 if p == 2 else 2
    return True
