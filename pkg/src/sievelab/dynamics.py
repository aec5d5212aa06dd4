"""Mirsky measure of cylinders, Monte-Carlo sampling of the group rotation,
X_R certificates, spectra via Smith normal form and shifted-sieve experiments.

Sign convention: shifted sieves use ``R(g)_i = g_i + R_i``. Haar measure is
invariant under ``g -> -g``, so no measure statement depends on the choice.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .analysis import (
    BracketedValue,
    Window,
    _threads,
    is_admissible,
    mark_classes,
)
from .errors import CertificateError, NotAdmissibleError, SieveError
from .model import Sieve, SieveClass, erdos_partial
from .residue import ENUM_BOUND, Modulus, Point, ResidueClassSet, as_point
from .structure import stabilizer

EXACT_LIMIT = 64
BLOCK = 4096


@dataclass(frozen=True)
class Pattern:
    A: tuple[Point, ...]
    B: tuple[Point, ...] = ()

    def __post_init__(self):
        if set(self.A) & set(self.B):
            raise ValueError("pattern sets A and B must be disjoint")

    @classmethod
    def of(cls, A: Iterable, B: Iterable = (), k: int = 1) -> "Pattern":
        return cls(
            tuple(sorted({as_point(a, k) for a in A})), tuple(sorted({as_point(b, k) for b in B}))
        )

    def shifted(self, t: Point) -> "Pattern":
        add = lambda p: tuple(x + s for x, s in zip(p, t))
        return Pattern(tuple(map(add, self.A)), tuple(map(add, self.B)))


def _neg(points) -> list[Point]:
    return [tuple(-x for x in p) for p in points]


def shadow_size(cls: SieveClass, D: Sequence[Point]) -> int:
    """``|-D + R_i|``."""
    if not D or cls.residues.is_empty():
        return 0
    return cls.residues.union_translates(_neg(D)).size


# ---------------------------------------------------------------------------
# cylinder measures


@dataclass(frozen=True)
class CylinderValue:
    """Truncated Mirsky measure of ``C_{A,B}`` with a certified bracket.

    ``value`` is exact (Fraction) for short prefixes, float otherwise.
    ``exact_zero`` marks symbolic cancellation of the inclusion-exclusion
    terms at this truncation; ``forced_zero`` means every term contains a
    full-ring factor, which persists at every larger truncation.
    """

    value: Fraction | float
    bracket: BracketedValue
    exact_zero: bool = False
    forced_zero: bool = False
    terms: int = 1

    @property
    def L(self) -> int:
        return self.bracket.L


def cylinder_measure(pattern: Pattern, sieve: Sieve, exact: Optional[bool] = None) -> CylinderValue:
    """``sum_{A<=D<=A∪B} (-1)^{|D\\A|} prod_{i<=L} (1 - |-D+R_i|/N(b_i))``."""
    A, B = list(pattern.A), list(pattern.B)
    L = sieve.L
    if not A and not B:
        one = BracketedValue(1.0, 1.0, L, True, 1.0, Fraction(1))
        return CylinderValue(Fraction(1), one)
    if exact is None:
        exact = L <= EXACT_LIMIT
    _, tail = erdos_partial(sieve.spec, L)
    norms = [c.modulus.norm for c in sieve.classes]
    groups: dict[tuple[int, ...], int] = defaultdict(int)
    sizes_of: list[tuple[int, tuple[int, ...], int]] = []
    for r in range(len(B) + 1):
        for extra in itertools.combinations(B, r):
            D = A + list(extra)
            sizes = tuple(shadow_size(c, D) for c in sieve.classes)
            sign = -1 if r % 2 else 1
            groups[sizes] += sign
            sizes_of.append((sign, sizes, len(D)))
    exact_zero = all(v == 0 for v in groups.values())
    forced = all(any(s == n for s, n in zip(sizes, norms)) for _, sizes, _ in sizes_of)

    def prod(sizes):
        if exact:
            acc = Fraction(1)
            for s, n in zip(sizes, norms):
                acc *= Fraction(n - s, n)
            return acc
        acc = 1.0
        for s, n in zip(sizes, norms):
            acc *= 1.0 - s / n
        return acc

    cache = {sizes: prod(sizes) for sizes in groups}
    if exact_zero:
        value: Fraction | float = Fraction(0) if exact else 0.0
    else:
        value = sum(coef * cache[sizes] for sizes, coef in groups.items() if coef)
    lo = hi = 0.0
    for sign, sizes, nD in sizes_of:
        p = float(cache[sizes])
        t_lo = max(0.0, 1.0 - nD * float(tail)) if tail is not None else 0.0
        if sign > 0:
            lo += p * t_lo
            hi += p
        else:
            lo -= p
            hi -= p * t_lo
    if forced:
        lo = hi = 0.0
    lo, hi = max(0.0, lo), min(1.0, hi)
    if exact_zero:
        hi = max(hi, 0.0)
    fval = float(value)
    lo, hi = min(lo, fval), max(hi, fval)
    br = BracketedValue(
        lo, hi, L, tail is not None or forced, fval, value if isinstance(value, Fraction) else None
    )
    return CylinderValue(value, br, exact_zero, forced, len(sizes_of))


# ---------------------------------------------------------------------------
# Monte-Carlo sampling


def block_rng(seed: int, block: int) -> np.random.Generator:
    """PCG64 stream for sample block ``block``; independent of worker count."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))


def draw_group(classes: Sequence[SieveClass], rng: np.random.Generator, n: int) -> list[np.ndarray]:
    """``n`` uniform elements of ``prod Z^k / b_i``: one ``(n, k)`` array per class."""
    out = []
    for c in classes:
        cols = [rng.integers(0, b, size=n, dtype=np.int64) for b in c.modulus.components]
        out.append(np.stack(cols, axis=1))
    return out


def _excluded(classes, g: list[np.ndarray], points: np.ndarray) -> np.ndarray:
    """``ex[s, p]`` = point p lies in ``-g_i + R_i`` for some i, i.e. p ∉ phi(g_s)."""
    n = g[0].shape[0] if g else 0
    ex = np.zeros((n, len(points)), dtype=bool)
    for c, gi in zip(classes, g):
        res = c.residues
        if res.is_empty():
            continue
        m = c.modulus
        coords = points[None, :, :] + gi[:, None, :]
        if m.norm <= ENUM_BOUND:
            mask = res.mask()
            ex |= mask[m.encode_many(coords.reshape(-1, m.k)).reshape(n, len(points))]
        else:
            ex |= res.contains_many(coords.reshape(-1, m.k)).reshape(n, len(points))
    return ex


@dataclass
class MirskyTable:
    n: int
    seed: int
    L: int
    patterns: list[Pattern]
    hits: list[int]
    free_fraction: float

    def frequency(self, j: int) -> float:
        return self.hits[j] / self.n

    def stderr(self, j: int) -> float:
        f = self.frequency(j)
        return math.sqrt(max(f * (1 - f), 0.0) / self.n)

    def rows(self):
        for j, p in enumerate(self.patterns):
            yield p, self.hits[j], self.frequency(j), self.stderr(j)


def mirsky_sample(
    sieve: Sieve,
    patterns: Sequence[Pattern],
    n: int,
    seed: int = 0,
    window: Optional[Window] = None,
) -> MirskyTable:
    """Empirical frequencies of cylinders under ``g -> phi_R(g)``, ``g`` Haar-uniform.

    ``a ∈ phi_R(g)`` iff ``a + g_i ∉ R_i`` for every ``i <= L``. Samples are
    drawn in blocks of :data:`BLOCK`, block ``j`` from ``block_rng(seed, j)``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    pts: dict[Point, int] = {}
    for p in patterns:
        for x in p.A + p.B:
            pts.setdefault(x, len(pts))
    if window is not None:
        for row in window.points():
            pts.setdefault(tuple(int(v) for v in row), len(pts))
    k = sieve.k
    points = np.array(list(pts), dtype=np.int64).reshape(-1, k)
    win_idx = None
    if window is not None:
        win_idx = np.array([pts[tuple(int(v) for v in r)] for r in window.points()])
    classes = [c for c in sieve.classes if not c.residues.is_empty()]
    blocks = [(b, min(BLOCK, n - b * BLOCK)) for b in range((n + BLOCK - 1) // BLOCK)]

    def run(block):
        b, size = block
        g = draw_group(classes, block_rng(seed, b), size)
        if classes:
            ex = _excluded(classes, g, points)
        else:
            ex = np.zeros((size, len(points)), dtype=bool)
        free = ~ex
        hits = []
        for p in patterns:
            ok = np.ones(size, dtype=bool)
            for a in p.A:
                ok &= free[:, pts[a]]
            for x in p.B:
                ok &= ex[:, pts[x]]
            hits.append(int(ok.sum()))
        wf = int(free[:, win_idx].sum()) if win_idx is not None else 0
        return hits, wf

    threads = _threads()
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(run, blocks))
    else:
        results = [run(b) for b in blocks]
    hits = [sum(r[0][j] for r in results) for j in range(len(patterns))]
    wfree = sum(r[1] for r in results)
    frac = wfree / (n * len(win_idx)) if win_idx is not None and len(win_idx) else 0.0
    return MirskyTable(n, seed, sieve.L, list(patterns), hits, frac)


# ---------------------------------------------------------------------------
# X_R certificates


@dataclass(frozen=True)
class XrCertificate:
    A: tuple[Point, ...]
    B: tuple[Point, ...]
    assignment: tuple[int, ...]
    witnesses: dict = field(hash=False)  # index -> witness residue
    classes: dict = field(hash=False)  # index -> (Modulus, ResidueClassSet)
    L: int = 0

    def to_json(self) -> str:
        obj = {
            "kind": "XrCertificate",
            "L": self.L,
            "A": [list(a) for a in self.A],
            "B": [list(b) for b in self.B],
            "assignment": list(self.assignment),
            "witnesses": {str(i): list(x) for i, x in sorted(self.witnesses.items())},
            "classes": {
                str(i): {"modulus": list(m.components), "residues": [list(r) for r in s.residues]}
                for i, (m, s) in sorted(self.classes.items())
            },
        }
        return json.dumps(obj, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "XrCertificate":
        try:
            obj = json.loads(text)
            if obj.get("kind") != "XrCertificate":
                raise CertificateError("not an XrCertificate")
            classes = {}
            for i, c in obj["classes"].items():
                m = Modulus(tuple(c["modulus"]))
                classes[int(i)] = (m, ResidueClassSet.explicit(m, [tuple(r) for r in c["residues"]]))
            return cls(
                tuple(tuple(a) for a in obj["A"]),
                tuple(tuple(b) for b in obj["B"]),
                tuple(obj["assignment"]),
                {int(i): tuple(x) for i, x in obj["witnesses"].items()},
                classes,
                int(obj.get("L", 0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise CertificateError(f"malformed certificate: {e}") from e


@dataclass(frozen=True)
class NoCertificate:
    L: int

    def __str__(self) -> str:
        return f"NoCertificateUpTo({self.L})"


def _in_shadow(res: ResidueClassSet, x: Point, shifts: Sequence[Point]) -> bool:
    """``x ∈ -S + R``, i.e. ``x + s ∈ R`` for some ``s`` in ``shifts``."""
    return any(res.contains(tuple(a + b for a, b in zip(x, s))) for s in shifts)


def xr_window_test(A: Iterable, Bpts: Iterable, sieve: Sieve, max_nodes: int = 1_000_000):
    """Search index assignments ``b_j -> i_j`` satisfying the X_R membership clauses.

    For each index ``i`` used by points ``Q``: ``∩_{j∈Q}(-b_j+R_i) \\ (-A'+R_i)``
    must be nonempty (for ``|Q| = 1`` this is the non-containment clause).
    Assignments are explored in lexicographic order of ``(i_1, ..., i_l)``.
    """
    k = sieve.k
    A = tuple(sorted({as_point(a, k) for a in A}))
    Bp = tuple(as_point(b, k) for b in Bpts)
    if set(A) & set(Bp):
        raise ValueError("excluded points must lie outside A'")
    verdict = is_admissible(A, sieve)
    if verdict.kind == "NotAdmissible":
        raise NotAdmissibleError(f"A' is not admissible (witness index {verdict.index})", index=verdict.index)
    if not Bp:
        return XrCertificate(A, Bp, (), {}, {}, sieve.L)
    feasible: list[list[int]] = []
    spare: dict[tuple[int, int], frozenset] = {}
    for j, b in enumerate(Bp):
        opts = []
        for c in sieve.classes:
            if c.residues.is_empty():
                continue
            s = _spared(c, b, A)
            if s:
                spare[(j, c.index)] = s
                opts.append(c.index)
        if not opts:
            return NoCertificate(sieve.L)
        feasible.append(opts)
    nodes = 0
    current: dict[int, frozenset] = {}
    chosen: list[int] = []

    def rec(j):
        nonlocal nodes
        if j == len(Bp):
            return True
        for i in feasible[j]:
            nodes += 1
            if nodes > max_nodes:
                raise SieveError(f"X_R search exceeded {max_nodes} nodes")
            prev = current.get(i)
            here = spare[(j, i)]
            inter = here if prev is None else (prev & here)
            if not inter:
                continue
            current[i] = inter
            chosen.append(i)
            if rec(j + 1):
                return True
            chosen.pop()
            if prev is None:
                del current[i]
            else:
                current[i] = prev
        return False

    if not rec(0):
        return NoCertificate(sieve.L)
    witnesses = {i: sieve[i].modulus.decode(min(s)) for i, s in current.items()}
    classes = {i: (sieve[i].modulus, sieve[i].residues) for i in current}
    return XrCertificate(A, Bp, tuple(chosen), witnesses, classes, sieve.L)


def _spared(c: SieveClass, b: Point, A: Sequence[Point]) -> frozenset:
    """Flat codes of ``(-b + R_i) \\ (-A' + R_i)``."""
    m = c.modulus
    x = m.decode_many(c.residues.flat) - np.array(b, dtype=np.int64)
    ok = np.ones(len(x), dtype=bool)
    for a in A:
        ok &= ~c.residues.contains_many(x + np.array(a, dtype=np.int64))
    return frozenset(m.encode_many(x[ok]).tolist())


def verify_certificate(cert: XrCertificate, sieve: Optional[Sieve] = None) -> bool:
    """Independent re-check with plain residue membership.

    When ``sieve`` is given, the embedded classes must also coincide with the
    sieve's materialized classes at the same indices.
    """
    if len(cert.assignment) != len(cert.B):
        return False
    if sieve is not None:
        for i, (m, s) in cert.classes.items():
            if i > sieve.L or sieve[i].modulus != m or sieve[i].residues != s:
                return False
    used = defaultdict(list)
    for b, i in zip(cert.B, cert.assignment):
        used[i].append(b)
    for i, bs in used.items():
        if i not in cert.classes or i not in cert.witnesses:
            return False
        m, res = cert.classes[i]
        x = m.reduce(cert.witnesses[i])
        if _in_shadow(res, x, cert.A):
            return False
        for b in bs:
            if not res.contains(tuple(u + v for u, v in zip(x, b))):
                return False
    return True


# ---------------------------------------------------------------------------
# spectrum


def hermite_rows(rows: Sequence[Sequence[int]], k: int) -> list[list[int]]:
    """Row-style Hermite normal form basis of the lattice spanned by ``rows``."""
    M = [list(map(int, r)) for r in rows if any(r)]
    out = []
    col = 0
    while M and col < k:
        M = [r for r in M if any(r)]
        piv = [r for r in M if r[col] != 0]
        if not piv:
            col += 1
            continue
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            p = piv[0]
            for r in piv[1:]:
                q = r[col] // p[col]
                for t in range(k):
                    r[t] -= q * p[t]
            piv = [r for r in piv if r[col] != 0]
        p = piv[0]
        if p[col] < 0:
            p[:] = [-v for v in p]
        out.append(p)
        M = [r for r in M if r is not p]
        col += 1
    for i, r in enumerate(out):
        c = next(t for t in range(k) if r[t])
        for prev in out[:i]:
            q = prev[c] // r[c]
            for t in range(k):
                prev[t] -= q * r[t]
    return out


def smith_invariants(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of an integer matrix."""
    A = [list(map(int, r)) for r in matrix]
    if not A:
        return []
    m, n = len(A), len(A[0])
    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        A[t], A[pi] = A[pi], A[t]
        for r in A:
            r[t], r[pj] = r[pj], r[t]
        done = False
        while not done:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for r in A:
                        r[j] -= q * r[t]
                if A[t][j]:
                    done = False
            if not done:
                entries = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                entries += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, pi, pj = min(entries)
                A[t], A[pi] = A[pi], A[t]
                for r in A:
                    r[t], r[pj] = r[pj], r[t]
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]), None
            )
            if bad is not None:
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                done = False
        diag.append(abs(A[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class SpectrumRow:
    index: int
    modulus: Modulus
    stabilizer_order: int
    invariants: tuple[int, ...]

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    @property
    def quotient_order(self) -> int:
        return math.prod(self.invariants)


@dataclass
class SpectrumReport:
    rows: list[SpectrumRow]

    @property
    def exponents(self) -> list[int]:
        return [r.exponent for r in self.rows]

    def describe(self) -> str:
        return (
            "eigenvalue characters are those trivial on some finite intersection of "
            "stabilizers; over Z: roots of unity whose order divides lcm of finitely many exponents"
        )


def quotient_invariants(modulus: Modulus, elements: Sequence[Point]) -> tuple[int, ...]:
    """Invariant factors (> 1) of ``Z^k / (F + bZ^k)``."""
    k = modulus.k
    basis = [[b if t == j else 0 for t in range(k)] for j, b in enumerate(modulus.components)]
    rows = basis + [list(e) for e in elements if any(e)]
    # keep the basis small: reduce incrementally
    H = hermite_rows(basis, k)
    for e in rows[k:]:
        H = hermite_rows(H + [e], k)
    return tuple(d for d in smith_invariants(H) if d != 1)


def spectrum(sieve: Sieve, bound: int = ENUM_BOUND) -> SpectrumReport:
    rows = []
    for c in sieve.classes:
        st = stabilizer(c.residues, bound)
        rows.append(SpectrumRow(c.index, c.modulus, st.order, quotient_invariants(c.modulus, st.elements)))
    return SpectrumReport(rows)


# ---------------------------------------------------------------------------
# shifted sieves and sumsets


def shifted_classes(classes: Sequence[SieveClass], g: Sequence[Point], A: Sequence[Point] = ()) -> list[SieveClass]:
    """Classes of ``-A + R(g)`` (or of ``R(g)`` when ``A`` is empty)."""
    out = []
    for c, gi in zip(classes, g):
        res = c.residues.translate(gi)
        if A:
            res = res.union_translates(_neg(A))
        out.append(SieveClass(c.index, c.modulus, res))
    return out


@dataclass
class ShiftedStats:
    strategy: str
    L: int
    L_check: int
    samples: int
    weak_ratios: list[float] = field(default_factory=list)
    below: int = 0
    threshold: float = 0.05
    B_count: int = 0
    B_density: float = 0.0
    B_sample: list = field(default_factory=list)
    verified: bool = True
    shifts: list = field(default_factory=list)

    @property
    def below_fraction(self) -> float:
        return self.below / self.samples if self.samples else 0.0

    @property
    def below_stderr(self) -> float:
        f = self.below_fraction
        return math.sqrt(f * (1 - f) / self.samples) if self.samples else 0.0


def _check_sumset(classes, g, A, B_pts: np.ndarray, window: Window) -> bool:
    """Assert ``A + B ⊂ F_{R(g)}`` by enumerating ``F_{R(g)}`` directly."""
    if len(B_pts) == 0:
        return True
    big = window.expand(A) if A else window
    shifted = shifted_classes(classes, g)
    free = mark_classes(shifted, big) == 0
    lo = np.array(big.lows)
    for a in A:
        idx = B_pts + np.array(a) - lo
        if not free[tuple(idx.T)].all():
            return False
    return True


def _greedy_shift(c: SieveClass, A: Sequence[Point], survivors: np.ndarray) -> Point:
    """Residue g minimising ``|survivors ∩ (-A + g + R)|``; ties go to the smallest code."""
    m = c.modulus
    res = c.residues
    if res.is_empty() or len(survivors) == 0:
        return (0,) * m.k
    R = m.decode_many(res.flat)
    # x is hit by g iff g ≡ x + a - r for some a ∈ A, r ∈ R
    diffs = np.array([np.array(a) - r for a in A for r in R], dtype=np.int64)
    codes = m.encode_many((survivors[:, None, :] + diffs[None, :, :]).reshape(-1, m.k))
    codes = np.sort(codes.reshape(len(survivors), -1), axis=1)
    keep = np.ones(codes.shape, dtype=bool)
    keep[:, 1:] = codes[:, 1:] != codes[:, :-1]
    bad = codes[keep]
    if m.norm <= ENUM_BOUND:
        counts = np.bincount(bad, minlength=m.norm)
        return m.decode(int(np.argmin(counts)))
    used = np.unique(bad)
    gaps = np.flatnonzero(used != np.arange(len(used)))
    first = int(gaps[0]) if len(gaps) else len(used)
    return m.decode(first)


def sample_shifted_sieves(
    sieve: Sieve,
    A: Iterable,
    window: Window,
    n: int = 1,
    seed: int = 0,
    strategy: str = "uniform",
    L_check: Optional[int] = None,
    threshold: float = 0.05,
) -> ShiftedStats:
    """Shifted-sieve statistics for ``-A + R(g)``.

    ``uniform``: ``g`` Haar-random, weak-tail ratio of ``-A + R(g)`` at level
    ``L_check`` (default L/2) against ``L``. ``greedy``: ``g_i`` chosen in
    index order to spare the most window points; reports the surviving set
    ``B``. Both verify ``A + B ⊂ F_{R(g)}`` on the window.
    """
    k = sieve.k
    A = sorted({as_point(a, k) for a in A})
    classes = list(sieve.classes)
    L = sieve.L
    L_check = L // 2 if L_check is None else L_check
    stats = ShiftedStats(strategy, L, L_check, n, threshold=threshold)
    if strategy == "uniform":
        for s in range(n):
            g = [tuple(int(v) for v in gi[0]) for gi in draw_group(classes, block_rng(seed, s), 1)]
            sh = shifted_classes(classes, g, A)
            first = mark_classes(sh, window)
            ratio = int(np.count_nonzero(first > L_check)) / window.size
            stats.weak_ratios.append(ratio)
            stats.below += ratio < threshold
            B = np.argwhere(first == 0) + np.array(window.lows)
            stats.verified &= _check_sumset(classes, g, A, B, window)
            stats.B_count += len(B)
        stats.B_density = stats.B_count / (n * window.size) if n else 0.0
        return stats
    if strategy != "greedy":
        raise ValueError(f"unknown strategy {strategy!r}")
    stats.samples = 1
    survivors = window.points()
    g = []
    for c in classes:
        gi = _greedy_shift(c, A, survivors)
        g.append(gi)
        if not c.residues.is_empty() and len(survivors):
            sh = c.residues.translate(gi).union_translates(_neg(A))
            survivors = survivors[~sh.contains_many(survivors)]
    stats.B_count = len(survivors)
    stats.B_density = len(survivors) / window.size
    stats.B_sample = [tuple(int(v) for v in p) for p in survivors[:20]]
    stats.verified = _check_sumset(classes, g, A, survivors, window)
    stats.shifts = g
    return stats
