"""Enumeration of R-free points, densities, light-tail profiles and admissibility.

Everything here is relative to a materialized prefix of ``L`` classes; reported
quantities always carry that truncation.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import WindowTooLarge
from .model import Sieve, SieveClass, erdos_partial, materialize, weight_bound_at
from .residue import Point, as_point

MAX_WINDOW = 250_000_000
SEGMENT = 1 << 20


@dataclass(frozen=True)
class Window:
    """Box ``prod [lows_j .. highs_j]`` (inclusive) in Z^k."""

    lows: tuple[int, ...]
    highs: tuple[int, ...]

    def __post_init__(self):
        if len(self.lows) != len(self.highs) or not self.lows:
            raise ValueError("window bounds must have equal, positive arity")
        if any(h < l for l, h in zip(self.lows, self.highs)):
            raise ValueError(f"empty window {self}")

    @classmethod
    def interval(cls, a: int, b: int) -> "Window":
        return cls((a,), (b,))

    @classmethod
    def box(cls, lows: Sequence[int], highs: Sequence[int]) -> "Window":
        return cls(tuple(lows), tuple(highs))

    @classmethod
    def folner(cls, kind: str, N: int, k: int = 1, center: Sequence[int] | None = None) -> "Window":
        """``interval1`` = [1..N], ``interval0`` = [0..N], ``box`` = center + [-N..N]^k."""
        if kind == "interval1":
            return cls((1,) * k, (N,) * k)
        if kind == "interval0":
            return cls((0,) * k, (N,) * k)
        if kind == "box":
            c = tuple(center) if center is not None else (0,) * k
            return cls(tuple(x - N for x in c), tuple(x + N for x in c))
        raise ValueError(f"unknown window family {kind!r}")

    @classmethod
    def parse(cls, text: str) -> "Window":
        """``a..b`` or ``a..b,c..d`` (one range per coordinate)."""
        lows, highs = [], []
        for part in text.split(","):
            lo, hi = part.split("..")
            lows.append(int(lo))
            highs.append(int(hi))
        return cls(tuple(lows), tuple(highs))

    @property
    def k(self) -> int:
        return len(self.lows)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(h - l + 1 for l, h in zip(self.lows, self.highs))

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    def points(self) -> np.ndarray:
        """All window points as an ``(n, k)`` array in C order."""
        axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(self.lows, self.highs)]
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    def expand(self, offsets: Iterable[Point]) -> "Window":
        offs = list(offsets)
        lo = tuple(l + min(o[j] for o in offs) for j, l in enumerate(self.lows))
        hi = tuple(h + max(o[j] for o in offs) for j, h in enumerate(self.highs))
        return Window(lo, hi)

    def __str__(self) -> str:
        return ",".join(f"{l}..{h}" for l, h in zip(self.lows, self.highs))


@dataclass(frozen=True)
class BracketedValue:
    """Certified interval ``[lower, upper]`` at truncation ``L``.

    ``point`` is the truncated value itself; ``certified`` is false when no
    tail bound is available, in which case ``lower`` is only a placeholder 0.
    """

    lower: float
    upper: float
    L: int
    certified: bool = True
    point: float | None = None
    exact_value: Fraction | None = None

    @property
    def exact(self) -> bool:
        return self.certified and self.lower == self.upper

    @property
    def midpoint(self) -> float:
        return (self.lower + self.upper) / 2

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= x <= self.upper + tol


@dataclass
class FreeSetReport:
    """Free points of a window at truncation ``L``.

    ``excluded_by`` holds, per window point, the smallest index of a class
    containing it (0 = free), shaped like the window.
    """

    window: Window
    L: int
    excluded_by: np.ndarray

    @property
    def free(self) -> np.ndarray:
        return self.excluded_by == 0

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.excluded_by == 0))

    @property
    def ratio(self) -> float:
        return self.count / self.window.size

    def free_points(self) -> np.ndarray:
        idx = np.argwhere(self.excluded_by == 0)
        return idx + np.array(self.window.lows, dtype=np.int64)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SIEVELAB_THREADS", "1")))
    except ValueError:
        return 1


def _mark_segment(arr: np.ndarray, seg_low: tuple[int, ...], classes: Sequence[SieveClass], smallest: bool):
    """Write class indices into ``arr`` (a view whose origin is ``seg_low``)."""
    shape = arr.shape
    ordered = reversed(classes) if smallest else classes
    for cls in ordered:
        if cls.residues.is_empty():
            continue
        for off, step in cls.residues.progressions():
            sl = []
            for o, s, lo, ext in zip(off, step, seg_low, shape):
                start = (o - lo) % s
                if start >= ext:
                    break
                sl.append(slice(start, None, s))
            else:
                arr[tuple(sl)] = cls.index


def _mark(sieve: Sieve, window: Window, smallest: bool = True) -> np.ndarray:
    if window.k != sieve.k:
        raise ValueError(f"window arity {window.k} does not match ring dimension {sieve.k}")
    return mark_classes(sieve.classes, window, smallest)


def mark_classes(classes: Sequence[SieveClass], window: Window, smallest: bool = True) -> np.ndarray:
    """Per-point smallest (or largest) index of a class containing the point, 0 if none."""
    if window.size > MAX_WINDOW:
        raise WindowTooLarge(f"window of {window.size} points exceeds budget {MAX_WINDOW}")
    dtype = np.int32 if len(classes) < 2**31 - 1 else np.int64
    arr = np.zeros(window.shape, dtype=dtype)
    row = math.prod(window.shape[1:])
    seg_rows = max(1, SEGMENT // max(row, 1))
    starts = list(range(0, window.shape[0], seg_rows))

    def run(s0):
        view = arr[s0 : s0 + seg_rows]
        _mark_segment(view, (window.lows[0] + s0,) + window.lows[1:], classes, smallest)

    threads = _threads()
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(threads) as ex:
            list(ex.map(run, starts))
    else:
        for s0 in starts:
            run(s0)
    return arr


def enumerate_free(sieve: Sieve, window: Window) -> FreeSetReport:
    """Mark every window point lying in some class ``R_i``, ``i <= L``."""
    return FreeSetReport(window, sieve.L, _mark(sieve, window, smallest=True))


def empirical_density(sieve: Sieve, family: str, Ns: Sequence[int]) -> list[tuple[int, float]]:
    """``|F^(L) ∩ I_N| / |I_N|`` along a Følner family (see :meth:`Window.folner`)."""
    Ns = sorted(set(Ns))
    big = Window.folner(family, Ns[-1], sieve.k)
    free = enumerate_free(sieve, big).free
    out = []
    for N in Ns:
        w = Window.folner(family, N, sieve.k)
        sl = tuple(slice(l - bl, h - bl + 1) for l, h, bl in zip(w.lows, w.highs, big.lows))
        out.append((N, int(np.count_nonzero(free[sl])) / w.size))
    return out


def _float_product(values: Iterable[tuple[int, int]]) -> float:
    acc = 1.0
    for num, den in values:
        acc *= 1.0 - num / den
    return acc


def product_density(sieve: Sieve, exact: bool = False) -> BracketedValue:
    """``prod_{i<=L}(1 - |R_i|/N(b_i))`` with a lower bracket from the Erdős tail."""
    terms = [(c.residues.size, c.modulus.norm) for c in sieve.classes]
    exact_val = None
    if exact:
        exact_val = Fraction(1)
        for num, den in terms:
            exact_val *= Fraction(den - num, den)
        upper = float(exact_val)
    else:
        upper = _float_product(terms)
    _, tail = erdos_partial(sieve.spec, sieve.L)
    if tail is None:
        return BracketedValue(0.0, upper, sieve.L, False, upper, exact_val)
    lower = upper * max(0.0, 1.0 - float(tail)) if tail else upper
    return BracketedValue(lower, upper, sieve.L, True, upper, exact_val)


@dataclass(frozen=True)
class TailRow:
    L: int
    weak: int
    strong: int
    size: int

    @property
    def weak_ratio(self) -> float:
        return self.weak / self.size

    @property
    def strong_ratio(self) -> float:
        return self.strong / self.size


def tails_profile(sieve: Sieve, window: Window, Ls: Sequence[int]) -> list[TailRow]:
    """Weak/strong tail counts of classes ``L < i <= L_max`` on a window.

    These are lower bounds for the untruncated tails: classes beyond
    ``L_max = sieve.L`` are not seen.
    """
    first = _mark(sieve, window, smallest=True)
    last = _mark(sieve, window, smallest=False)
    rows = []
    for L in Ls:
        if not 0 <= L <= sieve.L:
            raise ValueError(f"L={L} outside 0..{sieve.L}")
        rows.append(
            TailRow(L, int(np.count_nonzero(first > L)), int(np.count_nonzero(last > L)), window.size)
        )
    return rows


@dataclass(frozen=True)
class AdmissibilityVerdict:
    kind: str  # "Admissible" | "NotAdmissible" | "AdmissibleUpTo"
    index: Optional[int] = None
    L: Optional[int] = None

    def __bool__(self) -> bool:
        return self.kind != "NotAdmissible"

    def __str__(self) -> str:
        if self.kind == "NotAdmissible":
            return f"NotAdmissible({self.index})"
        if self.kind == "AdmissibleUpTo":
            return f"AdmissibleUpTo({self.L})"
        return "Admissible"


def class_blocks(cls: SieveClass, A: Sequence[Point]) -> bool:
    """True when ``-A + R_i`` is the whole residue ring."""
    res = cls.residues
    if res.is_empty() or len(A) * res.size < cls.modulus.norm:
        return False
    return res.union_translates([tuple(-x for x in a) for a in A]).is_full()


def is_admissible(A: Iterable, sieve: Sieve, max_classes: int = 1 << 20) -> AdmissibilityVerdict:
    """Decide whether ``-A + R_i`` misses some residue for every class of the sieve.

    Beyond the materialized prefix, indices whose residue density bound times
    ``|A|`` is below 1 are admissible automatically; the verdict is exact when
    every family has such a bound, and ``AdmissibleUpTo(L)`` otherwise.
    """
    A = [as_point(a, sieve.k) for a in A]
    if not A:
        return AdmissibilityVerdict("Admissible")
    spec = sieve.spec
    checked = 0
    current = sieve
    while True:
        for cls in current.classes[checked:]:
            if class_blocks(cls, A):
                return AdmissibilityVerdict("NotAdmissible", cls.index)
        checked = current.L
        if current.complete:
            return AdmissibilityVerdict("Admissible")
        next_param = {}
        for c in current.classes:
            if c.rule is not None:
                next_param[c.rule] = c.param + 1
        settled = True
        for r, fam in enumerate(spec.families):
            nxt = next_param.get(r, fam.start)
            if fam.stop is not None and nxt > fam.stop:
                continue
            if any(j >= nxt for j, _ in fam.overrides):
                settled = False
                continue
            w = weight_bound_at(spec, r, nxt)
            if w is None:
                return AdmissibilityVerdict("AdmissibleUpTo", L=sieve.L)
            if w * len(A) >= 1:
                settled = False
        if settled:
            return AdmissibilityVerdict("Admissible")
        if current.L >= max_classes:
            return AdmissibilityVerdict("AdmissibleUpTo", L=current.L)
        current = materialize(spec, max(2 * current.L, current.L + 16), strict=False)


def pattern_count(A: Iterable, B: Iterable, sieve: Sieve, window: Window) -> tuple[int, float]:
    """Count ``x`` in the window with ``x + A`` free and ``x + B`` disjoint from the free set."""
    A = [as_point(a, sieve.k) for a in A]
    B = [as_point(b, sieve.k) for b in B]
    if set(A) & set(B):
        raise ValueError("A and B must be disjoint")
    offsets = A + B
    if not offsets:
        return window.size, 1.0
    big = window.expand(offsets)
    free = enumerate_free(sieve, big).free
    lo = tuple(l - bl for l, bl in zip(window.lows, big.lows))
    ok = np.ones(window.shape, dtype=bool)
    for pts, want in ((A, True), (B, False)):
        for a in pts:
            sl = tuple(slice(o + d, o + d + e) for o, d, e in zip(lo, a, window.shape))
            ok &= free[sl] if want else ~free[sl]
    count = int(np.count_nonzero(ok))
    return count, count / window.size
