"""Exact residue arithmetic over Z^k.

A modulus ``(b_1, ..., b_k)`` stands for the ideal ``b_1 Z x ... x b_k Z``.
Residues mod ``b`` are encoded as flat mixed-radix integers (first component
most significant), so the numeric order of flat codes is the lexicographic
order of residue tuples. Residue sets are stored either as a sorted array of
flat codes or as a union of cosets ``a + dZ^k`` with ``d | b``; the coset form
is kept because enumeration, counting and marking are all cheaper on it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ArityMismatch, BoundExceeded, InvalidModulus, NonCoprimeModuli
from .primes import factorize

MAX_NORM = 1 << 62
#: residue sets larger than this are never materialized as flat arrays
ENUM_BOUND = 1 << 24
#: coset unions at most this size are flattened eagerly at construction
EAGER_BOUND = 1 << 12
DIVISOR_NORM_BOUND = 10**12

Point = tuple[int, ...]


@dataclass(frozen=True)
class RingDim:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise InvalidModulus(f"ring dimension must be >= 1, got {self.k}")


@dataclass(frozen=True)
class Modulus:
    components: tuple[int, ...]

    def __post_init__(self):
        comps = tuple(int(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise InvalidModulus("modulus needs at least one component")
        if any(c < 1 for c in comps):
            raise InvalidModulus(f"modulus components must be >= 1: {comps}")
        if max(comps) > MAX_NORM:
            raise BoundExceeded(f"modulus component {max(comps)} exceeds 2^62")

    def check_flat(self) -> None:
        """Flat codes are int64: the norm itself must stay below 2^62."""
        if self.norm > MAX_NORM:
            raise BoundExceeded(f"modulus norm {self.norm} exceeds 2^62")

    @classmethod
    def of(cls, value) -> "Modulus":
        if isinstance(value, Modulus):
            return value
        if isinstance(value, (int, np.integer)):
            return cls((int(value),))
        return cls(tuple(value))

    @property
    def k(self) -> int:
        return len(self.components)

    @cached_property
    def norm(self) -> int:
        return math.prod(self.components)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out, acc = [], 1
        for c in reversed(self.components):
            out.append(acc)
            acc *= c
        return tuple(reversed(out))

    def _check(self, other: "Modulus"):
        if other.k != self.k:
            raise ArityMismatch(f"arity {self.k} vs {other.k}")

    def divides(self, other: "Modulus") -> bool:
        self._check(other)
        return all(o % s == 0 for s, o in zip(self.components, other.components))

    def gcd(self, other: "Modulus") -> "Modulus":
        self._check(other)
        return Modulus(tuple(math.gcd(a, b) for a, b in zip(self.components, other.components)))

    def lcm(self, other: "Modulus") -> "Modulus":
        self._check(other)
        return Modulus(tuple(math.lcm(a, b) for a, b in zip(self.components, other.components)))

    def is_unit(self) -> bool:
        return self.norm == 1

    def reduce(self, point: Sequence[int]) -> Point:
        if len(point) != self.k:
            raise ArityMismatch(f"point {tuple(point)} has arity {len(point)}, expected {self.k}")
        return tuple(int(x) % b for x, b in zip(point, self.components))

    def encode(self, point: Sequence[int]) -> int:
        self.check_flat()
        return sum(r * s for r, s in zip(self.reduce(point), self.strides))

    def decode(self, flat: int) -> Point:
        return tuple((int(flat) // s) % b for s, b in zip(self.strides, self.components))

    def encode_many(self, coords: np.ndarray) -> np.ndarray:
        """Flat codes of an ``(n, k)`` coordinate array, reducing first."""
        self.check_flat()
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.k)
        flat = np.zeros(len(coords), dtype=np.int64)
        for j, (b, s) in enumerate(zip(self.components, self.strides)):
            flat += np.mod(coords[:, j], b) * s
        return flat

    def decode_many(self, flat: np.ndarray) -> np.ndarray:
        self.check_flat()
        flat = np.asarray(flat, dtype=np.int64)
        cols = [(flat // s) % b for s, b in zip(self.strides, self.components)]
        return np.stack(cols, axis=1) if cols else np.zeros((len(flat), 0), dtype=np.int64)

    def __str__(self) -> str:
        if self.k == 1:
            return str(self.components[0])
        return "(" + ",".join(map(str, self.components)) + ")"


def as_point(value, k: int | None = None) -> Point:
    if isinstance(value, (int, np.integer)):
        pt = (int(value),)
    else:
        pt = tuple(int(v) for v in value)
    if k is not None and len(pt) != k:
        raise ArityMismatch(f"point {pt} has arity {len(pt)}, expected {k}")
    return pt


def modulus_norm(m) -> int:
    return Modulus.of(m).norm


def moduli_coprime(a, b) -> bool:
    a, b = Modulus.of(a), Modulus.of(b)
    return a.gcd(b).is_unit()


def _egcd_inverse(a: int, m: int) -> int:
    return pow(a, -1, m)


def crt_combine(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int] | None:
    """Solve ``x = r1 (m1), x = r2 (m2)`` for arbitrary moduli; ``None`` if inconsistent."""
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    l = m1 // g * m2
    if m1 == 1:
        return r2 % m2, m2
    t = ((r2 - r1) // g) * _egcd_inverse(m1 // g, m2 // g) % (m2 // g) if m2 // g > 1 else 0
    return (r1 + m1 * t) % l, l


def crt_point(a: Point, ma: Modulus, b: Point, mb: Modulus) -> tuple[Point, Modulus] | None:
    """Componentwise generalized CRT for two congruences over Z^k."""
    out, mods = [], []
    for x, m, y, n in zip(a, ma.components, b, mb.components):
        res = crt_combine(x, m, y, n)
        if res is None:
            return None
        out.append(res[0])
        mods.append(res[1])
    return tuple(out), Modulus(tuple(mods))


def crt_solve(congruences: Sequence[tuple]) -> tuple[Point, Modulus]:
    """Unique solution of pairwise-coprime congruences, reduced mod the product."""
    if not congruences:
        raise ValueError("crt_solve needs at least one congruence")
    items = [(as_point(r), Modulus.of(m)) for r, m in congruences]
    k = items[0][1].k
    for i, (r, m) in enumerate(items):
        if m.k != k or len(r) != k:
            raise ArityMismatch("congruences have mixed arity")
        for _, m2 in items[:i]:
            if not moduli_coprime(m, m2):
                raise NonCoprimeModuli(f"{m} and {m2} are not coprime")
    x, mod = items[0][1].reduce(items[0][0]), items[0][1]
    for r, m in items[1:]:
        x, mod = crt_point(x, mod, m.reduce(r), m)
    return x, mod


def modulus_divisors(m, bound: int = DIVISOR_NORM_BOUND) -> list[Modulus]:
    """All componentwise divisors of ``m`` sorted by norm, ties lexicographic."""
    m = Modulus.of(m)
    if m.norm > bound:
        raise BoundExceeded(f"norm {m.norm} exceeds divisor enumeration bound {bound}")
    per_comp = []
    for c in m.components:
        divs = [1]
        for p, e in factorize(c):
            divs = [d * p**i for d in divs for i in range(e + 1)]
        per_comp.append(sorted(divs))
    out = [Modulus(t) for t in itertools.product(*per_comp)]
    out.sort(key=lambda d: (d.norm, d.components))
    return out


def _coset_flats(modulus: Modulus, offset: Point, divisor: Modulus) -> np.ndarray:
    modulus.check_flat()
    flat = np.zeros(1, dtype=np.int64)
    for a, d, b, s in zip(offset, divisor.components, modulus.components, modulus.strides):
        vals = (a % d + d * np.arange(b // d, dtype=np.int64)) * s
        flat = np.add.outer(flat, vals).ravel()
    return flat


class ResidueClassSet:
    """A finite union of residue classes ``S + bZ^k``, viewed inside ``Z^k / b``.

    Immutable. Equality is structural on the canonical (sorted, reduced)
    residue set.
    """

    __slots__ = ("modulus", "_flat", "_cosets", "_size", "__weakref__")

    def __init__(self, modulus, flat: np.ndarray | None = None, cosets=None):
        self.modulus = Modulus.of(modulus)
        self._flat = None
        self._cosets = None
        self._size = None
        if flat is not None:
            arr = np.unique(np.asarray(flat, dtype=np.int64))
            arr.setflags(write=False)
            self._flat = arr
            self._size = len(arr)
        else:
            self._cosets = tuple(cosets or ())

    # -- constructors -----------------------------------------------------
    @classmethod
    def explicit(cls, modulus, residues: Iterable = ()) -> "ResidueClassSet":
        m = Modulus.of(modulus)
        pts = [as_point(r, m.k) for r in residues]
        if not pts:
            return cls(m, flat=np.array([], dtype=np.int64))
        return cls(m, flat=m.encode_many(np.array(pts, dtype=np.int64)))

    @classmethod
    def empty(cls, modulus) -> "ResidueClassSet":
        return cls.explicit(modulus, ())

    @classmethod
    def from_cosets(cls, modulus, cosets: Iterable[tuple]) -> "ResidueClassSet":
        """Union of cosets ``a + dZ^k`` (``d | modulus``) as a set mod ``modulus``."""
        m = Modulus.of(modulus)
        norm_cosets = set()
        for offset, divisor in cosets:
            d = Modulus.of(divisor)
            if not d.divides(m):
                raise InvalidModulus(f"coset divisor {d} does not divide modulus {m}")
            norm_cosets.add((d.reduce(as_point(offset, m.k)), d))
        if all(d == m for _, d in norm_cosets):
            return cls.explicit(m, [o for o, _ in norm_cosets])
        # drop cosets contained in a coarser one
        reduced = []
        for off, d in norm_cosets:
            covered = any(
                d2 != d and d2.divides(d) and d2.reduce(off) == off2
                for off2, d2 in norm_cosets
            )
            if not covered:
                reduced.append((off, d))
        reduced.sort(key=lambda c: (c[1].norm, c[1].components, c[0]))
        total = sum(m.norm // d.norm for _, d in reduced)
        if total <= EAGER_BOUND:
            flats = [_coset_flats(m, o, d) for o, d in reduced]
            out = cls(m, flat=np.concatenate(flats) if flats else np.array([], dtype=np.int64))
            # keep the coset form too: marking one progression per coset is cheaper
            out._cosets = tuple(reduced)
            return out
        return cls(m, cosets=tuple(reduced))

    # -- basic properties ---------------------------------------------------
    @property
    def k(self) -> int:
        return self.modulus.k

    @property
    def is_explicit(self) -> bool:
        return self._flat is not None

    @property
    def cosets(self) -> tuple:
        """Coset description ``((offset, divisor), ...)``; singletons for explicit sets."""
        if self._cosets is not None:
            return self._cosets
        return tuple((self.modulus.decode(f), self.modulus) for f in self._flat.tolist())

    @property
    def size(self) -> int:
        if self._size is None:
            self._size = _coset_union_size(self.modulus, self._cosets)
        return self._size

    def __len__(self) -> int:
        return self.size

    @property
    def norm(self) -> int:
        return self.modulus.norm

    def is_empty(self) -> bool:
        return self.size == 0

    def is_full(self) -> bool:
        return self.size == self.modulus.norm

    @property
    def flat(self) -> np.ndarray:
        """Sorted flat codes of all residues (enumerates coset unions)."""
        if self._flat is None:
            total = sum(self.modulus.norm // d.norm for _, d in self._cosets)
            if total > ENUM_BOUND:
                raise BoundExceeded(f"residue set of size ~{total} too large to enumerate")
            parts = [_coset_flats(self.modulus, o, d) for o, d in self._cosets]
            arr = np.unique(np.concatenate(parts)) if parts else np.array([], dtype=np.int64)
            arr.setflags(write=False)
            self._flat = arr
            self._size = len(arr)
        return self._flat

    @property
    def residues(self) -> tuple[Point, ...]:
        return tuple(tuple(int(v) for v in row) for row in self.modulus.decode_many(self.flat))

    def residues_int(self) -> list[int]:
        """Residues for k = 1 as plain integers."""
        return [r[0] for r in self.residues]

    def mask(self) -> np.ndarray:
        """Boolean membership table of length ``norm`` (flat-indexed)."""
        if self.modulus.norm > ENUM_BOUND:
            raise BoundExceeded(f"norm {self.modulus.norm} too large for a membership table")
        out = np.zeros(self.modulus.norm, dtype=bool)
        if self._cosets is not None and self._flat is None:
            shape = self.modulus.components
            view = out.reshape(shape)
            for off, d in self._cosets:
                view[tuple(slice(a, None, step) for a, step in zip(off, d.components))] = True
        else:
            out[self.flat] = True
        return out

    # -- membership ---------------------------------------------------------
    def contains(self, point) -> bool:
        pt = as_point(point, self.k)
        if self._flat is not None:
            f = self.modulus.encode(pt)
            i = int(np.searchsorted(self._flat, f))
            return i < len(self._flat) and int(self._flat[i]) == f
        return any(
            all((x - a) % d == 0 for x, a, d in zip(pt, off, dv.components))
            for off, dv in self._cosets
        )

    def __contains__(self, point) -> bool:
        return self.contains(point)

    def contains_many(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, self.k)
        if self._flat is not None:
            if len(self._flat) == 0:
                return np.zeros(len(coords), dtype=bool)
            f = self.modulus.encode_many(coords)
            idx = np.minimum(np.searchsorted(self._flat, f), len(self._flat) - 1)
            return self._flat[idx] == f
        hit = np.zeros(len(coords), dtype=bool)
        for off, d in self._cosets:
            ok = np.ones(len(coords), dtype=bool)
            for j, (a, dj) in enumerate(zip(off, d.components)):
                if dj > 1:
                    ok &= np.mod(coords[:, j] - a, dj) == 0
            hit |= ok
        return hit

    # -- transformations ------------------------------------------------------
    def translate(self, t) -> "ResidueClassSet":
        """The set ``t + R``."""
        t = as_point(t, self.k)
        if self._cosets is not None and self._flat is None:
            return ResidueClassSet(
                self.modulus,
                cosets=tuple(
                    (d.reduce(tuple(a + s for a, s in zip(off, t))), d) for off, d in self._cosets
                ),
            )
        coords = self.modulus.decode_many(self._flat) + np.array(t, dtype=np.int64)
        return ResidueClassSet(self.modulus, flat=self.modulus.encode_many(coords))

    def union_translates(self, shifts: Iterable) -> "ResidueClassSet":
        """``U_{t in shifts} (t + R)``; ``-A + R`` is ``union_translates(-a for a in A)``."""
        shifts = [as_point(t, self.k) for t in shifts]
        if not shifts:
            return ResidueClassSet.empty(self.modulus)
        if self._flat is not None:
            coords = self.modulus.decode_many(self._flat)
            parts = [self.modulus.encode_many(coords + np.array(t, dtype=np.int64)) for t in shifts]
            return ResidueClassSet(self.modulus, flat=np.concatenate(parts))
        cos = []
        for t in shifts:
            for off, d in self._cosets:
                cos.append((tuple(a + s for a, s in zip(off, t)), d))
        return ResidueClassSet.from_cosets(self.modulus, cos)

    def lift(self, modulus) -> "ResidueClassSet":
        """The same subset of Z^k viewed modulo a multiple ``modulus`` of ours."""
        m = Modulus.of(modulus)
        if not self.modulus.divides(m):
            raise InvalidModulus(f"{m} is not a multiple of {self.modulus}")
        if m == self.modulus:
            return self
        return ResidueClassSet.from_cosets(m, self.cosets)

    def union(self, other: "ResidueClassSet") -> "ResidueClassSet":
        if other.modulus != self.modulus:
            raise InvalidModulus("union requires a common modulus; lift first")
        if self._flat is not None and other._flat is not None:
            return ResidueClassSet(self.modulus, flat=np.concatenate([self._flat, other._flat]))
        return ResidueClassSet.from_cosets(self.modulus, self.cosets + other.cosets)

    def progressions(self) -> list[tuple[Point, tuple[int, ...]]]:
        """Arithmetic progressions (offset, step) whose union is ``R + bZ^k``."""
        if self._cosets is not None:
            return [(off, d.components) for off, d in self._cosets]
        step = self.modulus.components
        return [(r, step) for r in self.residues]

    # -- identity ---------------------------------------------------------------
    def _key(self):
        if self._flat is not None or self.size <= ENUM_BOUND:
            return (self.modulus, self.flat.tobytes())
        return (self.modulus, self._cosets)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResidueClassSet):
            return NotImplemented
        return self.modulus == other.modulus and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        if self._flat is not None and self.size <= 12:
            body = ",".join(
                str(r[0]) if self.k == 1 else "(" + ",".join(map(str, r)) + ")" for r in self.residues
            )
            return f"{{{body}}} + {self.modulus}"
        return f"<{self.size} residues mod {self.modulus}>"


def _coset_union_size(modulus: Modulus, cosets) -> int:
    """Count residues in a union of cosets, by inclusion-exclusion over divisor groups."""
    if not cosets:
        return 0
    if modulus.norm <= (1 << 22):
        mask = np.zeros(modulus.components, dtype=bool)
        for off, d in cosets:
            mask[tuple(slice(a, None, s) for a, s in zip(off, d.components))] = True
        return int(mask.sum())
    groups: dict[Modulus, set] = {}
    for off, d in cosets:
        groups.setdefault(d, set()).add(off)
    keys = list(groups)
    if len(keys) > 16:
        raise BoundExceeded("too many coset groups for inclusion-exclusion")
    total = 0
    for r in range(1, len(keys) + 1):
        for combo in itertools.combinations(keys, r):
            current = {(o, combo[0]) for o in groups[combo[0]]}
            for d in combo[1:]:
                nxt = set()
                for o, m in current:
                    for o2 in groups[d]:
                        res = crt_point(o, m, o2, d)
                        if res is not None:
                            nxt.add(res)
                current = nxt
                if len(current) > ENUM_BOUND:
                    raise BoundExceeded("coset intersection too large")
                if not current:
                    break
            if current:
                lcm = next(iter(current))[1]
                total += (-1) ** (r + 1) * len(current) * (modulus.norm // lcm.norm)
    return total
