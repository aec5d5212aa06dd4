"""Structural algebra of sieves: stabilizers, minimality, contraction,
equivalence, unions and the minimal-gap statistic lambda.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import BoundExceeded, NoCommonBasis, NotWellDefined, SieveError
from .model import Sieve, materialize
from .residue import ENUM_BOUND, Modulus, Point, ResidueClassSet, modulus_divisors, moduli_coprime

MINIMALITY_BOUND = 10**6


def _require(rset: ResidueClassSet, bound: int) -> None:
    if rset.norm > bound:
        raise BoundExceeded(f"norm {rset.norm} exceeds bound {bound}")


# ---------------------------------------------------------------------------
# stabilizers


@dataclass(frozen=True)
class Stabilizer:
    modulus: Modulus
    elements: tuple[Point, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.modulus.norm // self.order


def _shift_codes(modulus: Modulus, coords: np.ndarray, t) -> np.ndarray:
    return modulus.encode_many(coords + np.asarray(t, dtype=np.int64))


def stabilizer(rset: ResidueClassSet, bound: int = ENUM_BOUND) -> Stabilizer:
    """All ``x`` mod ``b`` with ``x + R_b = R_b``.

    Candidates are differences ``r - r0`` for a fixed ``r0`` in ``R_b``; the
    empty set is fixed by the whole group.
    """
    _require(rset, bound)
    m = rset.modulus
    if rset.is_empty():
        pts = m.decode_many(np.arange(m.norm, dtype=np.int64))
        return Stabilizer(m, tuple(tuple(int(v) for v in p) for p in pts))
    mask = rset.mask()
    coords = m.decode_many(rset.flat)
    r0 = coords[0]
    elems = []
    for c in coords:
        t = c - r0
        if mask[_shift_codes(m, coords, t)].all():
            elems.append(m.encode(tuple(int(v) for v in t)))
    elems.sort()
    out = Stabilizer(m, tuple(m.decode(f) for f in elems))
    if m.norm % out.order:
        raise SieveError(f"stabilizer order {out.order} does not divide norm {m.norm}")
    return out


# ---------------------------------------------------------------------------
# minimality


@dataclass(frozen=True)
class Minimal:
    modulus: Modulus

    minimal = True

    def __str__(self) -> str:
        return "Minimal"


@dataclass(frozen=True)
class Decomposition:
    """``R_b = U_i (S_i + d_i)`` with pairwise coprime proper divisors ``d_i``."""

    modulus: Modulus
    parts: tuple[tuple[Modulus, ResidueClassSet], ...]

    minimal = False

    def reconstruct(self) -> ResidueClassSet:
        out = ResidueClassSet.empty(self.modulus)
        for _, s in self.parts:
            out = out.union(s.lift(self.modulus))
        return out

    def __str__(self) -> str:
        if not self.parts:
            return "Decomposition []"
        return "Decomposition [" + ", ".join(f"({d}, {s!r})" for d, s in self.parts) + "]"


MinimalityVerdict = Union[Minimal, Decomposition]


def _inner_cosets(mask_nd: np.ndarray, b: Modulus, d: Modulus) -> np.ndarray:
    """Boolean table mod ``d``: which cosets ``x + d`` lie wholly inside R."""
    shape = []
    for bj, dj in zip(b.components, d.components):
        shape.extend((bj // dj, dj))
    view = mask_nd.reshape(shape)
    return view.all(axis=tuple(range(0, 2 * b.k, 2)))


def _to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask.ravel(), bitorder="little").tobytes(), "little")


def _cover_search(cands, target: int):
    """Fewest pairwise coprime candidates whose bitsets union to ``target``.

    ``cands`` is a list of ``(divisor, bits)`` sorted by (norm, components).
    Branches on the lowest uncovered residue; among covers of minimal size the
    one with the smallest sorted index tuple (= smallest norm sequence) wins.
    """
    n = len(cands)
    best: list[tuple[int, ...]] = []

    def rec(chosen, acc, depth):
        if acc == target:
            best.append(tuple(sorted(chosen)))
            return
        if len(chosen) == depth:
            return
        rest = target & ~acc
        low = rest & -rest
        for i in range(n):
            d, bits = cands[i]
            if bits & low and i not in chosen and all(moduli_coprime(d, cands[j][0]) for j in chosen):
                chosen.append(i)
                rec(chosen, acc | bits, depth)
                chosen.pop()

    for depth in range(1, n + 1):
        rec([], 0, depth)
        if best:
            return list(min(best))
    return None


def minimal_class(rset: ResidueClassSet, bound: int = MINIMALITY_BOUND) -> MinimalityVerdict:
    """Decide whether ``R_b`` is a union of cosets of pairwise coprime proper divisors.

    A decomposition found at the top level is refined recursively, so the
    returned parts are themselves minimal. The empty class decomposes into
    zero parts.
    """
    _require(rset, bound)
    b = rset.modulus
    if rset.is_empty():
        return Decomposition(b, ())
    mask_nd = rset.mask().reshape(b.components)
    target = _to_bits(mask_nd)
    cands = []
    for d in modulus_divisors(b):
        if d == b:
            continue
        inner = _inner_cosets(mask_nd, b, d)
        if not inner.any():
            continue
        lifted = np.tile(inner, tuple(bj // dj for bj, dj in zip(b.components, d.components)))
        cands.append((d, ResidueClassSet(d, flat=np.flatnonzero(inner.ravel())), _to_bits(lifted)))
    chosen = _cover_search([(d, bits) for d, _, bits in cands], target)
    if chosen is None:
        return Minimal(b)
    parts = []
    for i in chosen:
        d, s, _ = cands[i]
        sub = minimal_class(s, bound)
        if isinstance(sub, Minimal):
            parts.append((d, s))
        else:
            parts.extend(sub.parts)
    parts.sort(key=lambda p: (p[0].norm, p[0].components))
    return Decomposition(b, tuple(parts))


def is_minimal_sieve(sieve: Sieve, bound: int = MINIMALITY_BOUND) -> bool:
    return all(isinstance(minimal_class(c.residues, bound), Minimal) for c in sieve.classes)


def contract_sieve(sieve: Sieve, bound: int = MINIMALITY_BOUND) -> Sieve:
    """Replace each non-minimal class by its minimal parts, in place, by norm."""
    out = []
    for c in sieve.classes:
        verdict = minimal_class(c.residues, bound)
        if isinstance(verdict, Minimal):
            out.append((c.modulus, c.residues))
        else:
            out.extend(verdict.parts)
    return Sieve.from_classes(sieve.k, out)


# ---------------------------------------------------------------------------
# equivalence


@dataclass(frozen=True)
class EquivVerdict:
    equivalent: bool
    L: int
    side: Optional[int] = None  # 1 = class of the first sieve, 2 = of the second
    index: Optional[int] = None
    witness: Optional[Point] = None
    partners: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.equivalent:
            return f"EquivalentUpTo({self.L})"
        return f"NotEquivalent(side={self.side}, index={self.index}, x={_fmt_point(self.witness)})"


def _fmt_point(p) -> str:
    if p is None:
        return "-"
    return str(p[0]) if len(p) == 1 else "(" + ",".join(map(str, p)) + ")"


def _uncovered(cls_res: ResidueClassSet, partners: Sequence[ResidueClassSet], bound: int):
    """A residue of ``cls_res`` outside every partner class, modulo the lcm; None if covered."""
    M = cls_res.modulus
    for p in partners:
        M = M.lcm(p.modulus)
    if M.norm > bound:
        raise BoundExceeded(f"lcm norm {M.norm} exceeds bound {bound}")
    cover = np.zeros(M.norm, dtype=bool)
    for p in partners:
        cover |= p.lift(M).mask()
    own = cls_res.lift(M).mask()
    bad = np.flatnonzero(own & ~cover)
    if len(bad) == 0:
        return None
    return M.decode(int(bad[0]))


def _side_check(R: Sieve, other: Sieve, side: int, bound: int):
    for c in R.classes:
        if c.residues.is_empty():
            continue
        partners = [d for d in other.classes if not moduli_coprime(c.modulus, d.modulus)]
        x = _uncovered(c.residues, [d.residues for d in partners], bound)
        if x is not None:
            return EquivVerdict(False, R.L, side, c.index, x, tuple(d.index for d in partners))
    return None


def check_equivalent(R: Sieve, R2: Sieve, bound: int = ENUM_BOUND) -> EquivVerdict:
    """Check ``R_b ⊂ U_{b' not coprime to b} R'_{b'}`` for every class, both ways.

    Works within the two prefixes: a class whose partners lie beyond the
    other prefix is reported as a counterexample at this truncation.
    """
    for A, B, side in ((R, R2, 1), (R2, R, 2)):
        v = _side_check(A, B, side, bound)
        if v is not None:
            return v
    return EquivVerdict(True, min(R.L, R2.L))


def verify_equiv_witness(R: Sieve, R2: Sieve, verdict: EquivVerdict) -> bool:
    """Re-check a NotEquivalent witness with plain membership tests."""
    A, B = (R, R2) if verdict.side == 1 else (R2, R)
    c = A[verdict.index]
    if not c.residues.contains(verdict.witness):
        return False
    return not any(
        d.residues.contains(verdict.witness)
        for d in B.classes
        if not moduli_coprime(c.modulus, d.modulus)
    )


# ---------------------------------------------------------------------------
# unions


@dataclass
class UnionResult:
    components: list[tuple[tuple[int, ...], tuple[int, ...], Modulus]]
    sieve: Sieve = field(repr=False)

    def rows(self):
        for (a, b, m), c in zip(self.components, self.sieve.classes):
            yield a, b, m, c.residues.size


def union_sieves(R: Sieve, R2: Sieve, lookahead: Optional[int] = None, bound: int = ENUM_BOUND) -> UnionResult:
    """Union sieve over the finite components of the coprimality graph.

    Both sieves are materialized ahead to ``lookahead`` (default 2L) to
    observe growth; a component holding an index ``<= L`` that also reaches
    the last looked-ahead index of an unfinished sieve has no common basis.
    """
    L, L2 = R.L, R2.L
    if R.k != R2.k:
        raise SieveError("ring dimensions differ")
    ahead = lookahead or max(2 * max(L, L2), max(L, L2) + 8)
    A = R if R.complete else materialize(R.spec, ahead, strict=False)
    B = R2 if R2.complete else materialize(R2.spec, ahead, strict=False)
    nodes = [(0, c) for c in A.classes] + [(1, c) for c in B.classes]
    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    nA = len(A.classes)
    for i, ca in enumerate(A.classes):
        for j, cb in enumerate(B.classes):
            if not moduli_coprime(ca.modulus, cb.modulus):
                ri, rj = find(i), find(nA + j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(len(nodes)):
        groups.setdefault(find(i), []).append(i)
    open_ends = set()
    if not A.complete:
        open_ends.add(nA - 1)
    if not B.complete:
        open_ends.add(len(nodes) - 1)
    comps = []
    for members in groups.values():
        a_idx = tuple(nodes[i][1].index for i in members if nodes[i][0] == 0)
        b_idx = tuple(nodes[i][1].index for i in members if nodes[i][0] == 1)
        if not any(x <= L for x in a_idx) and not any(x <= L2 for x in b_idx):
            continue
        if open_ends & set(members):
            raise NoCommonBasis(min(L, L2))
        comps.append((a_idx, b_idx))
    comps.sort(key=lambda ab: min([x for x in ab[0]] + [x + 0.5 for x in ab[1]]))
    out_comps, classes = [], []
    for a_idx, b_idx in comps:
        members = [A[i] for i in a_idx] + [B[j] for j in b_idx]
        M = members[0].modulus
        for c in members[1:]:
            M = M.lcm(c.modulus)
        res = ResidueClassSet.empty(M)
        for c in members:
            res = res.union(c.residues.lift(M))
        if res.is_full():
            raise NotWellDefined(
                f"union class mod {M} (indices {a_idx} / {b_idx}) is the full ring",
                left=a_idx, right=b_idx,
            )
        out_comps.append((a_idx, b_idx, M))
        classes.append((M, res))
    return UnionResult(out_comps, Sieve.from_classes(R.k, classes))


# ---------------------------------------------------------------------------
# lambda


def min_gap(rset: ResidueClassSet) -> int:
    """Sup-norm minimal distance between distinct points of ``R_b + bZ^k``."""
    if rset.is_empty():
        raise SieveError("min_gap of an empty class is undefined")
    b = np.array(rset.modulus.components, dtype=np.int64)
    best = int(b.min())
    if rset.size == 1:
        return best
    if rset.k == 1:
        r = np.sort(rset.flat)
        gaps = np.diff(r)
        return int(min(best, gaps.min(), b[0] - r[-1] + r[0]))
    pts = rset.modulus.decode_many(rset.flat)
    n = len(pts)
    chunk = max(1, 4_000_000 // n)
    for s in range(0, n, chunk):
        delta = np.mod(pts[s : s + chunk, None, :] - pts[None, :, :], b)
        dist = np.minimum(delta, b - delta).max(axis=2)
        dist[dist == 0] = best
        best = min(best, int(dist.min()))
    return best


@dataclass(frozen=True)
class LambdaRow:
    index: int
    gap: Optional[int]
    running_max: int
    record: bool


def lambda_profile(sieve: Sieve) -> list[LambdaRow]:
    """Per-index gaps with running maximum; empty classes have no gap."""
    rows, run = [], 0
    for c in sieve.classes:
        g = None if c.residues.is_empty() else min_gap(c.residues)
        rec = g is not None and g > run
        if rec:
            run = g
        rows.append(LambdaRow(c.index, g, run, rec))
    return rows


def lambda_growing(rows: Sequence[LambdaRow]) -> bool:
    """Heuristic flag: the running maximum keeps setting records in the last half."""
    if not rows:
        return False
    half = rows[len(rows) // 2 :]
    return sum(r.record for r in half) >= max(1, len(half) // 4)
