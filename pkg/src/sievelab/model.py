"""Sieve descriptions and their materialization.

A :class:`SieveSpec` is the declarative form: explicit classes plus family
rules whose moduli are products of prime-stream values. :func:`materialize`
evaluates the first ``L`` classes in the canonical index order, validating
pairwise coprimality, non-full classes and declared residue-count bounds.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import BoundExceeded, CoprimalityViolation, FullClass, SieveError, StreamExhausted
from .primes import first_primes
from .residue import Modulus, ResidueClassSet, as_point


class ResidueBoundViolation(SieveError):
    reason = "ResidueBoundViolation"


# ---------------------------------------------------------------------------
# expression types


@dataclass(frozen=True)
class Affine:
    """``slope * i + const`` in the family index ``i``."""

    slope: int = 0
    const: int = 0

    def __call__(self, i: int | None) -> int:
        if self.slope and i is None:
            raise SieveError("affine expression uses an index outside a family")
        return self.slope * (i or 0) + self.const

    @property
    def is_constant(self) -> bool:
        return self.slope == 0


@dataclass(frozen=True)
class StreamFactor:
    stream: str
    arg: Affine
    power: int = 1


@dataclass(frozen=True)
class ModComponent:
    """``const * prod(stream(arg)^power)`` for one ring coordinate."""

    const: int = 1
    factors: tuple[StreamFactor, ...] = ()

    @property
    def is_constant(self) -> bool:
        return not self.factors


ModExpr = tuple[ModComponent, ...]


@dataclass(frozen=True)
class ExplicitTerm:
    points: tuple[tuple[Affine, ...], ...]


@dataclass(frozen=True)
class CosetTerm:
    offset: tuple[Affine, ...]
    divisor: ModExpr


@dataclass(frozen=True)
class ResidueSpec:
    terms: tuple = ()

    def max_points(self) -> int | None:
        """Upper bound on the residue count when it does not depend on the index."""
        if any(isinstance(t, CosetTerm) for t in self.terms):
            return None
        return sum(len(t.points) for t in self.terms)


@dataclass(frozen=True)
class PrimeStream:
    name: str
    kind: str = "primes"  # "primes" | "list"
    modulus: int = 1
    residue: int = 0
    values: tuple[int, ...] = ()

    def describe(self) -> str:
        if self.kind == "list":
            return "list {" + " ".join(map(str, self.values)) + "}"
        if self.modulus > 1:
            return f"primes where mod {self.modulus} == {self.residue}"
        return "primes"


@dataclass(frozen=True)
class FamilyRule:
    var: str
    start: int
    stop: Optional[int]
    modulus: ModExpr
    residues: ResidueSpec
    bound: Optional[int] = None
    overrides: tuple[tuple[int, ResidueSpec], ...] = ()

    def override_for(self, i: int) -> ResidueSpec | None:
        for j, spec in self.overrides:
            if j == i:
                return spec
        return None


@dataclass(frozen=True)
class ClassEntry:
    modulus: ModExpr
    residues: ResidueSpec


@dataclass(frozen=True)
class SieveSpec:
    k: int = 1
    streams: tuple[PrimeStream, ...] = ()
    classes: tuple[ClassEntry, ...] = ()
    families: tuple[FamilyRule, ...] = ()

    def stream(self, name: str) -> PrimeStream:
        for s in self.streams:
            if s.name == name:
                return s
        raise SieveError(f"unknown stream {name!r}")

    @property
    def is_finite(self) -> bool:
        return all(f.stop is not None for f in self.families)

    def canonical(self) -> str:
        from .dsl import format_sieve

        return format_sieve(self)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]

    @classmethod
    def from_classes(cls, k: int, classes: Sequence[tuple]) -> "SieveSpec":
        """Explicit-only spec from ``(modulus, residues)`` pairs."""
        entries = []
        for modulus, residues in classes:
            m = Modulus.of(modulus)
            rset = residues if isinstance(residues, ResidueClassSet) else ResidueClassSet.explicit(m, residues)
            entries.append(ClassEntry(_const_modexpr(m), residue_spec_of(rset)))
        return cls(k=k, classes=tuple(entries))


def _const_modexpr(m: Modulus) -> ModExpr:
    return tuple(ModComponent(c) for c in m.components)


def residue_spec_of(rset: ResidueClassSet) -> ResidueSpec:
    """Constant residue spec reproducing a concrete residue set."""
    if rset.is_explicit:
        pts = tuple(tuple(Affine(0, v) for v in r) for r in rset.residues)
        return ResidueSpec((ExplicitTerm(pts),)) if pts else ResidueSpec(())
    terms = []
    for off, d in rset.cosets:
        terms.append(CosetTerm(tuple(Affine(0, v) for v in off), _const_modexpr(d)))
    return ResidueSpec(tuple(terms))


# ---------------------------------------------------------------------------
# evaluation


class _StreamCache:
    def __init__(self, stream: PrimeStream):
        self.stream = stream
        self.values = np.array(stream.values, dtype=np.int64) if stream.kind == "list" else np.array([], dtype=np.int64)

    def value(self, n: int) -> int:
        if n < 1:
            raise SieveError(f"stream {self.stream.name} indexed at {n} < 1")
        if n > len(self.values):
            if self.stream.kind == "list":
                raise StreamExhausted(
                    f"stream {self.stream.name} has only {len(self.values)} values, index {n} requested"
                )
            count = max(n, 2 * len(self.values), 64)
            self.values = first_primes(count, self.stream.modulus, self.stream.residue)
        return int(self.values[n - 1])


def eval_modexpr(expr: ModExpr, i: int | None, streams: dict[str, _StreamCache]) -> Modulus:
    comps = []
    for comp in expr:
        v = comp.const
        for f in comp.factors:
            v *= streams[f.stream].value(f.arg(i)) ** f.power
        comps.append(v)
    return Modulus(tuple(comps))


def eval_residues(spec: ResidueSpec, modulus: Modulus, i: int | None, streams) -> ResidueClassSet:
    k = modulus.k
    points, cosets = [], []
    for term in spec.terms:
        if isinstance(term, ExplicitTerm):
            points.extend(tuple(a(i) for a in pt) for pt in term.points)
        else:
            d = eval_modexpr(term.divisor, i, streams)
            cosets.append((tuple(a(i) for a in term.offset), d))
    if cosets:
        cosets.extend((p, modulus) for p in points)
        return ResidueClassSet.from_cosets(modulus, cosets)
    return ResidueClassSet.explicit(modulus, [as_point(p, k) for p in points])


@dataclass(frozen=True)
class SieveClass:
    index: int
    modulus: Modulus
    residues: ResidueClassSet
    rule: Optional[int] = None
    param: Optional[int] = None
    stream_refs: tuple[tuple[str, int], ...] = ()

    @property
    def weight(self) -> Fraction:
        return Fraction(self.residues.size, self.modulus.norm)


def index_order(spec: SieveSpec) -> Iterator[tuple[Optional[int], int]]:
    """Yields ``(rule, param)``; explicit entries come first as ``(None, position)``."""
    for pos in range(len(spec.classes)):
        yield None, pos
    active = [(r, fam.start) for r, fam in enumerate(spec.families)]
    active = [(r, i) for r, i in active if spec.families[r].stop is None or i <= spec.families[r].stop]
    while active:
        nxt = []
        for r, i in active:
            yield r, i
            fam = spec.families[r]
            if fam.stop is None or i + 1 <= fam.stop:
                nxt.append((r, i + 1))
        active = nxt


class _Materializer:
    """Incremental, prefix-stable evaluation of one spec."""

    def __init__(self, spec: SieveSpec):
        self.spec = spec
        self.streams = {s.name: _StreamCache(s) for s in spec.streams}
        self.order = index_order(spec)
        self.classes: list[SieveClass] = []
        self.products = [1] * spec.k
        self.exhausted = False

    def _evaluate(self, rule, param, index) -> SieveClass:
        spec = self.spec
        if rule is None:
            entry = spec.classes[param]
            m = eval_modexpr(entry.modulus, None, self.streams)
            res = eval_residues(entry.residues, m, None, self.streams)
            return SieveClass(index, m, res)
        fam = spec.families[rule]
        m = eval_modexpr(fam.modulus, param, self.streams)
        rspec = fam.override_for(param) or fam.residues
        res = eval_residues(rspec, m, param, self.streams)
        if fam.bound is not None and res.size > fam.bound:
            raise ResidueBoundViolation(
                f"class {index} has {res.size} residues, above declared bound {fam.bound}"
            )
        refs = tuple(
            sorted({(f.stream, f.arg(param)) for comp in fam.modulus for f in comp.factors})
        )
        return SieveClass(index, m, res, rule, param, refs)

    def extend(self, L: int) -> None:
        while len(self.classes) < L and not self.exhausted:
            try:
                rule, param = next(self.order)
            except StopIteration:
                self.exhausted = True
                break
            index = len(self.classes) + 1
            cls = self._evaluate(rule, param, index)
            if cls.residues.is_full():
                raise FullClass(f"class {index} is the full residue ring mod {cls.modulus}", index=index)
            for j, b in enumerate(cls.modulus.components):
                # reduce first: gcd on the huge running product is quadratic
                if math.gcd(b, self.products[j] % b) > 1:
                    other = next(
                        c.index for c in self.classes if math.gcd(c.modulus.components[j], b) > 1
                    )
                    raise CoprimalityViolation(other, index)
            for j, b in enumerate(cls.modulus.components):
                self.products[j] *= b
            self.classes.append(cls)


_materializers: dict[SieveSpec, _Materializer] = {}


def _materializer(spec: SieveSpec) -> _Materializer:
    mat = _materializers.get(spec)
    if mat is None:
        if len(_materializers) > 64:
            _materializers.clear()
        mat = _materializers[spec] = _Materializer(spec)
    return mat


@dataclass(frozen=True)
class Sieve:
    """Materialized prefix ``classes[1..L]`` of a spec."""

    spec: SieveSpec
    classes: tuple[SieveClass, ...] = field(repr=False)

    @property
    def L(self) -> int:
        return len(self.classes)

    @property
    def k(self) -> int:
        return self.spec.k

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, index: int) -> SieveClass:
        """1-based access, matching the mathematical indexing."""
        return self.classes[index - 1]

    @property
    def complete(self) -> bool:
        """True when the prefix is the whole (finite) sieve."""
        mat = _materializer(self.spec)
        mat.extend(self.L + 1)
        return len(mat.classes) == self.L

    def prefix(self, L: int) -> "Sieve":
        return Sieve(self.spec, self.classes[:L])

    def extended(self, L: int) -> "Sieve":
        return materialize(self.spec, L, strict=False)

    def moduli(self) -> list[Modulus]:
        return [c.modulus for c in self.classes]

    @classmethod
    def from_classes(cls, k: int, classes: Sequence[tuple]) -> "Sieve":
        spec = SieveSpec.from_classes(k, classes)
        return materialize(spec, len(spec.classes))


def materialize(spec: SieveSpec, L: int, strict: bool = True) -> Sieve:
    """First ``L`` classes of ``spec``; raises :class:`StreamExhausted` if fewer exist and ``strict``.

    A finite spec with fewer than ``L`` classes materializes completely when
    ``strict`` is false.
    """
    if L < 0:
        raise ValueError("L must be non-negative")
    mat = _materializer(spec)
    mat.extend(L)
    if len(mat.classes) < L and strict:
        raise StreamExhausted(f"spec defines only {len(mat.classes)} classes, {L} requested")
    return Sieve(spec, tuple(mat.classes[:L]))


def level_for_primes(spec: SieveSpec, p_max: int) -> int:
    """Smallest ``L`` whose prefix holds every family class with stream values ``<= p_max``.

    A class counts as small when the smallest stream value in its modulus is
    ``<= p_max``. Relies on stream arguments increasing with the index.
    """
    mat = _materializer(spec)
    target = len(spec.classes) + 64
    while True:
        mat.extend(target)
        last_small = len(spec.classes)
        done = set()
        for c in mat.classes[len(spec.classes):]:
            vals = [mat.streams[s].value(n) for s, n in c.stream_refs]
            if not vals or min(vals) <= p_max:
                last_small = c.index
                done.discard(c.rule)
            else:
                done.add(c.rule)
        if mat.exhausted or len(done) == len(spec.families):
            return min(last_small, len(mat.classes))
        target *= 2


# ---------------------------------------------------------------------------
# Erdős sums


@dataclass(frozen=True)
class _DecayTerm:
    coeff: int
    stream: str
    arg: Affine
    exponent: int


def _best_factor(expr: ModExpr) -> tuple[str, Affine, int] | None:
    exps: dict[tuple[str, Affine], int] = {}
    for comp in expr:
        for f in comp.factors:
            exps[(f.stream, f.arg)] = exps.get((f.stream, f.arg), 0) + f.power
    best = None
    for (s, a), e in exps.items():
        if a.slope >= 1 and (best is None or e > best[2]):
            best = (s, a, e)
    return best


def decay_candidates(spec: SieveSpec, rule: int) -> list[list[_DecayTerm]]:
    """Alternative bounds ``|R_i|/N(b_i) <= sum coeff * q_i^-exponent`` for a family.

    One candidate comes from the residue structure (point counts, coset
    divisors), one from a declared ``bound``; either may be missing.
    """
    fam = spec.families[rule]
    modf = _best_factor(fam.modulus)
    out: list[list[_DecayTerm]] = []
    if fam.bound is not None and modf is not None:
        out.append([_DecayTerm(fam.bound, *modf)])
    structural: list[_DecayTerm] | None = []
    for term in fam.residues.terms:
        if isinstance(term, ExplicitTerm):
            if modf is None:
                structural = None
                break
            structural.append(_DecayTerm(len(term.points), *modf))
        else:
            f = _best_factor(term.divisor)
            if f is None:
                structural = None
                break
            structural.append(_DecayTerm(1, *f))
    if structural is not None:
        out.append(structural)
    return out


def _term_tail(term: _DecayTerm, streams, next_param: int, first: bool) -> Fraction | None:
    """Upper bound for ``sum_{j >= next_param} coeff * q_j^-e``."""
    if term.exponent < 2:
        return None
    e = term.exponent
    if not first:
        q = streams[term.stream].value(term.arg(next_param - 1))
        return Fraction(term.coeff, (e - 1) * q ** (e - 1))
    q = streams[term.stream].value(term.arg(next_param))
    return Fraction(term.coeff, q**e) + Fraction(term.coeff, (e - 1) * q ** (e - 1))


def erdos_partial(spec: SieveSpec, L: int) -> tuple[Fraction, Fraction | None]:
    """Partial Erdős sum over the first ``L`` classes and an analytic tail bound.

    The tail bound is ``None`` ("unknown") when some unbounded family has no
    residue-count bound decaying at least like ``q^-2`` in its stream value.
    """
    sieve = materialize(spec, L, strict=False)
    partial = sum((c.weight for c in sieve.classes), Fraction(0))
    mat = _materializer(spec)
    streams = mat.streams
    tail = Fraction(0)
    n_explicit = len(spec.classes)
    if sieve.L < n_explicit:
        rest = materialize(spec, n_explicit).classes[sieve.L:]
        tail += sum((c.weight for c in rest), Fraction(0))
    last_param: dict[int, int] = {}
    for c in sieve.classes:
        if c.rule is not None:
            last_param[c.rule] = c.param
    for r, fam in enumerate(spec.families):
        nxt = last_param.get(r, fam.start - 1) + 1
        if fam.stop is not None and nxt > fam.stop:
            continue
        bound = None
        for terms in decay_candidates(spec, r):
            try:
                parts = [_term_tail(t, streams, nxt, r not in last_param) for t in terms]
            except StreamExhausted:
                continue
            if all(p is not None for p in parts):
                cand = sum(parts, Fraction(0))
                bound = cand if bound is None else min(bound, cand)
        if bound is None and fam.stop is not None and fam.stop - nxt < 10_000:
            bound = _exact_remaining(mat, spec, r, nxt)
        if bound is None:
            return partial, None
        for j, ospec in fam.overrides:
            if j >= nxt and (fam.stop is None or j <= fam.stop):
                m = eval_modexpr(fam.modulus, j, streams)
                bound += Fraction(eval_residues(ospec, m, j, streams).size, m.norm)
        tail += bound
    return partial, tail


def _exact_remaining(mat: _Materializer, spec: SieveSpec, rule: int, nxt: int) -> Fraction:
    fam = spec.families[rule]
    total = Fraction(0)
    for i in range(nxt, fam.stop + 1):
        m = eval_modexpr(fam.modulus, i, mat.streams)
        rs = eval_residues(fam.override_for(i) or fam.residues, m, i, mat.streams)
        total += Fraction(rs.size, m.norm)
    return total


def weight_bound_at(spec: SieveSpec, rule: int, param: int) -> Fraction | None:
    """Analytic bound on ``|R_i|/N(b_i)`` at family parameter ``param`` (overrides excluded)."""
    streams = _materializer(spec).streams
    best = None
    for terms in decay_candidates(spec, rule):
        val = sum(
            (Fraction(t.coeff, streams[t.stream].value(t.arg(param)) ** t.exponent) for t in terms),
            Fraction(0),
        )
        best = val if best is None else min(best, val)
    return best


def check_bound(n: int) -> None:
    if n > (1 << 62):
        raise BoundExceeded(f"value {n} exceeds 2^62")
