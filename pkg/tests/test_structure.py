import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import explicit, load, random_sieve_classes, sieve_file
from oracles import first_primes, is_union_of_coprime_cosets, min_gap_brute, stabilizer_brute
from sievelab import (
    Window,
    check_equivalent,
    contract_sieve,
    cylinder_measure,
    enumerate_free,
    lambda_profile,
    load_sieve,
    materialize,
    min_gap,
    minimal_class,
    stabilizer,
    union_sieves,
)
from sievelab.dynamics import Pattern
from sievelab.errors import NoCommonBasis, NotWellDefined
from sievelab.residue import Modulus, ResidueClassSet
from sievelab.structure import Decomposition, Minimal, verify_equiv_witness

rcs = ResidueClassSet.explicit


def parts_of(v):
    return [(d.components[0], s.residues_int()) for d, s in v.parts]


@pytest.mark.parametrize(
    "m, res, elems",
    [(4, [0, 2], [0, 2]), (4, [0], [0]), (25, [0, 5, 10, 15, 20], [0, 5, 10, 15, 20])],
)
def test_stabilizer_examples(m, res, elems):
    st_ = stabilizer(rcs(m, res))
    assert [e[0] for e in st_.elements] == elems
    assert st_.index == m // len(elems)


def test_minimality_examples():
    assert parts_of(minimal_class(rcs(25, [0, 5, 10, 15, 20]))) == [(5, [0])]
    assert parts_of(minimal_class(rcs(6, [0, 2, 3, 4]))) == [(2, [0]), (3, [0])]
    assert isinstance(minimal_class(rcs(25, [0, 5, 6, 10, 15, 20])), Minimal)
    assert isinstance(minimal_class(rcs(30, [1, 2, 7, 13, 17, 19, 25])), Minimal)
    # the oracle agrees on all four
    assert is_union_of_coprime_cosets(25, {0, 5, 10, 15, 20})
    assert is_union_of_coprime_cosets(6, {0, 2, 3, 4})
    assert not is_union_of_coprime_cosets(25, {0, 5, 6, 10, 15, 20})
    assert not is_union_of_coprime_cosets(30, {1, 2, 7, 13, 17, 19, 25})


def test_contraction_examples():
    c = contract_sieve(explicit([(4, [0, 2]), (9, [0])]))
    assert [(x.modulus.components[0], x.residues.residues_int()) for x in c] == [(2, [0]), (9, [0])]
    c = contract_sieve(explicit([(75, [0, 25, 50])]))
    assert [(x.modulus.components[0], x.residues.residues_int()) for x in c] == [(25, [0])]
    s = explicit([(4, [1]), (9, [2, 3])])
    assert contract_sieve(s).classes == s.classes


def test_equivalence_examples():
    sq = load("squarefree", 5)
    cube = load("cubefree", 5)
    v = check_equivalent(sq, cube)
    assert not v.equivalent and v.witness == (4,) and v.side == 1 and v.index == 1
    assert verify_equiv_witness(sq, cube, v)
    dil = load("coset_dilation", 3)
    odd = explicit([(p * p, [0]) for p in first_primes(7)[2::2]])
    assert str(check_equivalent(dil, odd)) == "EquivalentUpTo(3)"
    assert check_equivalent(sq, sq).equivalent


def test_union_examples():
    spec = load_sieve(sieve_file("carefree"))
    w = materialize(spec, 4)
    # W'_p: p | x and p | y, the other half of the carefree class
    wp = explicit([((p * p, p), ResidueClassSet.from_cosets((p * p, p), [((0, 0), (p, p))]))
                   for p in first_primes(4)], k=2)
    wpp = explicit([((p * p, p), ResidueClassSet.from_cosets((p * p, p), [((0, 0), (p * p, 1))]))
                    for p in first_primes(4)], k=2)
    u = union_sieves(wpp, wp)
    assert [r[3] for r in u.rows()] == [2 * p - 1 for p in first_primes(4)]
    assert [c.residues for c in u.sieve] == [c.residues for c in w]
    with pytest.raises(NoCommonBasis) as e:
        union_sieves(load("chain_left", 50), load("chain_right", 50))
    assert e.value.token() == "NoCommonBasisUpTo(50)"
    with pytest.raises(NotWellDefined):
        union_sieves(explicit([(2, [0])]), explicit([(2, [1])]))


def test_min_gap_examples():
    assert min_gap(rcs(25, [0])) == 25
    assert min_gap(rcs(49, [0, 1])) == 1
    assert min_gap(rcs(8, [3, 4])) == 1


def test_lambda_profiles():
    rows = lambda_profile(load("squarefree", 6))
    assert [r.gap for r in rows] == [p * p for p in first_primes(6)]
    assert all(r.record for r in rows)
    rows = lambda_profile(load("x_neq_omega", 6))
    assert rows[0].gap is None and all(r.gap == 1 for r in rows[1:])
    assert [(r.index, r.gap) for r in lambda_profile(explicit([(12, [0, 5])]))] == [(1, 5)]


# -- properties ---------------------------------------------------------------


@st.composite
def small_class(draw, max_mod=60):
    m = draw(st.integers(2, max_mod))
    res = draw(st.sets(st.integers(0, m - 1), min_size=1, max_size=m - 1))
    return m, sorted(res)


@given(small_class())
def test_stabilizer_is_subgroup(case):
    m, res = case
    got = {e[0] for e in stabilizer(rcs(m, res)).elements}
    assert got == stabilizer_brute(m, set(res))
    assert all((a + b) % m in got and (-a) % m in got for a in got for b in got)
    assert m % (m // len(got)) == 0


@st.composite
def coset_class(draw):
    """Mostly unions of cosets of divisors, so both verdicts occur."""
    m = draw(st.sampled_from([6, 10, 12, 15, 18, 20, 25, 30, 36, 42, 45, 60]))
    divs = [d for d in range(2, m) if m % d == 0]
    cs = draw(st.lists(st.tuples(st.sampled_from(divs), st.integers(0, 59)), max_size=3))
    extra = draw(st.sets(st.integers(0, m - 1), max_size=2))
    res = {x for x in range(m) if any(x % d == a % d for d, a in cs)} | extra
    if not res or len(res) == m:
        res = {0}
    return m, sorted(res)


@given(coset_class())
def test_minimality_matches_oracle(case):
    m, res = case
    v = minimal_class(rcs(m, res))
    assert isinstance(v, Decomposition) == is_union_of_coprime_cosets(m, set(res))
    if isinstance(v, Decomposition):
        assert v.reconstruct() == rcs(m, res)
        ds = [d.components[0] for d, _ in v.parts]
        assert all(math.gcd(a, b) == 1 for i, a in enumerate(ds) for b in ds[i + 1:])
        assert all(d < m for d in ds)
        for _, part in v.parts:
            assert isinstance(minimal_class(part), Minimal)


@st.composite
def contractible_sieve(draw):
    """Pairwise coprime explicit classes, some of them dilated."""
    out, used = [], []
    for base in draw(st.lists(st.sampled_from([2, 3, 5, 7, 11]), unique=True, max_size=4)):
        kind = draw(st.integers(0, 2))
        if kind == 0:
            out.append((base, [0]))
        elif kind == 1:
            out.append((base * base, [j * base for j in range(base)]))  # dilation of base
        else:
            out.append((base * base, [0, 1]))
    return out


@given(contractible_sieve())
def test_contraction_preserves_sieved_set(classes):
    s = explicit(classes)
    c = contract_sieve(s)
    assert contract_sieve(c).classes == c.classes
    w = Window.interval(-10**4, 10**4)
    assert (enumerate_free(s, w).free == enumerate_free(c, w).free).all()
    for A in ([0], [0, 1], [0, 2, 5]):
        assert cylinder_measure(Pattern.of(A), s, exact=True).value == cylinder_measure(Pattern.of(A), c, exact=True).value


@given(random_sieve_classes(max_mod=30, max_len=3), random_sieve_classes(max_mod=30, max_len=3))
def test_union_free_set_is_intersection(a, b):
    R, R2 = explicit(a), explicit(b)
    try:
        U = union_sieves(R, R2).sieve
    except NotWellDefined:
        return
    w = Window.interval(-3000, 3000)
    want = enumerate_free(R, w).free & enumerate_free(R2, w).free
    assert (enumerate_free(U, w).free == want).all()


@given(random_sieve_classes(max_mod=30, max_len=3), random_sieve_classes(max_mod=30, max_len=3))
def test_equivalence_verdicts_are_sound(a, b):
    R, R2 = explicit(a), explicit(b)
    v = check_equivalent(R, R2)
    w = Window.interval(-3000, 3000)
    same = (enumerate_free(R, w).free == enumerate_free(R2, w).free).all()
    if v.equivalent:
        # finite sieves: every class has all its partners inside both prefixes
        assert same
    else:
        assert verify_equiv_witness(R, R2, v)


@given(small_class(max_mod=80))
def test_min_gap_matches_oracle(case):
    m, res = case
    assert min_gap(rcs(m, res)) == min_gap_brute(m, set(res))
