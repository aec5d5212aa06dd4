import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import crt_brute
from sievelab.errors import BoundExceeded, NonCoprimeModuli
from sievelab.residue import (
    Modulus,
    ResidueClassSet,
    crt_solve,
    moduli_coprime,
    modulus_divisors,
    modulus_norm,
)


@pytest.mark.parametrize("m, n", [((4,), 4), ((4, 9), 36), ((1, 1), 1)])
def test_norm(m, n):
    assert modulus_norm(m) == n


@pytest.mark.parametrize("a, b, want", [((4,), (9,), True), ((6,), (15,), False), ((2, 3), (4, 5), False)])
def test_coprime(a, b, want):
    assert moduli_coprime(a, b) is want


def test_crt_examples():
    assert crt_solve([((1,), 4), ((2,), 9)]) == ((29,), Modulus((36,)))
    assert crt_solve([((0,), 5)]) == ((0,), Modulus((5,)))
    assert crt_solve([((1,), 2), ((0,), 3), ((2,), 5)])[0] == (27,)
    # independent check of the stated values
    assert crt_brute([(1, 4), (2, 9)]) == (29, 36)
    assert crt_brute([(1, 2), (0, 3), (2, 5)]) == (27, 30)


def test_crt_rejects_non_coprime():
    with pytest.raises(NonCoprimeModuli):
        crt_solve([((0,), 4), ((1,), 6)])


def test_divisors():
    assert [d.components for d in modulus_divisors((4,))] == [(1,), (2,), (4,)]
    assert [d.components for d in modulus_divisors((6,))] == [(1,), (2,), (3,), (6,)]
    assert sorted(d.components for d in modulus_divisors((2, 2))) == [(1, 1), (1, 2), (2, 1), (2, 2)]


@st.composite
def congruence_system(draw):
    mods = []
    for m in draw(st.lists(st.integers(1, 60), max_size=4)):
        if all(math.gcd(m, x) == 1 for x in mods) and math.prod(mods + [m]) <= 10**4:
            mods.append(m)
    if not mods:
        mods = [draw(st.integers(1, 60))]
    return [(draw(st.integers(-500, 500)), m) for m in mods]


@given(congruence_system())
def test_crt_solution_is_unique(system):
    x, M = crt_solve([((r,), m) for r, m in system])
    assert M.norm == math.prod(m for _, m in system)
    assert all((x[0] - r) % m == 0 for r, m in system)
    # exhaustive uniqueness modulo the product
    sols = [y for y in range(M.norm) if all((y - r) % m == 0 for r, m in system)]
    assert sols == [x[0]]


@given(st.lists(st.integers(1, 40), min_size=1, max_size=3), st.lists(st.integers(1, 40), min_size=1, max_size=3))
def test_coprime_iff_lcm_is_product(a, b):
    k = min(len(a), len(b))
    ma, mb = Modulus(tuple(a[:k])), Modulus(tuple(b[:k]))
    assert moduli_coprime(ma, mb) == (ma.lcm(mb).norm == ma.norm * mb.norm)


@given(st.lists(st.integers(1, 72), min_size=1, max_size=2))
def test_divisors_closed_under_gcd(m):
    m = Modulus(tuple(m))
    divs = set(modulus_divisors(m))
    assert Modulus((1,) * m.k) in divs and m in divs
    for d in divs:
        for e in divs:
            assert d.gcd(e) in divs


@given(st.integers(2, 60), st.data())
def test_coset_union_matches_enumeration(m, data):
    d = data.draw(st.sampled_from([x for x in range(1, m + 1) if m % x == 0]))
    offs = data.draw(st.sets(st.integers(0, d - 1), min_size=1, max_size=4))
    rs = ResidueClassSet.from_cosets(m, [((o,), d) for o in offs])
    want = sorted(x for x in range(m) if x % d in offs)
    assert rs.residues_int() == want
    assert rs.size == len(want)
    t = data.draw(st.integers(-100, 100))
    assert rs.translate(t).residues_int() == sorted((x + t) % m for x in want)


def test_flat_codes_are_lexicographic():
    m = Modulus((3, 4))
    codes = m.encode_many(np.array([(i, j) for i in range(3) for j in range(4)]))
    assert codes.tolist() == list(range(12))


def test_norm_guard_applies_to_flat_codes():
    m = Modulus((2**40, 2**40))
    assert m.norm == 2**80
    s = ResidueClassSet.from_cosets(m, [((0, 0), (2**20, 2**20))])
    assert s.size == 2**40 and s.contains((2**20, 0)) and not s.contains((1, 0))
    with pytest.raises(BoundExceeded):
        m.encode((1, 1))
    with pytest.raises(BoundExceeded):
        Modulus((2**63,))
