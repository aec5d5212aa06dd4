from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import random_sieve_classes, sieve_file
from oracles import first_primes
from sievelab import erdos_partial, format_sieve, load_sieve, materialize, parse_sieve
from sievelab.errors import CoprimalityViolation, DslError, StreamExhausted
from sievelab.model import SieveSpec

SQUAREFREE = "ring Z\nstream P = primes\nfamily i in 1..: modulus P(i)^2 residues {0}"
PLUSMINUS = "ring Z\nstream P = primes\nfamily i in 1..: modulus P(i)^2 residues {-i, i}"


def test_parse_squarefree():
    s = materialize(parse_sieve(SQUAREFREE), 4)
    assert [c.modulus.components for c in s] == [(4,), (9,), (25,), (49,)]
    assert all(c.residues.residues_int() == [0] for c in s)


def test_single_class_and_full_class():
    spec = parse_sieve("ring Z\nclass modulus 4 residues {0,2}")
    assert materialize(spec, 1)[1].residues.residues_int() == [0, 2]
    with pytest.raises(DslError) as e:
        parse_sieve("ring Z\nclass modulus 4 residues {0,1,2,3}")
    assert e.value.reason == "FullClass"


def test_syntax_error_has_position():
    with pytest.raises(DslError) as e:
        parse_sieve("ring Z\nclass modulus 4 residues {0,")
    assert e.value.line == 2


def test_coprimality_violation():
    spec = parse_sieve("ring Z\nclass modulus 2 residues {0}\nclass modulus 4 residues {1}")
    with pytest.raises(CoprimalityViolation) as e:
        materialize(spec, 2)
    assert e.value.pair == (1, 2)


def test_stream_exhausted():
    spec = parse_sieve("ring Z\nclass modulus 3 residues {0}")
    with pytest.raises(StreamExhausted):
        materialize(spec, 2)


def test_carefree_moduli():
    s = materialize(load_sieve(sieve_file("carefree")), 3)
    assert [c.modulus.components for c in s] == [(4, 2), (9, 3), (25, 5)]
    # mod (p^2, p): p residues with x = 0, p with x = 0 mod p and y = 0, one shared
    assert [c.residues.size for c in s] == [2 * p - 1 for p in (2, 3, 5)]


def test_erdos_partial_squarefree():
    partial, tail = erdos_partial(parse_sieve(SQUAREFREE), 2)
    assert partial == Fraction(13, 36)
    assert tail is not None and tail <= Fraction(1, 3)
    true_tail = sum(1.0 / (p * p) for p in first_primes(10**5)[2:])
    assert float(tail) >= true_tail


def test_erdos_partial_plusminus():
    spec = parse_sieve(PLUSMINUS)
    partial, tail = erdos_partial(spec, 10)
    ps = first_primes(10)
    # i = 1 at p = 2: {-1, 1} mod 4 has two residues; all later classes too
    assert partial == sum(Fraction(2, p * p) for p in ps)
    assert tail is not None


def test_empty_spec():
    assert erdos_partial(SieveSpec(), 0) == (0, 0)


@pytest.mark.parametrize("name", ["squarefree", "carefree", "strongly_carefree", "asymmetric",
                                  "x_neq_omega", "shared_index", "coset_dilation"])
def test_roundtrip_files(name):
    spec = load_sieve(sieve_file(name))
    again = parse_sieve(format_sieve(spec))
    assert format_sieve(again) == format_sieve(spec)
    assert materialize(again, 6).classes == materialize(spec, 6).classes


@given(random_sieve_classes())
def test_roundtrip_explicit(classes):
    spec = SieveSpec.from_classes(1, classes)
    text = format_sieve(spec)
    assert format_sieve(parse_sieve(text)) == text


@given(st.integers(0, 30))
def test_prefix_stability(L):
    spec = parse_sieve(PLUSMINUS)
    a, b = materialize(spec, L), materialize(spec, L + 1)
    assert b.classes[:L] == a.classes and b.L == L + 1


def test_partial_monotone_and_total_nonincreasing():
    spec = parse_sieve(PLUSMINUS)
    prev_p, prev_t = Fraction(-1), None
    for L in range(0, 40):
        p, t = erdos_partial(spec, L)
        assert p >= prev_p
        if prev_t is not None:
            assert p + t <= prev_t
        prev_p, prev_t = p, p + t
