import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import as_oracle, explicit, load, random_sieve_classes, sieve_file
from oracles import first_index, first_primes, is_squarefree
from sievelab import (
    Window,
    empirical_density,
    enumerate_free,
    is_admissible,
    level_for_primes,
    load_sieve,
    materialize,
    parse_sieve,
    pattern_count,
    product_density,
    tails_profile,
)
from sievelab.model import SieveSpec

PLUSMINUS = "ring Z\nstream P = primes\nfamily i in 1..: modulus P(i)^2 residues {-i, i}"


def squarefree_upto(pmax):
    spec = load_sieve(sieve_file("squarefree"))
    return materialize(spec, level_for_primes(spec, pmax))


def test_squarefree_window():
    rep = enumerate_free(squarefree_upto(31), Window.interval(1, 30))
    want = [1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30]
    assert rep.free_points()[:, 0].tolist() == want
    assert want == [n for n in range(1, 31) if is_squarefree(n)]


def test_empty_sieve_all_free():
    rep = enumerate_free(materialize(SieveSpec(), 0), Window.interval(1, 10))
    assert rep.count == 10


def test_carefree_box():
    spec = load_sieve(sieve_file("carefree"))
    s = materialize(spec, level_for_primes(spec, 7))
    free = {tuple(p) for p in enumerate_free(s, Window.box((1, 1), (10, 10))).free_points().tolist()}
    want = {(x, y) for x in range(1, 11) for y in range(1, 11) if math.gcd(x, y) == 1 and is_squarefree(x)}
    assert free == want


def test_density_single_class():
    s = explicit([(2, [0])])
    ((N, d),) = empirical_density(s, "interval1", [10**6])
    assert abs(d - 0.5) <= 1e-6
    b = product_density(s)
    assert b.lower == b.upper == 0.5 and b.exact


def test_plusminus_density_decreases():
    spec = parse_sieve(PLUSMINUS)
    ratios = [empirical_density(materialize(spec, L), "interval1", [10**5])[0][1] for L in (5, 50, 500)]
    assert ratios[0] > ratios[1] > ratios[2]


def test_product_density_squarefree_p13():
    b = product_density(squarefree_upto(13), exact=True)
    want = math.prod(1 - 1 / p**2 for p in (2, 3, 5, 7, 11, 13))
    assert abs(b.upper - want) < 1e-12 and abs(b.upper - 0.61808) < 1e-5
    assert b.lower < b.upper


def test_carefree_bracket_converges():
    spec = load_sieve(sieve_file("carefree"))
    s = materialize(spec, level_for_primes(spec, 10**4))
    b = product_density(s)
    want = math.prod(1 - (2 * p - 1) / p**3 for p in first_primes(78498))
    assert b.lower <= want <= b.upper + 1e-9
    assert abs(b.midpoint - 0.4282) < 1e-3


def test_strong_tail_decreases():
    spec = load_sieve(sieve_file("squarefree"))
    s = materialize(spec, level_for_primes(spec, 1000))
    L100 = level_for_primes(spec, 100)
    w = Window.interval(1, 10**6)
    rows = tails_profile(s, w, [L100, s.L])
    # oracle: integers divisible by p^2 for some p in the band (100, 1000]
    x = np.arange(1, 10**6 + 1)
    hit = np.zeros(10**6, dtype=bool)
    for p in first_primes(168)[25:]:
        hit |= x % (p * p) == 0
    assert rows[0].strong == int(hit.sum())
    assert rows[0].strong_ratio > rows[1].strong_ratio == 0


def test_tails_empty_sieve():
    s = materialize(SieveSpec(), 0)
    (row,) = tails_profile(s, Window.interval(1, 100), [0])
    assert row.weak == row.strong == 0


def test_admissible_examples():
    xo = load_sieve(sieve_file("x_neq_omega"))
    assert str(is_admissible([2, 4], materialize(xo, 5))) == "Admissible"
    both = parse_sieve("ring Z\nstream P = primes\nfamily i in 1..: modulus P(i)^2 residues {0, 1} bound 2")
    v = is_admissible([0, 2], materialize(both, 5))
    assert str(v) == "NotAdmissible(1)"
    assert str(is_admissible([], materialize(both, 5))) == "Admissible"


def test_ten_odd_numbers_not_admissible():
    # -A mod 9 covers every residue for A = the first ten odd numbers
    v = is_admissible([2 * j + 1 for j in range(10)], squarefree_upto(10))
    assert str(v) == "NotAdmissible(2)"


def test_pattern_examples():
    s = squarefree_upto(1000)
    w = Window.interval(1, 10**5)
    assert pattern_count([0], [], s, w)[0] == enumerate_free(s, w).count
    _, ratio = pattern_count([0, 1, 2, 3], [], squarefree_upto(10**3), w)
    # four consecutive integers always contain a multiple of 4
    assert ratio == 0
    _, ratio = pattern_count([0, 1, 2], [], s, w)
    # mod 4 three of the four residues are hit, every other p^2 loses exactly three
    pred = 0.25 * math.prod(1 - 3 / p**2 for p in first_primes(168)[1:])
    assert abs(ratio - pred) < 0.01
    xo = materialize(load_sieve(sieve_file("x_neq_omega")), 200)
    assert pattern_count([2, 4], [3], xo, Window.interval(-5000, 5000))[0] == 0


# -- properties ---------------------------------------------------------------


@st.composite
def sieve_and_window(draw, max_mod=100):
    classes = draw(random_sieve_classes(max_mod))
    lo = draw(st.integers(-5000, 5000))
    size = draw(st.integers(1, 10**4))
    return classes, Window.interval(lo, lo + size - 1)


@given(sieve_and_window())
def test_enumerate_matches_brute_force(case):
    classes, w = case
    rep = enumerate_free(explicit(classes), w)
    orc = as_oracle(classes)
    want = [first_index((x,), orc) for x in range(w.lows[0], w.highs[0] + 1)]
    assert rep.excluded_by.tolist() == want


@given(sieve_and_window(max_mod=40))
def test_free_antitone_and_tails_nested(case):
    classes, w = case
    s = explicit(classes)
    prev = None
    for L in range(s.L + 1):
        f = enumerate_free(s.prefix(L), w).free
        if prev is not None:
            assert not (f & ~prev).any()
        prev = f
    rows = tails_profile(s, w, list(range(s.L + 1)))
    assert all(a.weak >= b.weak and a.strong >= b.strong for a, b in zip(rows, rows[1:]))


@given(st.integers(0, 60))
def test_product_upper_nonincreasing(L):
    spec = parse_sieve(PLUSMINUS)
    assert product_density(materialize(spec, L + 1)).upper <= product_density(materialize(spec, L)).upper


@given(random_sieve_classes(max_mod=30), st.sets(st.integers(-20, 20), min_size=1, max_size=5))
def test_not_admissible_means_no_occurrence(classes, A):
    s = explicit(classes)
    v = is_admissible(sorted(A), s)
    if v.kind == "NotAdmissible":
        assert pattern_count(sorted(A), [], s.prefix(v.index), Window.interval(-3000, 3000))[0] == 0


def test_box_window_2d_oracle():
    s = load("strongly_carefree", 4)
    w = Window.box((-6, -6), (6, 6))
    rep = enumerate_free(s, w)
    ps = first_primes(4)

    def idx(x, y):
        # strongly carefree: p | gcd(x, y), p^2 | x or p^2 | y
        hits = [i for i, p in enumerate(ps, 1) if (x % p == 0 and y % p == 0) or x % (p * p) == 0 or y % (p * p) == 0]
        return hits[0] if hits else 0

    want = np.array([[idx(x, y) for y in range(-6, 7)] for x in range(-6, 7)])
    assert (rep.excluded_by == want).all()
