import math
import os
import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from sievelab import load_sieve, materialize
from sievelab.model import Sieve

sys.path.insert(0, os.path.dirname(__file__))

SIEVES = Path(__file__).resolve().parents[1] / "sieves"

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def sieve_file(name: str) -> Path:
    return SIEVES / f"{name}.sieve"


def load(name: str, L: int):
    return materialize(load_sieve(sieve_file(name)), L)


@pytest.fixture
def squarefree():
    return load_sieve(sieve_file("squarefree"))


def explicit(classes, k=1):
    """Sieve from ``[(modulus, residues)]`` with ints for k=1."""
    return Sieve.from_classes(k, classes)


def as_oracle(classes):
    """Same classes in the oracle's ``[(mod tuple, set of tuples)]`` form."""
    out = []
    for m, res in classes:
        mod = m if isinstance(m, tuple) else (m,)
        out.append((mod, {r if isinstance(r, tuple) else (r,) for r in res}))
    return out


@st.composite
def coprime_moduli(draw, max_mod=100, max_len=6):
    mods = []
    n = draw(st.integers(0, max_len))
    for _ in range(n):
        m = draw(st.integers(2, max_mod))
        if all(math.gcd(m, x) == 1 for x in mods):
            mods.append(m)
    return mods


@st.composite
def random_sieve_classes(draw, max_mod=100, max_len=6):
    """Pairwise-coprime explicit classes over Z, none of them full."""
    out = []
    for m in draw(coprime_moduli(max_mod, max_len)):
        res = draw(st.sets(st.integers(0, m - 1), max_size=min(m - 1, 8)))
        out.append((m, sorted(res)))
    return out
