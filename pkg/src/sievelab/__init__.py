"""Erdős sieves over Z^k: free sets, densities, structure, Mirsky measures,
polynomial sieves and ergodic averages."""

from .analysis import (
    BracketedValue,
    Window,
    empirical_density,
    enumerate_free,
    is_admissible,
    pattern_count,
    product_density,
    tails_profile,
)
from .dsl import format_sieve, load_sieve, parse_sieve
from .dynamics import (
    Pattern,
    cylinder_measure,
    mirsky_sample,
    sample_shifted_sieves,
    spectrum,
    verify_certificate,
    xr_window_test,
)
from .errors import DslError, SieveError
from .model import Sieve, SieveSpec, erdos_partial, level_for_primes, materialize
from .polysieve import (
    IntPolynomial,
    build_poly_sieve,
    count_lfree_values,
    multi_poly_density,
    poly_roots_mod,
    resultant,
    rho,
)
from .pnt import FiniteRotation, besicovitch_error, ergodic_average, omega_table
from .residue import Modulus, ResidueClassSet, crt_solve, moduli_coprime, modulus_divisors, modulus_norm
from .structure import (
    check_equivalent,
    contract_sieve,
    lambda_profile,
    min_gap,
    minimal_class,
    stabilizer,
    union_sieves,
)

__version__ = "0.1.0"
