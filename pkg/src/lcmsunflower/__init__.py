"""LCM-free sets of integers and sunflower-free set families.

Exact solvers for f_k(N) and F_k(n), the bucket and family-encoding
constructions, and the harmonic-sum estimates they rest on.
"""

from .capacity import CapacityResult, capacity_lower_estimate, known_bounds, max_sunflower_free, verify_witness
from .constructions import (
    ConstructionReport,
    WeightedGroundSet,
    ck,
    esym,
    exponent_g,
    greedy_buckets,
    harmonic_measure_identity,
    optimal_B,
    asymptotic_parameters,
    product_measure,
    tail_harmonic_bound,
    thm12_construction,
    thm15_construction,
    weighted_cosunflower_pipeline,
    weighted_partition,
)
from .errors import (
    DomainError,
    GroundSetOverflowError,
    InvalidInputError,
    LcmSunflowerError,
    OutOfRangeError,
    ResourceLimitError,
    ShortfallError,
)
from .harmonic import A_ell, G_constant, H_ell, euler_majorant, omega_sieve, sathe_selberg_main_term, z_omega_sum
from .lcmfree import FkResult, LcmInstance, exact_fk, find_lcm_k_tuple, is_lcm_k_free, representation_family
from .primes import PrimeTable, prime_harmonic_sum, sieve_primes
from .setfam import (
    Blocks,
    SetFamily,
    blow_up,
    complement_family,
    find_k_cosunflower,
    find_k_sunflower,
    is_cosunflower,
    is_sunflower,
    tensor_power,
)

__version__ = "0.1.0"
