"""Collatz single-even-term sequences, the compressed-radical measure on
abc triples, and Wieferich-prime hit generators."""

from .collatz import (
    CollatzTrace,
    NjElement,
    enumerate_nj,
    nj_decompose,
    nj_residues,
    t_step,
    trace,
    verify_parity_bijection,
)
from .dichotomy import (
    DichotomyRecord,
    ScanResult,
    scan,
    sharpness_report,
    statement1_holds,
    theorem_bound,
)
from .errors import InvariantViolation, ResourceGuardError
from .factorize import (
    BoundedFactorizer,
    Factorization,
    factor_bounded,
    is_probable_prime,
    primes_up_to,
    sieve_smallest_prime_factor,
)
from .ingest import (
    ScanSummary,
    brute_force_mu_hits,
    fit_power_law,
    parse_triples,
    scan_dataset,
)
from .lbh import (
    c_equal,
    comparison_bounds,
    entropy,
    lbh_check,
    miss_count,
    miss_count_grid,
)
from .mu import (
    MuInterval,
    TripleRecord,
    classify_triple,
    gain_of_factored,
    m_of,
    radical_of,
)
from .numeric import LogInterval, lcm_all, ln_nat, log2_nat, mod_inv_pow2, v3
from .wieferich import (
    WieferichFamilyItem,
    family_generate,
    is_wieferich,
    lang_formula,
    lemma_gain_bound,
    qk_family,
    refine_gain_bound,
    wieferich_search,
)

__version__ = "0.1.0"
