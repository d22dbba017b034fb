"""Exact laboratory for perfect-secrecy questions about finite cryptosystems."""

from .probability import Dist, Prob, compromise, dist_new, format_prob, parse_prob, total_variation
from .cryptosystem import (
    FiniteCryptosystem,
    PosteriorTable,
    bayes_posterior,
    cipher_distribution,
    cipher_given_message,
    encrypt,
    example1_system,
    figure1_system,
    keys_mapping,
    modular_shift_system,
    posterior_table,
    validate,
    xor_pad_system,
)
from .secrecy import (
    SecrecyReport,
    check_key_count_bound,
    check_posterior_definition,
    check_theorem1,
    classify_perfect_system,
    is_latin_square,
)
from .analysis import (
    DiscrepancyReport,
    LengthPrior,
    compromised_posterior,
    conditional_only_posterior,
    discrepancy_report,
    length_leakage_posterior,
)
from .oracle import EmpiricalDist, agreement, simulate_cipher_dist, simulate_posterior

__version__ = "0.1.0"
