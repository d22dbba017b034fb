"""Prior-free and compromised posteriors, discrepancy reports, length leakage.

The conditional-only posterior ignores the message prior and renormalizes
P_M(E) over messages; the compromised posterior blends it with the prior.
:func:`discrepancy_report` puts these next to the exact Bayes posterior
and reports distances only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cryptosystem import (
    FiniteCryptosystem,
    bayes_posterior,
    cipher_distribution,
    cipher_given_message,
)
from .errors import (
    NoPlaintextOfObservedLength,
    UnknownLabel,
    UnreachableCiphertext,
    ZeroProbabilityCiphertext,
)
from .probability import Dist, as_prob, compromise, format_prob, total_variation

DEFAULT_WEIGHT = Fraction(1, 2)


def conditional_only_posterior(sys: FiniteCryptosystem, cipher: str) -> Dist:
    if cipher not in sys.ciphertexts:
        raise UnknownLabel("ciphertext", cipher)
    masses = [(m, cipher_given_message(sys, m)[cipher]) for m in sys.messages]
    total = sum((p for _, p in masses), Fraction(0))
    if total == 0:
        raise UnreachableCiphertext(cipher)
    return Dist((m, p / total) for m, p in masses)


def compromised_posterior(
    sys: FiniteCryptosystem, cipher: str, weight: Fraction | int | str = DEFAULT_WEIGHT
) -> Dist:
    """``weight * prior + (1 - weight) * conditional_only``."""
    return compromise(sys.prior, conditional_only_posterior(sys, cipher), weight)


@dataclass(frozen=True)
class DiscrepancyReport:
    cipher: str
    prior: Dist
    bayes: Dist
    conditional_only: Dist
    compromised: Dist
    weight: Fraction
    tv_bayes_vs_prior: Fraction
    tv_compromised_vs_prior: Fraction

    def to_json(self) -> dict:
        return {
            "cipher": self.cipher,
            "weight": format_prob(self.weight),
            "prior": self.prior.to_json(),
            "bayes": self.bayes.to_json(),
            "conditional_only": self.conditional_only.to_json(),
            "compromised": self.compromised.to_json(),
            "tv_bayes_vs_prior": format_prob(self.tv_bayes_vs_prior),
            "tv_compromised_vs_prior": format_prob(self.tv_compromised_vs_prior),
        }


def discrepancy_report(
    sys: FiniteCryptosystem, cipher: str, weight: Fraction | int | str = DEFAULT_WEIGHT
) -> DiscrepancyReport:
    if cipher not in sys.ciphertexts:
        raise UnknownLabel("ciphertext", cipher)
    if cipher_distribution(sys)[cipher] == 0:
        raise ZeroProbabilityCiphertext(cipher)
    w = as_prob(weight)
    bayes = bayes_posterior(sys, cipher)
    compromised = compromised_posterior(sys, cipher, w)
    return DiscrepancyReport(
        cipher=cipher,
        prior=sys.prior,
        bayes=bayes,
        conditional_only=conditional_only_posterior(sys, cipher),
        compromised=compromised,
        weight=w,
        tv_bayes_vs_prior=total_variation(bayes, sys.prior),
        tv_compromised_vs_prior=total_variation(compromised, sys.prior),
    )


class LengthPrior(Dist):
    """Prior over plaintext strings that may differ in length (length = number of characters)."""


def length_leakage_posterior(prior: Dist, observed_length: int) -> Dist:
    """Condition a plaintext prior on the ciphertext length.

    A length-preserving pad reveals the plaintext length, so every plaintext
    of another length drops to zero and the rest are rescaled.
    """
    if observed_length < 1:
        raise ValueError(f"observed_length must be >= 1, got {observed_length}")
    kept = sum((p for lab, p in prior.items() if len(lab) == observed_length), Fraction(0))
    if kept == 0:
        raise NoPlaintextOfObservedLength(observed_length)
    return Dist(
        (lab, p / kept if len(lab) == observed_length else Fraction(0)) for lab, p in prior.items()
    )


DEMO_LENGTH_PRIOR = LengthPrior([("0", Fraction(1, 2)), ("00", Fraction(1, 4)), ("11", Fraction(1, 4))])
