"""Perfect-secrecy checkers with concrete witnesses.

Each checker returns a :class:`SecrecyReport`.  Witnesses carry the exact
probabilities that disagree, so any of them can be re-derived from the
system.  Witness order is (message index, ciphertext index).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Union

from .cryptosystem import (
    FiniteCryptosystem,
    bayes_posterior,
    cipher_distribution,
    cipher_given_message,
)
from .probability import format_prob


class Criterion(str, Enum):
    POSTERIOR_DEFINITION = "PosteriorDefinition"
    THEOREM1 = "Theorem1"
    KEY_COUNT_BOUND = "KeyCountBound"
    LATIN_SQUARE = "LatinSquare"


@dataclass(frozen=True)
class ProbabilityWitness:
    """Two exact probabilities that should agree for message/ciphertext (m, e) but don't.

    ``observed_name``/``expected_name`` say which quantities they are, e.g.
    ``posterior``/``prior`` or ``P_M(E)``/``P(E)``.
    """

    message: str
    cipher: str
    observed: Fraction
    expected: Fraction
    observed_name: str
    expected_name: str

    def to_json(self) -> dict:
        return {
            "kind": "UnequalProbabilities",
            "message": self.message,
            "cipher": self.cipher,
            self.observed_name: format_prob(self.observed),
            self.expected_name: format_prob(self.expected),
        }


@dataclass(frozen=True)
class KeyCountWitness:
    positive_keys: int
    messages: int

    def to_json(self) -> dict:
        return {"kind": "TooFewKeys", "positive_keys": self.positive_keys, "messages": self.messages}


@dataclass(frozen=True)
class ShapeMismatchWitness:
    messages: int
    keys: int
    ciphertexts: int

    def to_json(self) -> dict:
        return {
            "kind": "ShapeMismatch",
            "messages": self.messages,
            "keys": self.keys,
            "ciphertexts": self.ciphertexts,
        }


@dataclass(frozen=True)
class DuplicateCellWitness:
    """``cipher`` occurs more than once along one row (fixed key) or column (fixed message)."""

    axis: str  # "key" or "message"
    fixed: str
    cipher: str
    at: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "kind": "DuplicateCell",
            "axis": self.axis,
            "fixed": self.fixed,
            "cipher": self.cipher,
            "at": list(self.at),
        }


@dataclass(frozen=True)
class MissingCellWitness:
    """A ciphertext that never appears in some row or column (or a cell outside the ciphertext set)."""

    axis: str
    fixed: str
    cipher: str

    def to_json(self) -> dict:
        return {"kind": "MissingCell", "axis": self.axis, "fixed": self.fixed, "cipher": self.cipher}


Witness = Union[
    ProbabilityWitness, KeyCountWitness, ShapeMismatchWitness, DuplicateCellWitness, MissingCellWitness
]


@dataclass(frozen=True)
class SecrecyReport:
    criterion: Criterion
    witnesses: tuple[Witness, ...] = ()
    skipped: tuple[dict, ...] = ()

    @property
    def verdict(self) -> bool:
        return not self.witnesses

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion.value,
            "verdict": self.verdict,
            "witnesses": [w.to_json() for w in self.witnesses],
            "skipped": [dict(s) for s in self.skipped],
        }


def check_posterior_definition(sys: FiniteCryptosystem) -> SecrecyReport:
    """Posterior equals prior for every possible ciphertext.

    Messages of prior zero and ciphertexts of probability zero are left out
    and listed in ``skipped``.
    """
    p_e = cipher_distribution(sys)
    skipped = [{"reason": "zero_prior_message", "label": m} for m in sys.messages if sys.prior[m] == 0]
    live_ciphers = []
    for e in sys.ciphertexts:
        if p_e[e] == 0:
            skipped.append({"reason": "zero_probability_ciphertext", "label": e})
        else:
            live_ciphers.append(e)
    posteriors = {e: bayes_posterior(sys, e) for e in live_ciphers}

    witnesses = []
    for m in sys.messages:
        prior_m = sys.prior[m]
        if prior_m == 0:
            continue
        for e in live_ciphers:
            post = posteriors[e][m]
            if post != prior_m:
                witnesses.append(ProbabilityWitness(m, e, post, prior_m, "posterior", "prior"))
    return SecrecyReport(Criterion.POSTERIOR_DEFINITION, tuple(witnesses), tuple(skipped))


def check_theorem1(sys: FiniteCryptosystem) -> SecrecyReport:
    """P_M(E) == P(E) for every message and ciphertext."""
    p_e = cipher_distribution(sys)
    witnesses = []
    for m in sys.messages:
        cond = cipher_given_message(sys, m)
        for e in sys.ciphertexts:
            if cond[e] != p_e[e]:
                witnesses.append(ProbabilityWitness(m, e, cond[e], p_e[e], "P_M(E)", "P(E)"))
    return SecrecyReport(Criterion.THEOREM1, tuple(witnesses))


def check_key_count_bound(sys: FiniteCryptosystem) -> SecrecyReport:
    """Necessary (not sufficient) condition: at least as many usable keys as messages."""
    positive = sum(1 for p in sys.key_dist.probs if p > 0)
    witnesses = () if positive >= len(sys.messages) else (KeyCountWitness(positive, len(sys.messages)),)
    return SecrecyReport(Criterion.KEY_COUNT_BOUND, witnesses)


def is_latin_square(sys: FiniteCryptosystem) -> SecrecyReport:
    n_m, n_k, n_c = len(sys.messages), len(sys.keys), len(sys.ciphertexts)
    if not n_m == n_k == n_c:
        return SecrecyReport(Criterion.LATIN_SQUARE, (ShapeMismatchWitness(n_m, n_k, n_c),))

    witnesses: list[Witness] = []

    def scan(axis: str, fixed: str, cells: list[tuple[str, str | None]]) -> None:
        where: dict[str, list[str]] = {}
        for other, c in cells:
            if c is not None:
                where.setdefault(c, []).append(other)
        for e in sys.ciphertexts:
            hits = where.get(e, [])
            if len(hits) > 1:
                witnesses.append(DuplicateCellWitness(axis, fixed, e, tuple(hits)))
            elif not hits:
                witnesses.append(MissingCellWitness(axis, fixed, e))

    # columns first so witnesses follow message order
    for m in sys.messages:
        scan("message", m, [(k, sys.table.get((k, m))) for k in sys.keys])
    for k in sys.keys:
        scan("key", k, [(m, sys.table.get((k, m))) for m in sys.messages])
    return SecrecyReport(Criterion.LATIN_SQUARE, tuple(witnesses))


def keys_uniform(sys: FiniteCryptosystem) -> bool:
    return len(set(sys.key_dist.probs)) == 1


@dataclass(frozen=True)
class PerfectSystemSummary:
    latin_square: bool
    keys_uniform: bool
    theorem1_holds: bool

    def to_json(self) -> dict:
        return {
            "latin_square": self.latin_square,
            "keys_uniform": self.keys_uniform,
            "theorem1_holds": self.theorem1_holds,
        }


def classify_perfect_system(sys: FiniteCryptosystem) -> PerfectSystemSummary:
    return PerfectSystemSummary(
        latin_square=is_latin_square(sys).verdict,
        keys_uniform=keys_uniform(sys),
        theorem1_holds=check_theorem1(sys).verdict,
    )


CHECKS = {
    "definition": check_posterior_definition,
    "theorem1": check_theorem1,
    "keycount": check_key_count_bound,
    "latin": is_latin_square,
}
