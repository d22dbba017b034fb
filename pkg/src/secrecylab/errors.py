"""Exception hierarchy shared by all modules."""

from __future__ import annotations

from fractions import Fraction


class SecrecyLabError(ValueError):
    """Base class for every error raised by this package."""


class DuplicateLabel(SecrecyLabError):
    def __init__(self, label: str):
        super().__init__(f"duplicate label {label!r}")
        self.label = label


class NegativeProbability(SecrecyLabError):
    def __init__(self, label: str, value: Fraction):
        super().__init__(f"negative probability {value} for label {label!r}")
        self.label = label
        self.value = value


class NotNormalized(SecrecyLabError):
    """Masses do not sum to exactly 1; ``total`` carries the exact sum."""

    def __init__(self, total: Fraction):
        super().__init__(f"probabilities sum to {total.numerator}/{total.denominator}, not 1")
        self.total = total


class LabelMismatch(SecrecyLabError):
    pass


class WeightOutOfRange(SecrecyLabError):
    def __init__(self, weight: Fraction):
        super().__init__(f"weight {weight} is outside [0, 1]")
        self.weight = weight


class UnknownLabel(SecrecyLabError):
    def __init__(self, kind: str, label: str):
        super().__init__(f"unknown {kind} label {label!r}")
        self.kind = kind
        self.label = label


class SizeMismatch(SecrecyLabError):
    pass


class ZeroProbabilityCiphertext(SecrecyLabError):
    def __init__(self, cipher: str):
        super().__init__(f"ciphertext {cipher!r} has probability zero; posterior undefined")
        self.cipher = cipher


class UnreachableCiphertext(SecrecyLabError):
    def __init__(self, cipher: str):
        super().__init__(f"no message reaches ciphertext {cipher!r} under a positive-probability key")
        self.cipher = cipher


class NoPlaintextOfObservedLength(SecrecyLabError):
    def __init__(self, length: int):
        super().__init__(f"no plaintext of length {length} has positive prior mass")
        self.length = length


class EmptyEmpirical(SecrecyLabError):
    pass


class SpecError(SecrecyLabError):
    """Malformed cryptosystem spec file; ``where`` locates the problem."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
