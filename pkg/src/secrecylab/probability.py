"""Exact rational probabilities and finite labeled distributions.

Every probability is a :class:`fractions.Fraction`; nothing in this module
touches floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    DuplicateLabel,
    LabelMismatch,
    NegativeProbability,
    NotNormalized,
    WeightOutOfRange,
)

Prob = Fraction

_RATIONAL_RE = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_prob(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction.

    Decimal notation is rejected on purpose: ``"0.9"`` is not exact input.
    """
    if not isinstance(text, str):
        raise ValueError(f"expected a 'p/q' string, got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational {text!r}; expected 'p/q'")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_prob(p: Fraction) -> str:
    """Render as ``"p/q"``; integers keep the ``/1`` so output is uniform."""
    p = Fraction(p)
    return f"{p.numerator}/{p.denominator}"


def as_prob(value: Fraction | int | str) -> Fraction:
    if isinstance(value, str):
        return parse_prob(value)
    if isinstance(value, float):
        raise TypeError("floating-point probabilities are not accepted; use Fraction or 'p/q'")
    return Fraction(value)


@dataclass(frozen=True)
class Dist:
    """A finite distribution over string labels whose masses sum to exactly 1.

    Entry order is preserved and used for every report.
    """

    entries: tuple[tuple[str, Fraction], ...]

    def __init__(self, entries: Iterable[tuple[str, Fraction | int | str]]):
        seen: set[str] = set()
        cleaned = []
        total = Fraction(0)
        for label, p in entries:
            label = str(label)
            if label in seen:
                raise DuplicateLabel(label)
            seen.add(label)
            p = as_prob(p)
            if p < 0:
                raise NegativeProbability(label, p)
            total += p
            cleaned.append((label, p))
        if total != 1:
            raise NotNormalized(total)
        object.__setattr__(self, "entries", tuple(cleaned))
        object.__setattr__(self, "_index", {lab: p for lab, p in cleaned})

    @classmethod
    def uniform(cls, labels: Iterable[str]) -> "Dist":
        labels = list(labels)
        if not labels:
            raise NotNormalized(Fraction(0))
        share = Fraction(1, len(labels))
        return cls((lab, share) for lab in labels)

    @classmethod
    def point(cls, labels: Iterable[str], at: str) -> "Dist":
        labels = list(labels)
        if at not in labels:
            raise LabelMismatch(f"point-mass label {at!r} not among {labels}")
        return cls((lab, Fraction(int(lab == at))) for lab in labels)

    @classmethod
    def from_mapping(cls, masses: Mapping[str, Fraction | int | str]) -> "Dist":
        return cls(masses.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dist):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __getitem__(self, label: str) -> Fraction:
        return self._index[label]  # type: ignore[attr-defined]

    def get(self, label: str, default: Fraction | None = None) -> Fraction | None:
        return self._index.get(label, default)  # type: ignore[attr-defined]

    def __contains__(self, label: object) -> bool:
        return label in self._index  # type: ignore[attr-defined]

    def __iter__(self) -> Iterator[str]:
        return (lab for lab, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.entries)

    @property
    def probs(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.entries)

    def items(self) -> tuple[tuple[str, Fraction], ...]:
        return self.entries

    def support(self) -> tuple[str, ...]:
        return tuple(lab for lab, p in self.entries if p > 0)

    def same_masses(self, other: "Dist") -> bool:
        """Equal as distributions, ignoring entry order."""
        return set(self.labels) == set(other.labels) and all(
            other[lab] == p for lab, p in self.entries
        )

    def to_json(self) -> dict[str, str]:
        return {lab: format_prob(p) for lab, p in self.entries}

    def __repr__(self) -> str:
        inner = ", ".join(f"{lab!r}: {format_prob(p)}" for lab, p in self.entries)
        return f"Dist({{{inner}}})"


def dist_new(entries: Sequence[tuple[str, Fraction | int | str]]) -> Dist:
    return Dist(entries)


def _check_shared_labels(d1: Dist, d2: Dist) -> None:
    if set(d1.labels) != set(d2.labels) or len(d1) != len(d2):
        raise LabelMismatch(f"label sets differ: {list(d1.labels)} vs {list(d2.labels)}")


def total_variation(d1: Dist, d2: Dist) -> Fraction:
    """Half the L1 distance between two distributions on the same labels."""
    _check_shared_labels(d1, d2)
    return sum((abs(p - d2[lab]) for lab, p in d1.items()), Fraction(0)) / 2


def compromise(d1: Dist, d2: Dist, weight: Fraction | int | str) -> Dist:
    """Convex blend ``weight*d1 + (1-weight)*d2``, labeled in d1's order.

    Each output mass lies between the two input masses for that label, and
    the result is normalized by construction.
    """
    _check_shared_labels(d1, d2)
    w = as_prob(weight)
    if not 0 <= w <= 1:
        raise WeightOutOfRange(w)
    return Dist((lab, w * p + (1 - w) * d2[lab]) for lab, p in d1.items())
