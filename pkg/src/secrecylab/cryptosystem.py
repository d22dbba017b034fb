"""Finite cryptosystems: encryption table, induced distributions, Bayes posterior."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import (
    SizeMismatch,
    LabelMismatch,
    UnknownLabel,
    ZeroProbabilityCiphertext,
)
from .probability import Dist, as_prob, format_prob


@dataclass(frozen=True)
class FiniteCryptosystem:
    """Messages, keys and ciphertexts plus the table ``(key, message) -> ciphertext``.

    Construction does not enforce the model invariants; :func:`validate`
    reports them, so malformed systems can still be built and inspected.
    """

    messages: tuple[str, ...]
    keys: tuple[str, ...]
    ciphertexts: tuple[str, ...]
    table: Mapping[tuple[str, str], str]
    key_dist: Dist
    prior: Dist

    def __post_init__(self) -> None:
        object.__setattr__(self, "messages", tuple(self.messages))
        object.__setattr__(self, "keys", tuple(self.keys))
        object.__setattr__(self, "ciphertexts", tuple(self.ciphertexts))
        object.__setattr__(self, "table", MappingProxyType(dict(self.table)))

    def with_prior(self, prior: Dist) -> "FiniteCryptosystem":
        return FiniteCryptosystem(
            self.messages, self.keys, self.ciphertexts, self.table, self.key_dist, prior
        )

    def with_key_dist(self, key_dist: Dist) -> "FiniteCryptosystem":
        return FiniteCryptosystem(
            self.messages, self.keys, self.ciphertexts, self.table, key_dist, self.prior
        )


@dataclass(frozen=True)
class Violation:
    """One broken model invariant, with the labels that witness it."""

    kind: str
    detail: Mapping[str, object] = field(default_factory=dict)
    severity: str = "error"

    def to_json(self) -> dict:
        return {"kind": self.kind, "severity": self.severity, **dict(self.detail)}

    def __str__(self) -> str:
        parts = ", ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"[{self.severity}] {self.kind}({parts})"


def validate(sys: FiniteCryptosystem) -> list[Violation]:
    """Return every violated invariant; zero-probability keys come back as warnings."""
    out: list[Violation] = []
    for kind, labels in (
        ("message", sys.messages),
        ("key", sys.keys),
        ("ciphertext", sys.ciphertexts),
    ):
        seen = set()
        for lab in labels:
            if lab in seen:
                out.append(Violation("DuplicateLabel", {"set": kind, "label": lab}))
            seen.add(lab)

    if set(sys.key_dist.labels) != set(sys.keys):
        out.append(
            Violation(
                "LabelMismatch",
                {
                    "field": "key_dist",
                    "missing": sorted(set(sys.keys) - set(sys.key_dist.labels)),
                    "extra": sorted(set(sys.key_dist.labels) - set(sys.keys)),
                },
            )
        )
    if set(sys.prior.labels) != set(sys.messages):
        out.append(
            Violation(
                "LabelMismatch",
                {
                    "field": "prior",
                    "missing": sorted(set(sys.messages) - set(sys.prior.labels)),
                    "extra": sorted(set(sys.prior.labels) - set(sys.messages)),
                },
            )
        )

    known_keys, known_msgs = set(sys.keys), set(sys.messages)
    for (k, m) in sys.table:
        if k not in known_keys or m not in known_msgs:
            out.append(Violation("UnknownTableEntry", {"key": k, "message": m}))

    cipher_set = set(sys.ciphertexts)
    produced: set[str] = set()
    for k in sys.keys:
        first_source: dict[str, str] = {}
        for m in sys.messages:
            c = sys.table.get((k, m))
            if c is None:
                out.append(Violation("MissingTableEntry", {"key": k, "message": m}))
                continue
            produced.add(c)
            if c not in cipher_set:
                out.append(
                    Violation("UnknownCiphertext", {"key": k, "message": m, "ciphertext": c})
                )
            if c in first_source:
                out.append(
                    Violation(
                        "NonInjectiveKey",
                        {"key": k, "message_a": first_source[c], "message_b": m, "ciphertext": c},
                    )
                )
            else:
                first_source[c] = m
    for c in sys.ciphertexts:
        if c not in produced:
            out.append(Violation("UnusedCiphertext", {"ciphertext": c}))

    for k, p in sys.key_dist.items():
        if p == 0:
            out.append(Violation("ZeroProbabilityKey", {"key": k}, severity="warning"))
    return out


def errors_only(violations: Iterable[Violation]) -> list[Violation]:
    return [v for v in violations if v.severity == "error"]


def _require(kind: str, label: str, pool: Sequence[str]) -> None:
    if label not in pool:
        raise UnknownLabel(kind, label)


def encrypt(sys: FiniteCryptosystem, key: str, msg: str) -> str:
    _require("key", key, sys.keys)
    _require("message", msg, sys.messages)
    try:
        return sys.table[(key, msg)]
    except KeyError:
        raise UnknownLabel("table entry", f"{key},{msg}") from None


def keys_mapping(sys: FiniteCryptosystem, msg: str, cipher: str) -> frozenset[str]:
    """Keys that send ``msg`` to ``cipher``."""
    _require("message", msg, sys.messages)
    _require("ciphertext", cipher, sys.ciphertexts)
    return frozenset(k for k in sys.keys if sys.table.get((k, msg)) == cipher)


def cipher_given_message(sys: FiniteCryptosystem, msg: str) -> Dist:
    """P_M(E): total key mass carrying ``msg`` to each ciphertext."""
    _require("message", msg, sys.messages)
    mass = {c: Fraction(0) for c in sys.ciphertexts}
    for k, p in sys.key_dist.items():
        mass[sys.table[(k, msg)]] += p
    return Dist(mass.items())


def cipher_distribution(sys: FiniteCryptosystem) -> Dist:
    """P(E) by the law of total probability over messages."""
    mass = {c: Fraction(0) for c in sys.ciphertexts}
    for m, pm in sys.prior.items():
        if pm == 0:
            continue
        for c, pc in cipher_given_message(sys, m).items():
            mass[c] += pm * pc
    return Dist(mass.items())


def bayes_posterior(sys: FiniteCryptosystem, cipher: str) -> Dist:
    _require("ciphertext", cipher, sys.ciphertexts)
    p_e = cipher_distribution(sys)[cipher]
    if p_e == 0:
        raise ZeroProbabilityCiphertext(cipher)
    return Dist(
        (m, pm * cipher_given_message(sys, m)[cipher] / p_e) for m, pm in sys.prior.items()
    )


@dataclass(frozen=True)
class PosteriorTable:
    """Posterior over messages for each ciphertext of positive probability."""

    rows: Mapping[str, Dist]

    def to_json(self) -> dict:
        return {c: d.to_json() for c, d in self.rows.items()}


def posterior_table(sys: FiniteCryptosystem) -> PosteriorTable:
    p_e = cipher_distribution(sys)
    rows = {c: bayes_posterior(sys, c) for c, p in p_e.items() if p > 0}
    return PosteriorTable(MappingProxyType(rows))


def _masses(arg, labels: Sequence[str], what: str) -> list[Fraction]:
    """Masses in ``labels`` order from either a Dist (matched by label) or a plain sequence."""
    if isinstance(arg, Dist):
        if len(arg) != len(labels):
            raise SizeMismatch(f"{what} has {len(arg)} entries, expected {len(labels)}")
        if set(arg.labels) != set(labels):
            raise LabelMismatch(f"{what} labels {list(arg.labels)} do not match {list(labels)}")
        return [arg[lab] for lab in labels]
    masses = [as_prob(p) for p in arg]
    if len(masses) != len(labels):
        raise SizeMismatch(f"{what} has {len(masses)} entries, expected {len(labels)}")
    return masses


def modular_shift_system(
    n: int,
    prior,
    key_dist,
    offset: int = 0,
    *,
    base: int = 0,
    message_prefix: str = "M",
    key_prefix: str = "K",
    cipher_prefix: str = "E",
) -> FiniteCryptosystem:
    """Shift cipher ``K_i M_j -> E_s`` with ``s = i + j + offset (mod n)``.

    Labels are numbered ``base .. base+n-1`` and residues are represented in
    that same range, so ``base=1, offset=-1`` reproduces the 1-indexed
    five-symbol figure (``K2, M3 -> E4``, ``K5, M1 -> E5``).

    ``prior`` and ``key_dist`` may be a :class:`Dist` over the generated
    labels or a plain sequence of masses in index order.
    """
    if n < 1:
        raise SizeMismatch(f"n must be >= 1, got {n}")
    idx = range(base, base + n)
    msgs = [f"{message_prefix}{i}" for i in idx]
    keys = [f"{key_prefix}{i}" for i in idx]
    ciphers = [f"{cipher_prefix}{i}" for i in idx]
    table = {}
    for i, k in zip(idx, keys):
        for j, m in zip(idx, msgs):
            s = (i + j + offset - base) % n + base
            table[(k, m)] = f"{cipher_prefix}{s}"
    return FiniteCryptosystem(
        msgs,
        keys,
        ciphers,
        table,
        Dist(zip(keys, _masses(key_dist, keys, "key_dist"))),
        Dist(zip(msgs, _masses(prior, msgs, "prior"))),
    )


def bitstrings(bits: int) -> list[str]:
    return [format(v, f"0{bits}b") for v in range(2**bits)]


def xor_pad_system(bits: int, prior, key_dist) -> FiniteCryptosystem:
    """One-time pad on ``bits``-bit strings: ciphertext = message XOR key."""
    if bits < 1:
        raise SizeMismatch(f"bits must be >= 1, got {bits}")
    labels = bitstrings(bits)
    table = {
        (k, m): format(int(k, 2) ^ int(m, 2), f"0{bits}b") for k in labels for m in labels
    }
    return FiniteCryptosystem(
        labels,
        labels,
        labels,
        table,
        Dist(zip(labels, _masses(key_dist, labels, "key_dist"))),
        Dist(zip(labels, _masses(prior, labels, "prior"))),
    )


def example1_system(key_dist=None) -> FiniteCryptosystem:
    """Single-bit pad with prior (9/10, 1/10); uniform keys unless given."""
    prior = [Fraction(9, 10), Fraction(1, 10)]
    if key_dist is None:
        key_dist = [Fraction(1, 2)] * 2
    return xor_pad_system(1, prior, key_dist)


def figure1_system(prior=None, key_dist=None) -> FiniteCryptosystem:
    """The five-symbol shift system ``s = i + j - 1 (mod 5)`` with 1-indexed labels."""
    uniform = [Fraction(1, 5)] * 5
    return modular_shift_system(
        5,
        uniform if prior is None else prior,
        uniform if key_dist is None else key_dist,
        offset=-1,
        base=1,
    )


# --- spec files -------------------------------------------------------------

def system_to_json(sys: FiniteCryptosystem) -> dict:
    return {
        "messages": [{"label": m, "prior": format_prob(sys.prior[m])} for m in sys.messages],
        "keys": [{"label": k, "prob": format_prob(sys.key_dist[k])} for k in sys.keys],
        "ciphertexts": list(sys.ciphertexts),
        "table": {k: {m: sys.table[(k, m)] for m in sys.messages} for k in sys.keys},
    }
