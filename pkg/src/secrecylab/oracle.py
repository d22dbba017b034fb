"""Monte Carlo oracle: sample (message, key), encrypt, count.

This path never evaluates Bayes' rule.  P(E) is estimated by counting
ciphertexts; P_E(M) by rejection (keep a trial only if it produced the
target ciphertext).

Random numbers come from the counter-based Philox4x64-10 generator.  Trial
``i`` on attempt ``a`` reads the 4-word block at counter ``i`` of the stream
keyed by ``seed + 2**64 * a``.  Words 0-1 drive the message draw, words 2-3
the key draw.  A draw is an exact uniform integer ``u`` in ``[0, D)`` with
``D`` the common denominator of the distribution, obtained by rejection
from 64- (or 128-) bit words; a rejected draw moves to the next attempt for
that trial only.  The outcome is the first index whose cumulative
numerator exceeds ``u``.  Counts therefore depend only on
``(system, trials, seed)``, not on chunking or thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Mapping

import numpy as np

from .cryptosystem import FiniteCryptosystem
from .errors import EmptyEmpirical, LabelMismatch, UnknownLabel
from .probability import Dist, format_prob

GENERATOR = "philox4x64-10:key=seed+2^64*attempt:block=trial"
DEFAULT_CHUNK = 1 << 16
_TWO64 = 1 << 64
_TWO128 = 1 << 128


@dataclass(frozen=True)
class EmpiricalDist:
    labels: tuple[str, ...]
    counts: Mapping[str, int]
    trials_total: int
    trials_kept: int
    seed: int
    generator: str = GENERATOR

    def frequency(self, label: str) -> Fraction:
        if self.trials_kept == 0:
            raise EmptyEmpirical("no trials were kept")
        return Fraction(self.counts[label], self.trials_kept)

    def to_json(self) -> dict:
        return {
            "counts": {lab: self.counts[lab] for lab in self.labels},
            "trials_total": self.trials_total,
            "trials_kept": self.trials_kept,
            "seed": self.seed,
            "generator": self.generator,
        }


class _Sampler:
    """Exact inverse-CDF sampler for one rational distribution."""

    def __init__(self, probs: tuple[Fraction, ...]):
        self.denominator = math.lcm(*(p.denominator for p in probs))
        if self.denominator > _TWO128:
            raise ValueError("common denominator exceeds 2**128; not supported by the oracle")
        running, cum = 0, []
        for p in probs:
            running += p.numerator * (self.denominator // p.denominator)
            cum.append(running)
        self.cum = cum
        self.wide = self.denominator >= _TWO64
        space = _TWO128 if self.wide else _TWO64
        # draws >= limit are rejected so that u = raw % D is exactly uniform
        self.limit = space - space % self.denominator

    def from_words(self, hi: int, lo: int) -> int | None:
        raw = (hi << 64) | lo if self.wide else hi
        if raw >= self.limit:
            return None
        u = raw % self.denominator
        # bisect over python ints; len(cum) is small
        for idx, c in enumerate(self.cum):
            if u < c:
                return idx
        raise AssertionError("cumulative masses must end at the denominator")

    def vector(self, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Indices for a batch of narrow draws plus a mask of rejected positions."""
        if self.limit >= _TWO64:
            ok = np.ones(hi.shape, dtype=bool)
        else:
            ok = hi < np.uint64(self.limit)
        u = hi % np.uint64(self.denominator)
        cum = np.array(self.cum, dtype=np.uint64)
        idx = np.searchsorted(cum, u, side="right")
        return idx, ~ok


def _block(seed: int, attempt: int, trial: int) -> np.ndarray:
    bg = np.random.Philox(key=seed + (attempt << 64))
    bg.advance(trial)
    return bg.random_raw(4)


def _draw_scalar(sampler: _Sampler, seed: int, trial: int, word: int, first_attempt: int) -> int:
    attempt = first_attempt
    while True:
        blk = _block(seed, attempt, trial)
        idx = sampler.from_words(int(blk[word]), int(blk[word + 1]))
        if idx is not None:
            return idx
        attempt += 1


def _sample_chunk(
    msg_sampler: _Sampler, key_sampler: _Sampler, seed: int, start: int, n: int
) -> tuple[np.ndarray, np.ndarray]:
    bg = np.random.Philox(key=seed)
    bg.advance(start)
    raw = bg.random_raw(4 * n).reshape(n, 4)
    out = []
    for sampler, word in ((msg_sampler, 0), (key_sampler, 2)):
        if sampler.wide:
            idx = np.empty(n, dtype=np.int64)
            for t in range(n):
                got = sampler.from_words(int(raw[t, word]), int(raw[t, word + 1]))
                idx[t] = got if got is not None else _draw_scalar(sampler, seed, start + t, word, 1)
        else:
            idx, rejected = sampler.vector(raw[:, word])
            idx = idx.astype(np.int64)
            for t in np.flatnonzero(rejected):
                idx[t] = _draw_scalar(sampler, seed, start + int(t), word, 1)
        out.append(idx)
    return out[0], out[1]


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _TWO64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def _run(sys: FiniteCryptosystem, trials: int, seed: int, chunk: int, workers: int, reduce):
    """Sample all trials in chunks and sum the per-chunk count vectors from ``reduce``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seed = _check_seed(seed)
    msg_sampler = _Sampler(tuple(sys.prior[m] for m in sys.messages))
    key_sampler = _Sampler(tuple(sys.key_dist[k] for k in sys.keys))
    cipher_pos = {c: i for i, c in enumerate(sys.ciphertexts)}
    table = np.array(
        [[cipher_pos[sys.table[(k, m)]] for m in sys.messages] for k in sys.keys], dtype=np.int64
    )

    def job(start: int):
        n = min(chunk, trials - start)
        mi, ki = _sample_chunk(msg_sampler, key_sampler, seed, start, n)
        return reduce(mi, table[ki, mi])

    starts = range(0, trials, chunk)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, starts))
    else:
        parts = [job(s) for s in starts]
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


def simulate_cipher_dist(
    sys: FiniteCryptosystem,
    trials: int,
    seed: int = 0,
    *,
    chunk: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> EmpiricalDist:
    n_c = len(sys.ciphertexts)
    counts = _run(sys, trials, seed, chunk, workers, lambda mi, ci: np.bincount(ci, minlength=n_c))
    return EmpiricalDist(
        labels=sys.ciphertexts,
        counts={c: int(v) for c, v in zip(sys.ciphertexts, counts)},
        trials_total=trials,
        trials_kept=trials,
        seed=int(seed),
    )


def simulate_posterior(
    sys: FiniteCryptosystem,
    cipher: str,
    trials: int,
    seed: int = 0,
    *,
    chunk: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> EmpiricalDist:
    if cipher not in sys.ciphertexts:
        raise UnknownLabel("ciphertext", cipher)
    target = sys.ciphertexts.index(cipher)
    n_m = len(sys.messages)
    counts = _run(
        sys, trials, seed, chunk, workers,
        lambda mi, ci: np.bincount(mi[ci == target], minlength=n_m),
    )
    counts = {m: int(v) for m, v in zip(sys.messages, counts)}
    return EmpiricalDist(
        labels=sys.messages,
        counts=counts,
        trials_total=trials,
        trials_kept=sum(counts.values()),
        seed=int(seed),
    )


def parse_tolerance(tol) -> Fraction:
    if isinstance(tol, Fraction):
        return tol
    if isinstance(tol, float):
        return Fraction(Decimal(repr(tol)))
    return Fraction(Decimal(str(tol)))


@dataclass(frozen=True)
class Agreement:
    ok: bool
    label: str
    deviation: Fraction
    tolerance: Fraction

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "label": self.label,
            "max_deviation": format_prob(self.deviation),
            "tolerance": format_prob(self.tolerance),
        }


def agreement(exact: Dist, empirical: EmpiricalDist, tolerance) -> Agreement:
    """Largest |exact - frequency| over labels, compared to ``tolerance`` (exactly)."""
    if empirical.trials_kept == 0:
        raise EmptyEmpirical("no trials were kept; nothing to compare")
    if set(exact.labels) != set(empirical.labels):
        raise LabelMismatch(f"{list(exact.labels)} vs {list(empirical.labels)}")
    tol = parse_tolerance(tolerance)
    worst_label, worst = exact.labels[0], Fraction(-1)
    for lab, p in exact.items():
        dev = abs(p - empirical.frequency(lab))
        if dev > worst:
            worst_label, worst = lab, dev
    return Agreement(worst <= tol, worst_label, worst, tol)


def convergence_tolerance(trials: int) -> float:
    """4 * sqrt(1 / (4 n)): four standard deviations of a worst-case Bernoulli mean."""
    return 4 * math.sqrt(1 / (4 * trials))
