from fractions import Fraction as F

import pytest

from secrecylab.cryptosystem import (
    bayes_posterior,
    cipher_distribution,
    example1_system,
    figure1_system,
    xor_pad_system,
)
from secrecylab.errors import EmptyEmpirical, LabelMismatch
from secrecylab.oracle import (
    GENERATOR,
    EmpiricalDist,
    _Sampler,
    agreement,
    convergence_tolerance,
    simulate_cipher_dist,
    simulate_posterior,
)
from secrecylab.probability import Dist

import oracles

EX1 = example1_system()
EX1_SKEW = example1_system([F(3, 4), F(1, 4)])
HALF = Dist([("0", F(1, 2)), ("1", F(1, 2))])


def emp(counts, labels=("0", "1")):
    return EmpiricalDist(tuple(labels), dict(zip(labels, counts)), sum(counts), sum(counts), 0)


class TestCipherDist:
    def test_example1_million(self):
        e = simulate_cipher_dist(EX1, 10**6, seed=0)
        assert abs(e.frequency("0") - F(1, 2)) <= F(5, 1000)
        assert e.trials_kept == e.trials_total == 10**6
        assert sum(e.counts.values()) == e.trials_kept

    def test_point_masses(self):
        sys = example1_system([1, 0]).with_prior(Dist.point(["0", "1"], "1"))
        assert simulate_cipher_dist(sys, 500, seed=3).counts == {"0": 0, "1": 500}

    def test_single_trial(self):
        e = simulate_cipher_dist(EX1, 1, seed=9)
        assert sorted(e.counts.values()) == [0, 1]

    def test_metadata(self):
        js = simulate_cipher_dist(EX1, 10, seed=5).to_json()
        assert js["seed"] == 5 and js["generator"] == GENERATOR and js["trials_total"] == 10

    def test_seed_range(self):
        with pytest.raises(ValueError):
            simulate_cipher_dist(EX1, 10, seed=-1)
        simulate_cipher_dist(EX1, 10, seed=2**64 - 1)


class TestPosterior:
    def test_example1_million(self):
        e = simulate_posterior(EX1, "0", 10**6, seed=0)
        assert abs(e.frequency("0") - F(9, 10)) <= F(5, 1000)
        assert 0 < e.trials_kept < e.trials_total

    def test_unreachable(self):
        sys = example1_system([1, 0]).with_prior(Dist.point(["0", "1"], "0"))
        e = simulate_posterior(sys, "1", 1000, seed=0)
        assert e.trials_kept == 0
        with pytest.raises(EmptyEmpirical):
            e.frequency("0")

    def test_skewed_keys(self):
        e = simulate_posterior(EX1_SKEW, "0", 10**5, seed=1)
        assert agreement(bayes_posterior(EX1_SKEW, "0"), e, convergence_tolerance(e.trials_kept)).ok


class TestAgreement:
    def test_exact_match(self):
        a = agreement(HALF, emp([500, 500]), "0.01")
        assert a.ok and a.deviation == 0

    def test_too_far(self):
        a = agreement(HALF, emp([600, 400]), "0.05")
        assert not a.ok and a.deviation == F(1, 10)

    def test_close(self):
        a = agreement(Dist([("0", F(9, 10)), ("1", F(1, 10))]), emp([905, 95]), 0.01)
        assert a.ok and a.deviation == F(5, 1000)

    def test_tolerance_is_inclusive(self):
        assert agreement(HALF, emp([600, 400]), "0.1").ok

    def test_empty(self):
        with pytest.raises(EmptyEmpirical):
            agreement(HALF, EmpiricalDist(("0", "1"), {"0": 0, "1": 0}, 10, 0, 0), "0.1")

    def test_labels(self):
        with pytest.raises(LabelMismatch):
            agreement(HALF, emp([1, 1], labels=("a", "b")), "0.1")


class TestSampler:
    def test_exact_inverse_cdf(self):
        s = _Sampler((F(1, 3), F(0), F(2, 3)))
        assert s.denominator == 3
        assert [s.from_words(u, 0) for u in range(3)] == [0, 2, 2]

    def test_rejects_top_of_range(self):
        s = _Sampler((F(1, 3), F(2, 3)))
        assert s.from_words(2**64 - 1, 0) is None  # 2**64 % 3 == 1

    def test_wide_denominator(self):
        big = 2**70 + 1
        sys = xor_pad_system(1, [F(1, big), F(big - 1, big)], [F(1, 2)] * 2)
        e = simulate_cipher_dist(sys, 2000, seed=4)
        assert sum(e.counts.values()) == 2000


class TestDeterminism:
    def test_same_seed_same_counts(self):
        a = simulate_posterior(EX1_SKEW, "0", 50_000, seed=11)
        b = simulate_posterior(EX1_SKEW, "0", 50_000, seed=11)
        assert a == b

    def test_schedule_independent(self):
        serial = simulate_cipher_dist(EX1_SKEW, 30_001, seed=2)
        chunked = simulate_cipher_dist(EX1_SKEW, 30_001, seed=2, chunk=997, workers=4)
        assert serial == chunked

    def test_prefix_consistency(self):
        # trial i depends only on (seed, i), so a longer run extends a shorter one
        short = simulate_cipher_dist(EX1_SKEW, 600, seed=8, chunk=64)
        longer = simulate_cipher_dist(EX1_SKEW, 1000, seed=8, chunk=250)
        assert all(short.counts[c] <= longer.counts[c] for c in EX1_SKEW.ciphertexts)
        step = [simulate_cipher_dist(EX1_SKEW, n, seed=8) for n in range(1, 40)]
        for a, b in zip(step, step[1:]):
            assert sum(b.counts[c] - a.counts[c] for c in EX1_SKEW.ciphertexts) == 1
            assert all(b.counts[c] >= a.counts[c] for c in EX1_SKEW.ciphertexts)

    def test_rejection_retries_are_deterministic(self):
        # denominator 3 makes rejection possible; runs must still agree across schedules
        sys = xor_pad_system(1, [F(1, 3), F(2, 3)], [F(1, 3), F(2, 3)])
        assert simulate_cipher_dist(sys, 5000, seed=1) == simulate_cipher_dist(sys, 5000, seed=1, chunk=7, workers=3)

    def test_seeds_differ(self):
        assert simulate_cipher_dist(EX1, 1000, seed=0) != simulate_cipher_dist(EX1, 1000, seed=1)


SYSTEMS = {
    "example1": EX1,
    "example1_skewed": EX1_SKEW,
    "fig1_skewed_prior": figure1_system(prior=[F(1, 2)] + [F(1, 8)] * 4),
    "random": oracles.mixed_systems(7, 1)[0],
}


@pytest.mark.parametrize("name", sorted(SYSTEMS))
@pytest.mark.parametrize("trials,seed", [(10**4, 101), (10**5, 202), (10**6, 303)])
def test_convergence_schedule(name, trials, seed):
    sys = SYSTEMS[name]
    e = simulate_cipher_dist(sys, trials, seed)
    assert agreement(cipher_distribution(sys), e, convergence_tolerance(trials)).ok
    target = max(cipher_distribution(sys).items(), key=lambda kv: kv[1])[0]
    p = simulate_posterior(sys, target, trials, seed)
    assert agreement(bayes_posterior(sys, target), p, convergence_tolerance(p.trials_kept)).ok
