import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from secrecylab.analysis import (
    DEMO_LENGTH_PRIOR,
    LengthPrior,
    compromised_posterior,
    conditional_only_posterior,
    discrepancy_report,
    length_leakage_posterior,
)
from secrecylab.cryptosystem import FiniteCryptosystem, example1_system, figure1_system, xor_pad_system
from secrecylab.errors import (
    NoPlaintextOfObservedLength,
    UnreachableCiphertext,
    ZeroProbabilityCiphertext,
)
from secrecylab.probability import Dist, total_variation

import oracles
from strategies import prob_vectors, weights

EX1 = example1_system()
EX1_SKEW = example1_system([F(3, 4), F(1, 4)])
FIG1 = figure1_system()


def pair(a, b):
    return Dist([("0", a), ("1", b)])


class TestConditionalOnly:
    def test_example1(self):
        assert conditional_only_posterior(EX1, "0") == pair(F(1, 2), F(1, 2))

    def test_fig1(self):
        for e in FIG1.ciphertexts:
            assert set(conditional_only_posterior(FIG1, e).probs) == {F(1, 5)}

    def test_skewed_keys(self):
        assert conditional_only_posterior(EX1_SKEW, "0") == pair(F(3, 4), F(1, 4))

    def test_unreachable(self):
        table = {(k, m): m for k in "ab" for m in "01"}
        sys = FiniteCryptosystem(["0", "1"], ["a", "b"], ["0", "1", "2"], table,
                                 Dist.uniform("ab"), EX1.prior)
        with pytest.raises(UnreachableCiphertext):
            conditional_only_posterior(sys, "2")


class TestCompromised:
    def test_half(self):
        assert compromised_posterior(EX1, "0", F(1, 2)) == pair(F(7, 10), F(3, 10))

    def test_endpoints(self):
        assert compromised_posterior(EX1, "0", 1) == EX1.prior
        assert compromised_posterior(EX1, "0", 0) == pair(F(1, 2), F(1, 2))


class TestDiscrepancy:
    def test_example1(self):
        rep = discrepancy_report(EX1, "0", F(1, 2))
        assert rep.bayes == EX1.prior
        assert rep.tv_bayes_vs_prior == 0
        assert rep.tv_compromised_vs_prior == F(1, 5)

    def test_fig1_uniform(self):
        for e in FIG1.ciphertexts:
            rep = discrepancy_report(FIG1, e, F(2, 7))
            assert rep.prior == rep.bayes == rep.conditional_only == rep.compromised
            assert rep.tv_bayes_vs_prior == rep.tv_compromised_vs_prior == 0

    def test_skewed_keys(self):
        rep = discrepancy_report(EX1_SKEW, "0", F(1, 2))
        assert rep.tv_bayes_vs_prior == F(9, 140)

    def test_zero_probability(self):
        table = {(k, m): m for k in "ab" for m in "01"}
        sys = FiniteCryptosystem(["0", "1"], ["a", "b"], ["0", "1"], table,
                                 Dist.uniform("ab"), Dist.point(["0", "1"], "0"))
        with pytest.raises(ZeroProbabilityCiphertext):
            discrepancy_report(sys, "1")

    def test_json(self):
        js = discrepancy_report(EX1, "0").to_json()
        assert js["compromised"] == {"0": "7/10", "1": "3/10"}
        assert js["weight"] == "1/2"


class TestLengthLeak:
    def test_demo_prior(self):
        assert length_leakage_posterior(DEMO_LENGTH_PRIOR, 2) == Dist(
            [("0", 0), ("00", F(1, 2)), ("11", F(1, 2))]
        )

    def test_already_conditioned(self):
        prior = LengthPrior([("abc", F(1, 3)), ("xyz", F(2, 3))])
        assert length_leakage_posterior(prior, 3) == prior

    def test_impossible(self):
        with pytest.raises(NoPlaintextOfObservedLength):
            length_leakage_posterior(LengthPrior([("0", 1)]), 2)


# --- properties -----------------------------------------------------------------

seeds = st.integers(0, 2**32)


@given(seeds, st.data())
def test_conditional_only_ignores_prior(seed, data):
    sys = oracles.random_system(random.Random(seed))
    other = sys.with_prior(Dist(zip(sys.messages, data.draw(prob_vectors(len(sys.messages))))))
    for e in sys.ciphertexts:
        try:
            a = conditional_only_posterior(sys, e)
        except UnreachableCiphertext:
            with pytest.raises(UnreachableCiphertext):
                conditional_only_posterior(other, e)
            continue
        assert a == conditional_only_posterior(other, e)


@given(seeds)
def test_latin_uniform_conditional_only_is_uniform(seed):
    sys = oracles.random_system(random.Random(seed), latin=True, key_dist="uniform")
    n = len(sys.messages)
    for e in sys.ciphertexts:
        assert set(conditional_only_posterior(sys, e).probs) == {F(1, n)}


@given(seeds, weights)
def test_compromised_between(seed, w):
    sys = oracles.random_system(random.Random(seed))
    for e in sys.ciphertexts:
        try:
            c = conditional_only_posterior(sys, e)
        except UnreachableCiphertext:
            continue
        out = compromised_posterior(sys, e, w)
        for m in sys.messages:
            lo, hi = sorted((sys.prior[m], c[m]))
            assert lo <= out[m] <= hi


@given(st.integers(1, 3), st.data(), weights)
def test_uniform_pad_discrepancy_identity(bits, data, w):
    n = 2**bits
    sys = xor_pad_system(bits, data.draw(prob_vectors(n)), [F(1, n)] * n)
    uniform = Dist.uniform(sys.messages)
    # right-hand side from first principles: blend is (1-w) of the way to uniform
    expected_tv = (1 - w) * sum(abs(sys.prior[m] - uniform[m]) for m in sys.messages) / 2
    for e in sys.ciphertexts:
        rep = discrepancy_report(sys, e, w)
        assert rep.bayes == sys.prior and rep.tv_bayes_vs_prior == 0
        assert rep.tv_compromised_vs_prior == expected_tv
        assert rep.tv_compromised_vs_prior == (1 - w) * total_variation(sys.prior, uniform)


@st.composite
def length_priors(draw):
    words = draw(st.lists(st.text("01", min_size=1, max_size=4), min_size=1, max_size=8, unique=True))
    return LengthPrior(zip(words, draw(prob_vectors(len(words), positive=True))))


@given(length_priors(), st.integers(1, 4))
def test_length_leak_support(prior, length):
    if not any(len(w) == length for w in prior):
        with pytest.raises(NoPlaintextOfObservedLength):
            length_leakage_posterior(prior, length)
        return
    post = length_leakage_posterior(prior, length)
    assert sum(post.probs) == 1
    for w, p in post.items():
        assert (p == 0) == (len(w) != length)
