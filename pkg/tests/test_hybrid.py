"""Alpha weighting, the hybrid score, and end-to-end pair scoring."""

from __future__ import annotations

import itertools

import pytest

from hybridsd.errors import EmptyReferenceError, StoreMissError
from hybridsd.hybrid import (
    HybridConfig,
    alpha_weights,
    hybrid_sd,
    normalize_alphas,
    score_pair,
)

from conftest import make_store


def oracle_alphas(n_wk: int, n_wnk: int, p: float) -> tuple[float, float]:
    """Independent re-statement of the weighting formulas."""
    return (n_wk * p) / (n_wnk + 1), n_wnk / (n_wk * p + 1)


class TestAlphaWeights:
    def test_nonkeyword_errors_only(self):
        assert alpha_weights(0, 2, 2.0) == (0.0, 2.0)

    def test_perfect_hypothesis(self):
        assert alpha_weights(0, 0, 2.0) == (0.0, 0.0)

    def test_keyword_errors_only(self):
        assert alpha_weights(2, 0, 2.0) == (4.0, 0.0)

    def test_sweep_matches_oracle(self):
        for n_wk, n_wnk in itertools.product(range(11), repeat=2):
            for p in (0.5, 1.0, 2.0, 4.0):
                got = alpha_weights(n_wk, n_wnk, p)
                want = oracle_alphas(n_wk, n_wnk, p)
                assert got[0] == pytest.approx(want[0], abs=1e-12)
                assert got[1] == pytest.approx(want[1], abs=1e-12)

    def test_normalized(self):
        assert normalize_alphas(0.0, 0.0) == (0.0, 0.0)
        a1, a2 = normalize_alphas(4.0, 0.0)
        assert (a1, a2) == (1.0, 0.0)
        a1, a2 = normalize_alphas(1.0, 3.0)
        assert a1 + a2 == pytest.approx(1.0)
        assert a1 == pytest.approx(0.25)


class TestHybridSd:
    def test_nonkeyword_weighted_value(self):
        assert hybrid_sd(0.3, 0.5, (0.0, 2.0)) == pytest.approx(1.0, abs=1e-12)

    def test_zero_weights(self):
        assert hybrid_sd(0.9, 1.0, (0.0, 0.0)) == 0.0

    def test_keyword_only_value(self):
        assert hybrid_sd(0.855, 0.0, (4.0, 0.0)) == pytest.approx(3.42, abs=1e-12)

    def test_unbounded_above(self):
        assert hybrid_sd(1.0, 1.0, alpha_weights(5, 0, 4.0)) > 1.0


class TestConfig:
    def test_defaults(self):
        cfg = HybridConfig()
        assert cfg.gamma == 0.4 and cfg.p == 2.0
        assert not cfg.count_insertions and not cfg.normalized_alpha

    @pytest.mark.parametrize("kwargs", [{"p": 0.0}, {"p": -1.0}, {"gamma": 0.0}, {"gamma": 1.2}])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            HybridConfig(**kwargs)


class TestScorePair:
    def test_identical_pair(self, reference_provider):
        b = score_pair("The flight is about to land", "the flight is about to land!",
                       HybridConfig(), reference_provider)
        assert b.wer == 0.0 and b.hsd == 0.0 and b.sd == 0.0
        assert b.counts.n_wk == 0 and b.counts.n_wnk == 0

    def test_flight_nonkeyword_corruption(self, flight_store):
        b = score_pair("the flight is about to land", "te flight s about to land",
                       HybridConfig(), flight_store)
        assert b.nker == pytest.approx(0.5, abs=1e-12)
        assert (b.alpha1, b.alpha2) == (0.0, 2.0)
        assert b.hsd == pytest.approx(1.0, abs=1e-9)
        assert b.partition.keywords == frozenset({"flight", "land"})

    def test_flight_keyword_corruption(self, flight_store):
        b = score_pair("the flight is about to land", "the fite is about to lamt",
                       HybridConfig(), flight_store)
        assert (b.alpha1, b.alpha2) == (4.0, 0.0)
        assert b.sd == pytest.approx(0.855, abs=1e-9)
        assert b.hsd == pytest.approx(3.42, abs=0.005)
        assert b.nker == 0.0
        assert b.wer == pytest.approx(1 / 3)

    def test_you_are_late(self, reference_provider):
        b = score_pair("you are late", "you r late", HybridConfig(), reference_provider)
        assert b.wer == pytest.approx(1 / 3)
        assert b.counts.n_wnk == 1
        assert b.alpha1 == 0.0
        assert b.hsd == pytest.approx(b.alpha2 * b.nker)

    def test_empty_reference_raises(self, reference_provider):
        with pytest.raises(EmptyReferenceError):
            score_pair("", "anything", HybridConfig(), reference_provider)
        with pytest.raises(EmptyReferenceError):
            score_pair("?!.", "anything", HybridConfig(), reference_provider)

    def test_empty_hypothesis_all_deletions(self, reference_provider):
        b = score_pair("the flight lands", "", HybridConfig(), reference_provider)
        assert b.wer == 1.0
        assert b.counts.n_wk + b.counts.n_wnk == 3

    def test_provider_miss_propagates(self, tmp_path):
        store = make_store(tmp_path / "s.txt", {"the flight": [1.0, 0.0]})
        with pytest.raises(StoreMissError):
            score_pair("the flight", "the fight", HybridConfig(), store)

    def test_zero_law_any_sd(self, tmp_path):
        # no wrong words at all -> hsd is 0 even with dissimilar embeddings
        store = make_store(
            tmp_path / "s.txt",
            {"crew ready": [1.0, 0.0], "crew": [0.0, 1.0], "ready": [0.0, 1.0]},
        )
        b = score_pair("crew ready", "crew ready", HybridConfig(), store)
        assert b.hsd == 0.0

    def test_nonkeyword_only_provider_independent(self, flight_store, reference_provider):
        ref, hyp = "the flight is about to land", "te flight s about to land"
        via_store = score_pair(ref, hyp, HybridConfig(), flight_store)
        via_reference = score_pair(ref, hyp, HybridConfig(), reference_provider)
        # different sd values, but alpha1 == 0 in the store run means its hsd
        # is pure nker arithmetic
        assert via_store.alpha1 == 0.0
        assert via_store.hsd == pytest.approx(
            via_store.counts.n_wnk * via_store.nker, abs=1e-12
        )
        assert via_reference.sd != via_store.sd

    def test_keyword_only_monotone_in_p(self, flight_store):
        ref, hyp = "the flight is about to land", "the fite is about to lamt"
        values = [
            score_pair(ref, hyp, HybridConfig(p=p), flight_store).hsd
            for p in (0.5, 1.0, 2.0, 4.0)
        ]
        assert values == sorted(values)
        assert values[0] > 0

    def test_p_derivative_matches_finite_difference(self):
        n_wk, n_wnk, sd_value, nker_value = 2, 3, 0.6, 0.75
        for p in (0.5, 1.0, 2.0, 4.0):
            h = 1e-6

            def hsd_at(pp):
                return hybrid_sd(sd_value, nker_value, alpha_weights(n_wk, n_wnk, pp))

            numeric = (hsd_at(p + h) - hsd_at(p - h)) / (2 * h)
            analytic = n_wk * sd_value / (n_wnk + 1) - (
                n_wnk * nker_value * n_wk / (n_wk * p + 1) ** 2
            )
            assert numeric == pytest.approx(analytic, abs=1e-6)

    def test_normalized_alpha_switch(self, flight_store):
        ref, hyp = "the flight is about to land", "te flight s about to land"
        plain = score_pair(ref, hyp, HybridConfig(), flight_store)
        normed = score_pair(ref, hyp, HybridConfig(normalized_alpha=True), flight_store)
        assert plain.alpha2 == 2.0
        assert normed.alpha1 + normed.alpha2 == pytest.approx(1.0)
        assert normed.hsd == pytest.approx(plain.nker, abs=1e-12)

    def test_count_insertions_policy(self, reference_provider):
        b = score_pair("the flight", "the flight now boarding",
                       HybridConfig(count_insertions=True), reference_provider)
        assert b.counts.insertions == 2
        assert b.counts.n_wnk == 2
        assert b.nker == 2.0  # reported as-is, not clamped


class TestBreakdownSerialization:
    def test_flat_dict(self, reference_provider):
        b = score_pair("the flight is about to land", "te flight s about to land",
                       HybridConfig(), reference_provider, pair_id="u1")
        d = b.as_dict()
        assert d["id"] == "u1"
        assert d["ref"] == "the flight is about to land"
        for name in ("wer", "sd", "nker", "alpha1", "alpha2", "hsd",
                     "n_wk", "n_wnk", "n_k", "n_nk", "insertions",
                     "keywords", "non_keywords", "gamma"):
            assert name in d
        assert d["wer"] == round(b.wer, 6)
        assert isinstance(d["keywords"], list)

    def test_exact_identity_in_breakdown(self, flight_store):
        b = score_pair("the flight is about to land", "te flight s about to land",
                       HybridConfig(), flight_store)
        assert b.hsd == b.alpha1 * b.sd + b.alpha2 * b.nker

    def test_serialization_rounds_but_object_does_not(self, reference_provider):
        b = score_pair("you are late", "yu are late", HybridConfig(), reference_provider)
        d = b.as_dict()
        assert d["sd"] == round(b.sd, 6)
        assert b.sd != round(b.sd, 6)  # this sd needs more than 6 decimals
        assert d["sd"] != b.sd
