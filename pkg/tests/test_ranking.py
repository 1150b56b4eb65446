import math

import numpy as np
import pytest

from tagrank.classifier import DomainDistribution
from tagrank.corpus import HashtagGroup, Microblog
from tagrank.errors import FutureTimestampError, ValidationError
from tagrank.ranking import (
    SECONDS_PER_DAY,
    DecayParams,
    decay_weight,
    hot_value,
    rank_domains,
)
from tagrank.semantic import ClassifiedHashtag

GAMMA_7D = 7 * SECONDS_PER_DAY


def post(post_id, ts, tag="t"):
    return Microblog(id=post_id, text="x", timestamp=ts, hashtags=(tag,))


def classified(tag, domain, p):
    dist = DomainDistribution(labels=(domain, "zzz"), probs=np.array([p, 1.0 - p]))
    return ClassifiedHashtag(
        tag=tag, domain=domain, p=p, distribution=dist, semantic_post_ids=("m0",)
    )


class TestDecayWeight:
    def test_zero_lag_is_exactly_one(self):
        assert decay_weight(1000, 1000, GAMMA_7D) == 1.0

    def test_seven_day_lag_at_seven_day_gamma(self):
        t_p = 10_000_000
        value = decay_weight(t_p, t_p - 7 * SECONDS_PER_DAY, GAMMA_7D)
        assert value == pytest.approx(math.exp(-1), abs=1e-12)
        assert value == pytest.approx(0.367879, abs=1e-6)

    def test_fourteen_day_lag(self):
        t_p = 10_000_000
        value = decay_weight(t_p, t_p - 14 * SECONDS_PER_DAY, GAMMA_7D)
        assert value == pytest.approx(math.exp(-2), abs=1e-12)

    def test_future_post_rejected(self):
        with pytest.raises(FutureTimestampError):
            decay_weight(100, 101, GAMMA_7D)

    def test_nonpositive_gamma_rejected(self):
        with pytest.raises(ValidationError):
            decay_weight(100, 50, 0.0)

    def test_strictly_decreasing_in_lag(self):
        t_p = 5_000_000
        lags = np.linspace(0, 30 * SECONDS_PER_DAY, 200)
        values = [decay_weight(t_p, int(t_p - lag), GAMMA_7D) for lag in lags]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_range(self):
        rng = np.random.default_rng(31)
        for _ in range(500):
            t_p = int(rng.integers(1, 10**9))
            gamma = float(rng.uniform(3600, 10**8))
            # stay inside the float64-representable regime (lag/gamma < 700)
            lag = int(rng.uniform(0, min(t_p, 690 * gamma)))
            w = decay_weight(t_p, t_p - lag, gamma)
            assert 0.0 < w <= 1.0

    def test_extreme_lag_underflows_to_zero(self):
        # exp(-x) underflows below ~exp(-745); returning 0.0 is the
        # closest representable value, not an error
        assert decay_weight(10**9, 0, 1.0) == 0.0


class TestHotValue:
    def test_single_post_at_reference_time(self):
        group = HashtagGroup(tag="t", posts=(post("m0", 500),))
        params = DecayParams(gamma=GAMMA_7D, t_p=500)
        assert hot_value(group, classified("t", "d", 0.8), params) == pytest.approx(0.8)

    def test_two_posts_term_by_term(self):
        t_p = 20_000_000
        group = HashtagGroup(
            tag="t", posts=(post("m0", t_p), post("m1", t_p - 7 * SECONDS_PER_DAY))
        )
        params = DecayParams(gamma=GAMMA_7D, t_p=t_p)
        expected = 0.5 * (1.0 + math.exp(-1))
        assert hot_value(group, classified("t", "d", 0.5), params) == pytest.approx(
            expected, abs=1e-12
        )
        assert expected == pytest.approx(0.683940, abs=1e-6)

    def test_zero_probability_zero_hot(self):
        group = HashtagGroup(tag="t", posts=tuple(post(f"m{i}", 100 + i) for i in range(5)))
        params = DecayParams(gamma=GAMMA_7D, t_p=1000)
        assert hot_value(group, classified("t", "d", 0.0), params) == 0.0

    def test_tag_mismatch_rejected(self):
        group = HashtagGroup(tag="t", posts=(post("m0", 1),))
        params = DecayParams(gamma=GAMMA_7D, t_p=10)
        with pytest.raises(ValidationError):
            hot_value(group, classified("other", "d", 0.5), params)

    def test_brute_force_oracle_fuzzed(self):
        rng = np.random.default_rng(77)
        for _ in range(300):
            t_p = int(rng.integers(10**6, 10**9))
            n = int(rng.integers(1, 21))
            stamps = [int(rng.integers(0, t_p + 1)) for _ in range(n)]
            gamma = float(rng.uniform(3600, 30 * SECONDS_PER_DAY))
            p = float(rng.uniform(0, 1))
            group = HashtagGroup(
                tag="t", posts=tuple(post(f"m{i}", ts) for i, ts in enumerate(stamps))
            )
            expected = sum(p * math.exp(-(t_p - ts) / gamma) for ts in stamps)
            got = hot_value(group, classified("t", "d", p), DecayParams(gamma=gamma, t_p=t_p))
            assert got == pytest.approx(expected, rel=1e-9, abs=1e-12)

    def test_recency_monotonicity(self):
        t_p = 10**8
        stamps = [t_p - 86400 * (i + 1) for i in range(5)]
        group = HashtagGroup(tag="t", posts=tuple(post(f"m{i}", ts) for i, ts in enumerate(stamps)))
        params = DecayParams(gamma=GAMMA_7D, t_p=t_p)
        base = hot_value(group, classified("t", "d", 0.5), params)
        later = stamps[:]
        later[2] += 3600  # move one post closer to t_p
        moved = HashtagGroup(tag="t", posts=tuple(post(f"m{i}", ts) for i, ts in enumerate(later)))
        assert hot_value(moved, classified("t", "d", 0.5), params) > base

    def test_volume_monotonicity(self):
        t_p = 10**8
        posts = tuple(post(f"m{i}", t_p - i * 1000) for i in range(4))
        params = DecayParams(gamma=GAMMA_7D, t_p=t_p)
        base = hot_value(HashtagGroup(tag="t", posts=posts), classified("t", "d", 0.5), params)
        grown = posts + (post("m9", t_p - 10**6),)
        assert hot_value(HashtagGroup(tag="t", posts=grown), classified("t", "d", 0.5), params) > base

    def test_upper_bound(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            t_p = int(rng.integers(10**6, 10**8))
            n = int(rng.integers(1, 10))
            p = float(rng.uniform(0, 1))
            group = HashtagGroup(
                tag="t",
                posts=tuple(post(f"m{i}", int(rng.integers(0, t_p))) for i in range(n)),
            )
            h = hot_value(group, classified("t", "d", p), DecayParams(gamma=GAMMA_7D, t_p=t_p))
            assert 0.0 <= h <= n * p + 1e-12

    def test_gamma_scale_never_decreases(self):
        t_p = 10**8
        group = HashtagGroup(
            tag="t", posts=tuple(post(f"m{i}", t_p - i * 10**5) for i in range(6))
        )
        tagged = classified("t", "d", 0.7)
        h1 = hot_value(group, tagged, DecayParams(gamma=GAMMA_7D, t_p=t_p))
        h2 = hot_value(group, tagged, DecayParams(gamma=3 * GAMMA_7D, t_p=t_p))
        assert h2 >= h1


class TestRankDomains:
    def make_pair(self, tag, domain, p, stamps, t_p):
        group = HashtagGroup(
            tag=tag, posts=tuple(post(f"{tag}-{i}", ts, tag) for i, ts in enumerate(stamps))
        )
        dist = DomainDistribution(labels=(domain, "zzz"), probs=np.array([p, 1.0 - p]))
        tagged = ClassifiedHashtag(
            tag=tag, domain=domain, p=p, distribution=dist,
            semantic_post_ids=tuple(p_.id for p_ in group.posts),
        )
        return group, tagged

    def test_sorted_by_hot_descending(self):
        t_p = 10**7
        pairs = [
            self.make_pair("a", "news", 0.9, [t_p] * 3, t_p),
            self.make_pair("b", "news", 0.9, [t_p] * 2, t_p),
            self.make_pair("c", "news", 0.9, [t_p], t_p),
        ]
        ranked = rank_domains(pairs, DecayParams(gamma=GAMMA_7D, t_p=t_p), k=2)
        assert [e.tag for e in ranked["news"]] == ["a", "b"]

    def test_ties_break_by_tag(self):
        t_p = 10**7
        pairs = [
            self.make_pair("zed", "news", 0.5, [t_p], t_p),
            self.make_pair("abc", "news", 0.5, [t_p], t_p),
        ]
        ranked = rank_domains(pairs, DecayParams(gamma=GAMMA_7D, t_p=t_p), k=5)
        assert [e.tag for e in ranked["news"]] == ["abc", "zed"]

    def test_k_larger_than_bucket(self):
        t_p = 100
        pairs = [self.make_pair("a", "news", 0.5, [50], t_p)]
        ranked = rank_domains(pairs, DecayParams(gamma=GAMMA_7D, t_p=t_p), k=10)
        assert len(ranked["news"]) == 1

    def test_empty_domains_present(self):
        t_p = 100
        pairs = [self.make_pair("a", "news", 0.5, [50], t_p)]
        ranked = rank_domains(
            pairs, DecayParams(gamma=GAMMA_7D, t_p=t_p), k=3, domains=["news", "sports"]
        )
        assert ranked["sports"] == []

    def test_k_must_be_positive(self):
        with pytest.raises(ValidationError):
            rank_domains([], DecayParams(gamma=1.0, t_p=0), k=0)

    def test_entry_fields(self):
        t_p = 1000
        pairs = [self.make_pair("a", "news", 0.25, [800, 900], t_p)]
        ranked = rank_domains(pairs, DecayParams(gamma=GAMMA_7D, t_p=t_p), k=1)
        entry = ranked["news"][0]
        assert entry.n_posts == 2
        assert entry.p == 0.25
        assert entry.domain == "news"
        assert entry.hot <= entry.n_posts * entry.p
