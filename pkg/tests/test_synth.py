import pytest

from tagrank.classifier import train_domain_classifier
from tagrank.corpus import (
    group_by_hashtag,
    load_microblogs,
    load_news_corpus,
    microblog_to_record,
    news_to_record,
    write_jsonl,
)
from tagrank.errors import ValidationError
from tagrank.semantic import classify_hashtag
from tagrank.synth import (
    SYNTH_REFERENCE_TIME,
    SynthConfig,
    domain_names,
    generate_microblogs,
    generate_news,
)

SMALL = SynthConfig(
    n_domains=3,
    docs_per_domain=30,
    vocab_per_domain=60,
    overlap_ratio=0.1,
    doc_len=30,
    n_hashtags=9,
    posts_per_hashtag=10,
    spam_ratio=0.2,
    time_span_days=5.0,
    seed=17,
)


class TestGenerateNews:
    def test_counts_and_balance(self):
        cfg = SynthConfig(n_domains=2, docs_per_domain=3, vocab_per_domain=20,
                          doc_len=10, seed=1)
        articles = generate_news(cfg)
        assert len(articles) == 6
        per_label = {}
        for article in articles:
            per_label[article.category] = per_label.get(article.category, 0) + 1
        assert per_label == {"domain00": 3, "domain01": 3}

    def test_zero_overlap_means_disjoint_vocabularies(self):
        cfg = SynthConfig(n_domains=3, docs_per_domain=10, vocab_per_domain=30,
                          overlap_ratio=0.0, doc_len=25, seed=2)
        articles = generate_news(cfg)
        words_by_domain = {}
        for article in articles:
            words_by_domain.setdefault(article.category, set()).update(article.text.split())
        domains = list(words_by_domain)
        for i in range(len(domains)):
            for j in range(i + 1, len(domains)):
                assert words_by_domain[domains[i]].isdisjoint(words_by_domain[domains[j]])

    def test_deterministic(self):
        assert generate_news(SMALL) == generate_news(SMALL)

    def test_seed_changes_content(self):
        other = SynthConfig(**{**SMALL.__dict__, "seed": 18})
        assert generate_news(SMALL) != generate_news(other)

    def test_invalid_config(self):
        with pytest.raises(ValidationError):
            SynthConfig(n_domains=0)
        with pytest.raises(ValidationError):
            SynthConfig(overlap_ratio=1.0)
        with pytest.raises(ValidationError):
            SynthConfig(spam_ratio=-0.1)


class TestGenerateMicroblogs:
    def test_spam_free_when_ratio_zero(self):
        cfg = SynthConfig(n_domains=2, docs_per_domain=5, vocab_per_domain=40,
                          n_hashtags=4, posts_per_hashtag=6, spam_ratio=0.0, seed=3)
        posts, truth = generate_microblogs(cfg)
        assert len(posts) == 24
        assert not any("spamw" in p.text for p in posts)

    def test_spam_counts(self):
        cfg = SynthConfig(n_domains=2, docs_per_domain=5, vocab_per_domain=40,
                          n_hashtags=3, posts_per_hashtag=10, spam_ratio=0.2, seed=4)
        posts, _ = generate_microblogs(cfg)
        groups = group_by_hashtag(posts)
        for group in groups:
            spam = [p for p in group.posts if "spamw" in p.text]
            assert len(spam) == 2  # 8 topical + 2 spam

    def test_truth_sidecar_alignment(self):
        posts, truth = generate_microblogs(SMALL)
        tags = {t["tag"] for t in truth}
        assert len(truth) == SMALL.n_hashtags
        assert {g.tag for g in group_by_hashtag(posts)} == tags
        assert all(t["true_domain"] in domain_names(SMALL) for t in truth)

    def test_timestamps_within_span(self):
        posts, _ = generate_microblogs(SMALL)
        lo = SYNTH_REFERENCE_TIME - int(SMALL.time_span_days * 86400)
        for p in posts:
            assert lo <= p.timestamp <= SYNTH_REFERENCE_TIME

    def test_deterministic(self):
        a = generate_microblogs(SMALL)
        b = generate_microblogs(SMALL)
        assert a == b

    def test_unknown_domain_rejected(self):
        with pytest.raises(ValidationError):
            generate_microblogs(SMALL, domains=["nope"])


class TestSchemas:
    def test_round_trip_through_corpus_loaders(self, tmp_path):
        articles = generate_news(SMALL)
        posts, truth = generate_microblogs(SMALL)
        news_path = tmp_path / "news.jsonl"
        posts_path = tmp_path / "posts.jsonl"
        write_jsonl(news_path, (news_to_record(a) for a in articles))
        write_jsonl(posts_path, (microblog_to_record(p) for p in posts))
        assert load_news_corpus(news_path) == articles
        assert load_microblogs(posts_path) == posts

    def test_tags_extractable_from_text(self):
        # hashtags are also embedded weibo-style in the text itself
        posts, _ = generate_microblogs(SMALL)
        from tagrank.corpus import extract_hashtags

        for p in posts[:20]:
            assert extract_hashtags(p.text, "weibo") == list(p.hashtags)


@pytest.fixture(scope="module")
def pipeline():
    articles = generate_news(SMALL)
    clf = train_domain_classifier(
        articles, min_df=1, max_df_ratio=0.6, n_topics=6,
        train_iters=60, infer_iters=20, epochs=8, seed=SMALL.seed,
    )
    posts, truth = generate_microblogs(SMALL)
    return clf, group_by_hashtag(posts), {t["tag"]: t["true_domain"] for t in truth}


class TestEndToEnd:
    def test_separable_corpus_recovers_truth(self):
        cfg = SynthConfig(n_domains=3, docs_per_domain=30, vocab_per_domain=60,
                          overlap_ratio=0.0, doc_len=30, n_hashtags=9,
                          posts_per_hashtag=8, spam_ratio=0.0, seed=23)
        articles = generate_news(cfg)
        clf = train_domain_classifier(
            articles, min_df=1, max_df_ratio=1.0, n_topics=6,
            train_iters=60, infer_iters=20, epochs=8, seed=23,
        )
        posts, truth = generate_microblogs(cfg)
        truth_map = {t["tag"]: t["true_domain"] for t in truth}
        for group in group_by_hashtag(posts):
            tagged = classify_hashtag(group, clf, seed=23)
            assert tagged.domain == truth_map[group.tag]

    def test_spam_posts_stay_out_of_semantic_text(self, pipeline):
        clf, groups, _ = pipeline
        n_spam = int(round(SMALL.posts_per_hashtag * SMALL.spam_ratio))
        for group in groups:
            spam_ids = {p.id for p in group.posts if "spamw" in p.text}
            assert len(spam_ids) == n_spam
            tagged = classify_hashtag(group, clf, seed=SMALL.seed)
            assert spam_ids.isdisjoint(tagged.semantic_post_ids)

    def test_classification_beats_spam(self, pipeline):
        clf, groups, truth_map = pipeline
        hits = sum(
            classify_hashtag(g, clf, seed=SMALL.seed).domain == truth_map[g.tag]
            for g in groups
        )
        assert hits / len(groups) >= 0.9
