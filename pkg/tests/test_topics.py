import numpy as np
import pytest

from tagrank.errors import ValidationError
from tagrank.features import build_vocabulary
from tagrank.topics import (
    TopicModel,
    fit_topic_model,
    infer_topics,
    topic_model_from_json,
    topic_model_to_json,
)

BLOCK_A = [f"a{i}" for i in range(5)]
BLOCK_B = [f"b{i}" for i in range(5)]


@pytest.fixture(scope="module")
def separable():
    """Two documents over disjoint 5-word vocabularies."""
    docs = [BLOCK_A * 8, BLOCK_B * 8]
    vocab = build_vocabulary(docs, min_df=1, max_df_ratio=1.0)
    model = fit_topic_model(docs, vocab, k=2, alpha=0.5, beta=0.01, iters=200, seed=9)
    return docs, vocab, model


class TestFit:
    def test_separable_blocks_dominate_topics(self, separable):
        docs, vocab, model = separable
        a_idx = [vocab.term_to_index[t] for t in BLOCK_A]
        b_idx = [vocab.term_to_index[t] for t in BLOCK_B]
        # each topic should place >= 0.9 mass on one block
        masses = model.phi[:, a_idx].sum(axis=1)
        assert max(masses) >= 0.9 and min(masses) <= 0.1
        assert model.phi[:, b_idx].sum(axis=1).max() >= 0.9

    def test_document_mass_on_own_block(self, separable):
        docs, vocab, model = separable
        theta_a = infer_topics(docs[0], model, vocab, iters=100, seed=4).theta
        theta_b = infer_topics(docs[1], model, vocab, iters=100, seed=4).theta
        assert theta_a.max() >= 0.9
        assert theta_b.max() >= 0.9
        assert int(np.argmax(theta_a)) != int(np.argmax(theta_b))

    def test_deterministic_given_seed(self, separable):
        docs, vocab, _ = separable
        m1 = fit_topic_model(docs, vocab, k=2, alpha=0.5, beta=0.01, iters=50, seed=3)
        m2 = fit_topic_model(docs, vocab, k=2, alpha=0.5, beta=0.01, iters=50, seed=3)
        assert np.array_equal(m1.phi, m2.phi)

    def test_k_one_rejected(self, separable):
        docs, vocab, _ = separable
        with pytest.raises(ValidationError):
            fit_topic_model(docs, vocab, k=1, iters=10, seed=0)

    def test_all_empty_docs_rejected(self, separable):
        _, vocab, _ = separable
        with pytest.raises(ValidationError):
            fit_topic_model([["zzz"], []], vocab, k=2, iters=10, seed=0)

    def test_phi_rows_are_distributions(self, separable):
        _, _, model = separable
        assert np.all(model.phi >= 0)
        np.testing.assert_allclose(model.phi.sum(axis=1), 1.0, atol=1e-6)


class TestInfer:
    def test_uniform_fallback_empty(self, separable):
        _, vocab, model = separable
        theta = infer_topics([], model, vocab, iters=10, seed=0).theta
        np.testing.assert_allclose(theta, 0.5)

    def test_uniform_fallback_oov(self, separable):
        _, vocab, model = separable
        theta = infer_topics(["zzz", "yyy"], model, vocab, iters=10, seed=0).theta
        np.testing.assert_allclose(theta, 0.5)

    def test_block_document_dominant_topic(self, separable):
        docs, vocab, model = separable
        theta = infer_topics(BLOCK_A * 4, model, vocab, iters=100, seed=1).theta
        assert theta.max() >= 0.8

    def test_deterministic(self, separable):
        _, vocab, model = separable
        t1 = infer_topics(BLOCK_A * 3, model, vocab, iters=30, seed=7).theta
        t2 = infer_topics(BLOCK_A * 3, model, vocab, iters=30, seed=7).theta
        assert np.array_equal(t1, t2)

    def test_theta_is_distribution(self, separable):
        _, vocab, model = separable
        rng = np.random.default_rng(0)
        terms = BLOCK_A + BLOCK_B
        for _ in range(50):
            tokens = [terms[rng.integers(len(terms))] for _ in range(rng.integers(1, 30))]
            theta = infer_topics(tokens, model, vocab, iters=20, seed=2).theta
            assert np.all(theta >= 0)
            assert theta.sum() == pytest.approx(1.0, abs=1e-6)


class TestPersistence:
    def test_round_trip(self, separable):
        _, _, model = separable
        clone = topic_model_from_json(topic_model_to_json(model))
        assert clone.n_topics == model.n_topics
        assert clone.alpha == model.alpha
        assert clone.beta == model.beta
        assert clone.seed == model.seed
        assert np.array_equal(clone.phi, model.phi)

    def test_bad_version_rejected(self, separable):
        _, _, model = separable
        payload = topic_model_to_json(model)
        payload["format_version"] = 999
        from tagrank.errors import ParseError

        with pytest.raises(ParseError):
            topic_model_from_json(payload)

    def test_invalid_phi_rejected(self):
        with pytest.raises(ValidationError):
            TopicModel(
                n_topics=2,
                phi=np.array([[0.7, 0.7], [0.5, 0.5]]),
                alpha=1.0,
                beta=0.1,
                seed=0,
            )
