"""Domain classification: paired linear SVMs over two feature views.

One one-vs-rest linear SVM is trained on TF-IDF vectors and another on
topic distributions; at prediction time each model's margins are mapped
through a softmax and the two distributions are averaged with equal
weight. Softmax (rather than Platt scaling) keeps the mapping
deterministic, parameter-free and argmax-preserving.

Training uses Pegasos-style SGD with step size 1/(lambda * t) and a
seeded shuffle per epoch; the epoch permutations are drawn once from
PCG64(seed) and shared by every per-label binary problem, so a fixed
seed reproduces identical weights.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .corpus import NewsArticle
from .errors import ParseError, ValidationError
from .features import (
    SparseVector,
    Vocabulary,
    build_vocabulary,
    tfidf_vector,
    tokenize,
    vocabulary_from_json,
    vocabulary_to_json,
)
from .topics import (
    TopicModel,
    fit_topic_model,
    infer_topics,
    topic_model_from_json,
    topic_model_to_json,
)

CLASSIFIER_FORMAT_VERSION = 1

VOCABULARY_FILE = "vocabulary.json"
TOPIC_MODEL_FILE = "topic_model.json"
CLASSIFIER_FILE = "classifier.json"


@dataclass(frozen=True)
class LinearModel:
    """One-vs-rest linear model: one weight row and bias per label."""

    labels: tuple[str, ...]
    weights: np.ndarray  # (n_labels, n_features)
    bias: np.ndarray  # (n_labels,)
    lam: float
    epochs: int
    seed: int

    def __post_init__(self):
        if self.weights.shape[0] != len(self.labels) or self.bias.shape[0] != len(self.labels):
            raise ValidationError("one weight row and bias per label required")
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValidationError("model parameters must be finite")

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[1])

    def margins(self, vec: SparseVector) -> np.ndarray:
        """Per-label margin w_c . x + b_c."""
        if not vec.indices.size:
            return self.bias.copy()
        return self.weights[:, vec.indices] @ vec.values + self.bias


@dataclass(frozen=True)
class DomainDistribution:
    """Probability vector over the domain labels."""

    labels: tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self):
        if len(self.labels) != self.probs.shape[0]:
            raise ValidationError("probs must align with labels")
        if np.any(self.probs < 0) or abs(float(self.probs.sum()) - 1.0) > 1e-6:
            raise ValidationError("probs must be a probability distribution")

    def top_label(self) -> str:
        # labels are sorted, and argmax takes the first maximum, so ties
        # resolve to the lexicographically smallest label
        return self.labels[int(np.argmax(self.probs))]

    def top_prob(self) -> float:
        return float(np.max(self.probs))


def dense_to_sparse(row: np.ndarray) -> SparseVector:
    row = np.asarray(row, dtype=np.float64)
    return SparseVector(np.arange(row.shape[0], dtype=np.int64), row)


def train_ovr_svm(
    vectors: list[SparseVector],
    labels: list[str],
    n_features: int,
    lam: float = 1e-4,
    epochs: int = 20,
    seed: int = 0,
) -> LinearModel:
    """Train one binary hinge-loss SVM per label with deterministic SGD.

    The weight vector is kept as scale * direction so the per-step
    shrink (1 - 1/t) costs O(1); the bias term is left unregularized.
    """
    if len(vectors) != len(labels):
        raise ValidationError("vectors and labels must have equal length")
    if lam <= 0:
        raise ValidationError(f"lambda must be positive, got {lam}")
    if epochs < 1:
        raise ValidationError(f"epochs must be >= 1, got {epochs}")
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise ValidationError("training requires at least 2 distinct labels")

    n = len(vectors)
    rng = np.random.default_rng(seed)
    perms = [rng.permutation(n) for _ in range(epochs)]

    weights = np.zeros((len(classes), n_features), dtype=np.float64)
    bias = np.zeros(len(classes), dtype=np.float64)
    targets = np.asarray(labels, dtype=object)

    for ci, cls in enumerate(classes):
        y = np.where(targets == cls, 1.0, -1.0)
        v = np.zeros(n_features, dtype=np.float64)
        scale = 1.0
        b = 0.0
        t = 0
        for perm in perms:
            for i in perm:
                t += 1
                vec = vectors[i]
                margin = scale * float(v[vec.indices] @ vec.values) + b
                eta = 1.0 / (lam * t)
                if t > 1:
                    scale *= 1.0 - 1.0 / t
                    if scale < 1e-9:
                        v *= scale
                        scale = 1.0
                if y[i] * margin < 1.0:
                    v[vec.indices] += (eta * y[i] / scale) * vec.values
                    b += eta * y[i]
        weights[ci] = scale * v
        bias[ci] = b

    return LinearModel(
        labels=tuple(classes),
        weights=weights,
        bias=bias,
        lam=lam,
        epochs=epochs,
        seed=seed,
    )


def softmax(margins: np.ndarray) -> np.ndarray:
    shifted = margins - np.max(margins)
    exp = np.exp(shifted)
    return exp / exp.sum()


def margins_to_distribution(margins: np.ndarray, labels: tuple[str, ...]) -> DomainDistribution:
    """Map margins to probabilities via max-subtracted softmax."""
    margins = np.asarray(margins, dtype=np.float64)
    if not np.all(np.isfinite(margins)):
        raise ValidationError("margins must be finite")
    return DomainDistribution(labels=tuple(labels), probs=softmax(margins))


@dataclass(frozen=True)
class DomainClassifier:
    """Both trained models plus the shared feature-space artifacts."""

    bow_model: LinearModel
    topic_model_clf: LinearModel
    vocab: Vocabulary
    topic_model: TopicModel
    labels: tuple[str, ...]
    infer_iters: int = 50

    def __post_init__(self):
        if not (self.bow_model.labels == self.topic_model_clf.labels == self.labels):
            raise ValidationError("both models must share the same label list")


def train_domain_classifier(
    news: list[NewsArticle],
    min_df: int = 2,
    max_df_ratio: float = 0.5,
    n_topics: int = 50,
    alpha: float = 1.0,
    beta: float = 0.01,
    train_iters: int = 200,
    infer_iters: int = 50,
    svm_lambda: float = 1e-4,
    epochs: int = 20,
    seed: int = 42,
) -> DomainClassifier:
    """Train the full classifier from a labeled news corpus."""
    if not news:
        raise ValidationError("cannot train on an empty news corpus")
    categories = [article.category for article in news]
    if len(set(categories)) < 2:
        raise ValidationError("training requires at least 2 categories")

    token_lists = [tokenize(article.text) for article in news]
    vocab = build_vocabulary(token_lists, min_df=min_df, max_df_ratio=max_df_ratio)
    if not len(vocab):
        raise ValidationError("vocabulary is empty after frequency filtering")

    bow_vectors = [tfidf_vector(tokens, vocab) for tokens in token_lists]
    topic_model = fit_topic_model(
        token_lists, vocab, k=n_topics, alpha=alpha, beta=beta, iters=train_iters, seed=seed
    )
    theta_vectors = [
        dense_to_sparse(infer_topics(tokens, topic_model, vocab, iters=infer_iters, seed=seed).theta)
        for tokens in token_lists
    ]

    bow_model = train_ovr_svm(
        bow_vectors, categories, n_features=len(vocab), lam=svm_lambda, epochs=epochs, seed=seed
    )
    topic_clf = train_ovr_svm(
        theta_vectors, categories, n_features=n_topics, lam=svm_lambda, epochs=epochs, seed=seed
    )
    return DomainClassifier(
        bow_model=bow_model,
        topic_model_clf=topic_clf,
        vocab=vocab,
        topic_model=topic_model,
        labels=bow_model.labels,
        infer_iters=infer_iters,
    )


def classify_text(
    tokens: list[str], clf: DomainClassifier, seed: int = 0
) -> DomainDistribution:
    """Average of the two per-model softmax distributions."""
    bow_vec = tfidf_vector(tokens, clf.vocab)
    theta = infer_topics(tokens, clf.topic_model, clf.vocab, iters=clf.infer_iters, seed=seed)
    bow_probs = margins_to_distribution(clf.bow_model.margins(bow_vec), clf.labels).probs
    topic_probs = margins_to_distribution(
        clf.topic_model_clf.margins(dense_to_sparse(theta.theta)), clf.labels
    ).probs
    return DomainDistribution(labels=clf.labels, probs=0.5 * bow_probs + 0.5 * topic_probs)


def _linear_model_to_json(model: LinearModel) -> dict:
    return {
        "labels": list(model.labels),
        "n_features": model.n_features,
        "weights": model.weights.reshape(-1).tolist(),
        "bias": model.bias.tolist(),
        "lambda": model.lam,
        "epochs": model.epochs,
        "seed": model.seed,
    }


def _linear_model_from_json(payload: dict) -> LinearModel:
    labels = tuple(payload["labels"])
    n_features = int(payload["n_features"])
    weights = np.asarray(payload["weights"], dtype=np.float64).reshape(len(labels), n_features)
    return LinearModel(
        labels=labels,
        weights=weights,
        bias=np.asarray(payload["bias"], dtype=np.float64),
        lam=float(payload["lambda"]),
        epochs=int(payload["epochs"]),
        seed=int(payload["seed"]),
    )


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, ensure_ascii=False, separators=(",", ":"))
        handle.write("\n")


def save_classifier(clf: DomainClassifier, model_dir) -> None:
    """Persist the classifier bundle as three JSON artifacts."""
    os.makedirs(model_dir, exist_ok=True)
    _write_json(os.path.join(model_dir, VOCABULARY_FILE), vocabulary_to_json(clf.vocab))
    _write_json(os.path.join(model_dir, TOPIC_MODEL_FILE), topic_model_to_json(clf.topic_model))
    _write_json(
        os.path.join(model_dir, CLASSIFIER_FILE),
        {
            "format_version": CLASSIFIER_FORMAT_VERSION,
            "labels": list(clf.labels),
            "vocabulary_file": VOCABULARY_FILE,
            "topic_model_file": TOPIC_MODEL_FILE,
            "infer_iters": clf.infer_iters,
            "bow_model": _linear_model_to_json(clf.bow_model),
            "topic_model_clf": _linear_model_to_json(clf.topic_model_clf),
        },
    )


def load_classifier(model_dir) -> DomainClassifier:
    """Load a classifier bundle written by :func:`save_classifier`."""
    clf_path = os.path.join(model_dir, CLASSIFIER_FILE)
    with open(clf_path, encoding="utf-8") as handle:
        payload = json.load(handle)
    if payload.get("format_version") != CLASSIFIER_FORMAT_VERSION:
        raise ParseError(clf_path, 1, "unsupported classifier format_version")

    vocab_path = os.path.join(model_dir, payload["vocabulary_file"])
    with open(vocab_path, encoding="utf-8") as handle:
        vocab = vocabulary_from_json(json.load(handle), path=vocab_path)
    topic_path = os.path.join(model_dir, payload["topic_model_file"])
    with open(topic_path, encoding="utf-8") as handle:
        topic_model = topic_model_from_json(json.load(handle), path=topic_path)

    return DomainClassifier(
        bow_model=_linear_model_from_json(payload["bow_model"]),
        topic_model_clf=_linear_model_from_json(payload["topic_model_clf"]),
        vocab=vocab,
        topic_model=topic_model,
        labels=tuple(payload["labels"]),
        infer_iters=int(payload.get("infer_iters", 50)),
    )
