"""Latent topic features via collapsed Gibbs sampling.

The sampler is deliberately boring: a single sequential sweep order
(documents in order, token positions in order) driven by one PCG64
stream, so that a fixed seed reproduces bit-identical models. All
randomness is drawn up front per sweep (one uniform per token); the
numba kernel only consumes it.

PRNG contract: ``numpy.random.default_rng(seed)`` (PCG64). The fit draws
one ``integers(0, k, n_tokens)`` block for the initial assignments, then
``random(n_tokens)`` once per sweep. Inference follows the same pattern
with the topic-word matrix frozen.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ParseError, ValidationError
from .features import Vocabulary

TOPIC_MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TopicModel:
    """Fitted topic model: per-topic word distributions plus hyperparameters."""

    n_topics: int
    phi: np.ndarray  # (K, V), rows sum to 1
    alpha: float
    beta: float
    seed: int

    def __post_init__(self):
        if self.n_topics < 2:
            raise ValidationError("a topic model needs at least 2 topics")
        if self.phi.shape[0] != self.n_topics:
            raise ValidationError("phi row count must equal n_topics")
        row_sums = self.phi.sum(axis=1)
        if np.any(self.phi < 0) or np.any(np.abs(row_sums - 1.0) > 1e-6):
            raise ValidationError("each phi row must be a probability distribution")


@dataclass(frozen=True)
class TopicDistribution:
    """Per-document topic proportions (theta)."""

    theta: np.ndarray

    def __post_init__(self):
        if np.any(self.theta < 0) or abs(float(self.theta.sum()) - 1.0) > 1e-6:
            raise ValidationError("theta must be a probability distribution")


@njit(cache=True, nogil=True)
def _fit_sweep(words, doc_ids, z, nwk, ndk, nk, alpha, beta, v_beta, uniforms, cum):
    n_topics = nk.shape[0]
    for i in range(words.shape[0]):
        w = words[i]
        d = doc_ids[i]
        zi = z[i]
        nwk[w, zi] -= 1
        ndk[d, zi] -= 1
        nk[zi] -= 1
        total = 0.0
        for k in range(n_topics):
            total += (nwk[w, k] + beta) * (ndk[d, k] + alpha) / (nk[k] + v_beta)
            cum[k] = total
        target = uniforms[i] * total
        zi = 0
        while zi < n_topics - 1 and cum[zi] <= target:
            zi += 1
        z[i] = zi
        nwk[w, zi] += 1
        ndk[d, zi] += 1
        nk[zi] += 1


@njit(cache=True, nogil=True)
def _infer_sweep(words, z, phi_t, nd, alpha, uniforms, cum):
    n_topics = nd.shape[0]
    for i in range(words.shape[0]):
        w = words[i]
        nd[z[i]] -= 1
        total = 0.0
        for k in range(n_topics):
            total += phi_t[w, k] * (nd[k] + alpha)
            cum[k] = total
        target = uniforms[i] * total
        zi = 0
        while zi < n_topics - 1 and cum[zi] <= target:
            zi += 1
        z[i] = zi
        nd[zi] += 1


def _flatten(docs: list[list[str]], vocab: Vocabulary):
    """Map docs to flat (word_id, doc_id) arrays, dropping OOV tokens."""
    lookup = vocab.term_to_index
    words: list[int] = []
    doc_ids: list[int] = []
    for d, tokens in enumerate(docs):
        for token in tokens:
            idx = lookup.get(token)
            if idx is not None:
                words.append(idx)
                doc_ids.append(d)
    return (
        np.asarray(words, dtype=np.int64),
        np.asarray(doc_ids, dtype=np.int64),
    )


def fit_topic_model(
    docs: list[list[str]],
    vocab: Vocabulary,
    k: int = 50,
    alpha: float = 1.0,
    beta: float = 0.01,
    iters: int = 200,
    seed: int = 0,
) -> TopicModel:
    """Fit topic-word distributions by collapsed Gibbs sampling.

    Runs ``iters`` full sweeps over all in-vocabulary tokens and estimates
    phi from the final counts with beta smoothing:

        phi[k, v] = (n_kv + beta) / (n_k + V * beta)
    """
    if k < 2:
        raise ValidationError(f"k must be >= 2, got {k}")
    if iters < 1:
        raise ValidationError(f"iters must be >= 1, got {iters}")
    if alpha <= 0 or beta <= 0:
        raise ValidationError("alpha and beta must be positive")
    if not docs:
        raise ValidationError("cannot fit a topic model on an empty document list")

    words, doc_ids = _flatten(docs, vocab)
    if not words.size:
        raise ValidationError("all documents are empty after vocabulary filtering")

    n_terms = len(vocab)
    rng = np.random.default_rng(seed)
    z = rng.integers(0, k, size=words.size, dtype=np.int64)

    nwk = np.zeros((n_terms, k), dtype=np.int64)
    ndk = np.zeros((len(docs), k), dtype=np.int64)
    nk = np.zeros(k, dtype=np.int64)
    np.add.at(nwk, (words, z), 1)
    np.add.at(ndk, (doc_ids, z), 1)
    np.add.at(nk, z, 1)

    cum = np.empty(k, dtype=np.float64)
    v_beta = n_terms * beta
    for _ in range(iters):
        uniforms = rng.random(words.size)
        _fit_sweep(words, doc_ids, z, nwk, ndk, nk, alpha, beta, v_beta, uniforms, cum)

    phi = (nwk.T + beta) / (nk[:, None] + v_beta)
    return TopicModel(n_topics=k, phi=phi, alpha=alpha, beta=beta, seed=seed)


def infer_topics(
    tokens: list[str],
    model: TopicModel,
    vocab: Vocabulary,
    iters: int = 50,
    seed: int = 0,
) -> TopicDistribution:
    """Infer a topic distribution for one document by folding-in.

    The topic-word matrix stays frozen; only the document's topic counts
    are resampled. An empty or fully out-of-vocabulary document yields
    the uniform distribution.
    """
    if iters < 1:
        raise ValidationError(f"iters must be >= 1, got {iters}")
    k = model.n_topics
    lookup = vocab.term_to_index
    ids = [lookup[t] for t in tokens if t in lookup]
    if not ids:
        return TopicDistribution(theta=np.full(k, 1.0 / k))

    words = np.asarray(ids, dtype=np.int64)
    rng = np.random.default_rng(seed)
    z = rng.integers(0, k, size=words.size, dtype=np.int64)
    nd = np.bincount(z, minlength=k).astype(np.int64)

    phi_t = np.ascontiguousarray(model.phi.T)
    cum = np.empty(k, dtype=np.float64)
    for _ in range(iters):
        uniforms = rng.random(words.size)
        _infer_sweep(words, z, phi_t, nd, model.alpha, uniforms, cum)

    theta = (nd + model.alpha) / (words.size + k * model.alpha)
    return TopicDistribution(theta=theta)


def topic_model_to_json(model: TopicModel) -> dict:
    k, v = model.phi.shape
    return {
        "format_version": TOPIC_MODEL_FORMAT_VERSION,
        "n_topics": k,
        "n_terms": v,
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.seed,
        "phi": model.phi.reshape(-1).tolist(),
    }


def topic_model_from_json(payload: dict, path="<topic model>") -> TopicModel:
    if payload.get("format_version") != TOPIC_MODEL_FORMAT_VERSION:
        raise ParseError(path, 1, "unsupported topic model format_version")
    k = int(payload["n_topics"])
    v = int(payload["n_terms"])
    phi = np.asarray(payload["phi"], dtype=np.float64).reshape(k, v)
    return TopicModel(
        n_topics=k,
        phi=phi,
        alpha=float(payload["alpha"]),
        beta=float(payload["beta"]),
        seed=int(payload["seed"]),
    )
